# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

import argparse
from pathlib import Path
import typing

from ..parser import serialize_kb
from ..pipeline import load_kb
from ._outcome import CommandOutcome, ExitCode, emit, guarded


def configure_parser(parser: argparse.ArgumentParser) -> None:
    parser.description = "Validate a knowledge base and print it in normal form"
    parser.add_argument("--kb", type=Path, required=True, help="the .lnn file to read")


def cmd_parse(path: Path) -> CommandOutcome:
    return guarded(lambda: CommandOutcome(ExitCode.OK, serialize_kb(load_kb(path))))


def handler(args: typing.Any) -> int:
    path: Path = args.kb
    return emit(cmd_parse(path))
