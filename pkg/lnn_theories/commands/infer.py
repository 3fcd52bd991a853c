# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

import argparse
import os
from pathlib import Path
import typing

from ..bounds import DEFAULT_ALPHA
from ..errors import ConfigurationError
from ..graph import format_graph
from ..inference import InferenceConfig, infer
from ..pipeline import build_graph, load_kb
from ._outcome import CommandOutcome, ExitCode, emit, guarded

ALPHA_ENV_VAR = "LNN_ALPHA"


def configure_parser(parser: argparse.ArgumentParser) -> None:
    parser.description = "Run inference and print the state of every query"

    parser.add_argument("--kb", type=Path, required=True, help="the .lnn file to read")
    parser.add_argument(
        "--alpha", type=float, default=None,
        help=f"threshold of truth (default: ${ALPHA_ENV_VAR}, else {DEFAULT_ALPHA})",
    )
    parser.add_argument("--max-passes", type=int, default=100)
    parser.add_argument("--tol", type=float, default=1e-6)
    parser.add_argument("--dump-graph", action="store_true")


def resolve_alpha(
    flag: float | None,
    environ: typing.Mapping[str, str] = os.environ,
) -> float:
    if flag is not None:
        return flag
    value = environ.get(ALPHA_ENV_VAR)
    if value is None:
        return DEFAULT_ALPHA
    try:
        return float(value)
    except ValueError:
        raise ConfigurationError(f"{ALPHA_ENV_VAR}={value!r} is not a number") from None


def cmd_infer(
    path: Path,
    config: InferenceConfig = InferenceConfig(),
    *,
    dump_graph: bool = False,
) -> CommandOutcome:
    def run() -> CommandOutcome:
        kb = load_kb(path)
        graph = build_graph(kb)
        report = infer(graph, config)
        lines = []
        for query in kb.queries:
            state, bounds = report.states[query.name]
            lines.append(f"{query.name} {state.value} {bounds.lower:.4f} {bounds.upper:.4f}\n")
        stdout = "".join(lines)
        if dump_graph:
            stdout += format_graph(graph)
        exit_code = ExitCode.CONTRADICTION if report.contradictions else ExitCode.OK
        return CommandOutcome(exit_code, stdout)
    return guarded(run)


def handler(args: typing.Any) -> int:
    path: Path = args.kb

    def configured() -> CommandOutcome:
        config = InferenceConfig(
            alpha=resolve_alpha(args.alpha),
            max_passes=args.max_passes,
            tolerance=args.tol,
        )
        return cmd_infer(path, config, dump_graph=args.dump_graph)
    return emit(guarded(configured))
