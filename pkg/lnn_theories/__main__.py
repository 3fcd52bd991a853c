# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

import argparse
import logging
import sys
import typing

from .commands import infer, learn, parse, rewrite
from .commands._outcome import ExitCode


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the same status as any other user error."""

    def error(self, message: str) -> typing.NoReturn:
        self.print_usage(sys.stderr)
        self.exit(ExitCode.ERROR, f"{self.prog}: error: {message}\n")


def configure_parser(parser: argparse.ArgumentParser) -> None:
    parser.description = "Reason over first-order knowledge bases with Logical Neural Networks"

    subcommands = parser.add_subparsers(dest="command", required=True)
    for name, module in (
        ("parse", parse),
        ("rewrite", rewrite),
        ("infer", infer),
        ("learn", learn),
    ):
        subparser = subcommands.add_parser(name)
        module.configure_parser(subparser)
        subparser.set_defaults(handler=module.handler)


def main(argv: typing.Sequence[str] | None = None) -> None:
    logging.basicConfig(level=logging.INFO)
    parser = ArgumentParser(prog="lnn")
    configure_parser(parser)
    args = parser.parse_args(argv)
    sys.exit(args.handler(args))


if __name__ == '__main__':
    main()
