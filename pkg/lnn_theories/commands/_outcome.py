# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

from __future__ import annotations

import dataclasses
import enum
import logging
import sys
import typing

from ..errors import InvariantViolation, LNNError

LOG = logging.getLogger(__name__)


class ExitCode(enum.IntEnum):
    OK = 0
    ERROR = 1
    CONTRADICTION = 2
    INVARIANT_VIOLATION = 3


@dataclasses.dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    stdout: str = ""
    stderr: str = ""

    @classmethod
    def failure(cls, error: Exception) -> CommandOutcome:
        if isinstance(error, InvariantViolation):
            return cls(ExitCode.INVARIANT_VIOLATION, stderr=f"internal error: {error}\n")
        return cls(ExitCode.ERROR, stderr=f"error: {error}\n")


def guarded(command: typing.Callable[[], CommandOutcome]) -> CommandOutcome:
    """Run a command, turning the failures users can cause into an outcome."""
    try:
        return command()
    except (LNNError, OSError) as error:
        LOG.debug("Command failed", exc_info=error)
        return CommandOutcome.failure(error)


def emit(outcome: CommandOutcome) -> int:
    if outcome.stdout:
        print(outcome.stdout, end="")
    if outcome.stderr:
        print(outcome.stderr, end="", file=sys.stderr)
    return outcome.exit_code
