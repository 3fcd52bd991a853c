# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

from __future__ import annotations

import enum
import typing

from .errors import ConfigurationError

#: Bound crossings smaller than this are rounding noise, not contradictions.
CONTRADICTION_TOLERANCE = 1e-9

DEFAULT_ALPHA = 0.75


class TruthBounds(typing.NamedTuple):
    """
    The ``[lower, upper]`` interval a neuron maintains over its truth value.

    A lower bound above the upper bound is a representable state (a contradiction),
    so construction never rejects it. Use :meth:`checked` for values coming from
    outside the engine, which must lie within ``[0, 1]``.
    """
    lower: float
    upper: float

    @classmethod
    def checked(cls, lower: float, upper: float) -> TruthBounds:
        for value in (lower, upper):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Truth bound {value} is outside [0, 1]")
        return cls(lower, upper)

    @classmethod
    def true(cls) -> TruthBounds:
        return cls(1.0, 1.0)

    @classmethod
    def false(cls) -> TruthBounds:
        return cls(0.0, 0.0)

    @classmethod
    def unknown(cls) -> TruthBounds:
        return cls(0.0, 1.0)

    def intersect(self, other: TruthBounds) -> TruthBounds:
        return TruthBounds(max(self.lower, other.lower), min(self.upper, other.upper))

    def is_contradiction(self, tolerance: float = CONTRADICTION_TOLERANCE) -> bool:
        return self.lower > self.upper + tolerance


class PrimaryState(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"
    CONTRADICTION = "CONTRADICTION"


def validate_alpha(alpha: float) -> float:
    if not 0.5 < alpha <= 1.0:
        raise ConfigurationError(f"alpha must satisfy 1/2 < alpha <= 1, got {alpha}")
    return alpha


def classify_state(
    bounds: TruthBounds,
    alpha: float = DEFAULT_ALPHA,
    *,
    tolerance: float = CONTRADICTION_TOLERANCE,
) -> PrimaryState:
    validate_alpha(alpha)
    lower, upper = float(bounds.lower), float(bounds.upper)
    if lower > upper + tolerance:
        return PrimaryState.CONTRADICTION
    if lower >= alpha:
        return PrimaryState.TRUE
    if upper <= 1.0 - alpha:
        return PrimaryState.FALSE
    return PrimaryState.UNKNOWN
