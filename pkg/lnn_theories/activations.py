# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Weighted Łukasiewicz activations over truth-bound intervals.

Upward functions compute a connective's bounds from its operands' bounds.
Downward functions compute, from a connective's bounds and its operands' current
bounds, the tightest bounds each operand can have; the caller intersects them
with what the operand already knows.

Every function is generic in its scalar type: floats for plain inference,
:class:`~lnn_theories.autodiff.Dual` values when gradients are needed.
"""

from __future__ import annotations

import typing

from .autodiff import Scalar
from .bounds import TruthBounds

#: A candidate bound for one operand; ``None`` means "no information".
Candidate = tuple[Scalar | None, Scalar | None]


def clamp(value: Scalar) -> Scalar:
    # At exactly 0 or 1 the argument itself is returned, so a dual keeps its gradient.
    return max(min(value, 1.0), 0.0)


def complement(bounds: TruthBounds) -> TruthBounds:
    return TruthBounds(1.0 - bounds.upper, 1.0 - bounds.lower)


def _complement_candidate(candidate: Candidate) -> Candidate:
    lower, upper = candidate
    return (
        None if upper is None else 1.0 - upper,
        None if lower is None else 1.0 - lower,
    )


def upward_and(
    inputs: typing.Sequence[TruthBounds],
    weights: typing.Sequence[Scalar],
    bias: Scalar,
) -> TruthBounds:
    lower = bias - sum(w * (1.0 - x.lower) for w, x in zip(weights, inputs))
    upper = bias - sum(w * (1.0 - x.upper) for w, x in zip(weights, inputs))
    return TruthBounds(clamp(lower), clamp(upper))


def upward_or(
    inputs: typing.Sequence[TruthBounds],
    weights: typing.Sequence[Scalar],
    bias: Scalar,
) -> TruthBounds:
    return complement(upward_and([complement(x) for x in inputs], weights, bias))


def upward_implies(
    lhs: TruthBounds,
    rhs: TruthBounds,
    weights: typing.Sequence[Scalar],
    bias: Scalar,
) -> TruthBounds:
    return upward_or([complement(lhs), rhs], weights, bias)


def upward_not(operand: TruthBounds) -> TruthBounds:
    return complement(operand)


def upward_forall(grounded: typing.Sequence[TruthBounds]) -> TruthBounds:
    return TruthBounds(
        min(bounds.lower for bounds in grounded),
        min(bounds.upper for bounds in grounded),
    )


def upward_exists(grounded: typing.Sequence[TruthBounds]) -> TruthBounds:
    return TruthBounds(
        max(bounds.lower for bounds in grounded),
        max(bounds.upper for bounds in grounded),
    )


def downward_and(
    node: TruthBounds,
    inputs: typing.Sequence[TruthBounds],
    weights: typing.Sequence[Scalar],
    bias: Scalar,
) -> list[Candidate]:
    """
    Invert ``y = clamp(bias - sum w_i (1 - x_i))`` for each operand.

    A lower bound on ``y`` constrains the operands only when it is above 0, and an
    upper bound only when it is below 1; beyond those points the clamp has erased
    the pre-activation.
    """
    candidates: list[Candidate] = []
    for i, (w_i, x_i) in enumerate(zip(weights, inputs)):
        if float(w_i) == 0.0:
            candidates.append((None, None))
            continue
        rest_upper = sum(
            w * (1.0 - x.upper) for j, (w, x) in enumerate(zip(weights, inputs)) if j != i
        )
        rest_lower = sum(
            w * (1.0 - x.lower) for j, (w, x) in enumerate(zip(weights, inputs)) if j != i
        )
        lower = None
        upper = None
        if node.lower > 0.0:
            lower = 1.0 - (bias - node.lower - rest_upper) / w_i
        if node.upper < 1.0:
            upper = 1.0 - (bias - node.upper - rest_lower) / w_i
        candidates.append((lower, upper))
    return candidates


def downward_or(
    node: TruthBounds,
    inputs: typing.Sequence[TruthBounds],
    weights: typing.Sequence[Scalar],
    bias: Scalar,
) -> list[Candidate]:
    candidates = downward_and(complement(node), [complement(x) for x in inputs], weights, bias)
    return [_complement_candidate(candidate) for candidate in candidates]


def downward_implies(
    node: TruthBounds,
    lhs: TruthBounds,
    rhs: TruthBounds,
    weights: typing.Sequence[Scalar],
    bias: Scalar,
) -> list[Candidate]:
    negated_lhs, rhs_candidate = downward_or(node, [complement(lhs), rhs], weights, bias)
    return [_complement_candidate(negated_lhs), rhs_candidate]


def downward_not(node: TruthBounds) -> Candidate:
    return (1.0 - node.upper, 1.0 - node.lower)


def downward_forall(node: TruthBounds) -> Candidate:
    return (node.lower, None)


def downward_exists(node: TruthBounds) -> Candidate:
    return (None, node.upper)
