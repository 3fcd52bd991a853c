# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

import itertools
import typing

import numpy as np
import pytest

from lnn_theories import activations
from lnn_theories.autodiff import Dual
from lnn_theories.bounds import TruthBounds

GRID = [round(v, 1) for v in np.linspace(0.0, 1.0, 11)]
UNIT = (1.0, 1.0)


def point(value: float) -> TruthBounds:
    return TruthBounds(value, value)


@pytest.mark.parametrize("p, q", itertools.product(GRID, GRID))
def test_lukasiewicz_identities(p: float, q: float) -> None:
    conj = activations.upward_and([point(p), point(q)], UNIT, 1.0)
    disj = activations.upward_or([point(p), point(q)], UNIT, 1.0)
    impl = activations.upward_implies(point(p), point(q), UNIT, 1.0)
    for bounds, expected in [
        (conj, max(0.0, p + q - 1)),
        (disj, min(1.0, p + q)),
        (impl, min(1.0, 1 - p + q)),
    ]:
        assert bounds.lower == pytest.approx(expected, abs=1e-12)
        assert bounds.upper == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("p, q", itertools.product(GRID, GRID))
def test_de_morgan(p: float, q: float) -> None:
    disj = activations.upward_or([point(p), point(q)], UNIT, 1.0)
    dual = activations.upward_not(
        activations.upward_and([point(1 - p), point(1 - q)], UNIT, 1.0),
    )
    assert disj.lower == pytest.approx(dual.lower, abs=1e-12)
    assert disj.upper == pytest.approx(dual.upper, abs=1e-12)

    impl = activations.upward_implies(point(p), point(q), UNIT, 1.0)
    via_or = activations.upward_or([activations.upward_not(point(p)), point(q)], UNIT, 1.0)
    assert impl.lower == pytest.approx(via_or.lower, abs=1e-12)


@pytest.mark.parametrize("p, q", itertools.product([False, True], [False, True]))
def test_classical_truth_tables(p: bool, q: bool) -> None:
    bp, bq = point(float(p)), point(float(q))
    assert activations.upward_and([bp, bq], UNIT, 1.0) == point(float(p and q))
    assert activations.upward_or([bp, bq], UNIT, 1.0) == point(float(p or q))
    assert activations.upward_implies(bp, bq, UNIT, 1.0) == point(float(not p or q))
    assert activations.upward_not(bp) == point(float(not p))


@pytest.mark.parametrize(
    "p, q, expected", [
        (point(0.7), point(0.6), (0.3, 0.3)),
        (point(0.4), point(1.0), (0.4, 0.4)),
        (point(0.2), point(0.3), (0.0, 0.0)),
        (TruthBounds(0.5, 0.9), TruthBounds(0.8, 1.0), (0.3, 0.9)),
    ],
)
def test_upward_and(p: TruthBounds, q: TruthBounds, expected: tuple[float, float]) -> None:
    assert activations.upward_and([p, q], UNIT, 1.0) == pytest.approx(expected)


def test_upward_and__weighted() -> None:
    # 0.8 - (0.5 * 0.4 + 2 * 0.1) = 0.4
    result = activations.upward_and([point(0.6), point(0.9)], (0.5, 2.0), 0.8)
    assert result == pytest.approx((0.4, 0.4))


@pytest.mark.parametrize(
    "p, q, expected", [
        (point(0.7), point(0.6), (1.0, 1.0)),
        (point(0.3), point(0.0), (0.3, 0.3)),
    ],
)
def test_upward_or(p: TruthBounds, q: TruthBounds, expected: tuple[float, float]) -> None:
    assert activations.upward_or([p, q], UNIT, 1.0) == pytest.approx(expected)


@pytest.mark.parametrize(
    "p, q, expected", [
        (point(1.0), point(0.0), (0.0, 0.0)),
        (point(0.7), point(0.6), (0.9, 0.9)),
        (point(0.0), point(0.35), (1.0, 1.0)),
        # Antecedent bounds swap roles.
        (TruthBounds(0.2, 0.6), TruthBounds(0.3, 0.5), (0.7, 1.0)),
    ],
)
def test_upward_implies(p: TruthBounds, q: TruthBounds, expected: tuple[float, float]) -> None:
    assert activations.upward_implies(p, q, UNIT, 1.0) == pytest.approx(expected)


def test_upward_not() -> None:
    assert activations.upward_not(point(0.0)) == point(1.0)
    assert activations.upward_not(TruthBounds(0.3, 0.8)) == pytest.approx((0.2, 0.7))
    bounds = TruthBounds(0.25, 0.5)
    assert activations.upward_not(activations.upward_not(bounds)) == bounds


def test_upward_quantifiers() -> None:
    grounded = [TruthBounds(1.0, 1.0), TruthBounds(0.4, 0.9)]
    assert activations.upward_forall(grounded) == (0.4, 0.9)
    assert activations.upward_exists(grounded) == (1.0, 1.0)
    assert activations.upward_exists([point(0.0), point(0.0)]) == (0.0, 0.0)
    single = [TruthBounds(0.2, 0.7)]
    assert activations.upward_forall(single) == activations.upward_exists(single) == single[0]


def test_downward_implies__modus_ponens() -> None:
    lhs, rhs = activations.downward_implies(
        TruthBounds.true(), TruthBounds.true(), TruthBounds.unknown(), UNIT, 1.0,
    )
    assert rhs[0] == pytest.approx(1.0)
    assert lhs[0] is None


def test_downward_implies__modus_tollens() -> None:
    lhs, _ = activations.downward_implies(
        TruthBounds.true(), TruthBounds.unknown(), TruthBounds.false(), UNIT, 1.0,
    )
    assert lhs[1] == pytest.approx(0.0)


def test_downward_and__true_conjunction() -> None:
    candidates = activations.downward_and(
        TruthBounds.true(), [TruthBounds.unknown(), TruthBounds.unknown()], UNIT, 1.0,
    )
    assert [lower for lower, _ in candidates] == pytest.approx([1.0, 1.0])


def test_downward_or__false_disjunction() -> None:
    candidates = activations.downward_or(
        TruthBounds.false(), [TruthBounds.unknown(), TruthBounds.unknown()], UNIT, 1.0,
    )
    assert [upper for _, upper in candidates] == pytest.approx([0.0, 0.0])


@pytest.mark.parametrize(
    "downward", [
        lambda node, inputs: activations.downward_and(node, inputs, UNIT, 1.0),
        lambda node, inputs: activations.downward_or(node, inputs, UNIT, 1.0),
        lambda node, inputs: activations.downward_implies(node, inputs[0], inputs[1], UNIT, 1.0),
    ],
)
def test_downward__vacuous_node(
    downward: typing.Callable[[TruthBounds, list[TruthBounds]], list[activations.Candidate]],
) -> None:
    inputs = [TruthBounds(0.2, 0.9), TruthBounds(0.1, 0.3)]
    for lower, upper in downward(TruthBounds.unknown(), inputs):
        assert lower is None or activations.clamp(lower) <= 0.0
        assert upper is None or activations.clamp(upper) >= 1.0


def test_downward_and__zero_weight() -> None:
    candidates = activations.downward_and(
        TruthBounds.true(), [TruthBounds.unknown(), TruthBounds.unknown()], (0.0, 1.0), 1.0,
    )
    assert candidates[0] == (None, None)


def test_downward_pass_through() -> None:
    node = TruthBounds(0.3, 0.8)
    assert activations.downward_not(node) == pytest.approx((0.2, 0.7))
    assert activations.downward_forall(node) == (0.3, None)
    assert activations.downward_exists(node) == (None, 0.8)


def _tightened(bounds: TruthBounds, candidate: activations.Candidate) -> tuple[float, float]:
    lower, upper = bounds
    if candidate[0] is not None:
        lower = max(lower, float(activations.clamp(candidate[0])))
    if candidate[1] is not None:
        upper = min(upper, float(activations.clamp(candidate[1])))
    return lower, upper


def _random_bounds(rng: np.random.Generator) -> TruthBounds:
    lower, upper = sorted(rng.uniform(0.0, 1.0, size=2))
    return TruthBounds(float(lower), float(upper))


@pytest.mark.parametrize("kind", ["and", "or", "implies"])
def test_downward__sound(kind: str) -> None:
    # Every assignment of the operands consistent with the node's bounds must survive
    # the tightening.
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = 2 if kind == "implies" else int(rng.integers(2, 4))
        weights = tuple(float(w) for w in rng.uniform(0.5, 2.0, size=n))
        bias = float(rng.uniform(0.5, 1.5))
        inputs = [_random_bounds(rng) for _ in range(n)]
        node = _random_bounds(rng)
        if kind == "and":
            candidates = activations.downward_and(node, inputs, weights, bias)
        elif kind == "or":
            candidates = activations.downward_or(node, inputs, weights, bias)
        else:
            candidates = activations.downward_implies(node, inputs[0], inputs[1], weights, bias)
        tightened = [_tightened(b, cand) for b, cand in zip(inputs, candidates)]

        for _ in range(50):
            values = [float(rng.uniform(b.lower, b.upper)) for b in inputs]
            points = [point(v) for v in values]
            if kind == "and":
                y = activations.upward_and(points, weights, bias).lower
            elif kind == "or":
                y = activations.upward_or(points, weights, bias).lower
            else:
                y = activations.upward_implies(points[0], points[1], weights, bias).lower
            if not node.lower <= y <= node.upper:
                continue
            for value, (lower, upper) in zip(values, tightened):
                assert lower - 1e-9 <= value <= upper + 1e-9


def test_clamp__keeps_gradient_at_the_boundary() -> None:
    one = Dual.parameter(1.0, 0, 2)
    assert activations.clamp(one) is one
    zero = Dual.parameter(0.0, 1, 2)
    assert activations.clamp(zero) is zero
    assert activations.clamp(1.5) == 1.0
    assert activations.clamp(-0.5) == 0.0
