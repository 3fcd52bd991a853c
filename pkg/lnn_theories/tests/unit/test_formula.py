# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

import pytest

from lnn_theories.errors import SubstitutionError
from lnn_theories.formula import (
    And,
    Atom,
    Constant,
    Exists,
    ForAll,
    FunctionApp,
    Implies,
    Not,
    Or,
    Variable,
    all_variables,
    conjunction,
    count_function_apps,
    eq,
    forall,
    free_variables,
    has_quantifier,
    is_function_free,
    substitute,
    weights_of,
)

x, y = Variable("x"), Variable("y")
c = Constant("c")


def test_eq() -> None:
    atom = eq(x, c)
    assert atom == Atom("=", (x, c))
    assert atom.is_equality


@pytest.mark.parametrize(
    "factory, kwargs", [
        (And, dict(children=(Atom("p"),))),
        (Or, dict(children=())),
        (And, dict(children=(Atom("p"), Atom("q")), weights=(1.0,))),
        (Or, dict(children=(Atom("p"), Atom("q")), weights=(1.0, -0.5))),
        (Or, dict(children=(Atom("p"), Atom("q")), weights=(float("nan"), 1.0))),
        (Implies, dict(lhs=Atom("p"), rhs=Atom("q"), weights=(1.0, float("inf")))),
        (And, dict(children=(Atom("p"), Atom("q")), bias=-1.0)),
        (And, dict(children=(Atom("p"), Atom("q")), bias=float("inf"))),
    ],
)
def test_weighted__invalid(factory: type, kwargs: dict[str, object]) -> None:
    with pytest.raises(ValueError):
        factory(**kwargs)


def test_weights_of__defaults_to_unit() -> None:
    assert weights_of(Implies(Atom("p"), Atom("q"))) == (1.0, 1.0)
    assert weights_of(And((Atom("p"), Atom("q"), Atom("r")), (0.5, 2.0, 1.0))) == (0.5, 2.0, 1.0)


def test_conjunction() -> None:
    assert conjunction([Atom("p")]) == Atom("p")
    assert conjunction([Atom("p"), Atom("q")]) == And((Atom("p"), Atom("q")))


def test_forall__nests_in_order() -> None:
    body = Atom("R", (x, y))
    assert forall(["x", "y"], body) == ForAll("x", ForAll("y", body))


def test_free_variables() -> None:
    formula = ForAll("x", And((Atom("P", (x,)), Atom("Q", (FunctionApp("f", (y,)),)))))
    assert free_variables(formula) == {"y"}
    assert all_variables(formula) == {"x", "y"}


def test_count_function_apps() -> None:
    formula = Atom("P", (FunctionApp("f", (FunctionApp("g", (c,)),)), x))
    assert count_function_apps(formula) == 2
    assert not is_function_free(formula)
    assert is_function_free(Atom("P", (c, x)))


def test_has_quantifier() -> None:
    assert has_quantifier(Not(Exists("x", Atom("P", (x,)))))
    assert not has_quantifier(Implies(Atom("p"), Atom("q")))


def test_substitute() -> None:
    formula = And((Atom("P", (x,)), ForAll("x", Atom("Q", (x, y)))))
    result = substitute(formula, "x", c)
    # The bound occurrence is left alone.
    assert result == And((Atom("P", (c,)), ForAll("x", Atom("Q", (x, y)))))


def test_substitute__keeps_weights() -> None:
    formula = Implies(Atom("P", (x,)), Atom("Q", (x, x)), (0.5, 2.0), 0.75)
    result = substitute(formula, "x", c)
    assert result == Implies(Atom("P", (c,)), Atom("Q", (c, c)), (0.5, 2.0), 0.75)


def test_substitute__capture() -> None:
    formula = Exists("y", Atom("Q", (x, y)))
    with pytest.raises(SubstitutionError, match=r"\(exists y \.\.\.\)"):
        substitute(formula, "x", FunctionApp("f", (y,)))


def test_substitute__capture_not_applicable_when_var_absent() -> None:
    formula = Exists("y", Atom("Q", (c, y)))
    assert substitute(formula, "x", y) == formula
