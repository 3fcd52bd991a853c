# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Axioms of the first-order theories understood by the engine.

The equality theory contributes reflexivity, symmetry and transitivity once per
model plus one congruence axiom per predicate. Each eliminated function ``f``
contributes a functional axiom stating that its relation ``R_f`` maps equal inputs
to equal outputs. Generated variables start with ``$`` and every generated axiom is
closed. A user axiom may carry the name of a theory axiom only if it states the
same formula.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import typing

from .errors import TheoryError
from .formula import EQUALITY, And, Atom, Formula, Iff, Implies, Variable, conjunction, eq, forall
from .kb import KnowledgeBase

LOG = logging.getLogger(__name__)


class Origin(enum.Enum):
    EQUALITY_BASE = "equality-base"
    CONGRUENCE = "congruence"
    FUNCTIONAL = "functional"


@dataclasses.dataclass(frozen=True)
class TheoryAxiom:
    name: str
    formula: Formula
    origin: Origin
    #: The predicate (congruence) or relation (functional) the axiom is about.
    symbol: str | None = None


def _var(name: str) -> Variable:
    return Variable(f"${name}")


def generate_equality_base_axioms() -> list[TheoryAxiom]:
    x, y, z = _var("x"), _var("y"), _var("z")
    return [
        TheoryAxiom(
            "eq.reflexivity",
            forall(["$x"], eq(x, x)),
            Origin.EQUALITY_BASE,
        ),
        TheoryAxiom(
            "eq.symmetry",
            forall(["$x", "$y"], Implies(eq(x, y), eq(y, x))),
            Origin.EQUALITY_BASE,
        ),
        TheoryAxiom(
            "eq.transitivity",
            forall(["$x", "$y", "$z"], Implies(And((eq(x, y), eq(y, z))), eq(x, z))),
            Origin.EQUALITY_BASE,
        ),
    ]


def generate_congruence_axiom(predicate: str, arity: int) -> TheoryAxiom | None:
    """
    The substitution-of-equals axiom for ``predicate``, or ``None`` when there is
    nothing to substitute (nullary predicates, and ``=`` itself).
    """
    if arity < 1 or predicate == EQUALITY:
        return None
    xs = [f"$x{i}" for i in range(1, arity + 1)]
    ys = [f"$y{i}" for i in range(1, arity + 1)]
    antecedent = conjunction([eq(Variable(x), Variable(y)) for x, y in zip(xs, ys)])
    consequent = Iff(
        Atom(predicate, tuple(Variable(x) for x in xs)),
        Atom(predicate, tuple(Variable(y) for y in ys)),
    )
    return TheoryAxiom(
        f"eq.congruence.{predicate}",
        forall(xs + ys, Implies(antecedent, consequent)),
        Origin.CONGRUENCE,
        predicate,
    )


def generate_functional_axiom(
    relation: str,
    arity: int,
    *,
    equality_enabled: bool = True,
) -> TheoryAxiom:
    if not equality_enabled:
        raise TheoryError(
            f"the functional axiom of '{relation}' requires the equality theory",
        )
    if arity < 2:
        raise TheoryError(
            f"a functional relation needs arity of at least 2, '{relation}' has {arity}",
        )
    ws = [f"$w{i}" for i in range(1, arity)]
    inputs = tuple(Variable(w) for w in ws)
    x, y = _var("x"), _var("y")
    return TheoryAxiom(
        f"fn.functional.{relation}",
        forall(
            ws + ["$x", "$y"],
            Implies(
                And((Atom(relation, inputs + (x,)), Atom(relation, inputs + (y,)))),
                eq(x, y),
            ),
        ),
        Origin.FUNCTIONAL,
        relation,
    )


def append_axioms(
    axioms: tuple[tuple[str, Formula], ...],
    generated: list[TheoryAxiom],
) -> tuple[tuple[str, Formula], ...]:
    """Add the generated axioms which the axioms do not already state."""
    stated = dict(axioms)
    added = []
    for axiom in generated:
        if not _already_stated(stated, axiom):
            stated[axiom.name] = axiom.formula
            added.append((axiom.name, axiom.formula))
    return axioms + tuple(added)


def _already_stated(stated: typing.Mapping[str, Formula], axiom: TheoryAxiom) -> bool:
    if axiom.name not in stated:
        return False
    if stated[axiom.name] != axiom.formula:
        raise TheoryError(
            f"axiom '{axiom.name}' has the name of a theory axiom but states something else",
        )
    return True


def equality_axioms(kb: KnowledgeBase) -> list[TheoryAxiom]:
    """The base axioms followed by congruence for each predicate, in declaration order."""
    generated = generate_equality_base_axioms()
    for predicate, arity in kb.predicates.items():
        axiom = generate_congruence_axiom(predicate, arity)
        if axiom is not None:
            generated.append(axiom)
    return generated


def add_equality_theory(kb: KnowledgeBase) -> KnowledgeBase:
    """
    Place the equality axioms ahead of the knowledge base's own axioms.

    Axioms the knowledge base already states under the same name are not duplicated,
    so the operation is idempotent. A different formula under a theory axiom's name is
    a :class:`TheoryError`.
    """
    if not kb.has_equality:
        return kb
    generated = equality_axioms(kb)
    stated = dict(kb.axioms)
    theory_axioms = append_axioms((), [
        axiom for axiom in generated if not _already_stated(stated, axiom)
    ])
    LOG.info("Equality theory contributes %d axiom(s)", len(theory_axioms))
    return dataclasses.replace(kb, axioms=theory_axioms + kb.axioms)
