# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Elimination of function symbols in favour of functional relations.

An atom ``P(..., f(r1, ..., rk), ...)`` is equivalent to
``exists v. (f(r1, ..., rk) = v  and  P(..., v, ...))``, and ``f(r1, ..., rk) = v``
holds exactly when ``R_f(r1, ..., rk, v)`` does. Each function application is
therefore replaced by one existential quantifier and one ``R_f`` atom. The new
atoms may themselves contain function applications, and are rewritten in turn
until no function symbol is left.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import typing

from .bounds import TruthBounds
from .errors import RewriteError, TheoryError
from .formula import (
    And,
    Atom,
    Constant,
    Exists,
    ForAll,
    Formula,
    FunctionApp,
    Iff,
    Implies,
    Not,
    Or,
    Term,
    Variable,
    all_variables,
    eq,
    is_function_free,
)
from .kb import KnowledgeBase
from .theories import append_axioms, generate_congruence_axiom, generate_functional_axiom

LOG = logging.getLogger(__name__)

RELATION_PREFIX = "R_"


def relation_name(function: str) -> str:
    return f"{RELATION_PREFIX}{function}"


@dataclasses.dataclass(frozen=True)
class RewriteResult:
    formula: Formula
    #: Function symbol -> the relation symbol which replaced it.
    introduced_relations: typing.Mapping[str, str]
    fresh_vars_used: int


class _FreshVariables:
    """Per-rewrite supply of ``$v<n>`` names avoiding those already in use."""

    def __init__(self, taken: typing.Iterable[str]):
        self._taken = set(taken)
        self._counter = itertools.count(1)
        self.used = 0

    def __call__(self) -> str:
        while True:
            name = f"$v{next(self._counter)}"
            if name not in self._taken:
                self._taken.add(name)
                self.used += 1
                return name


def extract_term(
    atom: Atom,
    position: int,
    fresh_var: str | None = None,
) -> Formula:
    """
    Pull the argument at ``position`` out of ``atom``: ``P(.., t, ..)`` becomes
    ``exists v. (t = v and P(.., v, ..))`` for a fresh variable ``v``.
    """
    if not 0 <= position < len(atom.args):
        raise RewriteError(
            f"position {position} is out of range for '{atom.predicate}' "
            f"with {len(atom.args)} argument(s)",
        )
    if fresh_var is None:
        fresh_var = _FreshVariables(all_variables(atom))()
    var = Variable(fresh_var)
    args = atom.args[:position] + (var,) + atom.args[position + 1:]
    return Exists(fresh_var, And((eq(atom.args[position], var), Atom(atom.predicate, args))))


def _check_functions(formula: Formula, kb: KnowledgeBase) -> None:
    if is_function_free(formula):
        return
    if not kb.has_equality:
        raise TheoryError(
            "function symbols can only be eliminated with the equality theory "
            "(add 'theory equality')",
        )


class _Eliminator:
    def __init__(self, kb: KnowledgeBase, fresh: _FreshVariables):
        self._kb = kb
        self._fresh = fresh
        self.introduced: dict[str, str] = {}

    def formula(self, formula: Formula) -> Formula:
        match formula:
            case Atom():
                return self.atom(formula)
            case Not(operand):
                return Not(self.formula(operand))
            case And(children, weights, bias):
                return And(tuple(self.formula(child) for child in children), weights, bias)
            case Or(children, weights, bias):
                return Or(tuple(self.formula(child) for child in children), weights, bias)
            case Implies(lhs, rhs, weights, bias):
                return Implies(self.formula(lhs), self.formula(rhs), weights, bias)
            case Iff(lhs, rhs):
                return Iff(self.formula(lhs), self.formula(rhs))
            case ForAll(var, body):
                return ForAll(var, self.formula(body))
            case Exists(var, body):
                return Exists(var, self.formula(body))
        raise TypeError(f"Not a formula: {formula!r}")

    def atom(self, atom: Atom) -> Formula:
        position = next(
            (i for i, arg in enumerate(atom.args) if isinstance(arg, FunctionApp)),
            None,
        )
        if position is None:
            return atom
        application = typing.cast(FunctionApp, atom.args[position])
        relation = self.relation(application.function)

        extracted = extract_term(atom, position, self._fresh())
        assert isinstance(extracted, Exists) and isinstance(extracted.body, And)
        var = Variable(extracted.var)
        _, remainder = extracted.body.children
        # f(r1..rk) = v holds exactly when R_f(r1..rk, v) does.
        graph_atom = Atom(relation, application.args + (var,))
        return Exists(
            extracted.var,
            And((self.atom(graph_atom), self.formula(remainder))),
        )

    def relation(self, function: str) -> str:
        if function not in self._kb.functions:
            raise RewriteError(f"undeclared function '{function}'")
        relation = relation_name(function)
        if relation in self._kb.symbols():
            raise RewriteError(
                f"cannot introduce relation '{relation}' for function '{function}': "
                "the name is already declared",
            )
        self.introduced[function] = relation
        return relation


def eliminate_functions(formula: Formula, kb: KnowledgeBase) -> RewriteResult:
    _check_functions(formula, kb)
    fresh = _FreshVariables(all_variables(formula))
    eliminator = _Eliminator(kb, fresh)
    rewritten = eliminator.formula(formula)
    return RewriteResult(rewritten, eliminator.introduced, fresh.used)


def _constant_args(args: typing.Iterable[Term]) -> bool:
    return all(isinstance(arg, Constant) for arg in args)


def _rewrite_fact(atom: Atom, kb: KnowledgeBase) -> Atom:
    """``(= (f c1..ck) c)`` (either way round) becomes ``R_f(c1..ck, c)``."""
    if is_function_free(atom):
        return atom
    _check_functions(atom, kb)
    if atom.is_equality:
        lhs, rhs = atom.args
        if isinstance(rhs, FunctionApp) and isinstance(lhs, Constant):
            lhs, rhs = rhs, lhs
        if (
            isinstance(lhs, FunctionApp) and isinstance(rhs, Constant) and
            _constant_args(lhs.args)
        ):
            if lhs.function not in kb.functions:
                raise RewriteError(f"undeclared function '{lhs.function}'")
            return Atom(relation_name(lhs.function), lhs.args + (rhs,))
    raise RewriteError(
        "facts over function terms must have the form (= (f c1 ... cn) c)",
    )


def rewrite_kb(kb: KnowledgeBase) -> KnowledgeBase:
    """
    Remove every function symbol from the knowledge base.

    Each declared function ``f/n`` is replaced by a predicate ``R_f/(n+1)`` together
    with its functional axiom and its congruence axiom.
    """
    if not kb.functions:
        return kb
    if not kb.has_equality:
        raise TheoryError(
            "function symbols can only be eliminated with the equality theory "
            "(add 'theory equality')",
        )
    relations = {function: relation_name(function) for function in kb.functions}
    clashes = sorted(set(relations.values()) & kb.symbols())
    if clashes:
        raise RewriteError(f"cannot introduce relation(s) {clashes}: already declared")

    axioms = []
    for name, formula in kb.axioms:
        axioms.append((name, eliminate_functions(formula, kb).formula))
    queries = [
        dataclasses.replace(query, formula=eliminate_functions(query.formula, kb).formula)
        for query in kb.queries
    ]
    facts: dict[Atom, TruthBounds] = {}
    for atom, bounds in kb.facts.items():
        rewritten = _rewrite_fact(atom, kb)
        if rewritten in facts:
            raise RewriteError(f"fact {rewritten.predicate}{rewritten.args} is given twice")
        facts[rewritten] = bounds

    predicates = dict(kb.predicates)
    generated = []
    for function, relation in relations.items():
        arity = kb.functions[function] + 1
        predicates[relation] = arity
        generated.append(generate_functional_axiom(relation, arity))
        congruence = generate_congruence_axiom(relation, arity)
        assert congruence is not None
        generated.append(congruence)
    LOG.info(
        "Eliminated %d function symbol(s): %s",
        len(relations), ", ".join(f"{f} -> {r}" for f, r in relations.items()),
    )
    return dataclasses.replace(
        kb,
        predicates=predicates,
        functions={},
        axioms=append_axioms(tuple(axioms), generated),
        facts=facts,
        queries=tuple(queries),
    )

