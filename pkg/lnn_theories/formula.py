# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Terms and formulae of the first-order language compiled into neuron graphs.

All values are immutable and hashable, so they can be shared freely between
knowledge bases, rewriting passes and compiled graphs.
"""

from __future__ import annotations

import dataclasses
import math
import typing

from .errors import SubstitutionError

#: The reserved binary predicate introduced by the equality theory.
EQUALITY = "="


@dataclasses.dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclasses.dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclasses.dataclass(frozen=True)
class FunctionApp:
    function: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        return f"({self.function} {' '.join(str(arg) for arg in self.args)})"


Term = Constant | Variable | FunctionApp


@dataclasses.dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def is_equality(self) -> bool:
        return self.predicate == EQUALITY


@dataclasses.dataclass(frozen=True)
class Not:
    operand: Formula


@dataclasses.dataclass(frozen=True)
class And:
    children: tuple[Formula, ...]
    weights: tuple[float, ...] | None = None
    bias: float = 1.0

    def __post_init__(self) -> None:
        _check_weighted("and", self.children, self.weights, self.bias, minimum=2)


@dataclasses.dataclass(frozen=True)
class Or:
    children: tuple[Formula, ...]
    weights: tuple[float, ...] | None = None
    bias: float = 1.0

    def __post_init__(self) -> None:
        _check_weighted("or", self.children, self.weights, self.bias, minimum=2)


@dataclasses.dataclass(frozen=True)
class Implies:
    lhs: Formula
    rhs: Formula
    weights: tuple[float, ...] | None = None
    bias: float = 1.0

    def __post_init__(self) -> None:
        _check_weighted("implies", (self.lhs, self.rhs), self.weights, self.bias, minimum=2)


@dataclasses.dataclass(frozen=True)
class Iff:
    lhs: Formula
    rhs: Formula


@dataclasses.dataclass(frozen=True)
class ForAll:
    var: str
    body: Formula


@dataclasses.dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


Formula = Atom | Not | And | Or | Implies | Iff | ForAll | Exists
Quantifier = ForAll | Exists
Weighted = And | Or | Implies


def _check_weighted(
    name: str,
    children: tuple[Formula, ...],
    weights: tuple[float, ...] | None,
    bias: float,
    *,
    minimum: int,
) -> None:
    if len(children) < minimum:
        raise ValueError(f"'{name}' needs at least {minimum} operands, got {len(children)}")
    if weights is not None:
        if len(weights) != len(children):
            raise ValueError(
                f"'{name}' has {len(children)} operands but {len(weights)} weights",
            )
        if not all(math.isfinite(weight) and weight >= 0 for weight in weights):
            raise ValueError(f"'{name}' weights must be finite and non-negative, got {weights}")
    if not (math.isfinite(bias) and bias >= 0):
        raise ValueError(f"'{name}' bias must be finite and non-negative, got {bias}")


def eq(lhs: Term, rhs: Term) -> Atom:
    return Atom(EQUALITY, (lhs, rhs))


def conjunction(children: typing.Sequence[Formula]) -> Formula:
    """A conjunction of the children, or the child itself when there is only one."""
    if len(children) == 1:
        return children[0]
    return And(tuple(children))


def forall(variables: typing.Sequence[str], body: Formula) -> Formula:
    for var in reversed(variables):
        body = ForAll(var, body)
    return body


def operands(formula: Formula) -> tuple[Formula, ...]:
    """The immediate subformulae, in syntax order."""
    match formula:
        case Atom():
            return ()
        case Not(operand):
            return (operand,)
        case And(children) | Or(children):
            return children
        case Implies(lhs, rhs) | Iff(lhs, rhs):
            return (lhs, rhs)
        case ForAll(_, body) | Exists(_, body):
            return (body,)
    raise TypeError(f"Not a formula: {formula!r}")


def weights_of(formula: Weighted) -> tuple[float, ...]:
    if formula.weights is not None:
        return formula.weights
    return (1.0,) * len(operands(formula))


def term_variables(term: Term) -> set[str]:
    match term:
        case Variable(name):
            return {name}
        case Constant():
            return set()
        case FunctionApp(_, args):
            return set().union(*(term_variables(arg) for arg in args))
    raise TypeError(f"Not a term: {term!r}")


def free_variables(formula: Formula) -> set[str]:
    match formula:
        case Atom(_, args):
            return set().union(*(term_variables(arg) for arg in args))
        case ForAll(var, body) | Exists(var, body):
            return free_variables(body) - {var}
    return set().union(*(free_variables(child) for child in operands(formula)))


def all_variables(formula: Formula) -> set[str]:
    """Every variable name occurring in the formula, bound or free."""
    match formula:
        case Atom(_, args):
            return set().union(*(term_variables(arg) for arg in args))
        case ForAll(var, body) | Exists(var, body):
            return all_variables(body) | {var}
    return set().union(*(all_variables(child) for child in operands(formula)))


def iter_atoms(formula: Formula) -> typing.Iterator[Atom]:
    if isinstance(formula, Atom):
        yield formula
        return
    for child in operands(formula):
        yield from iter_atoms(child)


def iter_function_apps(term: Term) -> typing.Iterator[FunctionApp]:
    if isinstance(term, FunctionApp):
        yield term
        for arg in term.args:
            yield from iter_function_apps(arg)


def count_function_apps(formula: Formula) -> int:
    return sum(
        1
        for atom in iter_atoms(formula)
        for arg in atom.args
        for _ in iter_function_apps(arg)
    )


def is_function_free(formula: Formula) -> bool:
    return count_function_apps(formula) == 0


def has_quantifier(formula: Formula) -> bool:
    if isinstance(formula, (ForAll, Exists)):
        return True
    return any(has_quantifier(child) for child in operands(formula))


def substitute_term(term: Term, var: str, replacement: Term) -> Term:
    match term:
        case Variable(name) if name == var:
            return replacement
        case FunctionApp(function, args):
            return FunctionApp(
                function,
                tuple(substitute_term(arg, var, replacement) for arg in args),
            )
    return term


def substitute(formula: Formula, var: str, term: Term) -> Formula:
    """
    Replace every free occurrence of ``var`` in ``formula`` by ``term``.

    Raises :class:`SubstitutionError` if a variable of ``term`` would be captured
    by a quantifier of ``formula``.
    """
    return _substitute(formula, var, term, term_variables(term))


def _substitute(formula: Formula, var: str, term: Term, term_vars: set[str]) -> Formula:
    match formula:
        case Atom(predicate, args):
            return Atom(predicate, tuple(substitute_term(arg, var, term) for arg in args))
        case Not(operand):
            return Not(_substitute(operand, var, term, term_vars))
        case And(children, weights, bias):
            return And(
                tuple(_substitute(child, var, term, term_vars) for child in children),
                weights,
                bias,
            )
        case Or(children, weights, bias):
            return Or(
                tuple(_substitute(child, var, term, term_vars) for child in children),
                weights,
                bias,
            )
        case Implies(lhs, rhs, weights, bias):
            return Implies(
                _substitute(lhs, var, term, term_vars),
                _substitute(rhs, var, term, term_vars),
                weights,
                bias,
            )
        case Iff(lhs, rhs):
            return Iff(
                _substitute(lhs, var, term, term_vars),
                _substitute(rhs, var, term, term_vars),
            )
        case ForAll(bound, body) | Exists(bound, body):
            if bound == var or var not in free_variables(body):
                return formula
            if bound in term_vars:
                kind = "forall" if isinstance(formula, ForAll) else "exists"
                raise SubstitutionError(
                    f"substituting {term} for '{var}' would be captured by ({kind} {bound} ...)",
                )
            return type(formula)(bound, _substitute(body, var, term, term_vars))
    raise TypeError(f"Not a formula: {formula!r}")
