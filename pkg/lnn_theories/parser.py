# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Reading and writing the line-oriented ``.lnn`` knowledge-base format.

Each non-blank line is one directive::

    theory equality
    predicate dog/1
    function father/1
    constant Aggie
    axiom [<name>] <formula>
    fact <atom> true | false | unknown | <lower> <upper>
    query <name> <formula> [as-axiom]

Formulae are s-expressions with the operator heads ``not``, ``and``, ``or``,
``implies``, ``iff``, ``forall``, ``exists`` and ``=``. Weighted connectives take
``:weights (w1 w2 ...)`` and ``:bias b`` before their operands. ``#`` starts a
comment which runs to the end of the line.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import re
import typing

import pyparsing as pp

from .bounds import TruthBounds
from .errors import (
    ArityError,
    DuplicateDeclarationError,
    KBSyntaxError,
    SourceSpan,
    UndeclaredSymbolError,
)
from .formula import (
    EQUALITY,
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
)
from .kb import KNOWN_THEORIES, KnowledgeBase, Query, World

LOG = logging.getLogger(__name__)

NAME_REGEX = re.compile(r"^[A-Za-z_$][\w$.'\-]*$")
AS_AXIOM = "as-axiom"
_OPERATORS = frozenset({"not", "and", "or", "implies", "iff", "forall", "exists", EQUALITY})
_TRUTH_LITERALS = {
    "true": TruthBounds.true(),
    "false": TruthBounds.false(),
    "unknown": TruthBounds.unknown(),
}
_RESERVED = _OPERATORS | set(_TRUTH_LITERALS) | {AS_AXIOM}


@dataclasses.dataclass(frozen=True)
class _Token:
    text: str
    column: int


@dataclasses.dataclass(frozen=True)
class _SList:
    items: tuple[_Token | _SList, ...]
    column: int


_Item = _Token | _SList


def _build_grammar() -> pp.ParserElement:
    sexpr = pp.Forward()
    token = pp.Regex(r"[^\s()]+")
    token.set_parse_action(lambda s, loc, toks: _Token(toks[0], pp.col(loc, s)))
    slist = pp.Suppress("(") + pp.ZeroOrMore(sexpr) + pp.Suppress(")")
    slist.set_parse_action(lambda s, loc, toks: _SList(tuple(toks), pp.col(loc, s)))
    sexpr <<= token | slist
    return pp.ZeroOrMore(sexpr)


_LINE_GRAMMAR = _build_grammar()


@dataclasses.dataclass(frozen=True)
class _Line:
    number: int
    items: tuple[_Item, ...]

    def span(self, item: _Item | None = None) -> SourceSpan:
        return SourceSpan(self.number, item.column if item is not None else 1)


def _tokenize(text: str) -> list[_Line]:
    lines = []
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            items = _LINE_GRAMMAR.parse_string(line, parse_all=True)
        except pp.ParseException as err:
            raise KBSyntaxError(
                "malformed s-expression (unbalanced parentheses?)",
                SourceSpan(number, err.col),
            ) from err
        lines.append(_Line(number, tuple(items)))
    return lines


def _statement_name_token(line: _Line) -> _Token | None:
    """The name of an ``axiom`` or ``query`` line, when it gives one."""
    args = list(line.items[1:])
    if args and isinstance(args[-1], _Token) and args[-1].text == AS_AXIOM:
        args.pop()
    if len(args) == 2 and isinstance(args[0], _Token):
        return args[0]
    return None


class _KBReader:
    def __init__(self) -> None:
        self.theories: list[str] = []
        self.predicates: dict[str, int] = {}
        self.functions: dict[str, int] = {}
        self.constants: list[str] = []
        self.axioms: list[tuple[str, Formula]] = []
        self.facts: dict[Atom, TruthBounds] = {}
        self.queries: list[Query] = []
        #: Names given explicitly by axiom and query lines, which numbering must skip.
        self._explicit_names: set[str] = set()

    @property
    def has_equality(self) -> bool:
        return "equality" in self.theories

    def read(self, lines: list[_Line]) -> KnowledgeBase:
        declarations = {
            "theory": self._theory,
            "predicate": self._predicate,
            "function": self._function,
            "constant": self._constant,
        }
        statements = {
            "axiom": self._axiom,
            "query": self._query,
        }
        deferred: list[_Line] = []
        facts: list[_Line] = []
        for line in lines:
            keyword = line.items[0]
            if not isinstance(keyword, _Token):
                raise KBSyntaxError("expected a directive keyword", line.span(keyword))
            if keyword.text in declarations:
                declarations[keyword.text](line)
            elif keyword.text == "fact":
                facts.append(line)
            elif keyword.text in statements:
                deferred.append(line)
            else:
                raise KBSyntaxError(f"unknown directive '{keyword.text}'", line.span(keyword))

        self._explicit_names = {
            name.text for name in (_statement_name_token(line) for line in deferred)
            if name is not None
        }
        # Facts come first so that constants they introduce are known to formulae.
        for line in facts:
            self._fact(line)
        for line in deferred:
            statements[typing.cast(_Token, line.items[0]).text](line)

        return KnowledgeBase(
            theories=tuple(self.theories),
            predicates=self.predicates,
            functions=self.functions,
            constants=tuple(self.constants),
            axioms=tuple(self.axioms),
            facts=self.facts,
            queries=tuple(self.queries),
        )

    # Declarations

    def _expect_tokens(self, line: _Line, count: int, usage: str) -> list[_Token]:
        args = line.items[1:]
        if len(args) != count or not all(isinstance(arg, _Token) for arg in args):
            raise KBSyntaxError(f"usage: {usage}", line.span(line.items[0]))
        return typing.cast(list[_Token], list(args))

    def _check_name(self, line: _Line, token: _Token, name: str) -> None:
        if not NAME_REGEX.match(name) or name in _RESERVED:
            raise KBSyntaxError(f"'{name}' is not a valid symbol name", line.span(token))
        if name in self.predicates or name in self.functions or name in self.constants:
            raise DuplicateDeclarationError(name, line.span(token))

    def _theory(self, line: _Line) -> None:
        [token] = self._expect_tokens(line, 1, "theory <name>")
        if token.text not in KNOWN_THEORIES:
            raise KBSyntaxError(f"unknown theory '{token.text}'", line.span(token))
        if token.text in self.theories:
            raise DuplicateDeclarationError(token.text, line.span(token))
        self.theories.append(token.text)

    def _signature(self, line: _Line, usage: str, minimum_arity: int) -> tuple[str, int]:
        [token] = self._expect_tokens(line, 1, usage)
        name, sep, arity_text = token.text.rpartition("/")
        if not sep or not arity_text.isdigit():
            raise KBSyntaxError(f"usage: {usage}", line.span(token))
        arity = int(arity_text)
        if arity < minimum_arity:
            raise KBSyntaxError(
                f"arity of '{name}' must be at least {minimum_arity}", line.span(token),
            )
        self._check_name(line, token, name)
        return name, arity

    def _predicate(self, line: _Line) -> None:
        name, arity = self._signature(line, "predicate <name>/<arity>", 0)
        self.predicates[name] = arity

    def _function(self, line: _Line) -> None:
        name, arity = self._signature(line, "function <name>/<arity>", 1)
        self.functions[name] = arity

    def _constant(self, line: _Line) -> None:
        [token] = self._expect_tokens(line, 1, "constant <name>")
        self._check_name(line, token, token.text)
        self.constants.append(token.text)

    # Statements

    def _axiom(self, line: _Line) -> None:
        args = line.items[1:]
        if len(args) == 1:
            name = self._generated_name()
            body = args[0]
        elif len(args) == 2 and isinstance(args[0], _Token):
            name = self._statement_name(line, args[0])
            body = args[1]
        else:
            raise KBSyntaxError("usage: axiom [<name>] <formula>", line.span(line.items[0]))
        self.axioms.append((name, self._formula(line, body, frozenset())))

    def _query(self, line: _Line) -> None:
        args = list(line.items[1:])
        world = World.OPEN
        if args and isinstance(args[-1], _Token) and args[-1].text == AS_AXIOM:
            world = World.AXIOM
            args.pop()
        if len(args) != 2 or not isinstance(args[0], _Token):
            raise KBSyntaxError(
                f"usage: query <name> <formula> [{AS_AXIOM}]", line.span(line.items[0]),
            )
        name = self._statement_name(line, args[0])
        self.queries.append(Query(name, self._formula(line, args[1], frozenset()), world))

    def _statement_name(self, line: _Line, token: _Token) -> str:
        if not NAME_REGEX.match(token.text):
            raise KBSyntaxError(f"'{token.text}' is not a valid name", line.span(token))
        taken = {name for name, _ in self.axioms} | {query.name for query in self.queries}
        if token.text in taken:
            raise DuplicateDeclarationError(token.text, line.span(token))
        return token.text

    def _generated_name(self) -> str:
        taken = {name for name, _ in self.axioms} | {query.name for query in self.queries}
        number = len(self.axioms) + 1
        while f"axiom{number}" in taken or f"axiom{number}" in self._explicit_names:
            number += 1
        return f"axiom{number}"

    def _fact(self, line: _Line) -> None:
        args = line.items[1:]
        if len(args) not in (2, 3):
            raise KBSyntaxError(
                "usage: fact <atom> true|false|unknown|<lower> <upper>",
                line.span(line.items[0]),
            )
        atom = self._formula(line, args[0], frozenset(), in_fact=True)
        if not isinstance(atom, Atom):
            raise KBSyntaxError("a fact must be a single atom", line.span(args[0]))
        bounds = self._truth(line, args[1:])
        if atom in self.facts:
            raise KBSyntaxError("duplicate fact", line.span(args[0]))
        self.facts[atom] = bounds

    def _truth(self, line: _Line, items: typing.Sequence[_Item]) -> TruthBounds:
        if len(items) == 1:
            [item] = items
            if isinstance(item, _Token) and item.text in _TRUTH_LITERALS:
                return _TRUTH_LITERALS[item.text]
            raise KBSyntaxError(
                "expected true, false, unknown or '<lower> <upper>'", line.span(item),
            )
        lower, upper = (self._number(line, item) for item in items)
        try:
            return TruthBounds.checked(lower, upper)
        except ValueError as err:
            raise KBSyntaxError(str(err), line.span(items[0])) from err

    def _number(self, line: _Line, item: _Item) -> float:
        if isinstance(item, _Token):
            try:
                value = float(item.text)
            except ValueError:
                pass
            else:
                if math.isfinite(value):
                    return value
                raise KBSyntaxError("expected a finite number", line.span(item))
        raise KBSyntaxError("expected a number", line.span(item))

    # Formulae and terms

    def _formula(
        self,
        line: _Line,
        item: _Item,
        bound: frozenset[str],
        *,
        in_fact: bool = False,
    ) -> Formula:
        if isinstance(item, _Token):
            return self._atom(line, item, item, (), bound, in_fact)
        if not item.items:
            raise KBSyntaxError("empty formula", line.span(item))
        head, *rest = item.items
        if not isinstance(head, _Token):
            raise KBSyntaxError("expected an operator or predicate", line.span(head))
        if in_fact and head.text in _OPERATORS - {EQUALITY}:
            raise KBSyntaxError("a fact must be a single atom", line.span(head))

        operator = head.text
        if operator in ("forall", "exists"):
            return self._quantifier(line, item, operator, rest, bound)
        if operator in ("and", "or", "implies"):
            return self._weighted(line, item, operator, rest, bound)
        if operator in ("not", "iff"):
            expected = 1 if operator == "not" else 2
            if len(rest) != expected:
                raise KBSyntaxError(
                    f"'{operator}' takes {expected} operand(s), got {len(rest)}",
                    line.span(head),
                )
            children = [self._formula(line, child, bound) for child in rest]
            return Not(children[0]) if operator == "not" else Iff(children[0], children[1])
        return self._atom(line, item, head, rest, bound, in_fact)

    def _quantifier(
        self,
        line: _Line,
        item: _SList,
        operator: str,
        rest: list[_Item],
        bound: frozenset[str],
    ) -> Formula:
        if len(rest) != 2:
            raise KBSyntaxError(
                f"usage: ({operator} <var> <formula>)", line.span(item),
            )
        binder, body_item = rest
        binders = binder.items if isinstance(binder, _SList) else (binder,)
        variables = []
        for var in binders:
            if not isinstance(var, _Token) or not NAME_REGEX.match(var.text):
                raise KBSyntaxError("expected a variable name", line.span(var))
            if var.text in (*self.predicates, *self.functions, *self.constants):
                raise KBSyntaxError(
                    f"variable '{var.text}' clashes with a declared symbol", line.span(var),
                )
            variables.append(var.text)
        if not variables:
            raise KBSyntaxError("a quantifier needs at least one variable", line.span(binder))
        body = self._formula(line, body_item, bound | set(variables))
        quantifier = ForAll if operator == "forall" else Exists
        for var in reversed(variables):
            body = quantifier(var, body)
        return body

    def _weighted(
        self,
        line: _Line,
        item: _SList,
        operator: str,
        rest: list[_Item],
        bound: frozenset[str],
    ) -> Formula:
        weights: tuple[float, ...] | None = None
        bias = 1.0
        while rest and isinstance(rest[0], _Token) and rest[0].text.startswith(":"):
            keyword = rest.pop(0)
            if not rest:
                raise KBSyntaxError(f"missing value for {keyword.text}", line.span(keyword))
            value = rest.pop(0)
            if keyword.text == ":weights" and isinstance(value, _SList):
                weights = tuple(self._number(line, weight) for weight in value.items)
            elif keyword.text == ":bias":
                bias = self._number(line, value)
            else:
                raise KBSyntaxError(f"unexpected option {keyword.text}", line.span(keyword))
        children = tuple(self._formula(line, child, bound) for child in rest)
        try:
            if operator == "implies":
                if len(children) != 2:
                    raise ValueError(f"'implies' takes 2 operands, got {len(children)}")
                return Implies(children[0], children[1], weights, bias)
            connective = And if operator == "and" else Or
            return connective(children, weights, bias)
        except ValueError as err:
            raise KBSyntaxError(str(err), line.span(item)) from err

    def _atom(
        self,
        line: _Line,
        item: _Item,
        head: _Token,
        rest: typing.Sequence[_Item],
        bound: frozenset[str],
        in_fact: bool,
    ) -> Atom:
        predicate = head.text
        if predicate == EQUALITY:
            if not self.has_equality:
                raise KBSyntaxError(
                    "'=' requires the equality theory (add 'theory equality')",
                    line.span(head),
                )
            arity = 2
        elif predicate in self.predicates:
            arity = self.predicates[predicate]
        else:
            raise UndeclaredSymbolError(predicate, line.span(head), kind="predicate")
        if len(rest) != arity:
            raise ArityError(predicate, arity, len(rest), line.span(item))
        return Atom(predicate, tuple(self._term(line, arg, bound, in_fact) for arg in rest))

    def _term(self, line: _Line, item: _Item, bound: frozenset[str], in_fact: bool) -> Term:
        if isinstance(item, _SList):
            if not item.items or not isinstance(item.items[0], _Token):
                raise KBSyntaxError("expected a function application", line.span(item))
            head, *args = item.items
            assert isinstance(head, _Token)
            if head.text not in self.functions:
                raise UndeclaredSymbolError(head.text, line.span(head), kind="function")
            arity = self.functions[head.text]
            if len(args) != arity:
                raise ArityError(head.text, arity, len(args), line.span(item))
            return FunctionApp(
                head.text, tuple(self._term(line, arg, bound, in_fact) for arg in args),
            )
        name = item.text
        if name in bound:
            return Variable(name)
        if name in self.constants:
            return Constant(name)
        declared = name in self.predicates or name in self.functions
        if in_fact and not declared and NAME_REGEX.match(name):
            LOG.warning("%s: implicitly declaring constant '%s'", line.span(item), name)
            self.constants.append(name)
            return Constant(name)
        raise UndeclaredSymbolError(name, line.span(item), kind="constant or variable")


def parse_kb(text: str) -> KnowledgeBase:
    return _KBReader().read(_tokenize(text))


def format_number(value: float) -> str:
    return f"{float(value):.6g}"


def format_term(term: Term) -> str:
    match term:
        case Constant(name) | Variable(name):
            return name
        case FunctionApp(function, args):
            return f"({function} {' '.join(format_term(arg) for arg in args)})"
    raise TypeError(f"Not a term: {term!r}")


def _format_options(weights: tuple[float, ...] | None, bias: float) -> str:
    options = ""
    if weights is not None:
        options += f" :weights ({' '.join(format_number(weight) for weight in weights)})"
    if bias != 1.0:
        options += f" :bias {format_number(bias)}"
    return options


def format_formula(formula: Formula) -> str:
    match formula:
        case Atom(predicate, args):
            return f"({' '.join([predicate, *(format_term(arg) for arg in args)])})"
        case Not(operand):
            return f"(not {format_formula(operand)})"
        case And(children, weights, bias) | Or(children, weights, bias):
            operator = "and" if isinstance(formula, And) else "or"
            operands = " ".join(format_formula(child) for child in children)
            return f"({operator}{_format_options(weights, bias)} {operands})"
        case Implies(lhs, rhs, weights, bias):
            return (
                f"(implies{_format_options(weights, bias)} "
                f"{format_formula(lhs)} {format_formula(rhs)})"
            )
        case Iff(lhs, rhs):
            return f"(iff {format_formula(lhs)} {format_formula(rhs)})"
        case ForAll(var, body):
            return f"(forall {var} {format_formula(body)})"
        case Exists(var, body):
            return f"(exists {var} {format_formula(body)})"
    raise TypeError(f"Not a formula: {formula!r}")


def format_truth(bounds: TruthBounds) -> str:
    for literal, value in _TRUTH_LITERALS.items():
        if tuple(bounds) == tuple(value):
            return literal
    return f"{format_number(bounds.lower)} {format_number(bounds.upper)}"


def serialize_kb(kb: KnowledgeBase) -> str:
    lines = [f"theory {theory}" for theory in kb.theories]
    lines += [f"predicate {name}/{arity}" for name, arity in kb.predicates.items()]
    lines += [f"function {name}/{arity}" for name, arity in kb.functions.items()]
    lines += [f"constant {name}" for name in kb.constants]
    lines += [f"axiom {name} {format_formula(formula)}" for name, formula in kb.axioms]
    lines += sorted(
        f"fact {format_formula(atom)} {format_truth(bounds)}"
        for atom, bounds in kb.facts.items()
    )
    for query in kb.queries:
        suffix = f" {AS_AXIOM}" if query.world is World.AXIOM else ""
        lines.append(f"query {query.name} {format_formula(query.formula)}{suffix}")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
