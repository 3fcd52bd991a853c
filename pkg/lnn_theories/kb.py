# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

from __future__ import annotations

import dataclasses
import enum
import typing

from .bounds import TruthBounds
from .formula import EQUALITY, Atom, Formula

EQUALITY_THEORY = "equality"
KNOWN_THEORIES = frozenset({EQUALITY_THEORY})


class World(enum.Enum):
    AXIOM = "axiom"
    OPEN = "open"


@dataclasses.dataclass(frozen=True)
class Query:
    name: str
    formula: Formula
    world: World = World.OPEN


@dataclasses.dataclass(frozen=True)
class KnowledgeBase:
    """
    Declarations, axioms, facts and queries of a model.

    Instances are treated as immutable: transformations (theory injection, function
    elimination) build new instances with :func:`dataclasses.replace`.
    Facts are keyed by ground atoms; after function elimination every argument of a
    fact is a constant.
    """
    theories: tuple[str, ...] = ()
    predicates: typing.Mapping[str, int] = dataclasses.field(default_factory=dict)
    functions: typing.Mapping[str, int] = dataclasses.field(default_factory=dict)
    constants: tuple[str, ...] = ()
    axioms: tuple[tuple[str, Formula], ...] = ()
    facts: typing.Mapping[Atom, TruthBounds] = dataclasses.field(default_factory=dict)
    queries: tuple[Query, ...] = ()

    @property
    def has_equality(self) -> bool:
        return EQUALITY_THEORY in self.theories

    def arity(self, predicate: str) -> int | None:
        if predicate == EQUALITY and self.has_equality:
            return 2
        return self.predicates.get(predicate)

    def symbols(self) -> set[str]:
        return {*self.predicates, *self.functions, *self.constants}
