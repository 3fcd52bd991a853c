# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Compilation of a function-free knowledge base into a neuron graph.

The graph of each formula is its syntax tree, with quantifiers expanded over the
constants of the knowledge base. Ground atoms are shared between formulae, so a
bound learnt about ``dog(Fruton)`` in one axiom is visible to every other one.
Node ids are assigned children first, hence ascending ids are a topological order
from the atoms to the roots.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import typing

from .autodiff import Scalar
from .bounds import TruthBounds
from .errors import CompileError
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
    Variable,
    free_variables,
    has_quantifier,
    substitute,
    weights_of,
)
from .kb import KnowledgeBase, World

LOG = logging.getLogger(__name__)


class NodeKind(enum.Enum):
    PREDICATE = "PredicateInput"
    AND = "And"
    OR = "Or"
    IMPLIES = "Implies"
    NOT = "Not"
    FORALL = "ForAll"
    EXISTS = "Exists"

    @property
    def is_weighted(self) -> bool:
        return self in (NodeKind.AND, NodeKind.OR, NodeKind.IMPLIES)


@dataclasses.dataclass
class Parameters:
    """Weights and bias shared by every grounding of one connective."""
    weights: list[Scalar]
    bias: Scalar


@dataclasses.dataclass(frozen=True)
class NeuronNode:
    id: int
    kind: NodeKind
    children: tuple[int, ...]
    label: str
    #: Index into :attr:`NeuronGraph.parameters` for weighted kinds.
    parameters: int | None = None
    world: World = World.OPEN


@dataclasses.dataclass(frozen=True)
class Root:
    name: str
    node: int
    world: World


@dataclasses.dataclass
class GroundingTable:
    predicate: str
    arity: int
    rows: dict[tuple[str, ...], TruthBounds] = dataclasses.field(default_factory=dict)

    def get(self, row: tuple[str, ...]) -> TruthBounds:
        return self.rows.get(row, TruthBounds.unknown())


@dataclasses.dataclass
class NeuronGraph:
    nodes: list[NeuronNode]
    roots: list[Root]
    domain: tuple[str, ...]
    tables: dict[str, GroundingTable]
    parameters: list[Parameters]
    initial: list[TruthBounds]
    atoms: dict[tuple[str, tuple[str, ...]], int]
    lower: list[Scalar] = dataclasses.field(init=False, repr=False)
    upper: list[Scalar] = dataclasses.field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        """Return every node to its initial bounds; parameters are left untouched."""
        self.lower = [bounds.lower for bounds in self.initial]
        self.upper = [bounds.upper for bounds in self.initial]

    def with_parameters(self, parameters: list[Parameters]) -> NeuronGraph:
        """A graph sharing this one's structure, with other parameters and fresh bounds."""
        return dataclasses.replace(self, parameters=parameters)

    def bounds(self, node: int) -> TruthBounds:
        return TruthBounds(self.lower[node], self.upper[node])

    def atom(self, predicate: str, *constants: str) -> int:
        try:
            return self.atoms[(predicate, constants)]
        except KeyError:
            raise KeyError(f"no grounded atom {predicate}{constants} in the graph") from None

    def root(self, name: str) -> Root:
        for root in self.roots:
            if root.name == name:
                return root
        raise KeyError(f"no formula named '{name}' in the graph")

    def weights(self, node: NeuronNode) -> list[Scalar]:
        assert node.parameters is not None
        return self.parameters[node.parameters].weights

    def bias(self, node: NeuronNode) -> Scalar:
        assert node.parameters is not None
        return self.parameters[node.parameters].bias


class _Compiler:
    def __init__(self, kb: KnowledgeBase):
        self._kb = kb
        self.nodes: list[NeuronNode] = []
        self.initial: list[TruthBounds] = []
        self.atoms: dict[tuple[str, tuple[str, ...]], int] = {}
        self.parameters: list[Parameters] = []
        self._parameter_index: dict[tuple[str, tuple[int, ...]], int] = {}
        self.tables: dict[str, GroundingTable] = {
            predicate: GroundingTable(predicate, arity)
            for predicate, arity in kb.predicates.items()
        }
        if kb.has_equality:
            self.tables["="] = GroundingTable("=", 2)
        for atom, bounds in kb.facts.items():
            self.tables[atom.predicate].rows[_ground_args(atom)] = bounds

    def _add(
        self,
        kind: NodeKind,
        children: typing.Sequence[int],
        label: str,
        *,
        parameters: int | None = None,
        initial: TruthBounds = TruthBounds.unknown(),
    ) -> int:
        node_id = len(self.nodes)
        self.nodes.append(NeuronNode(node_id, kind, tuple(children), label, parameters))
        self.initial.append(initial)
        return node_id

    def _parameters(
        self,
        formula_name: str,
        path: tuple[int, ...],
        weights: typing.Sequence[float],
        bias: float,
    ) -> int:
        key = (formula_name, path)
        if key not in self._parameter_index:
            self._parameter_index[key] = len(self.parameters)
            self.parameters.append(Parameters(list(weights), bias))
        return self._parameter_index[key]

    def root(self, name: str, formula: Formula, world: World) -> Root:
        unbound = free_variables(formula)
        if unbound:
            raise CompileError(f"'{name}' has free variable(s) {sorted(unbound)}")
        if has_quantifier(formula) and not self._kb.constants:
            raise CompileError(f"'{name}' quantifies over an empty domain")
        node_id = self.formula(name, formula, ())
        node = self.nodes[node_id]
        self.nodes[node_id] = dataclasses.replace(node, world=world)
        if world is World.AXIOM:
            self.initial[node_id] = self.initial[node_id].intersect(TruthBounds.true())
        return Root(name, node_id, world)

    def formula(self, name: str, formula: Formula, path: tuple[int, ...]) -> int:
        match formula:
            case Atom():
                return self.atom(name, formula)
            case Not(operand):
                child = self.formula(name, operand, path + (0,))
                return self._add(NodeKind.NOT, [child], "not")
            case And(children, _, bias) | Or(children, _, bias):
                kind = NodeKind.AND if isinstance(formula, And) else NodeKind.OR
                ids = [
                    self.formula(name, child, path + (i,)) for i, child in enumerate(children)
                ]
                parameters = self._parameters(name, path, weights_of(formula), bias)
                return self._add(kind, ids, kind.value.lower(), parameters=parameters)
            case Implies(lhs, rhs, _, bias):
                ids = [self.formula(name, lhs, path + (0,)), self.formula(name, rhs, path + (1,))]
                parameters = self._parameters(name, path, weights_of(formula), bias)
                return self._add(NodeKind.IMPLIES, ids, "implies", parameters=parameters)
            case Iff(lhs, rhs):
                # a <-> b is compiled as (a -> b) and (b -> a).
                a = self.formula(name, lhs, path + (0,))
                b = self.formula(name, rhs, path + (1,))
                forward = self._add(
                    NodeKind.IMPLIES, [a, b], "implies",
                    parameters=self._parameters(name, path + (2,), (1.0, 1.0), 1.0),
                )
                backward = self._add(
                    NodeKind.IMPLIES, [b, a], "implies",
                    parameters=self._parameters(name, path + (3,), (1.0, 1.0), 1.0),
                )
                return self._add(
                    NodeKind.AND, [forward, backward], "iff",
                    parameters=self._parameters(name, path, (1.0, 1.0), 1.0),
                )
            case ForAll(var, body) | Exists(var, body):
                kind = NodeKind.FORALL if isinstance(formula, ForAll) else NodeKind.EXISTS
                ids = [
                    self.formula(name, substitute(body, var, Constant(constant)), path + (0,))
                    for constant in self._kb.constants
                ]
                return self._add(kind, ids, f"{kind.value.lower()} {var}")
        raise TypeError(f"Not a formula: {formula!r}")

    def atom(self, name: str, atom: Atom) -> int:
        for arg in atom.args:
            if isinstance(arg, FunctionApp):
                raise CompileError(
                    f"'{name}' is not function-free (eliminate functions before compiling)",
                )
            if isinstance(arg, Variable):
                raise CompileError(f"'{name}' has free variable '{arg.name}'")
        row = _ground_args(atom)
        key = (atom.predicate, row)
        if key not in self.atoms:
            table = self.tables.get(atom.predicate)
            initial = table.get(row) if table is not None else TruthBounds.unknown()
            label = f"{atom.predicate}({','.join(row)})"
            self.atoms[key] = self._add(NodeKind.PREDICATE, [], label, initial=initial)
        return self.atoms[key]


def _ground_args(atom: Atom) -> tuple[str, ...]:
    row = []
    for arg in atom.args:
        if not isinstance(arg, Constant):
            raise CompileError(f"atom '{atom.predicate}' is not ground")
        row.append(arg.name)
    return tuple(row)


def compile_kb(kb: KnowledgeBase) -> NeuronGraph:
    """
    Build the neuron graph of ``kb``, which must already be function-free and carry its
    theory axioms.
    """
    compiler = _Compiler(kb)
    roots = [compiler.root(name, formula, World.AXIOM) for name, formula in kb.axioms]
    roots += [compiler.root(query.name, query.formula, query.world) for query in kb.queries]
    # Facts which no formula mentions still get a node, so they can be read back.
    for atom in kb.facts:
        compiler.atom("fact", atom)
    LOG.info(
        "Compiled %d formula(s) into %d node(s) over a domain of %d constant(s)",
        len(roots), len(compiler.nodes), len(kb.constants),
    )
    return NeuronGraph(
        nodes=compiler.nodes,
        roots=roots,
        domain=kb.constants,
        tables=compiler.tables,
        parameters=compiler.parameters,
        initial=compiler.initial,
        atoms=compiler.atoms,
    )


def format_graph(graph: NeuronGraph) -> str:
    """One line per node: ``id kind children weights bias lower upper``."""
    lines = []
    for node in graph.nodes:
        children = ",".join(str(child) for child in node.children) or "-"
        if node.parameters is not None:
            weights = ",".join(f"{float(w):.6g}" for w in graph.weights(node))
            bias = f"{float(graph.bias(node)):.6g}"
        else:
            weights = bias = "-"
        lines.append(
            f"{node.id} {node.kind.value} {children} {weights} {bias} "
            f"{float(graph.lower[node.id]):.4f} {float(graph.upper[node.id]):.4f}",
        )
    return "\n".join(lines) + "\n" if lines else ""
