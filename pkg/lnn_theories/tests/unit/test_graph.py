# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

import pytest

from lnn_theories.bounds import TruthBounds
from lnn_theories.errors import CompileError
from lnn_theories.graph import NodeKind, Parameters, compile_kb, format_graph
from lnn_theories.kb import World
from lnn_theories.parser import parse_kb
from lnn_theories.pipeline import build_graph, prepare_kb
from lnn_theories.tests import knowledge_bases


def test_compile_kb__reflexivity() -> None:
    kb = parse_kb("theory equality\nconstant Aggie\nconstant Fruton\naxiom (forall x (= x x))\n")
    graph = compile_kb(kb)
    [root] = graph.roots
    node = graph.nodes[root.node]
    assert node.kind is NodeKind.FORALL
    assert [graph.nodes[child].label for child in node.children] == [
        "=(Aggie,Aggie)", "=(Fruton,Fruton)",
    ]
    assert graph.bounds(root.node) == TruthBounds.true()


def test_compile_kb__aggie_fruton() -> None:
    graph = build_graph(parse_kb(knowledge_bases.AGGIE_FRUTON))
    assert [root.name for root in graph.roots] == [
        "eq.reflexivity", "eq.symmetry", "eq.transitivity", "eq.congruence.dog", "query",
    ]
    query = graph.root("query")
    assert query.world is World.AXIOM
    assert graph.nodes[query.node].kind is NodeKind.NOT
    assert graph.bounds(query.node) == TruthBounds.true()
    assert graph.bounds(graph.atom("dog", "Aggie")) == TruthBounds.true()
    assert graph.bounds(graph.atom("=", "Aggie", "Fruton")) == TruthBounds.true()
    assert graph.bounds(graph.atom("dog", "Fruton")) == TruthBounds.unknown()
    assert graph.tables["dog"].get(("Fruton",)) == TruthBounds.unknown()


def test_compile_kb__propositional_has_no_quantifiers() -> None:
    graph = compile_kb(parse_kb(knowledge_bases.MODUS_PONENS))
    kinds = [node.kind for node in graph.nodes]
    assert NodeKind.FORALL not in kinds and NodeKind.EXISTS not in kinds


@pytest.mark.parametrize(
    "axiom, n_nodes", [
        ("(implies p q)", 3),
        ("(and p (not p))", 3),
        ("(or p q (and q r))", 5),
        ("(implies (and p q) (or q r))", 6),
        # iff: two implications and their conjunction.
        ("(iff p q)", 5),
    ],
)
def test_compile_kb__node_count(axiom: str, n_nodes: int) -> None:
    graph = compile_kb(parse_kb(
        f"predicate p/0\npredicate q/0\npredicate r/0\naxiom {axiom}\n",
    ))
    assert len(graph.nodes) == n_nodes


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_compile_kb__grounding_count(depth: int) -> None:
    variables = " ".join(f"x{i}" for i in range(depth))
    kb = parse_kb(
        "predicate P/1\nconstant a\nconstant b\nconstant c\n"
        f"axiom (forall ({variables}) (P x0))\n",
    )
    graph = compile_kb(kb)
    quantifiers = [node for node in graph.nodes if node.kind is NodeKind.FORALL]
    innermost = [
        node for node in quantifiers
        if graph.nodes[node.children[0]].kind is NodeKind.PREDICATE
    ]
    # d^(k-1) innermost quantifier nodes, each with d groundings.
    assert sum(len(node.children) for node in innermost) == 3 ** depth


def test_compile_kb__topological_ids() -> None:
    graph = build_graph(parse_kb(knowledge_bases.AGGIE_FRUTON))
    for node in graph.nodes:
        assert all(child < node.id for child in node.children)


def test_compile_kb__shared_parameters_across_groundings() -> None:
    graph = build_graph(parse_kb(knowledge_bases.AGGIE_FRUTON))
    parameters = {
        node.parameters for node in graph.nodes if node.kind is NodeKind.IMPLIES
    }
    # symmetry, transitivity, congruence and the two implications of its iff.
    assert len(parameters) == 5
    conjunctions = {node.parameters for node in graph.nodes if node.kind is NodeKind.AND}
    # transitivity's antecedent and congruence's iff.
    assert len(conjunctions) == 2
    assert len(graph.parameters) == 7


def test_compile_kb__weights() -> None:
    graph = compile_kb(parse_kb(
        "predicate p/0\npredicate q/0\naxiom (or :weights (0.5 2) :bias 0.25 p q)\n",
    ))
    assert graph.parameters == [Parameters([0.5, 2.0], 0.25)]


def test_compile_kb__numbered_axiom_keeps_its_parameters() -> None:
    graph = compile_kb(parse_kb(
        "predicate p/0\npredicate q/0\n"
        "axiom axiom2 (or :weights (0.5 0.5) p q)\naxiom (and p q)\n",
    ))
    assert graph.parameters == [Parameters([0.5, 0.5], 1.0), Parameters([1.0, 1.0], 1.0)]


def test_compile_kb__deterministic() -> None:
    first = build_graph(parse_kb(knowledge_bases.AGGIE_FRUTON))
    second = build_graph(parse_kb(knowledge_bases.AGGIE_FRUTON))
    assert first.nodes == second.nodes
    assert format_graph(first) == format_graph(second)


def test_compile_kb__unmentioned_fact() -> None:
    graph = compile_kb(parse_kb("predicate p/0\npredicate q/0\nfact (q) false\naxiom p\n"))
    assert graph.bounds(graph.atom("q")) == TruthBounds.false()


def test_compile_kb__empty_domain() -> None:
    with pytest.raises(CompileError, match="empty domain"):
        compile_kb(parse_kb("predicate P/1\naxiom (forall x (P x))\n"))


def test_compile_kb__not_function_free() -> None:
    kb = parse_kb(knowledge_bases.NESTED_FUNCTIONS)
    with pytest.raises(CompileError, match="function-free"):
        compile_kb(kb)
    # Fine once the functions are eliminated.
    compile_kb(prepare_kb(kb))


def test_atom__missing() -> None:
    graph = compile_kb(parse_kb(knowledge_bases.MODUS_PONENS))
    with pytest.raises(KeyError):
        graph.atom("c")


def test_format_graph() -> None:
    graph = compile_kb(parse_kb(knowledge_bases.MODUS_PONENS))
    assert format_graph(graph) == (
        "0 PredicateInput - - - 1.0000 1.0000\n"
        "1 PredicateInput - - - 0.0000 1.0000\n"
        "2 Implies 0,1 1,1 1 1.0000 1.0000\n"
    )


def test_format_graph__empty() -> None:
    assert format_graph(compile_kb(parse_kb(""))) == ""


def test_with_parameters__fresh_bounds() -> None:
    graph = compile_kb(parse_kb(knowledge_bases.MODUS_PONENS))
    graph.lower[1] = 1.0
    copy = graph.with_parameters([Parameters([0.5, 0.5], 1.0)])
    assert copy.bounds(1) == TruthBounds.unknown()
    assert graph.parameters == [Parameters([1.0, 1.0], 1.0)]
    assert copy.nodes is graph.nodes
