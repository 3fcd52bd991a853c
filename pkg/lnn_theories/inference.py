# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Bound propagation over a compiled neuron graph.

A pass is a full upward sweep (atoms to roots) followed by a full downward sweep
(roots to atoms). Bounds are only ever tightened: a lower bound is replaced by a
larger candidate and an upper bound by a smaller one. A node whose bounds cross
is a contradiction; it is reported and keeps propagating its crossed interval.
"""

from __future__ import annotations

import dataclasses
import logging
import typing

from . import activations
from .autodiff import Scalar
from .bounds import (
    CONTRADICTION_TOLERANCE,
    DEFAULT_ALPHA,
    PrimaryState,
    TruthBounds,
    classify_state,
    validate_alpha,
)
from .errors import ConfigurationError, InvariantViolation
from .graph import NeuronGraph, NodeKind

LOG = logging.getLogger(__name__)

#: Slack allowed when checking that a pass only tightened bounds.
_MONOTONICITY_SLACK = 1e-12


@dataclasses.dataclass(frozen=True)
class InferenceConfig:
    alpha: float = DEFAULT_ALPHA
    max_passes: int = 100
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        validate_alpha(self.alpha)
        if self.max_passes < 1:
            raise ConfigurationError(f"max_passes must be at least 1, got {self.max_passes}")
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}")


@dataclasses.dataclass(frozen=True)
class InferenceReport:
    passes_run: int
    converged: bool
    #: Ids of the nodes whose lower bound ended above their upper bound.
    contradictions: tuple[int, ...]
    states: typing.Mapping[str, tuple[PrimaryState, TruthBounds]]


def _inputs(graph: NeuronGraph, children: typing.Iterable[int]) -> list[TruthBounds]:
    return [graph.bounds(child) for child in children]


def _tighten(
    graph: NeuronGraph,
    node: int,
    lower: Scalar | None,
    upper: Scalar | None,
) -> None:
    if lower is not None:
        lower = activations.clamp(lower)
        if lower > graph.lower[node]:
            graph.lower[node] = lower
    if upper is not None:
        upper = activations.clamp(upper)
        if upper < graph.upper[node]:
            graph.upper[node] = upper


def upward_pass(graph: NeuronGraph, node_id: int) -> None:
    """Tighten a node's bounds with the image of its children's bounds."""
    node = graph.nodes[node_id]
    inputs = _inputs(graph, node.children)
    match node.kind:
        case NodeKind.PREDICATE:
            return
        case NodeKind.NOT:
            computed = activations.upward_not(inputs[0])
        case NodeKind.AND:
            computed = activations.upward_and(inputs, graph.weights(node), graph.bias(node))
        case NodeKind.OR:
            computed = activations.upward_or(inputs, graph.weights(node), graph.bias(node))
        case NodeKind.IMPLIES:
            computed = activations.upward_implies(
                inputs[0], inputs[1], graph.weights(node), graph.bias(node),
            )
        case NodeKind.FORALL:
            computed = activations.upward_forall(inputs)
        case NodeKind.EXISTS:
            computed = activations.upward_exists(inputs)
    _tighten(graph, node_id, computed.lower, computed.upper)


def downward_pass(graph: NeuronGraph, node_id: int) -> None:
    """Tighten the children of a node with what the node's bounds imply about them."""
    node = graph.nodes[node_id]
    own = graph.bounds(node_id)
    inputs = _inputs(graph, node.children)
    candidates: list[activations.Candidate]
    match node.kind:
        case NodeKind.PREDICATE:
            return
        case NodeKind.NOT:
            candidates = [activations.downward_not(own)]
        case NodeKind.AND:
            candidates = activations.downward_and(
                own, inputs, graph.weights(node), graph.bias(node),
            )
        case NodeKind.OR:
            candidates = activations.downward_or(
                own, inputs, graph.weights(node), graph.bias(node),
            )
        case NodeKind.IMPLIES:
            candidates = activations.downward_implies(
                own, inputs[0], inputs[1], graph.weights(node), graph.bias(node),
            )
        case NodeKind.FORALL:
            candidates = [activations.downward_forall(own)] * len(node.children)
        case NodeKind.EXISTS:
            candidates = [activations.downward_exists(own)] * len(node.children)
    # Candidates are computed from the bounds before this node's update, so a child
    # appearing twice (as in ``p and p``) is tightened by both positions in turn.
    for child, (lower, upper) in zip(node.children, candidates):
        _tighten(graph, child, lower, upper)


def _snapshot(graph: NeuronGraph) -> list[tuple[float, float]]:
    return [(float(lower), float(upper)) for lower, upper in zip(graph.lower, graph.upper)]


def _check_refinement(
    before: list[tuple[float, float]],
    after: list[tuple[float, float]],
) -> float:
    """The largest bound movement between two snapshots, which must only have tightened."""
    delta = 0.0
    for node, ((lower0, upper0), (lower1, upper1)) in enumerate(zip(before, after)):
        if lower1 < lower0 - _MONOTONICITY_SLACK or upper1 > upper0 + _MONOTONICITY_SLACK:
            raise InvariantViolation(
                f"node {node} loosened from [{lower0}, {upper0}] to [{lower1}, {upper1}]",
            )
        delta = max(delta, lower1 - lower0, upper0 - upper1)
    return delta


def contradictions(graph: NeuronGraph) -> tuple[int, ...]:
    return tuple(
        node.id for node in graph.nodes
        if graph.bounds(node.id).is_contradiction(CONTRADICTION_TOLERANCE)
    )


def root_states(
    graph: NeuronGraph,
    alpha: float = DEFAULT_ALPHA,
) -> dict[str, tuple[PrimaryState, TruthBounds]]:
    states = {}
    for root in graph.roots:
        lower, upper = graph.bounds(root.node)
        bounds = TruthBounds(float(lower), float(upper))
        states[root.name] = (classify_state(bounds, alpha), bounds)
    return states


def infer(graph: NeuronGraph, config: InferenceConfig = InferenceConfig()) -> InferenceReport:
    """
    Propagate bounds until no bound moves by more than ``config.tolerance`` in a pass,
    or ``config.max_passes`` passes have run.

    Inference continues from the graph's current bounds; call
    :meth:`NeuronGraph.reset` first to start again from the facts and axioms.
    """
    order = range(len(graph.nodes))
    converged = False
    passes_run = 0
    while passes_run < config.max_passes:
        before = _snapshot(graph)
        for node_id in order:
            upward_pass(graph, node_id)
        for node_id in reversed(order):
            downward_pass(graph, node_id)
        passes_run += 1
        delta = _check_refinement(before, _snapshot(graph))
        LOG.debug("Pass %d moved bounds by at most %g", passes_run, delta)
        if delta <= config.tolerance:
            converged = True
            break

    found = contradictions(graph)
    if converged:
        LOG.info("Inference converged after %d pass(es)", passes_run)
    else:
        LOG.info("Inference stopped after %d pass(es) without converging", passes_run)
    if found:
        LOG.info("%d node(s) are contradictory", len(found))
    return InferenceReport(
        passes_run=passes_run,
        converged=converged,
        contradictions=found,
        states=root_states(graph, config.alpha),
    )
