# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

"""
Contradiction-minimising learning of connective weights and biases.

The loss is the total bound crossing ``lower - upper`` of the nodes inference leaves
contradictory, crossings within ``CONTRADICTION_TOLERANCE`` counting as none.
Its gradient is obtained by running inference once on dual numbers seeded with the
parameters, which differentiates exactly through every clamp and every
``min``/``max`` branch the float run would take.
"""

from __future__ import annotations

import dataclasses
import logging

import numpy as np

from .autodiff import Dual, Scalar, Vector, gradient_of
from .bounds import CONTRADICTION_TOLERANCE
from .errors import ConfigurationError
from .graph import NeuronGraph, Parameters
from .inference import InferenceConfig, infer

LOG = logging.getLogger(__name__)

#: Consecutive epochs of rising loss before a divergence warning.
DIVERGENCE_PATIENCE = 5


@dataclasses.dataclass(frozen=True)
class LearnConfig:
    epochs: int
    learning_rate: float
    weight_floor: float = 0.0
    fd_epsilon: float = 1e-5
    seed: int | None = None
    #: Half-width of the uniform noise added to every parameter before training.
    jitter: float = 0.0
    inference: InferenceConfig = InferenceConfig()

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be at least 1, got {self.epochs}")
        if not self.learning_rate >= 0:
            raise ConfigurationError(
                f"learning_rate must not be negative, got {self.learning_rate}",
            )
        if not self.weight_floor >= 0:
            raise ConfigurationError(
                f"weight_floor must not be negative, got {self.weight_floor}",
            )
        if not self.fd_epsilon > 0:
            raise ConfigurationError(f"fd_epsilon must be positive, got {self.fd_epsilon}")
        if not self.jitter >= 0:
            raise ConfigurationError(f"jitter must not be negative, got {self.jitter}")


@dataclasses.dataclass(frozen=True)
class LossReport:
    total: float
    #: Node id -> its bound crossing, for the nodes that are contradictory.
    contributions: dict[int, float]


def contradiction_loss(graph: NeuronGraph) -> LossReport:
    contributions = {}
    for node in graph.nodes:
        crossing = float(graph.lower[node.id]) - float(graph.upper[node.id])
        if crossing > CONTRADICTION_TOLERANCE:
            contributions[node.id] = crossing
    return LossReport(total=sum(contributions.values()), contributions=contributions)


def _total_crossing(graph: NeuronGraph) -> Scalar:
    total: Scalar = 0.0
    for lower, upper in zip(graph.lower, graph.upper):
        if lower > upper + CONTRADICTION_TOLERANCE:
            total = total + (lower - upper)
    return total


def parameter_vector(graph: NeuronGraph) -> Vector:
    """Every connective's weights followed by its bias, in parameter order."""
    values: list[float] = []
    for parameters in graph.parameters:
        values.extend(float(w) for w in parameters.weights)
        values.append(float(parameters.bias))
    return np.asarray(values, dtype=np.float64)


def _unflatten(graph: NeuronGraph, values: list[Scalar]) -> list[Parameters]:
    expected = sum(len(p.weights) + 1 for p in graph.parameters)
    if len(values) != expected:
        raise ValueError(f"Expected {expected} parameter values, got {len(values)}")
    parameters = []
    offset = 0
    for current in graph.parameters:
        n = len(current.weights)
        parameters.append(Parameters(list(values[offset:offset + n]), values[offset + n]))
        offset += n + 1
    return parameters


def set_parameter_vector(graph: NeuronGraph, vector: Vector) -> None:
    graph.parameters = _unflatten(graph, [float(v) for v in vector])


def loss_and_gradient(
    graph: NeuronGraph,
    config: InferenceConfig = InferenceConfig(),
) -> tuple[LossReport, Vector]:
    """
    Run inference from the initial bounds and return the loss with its gradient with
    respect to :func:`parameter_vector`.

    The graph is left holding the (float) bounds inference arrived at.
    """
    values = parameter_vector(graph)
    size = len(values)
    duals: list[Scalar] = [Dual.parameter(v, i, size) for i, v in enumerate(values)]
    shadow = graph.with_parameters(_unflatten(graph, duals))
    infer(shadow, config)
    gradient = gradient_of(_total_crossing(shadow), size)

    graph.lower = [float(v) for v in shadow.lower]
    graph.upper = [float(v) for v in shadow.upper]
    return contradiction_loss(graph), gradient


def gradient_step(
    graph: NeuronGraph,
    gradient: Vector,
    config: LearnConfig,
) -> Vector:
    """Apply one projected descent step in place and return the new parameter vector."""
    updated = np.maximum(
        config.weight_floor,
        parameter_vector(graph) - config.learning_rate * gradient,
    )
    set_parameter_vector(graph, updated)
    return updated


def jitter_parameters(graph: NeuronGraph, config: LearnConfig) -> None:
    if config.jitter == 0:
        return
    rng = np.random.default_rng(config.seed)
    values = parameter_vector(graph)
    noise = rng.uniform(-config.jitter, config.jitter, size=values.shape)
    set_parameter_vector(graph, np.maximum(config.weight_floor, values + noise))


def train(graph: NeuronGraph, config: LearnConfig) -> list[LossReport]:
    """
    Alternate inference from the initial bounds with a descent step, ``config.epochs``
    times. The returned history holds the loss seen at the start of each epoch.
    """
    jitter_parameters(graph, config)
    history: list[LossReport] = []
    rising = 0
    for epoch in range(1, config.epochs + 1):
        report, gradient = loss_and_gradient(graph, config.inference)
        if history and report.total > history[-1].total:
            rising += 1
            if rising == DIVERGENCE_PATIENCE:
                LOG.warning(
                    "Loss has increased for %d consecutive epochs (epoch %d, loss %g)",
                    rising, epoch, report.total,
                )
        else:
            rising = 0
        history.append(report)
        LOG.debug("Epoch %d: loss %g", epoch, report.total)
        gradient_step(graph, gradient, config)
    # Leave the graph describing the learnt parameters.
    graph.reset()
    infer(graph, config.inference)
    return history
