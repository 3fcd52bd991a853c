# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

import argparse
from pathlib import Path
import typing

from ..graph import format_graph
from ..learning import LearnConfig, train
from ..pipeline import build_graph, load_kb
from ._outcome import CommandOutcome, ExitCode, emit, guarded


def configure_parser(parser: argparse.ArgumentParser) -> None:
    parser.description = "Learn connective weights and biases which reduce contradiction"

    parser.add_argument("--kb", type=Path, required=True, help="the .lnn file to read")
    parser.add_argument("--epochs", type=int, required=True)
    parser.add_argument("--lr", type=float, required=True, help="learning rate")
    parser.add_argument("--seed", type=int, default=None, help="seed for --jitter")
    parser.add_argument(
        "--jitter", type=float, default=0.0,
        help="perturb every parameter uniformly by up to this much before training",
    )
    parser.add_argument("--weight-floor", type=float, default=0.0)
    parser.add_argument(
        "--dump-graph", action="store_true",
        help="print the graph with the learnt parameters after the loss history",
    )


def cmd_learn(path: Path, config: LearnConfig, *, dump_graph: bool = False) -> CommandOutcome:
    def run() -> CommandOutcome:
        graph = build_graph(load_kb(path))
        history = train(graph, config)
        stdout = "".join(
            f"{epoch} {report.total:.6f}\n" for epoch, report in enumerate(history, start=1)
        )
        if dump_graph:
            stdout += format_graph(graph)
        return CommandOutcome(ExitCode.OK, stdout)
    return guarded(run)


def handler(args: typing.Any) -> int:
    path: Path = args.kb

    def configured() -> CommandOutcome:
        config = LearnConfig(
            epochs=args.epochs,
            learning_rate=args.lr,
            weight_floor=args.weight_floor,
            seed=args.seed,
            jitter=args.jitter,
        )
        return cmd_learn(path, config, dump_graph=args.dump_graph)
    return emit(guarded(configured))
