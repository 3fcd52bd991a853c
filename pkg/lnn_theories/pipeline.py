# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

from __future__ import annotations

import logging
from pathlib import Path

from .graph import NeuronGraph, compile_kb
from .kb import KnowledgeBase
from .parser import parse_kb
from .rewriter import rewrite_kb
from .theories import add_equality_theory

LOG = logging.getLogger(__name__)


def load_kb(path: Path) -> KnowledgeBase:
    LOG.info("Reading knowledge base from %s", path)
    return parse_kb(path.read_text(encoding="utf-8"))


def prepare_kb(kb: KnowledgeBase) -> KnowledgeBase:
    """
    Equality axioms first, then function elimination: the congruence axioms of the
    user's predicates precede those of the introduced relations.
    """
    return rewrite_kb(add_equality_theory(kb))


def build_graph(kb: KnowledgeBase) -> NeuronGraph:
    return compile_kb(prepare_kb(kb))
