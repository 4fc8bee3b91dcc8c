import argparse
import logging
from pathlib import Path
from typing import List

from app.cli.dependencies import RunConfig, read_corpus, write_output
from app.core.constants import EXIT_OK
from app.services.causal_graph import CausalGraphService, export_graph

logger = logging.getLogger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("render", parents=parents, help="Render a corpus or prediction file as DOT/JSON")
    parser.add_argument("--corpus", type=Path, help="Gold or predicted corpus JSON")
    parser.add_argument("--format", choices=["dot", "json"], default="dot")
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--labeled-modifiers", action="store_true", help="Label modifier edges in DOT output")


def run(config: RunConfig) -> int:
    schema = config.graph_schema if config.schema_given else None
    corpus = read_corpus(config.corpus, schema)
    graph = CausalGraphService.merge_graphs([(s.sentence_id, s.gold) for s in corpus])
    write_output(
        export_graph(graph, config.output_format, draw_modifiers_unlabeled=config.draw_modifiers_unlabeled),
        config.out,
    )
    return EXIT_OK
