"""
traverse: concept-to-concept paths through the merged graph of a corpus.

Typical use: `traverse pray pregnant --corpus predictions.json` renders every
complete path from a "pray" node to a "pregnant" node as DOT.
"""

import argparse
import logging
from pathlib import Path
from typing import List

from app.cli.dependencies import RunConfig, load_model, read_corpus, write_output
from app.core.constants import EXIT_OK
from app.schemas.causal_graph import ConceptQuery
from app.services.causal_graph import CausalGraphService, export_graph
from app.services.encoder import build_encoder

logger = logging.getLogger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("traverse", parents=parents, help="Find paths between two concepts")
    parser.add_argument("source", help="Source concept, e.g. pray")
    parser.add_argument("destination", help="Destination concept, e.g. pregnant")
    parser.add_argument("--corpus", type=Path, help="Gold or predicted corpus JSON")
    parser.add_argument("--model-dir", type=Path, default=None, help="Checkpoint whose encoder serves vector matching")
    parser.add_argument("--encoder", default=None, help="Encoder for vector matching when no checkpoint is given")
    parser.add_argument("--matcher", choices=["lemma", "vector"], default=None)
    parser.add_argument("--threshold", type=float, default=None, help="Cosine cutoff for vector matching")
    parser.add_argument("--max-hops", type=int, default=None)
    parser.add_argument("--format", choices=["dot", "json"], default="dot")
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--labeled-modifiers", action="store_true", help="Label modifier edges in DOT output")


def run(config: RunConfig) -> int:
    settings = config.settings
    corpus = read_corpus(config.corpus)
    graph = CausalGraphService.merge_graphs([(s.sentence_id, s.gold) for s in corpus])

    encoder = None
    if settings.MATCHER == "vector":
        encoder = load_model(config).encoder if config.model_dir else build_encoder(settings.ENCODER_NAME)

    result = CausalGraphService.traverse(
        ConceptQuery(text=config.source, matcher=settings.MATCHER, threshold=settings.VECTOR_THRESHOLD),
        ConceptQuery(text=config.destination, matcher=settings.MATCHER, threshold=settings.VECTOR_THRESHOLD),
        graph,
        max_hops=settings.MAX_HOPS,
        encoder=encoder,
    )
    write_output(
        export_graph(result, config.output_format, draw_modifiers_unlabeled=config.draw_modifiers_unlabeled),
        config.out,
    )
    return EXIT_OK
