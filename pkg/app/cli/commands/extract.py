"""
extract: predict knowledge graphs with a trained checkpoint.

Input is a corpus JSON file (gold annotations are ignored, ids are kept) or
plain text with one sentence per line. Output is a corpus JSON file whose
graphs are the predictions.
"""

import argparse
import logging
from pathlib import Path
from typing import List

from app.cli.dependencies import RunConfig, inference_config, load_model, read_sentences, write_output
from app.core.constants import EXIT_OK
from app.core.logging import log_event
from app.schemas.corpus import AnnotatedSentence
from app.services.corpus_service import CorpusService
from app.services.extractor import ExtractorService
from app.utils.common import format_graph_summary

logger = logging.getLogger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("extract", parents=parents, help="Extract graphs from sentences")
    parser.add_argument("--corpus", type=Path, help="Corpus JSON or text file with one sentence per line")
    parser.add_argument("--model-dir", type=Path, help="Checkpoint directory")
    parser.add_argument("--out", type=Path, default=None, help="Prediction corpus JSON (default: stdout)")
    parser.add_argument("--rel-threshold", type=float, default=None)
    parser.add_argument("--attr-threshold", type=float, default=None)
    parser.add_argument("--max-span-len", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)


def predict(config: RunConfig, sentences: List[AnnotatedSentence]) -> List[AnnotatedSentence]:
    """Run the checkpoint over sentences; ids and order are preserved."""
    model = load_model(config)
    model_config = inference_config(config, model)
    return ExtractorService.predict_sentences(sentences, model, model_config, workers=config.settings.EXTRACT_WORKERS)


def run(config: RunConfig) -> int:
    sentences = read_sentences(config.corpus)
    predictions = predict(config, sentences)
    for prediction in predictions:
        log_event(
            logger, "sentence_extracted", level=logging.DEBUG,
            sentence_id=prediction.sentence_id, summary=format_graph_summary(prediction.gold),
        )
    write_output(CorpusService.write_corpus(predictions).decode("utf-8"), config.out)
    log_event(
        logger,
        "extraction_completed",
        sentences=len(predictions),
        entities=sum(len(p.gold.entities) for p in predictions),
        relations=sum(len(p.gold.relations) for p in predictions),
    )
    return EXIT_OK
