"""
evaluate: score predictions against a gold corpus.

Predictions come from --pred (a corpus JSON aligned with the gold file) or are
produced on the fly from --model-dir. With --out the JSON report is written
there and the text table next to it (same name, .txt; a report already named
*.txt gets *.txt.txt); without --out the table (or the JSON with --format json)
goes to standard output.
"""

import argparse
import logging
from pathlib import Path
from typing import List

from app.cli.commands.extract import predict
from app.cli.dependencies import RunConfig, read_corpus, write_output
from app.core.constants import EXIT_OK
from app.services.scorer_service import ScorerService
from app.utils.common import format_eval_table
from app.utils.exceptions import AlignmentError

logger = logging.getLogger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("evaluate", parents=parents, help="Score predictions against gold annotations")
    parser.add_argument("--corpus", type=Path, help="Gold corpus JSON")
    parser.add_argument("--pred", type=Path, default=None, help="Prediction corpus JSON")
    parser.add_argument("--model-dir", type=Path, default=None, help="Checkpoint to predict with when --pred is absent")
    parser.add_argument("--out", type=Path, default=None, help="JSON report path")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--rel-threshold", type=float, default=None)
    parser.add_argument("--attr-threshold", type=float, default=None)
    parser.add_argument("--max-span-len", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)


def table_path(out: Path) -> Path:
    """Text table next to the JSON report; never the report itself."""
    if out.suffix == ".txt":
        return out.with_name(out.name + ".txt")
    return out.with_suffix(".txt")


def run(config: RunConfig) -> int:
    schema = config.graph_schema if config.schema_given else None
    gold = read_corpus(config.corpus, schema)
    if config.pred is not None:
        predictions = read_corpus(config.pred)
    else:
        predictions = predict(config, gold)

    if len(gold) != len(predictions):
        raise AlignmentError(f"Gold corpus has {len(gold)} sentences, predictions have {len(predictions)}")
    for index, (g, p) in enumerate(zip(gold, predictions)):
        if g.sentence_id != p.sentence_id:
            raise AlignmentError(f"Sentence {index}: gold id '{g.sentence_id}' vs predicted id '{p.sentence_id}'")

    report = ScorerService.evaluate([s.gold for s in gold], [s.gold for s in predictions], schema)
    report_json = report.model_dump_json(indent=2) + "\n"
    table = format_eval_table(report)

    if config.out is not None:
        write_output(report_json, config.out)
        write_output(table, table_path(config.out))
        write_output(table, None)
    elif config.output_format == "json":
        write_output(report_json, None)
    else:
        write_output(table, None)
    return EXIT_OK
