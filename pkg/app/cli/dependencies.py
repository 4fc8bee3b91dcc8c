"""
Command dependencies.

This module turns parsed command-line arguments into a validated RunConfig
(settings layered over flags, resolved schema, checked paths) and provides the
loaders and writers shared by the commands.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict

from app.core.config import Settings, load_settings
from app.schemas.corpus import AnnotatedSentence
from app.schemas.graph import KnowledgeGraph, SchemaDef
from app.schemas.model_config import ModelConfig
from app.services.corpus_service import CorpusService
from app.services.extractor import ExtractorService, SpearModel
from app.services.schema_service import SchemaService
from app.utils.exceptions import NotFoundError, UsageError

logger = logging.getLogger(__name__)

Command = Literal["train", "extract", "evaluate", "traverse", "render"]

# argparse destination -> Settings field
SETTING_FLAGS: Dict[str, str] = {
    "schema": "SCHEMA_NAME",
    "encoder": "ENCODER_NAME",
    "seed": "SEED",
    "epochs": "EPOCHS",
    "max_span_len": "MAX_SPAN_LEN",
    "rel_threshold": "RELATION_THRESHOLD",
    "attr_threshold": "ATTRIBUTE_THRESHOLD",
    "test_fraction": "TEST_FRACTION",
    "workers": "EXTRACT_WORKERS",
    "matcher": "MATCHER",
    "threshold": "VECTOR_THRESHOLD",
    "max_hops": "MAX_HOPS",
    "log_level": "LOG_LEVEL",
}


class RunConfig(BaseModel):
    """Everything one command invocation needs, validated before work begins."""

    model_config = ConfigDict(frozen=True)

    command: Command
    settings: Settings
    graph_schema: SchemaDef
    schema_given: bool = False
    corpus: Optional[Path] = None
    pred: Optional[Path] = None
    model_dir: Optional[Path] = None
    out: Optional[Path] = None
    output_format: Literal["dot", "json", "text"] = "dot"
    source: Optional[str] = None
    destination: Optional[str] = None
    holdout: bool = False
    labeled_modifiers: bool = False

    @property
    def draw_modifiers_unlabeled(self) -> bool:
        return self.settings.DRAW_MODIFIERS_UNLABELED and not self.labeled_modifiers


def _require_file(path: Optional[Path], what: str) -> Path:
    if path is None:
        raise UsageError(f"--{what} is required")
    if not path.is_file():
        raise NotFoundError(what.capitalize().replace("-", " "), str(path))
    return path


def _require_dir(path: Optional[Path], what: str) -> Path:
    if path is None:
        raise UsageError(f"--{what} is required")
    if not path.is_dir():
        raise NotFoundError(what.capitalize().replace("-", " "), str(path))
    return path


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Validate arguments and layer flags over the config file and environment.

    Raises:
        UsageError: If a required flag is missing
        NotFoundError: If an input path does not exist
        ConfigError: If a setting is invalid
    """
    overrides: Dict[str, Any] = {
        setting: getattr(args, dest) for dest, setting in SETTING_FLAGS.items() if hasattr(args, dest)
    }
    settings = load_settings(getattr(args, "config", None), overrides)
    schema = SchemaService.resolve_schema(settings.SCHEMA_NAME)

    command = args.command
    corpus = getattr(args, "corpus", None)
    pred = getattr(args, "pred", None)
    model_dir = getattr(args, "model_dir", None)

    if command == "train":
        _require_file(corpus, "corpus")
        if model_dir is None:
            raise UsageError("--model-dir is required")
    elif command == "extract":
        _require_file(corpus, "corpus")
        _require_dir(model_dir, "model-dir")
    elif command == "evaluate":
        _require_file(corpus, "corpus")
        if pred is not None:
            _require_file(pred, "pred")
        else:
            _require_dir(model_dir, "model-dir")
    elif command in ("traverse", "render"):
        _require_file(corpus, "corpus")
        if model_dir is not None:
            _require_dir(model_dir, "model-dir")

    out = getattr(args, "out", None)
    if out is not None and out.exists() and out.is_dir():
        raise UsageError(f"--out '{out}' is a directory")

    return RunConfig(
        command=command,
        settings=settings,
        graph_schema=schema,
        schema_given=getattr(args, "schema", None) is not None,
        corpus=corpus,
        pred=pred,
        model_dir=model_dir,
        out=out,
        output_format=getattr(args, "format", None) or "dot",
        source=getattr(args, "source", None),
        destination=getattr(args, "destination", None),
        holdout=getattr(args, "holdout", False),
        labeled_modifiers=getattr(args, "labeled_modifiers", False),
    )


def read_corpus(path: Path, schema: Optional[SchemaDef] = None) -> List[AnnotatedSentence]:
    return CorpusService.load_corpus(path.read_bytes(), schema)


def read_sentences(path: Path) -> List[AnnotatedSentence]:
    """
    Sentences to extract from: a corpus JSON file, or plain text with one sentence per line.

    Plain-text sentences get their 0-based line number (blank lines skipped) as id.
    """
    raw = path.read_bytes()
    if raw.lstrip()[:1] in (b"[", b"{"):
        return CorpusService.load_corpus(raw)

    sentences = []
    for index, line in enumerate(CorpusService.decode_text(raw).splitlines()):
        tokens = CorpusService.tokenize_sentence(line)
        if tokens:
            sentences.append(AnnotatedSentence(sentence_id=str(index), gold=KnowledgeGraph(tokens=tuple(tokens))))
    return sentences


def load_model(config: RunConfig) -> SpearModel:
    """Checkpoint in --model-dir, checked against --schema when the flag was given."""
    return ExtractorService.load_model(config.model_dir, expected_schema=config.graph_schema if config.schema_given else None)


def inference_config(config: RunConfig, model: SpearModel) -> ModelConfig:
    """The checkpoint's config with threshold and span-length flags applied."""
    settings = config.settings
    explicit = settings.model_fields_set
    updates = {}
    if "RELATION_THRESHOLD" in explicit:
        updates["relation_threshold"] = settings.RELATION_THRESHOLD
    if "ATTRIBUTE_THRESHOLD" in explicit:
        updates["attribute_threshold"] = settings.ATTRIBUTE_THRESHOLD
    if "MAX_SPAN_LEN" in explicit:
        updates["max_span_len"] = settings.MAX_SPAN_LEN
    return model.config.model_copy(update=updates)


def write_output(payload: str, out: Optional[Path]) -> None:
    """Write to --out (parents created) or to standard output."""
    if out is None:
        sys.stdout.write(payload)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(payload.encode("utf-8"))
    logger.info(f"Wrote {out}")
