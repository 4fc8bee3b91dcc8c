from .checkpoint import load_checkpoint, save_checkpoint
from .classifiers import classify_attributes, classify_entities, classify_relations
from .core import ExtractorService
from .inference import extract, extract_many
from .model import PairRepresentation, SpearModel
from .training import sentence_loss, train

__all__ = [
    "ExtractorService",
    "PairRepresentation",
    "SpearModel",
    "classify_attributes",
    "classify_entities",
    "classify_relations",
    "extract",
    "extract_many",
    "load_checkpoint",
    "save_checkpoint",
    "sentence_loss",
    "train",
]
