from typing import Dict, Iterable, List

from pydantic import BaseModel, Field


class LabelCounts(BaseModel):
    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)

    @property
    def support(self) -> int:
        """Gold occurrences of the label."""
        return self.tp + self.fn


class ClassCounts(BaseModel):
    """True/false positive and false negative counts per label."""

    counts: Dict[str, LabelCounts] = Field(default_factory=dict)

    def __getitem__(self, label: str) -> LabelCounts:
        return self.counts.get(label, LabelCounts())

    def add(self, label: str, tp: int = 0, fp: int = 0, fn: int = 0) -> None:
        current = self.counts.get(label, LabelCounts())
        self.counts[label] = LabelCounts(tp=current.tp + tp, fp=current.fp + fp, fn=current.fn + fn)

    def merge(self, other: "ClassCounts") -> "ClassCounts":
        merged = ClassCounts(counts=dict(self.counts))
        for label, counts in other.counts.items():
            merged.add(label, counts.tp, counts.fp, counts.fn)
        return merged

    def labels(self) -> List[str]:
        return sorted(self.counts)

    def values(self) -> Iterable[LabelCounts]:
        return self.counts.values()


class Scores(BaseModel):
    precision: float
    recall: float
    f1: float


class LabelScore(Scores):
    label: str
    support: int
    tp: int
    fp: int
    fn: int


class SectionReport(BaseModel):
    rows: List[LabelScore] = Field(default_factory=list)
    micro: Scores


class EvalReport(BaseModel):
    """Per-label and micro-averaged scores, one section per element kind."""

    sentences: int
    entities: SectionReport
    attributes: SectionReport
    relations: SectionReport
