"""Retrieval quality scoring on a labeled store.

Every stored image is used once as a query against its own store (the
query stays in, so it is always part of its own returned set).  For each
query the returned set of the x closest images is scored three ways:
precision, recall, and the retrieval score, which counts mismatches in
both directions: returned images of another class plus same-class images
that were not returned.  Because of that two-part count the mismatch
total can exceed x (each missed in-class image implies one off-class
return when x equals the class size); the percentage is computed from the
literal count and clamped to [0, 100] rather than redefining the rule.

Class means average over each class's queries; the macro figures are
unweighted means over the class means.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SingleClassError, UnlabeledCorpusError
from .metrics import MetricSpec
from .query import QuerySpec, rank
from .store import FeatureStore
from .validation import check_positive_int

__all__ = [
    "EvalConfig",
    "QueryScore",
    "EvalReport",
    "precision",
    "recall",
    "retrieval_score",
    "evaluate_corpus",
]


@dataclass(frozen=True)
class EvalConfig:
    """Returned-set size x plus the metric and weights used to rank."""

    x: int
    metric: MetricSpec
    weights: dict = field(default_factory=lambda: {"gch": 1.0})

    def __post_init__(self):
        check_positive_int(self.x, "x")


@dataclass(frozen=True)
class QueryScore:
    id: str
    label: str
    precision: float
    recall: float
    score: float


@dataclass(frozen=True)
class EvalReport:
    """Per-query rows plus per-class and macro means."""

    rows: tuple
    class_means: dict
    macro: tuple
    config: EvalConfig

    def to_csv(self) -> str:
        """Render the report in the comma-separated exchange format.

        One row per query, then one CLASS row per label, then the MACRO
        row; all figures printed with 6 decimal places.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["query_id", "class", "precision", "recall", "score"])
        for row in self.rows:
            writer.writerow(
                [row.id, row.label]
                + [f"{v:.6f}" for v in (row.precision, row.recall, row.score)]
            )
        for label in sorted(self.class_means):
            writer.writerow(
                ["CLASS", label] + [f"{v:.6f}" for v in self.class_means[label]]
            )
        writer.writerow(["MACRO", ""] + [f"{v:.6f}" for v in self.macro])
        return buffer.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")


def precision(retrieved, relevant) -> float:
    """Fraction of the retrieved set that is relevant."""
    retrieved = set(retrieved)
    if not retrieved:
        raise ValueError("retrieved set must not be empty")
    return len(retrieved & set(relevant)) / len(retrieved)


def recall(retrieved, relevant) -> float:
    """Fraction of the relevant set that was retrieved."""
    relevant = set(relevant)
    if not relevant:
        raise ValueError("relevant set must not be empty")
    return len(set(retrieved) & relevant) / len(relevant)


def retrieval_score(returned, query_class, store: FeatureStore) -> float:
    """Percentage score over an ordered returned list of x ids.

    Mismatches are returned ids outside the query's class plus class
    members missing from the returned set; the raw percentage
    ``100 * (1 - mismatches / x)`` is clamped to [0, 100].
    """
    if query_class is None:
        raise ValueError("retrieval score needs a labeled query")
    returned = list(returned)
    if not returned:
        raise ValueError("returned list must not be empty")
    class_members = {e.id for e in store.entries if e.label == query_class}
    returned_set = set(returned)
    mismatches = len(returned_set - class_members) + len(class_members - returned_set)
    score = 100.0 * (1.0 - mismatches / len(returned))
    return min(max(score, 0.0), 100.0)


def evaluate_corpus(store: FeatureStore, cfg: EvalConfig) -> EvalReport:
    """Score every stored image as a query and aggregate per class."""
    if any(e.label is None for e in store.entries):
        raise UnlabeledCorpusError("evaluation needs a label on every entry")
    labels = store.labels()
    if len(labels) < 2:
        raise SingleClassError("evaluation needs at least 2 classes")

    x = min(cfg.x, len(store))
    spec = QuerySpec(metric=cfg.metric, k=x, weights=cfg.weights)
    by_label = {}
    rows = []
    for entry in store.entries:
        returned = [r.id for r in rank(entry, store, spec)]
        relevant = {e.id for e in store.entries if e.label == entry.label}
        row = QueryScore(
            id=entry.id,
            label=entry.label,
            precision=precision(returned, relevant),
            recall=recall(returned, relevant),
            score=retrieval_score(returned, entry.label, store),
        )
        rows.append(row)
        by_label.setdefault(entry.label, []).append(row)

    def mean(values):
        return sum(values) / len(values)

    class_means = {
        label: (
            mean([r.precision for r in scored]),
            mean([r.recall for r in scored]),
            mean([r.score for r in scored]),
        )
        for label, scored in by_label.items()
    }
    macro = tuple(
        mean([class_means[label][i] for label in sorted(class_means)])
        for i in range(3)
    )
    return EvalReport(rows=tuple(rows), class_means=class_means, macro=macro, config=cfg)
