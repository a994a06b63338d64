"""Confusion matrices, accuracy and the paired SDAE-DNN vs baseline report."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifier import DfClassifier, predict
from .dataset import LabeledDataset, class_center_deg


@dataclass
class ConfusionMatrix:
    """Counts with rows = true class, columns = predicted class."""

    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts)
        if self.counts.ndim != 2 or self.counts.shape[0] != self.counts.shape[1]:
            raise ValueError(f"confusion counts must be square, got {self.counts.shape}")
        if np.any(self.counts < 0):
            raise ValueError("confusion counts must be non-negative")

    @property
    def q(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self):
        return self.counts.sum()

    def percentages(self) -> np.ndarray:
        """Row percentages; rows without samples are NaN."""
        rows = self.counts.sum(axis=1, keepdims=True).astype(np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            pct = 100.0 * self.counts / rows
        pct[rows[:, 0] == 0] = np.nan
        return pct

    def rounded_percentages(self) -> np.ndarray:
        """Integer display percentages, rounded half-up."""
        return np.floor(self.percentages() + 0.5)

    def to_dict(self) -> dict:
        return {"q": self.q, "counts": self.counts.tolist(), "accuracy": accuracy(self)}

    def render(self, title: str = "") -> str:
        labels = [f"{class_center_deg(i, self.q):g}" for i in range(self.q)]
        width = max(5, max(len(s) for s in labels) + 1)
        lines = [title] if title else []
        lines.append(" " * width + "".join(s.rjust(width) for s in labels))
        for i, row in enumerate(self.rounded_percentages()):
            cells = ["-".rjust(width) if np.isnan(v) else f"{int(v)}".rjust(width) for v in row]
            lines.append(labels[i].rjust(width) + "".join(cells))
        lines.append(f"accuracy: {accuracy(self):.3f}%")
        return "\n".join(lines)


def confusion(preds, labels, q: int) -> ConfusionMatrix:
    preds = np.asarray(preds, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if preds.shape != labels.shape:
        raise ValueError(f"{preds.size} predictions vs {labels.size} labels")
    for name, arr in (("prediction", preds), ("label", labels)):
        if arr.size and (arr.min() < 0 or arr.max() >= q):
            raise IndexError(f"{name} index out of range 0..{q - 1}")
    counts = np.zeros((q, q), dtype=np.int64)
    np.add.at(counts, (labels, preds), 1)
    return ConfusionMatrix(counts)


def accuracy(cm: ConfusionMatrix) -> float:
    """Percentage of samples on the diagonal. Takes the matrix entries as weights, so a
    table of row percentages with equal row totals works as input too."""
    total = cm.counts.sum()
    if total == 0:
        raise ValueError("accuracy of an empty confusion matrix")
    return float(100.0 * np.trace(cm.counts) / total)


def evaluate(model: DfClassifier, test: LabeledDataset) -> ConfusionMatrix:
    if model.n_inputs != test.n_antennas:
        raise ValueError(f"model expects {model.n_inputs} antennas, dataset has {test.n_antennas}")
    if model.n_classes != test.q_classes:
        raise ValueError(f"model predicts {model.n_classes} classes, dataset has {test.q_classes}")
    return confusion(predict(model, test.features), test.labels, test.q_classes)


@dataclass
class ComparisonReport:
    proposed: ConfusionMatrix
    baseline: ConfusionMatrix

    @property
    def delta(self) -> float:
        return accuracy(self.proposed) - accuracy(self.baseline)

    def to_dict(self) -> dict:
        return {"proposed": self.proposed.to_dict(), "baseline": self.baseline.to_dict(),
                "delta": self.delta}

    def render(self) -> str:
        return "\n\n".join([
            self.proposed.render("SDAE-DNN (row %)"),
            self.baseline.render("baseline DNN (row %)"),
            f"accuracy delta: {self.delta:+.3f} points",
        ])


def compare(proposed: DfClassifier, baseline: DfClassifier, test: LabeledDataset) -> ComparisonReport:
    return ComparisonReport(evaluate(proposed, test), evaluate(baseline, test))
