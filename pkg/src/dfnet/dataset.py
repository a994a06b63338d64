"""Labelled power-cycle datasets: synthetic generation over Q sectors and CSV I/O."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .preprocess import normalize_cycle
from .signal_model import TWO_PI, ArrayConfig, SourceConfig, simulate_cycle, wrap_angle


class CsvFormatError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def label_of(theta, q: int = 8):
    """Sector index whose centre ``i * 2*pi/q`` is nearest; a boundary belongs to the upper sector."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    t = np.asarray(theta, dtype=np.float64)
    if not np.all(np.isfinite(t)):
        raise ValueError("azimuth must be finite")
    # wrap the integer sector, not the angle: wrapping first perturbs exact boundaries
    idx = np.mod(np.floor(t * q / TWO_PI + 0.5).astype(np.int64), q)
    return int(idx) if np.ndim(idx) == 0 else idx


def class_center_deg(label: int, q: int = 8) -> float:
    return 360.0 * label / q


@dataclass
class LabeledDataset:
    """Raw power cycles with sector labels; features are the normalised cycles."""

    powers: np.ndarray
    labels: np.ndarray
    q_classes: int = 8
    provenance: dict = field(default_factory=dict)
    snr_db: np.ndarray | None = None

    def __post_init__(self):
        self.powers = np.asarray(self.powers, dtype=np.float64)
        if self.powers.ndim != 2:
            raise ValueError(f"powers must be 2-D (samples, antennas), got shape {self.powers.shape}")
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.powers.shape[0] != self.labels.size:
            raise ValueError("powers and labels differ in length")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.q_classes):
            raise ValueError(f"labels must lie in 0..{self.q_classes - 1}")

    def __len__(self) -> int:
        return int(self.labels.size)

    @property
    def n_antennas(self) -> int:
        return self.powers.shape[1]

    @property
    def features(self) -> np.ndarray:
        if len(self) == 0:
            return self.powers.copy()
        return normalize_cycle(self.powers)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.q_classes)

    def equals(self, other: "LabeledDataset") -> bool:
        return (self.q_classes == other.q_classes
                and self.powers.shape == other.powers.shape
                and np.array_equal(self.powers, other.powers)
                and np.array_equal(self.labels, other.labels))


@dataclass(frozen=True)
class GenConfig:
    per_class: int = 500
    q_classes: int = 8
    angle_mode: str = "uniform"
    snr_range_db: tuple = (5.0, 20.0)
    k_per_antenna: int = 4096
    signal_power: float = 1.0
    # environment shift for evaluation sets
    noise_offset_db: float = 0.0
    interference_inr_db: float | None = None
    seed: int = 0
    array: ArrayConfig = field(default_factory=ArrayConfig)

    def __post_init__(self):
        if self.per_class < 1:
            raise ValueError(f"per_class must be >= 1, got {self.per_class}")
        if self.q_classes < 2:
            raise ValueError(f"q_classes must be >= 2, got {self.q_classes}")
        if self.angle_mode not in ("center", "uniform"):
            raise ValueError(f"angle_mode must be 'center' or 'uniform', got {self.angle_mode!r}")
        lo, hi = self.snr_range_db
        if lo > hi:
            raise ValueError(f"snr_range_db: low {lo} exceeds high {hi}")
        if self.k_per_antenna < 1:
            raise ValueError(f"k_per_antenna must be >= 1, got {self.k_per_antenna}")
        if not self.signal_power > 0:
            raise ValueError(f"signal_power must be > 0, got {self.signal_power}")


def generate(cfg: GenConfig) -> LabeledDataset:
    """Simulate ``per_class`` cycles for every sector.

    SNR is ``signal_power / noise_power`` at unit gain, drawn uniformly in dB. With
    interference enabled each antenna gets an extra exponentially distributed power
    whose mean is ``interference_inr_db`` above the (offset) noise floor.
    """
    q, n_ant = cfg.q_classes, cfg.array.n_antennas
    width = TWO_PI / q
    total = q * cfg.per_class
    root = np.random.default_rng(cfg.seed)
    labels_req = np.repeat(np.arange(q), cfg.per_class)
    if cfg.angle_mode == "center":
        theta = labels_req * width
    else:
        theta = labels_req * width + root.uniform(-0.5 * width, 0.5 * width, total)
    theta = wrap_angle(theta)
    snr_db = root.uniform(cfg.snr_range_db[0], cfg.snr_range_db[1], total)
    noise = cfg.signal_power * 10.0 ** (-(snr_db - cfg.noise_offset_db) / 10.0)
    if cfg.interference_inr_db is None:
        interference = np.zeros((total, n_ant))
    else:
        mean_i = noise[:, None] * 10.0 ** (cfg.interference_inr_db / 10.0)
        interference = root.exponential(1.0, (total, n_ant)) * mean_i
    seeds = np.random.SeedSequence(cfg.seed).spawn(total)
    powers = np.empty((total, n_ant))
    for i in range(total):
        src = SourceConfig(theta[i], cfg.signal_power, noise[i])
        powers[i] = simulate_cycle(src, cfg.array, cfg.k_per_antenna, seeds[i], interference[i])
    labels = label_of(theta, q)
    prov = {"source": "synthetic", "seed": cfg.seed, "angle_mode": cfg.angle_mode,
            "per_class": cfg.per_class, "k_per_antenna": cfg.k_per_antenna}
    return LabeledDataset(powers, labels, q, prov, snr_db)


def save_csv(ds: LabeledDataset, path) -> None:
    header = [f"p{i + 1}" for i in range(ds.n_antennas)] + ["label"]
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row, label in zip(ds.powers, ds.labels):
        buf.write(",".join(format(v, ".17g") for v in row) + f",{int(label)}\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def load_csv(path, q_classes: int = 8, n_antennas: int | None = None) -> LabeledDataset:
    """Read a ``p1,...,pN,label`` file; ``#`` lines are ignored. Errors name the offending line."""
    text = Path(path).read_text(encoding="utf-8")
    header = None
    powers, labels = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = next(csv.reader([stripped]))
        fields = [f.strip() for f in fields]
        if header is None:
            n = len(fields) - 1
            expected = [f"p{i + 1}" for i in range(n)] + ["label"]
            if n < 1 or fields != expected:
                raise CsvFormatError(path, lineno, f"bad header {fields}; expected p1,...,pN,label")
            if n_antennas is not None and n != n_antennas:
                raise CsvFormatError(path, lineno, f"header has {n} power columns, expected {n_antennas}")
            header = fields
            continue
        if len(fields) != len(header):
            raise CsvFormatError(path, lineno, f"expected {len(header)} columns, got {len(fields)}")
        try:
            row = [float(v) for v in fields[:-1]]
            label = int(fields[-1])
        except ValueError as exc:
            raise CsvFormatError(path, lineno, f"unparseable value ({exc})") from None
        if not all(np.isfinite(row)) or min(row) < 0:
            raise CsvFormatError(path, lineno, "powers must be finite and non-negative")
        if not 0 <= label < q_classes:
            raise CsvFormatError(path, lineno, f"label {label} out of range 0..{q_classes - 1}")
        powers.append(row)
        labels.append(label)
    if header is None:
        raise CsvFormatError(path, 1, "missing header")
    n = len(header) - 1
    arr = np.array(powers, dtype=np.float64).reshape(len(powers), n)
    return LabeledDataset(arr, np.array(labels, dtype=np.int64), q_classes, {"source": "ingested", "path": str(path)})
