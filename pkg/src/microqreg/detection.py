"""Stochastic atom loading and number-resolved fluorescence detection.

Signals are in arbitrary units (a.u.) of integrated fluorescence per site.
The default detection model has a background of 300 a.u. and 400 a.u. per
atom, so 0/1/2 atoms sit at 300/700/1100 a.u.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .beam_optics import SiteGrid
from .register import RegisterState


# -- loading


@dataclass(frozen=True)
class Poisson:
    mean: float = 1.0

    def __post_init__(self):
        if not self.mean > 0:
            raise ValueError("Poisson mean must be > 0")

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.poisson(self.mean, size=size)

    def pmf(self, n) -> np.ndarray:
        return stats.poisson.pmf(n, self.mean)


@dataclass(frozen=True)
class _SingleAtom:
    p1: float

    def __post_init__(self):
        if not 0 <= self.p1 <= 1:
            raise ValueError("single-atom probability must lie in [0, 1]")

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return (rng.random(size) < self.p1).astype(int)

    def pmf(self, n) -> np.ndarray:
        n = np.asarray(n)
        return np.where(n == 1, self.p1, np.where(n == 0, 1.0 - self.p1, 0.0))


@dataclass(frozen=True)
class CollisionalBlockade(_SingleAtom):
    """Light-assisted collisions leave 0 or 1 atom, each with probability 1/2."""

    p1: float = 0.5


@dataclass(frozen=True)
class Optimized(_SingleAtom):
    """Tailored light-assisted collisions; 0 or 1 atom with P(1) = 0.83."""

    p1: float = 0.83


LoadingMode = Poisson | CollisionalBlockade | Optimized

LOADING_MODES = {"poisson": Poisson, "blockade": CollisionalBlockade, "optimized": Optimized}


def loading_mode_from_config(cfg: dict) -> LoadingMode:
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    if kind not in LOADING_MODES:
        raise ValueError(f"unknown loading mode {kind!r}; allowed: {', '.join(LOADING_MODES)}")
    return LOADING_MODES[kind](**cfg)


def load_register(grid: SiteGrid, mode: LoadingMode, seed) -> RegisterState:
    """Independent per-site atom-number draws; loaded atoms start in ``|0>``."""
    rng = np.random.default_rng(seed)
    occupancy = mode.sample(rng, grid.shape)
    return RegisterState.from_occupancy(grid, occupancy)


# -- detection


@dataclass(frozen=True)
class DetectionModel:
    background_level: float = 300.0
    per_atom_signal: float = 400.0
    noise_sigma: float = 60.0

    def __post_init__(self):
        if not self.per_atom_signal > 0:
            raise ValueError("per_atom_signal must be > 0")
        if not self.noise_sigma >= 0:
            raise ValueError("noise_sigma must be >= 0")

    def level(self, n):
        return self.background_level + np.asarray(n) * self.per_atom_signal

    def thresholds(self, n_levels: int) -> np.ndarray:
        """Midpoints between the first ``n_levels`` signal levels."""
        k = np.arange(max(n_levels - 1, 0))
        return self.background_level + (k + 0.5) * self.per_atom_signal


def simulate_fluorescence(occupancy, model: DetectionModel, seed) -> np.ndarray:
    """Analog per-site signal: background + n * per-atom + Gaussian noise."""
    occupancy = np.asarray(occupancy)
    rng = np.random.default_rng(seed)
    signal = model.level(occupancy).astype(float)
    if model.noise_sigma > 0:
        signal = signal + rng.normal(0.0, model.noise_sigma, size=occupancy.shape)
    return signal


@dataclass(frozen=True)
class DetectionRecord:
    signals: np.ndarray
    counts: np.ndarray
    thresholds: np.ndarray
    anomalous: np.ndarray

    def histogram(self, bin_width: float = 20.0):
        """Return ``(bin_centers, counts)`` of the analog signals."""
        flat = self.signals.ravel()
        lo = np.floor(flat.min() / bin_width) * bin_width
        hi = np.ceil(flat.max() / bin_width) * bin_width + bin_width
        edges = np.arange(lo, hi + 0.5 * bin_width, bin_width)
        counts, edges = np.histogram(flat, bins=edges)
        return 0.5 * (edges[:-1] + edges[1:]), counts

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["site_i", "site_j", "signal", "classified_n"])
        signals = np.atleast_2d(self.signals)
        counts = np.atleast_2d(self.counts)
        for (i, j), s in np.ndenumerate(signals):
            writer.writerow([i, j, f"{s:.6f}", int(counts[i, j])])
        return buf.getvalue()

    def histogram_csv(self, bin_width: float = 20.0) -> str:
        centers, counts = self.histogram(bin_width)
        lines = ["bin_center,count"] + [f"{c:.6f},{int(n)}" for c, n in zip(centers, counts)]
        return "\n".join(lines) + "\n"


def classify_counts(signals, model: DetectionModel) -> DetectionRecord:
    """Nearest-level atom number with midpoint thresholds.

    A signal exactly on a threshold is assigned the lower atom number.
    Signals more than 5 sigma below background are flagged anomalous (and
    classified as empty).
    """
    signals = np.asarray(signals, dtype=float)
    scaled = (signals - model.background_level) / model.per_atom_signal - 0.5
    counts = np.maximum(np.ceil(scaled), 0).astype(int)
    n_levels = int(counts.max()) + 2 if counts.size else 2
    anomalous = signals < model.background_level - 5.0 * model.noise_sigma
    if model.noise_sigma == 0:
        anomalous = signals < model.background_level
    return DetectionRecord(signals, counts, model.thresholds(n_levels), anomalous)


def misclassification_probability(model: DetectionModel, occupancy_pmf) -> float:
    """Closed-form error rate of midpoint classification under Gaussian noise.

    ``occupancy_pmf[n]`` is the probability of ``n`` atoms. The empty level can
    only be mistaken upward; every other level has two neighbours.
    """
    pmf = np.asarray(occupancy_pmf, dtype=float)
    if model.noise_sigma == 0:
        return 0.0
    tail = stats.norm.sf(0.5 * model.per_atom_signal / model.noise_sigma)
    sides = np.where(np.arange(len(pmf)) == 0, 1.0, 2.0)
    return float(np.sum(pmf * sides * tail))


def readout_population(state: RegisterState, selector: int, detection: DetectionModel, seed):
    """State-selective fluorescence readout of every site.

    Each atom is projected onto ``|1>`` with probability ``(1 + w) / 2``; only
    atoms in the ``selector`` state (0 or 1) contribute fluorescence.

    Returns
    -------
    selected : ndarray of int
        Number of atoms found in the selected state per site.
    signals : ndarray
        Analog signal per site.
    """
    if selector not in (0, 1):
        raise ValueError("selector must be 0 or 1")
    rng = np.random.default_rng(seed)
    occupancy = state.occupancy
    w = np.where(occupancy > 0, np.nan_to_num(state.bloch[..., 2]), -1.0)
    p1 = np.clip((1.0 + w) / 2.0, 0.0, 1.0)
    n1 = rng.binomial(occupancy, p1)
    selected = n1 if selector == 1 else occupancy - n1
    signals = simulate_fluorescence(selected, detection, rng)
    return selected, signals
