"""Qubit register layout: SLM transmission masks and per-site register state.

The SLM is modelled at lens granularity: one transmission value per
microlens. "Off" lenses keep a residual transmission ``T_MIN`` so that the
weak leftover traps stay representable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beam_optics import LensArraySpec, SiteGrid

T_MIN = 0.004
DEFAULT_CONTRAST_FLOOR = 250.0


@dataclass(frozen=True)
class SLMMask:
    transmissions: np.ndarray
    t_min: float = T_MIN
    contrast_floor: float = DEFAULT_CONTRAST_FLOOR

    def __post_init__(self):
        t = np.asarray(self.transmissions, dtype=float)
        if t.ndim != 2:
            raise ValueError("transmissions must be a 2D array")
        if np.any(t < self.t_min - 1e-12) or np.any(t > 1.0 + 1e-12):
            raise ValueError(f"transmissions must lie within [{self.t_min}, 1.0]")
        if self.contrast < self.contrast_floor - 1e-9:
            raise ValueError(f"contrast {self.contrast:.1f}:1 is below the floor {self.contrast_floor:.1f}:1")
        t.setflags(write=False)
        object.__setattr__(self, "transmissions", t)

    @property
    def shape(self) -> tuple[int, int]:
        return self.transmissions.shape

    @property
    def contrast(self) -> float:
        return 1.0 / self.t_min

    def to_text(self) -> str:
        """Plain-text grid of transmissions, one lens row per line."""
        return "\n".join(" ".join(f"{v:.4f}" for v in row) for row in self.transmissions) + "\n"

    @classmethod
    def from_text(cls, text: str, **kwargs) -> "SLMMask":
        rows = [list(map(float, line.split())) for line in text.strip().splitlines()]
        return cls(np.array(rows), **kwargs)


# -- pattern kinds


@dataclass(frozen=True)
class Full:
    pass


@dataclass(frozen=True)
class Superlattice:
    """Every ``period``-th lens.

    ``orientation="axis"`` keeps a square sublattice aligned with the array;
    ``"diagonal"`` keeps lenses with ``(i + j) % period == 0``, rotating the
    sublattice by 45 degrees.
    """

    period: int = 2
    offset: tuple[int, int] = (0, 0)
    orientation: str = "axis"


@dataclass(frozen=True)
class Blocks:
    """Rectangular blocks of ``block`` lenses separated by ``gap`` dark lenses."""

    block: tuple[int, int] = (2, 2)
    gap: int = 1


@dataclass(frozen=True)
class Ring:
    """Lenses within half a site of a circle of ``radius`` sites."""

    radius: float = 3.0
    center: tuple[float, float] | None = None


@dataclass(frozen=True)
class Checkerboard:
    parity: int = 0


PatternKind = Full | Superlattice | Blocks | Ring | Checkerboard

PATTERNS = {
    "full": Full,
    "superlattice": Superlattice,
    "blocks": Blocks,
    "ring": Ring,
    "checkerboard": Checkerboard,
}


def pattern_from_config(cfg: dict) -> PatternKind:
    """Build a pattern from ``{"kind": name, **params}``."""
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    if kind not in PATTERNS:
        raise ValueError(f"unknown mask kind {kind!r}; allowed: {', '.join(PATTERNS)}")
    for key in ("offset", "block", "center"):
        if key in cfg and cfg[key] is not None:
            cfg[key] = tuple(cfg[key])
    return PATTERNS[kind](**cfg)


def _pattern_on(kind: PatternKind, rows: int, cols: int) -> np.ndarray:
    ii, jj = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    if isinstance(kind, Full):
        return np.ones((rows, cols), dtype=bool)
    if isinstance(kind, Superlattice):
        p = kind.period
        oi, oj = kind.offset
        if p < 1:
            raise ValueError("superlattice period must be >= 1")
        if not (0 <= oi < p and 0 <= oj < p) or oi >= max(rows, 1) or oj >= max(cols, 1):
            raise ValueError(f"superlattice offset {kind.offset} outside period/grid")
        if p > max(rows, cols):
            raise ValueError(f"superlattice period {p} exceeds grid {rows}x{cols}")
        if kind.orientation == "axis":
            return ((ii - oi) % p == 0) & ((jj - oj) % p == 0)
        if kind.orientation == "diagonal":
            return (ii + jj - oi - oj) % p == 0
        raise ValueError(f"unknown superlattice orientation {kind.orientation!r}")
    if isinstance(kind, Blocks):
        bh, bw = kind.block
        if bh < 1 or bw < 1 or kind.gap < 0:
            raise ValueError("block dims must be >= 1 and gap >= 0")
        if bh > rows or bw > cols:
            raise ValueError(f"block {kind.block} exceeds grid {rows}x{cols}")
        return (ii % (bh + kind.gap) < bh) & (jj % (bw + kind.gap) < bw)
    if isinstance(kind, Ring):
        ci, cj = kind.center if kind.center is not None else ((rows - 1) / 2, (cols - 1) / 2)
        r = kind.radius
        if r <= 0:
            raise ValueError("ring radius must be > 0")
        if ci - r < -0.5 or ci + r > rows - 0.5 or cj - r < -0.5 or cj + r > cols - 0.5:
            raise ValueError(f"ring of radius {r} around {(ci, cj)} exceeds grid {rows}x{cols}")
        dist = np.hypot(ii - ci, jj - cj)
        return np.abs(dist - r) <= 0.5
    if isinstance(kind, Checkerboard):
        return (ii + jj) % 2 == kind.parity % 2
    raise TypeError(f"not a pattern kind: {kind!r}")


def build_mask(kind: PatternKind, grid: LensArraySpec, t_min: float = T_MIN) -> SLMMask:
    """Transmission mask for a pattern: 1.0 on, ``t_min`` off."""
    on = _pattern_on(kind, grid.rows, grid.cols)
    return SLMMask(np.where(on, 1.0, t_min), t_min=t_min)


def apply_mask(mask: SLMMask, base_power) -> np.ndarray:
    """Per-site power after the SLM (elementwise product)."""
    base_power = np.asarray(base_power, dtype=float)
    if base_power.shape != mask.shape:
        raise ValueError(f"shape mismatch: mask {mask.shape} vs power {base_power.shape}")
    return mask.transmissions * base_power


def addressed_sites(mask: SLMMask, threshold: float = 0.5) -> set[tuple[int, int]]:
    """Sites whose transmission reaches ``threshold``."""
    if not mask.t_min < threshold <= 1.0:
        raise ValueError(f"threshold must lie in ({mask.t_min}, 1]")
    ii, jj = np.nonzero(mask.transmissions >= threshold)
    return {(int(i), int(j)) for i, j in zip(ii, jj)}


# -- register state


@dataclass
class RegisterState:
    """Mutable per-site register contents.

    Arrays are indexed ``[row, col]``. ``bloch`` holds the ensemble Bloch
    vector ``(u, v, w)`` of each site with ``w = -1`` for ``|0>``; empty sites
    hold NaN. ``depth`` is the trap depth magnitude [J]. A single owner
    mutates a state during a run; use :meth:`copy` to hand out snapshots.
    """

    occupancy: np.ndarray
    bloch: np.ndarray
    depth: np.ndarray
    position: np.ndarray
    pitch: float = 0.0

    @classmethod
    def empty(cls, grid: SiteGrid, depth=0.0) -> "RegisterState":
        rows, cols = grid.shape
        position = np.zeros((rows, cols, 3))
        if len(grid):
            position[grid.indices[:, 0], grid.indices[:, 1]] = grid.positions
        return cls(
            occupancy=np.zeros((rows, cols), dtype=int),
            bloch=np.full((rows, cols, 3), np.nan),
            depth=np.broadcast_to(np.asarray(depth, dtype=float), (rows, cols)).copy(),
            position=position,
            pitch=grid.pitch,
        )

    @classmethod
    def from_occupancy(cls, grid: SiteGrid, occupancy, depth=0.0) -> "RegisterState":
        """Occupied sites start in ``|0>``."""
        state = cls.empty(grid, depth)
        state.set_occupancy(occupancy)
        return state

    @property
    def shape(self) -> tuple[int, int]:
        return self.occupancy.shape

    @property
    def n_atoms(self) -> int:
        return int(self.occupancy.sum())

    def set_occupancy(self, occupancy) -> None:
        occupancy = np.asarray(occupancy)
        if occupancy.shape != self.shape:
            raise ValueError(f"occupancy shape {occupancy.shape} != register shape {self.shape}")
        if np.any(occupancy < 0):
            raise ValueError("occupancy must be non-negative")
        self.occupancy = occupancy.astype(int)
        occupied = self.occupancy > 0
        self.bloch[~occupied] = np.nan
        fresh = occupied & np.isnan(self.bloch[..., 0])
        self.bloch[fresh] = (0.0, 0.0, -1.0)

    def copy(self) -> "RegisterState":
        return RegisterState(
            self.occupancy.copy(), self.bloch.copy(), self.depth.copy(), self.position.copy(), self.pitch
        )

    def validate(self) -> list[str]:
        problems = []
        if np.any(self.occupancy < 0):
            problems.append("negative occupancy")
        occupied = self.occupancy > 0
        if np.any(np.isnan(self.bloch[occupied])):
            problems.append("occupied site without qubit state")
        if np.any(~np.isnan(self.bloch[~occupied])):
            problems.append("empty site carries a qubit state")
        norms = np.linalg.norm(self.bloch[occupied], axis=-1)
        if np.any(norms > 1 + 1e-9):
            problems.append("Bloch vector longer than 1")
        return problems


def site_depths(power, laser_wavelength, waist, species, rotating_wave=False) -> np.ndarray:
    """Trap depth magnitude [J] for an array of per-site powers.

    Depth is linear in power, so SLM attenuation maps directly onto depth.
    """
    from .trap_physics import TrapLaserSpec, characterize_trap

    unit = characterize_trap(TrapLaserSpec(laser_wavelength, 1.0, waist), species, rotating_wave).depth
    return unit * np.asarray(power, dtype=float)
