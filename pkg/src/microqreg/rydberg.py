"""Rydberg-blockade gate feasibility: geometry checks and error budget.

No gate dynamics are simulated. The blockade radius is an input; nothing
here derives it from Rydberg level data.
"""

from __future__ import annotations

from dataclasses import dataclass

# Traps count as resolved when neighbouring 1/e^2 spot diameters do not overlap.
RESOLUTION_FACTOR = 2.0


@dataclass(frozen=True)
class BlockadeConfig:
    blockade_radius: float
    pitch: float
    waist: float
    intrinsic_error: float = 0.0
    technical_error: float = 0.0

    def __post_init__(self):
        for name in ("blockade_radius", "pitch", "waist"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("intrinsic_error", "technical_error"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class GeometryReport:
    pair_within_blockade: bool
    sites_resolved: bool

    @property
    def compatible(self) -> bool:
        return self.pair_within_blockade and self.sites_resolved


def geometry_compatible(cfg: BlockadeConfig) -> GeometryReport:
    """Nearest neighbours inside the blockade sphere and optically resolved?

    The blockade test is inclusive (``pitch <= radius``); sites are resolved
    when ``pitch >= 2 * waist``.
    """
    return GeometryReport(
        pair_within_blockade=cfg.pitch <= cfg.blockade_radius,
        sites_resolved=cfg.pitch >= RESOLUTION_FACTOR * cfg.waist,
    )


@dataclass(frozen=True)
class FidelityBudget:
    intrinsic_fidelity: float
    total_fidelity: float


def gate_fidelity_budget(cfg: BlockadeConfig) -> FidelityBudget:
    """Independent error channels compose multiplicatively."""
    intrinsic = 1.0 - cfg.intrinsic_error
    return FidelityBudget(intrinsic, intrinsic * (1.0 - cfg.technical_error))


def technical_error_for(total_fidelity: float, intrinsic_error: float) -> float:
    """Technical error that brings the budget down to ``total_fidelity``."""
    if not 0 <= intrinsic_error < 1:
        raise ValueError("intrinsic_error must lie in [0, 1)")
    if not 0 <= total_fidelity <= 1 - intrinsic_error:
        raise ValueError("total_fidelity must lie in [0, 1 - intrinsic_error]")
    return 1.0 - total_fidelity / (1.0 - intrinsic_error)
