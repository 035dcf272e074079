"""Gaussian beam propagation and microlens-array focal spot geometry.

All lengths are in metres, powers in watts and intensities in W/m^2.
Focal spots are treated as ideal, aberration-free TEM00 beams.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GaussianBeam:
    """A focused TEM00 beam.

    Parameters
    ----------
    wavelength : float
        Vacuum wavelength [m].
    power : float
        Total beam power [W].
    waist_w0 : float
        1/e^2 intensity radius at the focus [m].
    focus_position : tuple of float
        Location of the focus [m]; only used when building site grids.
    """

    wavelength: float
    power: float
    waist_w0: float
    focus_position: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if not self.power >= 0:
            raise ValueError(f"power must be >= 0, got {self.power}")
        if not self.waist_w0 > 0:
            raise ValueError(f"waist_w0 must be > 0, got {self.waist_w0}")

    @property
    def rayleigh_range(self) -> float:
        return rayleigh_range(self.waist_w0, self.wavelength)

    @property
    def peak_intensity(self) -> float:
        return 2.0 * self.power / (np.pi * self.waist_w0**2)

    def radius_at(self, z):
        """1/e^2 radius w(z) at axial distance `z` from the focus."""
        z = np.asarray(z, dtype=float)
        return self.waist_w0 * np.sqrt(1.0 + (z / self.rayleigh_range) ** 2)


def diffraction_limited_waist(wavelength: float, na: float) -> float:
    """Smallest focal waist lambda / (pi NA) for a given numerical aperture.

    This is the paraxial Gaussian-beam bound; real lenses with finite
    aberrations and truncation only do worse.
    """
    if not wavelength > 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    if not 0 < na < 1:
        raise ValueError(f"numerical aperture must lie in (0, 1), got {na}")
    return wavelength / (np.pi * na)


def rayleigh_range(waist: float, wavelength: float) -> float:
    if not waist > 0:
        raise ValueError(f"waist must be > 0, got {waist}")
    if not wavelength > 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    return np.pi * waist**2 / wavelength


def intensity_at(beam: GaussianBeam, r, z):
    """Intensity of `beam` at radial offset `r` and axial offset `z` from focus.

    Broadcasts over array inputs.
    """
    r = np.asarray(r, dtype=float)
    w = beam.radius_at(z)
    return beam.peak_intensity * (beam.waist_w0 / w) ** 2 * np.exp(-2.0 * r**2 / w**2)


@dataclass(frozen=True)
class LensArraySpec:
    """Rectangular microlens array followed by a demagnifying relay.

    `pitch` is the lens-to-lens spacing in the array plane; the trap plane
    pitch is ``pitch / demagnification``.
    """

    pitch: float
    rows: int
    cols: int
    numerical_aperture: float = 0.29
    demagnification: float = 1.0

    def __post_init__(self):
        if not self.pitch > 0:
            raise ValueError(f"pitch must be > 0, got {self.pitch}")
        if self.rows < 0 or self.cols < 0:
            raise ValueError("rows and cols must be non-negative")
        if not 0 < self.numerical_aperture < 1:
            raise ValueError(
                f"numerical_aperture must lie in (0, 1), got {self.numerical_aperture}"
            )
        if not self.demagnification > 0:
            raise ValueError(f"demagnification must be > 0, got {self.demagnification}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def trap_pitch(self) -> float:
        return self.pitch / self.demagnification


@dataclass(frozen=True)
class SiteGrid:
    """Trap sites in the focal (trap) plane.

    ``indices[k]`` is the (row, col) of site ``k`` and ``positions[k]`` its
    centre in metres. ``power_fraction[k]`` is the relative power delivered to
    that site by the illumination envelope (1 at the most central site).
    """

    indices: np.ndarray
    positions: np.ndarray
    pitch: float
    shape: tuple[int, int]
    power_fraction: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.indices)

    def as_map(self, values) -> np.ndarray:
        """Scatter per-site ``values`` back onto a (rows, cols) array."""
        out = np.full(self.shape, np.nan)
        values = np.asarray(values, dtype=float)
        if len(self):
            out[self.indices[:, 0], self.indices[:, 1]] = values
        return out


def _lattice_offsets(n: int) -> np.ndarray:
    return np.arange(n) - (n - 1) / 2.0


def spot_grid(spec: LensArraySpec, illumination_waist: float | None = None) -> SiteGrid:
    """Focal-spot lattice produced by a globally illuminated lens array.

    Parameters
    ----------
    spec : LensArraySpec
    illumination_waist : float or None
        1/e^2 radius of the illuminating beam in the lens plane [m]. ``None``
        or ``inf`` means flat illumination.

    Returns
    -------
    SiteGrid
        Sites are centred on the optical axis; the power fraction of each
        site is the illumination envelope sampled at its lens centre,
        normalised to the most central lens.
    """
    if illumination_waist is not None and not illumination_waist > 0:
        raise ValueError(f"illumination_waist must be > 0, got {illumination_waist}")
    rows, cols = spec.shape
    ii, jj = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    indices = np.column_stack([ii.ravel(), jj.ravel()]).astype(int)

    y_lens = _lattice_offsets(rows)[indices[:, 0]] * spec.pitch if len(indices) else np.empty(0)
    x_lens = _lattice_offsets(cols)[indices[:, 1]] * spec.pitch if len(indices) else np.empty(0)
    positions = np.column_stack(
        [x_lens / spec.demagnification, y_lens / spec.demagnification, np.zeros(len(indices))]
    )

    r2 = x_lens**2 + y_lens**2
    if illumination_waist is None or np.isinf(illumination_waist):
        fraction = np.ones(len(indices))
    else:
        envelope = np.exp(-2.0 * r2 / illumination_waist**2)
        fraction = envelope / envelope.max() if len(envelope) else envelope

    return SiteGrid(
        indices=indices,
        positions=positions.reshape(-1, 3),
        pitch=spec.trap_pitch,
        shape=(rows, cols),
        power_fraction=fraction,
    )
