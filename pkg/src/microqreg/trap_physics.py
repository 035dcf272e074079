"""Optical dipole potentials, photon scattering and trap characteristics.

The two-level expressions take an explicit detuning ``Delta = omega_L -
omega_0`` (negative for red detuning) and return *signed* energies::

    U      = 3 pi c^2 / (2 omega_0^3) * (Gamma / Delta) * I
    Gamma_sc = 3 pi c^2 / (2 hbar omega_0^3) * (Gamma / Delta)^2 * I

For alkali atoms the D2 and D1 lines are combined with line strengths 2/3 and
1/3. :func:`characterize_trap` by default uses the full two-line sums that
keep the counter-rotating terms and the ``(omega_L/omega_i)^3`` factor of the
scattered photon density; far from resonance (1064 nm light on Rb) these
change the scattering rate by a factor of about two relative to the rotating
wave result, so the rotating-wave path is available behind a flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np
import yaml

from .beam_optics import GaussianBeam, intensity_at, rayleigh_range
from .constants import ATOMIC_MASS_UNIT, HBAR, SPEED_OF_LIGHT, TWO_PI

D2_WEIGHT = 2.0 / 3.0
D1_WEIGHT = 1.0 / 3.0


class UnsupportedRegimeError(ValueError):
    """Raised for trap lasers that are not red-detuned from both D lines."""


@dataclass(frozen=True)
class AtomSpecies:
    """Alkali atom with resolved D1/D2 lines.

    ``raman_reference`` is an optional ``(wavelength, power, waist, rate)``
    operating point that fixes the normalisation of
    :func:`state_changing_rate`.
    """

    name: str
    mass: float
    d2_wavelength: float
    d1_wavelength: float
    natural_linewidth: float
    qubit_splitting: float
    raman_reference: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        for attr in ("mass", "d2_wavelength", "d1_wavelength", "natural_linewidth", "qubit_splitting"):
            if not getattr(self, attr) > 0:
                raise ValueError(f"{attr} must be > 0")
        if not self.d1_wavelength >= self.d2_wavelength:
            raise ValueError("d1_wavelength must not be shorter than d2_wavelength")

    @property
    def omega_d2(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.d2_wavelength

    @property
    def omega_d1(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.d1_wavelength

    @property
    def transition_frequency(self) -> float:
        """Line-strength weighted D-line angular frequency [rad/s]."""
        return D2_WEIGHT * self.omega_d2 + D1_WEIGHT * self.omega_d1


@lru_cache(maxsize=None)
def _species_table() -> dict:
    text = resources.files("microqreg").joinpath("data/species.yaml").read_text()
    return yaml.safe_load(text)


def available_species() -> list[str]:
    return sorted(_species_table())


def load_species(symbol: str = "Rb85") -> AtomSpecies:
    """Look up an :class:`AtomSpecies` in the bundled data file."""
    table = _species_table()
    if symbol not in table:
        raise KeyError(f"unknown species {symbol!r}; available: {', '.join(sorted(table))}")
    row = table[symbol]
    ref = row.get("raman_reference")
    return AtomSpecies(
        name=symbol,
        mass=row["mass_amu"] * ATOMIC_MASS_UNIT,
        d2_wavelength=float(row["d2_wavelength"]),
        d1_wavelength=float(row["d1_wavelength"]),
        natural_linewidth=TWO_PI * float(row["linewidth_hz"]),
        qubit_splitting=TWO_PI * float(row["qubit_splitting_hz"]),
        raman_reference=None
        if ref is None
        else (float(ref["wavelength"]), float(ref["power"]), float(ref["waist"]), float(ref["rate"])),
    )


@dataclass(frozen=True)
class TrapLaserSpec:
    wavelength: float
    power_per_site: float
    waist: float

    def __post_init__(self):
        if not self.wavelength > 0 or not self.waist > 0:
            raise ValueError("wavelength and waist must be > 0")
        if not self.power_per_site >= 0:
            raise ValueError("power_per_site must be >= 0")

    def beam(self) -> GaussianBeam:
        return GaussianBeam(self.wavelength, self.power_per_site, self.waist)


@dataclass(frozen=True)
class TrapCharacteristics:
    """Summary of a single focused-beam trap.

    ``depth`` is the magnitude of the (attractive) potential at the focus in
    joules; frequencies are angular [rad/s]; rates in 1/s.
    """

    depth: float
    total_scattering_rate: float
    state_changing_rate: float
    radial_frequency: float
    axial_frequency: float
    coherence_limit: float
    rayleigh_range: float
    peak_intensity: float
    effective_detuning: float


def _laser_omega(wavelength):
    return TWO_PI * SPEED_OF_LIGHT / np.asarray(wavelength, dtype=float)


def _line_detunings(species: AtomSpecies, laser_wavelength):
    """(Delta_D1, Delta_D2), raising unless red of both lines."""
    wavelength = np.asarray(laser_wavelength, dtype=float)
    if np.any(wavelength <= species.d1_wavelength):
        raise UnsupportedRegimeError(
            f"laser at {laser_wavelength} m is not red-detuned from both D lines "
            f"(needs wavelength > {species.d1_wavelength} m)"
        )
    omega_l = _laser_omega(wavelength)
    return omega_l - species.omega_d1, omega_l - species.omega_d2


def effective_detuning(species: AtomSpecies, laser_wavelength) -> float:
    """Two-line effective detuning, ``1/D = (2/3)/D2 + (1/3)/D1`` [rad/s].

    Negative for the (only supported) red-detuned regime.
    """
    delta1, delta2 = _line_detunings(species, laser_wavelength)
    return 1.0 / (D2_WEIGHT / delta2 + D1_WEIGHT / delta1)


def _check_detuning(detuning):
    if np.any(np.asarray(detuning) == 0):
        raise ValueError("detuning must be non-zero")


def dipole_potential(intensity, detuning, species: AtomSpecies):
    """Signed light shift of the ground state [J] in the rotating-wave limit."""
    _check_detuning(detuning)
    omega0 = species.transition_frequency
    prefactor = 3.0 * np.pi * SPEED_OF_LIGHT**2 / (2.0 * omega0**3)
    return prefactor * (species.natural_linewidth / np.asarray(detuning)) * np.asarray(intensity, dtype=float)


def scattering_rate(intensity, detuning, species: AtomSpecies):
    """Photon scattering rate [1/s] in the rotating-wave limit."""
    _check_detuning(detuning)
    omega0 = species.transition_frequency
    prefactor = 3.0 * np.pi * SPEED_OF_LIGHT**2 / (2.0 * HBAR * omega0**3)
    return prefactor * (species.natural_linewidth / np.asarray(detuning)) ** 2 * np.asarray(intensity, dtype=float)


def two_line_potential(intensity, species: AtomSpecies, laser_wavelength):
    """Signed ground-state light shift [J] summed over D1 and D2.

    Keeps the counter-rotating term ``-1/(omega_i + omega_L)`` of each line.
    """
    omega_l = _laser_omega(laser_wavelength)
    _line_detunings(species, laser_wavelength)
    gamma = species.natural_linewidth
    total = 0.0
    for weight, omega_i in ((D2_WEIGHT, species.omega_d2), (D1_WEIGHT, species.omega_d1)):
        prefactor = 3.0 * np.pi * SPEED_OF_LIGHT**2 / (2.0 * omega_i**3)
        total = total + weight * prefactor * gamma * (1.0 / (omega_l - omega_i) - 1.0 / (omega_l + omega_i))
    return total * np.asarray(intensity, dtype=float)


def two_line_scattering_rate(intensity, species: AtomSpecies, laser_wavelength):
    """Total photon scattering rate [1/s] summed over D1 and D2.

    Includes counter-rotating terms and the ``(omega_L/omega_i)^3`` factor.
    """
    omega_l = _laser_omega(laser_wavelength)
    _line_detunings(species, laser_wavelength)
    gamma = species.natural_linewidth
    total = 0.0
    for weight, omega_i in ((D2_WEIGHT, species.omega_d2), (D1_WEIGHT, species.omega_d1)):
        prefactor = 3.0 * np.pi * SPEED_OF_LIGHT**2 / (2.0 * HBAR * omega_i**3)
        amplitude = gamma * (1.0 / (omega_l - omega_i) - 1.0 / (omega_l + omega_i))
        total = total + weight * prefactor * (omega_l / omega_i) ** 3 * amplitude**2
    return total * np.asarray(intensity, dtype=float)


def _raman_shape(intensity, species: AtomSpecies, laser_wavelength):
    # Uncalibrated interference form; vanishes when Delta_1 == Delta_2.
    delta1, delta2 = _line_detunings(species, laser_wavelength)
    omega_l = _laser_omega(laser_wavelength)
    omega0 = species.transition_frequency
    prefactor = 3.0 * np.pi * SPEED_OF_LIGHT**2 / (2.0 * HBAR * omega0**3)
    gamma = species.natural_linewidth
    return (
        prefactor
        * (omega_l / omega0) ** 3
        * (gamma * (1.0 / delta1 - 1.0 / delta2)) ** 2
        * np.asarray(intensity, dtype=float)
    )


def raman_normalization(species: AtomSpecies) -> float:
    """Dimensionless factor pinning the Raman rate to the species' reference point."""
    if species.raman_reference is None:
        raise ValueError(f"species {species.name!r} has no raman_reference calibration point")
    wavelength, power, waist, rate = species.raman_reference
    peak = GaussianBeam(wavelength, power, waist).peak_intensity
    return rate / float(_raman_shape(peak, species, wavelength))


def state_changing_rate(intensity, species: AtomSpecies, laser_wavelength, normalization=None):
    """Hyperfine-changing (Raman) scattering rate [1/s].

    Proportional to ``(1/Delta_1 - 1/Delta_2)^2``: the D1 and D2 Raman
    amplitudes interfere destructively far from resonance. The overall
    constant is fixed by ``species.raman_reference`` unless
    ``normalization`` is given.
    """
    k = raman_normalization(species) if normalization is None else normalization
    return k * _raman_shape(intensity, species, laser_wavelength)


def trap_frequencies(depth: float, waist: float, rayleigh: float, mass: float) -> tuple[float, float]:
    """Harmonic (radial, axial) angular frequencies at the bottom of a Gaussian focus."""
    for name, value in (("depth", depth), ("waist", waist), ("rayleigh", rayleigh), ("mass", mass)):
        if not value > 0:
            raise ValueError(f"{name} must be > 0, got {value}")
    radial = np.sqrt(4.0 * depth / (mass * waist**2))
    axial = np.sqrt(2.0 * depth / (mass * rayleigh**2))
    return float(radial), float(axial)


def characterize_trap(
    laser: TrapLaserSpec, species: AtomSpecies, rotating_wave: bool = False
) -> TrapCharacteristics:
    """Depth, scattering, vibrational frequencies and coherence limit of one trap site.

    Parameters
    ----------
    laser : TrapLaserSpec
    species : AtomSpecies
    rotating_wave : bool
        If True use the two-level rotating-wave expressions with the
        effective detuning; otherwise (default) use the two-line sums with
        counter-rotating terms.
    """
    beam = laser.beam()
    peak = float(intensity_at(beam, 0.0, 0.0))
    delta_eff = float(effective_detuning(species, laser.wavelength))
    if rotating_wave:
        potential = float(dipole_potential(peak, delta_eff, species))
        total_rate = float(scattering_rate(peak, delta_eff, species))
    else:
        potential = float(two_line_potential(peak, species, laser.wavelength))
        total_rate = float(two_line_scattering_rate(peak, species, laser.wavelength))
    raman = float(state_changing_rate(peak, species, laser.wavelength))

    depth = -potential
    z_r = rayleigh_range(laser.waist, laser.wavelength)
    if depth > 0:
        radial, axial = trap_frequencies(depth, laser.waist, z_r, species.mass)
    else:
        radial = axial = 0.0
    return TrapCharacteristics(
        depth=depth,
        total_scattering_rate=total_rate,
        state_changing_rate=raman,
        radial_frequency=radial,
        axial_frequency=axial,
        coherence_limit=np.inf if raman == 0 else 1.0 / raman,
        rayleigh_range=z_r,
        peak_intensity=peak,
        effective_detuning=delta_eff,
    )
