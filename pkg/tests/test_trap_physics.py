import dataclasses
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from microqreg.beam_optics import intensity_at
from microqreg.trap_physics import (
    TrapLaserSpec,
    UnsupportedRegimeError,
    available_species,
    characterize_trap,
    dipole_potential,
    effective_detuning,
    load_species,
    scattering_rate,
    state_changing_rate,
    trap_frequencies,
    two_line_potential,
    two_line_scattering_rate,
)

# Independent literal constants for the hand oracles below.
C = 299792458.0
KB = 1.380649e-23
AMU = 1.66053906660e-27
M_RB85 = 84.911789738 * AMU

TRAP_815 = TrapLaserSpec(815e-9, 2e-3, 3.7e-6)
TRAP_1064 = TrapLaserSpec(1064e-9, 14e-3, 3.7e-6)
U_REF = KB * 1e-4


def _omega(wl):
    return 2 * math.pi * C / wl


def test_species_data_file(rb85):
    assert "Rb85" in available_species()
    assert rb85.mass == pytest.approx(M_RB85, rel=1e-9)
    assert rb85.natural_linewidth == pytest.approx(2 * math.pi * 6.07e6, rel=1e-3)
    assert rb85.qubit_splitting == pytest.approx(2 * math.pi * 3.0357e9, rel=1e-4)


def test_unknown_species():
    with pytest.raises(KeyError):
        load_species("Xx99")


# -- effective detuning


def test_effective_detuning_815(rb85):
    ratio = abs(effective_detuning(rb85, 815e-9)) / rb85.natural_linewidth
    assert ratio == pytest.approx(2e6, rel=0.15)


def test_effective_detuning_1064_hand_oracle(rb85):
    wl_l = _omega(1064e-9)
    d1 = wl_l - _omega(794.979014933e-9)
    d2 = wl_l - _omega(780.241368271e-9)
    expected = 1.0 / ((2 / 3) / d2 + (1 / 3) / d1)
    assert effective_detuning(rb85, 1064e-9) == pytest.approx(expected, rel=1e-12)
    assert expected / rb85.natural_linewidth == pytest.approx(-1.648e7, rel=1e-3)


def test_effective_detuning_equal_lines_collapses(rb85):
    merged = dataclasses.replace(rb85, d1_wavelength=rb85.d2_wavelength)
    expected = _omega(900e-9) - merged.omega_d2
    assert effective_detuning(merged, 900e-9) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("wl", [700e-9, 780.241368271e-9, 790e-9, 794.979014933e-9])
def test_blue_or_resonant_rejected(rb85, wl):
    with pytest.raises(UnsupportedRegimeError):
        effective_detuning(rb85, wl)


# -- potential and scattering


def test_depth_815(rb85):
    trap = characterize_trap(TRAP_815, rb85)
    assert trap.depth == pytest.approx(U_REF, rel=0.10)
    assert trap.depth / KB * 1e6 == pytest.approx(98.533, abs=0.01)


def test_rotating_wave_depth_815_hand_oracle(rb85):
    # U = 3 pi c^2 / (2 w0^3) * Gamma / Delta * I with I = 2P / (pi w0^2)
    w0 = (2 / 3) * _omega(780.241368271e-9) + (1 / 3) * _omega(794.979014933e-9)
    intensity = 2 * 2e-3 / (math.pi * (3.7e-6) ** 2)
    delta = effective_detuning(rb85, 815e-9)
    expected = 3 * math.pi * C**2 / (2 * w0**3) * rb85.natural_linewidth / delta * intensity
    assert dipole_potential(intensity, delta, rb85) == pytest.approx(expected, rel=1e-12)
    trap = characterize_trap(TRAP_815, rb85, rotating_wave=True)
    assert trap.depth == pytest.approx(-expected, rel=1e-12)
    assert trap.depth == pytest.approx(U_REF, rel=0.10)


def test_zero_intensity_zero_potential(rb85):
    assert dipole_potential(0.0, -1e9, rb85) == 0.0
    assert two_line_potential(0.0, rb85, 815e-9) == 0.0


def test_zero_detuning_domain_error(rb85):
    with pytest.raises(ValueError):
        dipole_potential(1.0, 0.0, rb85)
    with pytest.raises(ValueError):
        scattering_rate(1.0, 0.0, rb85)


def test_scattering_815(rb85):
    assert characterize_trap(TRAP_815, rb85).total_scattering_rate == pytest.approx(6.0, rel=0.20)


def test_scattering_1064(rb85):
    trap = characterize_trap(TRAP_1064, rb85)
    assert trap.depth == pytest.approx(U_REF, rel=0.10)
    assert trap.total_scattering_rate == pytest.approx(0.3, rel=0.30)


def test_state_changing_815(rb85):
    rate = characterize_trap(TRAP_815, rb85).state_changing_rate
    assert 0.25 <= rate <= 1.0
    assert rate == pytest.approx(0.5, rel=1e-12)


def test_state_changing_1064_predicted(rb85):
    rate = characterize_trap(TRAP_1064, rb85).state_changing_rate
    assert 1.5e-4 <= rate <= 6e-4
    assert rate == pytest.approx(3.797e-4, rel=1e-3)


def test_state_changing_interference_null(rb85):
    merged = dataclasses.replace(rb85, d1_wavelength=rb85.d2_wavelength)
    assert state_changing_rate(1e8, merged, 900e-9, normalization=1.0) == 0.0


def test_trap_frequency_815(rb85):
    trap = characterize_trap(TRAP_815, rb85)
    expected = math.sqrt(4 * U_REF / (M_RB85 * (3.7e-6) ** 2))
    assert expected == pytest.approx(5.3e4, rel=0.01)
    assert trap.radial_frequency == pytest.approx(expected, rel=0.05)
    # order of magnitude of the quoted 10-100 kHz, read as angular frequency
    assert 1e4 <= trap.radial_frequency <= 1e5


@pytest.mark.parametrize("args", [(0, 1e-6, 1e-5, 1e-25), (1e-27, 0, 1e-5, 1e-25), (1e-27, 1e-6, 1e-5, -1)])
def test_trap_frequency_domain_errors(args):
    with pytest.raises(ValueError):
        trap_frequencies(*args)


def test_coherence_limits(rb85):
    assert characterize_trap(TRAP_815, rb85).coherence_limit == pytest.approx(2.0, rel=1e-9)
    limit_1064 = characterize_trap(TRAP_1064, rb85).coherence_limit
    assert 1 / 3e-4 / 2 <= limit_1064 <= 2 / 3e-4
    assert limit_1064 > 60.0


def test_zero_power(rb85):
    trap = characterize_trap(TrapLaserSpec(815e-9, 0.0, 3.7e-6), rb85)
    assert trap.depth == 0.0
    assert trap.total_scattering_rate == 0.0
    assert trap.state_changing_rate == 0.0
    assert trap.radial_frequency == 0.0 and trap.axial_frequency == 0.0
    assert math.isinf(trap.coherence_limit)


def test_frozen_regression(rb85):
    trap = characterize_trap(TRAP_1064, rb85, rotating_wave=True)
    assert trap.depth / KB * 1e6 == pytest.approx(87.739, abs=0.01)
    assert trap.total_scattering_rate == pytest.approx(0.69699, rel=1e-4)


# -- properties

wavelengths = st.floats(800e-9, 1600e-9)
intensities = st.floats(1e3, 1e10)


@settings(max_examples=60)
@given(wl=wavelengths, intensity=intensities)
def test_sign_rule(rb85, wl, intensity):
    assert two_line_potential(intensity, rb85, wl) < 0
    assert two_line_scattering_rate(intensity, rb85, wl) >= 0
    delta = effective_detuning(rb85, wl)
    assert dipole_potential(intensity, delta, rb85) < 0
    assert scattering_rate(intensity, delta, rb85) >= 0


@settings(max_examples=60)
@given(intensity=intensities, delta=st.floats(-1e15, -1e9))
def test_rotating_wave_scaling(rb85, intensity, delta):
    u = dipole_potential(intensity, delta, rb85)
    g = scattering_rate(intensity, delta, rb85)
    assert dipole_potential(2 * intensity, delta, rb85) == pytest.approx(2 * u, rel=1e-12)
    assert scattering_rate(2 * intensity, delta, rb85) == pytest.approx(2 * g, rel=1e-12)
    assert scattering_rate(intensity, 2 * delta, rb85) == pytest.approx(g / 4, rel=1e-12)


@settings(max_examples=40)
@given(wl=wavelengths, power=st.floats(1e-5, 0.1), waist=st.floats(1e-6, 2e-5))
def test_depth_self_consistent(rb85, wl, power, waist):
    laser = TrapLaserSpec(wl, power, waist)
    trap = characterize_trap(laser, rb85)
    peak = intensity_at(laser.beam(), 0.0, 0.0)
    assert trap.depth == -two_line_potential(peak, rb85, wl)
    trap_rwa = characterize_trap(laser, rb85, rotating_wave=True)
    assert trap_rwa.depth == -dipole_potential(peak, effective_detuning(rb85, wl), rb85)


@settings(max_examples=80)
@given(wl=st.floats(795.5e-9, 2000e-9), intensity=intensities)
def test_raman_below_total_scattering(rb85, wl, intensity):
    assume(wl > rb85.d1_wavelength * (1 + 1e-6))
    assert state_changing_rate(intensity, rb85, wl) <= two_line_scattering_rate(intensity, rb85, wl)


@settings(max_examples=60)
@given(wl=st.floats(800e-9, 2000e-9), intensity=intensities)
def test_raman_below_rotating_wave_scattering(rb85, wl, intensity):
    delta = effective_detuning(rb85, wl)
    assert state_changing_rate(intensity, rb85, wl) <= scattering_rate(intensity, delta, rb85)
