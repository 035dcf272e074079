import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from microqreg.rydberg import (
    BlockadeConfig,
    gate_fidelity_budget,
    geometry_compatible,
    technical_error_for,
)


def test_13um_pitch_outside_blockade():
    report = geometry_compatible(BlockadeConfig(10e-6, 13e-6, 1.6e-6))
    assert report.pair_within_blockade is False
    assert report.sites_resolved is True
    assert not report.compatible


def test_trap_pair_compatible():
    report = geometry_compatible(BlockadeConfig(10e-6, 8.7e-6, 3.2e-6))
    assert report.pair_within_blockade and report.sites_resolved and report.compatible


def test_boundary_inclusive():
    assert geometry_compatible(BlockadeConfig(10e-6, 10e-6, 1e-6)).pair_within_blockade


def test_unresolved_sites():
    assert not geometry_compatible(BlockadeConfig(10e-6, 5e-6, 3e-6)).sites_resolved


def test_intrinsic_fidelity():
    budget = gate_fidelity_budget(BlockadeConfig(10e-6, 8.7e-6, 3.2e-6, intrinsic_error=6.5e-3))
    assert budget.intrinsic_fidelity == pytest.approx(0.9935, abs=1e-12)
    assert budget.intrinsic_fidelity > 0.99


def test_technical_error_solve():
    x = technical_error_for(0.92, 6.5e-3)
    assert x == pytest.approx(0.0740, abs=0.0005)
    assert (1 - 6.5e-3) * (1 - x) == pytest.approx(0.92, rel=1e-12)


def test_zero_errors():
    budget = gate_fidelity_budget(BlockadeConfig(1e-6, 1e-6, 1e-7))
    assert budget.intrinsic_fidelity == 1.0 and budget.total_fidelity == 1.0


@pytest.mark.parametrize("kw", [{"intrinsic_error": -0.1}, {"technical_error": 1.5}, {"waist": 0.0}])
def test_domain_errors(kw):
    args = {"blockade_radius": 1e-5, "pitch": 1e-5, "waist": 1e-6, **kw}
    with pytest.raises(ValueError):
        BlockadeConfig(**args)


def test_technical_error_out_of_range():
    with pytest.raises(ValueError):
        technical_error_for(0.999, 6.5e-3)


@settings(max_examples=100)
@given(st.floats(0, 1), st.floats(0, 1))
def test_budget_bounds(e_int, e_tech):
    budget = gate_fidelity_budget(BlockadeConfig(1e-5, 1e-5, 1e-6, e_int, e_tech))
    assert 0 <= budget.total_fidelity <= budget.intrinsic_fidelity <= 1


@settings(max_examples=100)
@given(st.floats(1e-6, 1e-4), st.floats(1e-6, 1e-4), st.floats(0.01, 1.0))
def test_blockade_monotone_in_pitch(radius, pitch, shrink):
    before = geometry_compatible(BlockadeConfig(radius, pitch, 1e-7)).pair_within_blockade
    after = geometry_compatible(BlockadeConfig(radius, pitch * shrink, 1e-7)).pair_within_blockade
    assert after or not before
