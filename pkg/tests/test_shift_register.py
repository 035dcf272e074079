import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from microqreg.beam_optics import LensArraySpec, spot_grid
from microqreg.qubit import DephasingModel
from microqreg.register import RegisterState
from microqreg.shift_register import (
    LossModel,
    PhaseKind,
    ScheduleError,
    default_schedule,
    reversed_schedule,
    run_cycles,
    shift_with_echo,
    validate_schedule,
)

PITCH = 55e-6
KB = 1.380649e-23
M_RB85 = 84.911789738 * 1.66053906660e-27


def register(occupancy):
    occupancy = np.asarray(occupancy)
    grid = spot_grid(LensArraySpec(PITCH, *occupancy.shape))
    return RegisterState.from_occupancy(grid, occupancy)


def schedule(**kw):
    return default_schedule(PITCH, 5e-3, **kw)


# -- schedule construction and validation


def test_default_schedule_phase_order():
    kinds = [p.kind for p in schedule().phases]
    assert kinds == [
        PhaseKind.LOAD_MOVABLE,
        PhaseKind.MOVE,
        PhaseKind.TRANSFER_TO_STATIC,
        PhaseKind.RETURN_MOVABLE,
        PhaseKind.TRANSFER_TO_MOVABLE,
    ]


def test_move_covers_one_pitch_in_5ms():
    move = next(p for p in schedule().phases if p.kind == PhaseKind.MOVE)
    assert move.duration == 5e-3
    assert move.distance == pytest.approx(PITCH, rel=1e-15)


def test_minimum_jerk_midpoint():
    sched = schedule()
    hold = sched.phases[0].duration
    offset, _, _ = sched.sample(hold + 2.5e-3)
    assert offset[0] == pytest.approx(27.5e-6, rel=1e-12)


def test_peak_acceleration_and_adiabaticity():
    sched = schedule()
    assert sched.peak_acceleration() == pytest.approx(10 / math.sqrt(3) * PITCH / (5e-3) ** 2, rel=1e-12)
    # 10/sqrt(3) * 55 um / (5 ms)^2
    assert sched.peak_acceleration() == pytest.approx(12.7, rel=0.01)
    assert M_RB85 * sched.peak_acceleration() * 3.7e-6 < 0.1 * KB * 1e-4
    assert validate_schedule(sched) == []
    assert validate_schedule(sched, require_matched_depths=True) == []


def test_peak_acceleration_numerically():
    sched = schedule()
    hold = sched.phases[0].duration
    t = np.linspace(hold, hold + 5e-3, 20001)
    offset, _, _ = sched.sample(t)
    accel = np.gradient(np.gradient(offset, t), t)
    assert np.max(np.abs(accel[10:-10])) == pytest.approx(sched.peak_acceleration(), rel=1e-3)


def test_transfer_without_coincidence():
    sched = schedule()
    phases = list(sched.phases)
    k = 2
    w = sched.waist
    phases[k] = dataclasses.replace(phases[k], movable_offset=(PITCH + w, PITCH + w))
    problems = validate_schedule(dataclasses.replace(sched, phases=tuple(phases)))
    assert any("transfer without coincidence" in p for p in problems)


def test_negative_duration_violation():
    sched = schedule()
    phases = list(sched.phases)
    phases[0] = dataclasses.replace(phases[0], duration=-1e-3)
    problems = validate_schedule(dataclasses.replace(sched, phases=tuple(phases)))
    assert any("non-positive duration" in p for p in problems)


def test_too_fast_move_fails_adiabaticity():
    problems = validate_schedule(default_schedule(PITCH, 50e-6))
    assert any("adiabaticity" in p for p in problems)


def test_transfer_needs_both_traps():
    sched = schedule()
    phases = list(sched.phases)
    phases[2] = dataclasses.replace(phases[2], static_depth=(0.0, 0.0))
    problems = validate_schedule(dataclasses.replace(sched, phases=tuple(phases)))
    assert any("both traps" in p for p in problems)


def test_depth_ramps_linear():
    sched = schedule()
    start = sched.phases[0].duration + sched.phases[1].duration
    _, mdepth, sdepth = sched.sample(start + 0.25e-3)
    assert mdepth[0] == pytest.approx(0.5 * sched.trap_depth)
    assert sdepth[0] == pytest.approx(0.5 * sched.trap_depth)


def test_timing_csv():
    lines = schedule().timing_csv(11).splitlines()
    assert lines[0] == "time,movable_offset,movable_depth_uK,static_depth_uK"
    assert len(lines) == 12


# -- transport


def test_one_cycle_displaces_one_pitch():
    occ = np.zeros((3, 6), dtype=int)
    occ[:, :3] = 1
    state = register(occ)
    new, result = run_cycles(state, schedule(), 1)
    np.testing.assert_array_equal(new.occupancy[:, 1:4], 1)
    assert new.n_atoms == state.n_atoms
    assert result.lost == 0 and result.dropped_at_edge == 0
    np.testing.assert_allclose(result.displacement[occ > 0], PITCH, rtol=1e-15)


def test_zero_cycles_identity():
    state = register(np.eye(4, dtype=int))
    new, result = run_cycles(state, schedule(), 0)
    np.testing.assert_array_equal(new.occupancy, state.occupancy)
    np.testing.assert_array_equal(result.displacement[state.occupancy > 0], 0.0)


def test_edge_column_dropped():
    occ = np.ones((2, 5), dtype=int)
    new, result = run_cycles(register(occ), schedule(), 3)
    assert result.dropped_at_edge == 6
    np.testing.assert_array_equal(new.occupancy, [[0, 0, 0, 1, 1]] * 2)
    disp = result.displacement
    np.testing.assert_allclose(disp[:, :2], 3 * PITCH)
    assert np.isnan(disp[:, 2:]).all()


def test_qubit_state_travels_with_atom():
    occ = np.zeros((1, 4), dtype=int)
    occ[0, 0] = 1
    state = register(occ)
    state.bloch[0, 0] = (0.0, 1.0, 0.0)
    new, _ = run_cycles(state, schedule(), 2)
    np.testing.assert_array_equal(new.bloch[0, 2], (0.0, 1.0, 0.0))
    assert new.validate() == []
    # the input is untouched
    assert state.occupancy[0, 0] == 1


def test_invalid_schedule_raises_before_mutation():
    sched = schedule()
    bad = dataclasses.replace(sched, phases=sched.phases[:1])
    state = register(np.ones((2, 2), dtype=int))
    before = state.copy()
    with pytest.raises(ScheduleError):
        run_cycles(state, bad, 1)
    np.testing.assert_array_equal(state.occupancy, before.occupancy)


def test_loss_model_binomial():
    occ = np.zeros((100, 120), dtype=int)
    occ[:, :100] = 1  # 10^4 atoms, room for 10 cycles
    _, result = run_cycles(register(occ), schedule(), 10, LossModel(0.01, seed=21))
    survivors = 10_000 - result.lost
    mean = 10_000 * 0.99**10
    sd = math.sqrt(10_000 * 0.99**10 * (1 - 0.99**10))
    assert abs(survivors - mean) <= 3 * sd
    assert result.dropped_at_edge == 0


def test_transport_log():
    occ = np.zeros((1, 4), dtype=int)
    occ[0, 0] = 1
    _, result = run_cycles(register(occ), schedule(), 2, record_log=True)
    lines = result.log_csv().splitlines()
    assert lines[0] == "cycle,site_i,site_j,position_x,occupancy"
    assert [line.split(",")[2] for line in lines[1:]] == ["0", "1", "2"]


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(2, 15),
    st.integers(0, 10),
    st.integers(0, 2**31 - 1),
)
def test_conservation_and_quantization(rows, cols, n, seed):
    n = min(n, cols - 1)
    rng = np.random.default_rng(seed)
    occ = rng.integers(0, 3, (rows, cols))
    occ[:, max(cols - n, 0):] = 0  # keep atoms away from the edge
    state = register(occ)
    new, result = run_cycles(state, schedule(), n)
    assert new.n_atoms == state.n_atoms
    assert result.dropped_at_edge == 0
    occupied = occ > 0
    np.testing.assert_allclose(result.displacement[occupied], n * PITCH, rtol=1e-12)
    np.testing.assert_array_equal(new.occupancy[:, n:], occ[:, : cols - n])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(4, 15), st.integers(0, 3), st.integers(0, 2**31 - 1))
def test_reverse_restores(rows, cols, n, seed):
    occ = np.random.default_rng(seed).integers(0, 2, (rows, cols))
    occ[:, max(cols - n, 0):] = 0
    forward, _ = run_cycles(register(occ), schedule(), n)
    back, _ = run_cycles(forward, reversed_schedule(schedule()), n)
    np.testing.assert_array_equal(back.occupancy, occ)


# -- shift with echo


MODEL = DephasingModel(t2_star=1e-3, t2_prime=40e-3, ensemble_size=200)
ECHO_TIMES = np.linspace(24e-3, 80e-3, 15)


def test_shift_echo_ratio_default():
    result = shift_with_echo(MODEL, schedule(), ECHO_TIMES, seed=105)
    assert 0.94 <= result.ratio <= 1.02
    assert result.rest_fit.t2_prime == pytest.approx(40e-3, rel=0.05)


def test_shift_echo_zero_dephasing_neutral():
    shots = 100_000
    result = shift_with_echo(MODEL, schedule(), ECHO_TIMES, seed=3, shots=shots)
    assert result.ratio == pytest.approx(1.0, abs=0.02)
    # two-sample test on the full curves; each contrast has variance <= 1 / shots
    diff = result.shift.ensemble_contrast - result.rest.ensemble_contrast
    chi2 = np.sum(diff**2 / (2.0 / shots))
    assert stats.chi2.sf(chi2, len(diff)) > 0.01


def test_shift_echo_halved_t2():
    gamma = math.sqrt(3) / MODEL.t2_prime
    result = shift_with_echo(MODEL, schedule(), np.linspace(24e-3, 60e-3, 15), seed=4, transport_dephasing=gamma)
    assert result.ratio == pytest.approx(0.5, rel=0.05)


def test_shift_echo_requires_full_cycle():
    with pytest.raises(ValueError, match="cycle"):
        shift_with_echo(MODEL, schedule(), [10e-3, 40e-3, 60e-3], seed=0)
