"""Two-array quantum shift register.

A movable trap array (steered by a scanning mirror) and a static array of
identical pitch are cycled through five phases::

    LOAD_MOVABLE        atoms held in the movable array, arrays coincident
    MOVE                movable array travels one pitch
    TRANSFER_TO_STATIC  movable ramps down while the static array ramps up
    RETURN_MOVABLE      empty movable array travels back
    TRANSFER_TO_MOVABLE static ramps down while the movable array ramps up

Transfers are instantaneous relabelings at phase boundaries; each completed
cycle advances every atom by one site along the column axis.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .constants import ATOMIC_MASS_UNIT, BOLTZMANN
from .qubit import ContrastFit, DephasingModel, SequenceResult, fit_contrast_decay, spin_echo_sequence
from .register import RegisterState


class PhaseKind(str, Enum):
    LOAD_MOVABLE = "load_movable"
    MOVE = "move"
    TRANSFER_TO_STATIC = "transfer_to_static"
    RETURN_MOVABLE = "return_movable"
    TRANSFER_TO_MOVABLE = "transfer_to_movable"


TRANSFERS = (PhaseKind.TRANSFER_TO_STATIC, PhaseKind.TRANSFER_TO_MOVABLE)


# -- trajectory profiles: position fraction s(x) for x = t / T in [0, 1] and
# peak |acceleration| in units of distance / T^2


def minimum_jerk(x):
    x = np.clip(x, 0.0, 1.0)
    return 10 * x**3 - 15 * x**4 + 6 * x**5


def cosine_ramp(x):
    x = np.clip(x, 0.0, 1.0)
    return 0.5 * (1.0 - np.cos(np.pi * x))


PROFILES = {
    "minimum_jerk": (minimum_jerk, 10.0 / np.sqrt(3.0)),
    "cosine": (cosine_ramp, np.pi**2 / 2.0),
}


@dataclass(frozen=True)
class Phase:
    """One timed step. Depths [J] and offsets [m] are linear ramps except the
    offset during MOVE / RETURN_MOVABLE, which follows the schedule profile."""

    kind: PhaseKind
    duration: float
    movable_depth: tuple[float, float]
    static_depth: tuple[float, float]
    movable_offset: tuple[float, float] = (0.0, 0.0)

    @property
    def distance(self) -> float:
        return self.movable_offset[1] - self.movable_offset[0]


@dataclass(frozen=True)
class ShiftSchedule:
    phases: tuple[Phase, ...]
    pitch: float
    waist: float
    trap_depth: float
    mass: float
    eta: float = 0.1
    profile: str = "minimum_jerk"

    @property
    def cycle_duration(self) -> float:
        return float(sum(p.duration for p in self.phases))

    @property
    def direction(self) -> int:
        moves = [p.distance for p in self.phases if p.kind == PhaseKind.MOVE]
        return int(np.sign(moves[0])) if moves and moves[0] != 0 else 0

    def peak_acceleration(self) -> float:
        _, factor = PROFILES[self.profile]
        accel = [
            factor * abs(p.distance) / p.duration**2
            for p in self.phases
            if p.kind in (PhaseKind.MOVE, PhaseKind.RETURN_MOVABLE) and p.duration > 0
        ]
        return max(accel, default=0.0)

    def sample(self, t):
        """Movable offset and both channel depths at times ``t`` within one cycle.

        Returns ``(offset, movable_depth, static_depth)`` arrays.
        """
        shape, _ = PROFILES[self.profile]
        t = np.atleast_1d(np.asarray(t, dtype=float))
        offset = np.empty_like(t)
        mdepth = np.empty_like(t)
        sdepth = np.empty_like(t)
        start = 0.0
        for k, phase in enumerate(self.phases):
            last = k == len(self.phases) - 1
            sel = (t >= start) & ((t <= start + phase.duration) if last else (t < start + phase.duration))
            x = (t[sel] - start) / phase.duration if phase.duration > 0 else np.ones(sel.sum())
            if phase.kind in (PhaseKind.MOVE, PhaseKind.RETURN_MOVABLE):
                frac = shape(x)
            else:
                frac = x
            o0, o1 = phase.movable_offset
            offset[sel] = o0 + (o1 - o0) * frac
            mdepth[sel] = phase.movable_depth[0] + (phase.movable_depth[1] - phase.movable_depth[0]) * x
            sdepth[sel] = phase.static_depth[0] + (phase.static_depth[1] - phase.static_depth[0]) * x
            start += phase.duration
        return offset, mdepth, sdepth

    def timing_csv(self, n_points: int = 201) -> str:
        t = np.linspace(0.0, self.cycle_duration, n_points)
        offset, mdepth, sdepth = self.sample(t)
        rows = ["time,movable_offset,movable_depth_uK,static_depth_uK"]
        for values in zip(t, offset, mdepth / BOLTZMANN * 1e6, sdepth / BOLTZMANN * 1e6):
            rows.append(",".join(f"{v:.9g}" for v in values))
        return "\n".join(rows) + "\n"


def default_schedule(
    pitch: float,
    move_duration: float,
    *,
    waist: float = 3.7e-6,
    trap_depth: float = BOLTZMANN * 1e-4,
    mass: float = 84.911789738 * ATOMIC_MASS_UNIT,
    hold_duration: float = 0.5e-3,
    transfer_duration: float = 0.5e-3,
    return_duration: float | None = None,
    direction: int = 1,
    eta: float = 0.1,
    profile: str = "minimum_jerk",
) -> ShiftSchedule:
    """Canonical five-phase cycle moving atoms by one ``pitch`` per cycle."""
    if not pitch > 0 or not move_duration > 0:
        raise ValueError("pitch and move_duration must be > 0")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; allowed: {', '.join(PROFILES)}")
    a = direction * pitch
    u = trap_depth
    ret = move_duration if return_duration is None else return_duration
    phases = (
        Phase(PhaseKind.LOAD_MOVABLE, hold_duration, (u, u), (0.0, 0.0), (0.0, 0.0)),
        Phase(PhaseKind.MOVE, move_duration, (u, u), (0.0, 0.0), (0.0, a)),
        Phase(PhaseKind.TRANSFER_TO_STATIC, transfer_duration, (u, 0.0), (0.0, u), (a, a)),
        Phase(PhaseKind.RETURN_MOVABLE, ret, (0.0, 0.0), (u, u), (a, 0.0)),
        Phase(PhaseKind.TRANSFER_TO_MOVABLE, transfer_duration, (0.0, u), (u, 0.0), (0.0, 0.0)),
    )
    return ShiftSchedule(phases, pitch, waist, trap_depth, mass, eta, profile)


def reversed_schedule(schedule: ShiftSchedule) -> ShiftSchedule:
    """Same timing with every offset mirrored, so atoms move the other way."""
    phases = tuple(
        replace(p, movable_offset=(-p.movable_offset[0], -p.movable_offset[1])) for p in schedule.phases
    )
    return replace(schedule, phases=phases)


def validate_schedule(schedule: ShiftSchedule, require_matched_depths: bool = False) -> list[str]:
    """List every violation found in ``schedule``; an empty list means valid.

    Checks phase durations, offset and depth continuity (including the wrap
    from the last phase back to the first), coincidence and positive depths
    at each transfer midpoint, a single-pitch MOVE, and the adiabaticity
    bound ``m a_max w0 < eta U0``.
    """
    problems: list[str] = []
    phases = schedule.phases
    if not phases:
        return ["schedule has no phases"]
    if schedule.profile not in PROFILES:
        problems.append(f"unknown trajectory profile {schedule.profile!r}")
    for k, p in enumerate(phases):
        if not p.duration > 0:
            problems.append(f"phase {k} ({p.kind.value}): non-positive duration {p.duration}")
        if min(*p.movable_depth, *p.static_depth) < 0:
            problems.append(f"phase {k} ({p.kind.value}): negative trap depth")

    for k, p in enumerate(phases):
        nxt = phases[(k + 1) % len(phases)]
        if not np.isclose(p.movable_offset[1], nxt.movable_offset[0], rtol=0, atol=1e-12):
            problems.append(f"phase {k} -> {(k + 1) % len(phases)}: discontinuous movable offset")
        if not np.allclose(
            [p.movable_depth[1], p.static_depth[1]], [nxt.movable_depth[0], nxt.static_depth[0]], rtol=1e-9, atol=0
        ):
            problems.append(f"phase {k} -> {(k + 1) % len(phases)}: discontinuous trap depth")

    tolerance = 0.1 * schedule.waist
    for k, p in enumerate(phases):
        if p.kind not in TRANSFERS:
            continue
        for offset in p.movable_offset:
            residual = abs(offset - schedule.pitch * np.round(offset / schedule.pitch))
            if residual > tolerance:
                problems.append(f"phase {k} ({p.kind.value}): transfer without coincidence (offset {offset:.3e} m)")
                break
        mid_m = 0.5 * sum(p.movable_depth)
        mid_s = 0.5 * sum(p.static_depth)
        if not (mid_m > 0 and mid_s > 0):
            problems.append(f"phase {k} ({p.kind.value}): transfer without both traps on")
        if require_matched_depths and not np.isclose(max(p.movable_depth), max(p.static_depth), rtol=1e-6):
            problems.append(f"phase {k} ({p.kind.value}): unmatched depths at transfer")

    moves = [p for p in phases if p.kind == PhaseKind.MOVE]
    if len(moves) != 1:
        problems.append(f"expected exactly one MOVE phase, found {len(moves)}")
    elif not np.isclose(abs(moves[0].distance), schedule.pitch, rtol=1e-9):
        problems.append(f"MOVE covers {abs(moves[0].distance):.3e} m, not one pitch {schedule.pitch:.3e} m")

    if schedule.profile in PROFILES and all(p.duration > 0 for p in phases):
        force = schedule.mass * schedule.peak_acceleration() * schedule.waist
        bound = schedule.eta * schedule.trap_depth
        if not force < bound:
            problems.append(f"adiabaticity: m a_max w0 = {force:.3e} J >= eta U0 = {bound:.3e} J")
    return problems


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class LossModel:
    """Independent per-atom loss probability per cycle."""

    probability_per_cycle: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if not 0 <= self.probability_per_cycle <= 1:
            raise ValueError("loss probability must lie in [0, 1]")


@dataclass
class TransportResult:
    """Bookkeeping of a shift run.

    ``displacement`` maps each initially occupied site (row, col) to the
    distance travelled by its contents [m]; NaN where they were lost or
    dropped off the grid edge.
    """

    displacement: np.ndarray
    lost: int
    dropped_at_edge: int
    cycles: int
    added_dephasing: bool = False
    log: list = field(default_factory=list)

    def log_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["cycle", "site_i", "site_j", "position_x", "occupancy"])
        for row in self.log:
            writer.writerow([row[0], row[1], row[2], f"{row[3]:.9g}", row[4]])
        return buf.getvalue()


def _log_rows(cycle, state):
    rows = []
    for i, j in np.argwhere(state.occupancy > 0):
        rows.append((cycle, int(i), int(j), float(state.position[i, j, 0]), int(state.occupancy[i, j])))
    return rows


def run_cycles(
    state: RegisterState,
    schedule: ShiftSchedule,
    n_cycles: int,
    loss_model: LossModel | None = None,
    record_log: bool = False,
) -> tuple[RegisterState, TransportResult]:
    """Shift register contents ``n_cycles`` times along the column axis.

    Returns a new state; ``state`` is left untouched. Contents pushed past the
    last column are dropped and counted in ``dropped_at_edge``.
    """
    problems = validate_schedule(schedule)
    if problems:
        raise ScheduleError("invalid schedule: " + "; ".join(problems))
    if n_cycles < 0:
        raise ValueError("n_cycles must be >= 0")
    loss_model = loss_model or LossModel()
    rng = np.random.default_rng(loss_model.seed)
    step = schedule.direction
    rows, cols = state.shape

    current = state.copy()
    # origin[i, j] = flat index of the initial site whose contents now sit at (i, j)
    origin = np.where(state.occupancy > 0, np.arange(rows * cols).reshape(rows, cols), -1)
    lost = dropped = 0
    log = _log_rows(0, current) if record_log else []

    for cycle in range(1, n_cycles + 1):
        if loss_model.probability_per_cycle > 0:
            survivors = rng.binomial(current.occupancy, 1.0 - loss_model.probability_per_cycle)
            lost += int((current.occupancy - survivors).sum())
            emptied = (survivors == 0) & (current.occupancy > 0)
            origin[emptied] = -1
            current.set_occupancy(survivors)

        leaving = current.occupancy[:, -1] if step > 0 else current.occupancy[:, 0]
        dropped += int(leaving.sum())
        occ = np.zeros_like(current.occupancy)
        bloch = np.full_like(current.bloch, np.nan)
        new_origin = np.full_like(origin, -1)
        if step > 0:
            occ[:, 1:], bloch[:, 1:], new_origin[:, 1:] = current.occupancy[:, :-1], current.bloch[:, :-1], origin[:, :-1]
        else:
            occ[:, :-1], bloch[:, :-1], new_origin[:, :-1] = current.occupancy[:, 1:], current.bloch[:, 1:], origin[:, 1:]
        current.occupancy, current.bloch, origin = occ, bloch, new_origin
        if record_log:
            log.extend(_log_rows(cycle, current))

    displacement = np.full(state.shape, np.nan)
    for i, j in np.argwhere(origin >= 0):
        oi, oj = divmod(int(origin[i, j]), cols)
        displacement[oi, oj] = (j - oj) * schedule.pitch
    result = TransportResult(displacement, lost, dropped, n_cycles, False, log)
    return current, result


@dataclass(frozen=True)
class ShiftEchoResult:
    ratio: float
    rest_fit: ContrastFit
    shift_fit: ContrastFit
    rest: SequenceResult
    shift: SequenceResult


def shift_with_echo(
    model: DephasingModel,
    schedule: ShiftSchedule,
    echo_times,
    seed,
    transport_dephasing: float = 0.0,
    rabi_frequency: float = 2 * np.pi * 1e6,
    shots: int | None = 100_000,
) -> ShiftEchoResult:
    """Compare echo decay for atoms at rest and atoms cycled through the register.

    The shift cycle runs inside the first free-evolution period, so every
    ``t_pi = echo_time / 2`` must be at least one cycle long.
    ``transport_dephasing`` is an extra Gaussian dephasing rate [1/s] acting on
    the shifted atoms only. ``shots`` is the number of atom detections pooled
    per echo point (register sites x atoms per site x repetitions). Returns
    the fitted ``T2'(shift) / T2'(rest)``.
    """
    problems = validate_schedule(schedule)
    if problems:
        raise ScheduleError("invalid schedule: " + "; ".join(problems))
    echo_times = np.asarray(echo_times, dtype=float)
    if np.any(echo_times / 2.0 < schedule.cycle_duration - 1e-15):
        raise ValueError(
            f"every t_pi must cover the {schedule.cycle_duration * 1e3:.2f} ms shift cycle"
        )
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rest_seed, shift_seed = root.spawn(2)
    rest = spin_echo_sequence(model, rabi_frequency, echo_times, rest_seed, shots=shots)
    shifted = spin_echo_sequence(
        model, rabi_frequency, echo_times, shift_seed, shots=shots, extra_dephasing_rate=transport_dephasing
    )
    rest_fit = fit_contrast_decay(echo_times, rest.ensemble_contrast)
    shift_fit = fit_contrast_decay(echo_times, shifted.ensemble_contrast)
    return ShiftEchoResult(shift_fit.t2_prime / rest_fit.t2_prime, rest_fit, shift_fit, rest, shifted)
