"""Single-qubit Bloch dynamics: pulses, Ramsey and spin-echo sequences.

Bloch vectors are ``(u, v, w)`` with ``w = -1`` for ``|0>`` and ``w = +1``
for ``|1>``, so the ``|0>`` population is ``(1 - w) / 2``. The two-photon
coupling is treated as an effective two-level Rabi drive.

Dephasing has two parts:

* inhomogeneous: every ensemble member gets a static detuning drawn once
  from a normal distribution with standard deviation ``sqrt(2) / T2*``, so
  the ensemble-averaged transverse amplitude decays as ``exp(-(t/T2*)^2)``
  and equals ``1/e`` at ``t = T2*``;
* homogeneous: transverse components are multiplied by
  ``exp(-(t_total/T2')^2)`` at the end of the free evolution, ``t_total``
  being the summed free-evolution time of the sequence.

Pulses inside sequences are hard (resonant, instantaneous), so static
detunings refocus exactly in a spin echo.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .register import RegisterState

KET0 = np.array([0.0, 0.0, -1.0])
KET1 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class Pulse:
    rabi_frequency: float
    duration: float
    phase: float = 0.0
    detuning: float = 0.0
    target: frozenset | None = None

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("pulse duration must be >= 0")
        if self.rabi_frequency < 0:
            raise ValueError("rabi_frequency must be >= 0")
        if self.target is not None:
            object.__setattr__(self, "target", frozenset(map(tuple, self.target)))

    @classmethod
    def area(cls, rabi_frequency: float, angle: float, phase: float = 0.0, **kwargs) -> "Pulse":
        """Resonant pulse rotating by ``angle`` (pi for a flip)."""
        return cls(rabi_frequency, angle / rabi_frequency, phase, **kwargs)


def rotate(vectors, axis, angle):
    """Rotate Bloch vectors about unit ``axis`` by ``angle`` (right-handed).

    All arguments broadcast; vectors and axes carry a trailing axis of size 3.
    """
    v = np.asarray(vectors, dtype=float)
    n = np.asarray(axis, dtype=float)
    angle = np.asarray(angle, dtype=float)[..., None]
    cos, sin = np.cos(angle), np.sin(angle)
    dot = np.sum(n * v, axis=-1, keepdims=True)
    return v * cos + np.cross(n, v) * sin + n * dot * (1.0 - cos)


def apply_pulse(state, pulse: Pulse, rabi_scale=1.0):
    """Rotate ``state`` by ``pulse``.

    The axis is ``(Omega cos phi, Omega sin phi, delta) / Omega_eff`` and the
    angle ``Omega_eff * duration``, ``Omega_eff = sqrt(Omega^2 + delta^2)``.
    ``rabi_scale`` multiplies Omega (e.g. SLM attenuation at a site).
    """
    omega = pulse.rabi_frequency * np.asarray(rabi_scale, dtype=float)
    omega_eff = np.sqrt(omega**2 + pulse.detuning**2)
    safe = np.where(omega_eff > 0, omega_eff, 1.0)
    axis = np.stack(
        np.broadcast_arrays(
            omega * np.cos(pulse.phase) / safe, omega * np.sin(pulse.phase) / safe, pulse.detuning / safe
        ),
        axis=-1,
    )
    return rotate(state, axis, omega_eff * pulse.duration)


def apply_pulse_to_register(state: RegisterState, pulse: Pulse, rabi_scale=None) -> None:
    """Apply ``pulse`` in place to occupied sites in ``pulse.target`` (all if None).

    ``rabi_scale`` is an optional (rows, cols) array scaling the Rabi
    frequency per site, e.g. the SLM transmission of the addressing light.
    """
    selected = state.occupancy > 0
    if pulse.target is not None:
        chosen = np.zeros(state.shape, dtype=bool)
        for i, j in pulse.target:
            chosen[i, j] = True
        selected &= chosen
    scale = np.ones(state.shape) if rabi_scale is None else np.asarray(rabi_scale, dtype=float)
    state.bloch[selected] = apply_pulse(state.bloch[selected], pulse, scale[selected])


# -- dephasing


@dataclass(frozen=True)
class DephasingModel:
    """Inhomogeneous ``t2_star`` and homogeneous (Gaussian) ``t2_prime`` [s].

    Either time may be ``inf``. ``ensemble_size`` is the number of simulated
    atoms per site.
    """

    t2_star: float = np.inf
    t2_prime: float = np.inf
    ensemble_size: int = 1000

    def __post_init__(self):
        if not self.t2_star > 0 or not self.t2_prime > 0:
            raise ValueError("t2_star and t2_prime must be > 0")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")

    @property
    def detuning_width(self) -> float:
        """Standard deviation of the static detuning distribution [rad/s]."""
        return 0.0 if np.isinf(self.t2_star) else np.sqrt(2.0) / self.t2_star

    def sample_detunings(self, rng: np.random.Generator, size=None) -> np.ndarray:
        size = self.ensemble_size if size is None else size
        return rng.normal(0.0, self.detuning_width, size=size)

    def inhomogeneous_envelope(self, t):
        if np.isinf(self.t2_star):
            return np.ones_like(np.asarray(t, dtype=float))
        return np.exp(-((np.asarray(t, dtype=float) / self.t2_star) ** 2))

    def homogeneous_factor(self, t_total):
        if np.isinf(self.t2_prime):
            return np.ones_like(np.asarray(t_total, dtype=float))
        return np.exp(-((np.asarray(t_total, dtype=float) / self.t2_prime) ** 2))


def _precess(vectors, angle):
    angle = np.asarray(angle, dtype=float)
    cos, sin = np.cos(angle), np.sin(angle)
    u, v, w = vectors[..., 0], vectors[..., 1], vectors[..., 2]
    return np.stack(np.broadcast_arrays(u * cos - v * sin, u * sin + v * cos, w), axis=-1)


def free_evolution(ensemble, t: float, model: DephasingModel, seed=None, detunings=None):
    """Precess each ensemble member by its own static detuning for time ``t``.

    Detunings are drawn from ``model`` with ``seed`` unless given. The
    homogeneous factor is not applied here; sequences apply it once for the
    whole free-evolution time.
    """
    if t < 0:
        raise ValueError("evolution time must be >= 0")
    ensemble = np.asarray(ensemble, dtype=float)
    if detunings is None:
        detunings = model.sample_detunings(np.random.default_rng(seed), ensemble.shape[:-1])
    return _precess(ensemble, np.asarray(detunings) * t)


# -- sequences


@dataclass
class SequenceResult:
    """Populations and contrast of a pulse sequence.

    ``population0[s, k]`` is the ``|0>`` population of site ``s`` at
    ``times[k]``; ``contrast[s, k]`` is the amplitude of the transverse Bloch
    vector just before the final pi/2 pulse, i.e. the fringe amplitude.
    """

    times: np.ndarray
    population0: np.ndarray
    contrast: np.ndarray
    sites: list = field(default_factory=list)

    @property
    def ensemble_contrast(self) -> np.ndarray:
        return self.contrast.mean(axis=0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        labels = [f"p0_{i}_{j}" for i, j in self.sites] or [f"p0_site{s}" for s in range(len(self.population0))]
        writer.writerow(["time", *labels, "ensemble_contrast"])
        for k, t in enumerate(self.times):
            writer.writerow(
                [f"{t:.9g}", *(f"{p:.9f}" for p in self.population0[:, k]), f"{self.ensemble_contrast[k]:.9f}"]
            )
        return buf.getvalue()


def _site_rngs(seed, n_sites):
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.default_rng(s) for s in root.spawn(n_sites)]


def _readout(pre_final, rabi_frequency, rng, shots, reference=None):
    """Final pi/2 pulse plus (optionally sampled) readout.

    ``pre_final`` has shape (times, members, 3). The transverse vector is
    reconstructed from two quadratures (final pulse phase 0 and pi/2). With
    a ``reference`` transverse direction the contrast is the signed
    projection onto it, which stays unbiased under shot noise; otherwise it
    is the vector length. Returns ``(p0, contrast)``.
    """
    half = Pulse.area(rabi_frequency, np.pi / 2)
    quad = Pulse.area(rabi_frequency, np.pi / 2, phase=np.pi / 2)
    w_x = apply_pulse(pre_final, half)[..., 2].mean(axis=-1)
    w_y = apply_pulse(pre_final, quad)[..., 2].mean(axis=-1)
    if shots is None:
        p0_x = (1.0 - w_x) / 2.0
    else:
        p0_x = rng.binomial(shots, np.clip((1.0 - w_x) / 2.0, 0, 1)) / shots
        p0_y = rng.binomial(shots, np.clip((1.0 - w_y) / 2.0, 0, 1)) / shots
        w_x, w_y = 1.0 - 2.0 * p0_x, 1.0 - 2.0 * p0_y
    # pi/2 about x maps v -> w, pi/2 about y maps u -> -w
    u, v = -w_y, w_x
    if reference is None:
        return p0_x, np.hypot(u, v)
    return p0_x, u * reference[0] + v * reference[1]


def _initial(initial_states):
    if initial_states is None:
        return KET0[None, :]
    states = np.atleast_2d(np.asarray(initial_states, dtype=float))
    if states.shape[-1] != 3:
        raise ValueError("initial states must be Bloch 3-vectors")
    return states


def ramsey_sequence(
    model: DephasingModel,
    rabi_frequency: float,
    times,
    seed,
    analysis_detuning: float = 0.0,
    initial_states=None,
    shots: int | None = None,
    sites=None,
) -> SequenceResult:
    """pi/2 - wait t - pi/2 for every time in ``times``.

    Parameters
    ----------
    analysis_detuning : float
        Common laser-atom detuning [rad/s]; sets the fringe frequency.
    initial_states : array (n_sites, 3), optional
        Per-site starting Bloch vectors; defaults to a single site in ``|0>``.
    shots : int, optional
        If given, populations are estimated from ``shots`` projective
        measurements per point instead of the exact ensemble average.
    """
    times = np.asarray(times, dtype=float)
    starts = _initial(initial_states)
    half = Pulse.area(rabi_frequency, np.pi / 2)
    homog = model.homogeneous_factor(times)[:, None, None]
    p0 = np.empty((len(starts), len(times)))
    contrast = np.empty_like(p0)
    for s, (start, rng) in enumerate(zip(starts, _site_rngs(seed, len(starts)))):
        detunings = model.sample_detunings(rng) + analysis_detuning
        after_first = apply_pulse(start, half)
        evolved = _precess(after_first, detunings[None, :] * times[:, None])
        evolved[..., :2] *= homog
        p0[s], contrast[s] = _readout(evolved, rabi_frequency, rng, shots)
    return SequenceResult(times, p0, contrast, list(sites) if sites is not None else [])


def spin_echo_sequence(
    model: DephasingModel,
    rabi_frequency: float,
    echo_times,
    seed,
    initial_states=None,
    shots: int | None = None,
    extra_dephasing_rate: float = 0.0,
) -> SequenceResult:
    """pi/2 - t_pi - pi - t_pi - pi/2 for every total free time ``2 t_pi``.

    The contrast is the echo amplitude along the axis onto which static
    detunings refocus.

    ``extra_dephasing_rate`` (gamma, 1/s) adds a further Gaussian factor
    ``exp(-(gamma * 2 t_pi)^2)``, so the effective time constant becomes
    ``1/sqrt(1/T2'^2 + gamma^2)``.
    """
    echo_times = np.asarray(echo_times, dtype=float)
    if np.any(echo_times < 0):
        raise ValueError("echo times must be >= 0")
    t_pi = echo_times / 2.0
    starts = _initial(initial_states)
    half = Pulse.area(rabi_frequency, np.pi / 2)
    flip = Pulse.area(rabi_frequency, np.pi)
    decay = model.homogeneous_factor(echo_times) * np.exp(-((extra_dephasing_rate * echo_times) ** 2))
    p0 = np.empty((len(starts), len(echo_times)))
    contrast = np.empty_like(p0)
    for s, (start, rng) in enumerate(zip(starts, _site_rngs(seed, len(starts)))):
        angles = model.sample_detunings(rng)[None, :] * t_pi[:, None]
        state = _precess(apply_pulse(start, half), angles)
        state = _precess(apply_pulse(state, flip), angles)
        state[..., :2] *= decay[:, None, None]
        ideal = apply_pulse(apply_pulse(start, half), flip)[:2]
        norm = np.hypot(*ideal)
        reference = ideal / norm if norm > 0 else None
        p0[s], contrast[s] = _readout(state, rabi_frequency, rng, shots, reference)
    return SequenceResult(echo_times, p0, contrast)


# -- analysis


def gaussian_decay(t, c0, t2_prime):
    return c0 * np.exp(-((t / t2_prime) ** 2))


@dataclass(frozen=True)
class ContrastFit:
    c0: float
    t2_prime: float
    residual_norm: float

    def as_dict(self) -> dict:
        return {"c0": self.c0, "t2_prime": self.t2_prime, "residual_norm": self.residual_norm}


def fit_contrast_decay(times, contrasts) -> ContrastFit:
    """Least-squares fit of ``C(t) = C0 exp(-(t/T2')^2)``.

    A straight-line fit of ``ln C`` against ``t^2`` seeds the nonlinear fit.
    """
    times = np.asarray(times, dtype=float)
    contrasts = np.asarray(contrasts, dtype=float)
    if times.shape != contrasts.shape or times.ndim != 1:
        raise ValueError("times and contrasts must be 1D arrays of equal length")
    if len(times) < 3:
        raise ValueError("need at least 3 samples to fit")
    if len(np.unique(times)) < 2:
        raise ValueError("sample times are degenerate")

    positive = contrasts > 0
    if positive.sum() >= 2 and len(np.unique(times[positive])) >= 2:
        slope, intercept = np.polyfit(times[positive] ** 2, np.log(contrasts[positive]), 1)
    else:
        slope, intercept = -1.0 / np.ptp(times) ** 2, 0.0
    t2_guess = 1.0 / np.sqrt(-slope) if slope < 0 else np.ptp(times)
    popt, _ = curve_fit(
        gaussian_decay, times, contrasts, p0=(np.exp(intercept), t2_guess), maxfev=10000
    )
    c0, t2 = float(popt[0]), float(abs(popt[1]))
    residual = float(np.linalg.norm(gaussian_decay(times, c0, t2) - contrasts))
    return ContrastFit(c0, t2, residual)


def fringe_phase(times, population0, analysis_detuning: float) -> np.ndarray:
    """Phase ``phi`` of ``P0(t) = a + A cos(delta t + phi)`` per site (least squares)."""
    times = np.asarray(times, dtype=float)
    pops = np.atleast_2d(population0)
    design = np.column_stack(
        [np.ones_like(times), np.cos(analysis_detuning * times), np.sin(analysis_detuning * times)]
    )
    coef, *_ = np.linalg.lstsq(design, pops.T, rcond=None)
    return np.arctan2(-coef[2], coef[1])


def register_ramsey(
    state: RegisterState,
    model: DephasingModel,
    rabi_frequency: float,
    times,
    seed,
    analysis_detuning: float = 0.0,
    shots: int | None = None,
) -> SequenceResult:
    """Ramsey sequence on every occupied site, starting from its current state."""
    occupied = np.argwhere(state.occupancy > 0)
    starts = state.bloch[occupied[:, 0], occupied[:, 1]]
    sites = [(int(i), int(j)) for i, j in occupied]
    return ramsey_sequence(
        model, rabi_frequency, times, seed, analysis_detuning, starts, shots, sites=sites
    )
