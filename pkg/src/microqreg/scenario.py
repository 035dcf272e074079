"""Scenario files: parsing, validation and execution.

A scenario is a YAML mapping with a ``kind`` (one of :data:`KINDS`), the
sections that kind needs, a ``seed`` for stochastic kinds and an optional
``expect`` block::

    expect:
      depth_uK: {target: 100, rel_tol: 0.10}
      ratio: {min: 0.94, max: 1.02}

Each expectation names a headline quantity of the run and is checked
exactly once in the summary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from . import beam_optics, detection, qubit, register, rydberg, shift_register, trap_physics
from .constants import BOLTZMANN, TWO_PI


class ScenarioError(ValueError):
    """Invalid scenario; ``errors`` lists every problem found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid scenario:\n  " + "\n  ".join(self.errors))


# Field spec: (type, required, default, description)
_NUM = (int, float)

_LASER = {
    "wavelength": (_NUM, True, None, "trap laser wavelength [m]"),
    "power": (_NUM, True, None, "power in the central trap [W]"),
    "waist": (_NUM, True, None, "1/e^2 waist of each focus [m]"),
}
_GRID = {
    "rows": (int, True, None, "lens rows"),
    "cols": (int, True, None, "lens columns"),
    "pitch": (_NUM, False, 55e-6, "lens pitch [m]"),
    "numerical_aperture": (_NUM, False, 0.29, "lens NA"),
    "demagnification": (_NUM, False, 1.0, "relay demagnification"),
    "illumination_waist": (_NUM, False, None, "global beam 1/e^2 radius in the lens plane [m]; omit for flat"),
}
_MODEL = {
    "t2_star": (_NUM, False, float("inf"), "inhomogeneous dephasing time [s]"),
    "t2_prime": (_NUM, False, float("inf"), "homogeneous (Gaussian) dephasing time [s]"),
    "ensemble_size": (int, False, 1000, "simulated atoms per site"),
}
_TIMES = {
    "start": (_NUM, True, None, "first time [s]"),
    "stop": (_NUM, True, None, "last time [s]"),
    "num": (int, True, None, "number of points"),
}

KINDS = {
    "trap_characterization": {
        "summary": "Trap depth, scattering rates, frequencies and coherence limit of one site.",
        "stochastic": False,
        "sections": {
            "species": {"symbol": (str, False, "Rb85", "entry in the species data file")},
            "laser": _LASER,
            "model": {"rotating_wave": (bool, False, False, "use the rotating-wave two-level formulas")},
        },
    },
    "loading_detection": {
        "summary": "Stochastic loading plus fluorescence readout and number classification.",
        "stochastic": True,
        "sections": {
            "grid": _GRID,
            "loading": {
                "kind": (str, True, None, "poisson | blockade | optimized"),
                "mean": (_NUM, False, None, "Poisson mean"),
                "p1": (_NUM, False, None, "single-atom probability for blockade/optimized"),
            },
            "detection": {
                "background": (_NUM, False, 300.0, "background level [a.u.]"),
                "per_atom": (_NUM, False, 400.0, "signal per atom [a.u.]"),
                "sigma": (_NUM, False, 60.0, "Gaussian noise [a.u.]"),
                "runs": (int, False, 1, "independent register readouts"),
                "bin_width": (_NUM, False, 20.0, "histogram bin width [a.u.]"),
            },
        },
    },
    "coherence": {
        "summary": "Ramsey and spin-echo sequences with a Gaussian T2' fit.",
        "stochastic": True,
        "sections": {
            "model": _MODEL,
            "pulses": {"rabi_frequency": (_NUM, False, TWO_PI * 1e6, "Rabi frequency [rad/s]")},
            "ramsey": {**_TIMES, "analysis_detuning": (_NUM, False, 0.0, "analysis detuning [rad/s]")},
            "echo": {**_TIMES, "shots": (int, False, None, "detections per point; omit for exact averages")},
        },
    },
    "addressing": {
        "summary": "SLM-selected pi pulse followed by a global Ramsey sequence.",
        "stochastic": True,
        "sections": {
            "grid": _GRID,
            "mask": {
                "kind": (str, True, None, "full | superlattice | blocks | ring | checkerboard"),
                "period": (int, False, None, "superlattice period"),
                "offset": (list, False, None, "superlattice offset [row, col]"),
                "orientation": (str, False, None, "axis | diagonal"),
                "block": (list, False, None, "block dims [rows, cols]"),
                "gap": (int, False, None, "gap between blocks"),
                "radius": (_NUM, False, None, "ring radius in sites"),
                "center": (list, False, None, "ring centre [row, col]"),
                "parity": (int, False, None, "checkerboard parity"),
            },
            "model": _MODEL,
            "pulses": {"rabi_frequency": (_NUM, False, TWO_PI * 1e6, "Rabi frequency [rad/s]")},
            "ramsey": {**_TIMES, "analysis_detuning": (_NUM, True, None, "analysis detuning [rad/s]")},
        },
    },
    "shift_register": {
        "summary": "Shift-register transport and echo comparison of shifted vs resting atoms.",
        "stochastic": True,
        "sections": {
            "grid": _GRID,
            "schedule": {
                "move_duration": (_NUM, False, 5e-3, "MOVE phase duration [s]"),
                "hold_duration": (_NUM, False, 0.5e-3, "LOAD_MOVABLE duration [s]"),
                "transfer_duration": (_NUM, False, 0.5e-3, "each transfer duration [s]"),
                "waist": (_NUM, False, 3.7e-6, "trap waist [m]"),
                "depth_uK": (_NUM, False, 100.0, "trap depth [uK]"),
                "eta": (_NUM, False, 0.1, "adiabaticity margin"),
                "profile": (str, False, "minimum_jerk", "minimum_jerk | cosine"),
            },
            "transport": {
                "cycles": (int, True, None, "number of shift cycles"),
                "load_columns": (int, False, None, "fill only the first N columns"),
                "loss_probability": (_NUM, False, 0.0, "per-atom loss per cycle"),
            },
            "model": _MODEL,
            "echo": {
                **_TIMES,
                "shots": (int, False, 100_000, "pooled detections per echo point"),
                "transport_dephasing": (_NUM, False, 0.0, "extra Gaussian dephasing rate of shifted atoms [1/s]"),
            },
        },
    },
    "rydberg_feasibility": {
        "summary": "Blockade geometry checks and multiplicative gate-error budget.",
        "stochastic": False,
        "sections": {
            "geometries": {"items": (list, True, None, "list of {name, blockade_radius, pitch, waist}")},
            "budget": {
                "intrinsic_error": (_NUM, True, None, "intrinsic gate error"),
                "technical_error": (_NUM, False, None, "technical gate error"),
                "observed_fidelity": (_NUM, False, None, "measured fidelity to solve the technical error from"),
            },
        },
    },
}


@dataclass
class Scenario:
    name: str
    kind: str
    sections: dict
    seed: int | None = None
    output: str | None = None
    expect: dict = field(default_factory=dict)
    description: str = ""
    source: str | None = None


def _check_type(value, kind):
    if kind is bool:
        return isinstance(value, bool)
    if isinstance(value, bool):
        return False
    if kind is _NUM:
        return isinstance(value, _NUM)
    return isinstance(value, kind)


def _type_name(kind):
    return "number" if kind is _NUM else kind.__name__


def validate(raw, name: str = "<scenario>") -> Scenario:
    """Check a parsed mapping against the schema of its kind, collecting all errors."""
    if not isinstance(raw, dict):
        raise ScenarioError(["<root>: expected a mapping"])
    errors = []
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ScenarioError([f"kind: unknown experiment kind {kind!r}; allowed: {', '.join(KINDS)}"])
    schema = KINDS[kind]

    seed = raw.get("seed")
    if schema["stochastic"] and seed is None:
        errors.append(f"seed: required for stochastic kind {kind!r}")
    if seed is not None and not _check_type(seed, int):
        errors.append("seed: expected an integer")

    allowed_top = {"kind", "seed", "output", "expect", "name", "description", *schema["sections"]}
    for key in raw:
        if key not in allowed_top:
            errors.append(f"{key}: unknown section for kind {kind!r}")

    sections = {}
    for section, fields in schema["sections"].items():
        given = raw.get(section, {})
        if section == "geometries" and isinstance(given, list):
            given = {"items": given}
        if given is None:
            given = {}
        if not isinstance(given, dict):
            errors.append(f"{section}: expected a mapping")
            continue
        resolved = {}
        for key in given:
            if key not in fields:
                errors.append(f"{section}.{key}: unknown field")
        for key, (ftype, required, default, _doc) in fields.items():
            if key in given and given[key] is not None:
                value = given[key]
                if isinstance(value, str) and ftype is _NUM:
                    try:
                        value = float(value)
                    except ValueError:
                        pass
                if not _check_type(value, ftype):
                    errors.append(f"{section}.{key}: expected {_type_name(ftype)}, got {type(value).__name__}")
                    continue
                resolved[key] = value
            elif required:
                errors.append(f"{section}.{key}: required")
            elif default is not None:
                resolved[key] = default
        sections[section] = resolved

    expect = raw.get("expect") or {}
    if not isinstance(expect, dict):
        errors.append("expect: expected a mapping")
        expect = {}
    for key, spec in expect.items():
        if not isinstance(spec, dict) or not ({"target", "min", "max", "equals"} & set(spec)):
            errors.append(f"expect.{key}: needs target/rel_tol, target/abs_tol, target/factor, min/max or equals")

    if errors:
        raise ScenarioError(errors)
    return Scenario(
        name=raw.get("name", name),
        kind=kind,
        sections=sections,
        seed=seed,
        output=raw.get("output"),
        expect=dict(expect),
        description=raw.get("description", ""),
    )


def _shipped_dir():
    return resources.files("microqreg").joinpath("scenarios")


def list_scenarios() -> list[tuple[str, str, str]]:
    """``(name, kind, description)`` for every shipped scenario."""
    out = []
    for entry in sorted(_shipped_dir().iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".yaml"):
            raw = yaml.safe_load(entry.read_text())
            out.append((entry.name[:-5], raw.get("kind", "?"), raw.get("description", "")))
    return out


def describe(kind: str) -> str:
    """Human-readable field schema for an experiment kind."""
    if kind not in KINDS:
        raise KeyError(f"unknown experiment kind {kind!r}; allowed: {', '.join(KINDS)}")
    schema = KINDS[kind]
    lines = [f"{kind}: {schema['summary']}", f"  seed: {'required' if schema['stochastic'] else 'optional'}"]
    for section, fields in schema["sections"].items():
        lines.append(f"  {section}:")
        for key, (ftype, required, default, doc) in fields.items():
            flag = "required" if required else f"default {default!r}"
            lines.append(f"    {key} ({_type_name(ftype)}, {flag}): {doc}")
    lines.append("  expect: optional mapping of headline quantity -> check")
    return "\n".join(lines)


def parse_scenario(path) -> Scenario:
    """Load and validate a scenario file, or a shipped scenario by name."""
    path = Path(path)
    if not path.exists():
        shipped = _shipped_dir().joinpath(f"{path.name.removesuffix('.yaml')}.yaml")
        if path.parent == Path(".") and shipped.is_file():
            text, source = shipped.read_text(), str(shipped)
        else:
            raise FileNotFoundError(f"scenario file not found: {path}")
    else:
        text, source = path.read_text(), str(path)
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError([f"<syntax>: {exc}"]) from exc
    scenario = validate(raw, name=Path(source).stem)
    scenario.source = source
    return scenario


# -- execution


@dataclass
class RunSummary:
    scenario: dict
    headline: dict
    checks: list
    files: list

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_yaml(self) -> str:
        return yaml.safe_dump(
            {"scenario": self.scenario, "headline": self.headline, "checks": self.checks, "files": self.files},
            sort_keys=False,
        )


def _evaluate(name, spec, headline):
    value = headline.get(name)
    record = {"quantity": name, "expect": dict(spec)}
    if value is None:
        record.update(value=None, passed=False, note="quantity not produced by this run")
        return record
    if "equals" in spec:
        ok = value == spec["equals"]
    elif "target" in spec and "rel_tol" in spec:
        ok = abs(value - spec["target"]) <= spec["rel_tol"] * abs(spec["target"])
    elif "target" in spec and "abs_tol" in spec:
        ok = abs(value - spec["target"]) <= spec["abs_tol"]
    elif "target" in spec and "factor" in spec:
        ok = spec["target"] / spec["factor"] <= value <= spec["target"] * spec["factor"]
    else:
        ok = spec.get("min", -np.inf) <= value <= spec.get("max", np.inf)
    record.update(value=value, passed=bool(ok))
    return record


def _plain(value):
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def _times(cfg):
    return np.linspace(cfg["start"], cfg["stop"], cfg["num"])


def _lens_array(cfg):
    return beam_optics.LensArraySpec(
        cfg["pitch"], cfg["rows"], cfg["cols"], cfg["numerical_aperture"], cfg["demagnification"]
    )


def _dephasing(cfg):
    return qubit.DephasingModel(float(cfg["t2_star"]), float(cfg["t2_prime"]), cfg["ensemble_size"])


def _run_trap(sc, seed):
    species = trap_physics.load_species(sc.sections["species"]["symbol"])
    laser_cfg = sc.sections["laser"]
    laser = trap_physics.TrapLaserSpec(laser_cfg["wavelength"], laser_cfg["power"], laser_cfg["waist"])
    rw = sc.sections["model"]["rotating_wave"]
    trap = trap_physics.characterize_trap(laser, species, rotating_wave=rw)
    headline = {
        "depth_J": trap.depth,
        "depth_uK": trap.depth / BOLTZMANN * 1e6,
        "scattering_rate": trap.total_scattering_rate,
        "state_changing_rate": trap.state_changing_rate,
        "coherence_limit": trap.coherence_limit,
        "rayleigh_range_um": trap.rayleigh_range * 1e6,
        "radial_frequency": trap.radial_frequency,
        "axial_frequency": trap.axial_frequency,
        "detuning_over_gamma": trap.effective_detuning / species.natural_linewidth,
    }
    beam = laser.beam()
    r = np.linspace(0.0, 3 * laser.waist, 61)
    z = np.linspace(0.0, 3 * trap.rayleigh_range, 61)
    scale = -trap.depth / trap.peak_intensity if trap.peak_intensity else 0.0
    rows = ["coordinate,position,intensity,potential_uK"]
    for label, coords, values in (
        ("r", r, beam_optics.intensity_at(beam, r, 0.0)),
        ("z", z, beam_optics.intensity_at(beam, 0.0, z)),
    ):
        for x, i in zip(coords, values):
            rows.append(f"{label},{x:.9g},{i:.9g},{scale * i / BOLTZMANN * 1e6:.9g}")
    return headline, {"trap_profile.csv": "\n".join(rows) + "\n"}


def _run_loading(sc, seed):
    grid = beam_optics.spot_grid(_lens_array(sc.sections["grid"]), sc.sections["grid"].get("illumination_waist"))
    mode = detection.loading_mode_from_config(sc.sections["loading"])
    det = sc.sections["detection"]
    model = detection.DetectionModel(det["background"], det["per_atom"], det["sigma"])
    seeds = np.random.SeedSequence(seed).spawn(2 * det["runs"])

    occupancies, records = [], []
    for k in range(det["runs"]):
        state = detection.load_register(grid, mode, seeds[2 * k])
        signals = detection.simulate_fluorescence(state.occupancy, model, seeds[2 * k + 1])
        occupancies.append(state.occupancy)
        records.append(detection.classify_counts(signals, model))
    occ = np.stack(occupancies)
    counts = np.stack([r.counts for r in records])
    n_max = int(occ.max()) + 1
    pmf = np.array([np.mean(occ == n) for n in range(n_max + 1)])
    headline = {f"p{n}": float(pmf[n]) for n in range(min(n_max + 1, 4))}
    headline["p_multi"] = float(np.mean(occ >= 2))
    headline["misclassification_rate"] = float(np.mean(counts != occ))
    headline["misclassification_oracle"] = detection.misclassification_probability(model, mode.pmf(np.arange(n_max + 20)))
    headline["sites"] = int(occ.size)
    merged = detection.DetectionRecord(
        np.concatenate([r.signals.ravel() for r in records]),
        counts.ravel(),
        records[0].thresholds,
        np.concatenate([r.anomalous.ravel() for r in records]),
    )
    headline["anomalous"] = int(merged.anomalous.sum())
    files = {
        "detection.csv": records[0].to_csv(),
        "histogram.csv": merged.histogram_csv(det["bin_width"]),
    }
    return headline, files


def _run_coherence(sc, seed):
    model = _dephasing(sc.sections["model"])
    rabi = sc.sections["pulses"]["rabi_frequency"]
    ramsey_seed, echo_seed = np.random.SeedSequence(seed).spawn(2)
    rcfg, ecfg = sc.sections["ramsey"], sc.sections["echo"]
    ramsey = qubit.ramsey_sequence(model, rabi, _times(rcfg), ramsey_seed, rcfg["analysis_detuning"])
    echo = qubit.spin_echo_sequence(model, rabi, _times(ecfg), echo_seed, shots=ecfg.get("shots"))
    fit = qubit.fit_contrast_decay(echo.times, echo.ensemble_contrast)
    headline = {"t2_prime_fit": fit.t2_prime, "c0_fit": fit.c0, "fit_residual": fit.residual_norm}
    if np.isfinite(model.t2_star):
        check = qubit.ramsey_sequence(model, rabi, [model.t2_star], ramsey_seed)
        headline["ramsey_inhomogeneous_envelope_at_t2_star"] = float(check.contrast[0, 0] / model.homogeneous_factor(model.t2_star))
    files = {
        "ramsey.csv": ramsey.to_csv(),
        "echo.csv": echo.to_csv(),
        "fit.json": json.dumps(fit.as_dict(), indent=2, sort_keys=True) + "\n",
    }
    return headline, files


def _run_addressing(sc, seed):
    spec = _lens_array(sc.sections["grid"])
    grid = beam_optics.spot_grid(spec, sc.sections["grid"].get("illumination_waist"))
    mask = register.build_mask(register.pattern_from_config(sc.sections["mask"]), spec)
    model = _dephasing(sc.sections["model"])
    rabi = sc.sections["pulses"]["rabi_frequency"]
    rcfg = sc.sections["ramsey"]
    delta = rcfg["analysis_detuning"]

    state = register.RegisterState.from_occupancy(grid, np.ones(grid.shape, dtype=int))
    flip = qubit.Pulse.area(rabi, np.pi)
    qubit.apply_pulse_to_register(state, flip, rabi_scale=mask.transmissions)
    result = qubit.register_ramsey(state, model, rabi, _times(rcfg), seed, delta)
    phases = qubit.fringe_phase(result.times, result.population0, delta)

    on = register.addressed_sites(mask, 0.5)
    is_on = np.array([site in on for site in result.sites])
    mean_on = np.angle(np.mean(np.exp(1j * phases[is_on])))
    mean_off = np.angle(np.mean(np.exp(1j * phases[~is_on])))
    relative = float(np.abs(np.angle(np.exp(1j * (mean_on - mean_off)))))
    complement = result.population0[is_on].mean(axis=0) + result.population0[~is_on].mean(axis=0)
    headline = {
        "relative_phase": relative,
        "addressed_sites": int(is_on.sum()),
        "unaddressed_sites": int((~is_on).sum()),
        "max_complement_deviation": float(np.max(np.abs(complement - 1.0))),
    }
    files = {"mask.txt": mask.to_text(), "ramsey_sites.csv": result.to_csv()}
    return headline, files


def _run_shift(sc, seed):
    gcfg, scfg, tcfg = sc.sections["grid"], sc.sections["schedule"], sc.sections["transport"]
    spec = _lens_array(gcfg)
    grid = beam_optics.spot_grid(spec)
    schedule = shift_register.default_schedule(
        spec.trap_pitch,
        scfg["move_duration"],
        waist=scfg["waist"],
        trap_depth=scfg["depth_uK"] * 1e-6 * BOLTZMANN,
        hold_duration=scfg["hold_duration"],
        transfer_duration=scfg["transfer_duration"],
        eta=scfg["eta"],
        profile=scfg["profile"],
    )
    violations = shift_register.validate_schedule(schedule)
    load_seed, loss_seed, echo_seed = np.random.SeedSequence(seed).spawn(3)

    occupancy = np.ones(grid.shape, dtype=int)
    if tcfg.get("load_columns") is not None:
        occupancy[:, tcfg["load_columns"]:] = 0
    state = register.RegisterState.from_occupancy(grid, occupancy)
    loss = shift_register.LossModel(tcfg["loss_probability"], int(loss_seed.generate_state(1)[0]))
    final, transport = shift_register.run_cycles(state, schedule, tcfg["cycles"], loss, record_log=True)

    moved = transport.displacement[~np.isnan(transport.displacement)]
    expected = tcfg["cycles"] * schedule.pitch
    headline = {
        "schedule_violations": len(violations),
        "cycle_duration_ms": schedule.cycle_duration * 1e3,
        "peak_acceleration": schedule.peak_acceleration(),
        "atoms_initial": state.n_atoms,
        "atoms_final": final.n_atoms,
        "lost": transport.lost,
        "dropped_at_edge": transport.dropped_at_edge,
        "all_displaced_exactly": bool(np.allclose(moved, expected, rtol=0, atol=1e-12 * expected)),
        "displacement_um": float(moved.mean() * 1e6) if moved.size else 0.0,
    }
    ecfg = sc.sections["echo"]
    echo = shift_register.shift_with_echo(
        _dephasing(sc.sections["model"]),
        schedule,
        _times(ecfg),
        echo_seed,
        transport_dephasing=ecfg["transport_dephasing"],
        shots=ecfg["shots"],
    )
    headline.update(
        ratio=echo.ratio, t2_prime_rest=echo.rest_fit.t2_prime, t2_prime_shift=echo.shift_fit.t2_prime
    )
    files = {
        "transport_log.csv": transport.log_csv(),
        "timing.csv": schedule.timing_csv(),
        "echo_rest.csv": echo.rest.to_csv(),
        "echo_shift.csv": echo.shift.to_csv(),
    }
    return headline, files


def _run_rydberg(sc, seed):
    budget = sc.sections["budget"]
    intrinsic = budget["intrinsic_error"]
    headline = {}
    technical = budget.get("technical_error")
    if budget.get("observed_fidelity") is not None:
        technical = rydberg.technical_error_for(budget["observed_fidelity"], intrinsic)
    technical = technical or 0.0
    rows = ["name,blockade_radius,pitch,waist,pair_within_blockade,sites_resolved,compatible"]
    fb = None
    for item in sc.sections["geometries"]["items"]:
        cfg = rydberg.BlockadeConfig(item["blockade_radius"], item["pitch"], item["waist"], intrinsic, technical)
        fb = rydberg.gate_fidelity_budget(cfg)
        report = rydberg.geometry_compatible(cfg)
        headline[f"{item['name']}_compatible"] = report.compatible
        headline[f"{item['name']}_within_blockade"] = report.pair_within_blockade
        headline[f"{item['name']}_resolved"] = report.sites_resolved
        rows.append(
            f"{item['name']},{cfg.blockade_radius:.6g},{cfg.pitch:.6g},{cfg.waist:.6g},"
            f"{report.pair_within_blockade},{report.sites_resolved},{report.compatible}"
        )
    if fb is not None:
        headline.update(intrinsic_fidelity=fb.intrinsic_fidelity, total_fidelity=fb.total_fidelity)
    headline["technical_error"] = technical
    return headline, {"geometry.csv": "\n".join(rows) + "\n"}


RUNNERS = {
    "trap_characterization": _run_trap,
    "loading_detection": _run_loading,
    "coherence": _run_coherence,
    "addressing": _run_addressing,
    "shift_register": _run_shift,
    "rydberg_feasibility": _run_rydberg,
}


def run(scenario: Scenario, out_dir=None, seed: int | None = None) -> RunSummary:
    """Execute a scenario, write its data files and ``summary.yaml``.

    ``seed`` overrides the scenario seed. Outputs go to ``out_dir``, else the
    scenario's ``output`` entry, else ``./runs/<name>``.
    """
    seed = scenario.seed if seed is None else seed
    out = Path(out_dir or scenario.output or Path("runs") / scenario.name)
    headline, files = RUNNERS[scenario.kind](scenario, seed)
    headline = {k: _plain(v) for k, v in headline.items()}
    checks = [_evaluate(name, spec, headline) for name, spec in scenario.expect.items()]
    summary = RunSummary(
        scenario={"name": scenario.name, "kind": scenario.kind, "seed": seed, "sections": scenario.sections},
        headline=headline,
        checks=checks,
        files=sorted(files) + ["summary.yaml"],
    )
    out.mkdir(parents=True, exist_ok=True)
    for fname, text in files.items():
        (out / fname).write_text(text)
    (out / "summary.yaml").write_text(summary.to_yaml())
    return summary
