"""Neutral-atom qubit registers in microlens dipole-trap arrays.

Submodules
----------
beam_optics      Gaussian foci and microlens spot grids.
trap_physics     Dipole potential, scattering and trap frequencies.
register         SLM masks, addressing patterns and register state.
detection        Stochastic loading and fluorescence number readout.
qubit            Bloch-vector pulses, Ramsey and spin-echo sequences.
shift_register   Phase schedules and atom transport between sites.
rydberg          Blockade geometry checks and gate error budget.
scenario         YAML scenario files and the ``run`` driver.
"""

from . import beam_optics, detection, qubit, register, rydberg, scenario, shift_register, trap_physics
from .beam_optics import GaussianBeam, LensArraySpec, SiteGrid, spot_grid
from .detection import DetectionModel, load_register
from .qubit import DephasingModel, Pulse, fit_contrast_decay, ramsey_sequence, spin_echo_sequence
from .register import RegisterState, SLMMask, build_mask
from .rydberg import BlockadeConfig, gate_fidelity_budget, geometry_compatible
from .scenario import ScenarioError, parse_scenario, run
from .shift_register import ShiftSchedule, default_schedule, run_cycles, shift_with_echo
from .trap_physics import AtomSpecies, TrapLaserSpec, characterize_trap, load_species

__version__ = "0.1.0"

__all__ = [
    "AtomSpecies",
    "BlockadeConfig",
    "DephasingModel",
    "DetectionModel",
    "GaussianBeam",
    "LensArraySpec",
    "Pulse",
    "RegisterState",
    "SLMMask",
    "ScenarioError",
    "ShiftSchedule",
    "SiteGrid",
    "TrapLaserSpec",
    "beam_optics",
    "build_mask",
    "characterize_trap",
    "default_schedule",
    "detection",
    "fit_contrast_decay",
    "gate_fidelity_budget",
    "geometry_compatible",
    "load_register",
    "load_species",
    "parse_scenario",
    "qubit",
    "ramsey_sequence",
    "register",
    "run",
    "run_cycles",
    "rydberg",
    "scenario",
    "shift_register",
    "shift_with_echo",
    "spin_echo_sequence",
    "spot_grid",
    "trap_physics",
]
