"""Python access to the zkcyl solver and to its on-disk run outputs."""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._core import (
    ConfigError,
    Discretization,
    DomainError,
    Error,
    FormatError,
    ShapeError,
    SolverFailure,
    StepFailure,
    cheb_profile_coefficients,
    cheb_tails,
    cone_half_angle,
    energy,
    energy_mass_ratio,
    evolve,
    gaussian,
    ground_state,
    linf,
    mass,
    resume,
    run_scenario,
    scenario_names,
    shift_in_x,
)
from . import _core

DIAGNOSTIC_COLUMNS = (
    "t",
    "mass",
    "energy",
    "linf",
    "fourier_tail",
    "cheb_tail_I",
    "cheb_tail_II",
    "newton_iters",
)


@dataclass
class Snapshot:
    t: float
    header: dict
    disc: Discretization
    values: np.ndarray


def load_snapshot(path):
    header, disc, values = _core._load_snapshot(Path(path))
    header = json.loads(header)
    return Snapshot(t=header["t"], header=header, disc=disc, values=values)


def save_snapshot(path, disc, values, t=0.0, meta=None):
    _core._save_snapshot(Path(path), disc, np.ascontiguousarray(values, dtype=float), float(t),
                         "" if meta is None else json.dumps(meta))


def read_diagnostics(path):
    """Diagnostics series as a dict of column name -> 1-D array."""
    table = _core._read_diagnostics(Path(path))
    return {name: table[:, i] for i, name in enumerate(DIAGNOSTIC_COLUMNS)}


def scenario_preset(name):
    return json.loads(_core._scenario_preset(name))


def run(config):
    """Runs an evolution described by a config document (dict)."""
    return _core._run_config(json.dumps(config))


def solve_ground_state_run(config):
    """Solves for the ground state and writes it into config's output directory."""
    mass_, energy_, residual = _core._run_ground_state(json.dumps(config))
    return {"mass": mass_, "energy": energy_, "residual_norm": residual}


def snapshots(run_dir):
    """Snapshot paths of a run directory, in step order."""
    return sorted(Path(run_dir).glob("snap_*.zks"))
