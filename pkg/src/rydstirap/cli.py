"""Batch front-end: JSON scenario files in, CSV/JSON result files out.

Usage::

    rydstirap --scenario run.json --out results/

A scenario file is one JSON object selecting a command and overriding
defaults, e.g.::

    {"command": "two-atom-entangle", "sigma": 1.5, "e": 100, "tau_r": 100}

Commands and their outputs:

=================  =============================================
two-atom-entangle  trajectory.csv, report.json
fidelity-scan      scan.csv
spectrum           spectrum.csv
phase-gate         report.json
jx-zero            trajectory.csv, report.json
ghz                report.json
=================  =============================================

Keys (units): omega1, omega_r, e [MHz]; sigma, delta_t, delta_T, tau_r [us,
tau_r accepts "inf"]; phase_between [rad]; n, r_max [counts]; sigma_values
[us list], e_values [MHz list]; integrator {method, rtol, atol, max_step,
sample_interval}.  Defaults reproduce the reference two-atom run
(omega1 = omega_r = 10 MHz, sigma = 1.5 us, delta_t = 1.1 us, e = 100 MHz,
tau_r = 100 us).  Output is deterministic: identical scenarios give
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .models import CollectiveModel
from .propagator import IntegratorConfig, Trajectory, instantaneous_spectrum
from .protocols import (
    StirapParams,
    entangle_two_atoms,
    fidelity_scan,
    ghz_protocol,
    phase_gate,
    prepare_jx_zero,
)

__all__ = ["Scenario", "ScenarioError", "parse_scenario", "run_scenario", "main"]

COMMANDS = (
    "two-atom-entangle",
    "fidelity-scan",
    "spectrum",
    "phase-gate",
    "jx-zero",
    "ghz",
)

_DEFAULT_RMAX = {"spectrum": 1, "jx-zero": 1, "ghz": 2}


class ScenarioError(ValueError):
    """Malformed scenario file; the message names the offending key."""


@dataclass(frozen=True)
class Scenario:
    """A fully resolved run description (all defaults filled in)."""

    command: str
    omega1_mhz: float = 10.0
    omega_r_mhz: float = 10.0
    sigma_us: float = 1.5
    delta_t_us: float = 1.1
    delta_T_us: float = 1.0
    e_mhz: float = 100.0
    tau_r_us: float = 100.0
    n_atoms: int | None = None
    r_max: int = 1
    phase_between_rad: float = 0.0
    sigma_values: tuple = (0.5, 1.0, 1.5, 2.5)
    e_values: tuple = (50.0, 100.0, 400.0)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def to_params(self) -> StirapParams:
        return StirapParams(
            omega_1_mhz=self.omega1_mhz,
            omega_r_mhz=self.omega_r_mhz,
            sigma_us=self.sigma_us,
            delta_t_us=self.delta_t_us,
            delta_T_us=self.delta_T_us,
            interaction_mhz=self.e_mhz,
            tau_r_us=self.tau_r_us,
            phase_between_rad=self.phase_between_rad,
            r_max=self.r_max,
            integrator=self.integrator,
        )

    def echo(self) -> dict:
        """The key/value form that re-parses to this scenario."""
        out = {
            "command": self.command,
            "omega1": self.omega1_mhz,
            "omega_r": self.omega_r_mhz,
            "sigma": self.sigma_us,
            "delta_t": self.delta_t_us,
            "delta_T": self.delta_T_us,
            "e": self.e_mhz,
            "tau_r": "inf" if math.isinf(self.tau_r_us) else self.tau_r_us,
            "r_max": self.r_max,
            "phase_between": self.phase_between_rad,
            "sigma_values": list(self.sigma_values),
            "e_values": list(self.e_values),
            "integrator": {
                "method": self.integrator.method,
                "rtol": self.integrator.rtol,
                "atol": self.integrator.atol,
                "max_step": self.integrator.max_step,
                "sample_interval": self.integrator.sample_interval,
            },
        }
        if self.n_atoms is not None:
            out["n"] = self.n_atoms
        return out


def _line_of(text: str, key: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        if f'"{key}"' in line:
            return i
    return 1


def _as_number(raw, key: str, text: str, allow_inf: bool = False) -> float:
    if allow_inf and raw == "inf":
        return math.inf
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ScenarioError(
            f"key '{key}' (line {_line_of(text, key)}): expected a number, got {raw!r}"
        )
    return float(raw)


def _as_int(raw, key: str, text: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ScenarioError(
            f"key '{key}' (line {_line_of(text, key)}): expected an integer, got {raw!r}"
        )
    return raw


def _positive(value: float, key: str, text: str, strict: bool = True) -> float:
    if (strict and value <= 0) or (not strict and value < 0):
        bound = ">" if strict else ">="
        raise ScenarioError(
            f"key '{key}' (line {_line_of(text, key)}): must be {bound} 0, got {value}"
        )
    return value


_FLOAT_KEYS = {
    "omega1": ("omega1_mhz", False),
    "omega_r": ("omega_r_mhz", False),
    "sigma": ("sigma_us", True),
    "delta_t": ("delta_t_us", True),
    "delta_T": ("delta_T_us", False),
    "e": ("e_mhz", False),
    "phase_between": (None, None),  # unconstrained sign
}

_INTEGRATOR_KEYS = ("method", "rtol", "atol", "max_step", "sample_interval")


def _parse_integrator(raw: dict, text: str) -> IntegratorConfig:
    if not isinstance(raw, dict):
        raise ScenarioError(
            f"key 'integrator' (line {_line_of(text, 'integrator')}): expected an object"
        )
    kw = {}
    for key, val in raw.items():
        if key not in _INTEGRATOR_KEYS:
            raise ScenarioError(
                f"unknown key 'integrator.{key}' (line {_line_of(text, key)})"
            )
        if key == "method":
            if val not in ("dopri45", "rk4"):
                raise ScenarioError(
                    f"key 'integrator.method' (line {_line_of(text, key)}): "
                    f"expected 'dopri45' or 'rk4', got {val!r}"
                )
            kw[key] = val
        elif val is None and key in ("max_step", "sample_interval"):
            kw[key] = None
        else:
            kw[key] = _positive(_as_number(val, key, text), key, text)
    try:
        return IntegratorConfig(**kw)
    except ValueError as exc:
        raise ScenarioError(f"integrator: {exc}") from exc


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario JSON document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON (line {exc.lineno}): {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    if "command" not in data:
        raise ScenarioError("missing required key 'command'")
    command = data["command"]
    if command not in COMMANDS:
        raise ScenarioError(
            f"key 'command' (line {_line_of(text, 'command')}): unknown command "
            f"{command!r}; expected one of {', '.join(COMMANDS)}"
        )

    kw: dict = {"command": command}
    for key, raw in data.items():
        if key == "command":
            continue
        elif key in ("omega1", "omega_r", "e"):
            kw[_FLOAT_KEYS[key][0]] = _positive(_as_number(raw, key, text), key, text, strict=False)
        elif key in ("sigma", "delta_t"):
            kw[_FLOAT_KEYS[key][0]] = _positive(_as_number(raw, key, text), key, text)
        elif key == "delta_T":
            kw["delta_T_us"] = _positive(_as_number(raw, key, text), key, text, strict=False)
        elif key == "tau_r":
            kw["tau_r_us"] = _positive(_as_number(raw, key, text, allow_inf=True), key, text)
        elif key == "phase_between":
            kw["phase_between_rad"] = _as_number(raw, key, text)
        elif key == "n":
            kw["n_atoms"] = _positive(_as_int(raw, key, text), key, text)
        elif key == "r_max":
            val = _as_int(raw, key, text)
            if val not in (1, 2):
                raise ScenarioError(
                    f"key 'r_max' (line {_line_of(text, key)}): must be 1 or 2, got {val}"
                )
            kw["r_max"] = val
        elif key in ("sigma_values", "e_values"):
            if not isinstance(raw, list) or not raw:
                raise ScenarioError(
                    f"key '{key}' (line {_line_of(text, key)}): expected a non-empty list"
                )
            strict = key == "sigma_values"
            kw[key] = tuple(
                _positive(_as_number(v, key, text), key, text, strict=strict) for v in raw
            )
        elif key == "integrator":
            kw["integrator"] = _parse_integrator(raw, text)
        else:
            raise ScenarioError(f"unknown key '{key}' (line {_line_of(text, key)})")

    if "r_max" not in kw and command in _DEFAULT_RMAX:
        kw["r_max"] = _DEFAULT_RMAX[command]
    if "n_atoms" not in kw:
        if command == "spectrum":
            kw["n_atoms"] = 6
        elif command in ("jx-zero", "ghz"):
            raise ScenarioError(f"missing required key 'n' for command '{command}'")
    return Scenario(**kw)


# ---------------------------------------------------------------------------
# output writers


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", newline="")


def _write_trajectory(path: Path, traj: Trajectory) -> None:
    header = ["t_us"] + [lab.text for lab in traj.basis] + ["norm"]
    pops = traj.populations()
    norms = traj.norms()
    rows = (
        [traj.times[k], *pops[k], norms[k]] for k in range(len(traj.times))
    )
    _write_csv(path, header, rows)


def _write_report(path: Path, scenario: Scenario, results: dict) -> None:
    doc = {"command": scenario.command, "parameters": scenario.echo(), "results": results}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", newline="")


def run_scenario(scenario: Scenario, out_dir: str | Path = ".") -> list[Path]:
    """Execute one scenario and write its output files; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = scenario.to_params()
    written: list[Path] = []

    if scenario.command == "two-atom-entangle":
        res = entangle_two_atoms(params)
        tpath = out / "trajectory.csv"
        _write_trajectory(tpath, res.trajectory)
        written.append(tpath)
        rpath = out / "report.json"
        final = res.final_state
        _write_report(
            rpath,
            scenario,
            {
                "fidelity": res.fidelity,
                "final_norm": final.norm,
                "final_populations": {
                    lab.text: float(p) for lab, p in zip(final.basis, final.populations())
                },
            },
        )
        written.append(rpath)

    elif scenario.command == "fidelity-scan":
        res = fidelity_scan(scenario.sigma_values, scenario.e_values, params)
        rows = []
        for i, s in enumerate(res.sigma_values_us):
            for j, e in enumerate(res.e_values_mhz):
                rows.append([s, e, res.fidelities[i, j]])
        spath = out / "scan.csv"
        _write_csv(spath, ["sigma_us", "E_MHz", "fidelity"], rows)
        written.append(spath)

    elif scenario.command == "spectrum":
        model = CollectiveModel(
            scenario.n_atoms,
            params.single_stirap(),
            scenario.r_max,
            params.interaction,
            0.0,
        )
        scan = instantaneous_spectrum(model, params.integrator)
        k = scan.track_count
        header = ["t_us"] + [f"ev{i + 1}" for i in range(k)]
        rows = ([scan.times[i], *scan.eigenvalues[i]] for i in range(len(scan.times)))
        spath = out / "spectrum.csv"
        _write_csv(spath, header, rows)
        written.append(spath)

    elif scenario.command == "phase-gate":
        rep = phase_gate(params)
        rpath = out / "report.json"
        _write_report(
            rpath,
            scenario,
            {
                "phases_rad": rep.phases,
                "return_fidelities": rep.return_fidelities,
                "delta_phi_rad": rep.delta_phi,
                "gamma1_quadrature_rad": rep.gamma1_quadrature,
                "gamma2_quadrature_rad": rep.gamma2_quadrature,
                "delta_phi_quadrature_rad": rep.delta_phi_quadrature,
            },
        )
        written.append(rpath)

    elif scenario.command == "jx-zero":
        res = prepare_jx_zero(scenario.n_atoms, params)
        tpath = out / "trajectory.csv"
        _write_trajectory(tpath, res.trajectory)
        written.append(tpath)
        rpath = out / "report.json"
        _write_report(
            rpath,
            scenario,
            {
                "fidelity": res.fidelity,
                "rydberg_population": res.rydberg_population,
                "final_norm": res.final_state.norm,
            },
        )
        written.append(rpath)

    elif scenario.command == "ghz":
        res = ghz_protocol(scenario.n_atoms, params)
        rpath = out / "report.json"
        _write_report(
            rpath,
            scenario,
            {
                "ghz_population": res.ghz_population,
                "branch_populations": list(res.branch_populations),
                "sector_return_abs": [abs(r) for r in res.sector_returns],
                "sector_return_phase_rad": [float(np.angle(r)) for r in res.sector_returns],
                "register_norm": res.register_state.norm,
            },
        )
        written.append(rpath)

    else:  # pragma: no cover - parse_scenario guards this
        raise ScenarioError(f"unknown command {scenario.command!r}")

    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rydstirap",
        description="Run a blockaded-STIRAP simulation scenario from a JSON file.",
    )
    parser.add_argument("--scenario", required=True, help="path to the scenario JSON file")
    parser.add_argument("--out", default=".", help="output directory (default: current)")
    args = parser.parse_args(argv)
    try:
        text = Path(args.scenario).read_text()
        scenario = parse_scenario(text)
        written = run_scenario(scenario, args.out)
    except Exception as exc:
        print(f"rydstirap: error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
