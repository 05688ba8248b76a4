"""Schrodinger propagation over a drive schedule, spectrum scans, and
dark-state phase extraction.

The default integrator is an adaptive embedded 4/5 Runge-Kutta pair
(rtol 1e-9, atol 1e-11); a classical fixed-step RK4 is available as the
independent cross-check route (halve the step, compare).  Sample times are
integration step boundaries, so sampled states are exact integrator output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _stepper
from .core import BasisMismatchError, Operator, StateVector, hermitian_eigensolve

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "SpectrumScan",
    "propagate",
    "instantaneous_spectrum",
    "dark_phase",
    "PropagationError",
    "AdiabaticityLostError",
]


class PropagationError(RuntimeError):
    """Integration failed (step underflow or non-finite amplitudes)."""


class AdiabaticityLostError(RuntimeError):
    """The propagated state left the tracked dark state."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration controls.

    method
        "dopri45" (adaptive embedded 4/5 pair, default) or "rk4"
        (classical fixed step; the step is ``max_step``).
    max_step
        Upper step bound in us.  None defers to sigma_min/50 of the shortest
        pulse in the schedule; explicit values are clamped to that bound too.
    sample_interval
        Spacing of recorded samples in us (None: span/400).  The final sample
        always falls exactly on the end of the propagation window.
    """

    method: str = "dopri45"
    rtol: float = 1e-9
    atol: float = 1e-11
    max_step: float | None = None
    sample_interval: float | None = None

    def __post_init__(self):
        if self.method not in ("dopri45", "rk4"):
            raise ValueError(f"unknown integrator method {self.method!r}")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_step is not None and self.max_step <= 0:
            raise ValueError("max_step must be > 0")
        if self.sample_interval is not None and self.sample_interval <= 0:
            raise ValueError("sample_interval must be > 0")


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled propagation result.

    ``amplitudes[k]`` is the state at ``times[k]``; the first sample is the
    initial state and the last lies exactly at the end of the window.
    ``dark_phases`` is the unwrapped overlap phase arg<D(t)|psi(t)> when a
    dark-state function was supplied to ``propagate``, else None.
    """

    basis: tuple
    times: np.ndarray
    amplitudes: np.ndarray
    accepted_steps: int
    dark_phases: np.ndarray | None = None

    def __post_init__(self):
        self.times.setflags(write=False)
        self.amplitudes.setflags(write=False)
        if self.dark_phases is not None:
            self.dark_phases.setflags(write=False)

    def state_at(self, k: int) -> StateVector:
        return StateVector(self.basis, self.amplitudes[k])

    @property
    def final_state(self) -> StateVector:
        return self.state_at(len(self.times) - 1)

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.amplitudes, axis=1)

    def population_series(self, label_text: str) -> np.ndarray:
        for i, lab in enumerate(self.basis):
            if lab.text == label_text:
                return np.abs(self.amplitudes[:, i]) ** 2
        raise KeyError(label_text)

    def rydberg_series(self) -> np.ndarray:
        sel = np.array([lab.n_rydberg >= 1 for lab in self.basis])
        return np.sum(np.abs(self.amplitudes[:, sel]) ** 2, axis=1)


@dataclass(frozen=True)
class SpectrumScan:
    """Sorted instantaneous eigenvalues of H(t)/hbar on a time grid."""

    times: np.ndarray
    eigenvalues: np.ndarray  # (n_times, dim), each row ascending

    def __post_init__(self):
        self.times.setflags(write=False)
        self.eigenvalues.setflags(write=False)

    @property
    def track_count(self) -> int:
        return self.eigenvalues.shape[1]


def _sample_times(t0: float, t1: float, interval: float | None) -> np.ndarray:
    if t1 <= t0:
        raise ValueError("propagation window is empty")
    if interval is None:
        interval = (t1 - t0) / 400.0
    n = int(math.floor((t1 - t0) / interval + 1e-9))
    ts = t0 + interval * np.arange(1, n + 1)
    ts = ts[ts < t1 - 1e-12 * max(1.0, abs(t1))]
    return np.append(ts, t1)


def _effective_hmax(model, config: IntegratorConfig, span: float) -> float:
    bound = span
    schedule = getattr(model, "schedule", None)
    if schedule is not None and (schedule.pulses_1 or schedule.pulses_r):
        bound = schedule.min_sigma() / 50.0
    if config.max_step is not None:
        bound = min(bound, config.max_step)
    return bound


def propagate(
    model,
    psi0: StateVector,
    config: IntegratorConfig | None = None,
    t_span: tuple[float, float] | None = None,
    dark_state_fn: Callable[[float], StateVector] | None = None,
) -> Trajectory:
    """Solve i dpsi/dt = H(t) psi over the schedule span (or ``t_span``).

    The model either exposes drive templates (library models; compiled fast
    path) or just a dense ``hamiltonian(t)`` (generic path).  The Hamiltonian
    is evaluated at the integrator's internal stage times; nothing is cached
    on a time grid.
    """
    config = config or IntegratorConfig()
    if tuple(psi0.basis) != tuple(model.basis()):
        raise BasisMismatchError("initial state basis does not match the model")
    t0, t1 = t_span if t_span is not None else model.schedule.span
    samples = _sample_times(t0, t1, config.sample_interval)
    hmax = _effective_hmax(model, config, t1 - t0)
    fixed = hmax if config.method == "rk4" else 0.0

    if hasattr(model, "coupling_templates"):
        A, B, diag = model.coupling_templates(True)
        sched = model.schedule
        p1 = sched.pulses_1
        pr = sched.pulses_r
        ys, status, t_fail, n_steps = _stepper.propagate_kernel(
            np.asarray(psi0.amplitudes, dtype=np.complex128),
            float(t0),
            np.asarray(samples, dtype=float),
            float(config.rtol),
            float(config.atol),
            float(hmax),
            float(fixed),
            np.asarray(A, dtype=np.complex128),
            np.asarray(B, dtype=np.complex128),
            np.asarray(B, dtype=np.complex128).conj().T.copy(),
            np.asarray(diag, dtype=np.complex128),
            np.array([p.t_start for p in p1], dtype=float),
            np.array([p.sigma for p in p1], dtype=float),
            np.array([p.peak for p in p1], dtype=float),
            np.array([p.t_start for p in pr], dtype=float),
            np.array([p.sigma for p in pr], dtype=float),
            np.array([p.peak for p in pr], dtype=float),
            np.array(sched.phase.times, dtype=float),
            np.array(sched.phase.phases, dtype=float),
        )
    else:
        def h_of_t(t):
            h = model.hamiltonian(t)
            return h.matrix if isinstance(h, Operator) else np.asarray(h)

        ys, status, t_fail, n_steps = _stepper.propagate_generic(
            h_of_t, psi0.amplitudes, float(t0), samples,
            float(config.rtol), float(config.atol), float(hmax), float(fixed),
        )

    if status == _stepper.STATUS_UNDERFLOW:
        raise PropagationError(f"step size underflow at t = {t_fail:.6g} us")
    if status == _stepper.STATUS_NAN:
        raise PropagationError(f"non-finite amplitude at t = {t_fail:.6g} us")

    times = np.concatenate(([t0], samples))
    amps = np.vstack([psi0.amplitudes[None, :], ys])
    phases = None
    if dark_state_fn is not None:
        phases = _unwrapped_phases(tuple(psi0.basis), times, amps, dark_state_fn)
    return Trajectory(tuple(psi0.basis), times, amps, int(n_steps), phases)


def _unwrapped_phases(basis, times, amps, dark_state_fn) -> np.ndarray:
    phases = np.empty(len(times))
    prev = None
    total = 0.0
    for k, t in enumerate(times):
        d = dark_state_fn(float(t))
        if tuple(d.basis) != basis:
            raise BasisMismatchError("dark state basis does not match trajectory")
        o = np.vdot(d.amplitudes, amps[k])
        if np.abs(o) ** 2 <= 0.5:
            raise AdiabaticityLostError(
                f"adiabaticity lost: dark-state overlap {np.abs(o)**2:.3f} <= 0.5 "
                f"at t = {t:.6g} us"
            )
        a = float(np.angle(o))
        if prev is None:
            total = a
        else:
            delta = float(np.angle(np.exp(1j * (a - prev))))
            if abs(delta) >= np.pi / 4:
                raise AdiabaticityLostError(
                    f"phase increment {delta:.3f} rad at t = {t:.6g} us exceeds pi/4; "
                    "reduce sample_interval"
                )
            total += delta
        prev = a
        phases[k] = total
    return phases


def dark_phase(trajectory: Trajectory, dark_state_fn: Callable[[float], StateVector]) -> float:
    """Accumulated unwrapped phase of <D(t)|psi(t)> over the trajectory.

    Requires the squared overlap with the dark state to stay above 0.5 and
    successive phase increments below pi/4 (sample finer otherwise).
    """
    phases = _unwrapped_phases(
        trajectory.basis, trajectory.times, trajectory.amplitudes, dark_state_fn
    )
    return float(phases[-1] - phases[0])


def instantaneous_spectrum(
    model,
    config: IntegratorConfig | None = None,
    times: Sequence[float] | None = None,
) -> SpectrumScan:
    """Eigenvalues of the Hermitian part of H(t)/hbar over the schedule.

    Decay is excluded so the diagonalisation stays Hermitian; eigenvalues are
    ascending within each sample.
    """
    config = config or IntegratorConfig()
    if times is None:
        t0, t1 = model.schedule.span
        times = np.concatenate(([t0], _sample_times(t0, t1, config.sample_interval)))
    times = np.asarray(times, dtype=float)
    rows = []
    for t in times:
        h = model.hamiltonian(float(t), include_decay=False)
        w, _ = hermitian_eigensolve(h)
        rows.append(w)
    return SpectrumScan(times, np.vstack(rows))
