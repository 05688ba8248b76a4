"""sin^2 pulse envelopes, STIRAP drive schedules and phase profiles.

A schedule bundles the two time-dependent Rabi frequencies Omega_1(t) (lower
transition) and Omega_r(t) (upper transition) together with the relative laser
phase phi_r(t) carried by the upper drive.  Rabi frequencies are angular
(rad/us); the MHz-to-angular conversion happens at the user-facing layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PulseEnvelope",
    "PhaseProfile",
    "DriveSchedule",
    "mixing_angle",
    "stirap_schedule",
    "double_stirap",
    "ScheduleError",
]


class ScheduleError(ValueError):
    """Invalid pulse or schedule construction."""


@dataclass(frozen=True)
class PulseEnvelope:
    """One sin^2 pulse: peak * sin^2(pi (t - t_start) / (2 sigma)).

    ``sigma`` is the FWHM; the envelope is exactly zero outside
    [t_start, t_start + 2 sigma].
    """

    peak: float        # rad/us
    t_start: float     # us
    sigma: float       # us (FWHM)

    def __post_init__(self):
        if self.peak < 0:
            raise ScheduleError("pulse peak must be >= 0")
        if self.sigma <= 0:
            raise ScheduleError("pulse sigma must be > 0")

    @property
    def t_end(self) -> float:
        return self.t_start + 2.0 * self.sigma

    def value(self, t):
        """Envelope at time t (scalar or array)."""
        t = np.asarray(t, dtype=float)
        inside = (t > self.t_start) & (t < self.t_end)
        s = np.sin(np.pi * (t - self.t_start) / (2.0 * self.sigma))
        out = np.where(inside, self.peak * s * s, 0.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class PhaseProfile:
    """Piecewise-linear phi_r(t): breakpoints ``times`` with values ``phases``.

    Constant segments are zero-slope pieces; the profile extends flat before
    the first and after the last breakpoint, so it is defined (and continuous)
    on any span.
    """

    times: tuple = (0.0,)
    phases: tuple = (0.0,)

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        phases = tuple(float(p) for p in self.phases)
        if len(times) != len(phases) or not times:
            raise ScheduleError("phase profile needs equally many times and values")
        if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
            raise ScheduleError("phase breakpoints must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def constant(cls, phase: float = 0.0) -> "PhaseProfile":
        return cls((0.0,), (phase,))

    def value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.times, self.phases)
        return out if out.ndim else float(out)

    def total_change(self) -> float:
        return self.phases[-1] - self.phases[0]


def mixing_angle(omega_1: float, omega_r: float) -> float:
    """theta = atan2(Omega_1, Omega_r) in [0, pi/2]; tan(theta) = Omega_1/Omega_r.

    Both arguments zero is an error for the pure call; along a schedule the
    angle is instead extended from the nearest pulse edge (see
    ``DriveSchedule.mixing_angle_at``).
    """
    if omega_1 < 0 or omega_r < 0:
        raise ScheduleError("Rabi frequencies must be >= 0")
    if omega_1 == 0.0 and omega_r == 0.0:
        raise ScheduleError("mixing angle undefined: both Rabi frequencies are zero")
    return float(np.arctan2(omega_1, omega_r))


def _merge_intervals(ivals):
    ivals = sorted(ivals)
    merged = []
    for a, b in ivals:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


@dataclass(frozen=True)
class DriveSchedule:
    """Pulse lists for both drives plus the phase profile of the upper drive."""

    pulses_1: tuple       # PulseEnvelope for Omega_1
    pulses_r: tuple       # PulseEnvelope for Omega_r
    phase: PhaseProfile = field(default_factory=PhaseProfile.constant)
    t0: float = 0.0
    t_end: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "pulses_1", tuple(self.pulses_1))
        object.__setattr__(self, "pulses_r", tuple(self.pulses_r))
        if self.t_end <= self.t0:
            end = max(
                [p.t_end for p in self.pulses_1 + self.pulses_r], default=self.t0
            )
            object.__setattr__(self, "t_end", end)

    @property
    def span(self) -> tuple[float, float]:
        return (self.t0, self.t_end)

    def min_sigma(self) -> float:
        return min(p.sigma for p in self.pulses_1 + self.pulses_r)

    def omega_1(self, t):
        return sum(p.value(t) for p in self.pulses_1) if self.pulses_1 else 0.0 * np.asarray(t)

    def omega_r(self, t):
        return sum(p.value(t) for p in self.pulses_r) if self.pulses_r else 0.0 * np.asarray(t)

    def phi_r(self, t):
        return self.phase.value(t)

    def support(self) -> list[tuple[float, float]]:
        """Merged intervals on which at least one envelope is nonzero."""
        return _merge_intervals(
            [(p.t_start, p.t_end) for p in self.pulses_1 + self.pulses_r]
        )

    def mixing_angle_at(self, t: float) -> float:
        """theta(t), extended by the nearest pulse-edge value where both drives vanish.

        The constant extension keeps the dark state defined across gaps
        between pulse sequences, which the geometric-phase bookkeeping needs.
        """
        o1 = float(self.omega_1(t))
        orr = float(self.omega_r(t))
        if o1 > 0.0 or orr > 0.0:
            return float(np.arctan2(o1, orr))
        support = self.support()
        if not support:
            raise ScheduleError("schedule has no pulses")
        # nearest support endpoint, nudged just inside its interval
        best_t, best_d = None, np.inf
        for a, b in support:
            eps = 1e-9 * (b - a)
            for edge, inside in ((a, a + eps), (b, b - eps)):
                d = abs(t - edge)
                if d < best_d:
                    best_d, best_t = d, inside
        o1 = float(self.omega_1(best_t))
        orr = float(self.omega_r(best_t))
        if o1 == 0.0 and orr == 0.0:
            return 0.0
        return float(np.arctan2(o1, orr))


def stirap_schedule(
    peak_1: float,
    peak_r: float,
    sigma: float,
    delta_t: float,
    t0: float = 0.0,
    reversed_order: bool = False,
    phase: PhaseProfile | None = None,
) -> DriveSchedule:
    """One STIRAP process: two sin^2 pulses delayed by delta_t.

    Counterintuitive (default) order puts the Omega_r pulse first, so the
    mixing angle sweeps 0 -> pi/2; ``reversed_order`` swaps the roles and the
    sweep.  Requires 0 < delta_t < 2 sigma so the pulses overlap.
    """
    if sigma <= 0:
        raise ScheduleError("sigma must be > 0")
    if not (0.0 < delta_t < 2.0 * sigma):
        raise ScheduleError(
            f"non-adiabatic schedule: pulse delay {delta_t} does not overlap "
            f"pulses of base width {2 * sigma}"
        )
    first, second = t0, t0 + delta_t
    if reversed_order:
        p1 = PulseEnvelope(peak_1, first, sigma)
        pr = PulseEnvelope(peak_r, second, sigma)
    else:
        pr = PulseEnvelope(peak_r, first, sigma)
        p1 = PulseEnvelope(peak_1, second, sigma)
    return DriveSchedule(
        (p1,), (pr,), phase or PhaseProfile.constant(), t0, t0 + delta_t + 2 * sigma
    )


def double_stirap(
    peak_1: float,
    peak_r: float,
    sigma: float,
    delta_t: float,
    delta_T: float,
    phase_between: float = 0.0,
    t0: float = 0.0,
) -> DriveSchedule:
    """Two STIRAP processes separated by delta_T, the second in reversed order.

    phi_r is zero during the first process, ramps linearly by
    ``phase_between`` across the gap, and is held constant during the second
    process.  A nonzero phase step with delta_T = 0 would make phi_r
    discontinuous and is rejected.
    """
    if delta_T < 0:
        raise ScheduleError("delta_T must be >= 0")
    if delta_T == 0.0 and phase_between != 0.0:
        raise ScheduleError(
            "phase_between requires delta_T > 0 (phi_r must stay continuous)"
        )
    proc1 = stirap_schedule(peak_1, peak_r, sigma, delta_t, t0=t0)
    t_mid = proc1.t_end
    t2 = t_mid + delta_T
    proc2 = stirap_schedule(peak_1, peak_r, sigma, delta_t, t0=t2, reversed_order=True)
    if phase_between == 0.0:
        phase = PhaseProfile.constant(0.0)
    else:
        phase = PhaseProfile((t_mid, t2), (0.0, phase_between))
    return DriveSchedule(
        proc1.pulses_1 + proc2.pulses_1,
        proc1.pulses_r + proc2.pulses_r,
        phase,
        t0,
        proc2.t_end,
    )
