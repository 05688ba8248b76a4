"""Experiment drivers: two-atom entanglement, fidelity scans, geometric-phase
gates, collective Jx = 0 preparation, and the GHZ sequence.

All user-facing frequencies here are ordinary frequencies in MHz and all
times in microseconds; the 2 pi conversion to angular units happens once, at
this boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .core import StateVector, TWO_ATOM_BASIS, fidelity, register_basis
from .models import (
    CollectiveModel,
    SingleAtomModel,
    TwoAtomModel,
    final_dark_state,
    single_atom_dark_state,
    two_atom_dark_state,
)
from .propagator import IntegratorConfig, Trajectory, propagate
from .pulses import DriveSchedule, PhaseProfile, double_stirap, stirap_schedule

__all__ = [
    "StirapParams",
    "TwoAtomResult",
    "ScanResult",
    "GateReport",
    "JxResult",
    "GhzResult",
    "entangle_two_atoms",
    "fidelity_scan",
    "gamma1",
    "gamma2",
    "phase_gate",
    "prepare_jx_zero",
    "ghz_protocol",
    "ghz_phase_eta",
    "ghz_target",
]

TWO_PI = 2.0 * math.pi

#: Pulse-delay-to-width ratio of the reference two-atom run (1.1 us / 1.5 us).
DEFAULT_DELAY_RATIO = 1.1 / 1.5


@dataclass(frozen=True)
class StirapParams:
    """Physical and numerical inputs shared by the protocol drivers.

    Frequencies are ordinary (MHz): peak Rabi frequencies ``omega_1_mhz`` and
    ``omega_r_mhz``, Rydberg pair shift ``interaction_mhz`` = E/(2 pi hbar).
    ``tau_r_us`` is the Rydberg lifetime (math.inf disables decay).
    ``delta_t_us`` = None keeps the delay-to-width ratio of the reference run.
    """

    omega_1_mhz: float = 10.0
    omega_r_mhz: float = 10.0
    sigma_us: float = 1.5
    delta_t_us: float | None = None
    delta_T_us: float = 1.0
    interaction_mhz: float = 100.0
    tau_r_us: float = 100.0
    phase_between_rad: float = 0.0
    r_max: int = 1
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if min(self.omega_1_mhz, self.omega_r_mhz, self.interaction_mhz) < 0:
            raise ValueError("frequencies must be >= 0")
        if self.sigma_us <= 0:
            raise ValueError("sigma_us must be > 0")
        if self.delta_T_us < 0:
            raise ValueError("delta_T_us must be >= 0")
        if not (self.tau_r_us > 0):
            raise ValueError("tau_r_us must be > 0 (use math.inf for no decay)")

    # angular-frequency views (rad/us)
    @property
    def omega_1(self) -> float:
        return TWO_PI * self.omega_1_mhz

    @property
    def omega_r(self) -> float:
        return TWO_PI * self.omega_r_mhz

    @property
    def interaction(self) -> float:
        return TWO_PI * self.interaction_mhz

    @property
    def decay_rate(self) -> float:
        return 0.0 if math.isinf(self.tau_r_us) else 1.0 / self.tau_r_us

    @property
    def delta_t(self) -> float:
        if self.delta_t_us is not None:
            return self.delta_t_us
        return self.sigma_us * DEFAULT_DELAY_RATIO

    def single_stirap(self) -> DriveSchedule:
        return stirap_schedule(self.omega_1, self.omega_r, self.sigma_us, self.delta_t)

    def double_stirap(self) -> DriveSchedule:
        return double_stirap(
            self.omega_1,
            self.omega_r,
            self.sigma_us,
            self.delta_t,
            self.delta_T_us,
            self.phase_between_rad,
        )


@dataclass(frozen=True)
class TwoAtomResult:
    final_state: StateVector
    fidelity: float
    trajectory: Trajectory
    target: StateVector


def entangle_two_atoms(params: StirapParams) -> TwoAtomResult:
    """One counterintuitive STIRAP on two blockaded atoms starting from |11>.

    Returns the final state and its fidelity against the maximally entangled
    endpoint (-|11> + |22>)/sqrt2 of the two-atom dark state.
    """
    schedule = params.single_stirap()
    model = TwoAtomModel(schedule, params.interaction, params.decay_rate)
    psi0 = StateVector(TWO_ATOM_BASIS, np.eye(6, dtype=np.complex128)[0])
    traj = propagate(model, psi0, params.integrator)
    target = two_atom_dark_state(np.pi / 2, float(schedule.phi_r(schedule.t_end)))
    return TwoAtomResult(traj.final_state, fidelity(traj.final_state, target), traj, target)


@dataclass(frozen=True)
class ScanResult:
    """Fidelity over a (sigma, E) grid; failed points hold NaN."""

    sigma_values_us: tuple
    e_values_mhz: tuple
    fidelities: np.ndarray  # shape (len(sigma), len(E))
    params: StirapParams
    failures: tuple = ()

    def __post_init__(self):
        self.fidelities.setflags(write=False)


def fidelity_scan(
    sigma_values_us: Sequence[float],
    e_values_mhz: Sequence[float],
    params: StirapParams,
) -> ScanResult:
    """entangle_two_atoms over a grid, delay scaled proportionally to sigma.

    The delay-to-width ratio delta_t/sigma of ``params`` is held fixed across
    the sigma axis so the pulse-overlap geometry is preserved.
    """
    sigmas = tuple(float(s) for s in sigma_values_us)
    es = tuple(float(e) for e in e_values_mhz)
    if not sigmas or not es:
        raise ValueError("scan axes must be non-empty")
    ratio = params.delta_t / params.sigma_us
    out = np.full((len(sigmas), len(es)), np.nan)
    failures = []
    for i, s in enumerate(sigmas):
        for j, e in enumerate(es):
            try:
                point = replace(
                    params, sigma_us=s, delta_t_us=s * ratio, interaction_mhz=e
                )
                out[i, j] = entangle_two_atoms(point).fidelity
            except Exception as exc:  # record and continue
                failures.append(f"sigma={s} E={e}: {exc}")
    return ScanResult(sigmas, es, out, params, tuple(failures))


# ---------------------------------------------------------------------------
# geometric phases


def _phase_line_integral(
    weight: Callable[[np.ndarray], np.ndarray],
    theta_fn: Callable[[float], float],
    phase_profile: PhaseProfile,
    t_span: tuple[float, float],
    tol: float = 1e-6,
) -> float:
    """- integral of weight(theta) d phi_r, trapezoidal with grid doubling."""
    t0, t1 = t_span
    n = 256
    prev = None
    for _ in range(12):
        ts = np.linspace(t0, t1, n + 1)
        w = weight(np.array([theta_fn(float(t)) for t in ts]))
        phi = np.asarray(phase_profile.value(ts), dtype=float)
        val = -float(np.sum(0.5 * (w[1:] + w[:-1]) * np.diff(phi)))
        if prev is not None and abs(val - prev) < tol:
            return val
        prev = val
        n *= 2
    return prev


def gamma1(
    theta_fn: Callable[[float], float],
    phase_profile: PhaseProfile,
    t_span: tuple[float, float],
    tol: float = 1e-6,
) -> float:
    """Single-atom geometric phase, - integral sin^2(theta) d phi_r."""
    return _phase_line_integral(lambda th: np.sin(th) ** 2, theta_fn, phase_profile, t_span, tol)


def gamma2(
    theta_fn: Callable[[float], float],
    phase_profile: PhaseProfile,
    t_span: tuple[float, float],
    tol: float = 1e-6,
) -> float:
    """Two-atom dark-state phase weight, vanishing at theta = 0 and pi/2.

    - integral cos^2 sin^2 / (cos^4 + 2 sin^4) d phi_r: acquired only while
    the pulses overlap, not during the gap where theta is pinned at pi/2.
    """

    def w(th):
        c2 = np.cos(th) ** 2
        s2 = np.sin(th) ** 2
        return c2 * s2 / (c2 * c2 + 2.0 * s2 * s2)

    return _phase_line_integral(w, theta_fn, phase_profile, t_span, tol)


@dataclass(frozen=True)
class GateReport:
    """Per-register phases and return fidelities of the double-STIRAP gate.

    ``delta_phi`` = phase(11) - 2 phase(01) + phase(00), with phase(00) = 0 by
    construction (the |0> level is uncoupled).  The quadrature fields carry
    the independent line-integral prediction gamma2 - 2 gamma1.
    """

    phases: dict
    return_fidelities: dict
    delta_phi: float
    gamma1_quadrature: float
    gamma2_quadrature: float
    delta_phi_quadrature: float


def _gate_sampling(params: StirapParams, schedule: DriveSchedule) -> IntegratorConfig:
    span = schedule.t_end - schedule.t0
    si = min(params.sigma_us / 20.0, span / 200.0)
    pb = abs(params.phase_between_rad)
    if pb > 0:
        si = min(si, params.delta_T_us * (np.pi / 8.0) / pb)
    return replace(params.integrator, sample_interval=si)


def phase_gate(params: StirapParams) -> GateReport:
    """Propagate the two-bit register states through the double STIRAP.

    |00> is inert; |01> and |10> are a single driven atom (identical by
    symmetry, propagated once); |11> is the interacting pair.  The propagated
    controlled phase is cross-checked against the geometric-phase quadratures.
    """
    schedule = params.double_stirap()
    cfg = _gate_sampling(params, schedule)
    span = schedule.span

    single = SingleAtomModel(schedule, params.decay_rate)
    psi1 = StateVector(single.basis(), np.eye(3, dtype=np.complex128)[0])
    dark1 = lambda t: single_atom_dark_state(
        schedule.mixing_angle_at(t), float(schedule.phi_r(t))
    )
    traj1 = propagate(single, psi1, cfg, dark_state_fn=dark1)
    phi_single = float(traj1.dark_phases[-1] - traj1.dark_phases[0])
    f_single = fidelity(traj1.final_state, psi1)

    pair = TwoAtomModel(schedule, params.interaction, params.decay_rate)
    psi11 = StateVector(TWO_ATOM_BASIS, np.eye(6, dtype=np.complex128)[0])
    dark2 = lambda t: two_atom_dark_state(
        schedule.mixing_angle_at(t), float(schedule.phi_r(t))
    )
    traj2 = propagate(pair, psi11, cfg, dark_state_fn=dark2)
    phi_pair = float(traj2.dark_phases[-1] - traj2.dark_phases[0])
    f_pair = fidelity(traj2.final_state, psi11)

    g1 = gamma1(schedule.mixing_angle_at, schedule.phase, span)
    g2 = gamma2(schedule.mixing_angle_at, schedule.phase, span)
    return GateReport(
        phases={"00": 0.0, "01": phi_single, "10": phi_single, "11": phi_pair},
        return_fidelities={"00": 1.0, "01": f_single, "10": f_single, "11": f_pair},
        delta_phi=phi_pair - 2.0 * phi_single,
        gamma1_quadrature=g1,
        gamma2_quadrature=g2,
        delta_phi_quadrature=g2 - 2.0 * g1,
    )


@dataclass(frozen=True)
class JxResult:
    final_state: StateVector
    fidelity: float
    rydberg_population: float
    trajectory: Trajectory
    target: StateVector


def prepare_jx_zero(n_atoms: int, params: StirapParams) -> JxResult:
    """One collective STIRAP from |n1 = N> toward the Jx = 0 dark state.

    Even N ends with no Rydberg excitation; odd N ends with exactly one,
    shared symmetrically.
    """
    if n_atoms < 2:
        raise ValueError("collective preparation needs n_atoms >= 2")
    schedule = params.single_stirap()
    model = CollectiveModel(
        n_atoms, schedule, params.r_max, params.interaction, params.decay_rate
    )
    dim = len(model.basis())
    psi0 = StateVector(model.basis(), np.eye(dim, dtype=np.complex128)[0])
    traj = propagate(model, psi0, params.integrator)
    target = final_dark_state(n_atoms, params.r_max)
    final = traj.final_state
    return JxResult(
        final, fidelity(final, target), final.rydberg_population(), traj, target
    )


# ---------------------------------------------------------------------------
# GHZ sequence


def ghz_phase_eta(n1: int) -> float:
    """Phase eta(n1) with e^{i eta} = (e^{i pi/4} + (-1)^{n1} e^{-i pi/4})/sqrt2."""
    z = (np.exp(1j * np.pi / 4) + (-1.0) ** n1 * np.exp(-1j * np.pi / 4)) / np.sqrt(2.0)
    return float(np.angle(z))


def ghz_target(n_atoms: int) -> StateVector:
    """The equal superposition of the two opposite spin-coherent branches."""
    amps = np.array(
        [
            math.sqrt(math.comb(n_atoms, n1)) * 2.0 ** (-n_atoms / 2.0)
            * np.exp(1j * ghz_phase_eta(n1))
            for n1 in range(n_atoms + 1)
        ],
        dtype=np.complex128,
    )
    return StateVector(register_basis(n_atoms), amps)


@dataclass(frozen=True)
class GhzResult:
    register_state: StateVector
    ghz_population: float
    sector_returns: tuple
    branch_populations: tuple
    target: StateVector


def ghz_protocol(n_atoms: int, params: StirapParams) -> GhzResult:
    """Double STIRAP plus a Rydberg phase kick on the spin-coherent state.

    Each atom-number component |n0, n1> evolves independently (the drives
    conserve the number of atoms in the coupled manifold and |0> is inert),
    so the driver propagates one collective model per n1 sector and composes
    the returned amplitudes.  The kick is an instantaneous unitary that
    multiplies every component with at least one Rydberg excitation by
    i = e^{i pi/2}, applied midway between the two pulse sequences.
    """
    if n_atoms < 2:
        raise ValueError("the GHZ sequence needs n_atoms >= 2")
    p = replace(params, phase_between_rad=0.0)
    schedule = p.double_stirap()
    t0, t_end = schedule.span
    t_kick = (p.delta_t + 2.0 * p.sigma_us) + p.delta_T_us / 2.0
    cfg = replace(p.integrator, sample_interval=(t_end - t0) / 32.0)

    returns = [1.0 + 0.0j]  # n1 = 0 sector is fully inert
    for n1 in range(1, n_atoms + 1):
        model = CollectiveModel(n1, schedule, p.r_max, p.interaction, p.decay_rate)
        basis = model.basis()
        dim = len(basis)
        psi0 = StateVector(basis, np.eye(dim, dtype=np.complex128)[0])
        mid = propagate(model, psi0, cfg, t_span=(t0, t_kick)).final_state
        kicked = np.array(mid.amplitudes, dtype=np.complex128)
        for k, lab in enumerate(basis):
            if lab.n_rydberg >= 1:
                kicked[k] *= 1j
        back = propagate(model, StateVector(basis, kicked), cfg, t_span=(t_kick, t_end))
        returns.append(complex(np.vdot(psi0.amplitudes, back.final_state.amplitudes)))

    weights = np.array(
        [math.sqrt(math.comb(n_atoms, n1)) * 2.0 ** (-n_atoms / 2.0) for n1 in range(n_atoms + 1)]
    )
    register = StateVector(register_basis(n_atoms), weights * np.array(returns))
    target = ghz_target(n_atoms)
    pop = fidelity(target, register)
    branches = []
    for sign in (+1.0, -1.0):
        b = StateVector(
            register_basis(n_atoms),
            weights * np.power(sign, np.arange(n_atoms + 1)).astype(np.complex128),
        )
        branches.append(fidelity(b, register))
    return GhzResult(register, pop, tuple(returns), tuple(branches), target)
