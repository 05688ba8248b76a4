import numpy as np
import pytest

from rydstirap.core import BasisLabel, Operator, StateVector
from rydstirap.models import (
    CollectiveModel,
    SingleAtomModel,
    TwoAtomModel,
    jx_eigenvalues,
    single_atom_dark_state,
    two_atom_dark_state,
)
from rydstirap.propagator import (
    AdiabaticityLostError,
    IntegratorConfig,
    PropagationError,
    dark_phase,
    instantaneous_spectrum,
    propagate,
)
from rydstirap.pulses import DriveSchedule, PhaseProfile, PulseEnvelope, stirap_schedule
from rydstirap.protocols import StirapParams, entangle_two_atoms, gamma1, gamma2

OM = 2 * np.pi * 10.0
E100 = 2 * np.pi * 100.0

TWO_LEVEL = (BasisLabel("two-level", "g"), BasisLabel("two-level", "e"))


class _MatrixModel:
    """Generic dense-Hamiltonian model (exercises the non-templated path)."""

    def __init__(self, basis, h_of_t, schedule=None):
        self._basis = tuple(basis)
        self._h = h_of_t
        if schedule is not None:
            self.schedule = schedule

    def basis(self):
        return self._basis

    def hamiltonian(self, t, include_decay=True):
        return Operator(self._basis, self._h(t))


def test_zero_hamiltonian_is_identity_evolution():
    model = _MatrixModel(TWO_LEVEL, lambda t: np.zeros((2, 2), dtype=complex))
    psi0 = StateVector(TWO_LEVEL, np.array([0.6, 0.8], dtype=complex))
    traj = propagate(model, psi0, IntegratorConfig(sample_interval=0.25), t_span=(0.0, 2.0))
    assert np.allclose(traj.amplitudes, psi0.amplitudes, atol=1e-12)
    assert traj.times[0] == 0.0 and traj.times[-1] == 2.0


def test_rabi_flop_full_transfer():
    # constant resonant coupling: excited population sin^2(Omega t / 2)
    om = 25.0
    H = 0.5 * om * np.array([[0, 1], [1, 0]], dtype=complex)
    model = _MatrixModel(TWO_LEVEL, lambda t: H)
    psi0 = StateVector(TWO_LEVEL, np.array([1.0, 0.0], dtype=complex))
    t_pi = np.pi / om
    traj = propagate(model, psi0, IntegratorConfig(sample_interval=t_pi / 8), t_span=(0.0, t_pi))
    pe = traj.population_series("e")
    assert pe[-1] == pytest.approx(1.0, abs=1e-8)
    mid = np.sin(0.5 * om * traj.times) ** 2
    assert np.max(np.abs(pe - mid)) < 1e-8


def test_reference_two_atom_endpoint_regression():
    # frozen by the step-halving oracle (rk4 h = 4e-4 vs 2e-4 agrees to 7e-11)
    res = entangle_two_atoms(StirapParams())
    assert res.fidelity == pytest.approx(0.995886933, abs=2e-6)
    final = res.final_state
    assert final.population_of("11") == pytest.approx(0.498216, abs=2e-5)
    assert final.population_of("22") == pytest.approx(0.497671, abs=2e-5)
    # transient sym|1r> population peaks mid-sequence
    p1r = res.trajectory.population_series("1r_sym")
    k = int(np.argmax(p1r))
    assert p1r[k] == pytest.approx(0.68036, abs=5e-4)
    assert 1.4 < res.trajectory.times[k] < 2.6


def test_oracle_step_halving_and_tolerance_tightening():
    base = entangle_two_atoms(StirapParams()).trajectory.populations()
    tight = entangle_two_atoms(
        StirapParams(integrator=IntegratorConfig(rtol=1e-10, atol=1e-12))
    ).trajectory.populations()
    assert np.max(np.abs(base - tight)) < 1e-7

    rk_a = entangle_two_atoms(
        StirapParams(integrator=IntegratorConfig(method="rk4", max_step=4e-4))
    ).trajectory.populations()
    rk_b = entangle_two_atoms(
        StirapParams(integrator=IntegratorConfig(method="rk4", max_step=2e-4))
    ).trajectory.populations()
    assert np.max(np.abs(rk_a - rk_b)) < 1e-7
    assert np.max(np.abs(rk_a - base)) < 1e-7  # adaptive and fixed-step agree


def test_norm_conserved_without_decay():
    import math

    res = entangle_two_atoms(StirapParams(tau_r_us=math.inf))
    assert np.max(np.abs(res.trajectory.norms() ** 2 - 1.0)) < 1e-8


def test_norm_monotone_with_decay():
    res = entangle_two_atoms(StirapParams())
    n2 = res.trajectory.norms() ** 2
    assert np.all(np.diff(n2) <= 1e-12)
    assert n2[-1] < 1.0


def test_adiabatic_limit_trend():
    import math

    fids = [
        entangle_two_atoms(StirapParams(sigma_us=s, tau_r_us=math.inf)).fidelity
        for s in (1.0, 2.0, 4.0, 8.0)
    ]
    assert np.all(np.diff(fids) > 0)
    assert fids[-1] > 0.9999


class TestSpectrumScan:
    def test_six_atom_tracks_and_edges(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = CollectiveModel(6, sched, r_max=1)
        scan = instantaneous_spectrum(model, IntegratorConfig(sample_interval=0.05))
        assert scan.track_count == 13
        # before the lower pulse starts: exchange-ladder pairs
        i = int(np.searchsorted(scan.times, 0.55))
        orr = float(sched.omega_r(scan.times[i]))
        jc = [0.0]
        for n2 in range(6):
            jc.extend([0.5 * orr * np.sqrt(n2 + 1), -0.5 * orr * np.sqrt(n2 + 1)])
        assert np.max(np.abs(scan.eigenvalues[i] - np.sort(jc))) < 1e-6
        # after the upper pulse ends: two interleaved equidistant ladders
        i = int(np.searchsorted(scan.times, 3.6))
        om1 = float(sched.omega_1(scan.times[i]))
        jx = np.sort(np.concatenate([jx_eigenvalues(6, om1), jx_eigenvalues(5, om1)]))
        assert np.max(np.abs(scan.eigenvalues[i] - jx)) < 1e-6

    def test_all_zero_drive_instant(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = CollectiveModel(4, sched, r_max=1)
        scan = instantaneous_spectrum(model, times=[-1.0])
        assert np.max(np.abs(scan.eigenvalues)) == 0.0

    def test_decay_excluded_from_scan(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = CollectiveModel(3, sched, r_max=1, decay_rate=0.05)
        scan = instantaneous_spectrum(model, times=[1.5, 2.0])
        assert np.all(np.isreal(scan.eigenvalues))


class TestDarkPhase:
    def test_constant_phase_accumulates_nothing(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = SingleAtomModel(sched)
        psi0 = StateVector(model.basis(), np.array([1.0, 0, 0], dtype=complex))
        fn = lambda t: single_atom_dark_state(sched.mixing_angle_at(t), float(sched.phi_r(t)))
        traj = propagate(model, psi0, IntegratorConfig(sample_interval=0.01), dark_state_fn=fn)
        assert abs(dark_phase(traj, fn)) < 1e-3
        assert np.allclose(traj.dark_phases, 0.0, atol=1e-3)

    def test_held_angle_phase_ramp(self):
        # only the lower drive on: theta pinned at pi/2, |r> fully decoupled,
        # so the tracked phase is exactly minus the phase ramp
        pulse = PulseEnvelope(OM, 0.0, 2.0)
        sched = DriveSchedule((pulse,), (), PhaseProfile((1.0, 3.0), (0.0, np.pi)))
        model = SingleAtomModel(sched)
        psi_r = StateVector(model.basis(), np.array([0, 0, 1.0], dtype=complex))
        fn = lambda t: single_atom_dark_state(sched.mixing_angle_at(t), float(sched.phi_r(t)))
        traj = propagate(model, psi_r, IntegratorConfig(sample_interval=0.02), dark_state_fn=fn)
        assert dark_phase(traj, fn) == pytest.approx(-np.pi, abs=1e-3)

    def test_double_stirap_matches_quadratures(self):
        # deep-adiabatic strong-blockade run: propagated phases against the
        # independent line-integral predictions
        import math

        p = StirapParams(
            sigma_us=6.0,
            interaction_mhz=800.0,
            tau_r_us=math.inf,
            delta_T_us=2.0,
            phase_between_rad=0.8,
        )
        sched = p.double_stirap()
        cfg = IntegratorConfig(sample_interval=0.02)

        single = SingleAtomModel(sched)
        psi1 = StateVector(single.basis(), np.array([1.0, 0, 0], dtype=complex))
        fn1 = lambda t: single_atom_dark_state(sched.mixing_angle_at(t), float(sched.phi_r(t)))
        ph1 = dark_phase(propagate(single, psi1, cfg), fn1)
        g1 = gamma1(sched.mixing_angle_at, sched.phase, sched.span)
        assert ph1 == pytest.approx(g1, abs=1e-3)
        assert g1 == pytest.approx(-0.8, abs=1e-9)

        pair = TwoAtomModel(sched, p.interaction)
        psi11 = StateVector(pair.basis(), np.eye(6, dtype=complex)[0])
        fn2 = lambda t: two_atom_dark_state(sched.mixing_angle_at(t), float(sched.phi_r(t)))
        ph2 = dark_phase(propagate(pair, psi11, cfg), fn2)
        g2 = gamma2(sched.mixing_angle_at, sched.phase, sched.span)
        assert g2 == pytest.approx(0.0, abs=1e-9)  # ramp lies in the gap
        assert ph2 == pytest.approx(g2, abs=1e-3)

    def test_overlap_loss_raises(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = SingleAtomModel(sched)
        psi0 = StateVector(model.basis(), np.array([1.0, 0, 0], dtype=complex))
        traj = propagate(model, psi0, IntegratorConfig(sample_interval=0.1))
        orthogonal = lambda t: StateVector(model.basis(), np.array([0, 1.0, 0], dtype=complex))
        with pytest.raises(AdiabaticityLostError, match="overlap"):
            dark_phase(traj, orthogonal)

    def test_coarse_sampling_of_fast_ramp_raises(self):
        pulse = PulseEnvelope(OM, 0.0, 2.0)
        sched = DriveSchedule((pulse,), (), PhaseProfile((1.0, 1.2), (0.0, np.pi)))
        model = SingleAtomModel(sched)
        psi_r = StateVector(model.basis(), np.array([0, 0, 1.0], dtype=complex))
        fn = lambda t: single_atom_dark_state(sched.mixing_angle_at(t), float(sched.phi_r(t)))
        traj = propagate(model, psi_r, IntegratorConfig(sample_interval=0.1))
        with pytest.raises(AdiabaticityLostError, match="pi/4"):
            dark_phase(traj, fn)


class TestErrorPaths:
    def test_nan_hamiltonian_raises(self):
        H = np.array([[np.nan, 0], [0, 0]], dtype=complex)
        model = _MatrixModel(TWO_LEVEL, lambda t: H)
        psi0 = StateVector(TWO_LEVEL, np.array([1.0, 0], dtype=complex))
        with pytest.raises(PropagationError, match="t ="):
            propagate(model, psi0, t_span=(0.0, 1.0))

    def test_basis_mismatch_rejected(self):
        from rydstirap.core import BasisMismatchError, ladder_basis

        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = TwoAtomModel(sched, E100)
        psi_wrong = StateVector(ladder_basis(), np.array([1.0, 0, 0], dtype=complex))
        with pytest.raises(BasisMismatchError):
            propagate(model, psi_wrong)


def test_generic_and_templated_paths_agree():
    # the compiled kernel against the plain-python dense path, same physics
    sched = stirap_schedule(OM, OM, 1.5, 1.1)
    inner = TwoAtomModel(sched, 0.0, 0.01)
    generic = _MatrixModel(inner.basis(), lambda t: inner.hamiltonian(t).matrix, sched)
    psi0 = StateVector(inner.basis(), np.eye(6, dtype=complex)[0])
    cfg = IntegratorConfig(sample_interval=0.5)
    fast = propagate(inner, psi0, cfg)
    slow = propagate(generic, psi0, cfg)
    assert np.max(np.abs(fast.populations() - slow.populations())) < 1e-7


def test_partial_span_composition():
    # propagating [t0, tm] then [tm, t1] matches the single pass
    sched = stirap_schedule(OM, OM, 1.5, 1.1)
    model = TwoAtomModel(sched, E100, 0.01)
    psi0 = StateVector(model.basis(), np.eye(6, dtype=complex)[0])
    cfg = IntegratorConfig(sample_interval=0.5)
    whole = propagate(model, psi0, cfg)
    first = propagate(model, psi0, cfg, t_span=(0.0, 2.0))
    second = propagate(model, first.final_state, cfg, t_span=(2.0, 4.1))
    assert np.max(np.abs(second.final_state.amplitudes - whole.final_state.amplitudes)) < 1e-8
