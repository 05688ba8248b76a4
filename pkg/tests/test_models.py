import numpy as np
import pytest

from rydstirap.core import (
    Operator,
    collective_basis,
    hermitian_eigensolve,
    parity_operator,
)
from rydstirap.models import (
    CollectiveModel,
    SingleAtomModel,
    TwoAtomModel,
    collective_dark_state,
    collective_hamiltonian,
    collective_hamiltonian_at,
    final_dark_state,
    jx_eigenvalues,
    jx_zero_state,
    single_atom_dark_state,
    single_atom_hamiltonian,
    two_atom_dark_state,
    two_atom_hamiltonian,
    two_atom_hamiltonian_at,
)
from rydstirap.pulses import stirap_schedule

OM = 2 * np.pi * 10.0
E100 = 2 * np.pi * 100.0


def resid(H: Operator, state) -> float:
    scale = max(np.linalg.norm(H.matrix, 2), 1e-30)
    return float(np.max(np.abs(H.matrix @ state.amplitudes))) / scale


class TestSingleAtom:
    @pytest.mark.parametrize("theta", [0.0, np.pi / 4, np.pi / 3])
    @pytest.mark.parametrize("phi", [0.0, 1.3, -2.2])
    def test_dark_state_annihilated(self, theta, phi):
        H = single_atom_hamiltonian(OM * np.sin(theta), OM * np.cos(theta), phi)
        assert np.max(np.abs(H.matrix @ single_atom_dark_state(theta, phi).amplitudes)) < 1e-12

    def test_equal_drive_eigenvalues(self):
        w, _ = hermitian_eigensolve(single_atom_hamiltonian(OM, OM))
        assert np.allclose(w, [-OM / np.sqrt(2), 0.0, OM / np.sqrt(2)], atol=1e-12)

    def test_general_eigenvalues(self):
        o1, orr = 3.0, 4.0
        w, _ = hermitian_eigensolve(single_atom_hamiltonian(o1, orr))
        half = 0.5 * np.hypot(o1, orr)
        assert np.allclose(w, [-half, 0.0, half], atol=1e-12)

    def test_zero_drive_gives_zero_matrix(self):
        assert np.all(single_atom_hamiltonian(0.0, 0.0).matrix == 0.0)


class TestTwoAtom:
    def test_coupling_magnitudes(self):
        H = two_atom_hamiltonian_at(OM, 0.7 * OM, 0.0, E100).matrix
        # lower drive: |11> <-> sym|12> carries sqrt2 * Omega_1 / 2
        assert H[2, 0] == pytest.approx(-np.sqrt(2) * OM / 2)
        assert H[4, 1] == pytest.approx(-OM / 2)
        # upper drive raising elements with phase on Omega_r
        assert H[1, 2] == pytest.approx(-0.7 * OM / 2)
        assert H[3, 4] == pytest.approx(-np.sqrt(2) * 0.7 * OM / 2)
        assert H[4, 5] == pytest.approx(-np.sqrt(2) * 0.7 * OM / 2)
        # doubly excited diagonal
        assert H[3, 3] == pytest.approx(E100)

    def test_phase_enters_upper_coupling(self):
        phi = 0.9
        H = two_atom_hamiltonian_at(OM, OM, phi).matrix
        assert np.angle(H[1, 2] / (-0.5 * OM)) == pytest.approx(phi)
        assert H[2, 0] == pytest.approx(-np.sqrt(2) * OM / 2)  # lower stays real

    def test_decay_diagonal(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = TwoAtomModel(sched, E100, decay_rate=0.01)
        H = two_atom_hamiltonian(model, 1.5).matrix
        assert np.imag(H[1, 1]) == pytest.approx(-0.005)
        assert np.imag(H[3, 3]) == pytest.approx(-0.01)
        assert np.imag(H[0, 0]) == 0.0

    def test_dark_state_annihilated_any_interaction(self, rng):
        for _ in range(50):
            theta = rng.uniform(0, np.pi / 2)
            phi = rng.uniform(0, 2 * np.pi)
            e = rng.uniform(0, 400 * 2 * np.pi)
            H = two_atom_hamiltonian_at(OM * np.sin(theta), OM * np.cos(theta), phi, e)
            assert resid(H, two_atom_dark_state(theta, phi)) < 1e-13

    def test_dark_state_reference_points(self):
        d0 = two_atom_dark_state(0.0)
        assert np.allclose(d0.amplitudes, [1, 0, 0, 0, 0, 0])
        d_end = two_atom_dark_state(np.pi / 2)
        assert np.allclose(d_end.amplitudes, [-1 / np.sqrt(2), 0, 0, 0, 0, 1 / np.sqrt(2)])
        d_mid = two_atom_dark_state(np.pi / 4)
        assert np.allclose(
            d_mid.amplitudes, [0.0, -np.sqrt(2.0 / 3.0), 0.0, 0.0, 0.0, 1.0 / np.sqrt(3.0)]
        )

    def test_hermitian_without_decay(self, rng):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = TwoAtomModel(sched, E100)
        for t in rng.uniform(0, 4.1, size=20):
            assert two_atom_hamiltonian(model, t).is_hermitian()


class TestCollective:
    def test_matches_two_atom_model(self):
        # the 6 collective labels for N = 2 map one-to-one onto the pair basis
        perm = [0, 3, 1, 5, 4, 2]  # two-atom index -> collective index
        for phi in (0.0, 1.1):
            Hc = collective_hamiltonian_at(2, 0.8 * OM, OM, phi, r_max=2, interaction=E100).matrix
            Hp = two_atom_hamiltonian_at(0.8 * OM, OM, phi, E100).matrix
            assert np.max(np.abs(Hp - Hc[np.ix_(perm, perm)])) < 1e-12

    def test_jaynes_cummings_limit(self):
        # lower drive off: paired eigenvalues 0, +/- Omega_r sqrt(n2 + 1)/2
        n = 6
        orr = OM
        w, _ = hermitian_eigensolve(collective_hamiltonian_at(n, 0.0, orr))
        expect = [0.0]
        for n2 in range(n):
            expect.extend([0.5 * orr * np.sqrt(n2 + 1), -0.5 * orr * np.sqrt(n2 + 1)])
        assert np.allclose(w, np.sort(expect), atol=1e-12)

    def test_six_atoms_is_13_dim(self):
        assert collective_hamiltonian_at(6, OM, OM).matrix.shape == (13, 13)

    def test_number_conservation(self):
        n, r_max = 5, 2
        H = collective_hamiltonian_at(n, OM, OM, 0.3, r_max, E100).matrix
        labels = collective_basis(n, r_max)
        for i, li in enumerate(labels):
            for j, lj in enumerate(labels):
                if H[i, j] != 0:
                    assert sum(li.occ) == sum(lj.occ) == n

    def test_spectrum_symmetric_with_zero_mode(self, rng):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = CollectiveModel(6, sched, r_max=1)
        for t in rng.uniform(0, 4.1, size=25):
            w, _ = hermitian_eigensolve(collective_hamiltonian(model, t))
            assert np.max(np.abs(w + w[::-1])) < 1e-9
            assert np.min(np.abs(w)) < 1e-9

    def test_zero_mode_vector_annihilated(self, rng):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = CollectiveModel(5, sched, r_max=1)
        for t in rng.uniform(0.2, 3.9, size=10):
            H = collective_hamiltonian(model, t)
            assert resid(H, collective_dark_state(model, t)) < 1e-10

    def test_parity_anticommutes_only_without_interaction(self):
        th1 = parity_operator(collective_basis(6, 1)).matrix
        H1 = collective_hamiltonian_at(6, 0.6 * OM, OM, 0.4).matrix
        assert np.max(np.abs(th1 @ H1 + H1 @ th1)) < 1e-12

        th2 = parity_operator(collective_basis(6, 2)).matrix
        H2 = collective_hamiltonian_at(6, 0.6 * OM, OM, 0.4, r_max=2, interaction=E100).matrix
        assert np.max(np.abs(th2 @ H2 + H2 @ th2)) > 1.0  # the pair shift is parity-even

    def test_decay_scales_with_excitation_number(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = CollectiveModel(3, sched, r_max=2, interaction=E100, decay_rate=0.02)
        H = model.hamiltonian(2.0).matrix
        labels = collective_basis(3, 2)
        for i, lab in enumerate(labels):
            assert np.imag(H[i, i]) == pytest.approx(-0.01 * lab.occ[2])


class TestJxStates:
    def test_eigenvalue_ladders(self):
        assert np.allclose(jx_eigenvalues(0, 1.0), [0.0])
        assert np.allclose(jx_eigenvalues(2, 1.0), [-1.0, 0.0, 1.0])
        assert np.allclose(jx_eigenvalues(3, 1.0), [-1.5, -0.5, 0.5, 1.5])
        assert 0.0 not in jx_eigenvalues(3, 1.0)

    def test_trivial_and_pair_null_states(self):
        assert np.allclose(jx_zero_state(0).amplitudes, [1.0])
        pair = jx_zero_state(2).amplitudes
        assert np.allclose(pair, [-1 / np.sqrt(2), 0.0, 1 / np.sqrt(2)])

    def test_four_atom_null_state_against_eigensolver(self):
        # independent route: diagonalise the explicit 5x5 Jx matrix
        K = 4
        jx = np.zeros((K + 1, K + 1))
        for n2 in range(K):
            elem = 0.5 * np.sqrt((n2 + 1) * (K - n2))
            jx[n2 + 1, n2] = elem
            jx[n2, n2 + 1] = elem
        w, v = np.linalg.eigh(jx)
        k0 = int(np.argmin(np.abs(w)))
        assert abs(w[k0]) < 1e-14
        ref = v[:, k0]
        ref = ref / np.sign(ref[K])
        got = jx_zero_state(K).amplitudes
        assert np.allclose(got, ref, atol=1e-12)

    def test_odd_count_rejected(self):
        with pytest.raises(ValueError, match="even"):
            jx_zero_state(3)


class TestFinalDarkState:
    def test_two_atoms_is_bell_like(self):
        d = final_dark_state(2)
        assert np.allclose(d.amplitudes, [-1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0, 0])

    def test_single_atom_ends_in_rydberg(self):
        d = final_dark_state(1)
        assert np.allclose(d.amplitudes, [0, 0, 1.0])

    def test_even_count_never_populates_rydberg(self):
        d = final_dark_state(4)
        assert d.rydberg_population() == 0.0
        labels = collective_basis(4, 1)
        for lab, a in zip(labels, d.amplitudes):
            if lab.occ[2] >= 1:
                assert a == 0.0

    def test_odd_count_shares_one_excitation(self):
        d = final_dark_state(5)
        assert d.rydberg_population() == pytest.approx(1.0)
        assert np.linalg.norm(d.amplitudes[:6]) == 0.0  # no nr = 0 weight

    def test_matches_hamiltonian_kernel_at_endpoint(self):
        # at the end of the sweep only the lower drive is on
        for n in (4, 6):
            H = collective_hamiltonian_at(n, OM, 0.0)
            assert resid(H, final_dark_state(n)) < 1e-12


class TestSingleAtomModelWrapper:
    def test_schedule_evaluation(self):
        sched = stirap_schedule(OM, OM, 1.5, 1.1)
        model = SingleAtomModel(sched, decay_rate=0.01)
        H = model.hamiltonian(2.0)
        o1 = float(sched.omega_1(2.0))
        orr = float(sched.omega_r(2.0))
        ref = single_atom_hamiltonian(o1, orr).matrix.copy()
        ref[2, 2] = -0.005j
        assert np.allclose(H.matrix, ref, atol=1e-14)

    def test_dark_state_follows_schedule(self, rng):
        sched = stirap_schedule(OM, 0.9 * OM, 1.5, 1.1)
        model = SingleAtomModel(sched)
        for t in rng.uniform(0.1, 4.0, size=20):
            th = sched.mixing_angle_at(float(t))
            H = model.hamiltonian(float(t))
            assert resid(H, single_atom_dark_state(th)) < 1e-12
