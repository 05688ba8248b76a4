"""Hamiltonian builders and analytic reference states.

Three model families share one coupling convention: every Rabi coupling
enters with a global minus sign, -(1/2) Omega (Hamiltonians are divided by
hbar throughout), and the upper-transition raising element carries the phase
factor exp(i phi_r).  With this convention the analytic dark states below are
exact null vectors of the drive Hamiltonian at any mixing angle.

* single atom:  ladder |1> -- |2> -- |r>,
  dark state  D1 = cos(theta)|1> - sin(theta) e^{i phi_r} |r>.
* two atoms:    symmetric 6-state basis including |rr> with blockade shift E,
  dark state  D2 ~ (cos^2 - sin^2)|11> - sqrt2 cos sin e^{i phi_r} sym|1r>
  + sin^2|22>  (exact for any E >= 0).
* N atoms:      Schwinger-boson collective basis |n1, n2, nr> with nr <= r_max;
  the lower drive is a two-mode beam-splitter coupling -Omega_1 Jx and the
  upper drive a Jaynes-Cummings-type exchange with the Rydberg excitation
  number.  Doubly excited states (r_max = 2) carry the pair shift E.

Decay of the Rydberg level is a non-Hermitian diagonal -(i/2) Gamma nr:
amplitude leaks out of the tracked space and norms fall below one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BasisLabel,
    Operator,
    StateVector,
    TWO_ATOM_BASIS,
    collective_basis,
    hermitian_eigensolve,
    ladder_basis,
)
from .pulses import DriveSchedule

__all__ = [
    "SingleAtomModel",
    "TwoAtomModel",
    "CollectiveModel",
    "single_atom_hamiltonian",
    "single_atom_dark_state",
    "two_atom_hamiltonian",
    "two_atom_hamiltonian_at",
    "collective_hamiltonian_at",
    "two_atom_dark_state",
    "collective_hamiltonian",
    "collective_dark_state",
    "jx_eigenvalues",
    "jx_zero_state",
    "final_dark_state",
]


def _assemble(templates, omega_1: float, xi: complex) -> np.ndarray:
    """H(t) = omega_1 * A + xi * B + conj(xi) * B^dagger + diag."""
    A, B, diag = templates
    H = omega_1 * A + xi * B + np.conj(xi) * B.conj().T
    H[np.diag_indices_from(H)] += diag
    return H


def _ladder_templates(decay_rate: float = 0.0):
    A = np.zeros((3, 3), dtype=np.complex128)
    A[0, 1] = A[1, 0] = -0.5
    B = np.zeros((3, 3), dtype=np.complex128)
    B[2, 1] = -0.5
    diag = np.zeros(3, dtype=np.complex128)
    if decay_rate > 0:
        diag[2] = -0.5j * decay_rate
    return A, B, diag


def _two_atom_templates(interaction: float = 0.0, decay_rate: float = 0.0):
    # basis order: |11>, sym|1r>, sym|12>, |rr>, sym|2r>, |22>
    A = np.zeros((6, 6), dtype=np.complex128)
    r2 = np.sqrt(2.0)
    A[0, 2] = A[2, 0] = -0.5 * r2     # |11> <-> sym|12>
    A[1, 4] = A[4, 1] = -0.5          # sym|1r> <-> sym|2r>
    A[2, 5] = A[5, 2] = -0.5 * r2     # sym|12> <-> |22>
    B = np.zeros((6, 6), dtype=np.complex128)
    B[1, 2] = -0.5                    # sym|12> -> sym|1r>
    B[4, 5] = -0.5 * r2               # |22>    -> sym|2r>
    B[3, 4] = -0.5 * r2               # sym|2r> -> |rr>
    diag = np.zeros(6, dtype=np.complex128)
    diag[3] = interaction
    if decay_rate > 0:
        diag = diag - 0.5j * decay_rate * np.array([0, 1, 0, 2, 1, 0], dtype=float)
    return A, B, diag


def _collective_templates(n_atoms: int, r_max: int, interaction: float = 0.0, decay_rate: float = 0.0):
    labels = collective_basis(n_atoms, r_max)
    index = {lab.occ: i for i, lab in enumerate(labels)}
    dim = len(labels)
    A = np.zeros((dim, dim), dtype=np.complex128)
    B = np.zeros((dim, dim), dtype=np.complex128)
    diag = np.zeros(dim, dtype=np.complex128)
    for (n1, n2, nr), i in index.items():
        if n1 >= 1:
            j = index[(n1 - 1, n2 + 1, nr)]
            elem = -0.5 * np.sqrt(n1 * (n2 + 1))
            A[j, i] = elem
            A[i, j] = elem
        if n2 >= 1 and nr + 1 <= r_max:
            j = index[(n1, n2 - 1, nr + 1)]
            B[j, i] = -0.5 * np.sqrt(n2 * (nr + 1))
        diag[i] = interaction * nr * (nr - 1) / 2.0
        if decay_rate > 0:
            diag[i] += -0.5j * decay_rate * nr
    return A, B, diag


class _DrivenModel:
    """Shared evaluation of H(t) from constant coupling templates."""

    def hamiltonian(self, t: float, include_decay: bool = True) -> Operator:
        """Dense H(t)/hbar in this model's basis (rad/us)."""
        sched = self.schedule
        o1 = float(sched.omega_1(t))
        orr = float(sched.omega_r(t))
        xi = orr * np.exp(1j * float(sched.phi_r(t)))
        H = _assemble(self.coupling_templates(include_decay), o1, xi)
        return Operator(self.basis(), H)


@dataclass(frozen=True)
class SingleAtomModel(_DrivenModel):
    """Three-level ladder driven by one STIRAP pulse pair."""

    schedule: DriveSchedule
    decay_rate: float = 0.0   # 1/us, Rydberg level only

    def basis(self):
        return ladder_basis()

    def coupling_templates(self, include_decay: bool = True):
        return _ladder_templates(self.decay_rate if include_decay else 0.0)


@dataclass(frozen=True)
class TwoAtomModel(_DrivenModel):
    """Two interacting atoms in the symmetric basis, |rr> shifted by E."""

    schedule: DriveSchedule
    interaction: float = 0.0  # E/hbar, rad/us
    decay_rate: float = 0.0   # 1/us

    def __post_init__(self):
        if self.interaction < 0 or self.decay_rate < 0:
            raise ValueError("interaction and decay_rate must be >= 0")

    def basis(self):
        return TWO_ATOM_BASIS

    def coupling_templates(self, include_decay: bool = True):
        return _two_atom_templates(
            self.interaction, self.decay_rate if include_decay else 0.0
        )


@dataclass(frozen=True)
class CollectiveModel(_DrivenModel):
    """N atoms inside one blockade radius, at most r_max Rydberg excitations.

    Dimension is 2N + 1 for r_max = 1 (perfect blockade) and 3N for
    r_max = 2, where each doubly excited state is shifted by the single-pair
    interaction energy E.
    """

    n_atoms: int
    schedule: DriveSchedule
    r_max: int = 1
    interaction: float = 0.0  # E/hbar, rad/us (enters only for r_max = 2)
    decay_rate: float = 0.0

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        if self.r_max not in (1, 2):
            raise ValueError("r_max must be 1 or 2")
        if self.interaction < 0 or self.decay_rate < 0:
            raise ValueError("interaction and decay_rate must be >= 0")

    def basis(self):
        return collective_basis(self.n_atoms, self.r_max)

    def coupling_templates(self, include_decay: bool = True):
        return _collective_templates(
            self.n_atoms,
            self.r_max,
            self.interaction,
            self.decay_rate if include_decay else 0.0,
        )


# ---------------------------------------------------------------------------
# standalone Hamiltonian builders


def single_atom_hamiltonian(omega_1: float, omega_r: float, phi_r: float = 0.0) -> Operator:
    """Ladder Hamiltonian for fixed drive values (no decay)."""
    H = _assemble(_ladder_templates(), omega_1, omega_r * np.exp(1j * phi_r))
    return Operator(ladder_basis(), H)


def two_atom_hamiltonian_at(
    omega_1: float,
    omega_r: float,
    phi_r: float = 0.0,
    interaction: float = 0.0,
) -> Operator:
    """Two-atom Hamiltonian for fixed drive values (no decay)."""
    H = _assemble(
        _two_atom_templates(interaction), omega_1, omega_r * np.exp(1j * phi_r)
    )
    return Operator(TWO_ATOM_BASIS, H)


def collective_hamiltonian_at(
    n_atoms: int,
    omega_1: float,
    omega_r: float,
    phi_r: float = 0.0,
    r_max: int = 1,
    interaction: float = 0.0,
) -> Operator:
    """Collective Hamiltonian for fixed drive values (no decay)."""
    H = _assemble(
        _collective_templates(n_atoms, r_max, interaction),
        omega_1,
        omega_r * np.exp(1j * phi_r),
    )
    return Operator(collective_basis(n_atoms, r_max), H)


def two_atom_hamiltonian(model: TwoAtomModel, t: float) -> Operator:
    """The 6x6 symmetric two-atom Hamiltonian at time t (decay included if set)."""
    return model.hamiltonian(t)


def collective_hamiltonian(model: CollectiveModel, t: float) -> Operator:
    """The collective Hamiltonian at time t (decay included if set)."""
    return model.hamiltonian(t)


# ---------------------------------------------------------------------------
# analytic reference states


def single_atom_dark_state(theta: float, phi_r: float = 0.0) -> StateVector:
    """D1 = cos(theta)|1> - sin(theta) e^{i phi_r} |r>."""
    v = np.zeros(3, dtype=np.complex128)
    v[0] = np.cos(theta)
    v[2] = -np.sin(theta) * np.exp(1j * phi_r)
    return StateVector(ladder_basis(), v)


def two_atom_dark_state(theta: float, phi_r: float = 0.0) -> StateVector:
    """The unique two-atom dark state at mixing angle theta (any E).

    The sym|1r> component is -sqrt2 cos(theta) sin(theta) e^{i phi_r} before
    normalisation; the state never populates sym|12>, |rr> or sym|2r>.
    """
    c, s = np.cos(theta), np.sin(theta)
    v = np.zeros(6, dtype=np.complex128)
    v[0] = c * c - s * s
    v[1] = -np.sqrt(2.0) * c * s * np.exp(1j * phi_r)
    v[5] = s * s
    v = v / np.linalg.norm(v)
    return StateVector(TWO_ATOM_BASIS, v)


def collective_dark_state(model: CollectiveModel, t: float) -> StateVector:
    """Numerical zero mode of the collective Hamiltonian at time t (decay off).

    For r_max = 1 the zero eigenvalue is guaranteed by the parity
    anti-commutation; the returned vector is the eigenvector of smallest
    |eigenvalue|.  Its global sign/phase is not fixed.
    """
    H = model.hamiltonian(t, include_decay=False)
    w, v = hermitian_eigensolve(H)
    k = int(np.argmin(np.abs(w)))
    return StateVector(model.basis(), v[:, k])


def jx_eigenvalues(n_in_ladder: int, omega_1: float) -> np.ndarray:
    """Eigenvalues of -Omega_1 Jx for K atoms in the two lower levels, ascending.

    The K + 1 values are -Omega_1 * {-K/2, -K/2 + 1, ..., K/2}; zero is
    present exactly when K is even.
    """
    K = n_in_ladder
    if K < 0:
        raise ValueError("atom count must be >= 0")
    vals = -omega_1 * (np.arange(K + 1) - K / 2.0)
    return np.sort(vals)


def jx_zero_state(n_in_ladder: int) -> StateVector:
    """Normalised null vector of Jx = (a1^dag a2 + a1 a2^dag)/2 for K atoms.

    Defined for even K only; amplitudes vanish on odd n2 and follow the
    two-term recursion of the beam-splitter coupling on even n2.  The sign is
    fixed so the n2 = K component is positive.
    """
    K = n_in_ladder
    if K < 0 or K % 2 != 0:
        raise ValueError(f"no Jx = 0 state for K = {K} (K must be even)")
    c = np.zeros(K + 1)
    c[0] = 1.0
    for j in range(0, K - 1, 2):
        c[j + 2] = -c[j] * np.sqrt((j + 1) * (K - j) / ((j + 2) * (K - j - 1)))
    c /= np.linalg.norm(c)
    if c[K] < 0:
        c = -c
    labels = tuple(
        BasisLabel("collective", f"{K - j}_{j}_0", (K - j, j, 0)) for j in range(K + 1)
    )
    return StateVector(labels, c.astype(np.complex128))


def final_dark_state(n_atoms: int, r_max: int = 1) -> StateVector:
    """Endpoint of the collective STIRAP in the full collective basis.

    Even N: the Jx = 0 state with no Rydberg excitation.  Odd N: the Jx = 0
    state of N - 1 atoms with one symmetrically shared Rydberg excitation.
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    labels = collective_basis(n_atoms, r_max)
    v = np.zeros(len(labels), dtype=np.complex128)
    if n_atoms % 2 == 0:
        v[: n_atoms + 1] = jx_zero_state(n_atoms).amplitudes
    else:
        v[n_atoms + 1: 2 * n_atoms + 1] = jx_zero_state(n_atoms - 1).amplitudes
    return StateVector(labels, v)
