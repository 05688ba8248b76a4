"""Basis-labelled state vectors, dense operators, and the small linear-algebra
contracts (fidelity, parity, Hermitian eigensolve) shared by every model.

Conventions
-----------
* All Hamiltonians are stored divided by hbar, in angular-frequency units
  (rad/us).  Times are in microseconds.
* Basis orderings are fixed and part of the type: see ``TWO_ATOM_BASIS``,
  ``ladder_basis`` and ``collective_basis``.
* State norms may be below one: decay is modelled as amplitude leaking out of
  the tracked space, so probability is allowed to disappear but never to
  exceed one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "BasisLabel",
    "StateVector",
    "Operator",
    "TWO_ATOM_BASIS",
    "ladder_basis",
    "collective_basis",
    "register_basis",
    "fidelity",
    "parity_operator",
    "hermitian_eigensolve",
    "BasisMismatchError",
    "NonHermitianError",
]

_NORM_SLACK = 1e-9


class BasisMismatchError(ValueError):
    """Two states (or a state and an operator) live in different bases."""


class NonHermitianError(ValueError):
    """A Hermitian operation was requested on a non-Hermitian matrix."""


@dataclass(frozen=True)
class BasisLabel:
    """One basis state of a declared kind.

    kind
        "ladder" (single atom |1>, |2>, |r>), "two-atom" (symmetric two-atom
        basis), "collective" (occupation triple) or "register" (ground-state
        qubit occupation pair).
    occ
        Occupation numbers: (n1, n2, nr) for "collective", (n0, n1) for
        "register", None otherwise.
    text
        Short unique name, also used as a CSV column header.
    """

    kind: str
    text: str
    occ: tuple | None = None

    @property
    def n_rydberg(self) -> int:
        """Number of Rydberg excitations carried by this basis state."""
        if self.kind == "collective":
            return self.occ[2]
        if self.kind == "two-atom":
            return {"11": 0, "1r_sym": 1, "12_sym": 0, "rr": 2, "2r_sym": 1, "22": 0}[self.text]
        if self.kind == "ladder":
            return 1 if self.text == "r" else 0
        return 0

    @property
    def n2(self) -> int:
        """Occupation of level |2> (defined for collective labels only)."""
        if self.kind != "collective":
            raise ValueError(f"label kind {self.kind!r} has no n2 occupation")
        return self.occ[1]

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.text


#: The symmetric two-atom basis, in fixed order:
#: |11>, (|1r>+|r1>)/sqrt2, (|12>+|21>)/sqrt2, |rr>, (|2r>+|r2>)/sqrt2, |22>.
TWO_ATOM_BASIS: tuple[BasisLabel, ...] = (
    BasisLabel("two-atom", "11"),
    BasisLabel("two-atom", "1r_sym"),
    BasisLabel("two-atom", "12_sym"),
    BasisLabel("two-atom", "rr"),
    BasisLabel("two-atom", "2r_sym"),
    BasisLabel("two-atom", "22"),
)


def ladder_basis() -> tuple[BasisLabel, ...]:
    """Single-atom ladder basis |1>, |2>, |r>."""
    return (
        BasisLabel("ladder", "1"),
        BasisLabel("ladder", "2"),
        BasisLabel("ladder", "r"),
    )


def collective_basis(n_atoms: int, r_max: int = 1) -> tuple[BasisLabel, ...]:
    """Symmetric collective basis |n1, n2, nr> with n1 + n2 + nr = N.

    Ordering is fixed: all nr = 0 states by ascending n2, then nr = 1 by
    ascending n2, then nr = 2.  Dimension is 2N + 1 for r_max = 1 and 3N for
    r_max = 2.
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    if r_max not in (1, 2):
        raise ValueError("r_max must be 1 or 2")
    labels = []
    for nr in range(r_max + 1):
        for n2 in range(n_atoms - nr + 1):
            n1 = n_atoms - nr - n2
            labels.append(BasisLabel("collective", f"{n1}_{n2}_{nr}", (n1, n2, nr)))
    return tuple(labels)


def register_basis(n_atoms: int) -> tuple[BasisLabel, ...]:
    """Ground-register basis |n0, n1> by ascending n1 (qubit occupation only)."""
    return tuple(
        BasisLabel("register", f"{n_atoms - n1}_{n1}", (n_atoms - n1, n1))
        for n1 in range(n_atoms + 1)
    )


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over an ordered basis.

    The amplitude array is copied and frozen at construction.  Norm may be
    below one (decay) but never above one.
    """

    basis: tuple[BasisLabel, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or len(amps) != len(self.basis):
            raise ValueError(
                f"amplitude count {amps.size} does not match basis size {len(self.basis)}"
            )
        nrm = float(np.linalg.norm(amps))
        if nrm > 1.0 + _NORM_SLACK:
            raise ValueError(f"state norm {nrm} exceeds 1")
        amps.setflags(write=False)
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def population_of(self, text: str) -> float:
        for lab, p in zip(self.basis, self.populations()):
            if lab.text == text:
                return float(p)
        raise KeyError(text)

    def rydberg_population(self) -> float:
        """Total population in basis states with at least one Rydberg excitation."""
        pops = self.populations()
        return float(sum(p for lab, p in zip(self.basis, pops) if lab.n_rydberg >= 1))


@dataclass(frozen=True)
class Operator:
    """Dense square matrix in a declared basis (Hamiltonians are H/hbar, rad/us)."""

    basis: tuple[BasisLabel, ...]
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        d = len(self.basis)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match basis size {d}")
        mat.setflags(write=False)
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "matrix", mat)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_defect() < tol


def _check_same_basis(a: Sequence[BasisLabel], b: Sequence[BasisLabel]) -> None:
    if tuple(a) != tuple(b):
        raise BasisMismatchError(
            "states are expressed in different bases "
            f"({len(a)} labels vs {len(b)} labels)"
        )


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap |<a|b>|^2 without renormalisation.

    Decayed norm therefore lowers the fidelity, matching the convention that
    decay removes amplitude from the tracked space.
    """
    _check_same_basis(a.basis, b.basis)
    return float(np.abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def parity_operator(basis: Sequence[BasisLabel]) -> Operator:
    """The diagonal operator (-1)^(n2) on a collective basis.

    It anti-commutes with every drive term (each changes n2 by one), which
    forces the spectrum of the perfectly blockaded model to be symmetric
    about zero with a guaranteed zero mode.
    """
    basis = tuple(basis)
    if any(lab.kind != "collective" for lab in basis):
        raise BasisMismatchError("parity operator is defined on a collective basis")
    diag = np.array([(-1.0) ** lab.n2 for lab in basis], dtype=np.complex128)
    return Operator(basis, np.diag(diag))


def hermitian_eigensolve(op: Operator, tol: float = 1e-12):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian operator.

    Raises NonHermitianError if the matrix fails the Hermiticity check.  Within
    a degenerate subspace the eigenvector choice is implementation defined;
    callers should only rely on subspace membership.
    """
    defect = op.hermiticity_defect()
    scale = max(1.0, float(np.max(np.abs(op.matrix))))
    if defect > tol * scale:
        raise NonHermitianError(
            f"matrix is not Hermitian (max |H - H^dagger| = {defect:.3e})"
        )
    w, v = np.linalg.eigh(op.matrix)
    return w, v
