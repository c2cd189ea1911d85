"""Dense complex linear algebra for one- and two-qubit objects.

Scalars are numpy ``complex128``; state vectors are 1-d arrays and
operators 2-d arrays. All four-dimensional objects use the fixed product
basis ``|00>, |01>, |10>, |11>`` (first factor outer in Kronecker
products). Eigenvectors follow a fixed global-phase convention — first
nonzero amplitude real positive — so fixtures are deterministic.

All constants returned here are read-only arrays; treat every array in
this package as an immutable value.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

__all__ = [
    "pauli",
    "bell",
    "pauli_eigenbasis",
    "tensor_product",
    "dagger",
    "projector",
    "is_unitary",
    "is_density",
    "is_unit_vector",
    "require_unitary",
    "require_density",
    "require_state",
    "UNITARY_TOL",
    "DENSITY_TOL",
    "STATE_TOL",
]

UNITARY_TOL = 1e-10
DENSITY_TOL = 1e-9
STATE_TOL = 1e-10

_SQ2 = np.sqrt(2.0)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


_PAULI = (
    _frozen([[1, 0], [0, 1]]),
    _frozen([[0, 1], [1, 0]]),
    _frozen([[0, -1j], [1j, 0]]),
    _frozen([[1, 0], [0, -1]]),
)

# |b1>..|b4| in the product basis; rows of the Bell expansion used everywhere.
_BELL = (
    _frozen([1, 0, 0, 1]) / _SQ2,
    _frozen([1, 0, 0, -1]) / _SQ2,
    _frozen([0, 1, 1, 0]) / _SQ2,
    _frozen([0, 1, -1, 0]) / _SQ2,
)

# (+1, -1) eigenvector pairs of the three non-trivial Pauli operators.
_EIGENBASES = {
    1: (_frozen([1, 1]) / _SQ2, _frozen([1, -1]) / _SQ2),
    2: (_frozen([1, 1j]) / _SQ2, _frozen([1, -1j]) / _SQ2),
    3: (_frozen([1, 0]), _frozen([0, 1])),
}


def pauli(i: int) -> np.ndarray:
    """Return the 2x2 Pauli operator with index ``i`` in 0..3."""
    if i not in (0, 1, 2, 3):
        raise ValidationError(f"pauli index must be in 0..3, got {i!r}")
    return _PAULI[i]


def bell(j: int) -> np.ndarray:
    """Return the maximally entangled two-qubit state with index ``j`` in 1..4."""
    if j not in (1, 2, 3, 4):
        raise ValidationError(f"bell index must be in 1..4, got {j!r}")
    return _BELL[j - 1]


def pauli_eigenbasis(i: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the orthonormal (+1, -1) eigenvector pair of ``pauli(i)``, i in 1..3."""
    if i not in (1, 2, 3):
        raise ValidationError(f"eigenbasis index must be in 1..3, got {i!r}")
    return _EIGENBASES[i]


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two dimension-2 vectors or 2x2 operators."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    for name, x in (("a", a), ("b", b)):
        if x.shape not in ((2,), (2, 2)):
            raise ValidationError(
                f"tensor_product expects dimension-2 operands, {name} has shape {x.shape}"
            )
    if a.shape != b.shape:
        raise ValidationError(
            f"tensor_product operands must both be vectors or both matrices, "
            f"got shapes {a.shape} and {b.shape}"
        )
    return np.kron(a, b)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m, dtype=complex).conj().T


def projector(v: np.ndarray) -> np.ndarray:
    """Rank-1 projector ``|v><v|``."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def is_unit_vector(v: np.ndarray, tol: float = STATE_TOL) -> bool:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or not np.all(np.isfinite(v)):
        return False
    return abs(np.vdot(v, v).real - 1.0) <= tol


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.all(np.isfinite(m)):
        return False
    resid = m @ m.conj().T - np.eye(m.shape[0])
    return np.max(np.abs(resid)) <= tol


def is_density(m: np.ndarray, tol: float = DENSITY_TOL) -> bool:
    """Hermitian within ``tol``, trace within ``tol`` of 1, eigenvalues >= -tol."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.all(np.isfinite(m)):
        return False
    if np.max(np.abs(m - m.conj().T)) > tol:
        return False
    if abs(np.trace(m).real - 1.0) > tol or abs(np.trace(m).imag) > tol:
        return False
    evals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return bool(evals.min() >= -tol)


def require_state(v: np.ndarray, dim: int = 4, tol: float = STATE_TOL) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (dim,):
        raise ValidationError(f"state vector must have shape ({dim},), got {v.shape}")
    if not is_unit_vector(v, tol):
        raise ValidationError("state vector failed the unit-norm predicate")
    return v


def require_unitary(m: np.ndarray, dim: int = 2, tol: float = UNITARY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (dim, dim):
        raise ValidationError(f"unitary must have shape ({dim}, {dim}), got {m.shape}")
    if not is_unitary(m, tol):
        raise ValidationError("matrix failed the unitarity predicate")
    return m


def require_density(m: np.ndarray, tol: float = DENSITY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValidationError(f"density operator must have shape (4, 4), got {m.shape}")
    if not is_density(m, tol):
        raise ValidationError("matrix failed the density-operator predicate")
    return m
