"""Correlation indices and the product statistic for two-qubit scenarios.

Measuring the same Pauli observable on both variables yields outcomes k
and m; the correlation index for axis ``i`` is
``p(k = m | ii) - p(k != m | ii)``. The three indices form a point in the
cube [-1, 1]^3 and their product is the scalar discrimination statistic.

Three scenarios are covered:

* common cause — both qubits prepared jointly in a density operator rho;
* direct cause — the second outcome produced by evolving the first qubit
  with a 2x2 unitary and measuring again;
* a probabilistic mixture of the two.

Probabilities are computed exactly from projectors, so every test is
deterministic; a seeded shot-sampling mode is provided for demonstration
only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConsistencyError, ValidationError
from .qmath import (
    pauli_eigenbasis,
    projector,
    require_density,
    require_unitary,
    tensor_product,
)

__all__ = [
    "PPoint",
    "MixtureScenario",
    "cc_corr_index",
    "cc_pvector",
    "statistic_c",
    "dc_cond_prob",
    "dc_corr_index",
    "dc_pvector",
    "dc_pvector_closed_form",
    "mixture_pvector",
    "mixture_pvector_direct",
    "dc_state_independence_check",
    "sampled_cc_corr_index",
    "sampled_dc_corr_index",
    "cc_pvector_batch",
    "cc_pvector_pure_batch",
    "dc_pvector_batch",
    "IMAG_TOL",
]

IMAG_TOL = 1e-10
_COMPONENT_SLACK = 1e-9


class PPoint(NamedTuple):
    """Correlation point (c11, c22, c33) in the cube [-1, 1]^3."""

    c11: float
    c22: float
    c33: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    @classmethod
    def from_array(cls, values) -> "PPoint":
        arr = np.asarray(values, dtype=float)
        if arr.shape != (3,):
            raise ValidationError(f"correlation point needs 3 components, got shape {arr.shape}")
        if np.max(np.abs(arr)) > 1.0 + _COMPONENT_SLACK:
            raise ValidationError(f"correlation components must lie in [-1, 1], got {arr}")
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class MixtureScenario:
    """p-mixture of a joint preparation ``rho`` and a causal evolution ``u``."""

    rho: np.ndarray
    u: np.ndarray
    p: float

    def validate(self) -> "MixtureScenario":
        require_density(self.rho)
        require_unitary(self.u)
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"mixture probability must be in [0, 1], got {self.p}")
        return self


def _equal_outcome_projector(i: int) -> np.ndarray:
    m0, m1 = pauli_eigenbasis(i)
    return projector(tensor_product(m0, m0)) + projector(tensor_product(m1, m1))


# |m0 m0><m0 m0| + |m1 m1><m1 m1| for each measurement axis, index 1..3.
_EQUAL_PROJ = {i: _equal_outcome_projector(i) for i in (1, 2, 3)}
for _m in _EQUAL_PROJ.values():
    _m.setflags(write=False)


def _real_part(value: complex, context: str) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise ConsistencyError(
            f"{context}: imaginary residue {value.imag:.3e} exceeds {IMAG_TOL:g}; "
            "the input is likely corrupted"
        )
    return float(value.real)


def _check_axis(i: int) -> int:
    if i not in (1, 2, 3):
        raise ValidationError(f"measurement axis must be in 1..3, got {i!r}")
    return i


def cc_equal_prob(rho: np.ndarray, i: int) -> float:
    """p(k = m | ii) when both qubits of ``rho`` are measured along axis i."""
    rho = require_density(rho)
    _check_axis(i)
    value = np.trace(rho @ _EQUAL_PROJ[i])
    return _real_part(complex(value), "equal-outcome probability")


def cc_corr_index(rho: np.ndarray, i: int) -> float:
    """Correlation index of the common-cause scenario along axis i."""
    return 2.0 * cc_equal_prob(rho, i) - 1.0


def cc_pvector(rho: np.ndarray) -> PPoint:
    """Correlation point of a joint preparation."""
    return PPoint(*(cc_corr_index(rho, i) for i in (1, 2, 3)))


def statistic_c(p) -> float:
    """Product of the three correlation indices."""
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValidationError(f"statistic needs a 3-component point, got shape {arr.shape}")
    return float(arr.prod())


def dc_cond_prob(u: np.ndarray, i: int, k: int) -> float:
    """Probability that the evolved qubit repeats eigen-outcome ``k`` on axis i.

    Equals |<m_k| u |m_k>|^2; by unitarity it is the same for k = 0 and
    k = 1, which is what makes the direct-cause indices state-independent.
    """
    u = require_unitary(u)
    _check_axis(i)
    if k not in (0, 1):
        raise ValidationError(f"eigenvector index must be 0 or 1, got {k!r}")
    m = pauli_eigenbasis(i)[k]
    amp = m.conj() @ u @ m
    return float(abs(amp) ** 2)


def dc_corr_index(u: np.ndarray, i: int) -> float:
    """Correlation index of the direct-cause scenario along axis i."""
    return 2.0 * dc_cond_prob(u, i, 0) - 1.0


def dc_pvector(u: np.ndarray) -> PPoint:
    """Correlation point of a causal evolution."""
    return PPoint(*(dc_corr_index(u, i) for i in (1, 2, 3)))


def _unitary_params(u: np.ndarray) -> tuple[float, float, float, float, float]:
    """Recover (a1, a2, b1, b2, alpha) with u = [[a1+i a2, b1+i b2],
    [-e^{i alpha}(b1-i b2), e^{i alpha}(a1-i a2)]].

    Every 2x2 unitary has this form: the second row is the conjugate
    first row rotated by the determinant phase. alpha is taken as the
    phase of det(u); the remaining parameters read off the first row.
    """
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = float(np.angle(det))
    a1, a2 = float(u[0, 0].real), float(u[0, 0].imag)
    b1, b2 = float(u[0, 1].real), float(u[0, 1].imag)
    return a1, a2, b1, b2, alpha


def dc_pvector_closed_form(u: np.ndarray) -> PPoint:
    """Correlation point of a unitary via its sphere-plus-phase parameters.

    Must agree with :func:`dc_pvector` to 1e-10; the equivalence is an
    invariant exercised by the tests.
    """
    u = require_unitary(u)
    a1, a2, b1, b2, alpha = _unitary_params(u)
    sa, ca = np.sin(alpha), np.cos(alpha)
    c = 0.5 + a1 * a2 * sa + 0.5 * ca * (a1 * a1 - a2 * a2)
    d = b1 * b2 * sa + 0.5 * ca * (b1 * b1 - b2 * b2)
    return PPoint(
        2.0 * (c - d) - 1.0,
        2.0 * (c + d) - 1.0,
        2.0 * (a1 * a1 + a2 * a2) - 1.0,
    )


def mixture_pvector(s: MixtureScenario) -> PPoint:
    """Convex combination p*P(rho) + (1-p)*P(u) of the two scenario points."""
    s.validate()
    combo = s.p * cc_pvector(s.rho).as_array() + (1.0 - s.p) * dc_pvector(s.u).as_array()
    return PPoint(*combo)


def mixture_pvector_direct(s: MixtureScenario) -> PPoint:
    """Correlation point of the mixture evaluated through outcome probabilities.

    Mixes p(k = m | ii) of the two branches before forming the indices;
    agrees with :func:`mixture_pvector` by linearity and serves as its
    independent cross-check.
    """
    s.validate()
    out = []
    for i in (1, 2, 3):
        p_equal = s.p * cc_equal_prob(s.rho, i) + (1.0 - s.p) * dc_cond_prob(s.u, i, 0)
        out.append(2.0 * p_equal - 1.0)
    return PPoint(*out)


def dc_state_independence_check(u: np.ndarray, i: int) -> float:
    """|p(repeat | eigenvector 0) - p(repeat | eigenvector 1)|, expected <= 1e-12."""
    return abs(dc_cond_prob(u, i, 0) - dc_cond_prob(u, i, 1))


def sampled_cc_corr_index(
    rho: np.ndarray, i: int, shots: int, rng: np.random.Generator
) -> float:
    """Shot-sampled estimate of :func:`cc_corr_index` (demonstration only)."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p_equal = cc_equal_prob(rho, i)
    hits = rng.binomial(shots, min(max(p_equal, 0.0), 1.0))
    return 2.0 * hits / shots - 1.0


def sampled_dc_corr_index(
    u: np.ndarray, i: int, shots: int, rng: np.random.Generator
) -> float:
    """Shot-sampled estimate of :func:`dc_corr_index` (demonstration only)."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p_equal = dc_cond_prob(u, i, 0)
    hits = rng.binomial(shots, min(max(p_equal, 0.0), 1.0))
    return 2.0 * hits / shots - 1.0


# -- batch kernels -----------------------------------------------------------
#
# Vectorized counterparts used by the samplers, the Monte Carlo sweeps and
# the escape experiments. Inputs are trusted (produced by this package), so
# per-object validation is skipped.


def cc_pvector_batch(rhos: np.ndarray) -> np.ndarray:
    """Correlation points of a stack of density operators, shape (n, 3)."""
    rhos = np.asarray(rhos, dtype=complex)
    cols = [
        2.0 * np.einsum("nij,ji->n", rhos, _EQUAL_PROJ[i]).real - 1.0 for i in (1, 2, 3)
    ]
    return np.stack(cols, axis=1)


_EQUAL_VECS = {
    i: (
        tensor_product(pauli_eigenbasis(i)[0], pauli_eigenbasis(i)[0]),
        tensor_product(pauli_eigenbasis(i)[1], pauli_eigenbasis(i)[1]),
    )
    for i in (1, 2, 3)
}


def cc_pvector_pure_batch(phis: np.ndarray) -> np.ndarray:
    """Correlation points of a stack of pure states, shape (n, 3)."""
    phis = np.asarray(phis, dtype=complex)
    cols = []
    for i in (1, 2, 3):
        v0, v1 = _EQUAL_VECS[i]
        p = np.abs(phis @ v0.conj()) ** 2 + np.abs(phis @ v1.conj()) ** 2
        cols.append(2.0 * p - 1.0)
    return np.stack(cols, axis=1)


def dc_pvector_batch(us: np.ndarray) -> np.ndarray:
    """Correlation points of a stack of 2x2 unitaries, shape (n, 3)."""
    us = np.asarray(us, dtype=complex)
    cols = []
    for i in (1, 2, 3):
        m0 = pauli_eigenbasis(i)[0]
        amp = np.einsum("i,nij,j->n", m0.conj(), us, m0)
        cols.append(2.0 * np.abs(amp) ** 2 - 1.0)
    return np.stack(cols, axis=1)
