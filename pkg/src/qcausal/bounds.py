"""Numerical certification of the four extremal statistic values.

The product statistic over each tetrahedron reaches -1 and +1/27 on the
preparation side and -1/27 and +1 on the evolution side. Two independent
oracles certify these numbers and must agree:

* an exhaustive barycentric grid over the weight simplex (the statistic is
  a trilinear polynomial of an affine image of the weights, so the mesh
  error is bounded by L * step with L <= 3 * sqrt(3)), refined by an
  in-repo derivative-free compass polish on the simplex;
* multi-start Nelder-Mead over raw quantum parameters (real state
  coefficients, or sphere-plus-phase unitary parameters), re-evaluated
  through the correlation module.

Reported witnesses always reproduce the reported value through the
correlation layer; that closure is part of the contract and is asserted
in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .correlation import cc_pvector, dc_pvector, statistic_c
from .errors import ValidationError
from .geometry import (
    Tetrahedron,
    barycentric,
    state_from_weights,
    tcc,
    tdc,
    unitary_from_probs,
)
from .qmath import bell, projector
from .samplers import SamplerConfig, unitaries_from_params

__all__ = [
    "BoundReport",
    "grid_extremum",
    "polish_extremum",
    "multistart_state_extremum",
    "multistart_unitary_extremum",
    "TARGET_VALUES",
    "GRID_LIPSCHITZ",
]

# Certified extrema for each target.
TARGET_VALUES = {
    "CC_MAX": 1.0 / 27.0,
    "CC_MIN": -1.0,
    "DC_MAX": 1.0,
    "DC_MIN": -1.0 / 27.0,
}

# Max gradient norm of the trilinear product over the simplex-to-cube map.
GRID_LIPSCHITZ = 3.0 * np.sqrt(3.0)

_POLISH_MAX_ITER = 10_000


@dataclass(frozen=True)
class BoundReport:
    """One certified extremum with its reproducing witness.

    ``witness`` holds barycentric weights; ``witness_object`` the quantum
    object (real state vector or 2x2 unitary) that reproduces ``value``
    through the correlation module.
    """

    target: str
    value: float
    witness: np.ndarray
    witness_object: np.ndarray
    grid_step: float | None = None
    starts: int | None = None
    converged: bool = True


def _target_for(t: Tetrahedron, direction: str) -> str:
    if direction not in ("MIN", "MAX"):
        raise ValidationError(f"direction must be 'MIN' or 'MAX', got {direction!r}")
    if t is tcc():
        return f"CC_{direction}"
    if t is tdc():
        return f"DC_{direction}"
    raise ValidationError("bounds run over the two canonical tetrahedra only")


def _witness_object(target: str, weights: np.ndarray) -> np.ndarray:
    if target.startswith("CC"):
        return state_from_weights(weights)
    return unitary_from_probs(weights)


def _evaluate_witness(target: str, obj: np.ndarray) -> float:
    if target.startswith("CC"):
        return statistic_c(cc_pvector(projector(obj)))
    return statistic_c(dc_pvector(obj))


def _simplex_grid(n: int) -> np.ndarray:
    """All weight vectors (i, j, k, n-i-j-k)/n with non-negative parts."""
    idx = np.arange(n + 1, dtype=np.int32)
    i, j, k = np.meshgrid(idx, idx, idx, indexing="ij")
    mask = (i + j + k) <= n
    i, j, k = i[mask], j[mask], k[mask]
    grid = np.stack([i, j, k, n - i - j - k], axis=1).astype(float)
    return grid / n


def grid_extremum(t: Tetrahedron, direction: str, step: float) -> BoundReport:
    """Exhaustive simplex-grid search for the statistic's extremum over ``t``."""
    if not 0.0 < step <= 0.1:
        raise ValidationError(f"grid step must be in (0, 0.1], got {step}")
    target = _target_for(t, direction)
    n = max(int(round(1.0 / step)), 10)
    weights = _simplex_grid(n)
    values = (weights @ t.vertices).prod(axis=1)
    best = int(values.argmax() if direction == "MAX" else values.argmin())
    w = weights[best]
    return BoundReport(
        target=target,
        value=float(values[best]),
        witness=w,
        witness_object=_witness_object(target, w),
        grid_step=1.0 / n,
    )


def _simplex_compass(
    t: Tetrahedron, direction: str, w0: np.ndarray, tol: float
) -> tuple[np.ndarray, bool]:
    """Pairwise weight-transfer descent along the simplex, halving the step.

    The transfer directions e_i - e_j positively span the feasible cone at
    every face of the simplex, so stalling at step < tol certifies a
    stationary point up to tol.
    """
    sign = 1.0 if direction == "MAX" else -1.0

    def score(w):
        return sign * float((w @ t.vertices).prod())

    w = w0.copy()
    best = score(w)
    delta = 0.25
    iterations = 0
    while delta >= tol and iterations < _POLISH_MAX_ITER:
        iterations += 1
        improved = False
        for i in range(4):
            for j in range(4):
                if i == j or w[j] < delta:
                    continue
                cand = w.copy()
                cand[i] += delta
                cand[j] -= delta
                val = score(cand)
                if val > best + 1e-16:
                    w, best = cand, val
                    improved = True
        if not improved:
            delta /= 2.0
    return w, delta < tol


def polish_extremum(report: BoundReport, tol: float = 1e-10) -> BoundReport:
    """Refine a grid report by simplex-constrained compass search.

    Never worsens the objective; returns ``converged=False`` when the
    iteration cap is hit before the step threshold.
    """
    if report.target.startswith("CC"):
        t = tcc()
    else:
        t = tdc()
    direction = report.target.split("_")[1]
    w, converged = _simplex_compass(t, direction, np.asarray(report.witness, float), tol)
    value = float((w @ t.vertices).prod())
    if (direction == "MAX" and value < report.value) or (
        direction == "MIN" and value > report.value
    ):
        w, value = report.witness, report.value  # keep the better point
    return replace(
        report,
        value=value,
        witness=w,
        witness_object=_witness_object(report.target, w),
        converged=converged,
    )


_NM_OPTIONS = {"maxiter": 10_000, "xatol": 1e-12, "fatol": 1e-14}


def multistart_state_extremum(
    direction: str, starts: int, cfg: SamplerConfig
) -> BoundReport:
    """Multi-start Nelder-Mead over real dimension-4 states.

    Optimizes the statistic of the state's correlation point; coordinates
    are coefficients in the entangled basis (an orthogonal change of
    basis), normalized inside the objective so the search is effectively
    on the unit sphere.
    """
    target = _target_for(tcc(), direction)
    if starts < 1:
        raise ValidationError("starts must be >= 1")
    sign = -1.0 if direction == "MAX" else 1.0
    vertices = tcc().vertices

    def objective(z):
        n2 = z @ z
        if n2 < 1e-12:
            return 1.0
        return sign * float(((z * z / n2) @ vertices).prod())

    rng = cfg.rng()
    best_z, best_val = None, np.inf
    for _ in range(starts):
        res = minimize(
            objective, rng.standard_normal(4), method="Nelder-Mead", options=_NM_OPTIONS
        )
        if res.fun < best_val:
            best_val, best_z = res.fun, res.x
    z = best_z / np.linalg.norm(best_z)
    weights = z * z
    state = sum(zj * bell(j) for j, zj in enumerate(z, start=1))
    value = _evaluate_witness(target, state)
    return BoundReport(
        target=target, value=value, witness=weights, witness_object=state, starts=starts
    )


def multistart_unitary_extremum(
    direction: str, starts: int, cfg: SamplerConfig
) -> BoundReport:
    """Multi-start Nelder-Mead over sphere-plus-phase unitary parameters."""
    target = _target_for(tdc(), direction)
    if starts < 1:
        raise ValidationError("starts must be >= 1")
    sign = -1.0 if direction == "MAX" else 1.0
    vertices = tdc().vertices

    def weights_of(x):
        v = x[:4]
        n2 = v @ v
        if n2 < 1e-12:
            return None
        a1, a2, b1, b2 = v / np.sqrt(n2)
        sa, ca = np.sin(x[4]), np.cos(x[4])
        c = 0.5 + a1 * a2 * sa + 0.5 * ca * (a1 * a1 - a2 * a2)
        d = b1 * b2 * sa + 0.5 * ca * (b1 * b1 - b2 * b2)
        point = np.array([2 * (c - d) - 1, 2 * (c + d) - 1, 2 * (a1 * a1 + a2 * a2) - 1])
        return (vertices @ point + 1.0) / 4.0

    def objective(x):
        w = weights_of(x)
        if w is None:
            return 1.0
        return sign * float((w @ vertices).prod())

    rng = cfg.rng()
    best_x, best_val = None, np.inf
    for _ in range(starts):
        x0 = np.concatenate([rng.standard_normal(4), rng.uniform(0, 2 * np.pi, 1)])
        res = minimize(objective, x0, method="Nelder-Mead", options=_NM_OPTIONS)
        if res.fun < best_val:
            best_val, best_x = res.fun, res.x
    v = best_x[:4] / np.linalg.norm(best_x[:4])
    u = unitaries_from_params(v[0], v[1], v[2], v[3], best_x[4])
    value = _evaluate_witness(target, u)
    weights = barycentric(tdc(), dc_pvector(u).as_array(), tol=1e-6)
    return BoundReport(
        target=target, value=value, witness=weights, witness_object=u, starts=starts
    )
