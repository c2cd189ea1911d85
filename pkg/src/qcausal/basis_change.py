"""Measurement-basis rotation and the overlap escape experiments.

Rotating all measurement bases by a single-qubit unitary v maps the
correlation point of a preparation rho to that of (v (x) v)^dag rho
(v (x) v), and the point of an evolution u to that of v^dag u v. Both
identities are computed here through two independent routes (rotated
projectors vs. transformed object) and asserted equal in the tests.

A point in the octahedral overlap is ambiguous; the escape experiment
measures how often a suitable rotation moves conditioned samples out of
the overlap into the decidable part of their tetrahedron. Four reference
rotations are embedded at 4-decimal precision and re-unitarized by polar
projection (printed matrices are only approximately unitary).

Reference escape proportions (20000 samples each) are reproduced by pure
preparations and sphere-plus-phase unitaries conditioned on the overlap;
mixed-rank preparations escape far less often, so the experiment defaults
to rank 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import (
    PPoint,
    cc_pvector,
    cc_pvector_batch,
    dc_pvector,
    dc_pvector_batch,
)
from .errors import ConsistencyError, ValidationError
from .geometry import contains, in_otc, in_otd, in_overlap, tcc, tdc
from .qmath import (
    is_density,
    is_unitary,
    pauli_eigenbasis,
    projector,
    require_density,
    require_unitary,
    tensor_product,
)
from .samplers import SamplerConfig, sample_in_region_batch, sample_unitary

__all__ = [
    "EscapeResult",
    "transform_density",
    "transform_unitary",
    "pprime_cc",
    "pprime_dc",
    "escape_experiment",
    "search_escape_v",
    "ESCAPE_V1",
    "ESCAPE_V2",
    "ESCAPE_V3",
    "ESCAPE_V4",
    "ESCAPE_V_SET",
    "REFERENCE_PROPORTIONS",
    "nearest_unitary",
]

_MEMBERSHIP_TOL = 1e-9


def nearest_unitary(m: np.ndarray) -> np.ndarray:
    """Polar projection onto the unitary group (drops the Hermitian factor)."""
    m = np.asarray(m, dtype=complex)
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def _reference(entries) -> np.ndarray:
    u = nearest_unitary(np.array(entries, dtype=complex))
    u.setflags(write=False)
    return u


ESCAPE_V1 = _reference(
    [[0.1813 - 0.5744j, 0.2656 + 0.7527j], [-0.6807 + 0.4170j, -0.2213 + 0.5602j]]
)
ESCAPE_V2 = _reference(
    [[-0.1080 + 0.7959j, 0.4848 - 0.3461j], [-0.4763 - 0.3577j, -0.0888 - 0.7983j]]
)
ESCAPE_V3 = _reference(
    [[-0.2947 + 0.5266j, 0.7483 - 0.2754j], [-0.6926 - 0.3950j, -0.2039 - 0.5680j]]
)
ESCAPE_V4 = _reference(
    [[0.3482 + 0.3352j, -0.3442 + 0.8050j], [-0.2069 + 0.8507j, 0.4796 - 0.0597j]]
)
ESCAPE_V_SET = (ESCAPE_V1, ESCAPE_V2, ESCAPE_V3, ESCAPE_V4)

# Published escape percentages per reference rotation, (CC, DC) pairs.
REFERENCE_PROPORTIONS = (
    (36.44, 58.91),
    (35.84, 57.32),
    (29.9, 50.64),
    (33.45, 52.56),
)


@dataclass(frozen=True)
class EscapeResult:
    """Outcome of one escape experiment."""

    kind: str
    v: np.ndarray
    n_samples: int
    escaped: int
    proportion: float
    image_in_target: bool


def transform_density(rho: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(v (x) v)^dag rho (v (x) v)."""
    rho = require_density(rho)
    v = require_unitary(v)
    vv = tensor_product(v, v)
    out = vv.conj().T @ rho @ vv
    if not is_density(out, 1e-9):
        raise ConsistencyError("transformed operator failed the density predicate")
    return out


def transform_unitary(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """v^dag u v."""
    u = require_unitary(u)
    v = require_unitary(v)
    out = v.conj().T @ u @ v
    if not is_unitary(out, 1e-10):
        raise ConsistencyError("transformed matrix failed the unitarity predicate")
    return out


def pprime_cc(rho: np.ndarray, v: np.ndarray) -> PPoint:
    """Rotated-basis correlation point of a preparation, via rotated projectors.

    Uses the projectors onto v|m_k> (x) v|m_k> directly; must equal
    ``cc_pvector(transform_density(rho, v))`` to 1e-10 — the identity is
    asserted in tests, not assumed.
    """
    rho = require_density(rho)
    v = require_unitary(v)
    out = []
    for i in (1, 2, 3):
        m0, m1 = pauli_eigenbasis(i)
        q0 = v @ m0
        q1 = v @ m1
        proj = projector(tensor_product(q0, q0)) + projector(tensor_product(q1, q1))
        value = np.trace(rho @ proj)
        if abs(value.imag) > 1e-10:
            raise ConsistencyError("rotated-projector trace has a large imaginary residue")
        out.append(2.0 * float(value.real) - 1.0)
    return PPoint(*out)


def pprime_dc(u: np.ndarray, v: np.ndarray) -> PPoint:
    """Rotated-basis correlation point of an evolution, via rotated eigenvectors.

    Uses |(v|m_0>)^dag u (v|m_0>)|^2 directly; must equal
    ``dc_pvector(transform_unitary(u, v))`` to 1e-10.
    """
    u = require_unitary(u)
    v = require_unitary(v)
    out = []
    for i in (1, 2, 3):
        w = v @ pauli_eigenbasis(i)[0]
        amp = w.conj() @ u @ w
        out.append(2.0 * float(abs(amp) ** 2) - 1.0)
    return PPoint(*out)


def _transform_density_batch(rhos: np.ndarray, v: np.ndarray) -> np.ndarray:
    vv = tensor_product(v, v)
    return np.einsum("ij,njk,kl->nil", vv.conj().T, rhos, vv)


def _transform_unitary_batch(us: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("ij,njk,kl->nil", v.conj().T, us, v)


def escape_experiment(
    kind: str,
    v: np.ndarray,
    n: int,
    cfg: SamplerConfig | None = None,
    rng: np.random.Generator | None = None,
) -> EscapeResult:
    """Count overlap-conditioned samples rotated into the decidable region.

    Draws ``n`` objects of ``kind`` with correlation point in the overlap,
    applies the basis rotation ``v``, and counts transformed points landing
    in the corner-cut tetrahedron minus the overlap. ``image_in_target``
    reports whether every transformed point stayed inside the corner-cut
    tetrahedron (it must, by the conjugation invariants; a transformed
    point outside its full tetrahedron would be an internal error).
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if kind not in ("CC", "DC"):
        raise ValidationError(f"kind must be 'CC' or 'DC', got {kind!r}")
    v = require_unitary(v)
    cfg = SamplerConfig(density_rank=1) if cfg is None else cfg
    objs = sample_in_region_batch(cfg, kind, "O", n, rng=rng)
    if kind == "CC":
        pts = cc_pvector_batch(_transform_density_batch(objs, v))
        full, cut = tcc(), in_otc
    else:
        pts = dc_pvector_batch(_transform_unitary_batch(objs, v))
        full, cut = tdc(), in_otd
    if not contains(full, pts, _MEMBERSHIP_TOL).all():
        raise ConsistencyError("a transformed point left its tetrahedron")
    in_target = cut(pts, _MEMBERSHIP_TOL)
    escaped = int((in_target & ~in_overlap(pts, _MEMBERSHIP_TOL)).sum())
    return EscapeResult(
        kind=kind,
        v=v,
        n_samples=n,
        escaped=escaped,
        proportion=escaped / n,
        image_in_target=bool(in_target.all()),
    )


def search_escape_v(
    kind: str,
    target,
    max_tries: int = 2000,
    cfg: SamplerConfig | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray | None:
    """Search for a rotation that moves one ambiguous object out of the overlap.

    ``target`` is a density operator (kind 'CC') or unitary (kind 'DC')
    whose correlation point must lie in the overlap. Returns the first
    sampled rotation whose transformed point leaves the overlap while
    staying in the proper tetrahedron, or None when ``max_tries`` random
    rotations all fail (the maximally mixed preparation, for instance, is
    rotation-invariant and always returns None).
    """
    if max_tries < 1:
        raise ValidationError("max_tries must be >= 1")
    if kind == "CC":
        target = require_density(target)
        base = cc_pvector(target)
        transform, pvec, tetra = transform_density, cc_pvector, tcc()
    elif kind == "DC":
        target = require_unitary(target)
        base = dc_pvector(target)
        transform, pvec, tetra = transform_unitary, dc_pvector, tdc()
    else:
        raise ValidationError(f"kind must be 'CC' or 'DC', got {kind!r}")
    if not in_overlap(base.as_array(), _MEMBERSHIP_TOL):
        raise ValidationError("target's correlation point is already outside the overlap")
    rng = (SamplerConfig() if cfg is None else cfg).rng() if rng is None else rng
    for _ in range(max_tries):
        v = sample_unitary(rng)
        moved = pvec(transform(target, v)).as_array()
        if contains(tetra, moved, _MEMBERSHIP_TOL) and not in_overlap(moved, _MEMBERSHIP_TOL):
            return v
    return None
