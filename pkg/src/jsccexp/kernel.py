"""Scalar exponent functions for a source/channel pair.

Everything here is a pure function of immutable inputs.  Inner sums use
``math.fsum`` (exactly-rounded compensated summation), so results do not
depend on term order; in particular the cross exponent is bit-exactly
symmetric in its two distributions.

Extended-real conventions used throughout: pairwise distances may be +inf
(channel rows with disjoint support); exp(-inf / rho) is 0, and any term
with zero probability weight is skipped so that 0 * exp(-inf) contributes
nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problems import (
    ChannelSpec,
    DimensionMismatch,
    DistributionSet,
    InputDistribution,
    SourceSpec,
    ValidationError,
    _freeze,
)

INF = math.inf


class EmptySet(ValidationError):
    """An operation over a distribution set received no members."""


@dataclass(frozen=True)
class BhattacharyyaMatrix:
    """Symmetric matrix of pairwise Bhattacharyya distances between channel rows.

    Entries are in nats, live in [0, +inf], vanish on the diagonal and are
    +inf exactly when the two rows have disjoint support.
    """

    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError("distance matrix must be square")
        if np.any(np.diag(d) != 0.0):
            raise ValidationError("distance matrix must vanish on the diagonal")
        if np.any(np.isnan(d)) or np.any(d < 0.0):
            raise ValidationError("distances must lie in [0, +inf]")
        if not np.array_equal(d, d.T):
            raise ValidationError("distance matrix must be symmetric")
        object.__setattr__(self, "dist", _freeze(d))

    @property
    def num_inputs(self) -> int:
        return self.dist.shape[0]


def bhattacharyya_matrix(channel: ChannelSpec) -> BhattacharyyaMatrix:
    """Pairwise distances -log sum_y sqrt(W(y|x) W(y|x')) for all input pairs.

    Only the upper triangle is summed and then mirrored, so the result is
    bit-exactly symmetric; the diagonal is 0 by construction.  Tiny negative
    values from rounding (near-identical rows) are clamped to 0.
    """
    W = channel.rows
    n = channel.num_inputs
    D = np.zeros((n, n))
    for x in range(n):
        for xb in range(x + 1, n):
            coeff = math.fsum(math.sqrt(a * b) for a, b in zip(W[x], W[xb]))
            d = INF if coeff == 0.0 else max(0.0, -math.log(coeff))
            D[x, xb] = D[xb, x] = d
    return BhattacharyyaMatrix(D)


def source_exponent(rho: float, source: SourceSpec) -> float:
    """Gallager-style source function (1+rho) log sum_v P(v)^(1/(1+rho)).

    Nonnegative, nondecreasing and convex in rho; zero atoms contribute
    nothing and are skipped.
    """
    if rho < 0.0:
        raise ValidationError(f"source exponent needs rho >= 0, got {rho}")
    a = 1.0 / (1.0 + rho)
    s = math.fsum(p ** a for p in source.pmf.tolist() if p > 0.0)
    return max(0.0, (1.0 + rho) * math.log(s))


def source_exponent_grid(rho_values: np.ndarray, source: SourceSpec) -> np.ndarray:
    """source_exponent sampled pointwise on a grid (same scalar code path)."""
    return np.array([source_exponent(r, source) for r in rho_values])


def _check_pair(q: InputDistribution, q_other: InputDistribution, db: BhattacharyyaMatrix):
    if q.num_inputs != db.num_inputs or q_other.num_inputs != db.num_inputs:
        raise DimensionMismatch(
            f"distributions on {q.num_inputs}/{q_other.num_inputs} inputs, "
            f"distance matrix on {db.num_inputs}"
        )


def cross_exponent(
    q: InputDistribution,
    q_other: InputDistribution,
    rho: float,
    db: BhattacharyyaMatrix,
) -> float:
    """-rho log sum_{x,x'} Q(x) Q'(x') exp(-d(x,x')/rho) for rho >= 1.

    Symmetric in (Q, Q'); returns +inf when all weighted pairs sit at
    infinite distance (disjoint-support distributions on a partly noiseless
    channel), which is the only way the inner sum can vanish.
    """
    if rho < 1.0:
        raise ValidationError(f"expurgated functions need rho >= 1, got {rho}")
    _check_pair(q, q_other, db)
    D = db.dist
    qa = q.pmf
    qb = q_other.pmf
    terms = []
    for x in range(qa.size):
        px = qa[x]
        if px == 0.0:
            continue
        row = D[x]
        for xb in range(qb.size):
            w = px * qb[xb]
            if w == 0.0:
                continue
            d = row[xb]
            if d == INF:
                continue
            terms.append(w * math.exp(-d / rho))
    s = math.fsum(terms)
    if s == 0.0:
        return INF
    return max(0.0, -rho * math.log(s))


def expurgated_exponent(q: InputDistribution, rho: float, db: BhattacharyyaMatrix) -> float:
    """Single-distribution expurgated channel function; always finite."""
    return cross_exponent(q, q, rho, db)


def min_cross_exponent(
    q: InputDistribution,
    dset: DistributionSet,
    rho: float,
    db: BhattacharyyaMatrix,
) -> float:
    """Worst-case cross exponent of q against the members of a set."""
    if len(dset) == 0:
        raise EmptySet("minimum over an empty distribution set")
    return min(cross_exponent(q, qt, rho, db) for qt in dset)


def set_max_exponent(
    dset: DistributionSet,
    rho: float,
    db: BhattacharyyaMatrix,
) -> tuple[float, int]:
    """Best member of the set under its own worst-case cross exponent.

    Returns (value, index of the attaining member); ties go to the lowest
    index.  The value is always finite because each member's minimum
    includes its (finite) self term.
    """
    if len(dset) == 0:
        raise EmptySet("maximum over an empty distribution set")
    best_val, best_idx = -INF, 0
    for i, q in enumerate(dset):
        v = min_cross_exponent(q, dset, rho, db)
        if v > best_val:
            best_val, best_idx = v, i
    return best_val, best_idx


def gallager_e0(q: InputDistribution, rho: float, channel: ChannelSpec) -> float:
    """Gallager E0 function -log sum_y (sum_x Q(x) W(y|x)^(1/(1+rho)))^(1+rho).

    Used only as the clearly-labeled random-coding baseline; rho in [0, 1].
    """
    if not 0.0 <= rho <= 1.0:
        raise ValidationError(f"baseline E0 needs rho in [0, 1], got {rho}")
    if q.num_inputs != channel.num_inputs:
        raise DimensionMismatch("distribution/channel alphabet mismatch")
    a = 1.0 / (1.0 + rho)
    W = channel.rows
    qv = q.pmf
    outer = []
    for y in range(channel.num_outputs):
        inner = math.fsum(qv[x] * W[x, y] ** a for x in range(qv.size) if qv[x] > 0.0)
        outer.append(inner ** (1.0 + rho))
    return max(0.0, -math.log(math.fsum(outer)))


# ---------------------------------------------------------------------------
# Asymptotics in rho, used to decide whether a supremum over rho >= 1 is
# finite.  As rho -> inf the cross exponent grows linearly with slope
# -log(mass on finite-distance pairs), and the source function grows with
# slope log(support size).
# ---------------------------------------------------------------------------

def finite_pair_mass(
    q: InputDistribution, q_other: InputDistribution, db: BhattacharyyaMatrix
) -> float:
    """Total Q x Q' probability mass on input pairs at finite distance."""
    _check_pair(q, q_other, db)
    D = db.dist
    qa, qb = q.pmf, q_other.pmf
    return math.fsum(
        qa[x] * qb[xb]
        for x in range(qa.size)
        for xb in range(qb.size)
        if qa[x] > 0.0 and qb[xb] > 0.0 and D[x, xb] != INF
    )


def cross_growth_rate(
    q: InputDistribution, q_other: InputDistribution, db: BhattacharyyaMatrix
) -> float:
    """Linear growth rate of the cross exponent as rho -> inf."""
    mass = finite_pair_mass(q, q_other, db)
    return INF if mass == 0.0 else max(0.0, -math.log(mass))


def set_growth_rate(dset: DistributionSet, db: BhattacharyyaMatrix) -> float:
    """Growth rate of the set-max exponent: max over members of the min
    growth rate against the set."""
    if len(dset) == 0:
        raise EmptySet("growth rate of an empty distribution set")
    return max(
        min(cross_growth_rate(q, qt, db) for qt in dset) for q in dset
    )


def finite_distance_mask(db: BhattacharyyaMatrix) -> np.ndarray:
    """0/1 matrix marking input pairs at finite distance (diagonal is 1)."""
    return np.isfinite(db.dist).astype(float)


def source_support_log(source: SourceSpec) -> float:
    """log of the number of source atoms with positive mass."""
    return math.log(source.support_size)


# ---------------------------------------------------------------------------
# Grid-vectorized variants.  Same math as the scalar functions, evaluated
# with numpy across a whole rho grid; used inside optimization loops where
# per-point fsum calls would dominate.  Values agree with the scalar path
# to within a few ulp.
# ---------------------------------------------------------------------------

def cross_exponent_curve(
    qa: np.ndarray, qb: np.ndarray, rho_values: np.ndarray, db: BhattacharyyaMatrix
) -> np.ndarray:
    w = np.outer(qa, qb).ravel()
    d = db.dist.ravel()
    keep = (w > 0.0) & np.isfinite(d)
    w, d = w[keep], d[keep]
    if w.size == 0:
        return np.full(rho_values.size, INF)
    s = np.exp(-np.outer(1.0 / rho_values, d)) @ w
    with np.errstate(divide="ignore"):
        out = np.where(s > 0.0, -rho_values * np.log(s), INF)
    return np.maximum(out, 0.0)


def set_max_exponent_curve(
    dset: DistributionSet, rho_values: np.ndarray, db: BhattacharyyaMatrix
) -> np.ndarray:
    """Vectorized set-max exponent over a rho grid (fast path)."""
    m = len(dset)
    pmfs = [q.pmf for q in dset]
    cross = {}
    for i in range(m):
        for j in range(i, m):
            cross[i, j] = cross[j, i] = cross_exponent_curve(pmfs[i], pmfs[j], rho_values, db)
    per_member = [np.minimum.reduce([cross[i, j] for j in range(m)]) for i in range(m)]
    return np.maximum.reduce(per_member)


def set_max_exponent_grid(
    dset: DistributionSet, rho_values: np.ndarray, db: BhattacharyyaMatrix
) -> np.ndarray:
    """Set-max exponent sampled with the exact scalar kernel at every point."""
    return np.array([set_max_exponent(dset, r, db)[0] for r in rho_values])
