"""Upper concave envelope of a sampled curve and the supremum of
(envelope - t * source term) over the grid.

The envelope realizes the pointwise supremum over two-point convex
combinations of the sampled values, computed as the monotone-chain upper
hull of the point set in O(n log n) (the grid is already sorted, so in
practice O(n)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .kernel import source_exponent
from .problems import ProblemSpec, ValidationError, _freeze

HULL_TOUCH_TOL = 1e-12


class NonFiniteInput(ValidationError):
    """Curve values must be finite; infinite exponents take the slope path."""


class GridTooCoarseWarning(UserWarning):
    """The discrete argmax is poorly resolved; neighbors differ noticeably."""


@dataclass(frozen=True)
class ExponentCurve:
    """A function of rho sampled on a strictly increasing grid, in nats."""

    rho_values: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        x = np.asarray(self.rho_values, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or v.shape != x.shape:
            raise ValidationError("curve: rho grid and values must be 1-D and equal length")
        if x.size and x[0] < 1.0:
            raise ValidationError("curve: rho grid must start at or above 1")
        if np.any(np.diff(x) <= 0.0):
            raise ValidationError("curve: rho grid must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise NonFiniteInput(f"curve {self.label!r} has non-finite values")
        object.__setattr__(self, "rho_values", _freeze(x))
        object.__setattr__(self, "values", _freeze(v))

    def __len__(self) -> int:
        return self.rho_values.size


@dataclass(frozen=True)
class HullResult:
    """Upper concave envelope of a curve on its own grid.

    hull_values dominate the input, are concave on the grid, and agree with
    the input exactly at every vertex; ``touching`` marks grid points where
    the envelope coincides with the input within HULL_TOUCH_TOL.
    """

    hull_values: np.ndarray
    vertex_indices: np.ndarray
    touching: np.ndarray

    def interpolate(self, curve: ExponentCurve, rho: float) -> float:
        """Envelope value at an off-grid rho (linear between grid points)."""
        return float(np.interp(rho, curve.rho_values, self.hull_values))


def _upper_hull(x, v) -> tuple[np.ndarray, list[int]]:
    """Monotone-chain upper hull over sorted samples; returns the hull
    values on the grid and the vertex indices.  Operates on plain lists
    internally (hot path)."""
    xs = x.tolist() if isinstance(x, np.ndarray) else list(x)
    vs = v.tolist() if isinstance(v, np.ndarray) else list(v)
    n = len(xs)
    stack = [0]
    for i in range(1, n):
        xi, vi = xs[i], vs[i]
        while len(stack) >= 2:
            a, b = stack[-2], stack[-1]
            # pop b when it lies on or below the chord a -> i
            if (xs[b] - xs[a]) * (vi - vs[a]) - (vs[b] - vs[a]) * (xi - xs[a]) >= 0.0:
                stack.pop()
            else:
                break
        stack.append(i)

    xa = np.asarray(x, dtype=float)
    va = np.asarray(v, dtype=float)
    verts = np.asarray(stack, dtype=int)
    hull = np.interp(xa, xa[verts], va[verts])
    hull[verts] = va[verts]  # envelope equals the input exactly at vertices
    return hull, stack


def upper_concave_envelope(curve: ExponentCurve) -> HullResult:
    """Monotone-chain upper hull of the sampled points, linearly interpolated
    between consecutive vertices.

    A concave input is returned unchanged (every point is a vertex)."""
    if len(curve) < 2:
        raise ValidationError("envelope needs at least 2 points")
    hull, stack = _upper_hull(curve.rho_values, curve.values)
    vertices = np.asarray(stack, dtype=int)
    touching = np.abs(hull - curve.values) <= HULL_TOUCH_TOL
    touching[vertices] = True
    return HullResult(_freeze(hull), _freeze(vertices), _freeze(touching))


@dataclass(frozen=True)
class SupResult:
    """Grid supremum of envelope(rho) - t * source_exponent(rho)."""

    value: float
    rho_star: float
    argmax_index: int
    boundary_attained: bool
    is_infinite: bool
    needs_extension: bool


def objective_values(
    hull: HullResult, curve: ExponentCurve, problem: ProblemSpec
) -> np.ndarray:
    """envelope(rho) - t * source_exponent(rho) on the curve's grid."""
    es = np.array([source_exponent(r, problem.source) for r in curve.rho_values])
    return hull.hull_values - problem.rate_t * es


def grid_supremum(
    objective: np.ndarray,
    rho_values: np.ndarray,
    problem: ProblemSpec,
    *,
    curve_growth_rate: float | None = None,
    top_fraction: float = 0.01,
) -> SupResult:
    """Maximize a sampled objective over its rho grid.

    Ties break toward smaller rho.  When the asymptotic growth rate of the
    underlying curve is supplied and exceeds t * log(source support), the
    objective increases without bound and the result is +inf (zero-error
    regime).  Otherwise an argmax inside the top ``top_fraction`` of the
    grid is flagged ``needs_extension`` so the caller can enlarge rho_max;
    a caller that cannot extend any further should treat the value as
    boundary-attained.

    Emits GridTooCoarseWarning when the objective differs from either
    neighbor of the argmax by more than 1e-6.
    """
    obj = np.asarray(objective, dtype=float)
    n = obj.size
    i_star = int(np.argmax(obj))

    if curve_growth_rate is not None:
        slope_inf = curve_growth_rate - problem.rate_t * math.log(problem.source.support_size)
        if slope_inf > 0.0:
            return SupResult(math.inf, math.inf, n - 1, True, True, False)

    gap = 0.0
    if i_star > 0:
        gap = max(gap, abs(obj[i_star] - obj[i_star - 1]))
    if i_star < n - 1:
        gap = max(gap, abs(obj[i_star] - obj[i_star + 1]))
    if gap > 1e-6:
        warnings.warn(
            f"objective argmax neighbors differ by {gap:.3e}; "
            "consider a denser rho grid",
            GridTooCoarseWarning,
            stacklevel=2,
        )

    top_band = max(1, int(math.ceil(n * top_fraction)))
    near_top = i_star >= n - top_band
    return SupResult(
        value=float(obj[i_star]),
        rho_star=float(rho_values[i_star]),
        argmax_index=i_star,
        boundary_attained=near_top,
        is_infinite=False,
        needs_extension=near_top,
    )


def sup_objective(
    hull: HullResult,
    curve: ExponentCurve,
    problem: ProblemSpec,
    *,
    curve_growth_rate: float | None = None,
    top_fraction: float = 0.01,
) -> SupResult:
    """Maximize envelope(rho) - t * source_exponent(rho) over the grid.

    See grid_supremum for tie-breaking, the zero-error slope test and the
    boundary/extension flags."""
    return grid_supremum(
        objective_values(hull, curve, problem),
        curve.rho_values,
        problem,
        curve_growth_rate=curve_growth_rate,
        top_fraction=top_fraction,
    )


def golden_section_max(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 200):
    """Golden-section search for a maximum of a unimodal f on [a, b].

    Returns the best (x, f(x)) among all evaluated points, endpoints
    included, so the result is a valid lower bound even when f is not
    exactly unimodal.
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    if b < a:
        a, b = b, a
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb > best_f:
        best_x, best_f = b, fb

    h = b - a
    if h <= tol:
        return best_x, best_f
    c = b - inv_phi * h
    d = a + inv_phi * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if fc > best_f:
            best_x, best_f = c, fc
        if fd > best_f:
            best_x, best_f = d, fd
        if h <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - inv_phi * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + inv_phi * h
            fd = f(d)
    return best_x, best_f
