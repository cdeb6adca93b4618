"""Validated domain objects shared by the whole toolkit.

A problem instance is a discrete memoryless source, a discrete memoryless
channel and a transmission rate (source symbols per channel use).  All
probability vectors are validated on construction and frozen; downstream
code may share them freely across threads.

All logarithms in this package are natural and every exponent is reported
in nats per channel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# A vector whose sum is within STRICT_TOL of 1 is accepted as-is; within
# RENORM_TOL it is renormalized (file-format rounding); beyond that it is
# rejected as a genuine error.
STRICT_TOL = 1e-12
RENORM_TOL = 1e-9


class ValidationError(ValueError):
    """A domain object violates one of its invariants."""


class NonStochasticRow(ValidationError):
    """A probability vector is off stochastic by more than the renormalizable tolerance."""


class DimensionMismatch(ValidationError):
    """Paired objects disagree on alphabet size."""


class NonPositiveRate(ValidationError):
    """The transmission rate must be strictly positive."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _prob_vector(values, what: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError(f"{what}: expected a nonempty 1-D probability vector")
    if not np.all(np.isfinite(v)):
        raise NonStochasticRow(f"{what}: entries must be finite")
    if np.any(v < 0.0) or np.any(v > 1.0 + RENORM_TOL):
        raise NonStochasticRow(f"{what}: entries must lie in [0, 1]")
    s = math.fsum(v.tolist())
    if abs(s - 1.0) <= STRICT_TOL:
        return _freeze(v.copy())
    if abs(s - 1.0) <= RENORM_TOL:
        return _freeze(v / s)
    raise NonStochasticRow(f"{what}: sums to {s!r}, off from 1 by more than {RENORM_TOL}")


@dataclass(frozen=True)
class ChannelSpec:
    """Row-stochastic transition matrix of a discrete memoryless channel."""

    rows: np.ndarray

    def __post_init__(self):
        rows = self.rows
        if not isinstance(rows, np.ndarray) or rows.dtype != float:
            try:
                rows = np.asarray(
                    [list(r) for r in rows] if not isinstance(rows, np.ndarray) else rows,
                    dtype=float,
                )
            except ValueError as exc:
                raise DimensionMismatch(f"channel: ragged transition matrix ({exc})") from exc
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise ValidationError("channel: expected a 2-D transition matrix")
        rows = np.vstack([_prob_vector(r, f"channel row {i}") for i, r in enumerate(rows)])
        object.__setattr__(self, "rows", _freeze(rows))

    @property
    def num_inputs(self) -> int:
        return self.rows.shape[0]

    @property
    def num_outputs(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class SourceSpec:
    """Probability mass function of a discrete memoryless source."""

    pmf: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pmf", _prob_vector(self.pmf, "source pmf"))

    @property
    def num_symbols(self) -> int:
        return self.pmf.size

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.pmf))


@dataclass(frozen=True)
class InputDistribution:
    """Probability mass function over the channel input alphabet.

    Zero entries are legal; all kernel functions handle log 0 = -inf and
    0 * exp(-inf) = 0 explicitly.
    """

    pmf: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pmf", _prob_vector(self.pmf, "input distribution"))

    @property
    def num_inputs(self) -> int:
        return self.pmf.size

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(self.pmf.tolist())


@dataclass(frozen=True)
class DistributionSet:
    """Ordered set of input distributions sharing one alphabet."""

    members: tuple[InputDistribution, ...]

    def __post_init__(self):
        members = tuple(
            m if isinstance(m, InputDistribution) else InputDistribution(m)
            for m in self.members
        )
        if len(members) < 1:
            raise ValidationError("distribution set: needs at least one member")
        sizes = {m.num_inputs for m in members}
        if len(sizes) != 1:
            raise DimensionMismatch(f"distribution set: mixed alphabet sizes {sorted(sizes)}")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def num_inputs(self) -> int:
        return self.members[0].num_inputs


@dataclass(frozen=True)
class ProblemSpec:
    """Source, channel and transmission rate t = k/n (source symbols per channel use)."""

    channel: ChannelSpec
    source: SourceSpec
    rate_t: float

    def __post_init__(self):
        if not isinstance(self.channel, ChannelSpec):
            object.__setattr__(self, "channel", ChannelSpec(self.channel))
        if not isinstance(self.source, SourceSpec):
            object.__setattr__(self, "source", SourceSpec(self.source))
        t = float(self.rate_t)
        if not math.isfinite(t) or t <= 0.0:
            raise NonPositiveRate(f"rate_t must be a positive real, got {self.rate_t!r}")
        object.__setattr__(self, "rate_t", t)


@dataclass(frozen=True)
class RhoGrid:
    """Evaluation grid over [rho_min, rho_max] used to discretize sup over rho >= 1."""

    rho_min: float = 1.0
    rho_max: float = 100.0
    num_points: int = 2000
    spacing: str = "geometric"

    def __post_init__(self):
        if self.rho_min < 1.0:
            raise ValidationError("rho grid: rho_min must be >= 1 for expurgated functions")
        if not self.rho_max > self.rho_min:
            raise ValidationError("rho grid: rho_max must exceed rho_min")
        if self.num_points < 2:
            raise ValidationError("rho grid: need at least 2 points")
        if self.spacing not in ("geometric", "linear"):
            raise ValidationError(f"rho grid: unknown spacing {self.spacing!r}")

    def values(self) -> np.ndarray:
        if self.spacing == "geometric":
            v = np.geomspace(self.rho_min, self.rho_max, self.num_points)
        else:
            v = np.linspace(self.rho_min, self.rho_max, self.num_points)
        # guard against rounding at the endpoints of geomspace
        v[0], v[-1] = self.rho_min, self.rho_max
        return _freeze(v)

    def with_rho_max(self, rho_max: float) -> "RhoGrid":
        return RhoGrid(self.rho_min, rho_max, self.num_points, self.spacing)


def check_distribution(channel: ChannelSpec, q: InputDistribution) -> InputDistribution:
    """Raise DimensionMismatch unless q lives on the channel's input alphabet."""
    if q.num_inputs != channel.num_inputs:
        raise DimensionMismatch(
            f"input distribution has {q.num_inputs} entries, channel has "
            f"{channel.num_inputs} inputs"
        )
    return q


def validate_problem(problem: ProblemSpec) -> ProblemSpec:
    """Return the problem iff every type invariant holds.

    Construction already validates; this re-checks an instance that may have
    been built from raw arrays and is idempotent on validated specs.
    """
    if not isinstance(problem, ProblemSpec):
        raise ValidationError("expected a ProblemSpec")
    rows = problem.channel.rows
    row_sums = [math.fsum(r.tolist()) for r in rows]
    for i, s in enumerate(row_sums):
        if abs(s - 1.0) > RENORM_TOL:
            raise NonStochasticRow(f"channel row {i}: sums to {s!r}")
    if abs(math.fsum(problem.source.pmf.tolist()) - 1.0) > RENORM_TOL:
        raise NonStochasticRow("source pmf does not sum to 1")
    if problem.rate_t <= 0:
        raise NonPositiveRate("rate_t must be positive")
    return problem
