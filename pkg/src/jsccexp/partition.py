"""Two-class source partition by a probability threshold, and exact
finite-length per-class source exponents via type enumeration.

Class 1 collects the low-probability sequences P^k(v) <= gamma^k (ties go
to class 1), class 2 the rest.  All per-sequence probabilities are handled
in the log domain and multinomial counts via log-gamma, since sequence
lengths up to 60 overflow direct counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lgamma

import numpy as np

from .kernel import source_exponent
from .problems import ProblemSpec, SourceSpec, ValidationError

INF = math.inf

# ceiling on the number of type classes a single enumeration may touch
MAX_TYPE_CLASSES = 200_000


class AlphabetMismatch(ValidationError):
    """A sequence symbol falls outside the source alphabet."""


class DegenerateSlope(ValidationError):
    """The two bracketing rho values coincide; no chord slope exists."""


class EnumerationBudgetExceeded(RuntimeError):
    """Type enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class PartitionSpec:
    """Threshold partition: class 1 iff P^k(v) <= gamma^k."""

    gamma: float
    k: int

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValidationError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.k < 1:
            raise ValidationError(f"sequence length k must be >= 1, got {self.k}")

    @property
    def log_gamma(self) -> float:
        return -INF if self.gamma == 0.0 else math.log(self.gamma)


@dataclass(frozen=True)
class TypeClassRecord:
    """One source type class: composition counts, log multinomial size,
    per-sequence log probability, empirical entropy and partition class."""

    counts: tuple[int, ...]
    log_count: float
    log_prob_per_seq: float
    entropy: float
    class_id: int


def _compositions(total: int, parts: int):
    """All integer compositions of `total` into `parts` nonnegative parts."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _num_compositions(total: int, parts: int) -> int:
    return math.comb(total + parts - 1, parts - 1)


def enumerate_type_records(partition: PartitionSpec, source: SourceSpec) -> list[TypeClassRecord]:
    """All type classes of length-k sequences, classified by the partition."""
    k = partition.k
    m = source.num_symbols
    if _num_compositions(k, m) > MAX_TYPE_CLASSES:
        raise EnumerationBudgetExceeded(
            f"{_num_compositions(k, m)} type classes for k={k}, |V|={m} "
            f"exceeds the budget of {MAX_TYPE_CLASSES}"
        )
    logp = [math.log(p) if p > 0.0 else -INF for p in source.pmf.tolist()]
    log_gamma_k = k * partition.log_gamma
    lg_k = lgamma(k + 1)
    records = []
    for counts in _compositions(k, m):
        log_count = lg_k - math.fsum(lgamma(c + 1) for c in counts)
        log_prob = math.fsum(c * lp for c, lp in zip(counts, logp) if c > 0)
        if any(c > 0 and lp == -INF for c, lp in zip(counts, logp)):
            log_prob = -INF
        entropy = -math.fsum(
            (c / k) * math.log(c / k) for c in counts if c > 0
        )
        class_id = 1 if log_prob <= log_gamma_k else 2
        records.append(TypeClassRecord(counts, log_count, log_prob, max(0.0, entropy), class_id))
    return records


def classify_sequence(seq, partition: PartitionSpec, source: SourceSpec) -> int:
    """Partition class of one source sequence; depends on it only through
    its type."""
    seq = list(seq)
    if len(seq) != partition.k:
        raise ValidationError(
            f"sequence length {len(seq)} does not match partition k={partition.k}"
        )
    m = source.num_symbols
    logp = 0.0
    for s in seq:
        if not 0 <= int(s) < m or int(s) != s:
            raise AlphabetMismatch(f"symbol {s!r} outside alphabet of size {m}")
        p = source.pmf[int(s)]
        if p == 0.0:
            logp = -INF
            break
        logp += math.log(p)
    return 1 if logp <= partition.k * partition.log_gamma else 2


def equalizing_gamma(
    ex1: float,
    rho1: float,
    ex2: float,
    rho2: float,
    rho0: float,
    problem: ProblemSpec,
) -> tuple[float, float]:
    """Threshold that balances the two per-class terms of the union bound.

    Solves t (E_s(rho0) - log g) / (1 + rho0) = (ex2 - ex1) / (rho2 - rho1)
    for g, and returns (g, min(1, g)).  ex1/ex2 are the set-max exponent
    values at the bracketing rho1 < rho2 around rho0.
    """
    if rho2 - rho1 < 1e-12:
        raise DegenerateSlope(
            f"rho2 - rho1 = {rho2 - rho1!r}; use the single-rho path instead"
        )
    if not (rho1 <= rho0 <= rho2):
        raise ValidationError("need rho1 <= rho0 <= rho2")
    slope = (ex2 - ex1) / (rho2 - rho1)
    es0 = source_exponent(rho0, problem.source)
    log_gp = es0 - (1.0 + rho0) * slope / problem.rate_t
    gamma_prime = math.exp(log_gp) if log_gp < 700.0 else INF
    return gamma_prime, min(1.0, gamma_prime)


def affine_source_bound(rho: float, rho0: float, gamma: float, source: SourceSpec) -> float:
    """Affine-in-rho bound through (rho0, E_s(rho0)) with slope
    (E_s(rho0) - log gamma) / (1 + rho0), in nats per source symbol.

    gamma = 0 is the infinite-slope sentinel: +inf right of rho0, -inf left
    of it, E_s(rho0) at rho0 exactly.
    """
    es0 = source_exponent(rho0, source)
    if rho == rho0:
        return es0
    if gamma == 0.0:
        return INF if rho > rho0 else -INF
    slope = (es0 - math.log(gamma)) / (1.0 + rho0)
    return es0 + slope * (rho - rho0)


def class_source_bound(
    class_id: int, rho: float, rho0: float, gamma_prime: float, source: SourceSpec
) -> float:
    """Piecewise upper bound on the per-symbol class source exponent.

    Class 1 follows the plain source exponent above rho0 and the affine
    bound at or below it; class 2 is mirrored.
    """
    if class_id == 1:
        if rho > rho0:
            return source_exponent(rho, source)
        return affine_source_bound(rho, rho0, gamma_prime, source)
    if class_id == 2:
        if rho < rho0:
            return source_exponent(rho, source)
        return affine_source_bound(rho, rho0, gamma_prime, source)
    raise ValidationError(f"class_id must be 1 or 2, got {class_id}")


def _logsumexp(values) -> float:
    vals = [v for v in values if v != -INF]
    if not vals:
        return -INF
    m = max(vals)
    if m == INF:
        return INF
    return m + math.log(math.fsum(math.exp(v - m) for v in vals))


def class_source_exponent_exact(
    class_id: int,
    rho: float,
    partition: PartitionSpec,
    source: SourceSpec,
    records: list[TypeClassRecord] | None = None,
) -> float:
    """Exact (1+rho) log sum over the class of P^k(v)^(1/(1+rho)), by type
    enumeration; -inf for an empty class.

    Pass `records` to reuse one enumeration across many rho values.
    """
    if class_id not in (1, 2):
        raise ValidationError(f"class_id must be 1 or 2, got {class_id}")
    if rho < 0.0:
        raise ValidationError(f"need rho >= 0, got {rho}")
    if records is None:
        records = enumerate_type_records(partition, source)
    a = 1.0 / (1.0 + rho)
    lse = _logsumexp(
        r.log_count + a * r.log_prob_per_seq
        for r in records
        if r.class_id == class_id and r.log_prob_per_seq != -INF
    )
    return -INF if lse == -INF else (1.0 + rho) * lse


def two_class_error_bound(
    dset,
    rho_by_class: tuple[float, float],
    partition: PartitionSpec,
    problem: ProblemSpec,
    db,
) -> dict:
    """Finite-k union bound diagnostic: per-class exponent terms
    -n E'(Q_c, set, rho_c) + E_s^(c)(rho_c, P^k) and the combined bound,
    reported as an exponent per channel use (n = k / t).

    Diagnostic only; it evaluates the bound for a given threshold partition
    and does not optimize anything.
    """
    from .kernel import min_cross_exponent

    if len(dset) != 2:
        raise ValidationError("diagnostic expects a two-member distribution set")
    n = partition.k / problem.rate_t
    records = enumerate_type_records(partition, problem.source)
    terms = []
    for c in (1, 2):
        exc = min_cross_exponent(dset.members[c - 1], dset, rho_by_class[c - 1], db)
        esc = class_source_exponent_exact(c, rho_by_class[c - 1], partition, problem.source, records)
        terms.append(-n * exc + esc if esc != -INF else -INF)
    total = _logsumexp(terms)
    return {
        "class_terms": tuple(terms),
        "log_error_bound": total,
        "bound_exponent": INF if total == -INF else -total / n,
    }


def dump_type_records_csv(records: list[TypeClassRecord], path) -> None:
    """Write the type-class table as CSV (counts joined by ';')."""
    with open(path, "w", newline="\n") as fh:
        fh.write("counts,log_count,log_prob_per_seq,entropy,class_id\n")
        for r in records:
            counts = ";".join(str(c) for c in r.counts)
            fh.write(
                f"{counts},{r.log_count:.17g},{r.log_prob_per_seq:.17g},"
                f"{r.entropy:.17g},{r.class_id}\n"
            )
