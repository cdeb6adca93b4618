"""Randomized property suites with independent oracles.

Each suite checks one family of guarantees against a brute-force or
structural oracle and reports per-case pass/fail counts plus the first
counterexample found.  The oracles here are deliberately separate from the
implementations they check (e.g. the envelope oracle is the quadratic
pairwise-chord supremum, not the monotone chain).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .envelope import ExponentCurve, GridTooCoarseWarning, upper_concave_envelope
from .kernel import (
    bhattacharyya_matrix,
    cross_exponent,
    expurgated_exponent,
    min_cross_exponent,
    source_exponent,
)
from .partition import (
    PartitionSpec,
    class_source_bound,
    class_source_exponent_exact,
    enumerate_type_records,
)
from .problems import (
    ChannelSpec,
    DistributionSet,
    InputDistribution,
    ProblemSpec,
    RhoGrid,
    SourceSpec,
)
from .solver import SolverConfig, max_over_q, single_class_exponent, two_class_exponent_optimal

INF = math.inf


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, counterexample: dict | None = None):
        self.total += 1
        if ok:
            self.passed += 1
        elif counterexample is not None:
            self.failures.append(counterexample)

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        return f"[{status}] {self.name}: {self.passed}/{self.total}"


def pairwise_chord_envelope(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Quadratic-pair oracle for the upper concave envelope: at each grid
    point, the supremum over all bracketing chords of sampled points."""
    n = x.size
    out = np.array(v, dtype=float)
    for i in range(n):
        xa, va = x[: i + 1], v[: i + 1]
        xb, vb = x[i:], v[i:]
        denom = xb[None, :] - xa[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(denom > 0.0, (x[i] - xa[:, None]) / denom, 0.0)
        chords = va[:, None] + lam * (vb[None, :] - va[:, None])
        out[i] = max(out[i], float(np.max(chords)))
    return out


def _random_curve(rng: np.random.Generator) -> ExponentCurve:
    n = int(rng.integers(5, 200))
    kind = int(rng.integers(0, 3))
    x = np.sort(rng.uniform(1.0, 50.0, size=n))
    x += np.arange(n) * 1e-9  # enforce strict increase under duplicates
    if kind == 0:
        v = rng.normal(size=n)
    elif kind == 1:
        v = np.cumsum(rng.normal(size=n)) * 0.3
    else:
        v = -((x - rng.uniform(5, 40)) ** 2) * 0.01 + rng.normal(scale=0.05, size=n)
    return ExponentCurve(x, v)


def suite_envelope(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Monotone-chain envelope vs the pairwise-chord oracle, plus dominance,
    concavity and idempotence on random curves."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("envelope-oracle")
    for case in range(cases):
        curve = _random_curve(rng)
        hull = upper_concave_envelope(curve)
        oracle = pairwise_chord_envelope(curve.rho_values, curve.values)
        scale = max(1.0, float(np.max(np.abs(curve.values))))
        ok_oracle = bool(np.max(np.abs(hull.hull_values - oracle)) <= 1e-10 * scale)
        ok_dom = bool(np.all(hull.hull_values >= curve.values - 1e-12))
        slopes = np.diff(hull.hull_values) / np.diff(curve.rho_values)
        ok_concave = bool(np.all(np.diff(slopes) <= 1e-9 * scale))
        again = upper_concave_envelope(ExponentCurve(curve.rho_values, hull.hull_values))
        ok_idem = bool(np.max(np.abs(again.hull_values - hull.hull_values)) <= 1e-12 * scale)
        ok = ok_oracle and ok_dom and ok_concave and ok_idem
        res.record(ok, None if ok else {
            "case": case,
            "rho": curve.rho_values.tolist(),
            "values": curve.values.tolist(),
            "oracle_match": ok_oracle, "dominance": ok_dom,
            "concavity": ok_concave, "idempotence": ok_idem,
        })
    return res


def random_problem(rng: np.random.Generator, max_inputs=4, max_outputs=4,
                   max_source=3) -> ProblemSpec:
    nx = int(rng.integers(2, max_inputs + 1))
    ny = int(rng.integers(2, max_outputs + 1))
    nv = int(rng.integers(2, max_source + 1))
    rows = rng.dirichlet(np.ones(ny), size=nx)
    pmf = rng.dirichlet(np.ones(nv))
    t = float(rng.uniform(0.1, 2.0))
    return ProblemSpec(ChannelSpec(rows), SourceSpec(pmf), t)


def suite_class_dominance(seed: int = 0, cases: int = 100) -> SuiteResult:
    """Optimal two-class exponent is never below optimal single-class, on
    randomized instances (structural guarantee via the seeded pair)."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("two-class-dominance")
    grid = RhoGrid(1.0, 50.0, 150)
    cfg = SolverConfig(starts=3, nm_max_iter=150, lattice_step=0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridTooCoarseWarning)
        for case in range(cases):
            problem = random_problem(rng)
            report = two_class_exponent_optimal(
                problem, grid, cfg, include_baseline=False
            )
            ok = report.two_class_value >= report.single_class_value - 1e-9
            res.record(ok, None if ok else {
                "case": case,
                "channel": problem.channel.rows.tolist(),
                "source": problem.source.pmf.tolist(),
                "rate_t": problem.rate_t,
                "single": report.single_class_value,
                "two": report.two_class_value,
            })
    return res


def suite_binary_uniform(seed: int = 0, cases: int = 50) -> SuiteResult:
    """For binary-input channels the uniform distribution maximizes the
    expurgated channel function at every rho."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("binary-input-uniform")
    cfg = SolverConfig(starts=8, nm_max_iter=300)
    for case in range(cases):
        ny = int(rng.integers(2, 5))
        rows = rng.dirichlet(np.ones(ny), size=2)
        db = bhattacharyya_matrix(ChannelSpec(rows))
        for rho in (1.0, 2.0, 5.0, 20.0):
            q, _ = max_over_q(rho, db, cfg)
            tv = 0.5 * float(np.abs(q.pmf - 0.5).sum())
            ok = tv <= 1e-4
            res.record(ok, None if ok else {
                "case": case, "rho": rho,
                "channel": rows.tolist(), "argmax": q.as_tuple(), "tv": tv,
            })
    return res


def suite_partition_bounds(seed: int = 0, cases: int | None = None) -> SuiteResult:
    """Exact finite-k per-class source exponents never exceed their
    piecewise bounds, and the two classes carry total probability 1.

    Sweep: k in {10, 20, 40}, rho on [1, 10], rho0 in {1, 2, 5},
    gamma' in {0.3, 0.7, 1.0}, binary sources."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("partition-class-bounds")
    sources = [SourceSpec([0.025, 0.975]), SourceSpec([0.2, 0.8])]
    sources.append(SourceSpec(rng.dirichlet(np.ones(2))))
    rho_grid = np.linspace(1.0, 10.0, 10)
    for source in sources:
        for k in (10, 20, 40):
            for gamma_prime in (0.3, 0.7, 1.0):
                part = PartitionSpec(min(1.0, gamma_prime), k)
                records = enumerate_type_records(part, source)
                mass = math.fsum(
                    math.exp(r.log_count + r.log_prob_per_seq)
                    for r in records
                    if r.log_prob_per_seq != -INF
                )
                res.record(abs(mass - 1.0) <= 1e-9, {
                    "check": "total-probability", "k": k,
                    "gamma": part.gamma, "mass": mass,
                } if abs(mass - 1.0) > 1e-9 else None)
                for rho0 in (1.0, 2.0, 5.0):
                    for rho in rho_grid:
                        for cls in (1, 2):
                            exact = class_source_exponent_exact(
                                cls, float(rho), part, source, records
                            )
                            bound = class_source_bound(
                                cls, float(rho), rho0, gamma_prime, source
                            )
                            slack = bound - (exact / k if exact != -INF else -INF)
                            ok = slack >= -1e-9
                            res.record(ok, None if ok else {
                                "check": "class-bound", "class": cls,
                                "k": k, "rho": float(rho), "rho0": rho0,
                                "gamma_prime": gamma_prime,
                                "pmf": source.pmf.tolist(),
                                "exact_per_symbol": exact / k,
                                "bound": bound,
                            })
    return res


def suite_kernel_limits(seed: int = 0, cases: int = 40) -> SuiteResult:
    """Asymptotic and shape checks of the kernel functions on random
    channels: the rho -> inf limit of the cross exponent, monotonicity and
    concavity in rho, the worst-case-vs-self dominance, and source-function
    convexity."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("kernel-limits")
    rho_grid = np.geomspace(1.0, 60.0, 24)
    for case in range(cases):
        nx = int(rng.integers(2, 5))
        ny = int(rng.integers(2, 5))
        rows = rng.dirichlet(np.ones(ny), size=nx)
        channel = ChannelSpec(rows)
        db = bhattacharyya_matrix(channel)
        qa = InputDistribution(rng.dirichlet(np.ones(nx)))
        qb = InputDistribution(rng.dirichlet(np.ones(nx)))

        limit = math.fsum(
            qa.pmf[x] * qb.pmf[xb] * db.dist[x, xb]
            for x in range(nx) for xb in range(nx)
        )
        got = cross_exponent(qa, qb, 1e6, db)
        ok_limit = limit == 0.0 or abs(got - limit) <= 1e-3 * max(1e-12, abs(limit))
        res.record(ok_limit, None if ok_limit else {
            "check": "rho-limit", "case": case, "limit": limit, "at_1e6": got,
        })

        vals = np.array([cross_exponent(qa, qa, float(r), db) for r in rho_grid])
        ok_mono = bool(np.all(np.diff(vals) >= -1e-10))
        res.record(ok_mono, None if ok_mono else {
            "check": "monotone", "case": case, "values": vals.tolist(),
        })
        chords_ok = True
        cross_vals = np.array([cross_exponent(qa, qb, float(r), db) for r in rho_grid])
        for i in range(1, len(rho_grid) - 1):
            lam = (rho_grid[i] - rho_grid[i - 1]) / (rho_grid[i + 1] - rho_grid[i - 1])
            chord = (1 - lam) * cross_vals[i - 1] + lam * cross_vals[i + 1]
            if cross_vals[i] < chord - 1e-9:
                chords_ok = False
        res.record(chords_ok, None if chords_ok else {
            "check": "concavity", "case": case, "values": cross_vals.tolist(),
        })

        dset = DistributionSet((qa, qb))
        ok_dom = all(
            min_cross_exponent(q, dset, float(r), db) <= expurgated_exponent(q, float(r), db)
            for q in dset for r in (1.0, 2.0, 7.0)
        )
        res.record(ok_dom, None if ok_dom else {"check": "set-dominance", "case": case})

        pmf = rng.dirichlet(np.ones(int(rng.integers(2, 4))))
        source = SourceSpec(pmf)
        es = np.array([source_exponent(float(r), source) for r in np.linspace(0, 8, 17)])
        ok_es = bool(np.all(np.diff(es) >= -1e-10) and np.all(np.diff(es, 2) >= -1e-10))
        res.record(ok_es, None if ok_es else {
            "check": "source-exponent-shape", "case": case, "pmf": pmf.tolist(),
        })
    return res


SUITES = {
    "envelope": suite_envelope,
    "dominance": suite_class_dominance,
    "binary-uniform": suite_binary_uniform,
    "partition-bounds": suite_partition_bounds,
    "limits": suite_kernel_limits,
}


def run_suites(names, seed: int = 0) -> list[SuiteResult]:
    return [SUITES[name](seed=seed) for name in names]
