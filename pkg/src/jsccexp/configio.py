"""Problem-instance config files.

One TOML file describes a whole problem instance:

    [channel]
    rows = [[0.9998, 0.0001, 0.0001],
            [0.0001, 0.9998, 0.0001],
            [0.1,    0.1,    0.8]]

    [source]
    pmf = [0.025, 0.975]

    [problem]
    rate_t = 0.75

    [distributions]            # optional fixed codeword distributions
    members = [[0.4, 0.4, 0.2],
               [0.5, 0.5, 0.0]]

    [grid]                     # optional, defaults shown
    rho_min = 1.0
    rho_max = 100.0
    num_points = 2000
    spacing = "geometric"      # or "linear"

    [solver]                   # optional
    starts = 16
    seed = 0
    lattice_step = 0.05
    value_tol = 1e-8
    coord_tol = 1e-6

    [baseline]                 # optional
    enabled = true
    num_points = 256

Errors carry the config path and, where the offending key can be located
in the raw text, its line number.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .problems import (
    ChannelSpec,
    DistributionSet,
    InputDistribution,
    ProblemSpec,
    RhoGrid,
    SourceSpec,
    ValidationError,
    check_distribution,
    validate_problem,
)
from .solver import SolverConfig

_KNOWN = {
    "channel": {"rows"},
    "source": {"pmf"},
    "problem": {"rate_t"},
    "distributions": {"members"},
    "grid": {"rho_min", "rho_max", "num_points", "spacing"},
    "solver": {"starts", "seed", "lattice_step", "value_tol", "coord_tol",
               "nm_max_iter", "golden_tol", "rho_max_cap", "baseline_points"},
    "baseline": {"enabled", "num_points"},
}


class ConfigError(ValueError):
    """A config file is unreadable, malformed or semantically invalid."""

    def __init__(self, path, message: str, line: int | None = None):
        self.path = str(path)
        self.line = line
        anchor = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{anchor}: {message}")


@dataclass(frozen=True)
class ConfigBundle:
    """Everything a CLI command needs for one problem instance."""

    problem: ProblemSpec
    distributions: DistributionSet | None
    grid: RhoGrid
    solver: SolverConfig
    baseline_enabled: bool
    baseline_points: int
    path: str


def _locate(text: str, section: str, key: str | None = None) -> int | None:
    """Line number (1-based) of a key inside a [section], or of the section."""
    in_section = False
    section_line = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"^\[([^\]]+)\]", stripped)
        if m:
            in_section = m.group(1).strip() == section
            if in_section:
                section_line = lineno
                if key is None:
                    return lineno
            continue
        if in_section and key is not None and re.match(rf"^{re.escape(key)}\s*=", stripped):
            return lineno
    return section_line


def load_config(path) -> ConfigBundle:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(path, f"cannot read config: {exc}") from exc
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = None
        m = re.search(r"at line (\d+)", str(exc))
        if m:
            line = int(m.group(1))
        raise ConfigError(path, f"TOML parse error: {exc}", line) from exc

    def fail(section: str, key: str | None, message: str):
        raise ConfigError(path, message, _locate(text, section, key))

    for section, table in data.items():
        if section not in _KNOWN:
            fail(section, None, f"unknown section [{section}]")
        if not isinstance(table, dict):
            fail(section, None, f"[{section}] must be a table")
        for key in table:
            if key not in _KNOWN[section]:
                fail(section, key, f"unknown key {key!r} in [{section}]")

    for required in ("channel", "source", "problem"):
        if required not in data:
            raise ConfigError(path, f"missing required section [{required}]")

    def need(section: str, key: str):
        if key not in data[section]:
            fail(section, None, f"[{section}] is missing required key {key!r}")
        return data[section][key]

    try:
        channel = ChannelSpec(need("channel", "rows"))
    except ValidationError as exc:
        fail("channel", "rows", str(exc))
    try:
        source = SourceSpec(need("source", "pmf"))
    except ValidationError as exc:
        fail("source", "pmf", str(exc))
    try:
        problem = validate_problem(ProblemSpec(channel, source, need("problem", "rate_t")))
    except ValidationError as exc:
        fail("problem", "rate_t", str(exc))

    distributions = None
    if "distributions" in data:
        members = need("distributions", "members")
        try:
            dists = tuple(InputDistribution(m) for m in members)
            for q in dists:
                check_distribution(channel, q)
            distributions = DistributionSet(dists)
        except (ValidationError, TypeError) as exc:
            fail("distributions", "members", str(exc))

    grid_kwargs = dict(data.get("grid", {}))
    try:
        grid = RhoGrid(**grid_kwargs)
    except (ValidationError, TypeError) as exc:
        fail("grid", next(iter(grid_kwargs), None), str(exc))

    solver_kwargs = dict(data.get("solver", {}))
    try:
        solver = SolverConfig(**solver_kwargs)
        if solver.starts < 1 or solver.lattice_step <= 0:
            raise ValidationError("solver: starts must be >= 1 and lattice_step > 0")
    except (ValidationError, TypeError) as exc:
        fail("solver", next(iter(solver_kwargs), None), str(exc))

    baseline_tbl = data.get("baseline", {})
    enabled = bool(baseline_tbl.get("enabled", True))
    points = int(baseline_tbl.get("num_points", solver.baseline_points))
    if points < 2:
        fail("baseline", "num_points", "baseline num_points must be >= 2")

    return ConfigBundle(problem, distributions, grid, solver, enabled, points, str(path))


def override_bundle(bundle: ConfigBundle, *, rho_max=None, grid_points=None,
                    value_tol=None, starts=None, seed=None) -> ConfigBundle:
    """Apply CLI flag overrides on top of a loaded config."""
    grid = bundle.grid
    if rho_max is not None:
        grid = RhoGrid(grid.rho_min, float(rho_max), grid.num_points, grid.spacing)
    if grid_points is not None:
        grid = RhoGrid(grid.rho_min, grid.rho_max, int(grid_points), grid.spacing)
    solver = bundle.solver
    updates = {}
    if value_tol is not None:
        updates["value_tol"] = float(value_tol)
    if starts is not None:
        updates["starts"] = int(starts)
    if seed is not None:
        updates["seed"] = int(seed)
    if updates:
        solver = dataclasses.replace(solver, **updates)
    return dataclasses.replace(bundle, grid=grid, solver=solver)
