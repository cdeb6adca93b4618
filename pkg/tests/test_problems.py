"""Domain-object validation and renormalization behavior."""

import numpy as np
import pytest

import jsccexp as jx
from conftest import FIG_ROWS


def test_fig_problem_accepted(fig1_problem):
    assert jx.validate_problem(fig1_problem) is fig1_problem


def test_non_stochastic_row_rejected():
    with pytest.raises(jx.NonStochasticRow):
        jx.ChannelSpec([[0.5, 0.6], [0.5, 0.5]])


def test_identity_channel_accepted():
    problem = jx.ProblemSpec(jx.ChannelSpec([[1.0, 0.0], [0.0, 1.0]]),
                             jx.SourceSpec([0.5, 0.5]), 1.0)
    assert jx.validate_problem(problem) is problem


def test_negative_entries_rejected():
    with pytest.raises(jx.NonStochasticRow):
        jx.SourceSpec([-0.1, 1.1])


def test_renormalization_within_tolerance():
    src = jx.SourceSpec([0.3, 0.7 + 3e-10])
    assert np.isclose(src.pmf.sum(), 1.0, atol=1e-15)
    # idempotent: validating the renormalized pmf leaves it unchanged
    again = jx.SourceSpec(src.pmf)
    np.testing.assert_array_equal(again.pmf, src.pmf)


def test_renormalization_rejected_beyond_tolerance():
    with pytest.raises(jx.NonStochasticRow):
        jx.SourceSpec([0.3, 0.7 + 1e-6])


def test_rate_must_be_positive(fig_channel, skewed_source):
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(jx.NonPositiveRate):
            jx.ProblemSpec(fig_channel, skewed_source, bad)


def test_ragged_channel_rejected():
    with pytest.raises(jx.ValidationError):
        jx.ChannelSpec([[0.5, 0.5], [1.0]])


def test_distribution_channel_pairing(fig_channel):
    with pytest.raises(jx.DimensionMismatch):
        jx.check_distribution(fig_channel, jx.InputDistribution([0.5, 0.5]))
    q = jx.InputDistribution([0.2, 0.3, 0.5])
    assert jx.check_distribution(fig_channel, q) is q


def test_distribution_set_invariants():
    with pytest.raises(jx.ValidationError):
        jx.DistributionSet(())
    with pytest.raises(jx.DimensionMismatch):
        jx.DistributionSet(([0.5, 0.5], [0.2, 0.3, 0.5]))
    dset = jx.DistributionSet(([0.5, 0.5], [1.0, 0.0]))
    assert len(dset) == 2 and dset.num_inputs == 2


def test_zero_atoms_are_legal():
    q = jx.InputDistribution([0.5, 0.5, 0.0])
    assert q.pmf[2] == 0.0
    src = jx.SourceSpec([1.0, 0.0])
    assert src.support_size == 1


def test_rho_grid_invariants():
    grid = jx.RhoGrid()
    v = grid.values()
    assert v[0] == 1.0 and v[-1] == 100.0 and v.size == 2000
    assert np.all(np.diff(v) > 0)
    lin = jx.RhoGrid(1.0, 10.0, 50, "linear").values()
    assert np.allclose(np.diff(lin), lin[1] - lin[0])
    with pytest.raises(jx.ValidationError):
        jx.RhoGrid(rho_min=0.5)
    with pytest.raises(jx.ValidationError):
        jx.RhoGrid(rho_max=0.5)
    with pytest.raises(jx.ValidationError):
        jx.RhoGrid(num_points=1)
    with pytest.raises(jx.ValidationError):
        jx.RhoGrid(spacing="log")


def test_specs_are_immutable(fig_channel):
    with pytest.raises(ValueError):
        fig_channel.rows[0, 0] = 0.5
