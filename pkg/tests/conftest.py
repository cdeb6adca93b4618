import numpy as np
import pytest

import jsccexp as jx

FIG_ROWS = [
    [0.9998, 0.0001, 0.0001],
    [0.0001, 0.9998, 0.0001],
    [0.1000, 0.1000, 0.8000],
]


@pytest.fixture(scope="session")
def fig_channel():
    return jx.ChannelSpec(FIG_ROWS)


@pytest.fixture(scope="session")
def fig_db(fig_channel):
    return jx.bhattacharyya_matrix(fig_channel)


@pytest.fixture(scope="session")
def skewed_source():
    return jx.SourceSpec([0.025, 0.975])


@pytest.fixture(scope="session")
def fig1_problem(fig_channel, skewed_source):
    return jx.ProblemSpec(fig_channel, skewed_source, 0.75)


@pytest.fixture(scope="session")
def fig_pair():
    return jx.DistributionSet(([0.4, 0.4, 0.2], [0.5, 0.5, 0.0]))


@pytest.fixture(scope="session")
def q1(fig_pair):
    return fig_pair.members[0]


@pytest.fixture(scope="session")
def q2(fig_pair):
    return fig_pair.members[1]


def normalized(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return v / v.sum()
