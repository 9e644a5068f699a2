from fractions import Fraction as F

import pytest

from bellforge import RelaxationParams, build_inequality, pd_conditional_vertices


@pytest.fixture(scope="session")
def pd_quarter():
    return pd_conditional_vertices(F(1, 4), F(1, 4))


@pytest.fixture(scope="session")
def deterministic():
    return pd_conditional_vertices(0, 0)


@pytest.fixture(scope="session")
def pd_facet_quarter():
    e = F(1, 4)
    return build_inequality("pd_facet", RelaxationParams(epsA=e, epsB=e))
