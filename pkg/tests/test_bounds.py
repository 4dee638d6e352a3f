import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezetime.bounds import (
    REGIMES,
    RegimeQuery,
    alpha_grid,
    bound_exponent,
    protocol_exponent,
    saturation_table,
)
from squeezetime.errors import InvalidArgument

queries = st.builds(
    RegimeQuery,
    alpha=st.floats(0.0, 12.0),
    dim=st.integers(1, 3),
    gamma=st.floats(0.01, 1.0),
)


def q(alpha, d=1, gamma=1.0):
    return RegimeQuery(alpha, d, gamma)


# reference exponents at single points
def test_bound_examples():
    r = bound_exponent(q(4))
    assert (r.beta, r.regime) == (1, "linear-cone")
    r = bound_exponent(q(0.5))
    assert (r.beta, r.regime) == (-0.5, "vanishing-polynomial")
    r = bound_exponent(q(2.5, gamma=0.5))
    assert r.beta == pytest.approx(0.25) and r.correction == "sub-polynomial-epsilon"
    r = bound_exponent(q(1, gamma=0.5))
    assert r.beta == pytest.approx(-0.5) and r.correction == "log-factor"


def test_protocol_examples():
    assert protocol_exponent(q(4)).beta == 1
    r = protocol_exponent(q(0))
    assert r.beta == -1 and r.correction == "log-factor"
    r = protocol_exponent(q(1.8, gamma=0.5))
    assert r.regime == "logarithmic"
    assert r.kappa == pytest.approx(math.log(4) / math.log(2 / 1.8))
    assert r.saturating  # 1.8 > (2 - gamma) d = 1.5
    assert not protocol_exponent(q(1.2, gamma=0.5)).saturating


def test_saturation_examples():
    assert all(r.saturated for r in saturation_table(1, 1.0, [0.5, 1.5, 3.5]))
    (row,) = saturation_table(1, 0.5, [1.2])
    assert not row.saturated and row.open_region
    (row,) = saturation_table(1, 0.5, [3.0])
    assert row.saturated and row.beta_bound == pytest.approx(0.5) and row.beta_protocol == pytest.approx(0.5)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("gamma", [1.0, 0.5, 0.25])
def test_saturation_rule(d, gamma):
    grid = alpha_grid(0.05, 2 * d + 2, 0.05)
    for row in saturation_table(d, gamma, grid):
        expected = gamma == 1.0 or row.alpha > (2 - gamma) * d + 1e-12
        assert row.saturated == expected, row


@given(queries)
def test_result_invariants(query):
    for r in (bound_exponent(query), protocol_exponent(query)):
        assert r.regime in REGIMES
        if r.regime == "logarithmic":
            assert r.beta == 0
        if r.regime == "vanishing-polynomial":
            assert r.beta < 0


@given(queries)
def test_protocol_never_beats_bound(query):
    b, p = bound_exponent(query), protocol_exponent(query)
    assert p.flat_beta >= b.flat_beta - 1e-12


@given(st.integers(1, 3), st.floats(0.05, 1.0))
def test_bound_monotone_in_alpha(d, gamma):
    betas = [bound_exponent(RegimeQuery(a, d, gamma)).flat_beta for a in alpha_grid(0, 2 * d + 2, 0.01)]
    assert np.all(np.diff(betas) >= -1e-12)


def test_boundary_membership():
    # alpha = 2d + 1 sits in the long-range polynomial case, which equals gamma there
    r = bound_exponent(q(3.0, gamma=0.7))
    assert r.regime == "polynomial" and r.beta == pytest.approx(0.7)
    assert bound_exponent(q(1.5, gamma=0.5)).regime == "constant"
    assert bound_exponent(q(1.0)).regime == "inverse-logarithmic"
    assert protocol_exponent(q(2.0)).regime == "sub-polynomial-stretch"
    assert protocol_exponent(q(3.0)).regime == "linear-cone"


def test_validation():
    for bad in ((-0.1, 1, 1.0), (1.0, 0, 1.0), (1.0, 1, 0.0), (1.0, 1, 1.5), (math.nan, 1, 1.0), (1.0, 1.5, 1.0)):
        with pytest.raises(InvalidArgument):
            RegimeQuery(*bad)


def test_alpha_grid_hits_boundaries():
    grid = alpha_grid(0, 4, 0.1)
    assert grid.size == 41
    assert 1.5 in grid and 3.0 in grid and grid[-1] == 4.0
