import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezetime import oracle
from squeezetime.collective import build_collective, coherent_state
from squeezetime.errors import InvalidArgument
from squeezetime.qfi import (
    MixedState,
    TransverseCovariance,
    cramer_rao,
    fvc_upper_bound,
    mixture,
    optimal_qfi,
    qfi_mixed,
    qfi_pure,
    random_mixed_state,
    transverse_covariance,
    zeta_coefficient,
    zeta_gap,
)

nonneg = st.floats(0.0, 1e3, allow_nan=False)
# kept clear of underflow so the naive reference formula stays accurate
weights = st.one_of(st.just(0.0), st.floats(1e-100, 1e3))


def test_coherent_state_is_standard_quantum_limit():
    for n in (1, 10, 400):
        cov = transverse_covariance(coherent_state(n, "-x"), z2_symmetric=True)
        assert cov.syy == pytest.approx(n / 4) and cov.szz == pytest.approx(n / 4)
        best = optimal_qfi(cov)
        assert best.f_q == pytest.approx(n)
        assert best.theta_opt == 0.0


def test_ghz_heisenberg_limit():
    n = 6
    amp = np.zeros(n + 1, dtype=complex)
    amp[0] = amp[-1] = 1 / math.sqrt(2)
    assert qfi_pure(amp, build_collective("z", n)) == pytest.approx(n**2)
    assert oracle.qfi_bruteforce(oracle.ghz_state(n), oracle.collective_full("z", n)) == pytest.approx(n**2)


@given(nonneg, nonneg, st.floats(-1e3, 1e3))
def test_optimal_angle_maximises(syy, szz, cross):
    cov = TransverseCovariance(syy, szz, cross)
    best = optimal_qfi(cov)
    assert 0.0 <= best.theta_opt < math.pi
    assert cov.qfi_at(best.theta_opt) == pytest.approx(best.f_q, rel=1e-9, abs=1e-9)
    for theta in np.linspace(0, math.pi, 37):
        assert cov.qfi_at(theta) <= best.f_q * (1 + 1e-12) + 1e-9


def test_optimal_angle_simple_cases():
    assert optimal_qfi(TransverseCovariance(1, 3, 0)).theta_opt == pytest.approx(math.pi / 2)
    assert optimal_qfi(TransverseCovariance(3, 1, 0)).theta_opt == 0.0
    assert optimal_qfi(TransverseCovariance(1, 1, 2)).theta_opt == pytest.approx(math.pi / 4)


@given(st.integers(1, 6), st.integers(0, 10_000))
def test_pure_state_matches_bruteforce(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    v /= np.linalg.norm(v)
    gen = build_collective("x", n)
    assert qfi_pure(v, gen) == pytest.approx(oracle.qfi_bruteforce(v, gen.to_dense()), rel=1e-9, abs=1e-9)


@given(st.integers(1, 8), st.integers(1, 4), st.integers(0, 10_000))
def test_mixed_state_properties(n, k, seed):
    k = min(k, n + 1)
    rho = random_mixed_state(n + 1, k, np.random.default_rng(seed))
    sz = build_collective("z", n)
    f, bound, gap = qfi_mixed(rho, sz), fvc_upper_bound(rho, sz), zeta_gap(rho, sz)
    assert f >= -1e-10
    assert f <= bound + 1e-9
    assert f + gap == pytest.approx(bound, rel=1e-9, abs=1e-9)
    assert f == pytest.approx(oracle.qfi_bruteforce(rho, sz.to_dense()), rel=1e-9, abs=1e-9)


def test_pure_limit_of_mixed():
    psi = coherent_state(5, "+x")
    rho = MixedState(np.array([1.0]), psi.amplitudes)
    sy = build_collective("y", 5)
    assert qfi_mixed(rho, sy) == pytest.approx(qfi_pure(psi, sy))
    assert fvc_upper_bound(rho, sy) == pytest.approx(qfi_pure(psi, sy))


def test_maximally_mixed_has_zero_qfi():
    dim = 5
    rho = MixedState(np.full(dim, 1 / dim), np.eye(dim))
    assert qfi_mixed(rho, build_collective("x", dim - 1)) == pytest.approx(0.0, abs=1e-12)


@given(weights, weights)
def test_zeta_non_negative(a, b):
    if a + b == 0:
        with pytest.raises(InvalidArgument):
            zeta_coefficient(a, b)
    else:
        z = zeta_coefficient(a, b)
        assert z >= 0.0
        assert z == pytest.approx((a + b) - (a - b) ** 2 / (a + b), abs=1e-9 * (a + b))


def test_zeta_edge_values():
    assert zeta_coefficient(0.3, 0.0) == 0.0
    assert zeta_coefficient(0.5, 0.5) == pytest.approx(1.0)
    with pytest.raises(InvalidArgument):
        zeta_coefficient(-0.1, 0.5)


def test_cramer_rao():
    assert cramer_rao(100.0) == pytest.approx(0.1)
    assert cramer_rao(100.0, 4) == pytest.approx(0.05)
    for bad in ((0.0, 1), (-1.0, 1), (1.0, 0), (1.0, 1.5)):
        with pytest.raises(InvalidArgument):
            cramer_rao(*bad)


def test_mixed_state_validation():
    with pytest.raises(InvalidArgument):
        MixedState(np.array([0.6, 0.6]), np.eye(2))
    with pytest.raises(InvalidArgument):
        MixedState(np.array([0.5, 0.5]), np.array([[1, 1], [0, 0]], dtype=complex))
    rho = mixture([0.5, 0.5], [coherent_state(3, "+x"), coherent_state(3, "-x") ])
    with pytest.raises(InvalidArgument):
        qfi_mixed(rho, build_collective("z", 3))


def test_tiny_weights_are_dropped():
    rho = MixedState(np.array([1.0 - 1e-14, 1e-14]), np.eye(3)[:, :2])
    assert rho.weights[1] == 0.0


def test_z2_check():
    amp = np.zeros(3, dtype=complex)
    amp[0] = 1.0
    from squeezetime.collective import DickeState

    with pytest.raises(InvalidArgument):
        transverse_covariance(DickeState(2, amp), z2_symmetric=True)
