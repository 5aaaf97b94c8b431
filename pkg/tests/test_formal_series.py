import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from occ.formal_series import (
    CoordSeq,
    InvalidCoordinateError,
    OrderUnderflowError,
    SeriesError,
    SingularSeriesError,
    TruncatedSeries,
    apply_coords,
    compose,
    exp_derivation,
    extract_coords,
    invert,
)

N = 8
small = st.floats(-0.3, 0.3, allow_nan=False)
cplx = st.builds(complex, small, small)


def series(coeffs, order=N, low=0):
    return TruncatedSeries.from_array(coeffs, order, low)


def geometric(ratio, order=N):
    """x / (1 - ratio x) = sum ratio^{k-1} x^k."""
    return series([0] + [ratio ** (k - 1) for k in range(1, order + 1)], order)


def test_coefficients_beyond_order_are_unknown():
    f = series([0, 1, 2], order=3)
    assert f.coeff(2) == 2
    assert f.coeff(3) == 0
    with pytest.raises(OrderUnderflowError):
        f.coeff(4)


def test_product_order_bookkeeping():
    # x * (1 + x + ...) : the unknown x^{N+1} term of the second factor is shifted by one
    f = TruncatedSeries.x(N) * geometric(1.0)
    assert f.order == N + 1
    assert f.coeff(2) == 1


def test_compose_moebius_pair_is_identity():
    # x/(1-x) ∘ x/(1+x) = x
    h = compose(geometric(1.0), geometric(-1.0))
    assert h.max_abs_diff(TruncatedSeries.x(N)) < 1e-14


def test_compose_requires_vanishing_inner_series():
    with pytest.raises(SeriesError):
        compose(geometric(1.0), series([1, 1]))


def test_compose_laurent_outer_series():
    # 1/x ∘ x/(1-x) = 1/x - 1
    inv_x = series([1], order=N, low=-1)
    h = compose(inv_x, geometric(1.0))
    assert h.low == -1
    assert abs(h.coeff(-1) - 1) < 1e-14
    assert abs(h.coeff(0) + 1) < 1e-14
    assert max(abs(h.coeff(k)) for k in range(1, h.order + 1)) < 1e-14


def test_invert_scaling():
    g = invert(series([0, 2]))
    assert g.max_abs_diff(series([0, 0.5])) < 1e-15


def test_invert_catalan():
    # inverse of x - x^2 is (1 - sqrt(1-4x))/2 = sum_{n>=1} C_{n-1} x^n
    catalan = [math.comb(2 * n, n) // (n + 1) for n in range(N)]
    g = invert(series([0, 1, -1]))
    expected = series([0] + catalan)
    assert g.max_abs_diff(expected) < 1e-12


def test_invert_singular():
    with pytest.raises(SingularSeriesError):
        invert(series([0, 0, 1]))
    with pytest.raises(SeriesError):
        invert(series([1, 1]))


@pytest.mark.parametrize("t", [0.3, -0.7, 0.25j])
def test_flow_of_quadratic_vector_field(t):
    # exp(t x^2 d/dx) x = x / (1 - t x)
    f = exp_derivation((t,) + (0,) * (N - 1), +1, N)
    assert f.max_abs_diff(geometric(t)) < 1e-13


@pytest.mark.parametrize("t", [0.2, -0.4])
def test_flow_of_cubic_vector_field(t):
    # x' = t x^3 gives x / sqrt(1 - 2 t x^2) = sum_k binom(2k,k) (t/2)^k x^{2k+1}
    f = exp_derivation((0, t) + (0,) * (N - 2), +1, N)
    expected = np.zeros(N + 1, dtype=complex)
    for k in range((N - 1) // 2 + 1):
        expected[2 * k + 1] = math.comb(2 * k, k) * (t / 2) ** k
    assert f.max_abs_diff(series(expected)) < 1e-13


def test_flow_sign_is_inverse_flow():
    A = (0.1, -0.2j, 0.05, 0.0, 0.1, 0, 0, 0.02)
    fwd, back = exp_derivation(A, "+", N), exp_derivation(A, "-", N)
    assert compose(fwd, back).max_abs_diff(TruncatedSeries.x(N)) < 1e-13


def test_flow_rejects_bad_sign():
    with pytest.raises(ValueError):
        exp_derivation((0.1,), 0, N)


def test_apply_coords_moebius():
    # a0 E_{(A1, 0, ...)}(x) = a0 x / (1 - A1 x)
    c = CoordSeq(3.0 - 1j, (0.2,) + (0,) * (N - 1))
    f = apply_coords(c, 0.0, N)
    assert f.max_abs_diff(geometric(0.2) * (3.0 - 1j)) < 1e-13


def test_apply_coords_zero_scale():
    with pytest.raises(InvalidCoordinateError):
        apply_coords(CoordSeq(0.0, (0.1,)), 0.0, N)


def test_extract_coords_rejects_degenerate():
    with pytest.raises(SingularSeriesError):
        extract_coords(series([0, 0, 1]))
    with pytest.raises(SeriesError):
        extract_coords(series([1, 1]))


@given(st.lists(cplx, min_size=N, max_size=N), st.floats(0.5, 2.0), st.floats(0, 2 * np.pi))
def test_extract_apply_round_trip(A, mag, phase):
    c = CoordSeq(mag * np.exp(1j * phase), tuple(A))
    back = extract_coords(apply_coords(c, 0.0, N + 1))
    assert back.max_abs_diff(c) < 1e-10


@given(st.lists(cplx, min_size=N, max_size=N), st.builds(complex, small, small))
def test_apply_coords_conjugation_equivariance(A, center):
    c = CoordSeq(1.5 + 0.5j, tuple(A))
    lhs = apply_coords(c.conj(), np.conj(center), N)
    rhs = apply_coords(c, center, N).conj()
    assert lhs.max_abs_diff(rhs) < 1e-14


@given(st.lists(small, min_size=N - 1, max_size=N - 1), st.floats(0.5, 2.0))
def test_inversion_round_trip(tail, lead):
    f = series([0, lead] + list(tail))
    x = TruncatedSeries.x(N)
    assert compose(f, invert(f)).max_abs_diff(x) < 1e-10
    assert compose(invert(f), f).max_abs_diff(x) < 1e-10


@given(st.lists(cplx, min_size=3, max_size=3), st.lists(cplx, min_size=3, max_size=3), st.lists(cplx, min_size=3, max_size=3))
def test_composition_is_associative(a, b, c):
    f, g, h = (series([0, 1] + v + [0] * (N - 4)) for v in (a, b, c))
    assert compose(compose(f, g), h).max_abs_diff(compose(f, compose(g, h))) < 1e-12
