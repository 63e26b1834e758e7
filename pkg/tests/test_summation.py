import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gendirichlet import kernel as K
from gendirichlet.errors import ValidationError
from gendirichlet.frequency import GeneratorSpec, make_frequency
from gendirichlet.summation import (DirichletSeries, best_projection_bound, bohr_cahen,
                                    eval_partial, mollified_sum, projection_bound,
                                    random_series, riesz_mean, series_from_json,
                                    sup_on_imaginary_axis, t_sigma, uniform_tail,
                                    vertical_convolution_check)


def ordinary(count, a=None):
    f = make_frequency("ordinary", count)
    return DirichletSeries(f, np.ones(count) if a is None else a)


def test_eval_partial_examples():
    assert eval_partial(ordinary(3), 0.0, 3) == 3
    zeta2 = eval_partial(ordinary(10000), 2.0)
    assert abs(zeta2 - math.pi ** 2 / 6) <= 1 / 10000 + 1e-12
    f = make_frequency("integers", 30)
    D = DirichletSeries(f, 2.0 ** -np.arange(1, 31))
    for N in (1, 5, 30):
        assert eval_partial(D, 0.0, N) == pytest.approx(1 - 2.0 ** -N, rel=1e-15)


def test_riesz_mean_examples():
    D = ordinary(4)
    assert not np.any(riesz_mean(DirichletSeries(make_frequency("integers", 3), np.ones(3)), 1.0, 1).coeffs)
    w = riesz_mean(D, math.log(4), 1).coeffs.real
    assert np.allclose(w[:3], [1, 0.5, 1 - math.log(3) / math.log(4)])
    assert w[3] == 0
    sharp = riesz_mean(D, math.log(3.5), 1e-12).coeffs.real
    assert np.allclose(sharp, [1, 1, 1, 0], atol=1e-10)


def test_mollified_examples():
    D = random_series(make_frequency("ordinary", 50), 3)
    for alpha in (0.5, 1.0, 2.0):
        x = 2.7
        a = mollified_sum(D, K.riesz(alpha), x).coeffs
        b = riesz_mean(D, x, alpha).coeffs
        assert np.max(np.abs(a - b)) <= 1e-15
    lam = D.lam
    m = mollified_sum(D, K.trapezoid(1, 2), 1.0).coeffs
    assert np.allclose(m[lam <= 1], D.coeffs[lam <= 1])
    assert not np.any(m[lam >= 2])
    const = DirichletSeries(make_frequency("integers", 1), [3.0])
    for N in (0.5, 1.0, 10.0):
        assert mollified_sum(const, K.fejer(), N).coeffs[0] == 3.0 * K.hat_eval(K.fejer(), 1 / N)


def test_mollified_rejects_heavy_noncompact_hat():
    D = ordinary(20)
    with pytest.raises(ValidationError):
        mollified_sum(D, K.exponential(), 1e3)


def test_convolution_examples():
    f = make_frequency("ordinary", 30)
    D = DirichletSeries(f, 2.0 ** -np.arange(1, 31))
    chk = vertical_convolution_check(D, K.fejer(), 1.0)
    assert chk.gap <= 1e-6
    single = DirichletSeries(make_frequency("integers", 1), [2.0])
    chk = vertical_convolution_check(single, K.dilate(K.trapezoid(1, 2), 2), 0.3 + 1j)
    assert chk.rhs == pytest.approx(2.0 * math.exp(-0.3) * np.exp(-1j) * K.hat_eval(K.trapezoid(1, 2), 0.5),
                                    abs=1e-6)
    far = DirichletSeries(make_frequency(GeneratorSpec("integers"), 5), np.ones(5))
    trap = K.trapezoid(0.2, 0.5)
    chk = vertical_convolution_check(far, trap, 0.5)
    assert chk.lhs == 0 and abs(chk.rhs) <= 1e-6


def test_bohr_cahen_examples():
    assert bohr_cahen(ordinary(2000), "a").estimate == pytest.approx(1.0, abs=0.01)
    n = np.arange(1, 100001)
    alt = DirichletSeries(make_frequency("ordinary", 100000), (-1.0) ** n)
    assert bohr_cahen(alt, "c").estimate <= 0.05
    one = DirichletSeries(make_frequency("ordinary", 5), [0, 0, 4.0, 0, 0])
    for kind in ("a", "c", "u"):
        assert bohr_cahen(one, kind).estimate == -math.inf
    with pytest.raises(ValidationError):
        bohr_cahen(DirichletSeries(make_frequency("ordinary", 5), np.zeros(5)), "a")


def test_projection_bound_examples():
    pb = projection_bound(make_frequency("ordinary", 20), 10, 20)
    assert pb.kappa == pytest.approx(2.885, abs=1e-3)
    assert pb.closed_form == pytest.approx(11.62, abs=0.01)
    assert pb.explicit <= pb.closed_form + 1e-6
    pb = projection_bound(make_frequency("integers", 6), 5, 6)
    assert pb.kappa == pytest.approx(5.5)
    assert pb.closed_form == pytest.approx((4 + 4 * math.log(5.5)) / math.pi)


def test_projection_bound_single_gap_has_no_penalty():
    f = make_frequency("ordinary", 50)
    pb = projection_bound(f, 30, 31)
    assert pb.closed_form == pytest.approx((4 + 4 * pb.log_kappa) / math.pi)


def test_best_projection_bound_examples():
    nc = make_frequency("example_nc", 256)
    for b in (1, 2, 3, 4, 5, 6):
        M, _ = best_projection_bound(nc, 2 ** b, 2 ** (b + 1))
        assert nc.block[M - 1] == b + 1
    ints = make_frequency("integers", 40)
    for N in (1, 7, 30):
        assert best_projection_bound(ints, N, 8)[0] == N + 1
    f = make_frequency(GeneratorSpec("explicit", 0, {"terms": ["0", "0.5", "100", "100.5"]}), 4)
    M, pb = best_projection_bound(f, 2, 2)
    assert M == 3 and pb.log_kappa < math.log(101)


def test_uniform_tail_partial_sums_decrease():
    N0 = 10000
    D = DirichletSeries(make_frequency("ordinary", N0), np.arange(1, N0 + 1) ** -2.0)
    grid = 0.5 + 1j * np.linspace(-30, 30, 61)
    errs = uniform_tail(D, "partial", 0.5, grid, [10, 100, 1000],
                        lambda s: N0 ** (-1 - s) / (1 + s))
    assert errs[0] > errs[1] > errs[2]


def test_uniform_tail_single_term():
    D = DirichletSeries(make_frequency("integers", 6), [0, 0, 1.5, 0, 0, 0])
    errs = uniform_tail(D, "partial", 0.2, [0.2 + 1j, 1.0], [1, 2, 3, 4, 6], lambda s: 0.0)
    assert errs[0] > 0 and errs[2:] == [0.0, 0.0, 0.0]


def test_uniform_tail_mollified_fejer_reaches_1e_4():
    """Mollified Fejer errors should decrease to below 1e-4 on Re s >= 0.5.

    With weights (1 - lambda_n/N)_+ the error at s = 0.5 is about
    -zeta'(2.5)/N = 0.286/N, so 1e-4 needs N near 2900, i.e. e**2900
    terms of the ordinary frequency.  Kept as a faithful check.
    """
    N0 = 10000
    D = DirichletSeries(make_frequency("ordinary", N0), np.arange(1, N0 + 1) ** -2.0)
    grid = 0.5 + 1j * np.linspace(-30, 30, 61)
    Ns = [1.0, 2.0, 4.0, 8.0]
    errs = uniform_tail(D, "mollified", 0.5, grid, Ns, lambda s: N0 ** (-1 - s) / (1 + s),
                        kernel=K.fejer())
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-4


def test_sup_dominates_coefficients():
    rng = np.random.default_rng(0)
    f = make_frequency("ordinary", 12)
    t = np.linspace(-400, 400, 40001)
    for _ in range(5):
        D = DirichletSeries(f, rng.standard_normal(12) + 1j * rng.standard_normal(12))
        assert np.max(np.abs(D.coeffs)) <= sup_on_imaginary_axis(D, t)


def test_t_sigma_properties():
    D = random_series(make_frequency("ordinary", 40), 1)
    assert np.array_equal(t_sigma(D, 0.0).coeffs, D.coeffs)
    a = t_sigma(t_sigma(D, 0.3), 0.4).coeffs
    b = t_sigma(D, 0.7).coeffs
    assert np.max(np.abs(a - b)) <= 1e-15
    assert np.linalg.norm(t_sigma(D, 0.2).coeffs) <= np.linalg.norm(D.coeffs)


def test_series_json_rules():
    doc = {"frequency": {"generator": {"variant": "ordinary"}}, "coeffs": {"rule": "power", "exponent": 2, "count": 5}}
    D = series_from_json(doc)
    assert np.allclose(D.coeffs, np.arange(1, 6) ** -2.0)
    E = series_from_json(D.to_json())
    assert np.array_equal(E.coeffs, D.coeffs)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000), st.floats(-3, 3), st.floats(0.1, 4.0))
def test_operators_are_linear(s1, s2, c, x):
    f = make_frequency("ordinary", 30)
    A, B = random_series(f, s1), random_series(f, s2)
    combo = A + c * B
    for op in (lambda D: riesz_mean(D, x, 1.5), lambda D: mollified_sum(D, K.trapezoid(0.5, 1), x),
               lambda D: t_sigma(D, 0.3)):
        lhs = op(combo).coeffs
        rhs = op(A).coeffs + c * op(B).coeffs
        assert np.max(np.abs(lhs - rhs)) <= 1e-12
    s = complex(0.3, x)
    assert abs(eval_partial(combo, s) - eval_partial(A, s) - c * eval_partial(B, s)) <= 1e-12
