import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from gendirichlet import hardy as H
from gendirichlet.errors import ValidationError
from gendirichlet.frequency import GeneratorSpec, make_frequency
from gendirichlet.summation import DirichletSeries, random_series


def two_terms(variant="ordinary"):
    f = make_frequency(variant, 2)
    return DirichletSeries(f, np.ones(2))


def test_h2_examples():
    assert H.h2_norm(DirichletSeries(make_frequency("integers", 3), np.ones(3))) == math.sqrt(3)
    bc = make_frequency(GeneratorSpec("bc", 0), 48)
    for m in (1, 2, 3, 6):
        a = (bc.block == m).astype(float)
        assert H.h2_norm(DirichletSeries(bc, a)) == math.sqrt(2 * m + 1)
    assert H.h2_norm(DirichletSeries(bc, np.zeros(5))) == 0.0


def test_time_average_examples():
    single = DirichletSeries(make_frequency("integers", 1), [0.75 - 1j])
    for p in (1, 3):
        est = H.hp_norm_time_average(single, p, [10, 20, 40])
        assert est.value == pytest.approx(1.25, rel=1e-12)
    for variant in ("ordinary", "integers"):
        D = two_terms(variant)
        est = H.hp_norm_time_average(D, 4, [400, 800, 1600])
        assert est.value == pytest.approx(6 ** 0.25, abs=1e-3)
        est2 = H.hp_norm_time_average(D, 2, [400, 800, 1600])
        assert est2.value == pytest.approx(H.h2_norm(D), abs=1e-3)


def test_time_average_validation():
    with pytest.raises(ValidationError):
        H.hp_norm_time_average(two_terms(), 0.5, [1, 2])
    with pytest.raises(ValidationError):
        H.hp_norm_time_average(two_terms(), 2, [5, 3])


def test_h2k_exact_examples():
    assert H.h2k_norm_exact(two_terms(), 2) ** 4 == pytest.approx(6)
    bc = make_frequency(GeneratorSpec("bc", 0), 3)
    assert H.h2k_norm_exact(DirichletSeries(bc, np.ones(3)), 2) ** 4 == pytest.approx(19)
    D = random_series(make_frequency("ordinary", 20), 4)
    assert H.h2k_norm_exact(D, 1) == H.h2_norm(D)


def test_torus_examples():
    D = two_terms()
    basis = H.RationalBasis.from_frequency(D.freq)
    est = H.hp_norm_torus(D, basis, 1.0, "mc", 200_000, 1)
    assert abs(est.value - 4 / math.pi) <= 3 * est.error_bar
    q = H.hp_norm_torus(D, basis, 1.0, "qmc", 2 ** 14, 1)
    assert abs(q.value - 4 / math.pi) <= max(3 * q.error_bar, 1e-6)
    p2 = H.hp_norm_torus(D, basis, 2.0, "mc", 200_000, 2)
    assert abs(p2.value - H.h2_norm(D)) <= 3 * p2.error_bar


def test_torus_matches_exact_even_norms():
    D = random_series(make_frequency("ordinary", 12), 7, decay=1.0)
    basis = H.RationalBasis.from_frequency(D.freq)
    for k in (2, 3):
        est = H.hp_norm_torus(D, basis, 2 * k, "mc", 200_000, k)
        assert abs(est.value - H.h2k_norm_exact(D, k)) <= 3 * est.error_bar


def test_norms_increase_with_p():
    D = random_series(make_frequency("integers", 8), 2, decay=0.5)
    basis = H.RationalBasis.from_frequency(D.freq)
    vals = [H.hp_norm_torus(D, basis, p, "mc", 100_000, 5) for p in (1, 2, 4)]
    for a, b in zip(vals, vals[1:]):
        assert b.value >= a.value - 3 * (a.error_bar + b.error_bar)


def test_dirichlet_kernel_block_h1_grows_linearly():
    g = make_frequency(GeneratorSpec("geometric", 0), 2 ** 9)
    h1 = []
    for n in (4, 6, 8):
        r, _ = H.block_ratio(g, n, 40_000, 0)
        h1.append(2 ** (n / 2) / r)
    lebesgue = [(4 / math.pi ** 2) * n * math.log(2) for n in (4, 6, 8)]
    steps = np.diff(h1)
    assert np.all(np.abs(steps - np.diff(lebesgue)) < 0.1)


def test_characters():
    f = make_frequency("integers", 2)
    basis = H.RationalBasis.from_frequency(f)
    D = DirichletSeries(f, [1.0, 2.0 - 1j])
    ident = H.Character(basis, np.zeros(basis.dim))
    assert np.array_equal(H.vertical_limit(D, ident).coeffs, D.coeffs)
    ch = H.random_character(basis, 3)
    th = ch.theta[0]
    V = H.vertical_limit(D, ch)
    assert np.allclose(V.coeffs, [np.exp(1j * th), (2 - 1j) * np.exp(2j * th)])


def test_vertical_limits_preserve_h2():
    D = random_series(make_frequency("ordinary", 60), 9, decay=0.7)
    basis = H.RationalBasis.from_frequency(D.freq)
    base = H.h2_norm(D)
    for seed in range(100):
        V = H.vertical_limit(D, H.random_character(basis, seed))
        assert H.h2_norm(V) == pytest.approx(base, rel=1e-14)


def test_vertical_limits_torus_distribution_report():
    """KS comparison of |V(0)| across characters against |D| on the torus (reported)."""
    D = random_series(make_frequency("ordinary", 10), 1, decay=0.5)
    basis = H.RationalBasis.from_frequency(D.freq)
    vals = [abs(H.vertical_limit(D, H.random_character(basis, s)).coeffs.sum()) for s in range(200)]
    rng = np.random.default_rng(99)
    theta = 2 * np.pi * rng.random((2000, basis.dim))
    ref = np.abs(np.exp(1j * H._torus_phases(basis, len(D), theta)) @ D.coeffs)
    pvalue = stats.ks_2samp(vals, ref).pvalue
    print(f"KS p-value for vertical limits vs torus samples: {pvalue:.3f}")
    assert 0.0 <= pvalue <= 1.0


def test_basis_json_and_check():
    f = make_frequency(GeneratorSpec("geometric", 2), 16)
    b = H.RationalBasis.from_frequency(f)
    c = H.RationalBasis.from_json(b.to_json())
    c.check(f)
    bad = H.RationalBasis.from_json({"generators": ["1", "0.3"], "rows": [[0, 0]] * 16})
    with pytest.raises(ValidationError):
        bad.check(f)


def test_helson_single_term_and_ordinary_small():
    D = DirichletSeries(make_frequency("integers", 4), [1.5, 0, 0, 0])
    basis = H.RationalBasis.from_frequency(D.freq)
    st_ = H.helson_maximal_stat(D, 0.2, basis, 30, [1, 2, 3, 4], 0)
    assert np.allclose(st_.M, 1.5 * math.exp(-0.2), rtol=1e-15)
    o = make_frequency("ordinary", 1024)
    D = DirichletSeries(o, 1 / np.arange(1, 1025))
    st_ = H.helson_maximal_stat(D, 0.1, H.RationalBasis.from_frequency(o), 100,
                                [4, 16, 64, 256, 1024], 1)
    assert st_.flags == 0
    assert np.all(st_.checkpoint_osc[:, 0] >= st_.checkpoint_osc[:, 1])
    assert np.all(st_.checkpoint_osc[:, 1] >= st_.checkpoint_osc[:, 2])
    rows = list(st_.csv_rows())
    assert len(rows) == 101


def test_helson_maximal_ratio_reported():
    o = make_frequency("ordinary", 256)
    basis = H.RationalBasis.from_frequency(o)
    ratios = []
    for seed in range(5):
        D = random_series(o, seed, decay=0.5)
        D = D * (1 / H.h2_norm(D))
        st_ = H.helson_maximal_stat(D, 0.1, basis, 50, [16, 64, 128, 256], seed)
        ratios.append(st_.mean)
    print("mean M / ||D||_2 over random unit series:", [round(r, 3) for r in ratios])
    assert all(math.isfinite(r) for r in ratios)


def test_lambda_search_examples():
    r = H.lambda_ratio_search(make_frequency("ordinary", 1), 1, 10, 0)
    assert r.ratio == pytest.approx(1.0, rel=1e-12)
    g = make_frequency(GeneratorSpec("geometric", 0), 2 ** 5)
    res = H.lambda_ratio_search(g.prefix(8), 8, 60, 0,
                                basis=H.RationalBasis.from_frequency(g.prefix(8)))
    assert res.ratio <= math.sqrt(8) + 3 * res.error_bar


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 6), st.integers(0, 1000))
def test_lambda_search_never_beats_sqrt_n(N, seed):
    f = make_frequency("integers", N)
    r = H.lambda_ratio_search(f, N, 40, seed, n_samples=4000)
    assert r.ratio <= math.sqrt(N) + 3 * r.error_bar
