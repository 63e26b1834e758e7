import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gendirichlet import spectrum as S
from gendirichlet.errors import AmbiguityError, ValidationError
from gendirichlet.frequency import GeneratorSpec, frequency_from_terms, make_frequency


def bc(count, seed=0):
    return make_frequency(GeneratorSpec("bc", seed), count)


def test_integer_pairs():
    s = S.convolve_spectrum(make_frequency("integers", 3), 2)
    assert s.points.tolist() == [2, 3, 4, 5, 6]
    assert s.counts.tolist() == [1, 2, 3, 2, 1]
    assert s.complete.tolist() == [True, True, True, False, False]


def test_ordinary_pairs_count_divisors():
    s = S.convolve_spectrum(make_frequency("ordinary", 12), 2)
    i = int(np.argmin(np.abs(s.points - math.log(12))))
    assert s.counts[i] == 6


def test_k_one_is_the_frequency():
    f = bc(30)
    s = S.convolve_spectrum(f, 1)
    assert np.array_equal(s.points, f.values) and set(s.counts.tolist()) == {1}


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["ordinary", "integers", "geometric", "bc"]), st.integers(1, 25),
       st.integers(1, 3))
def test_total_mass(name, N, k):
    f = make_frequency(GeneratorSpec(name, 1), N)
    assert S.convolve_spectrum(f, k).total() == N ** k


def test_block_spectrum_is_symmetric():
    f = bc(3)  # the first block: b, b + c, b + 2c
    for k in (2, 3, 4):
        r = S.convolve_spectrum(f, k).counts.tolist()
        assert r == r[::-1]
        assert r == list(S.ap_representation_counts(1, k))


def test_exact_grouping_across_blocks_keeps_distinct_sums():
    f = bc(8 + 5)
    s = S.convolve_spectrum(f, 2)
    assert s.total() == 13 ** 2
    assert len(set(map(tuple, s.keys.tolist()))) == len(s)


def test_divisor_examples():
    assert S.divisor_count_via_compositions(12, 2) == 6
    assert S.divisor_count_via_compositions(360, 2) == 24
    assert S.divisor_count_via_compositions(1, 5) == 1
    brute = S.tuple_product_counts(400, 3)
    for n in (1, 12, 64, 360, 397):
        assert brute[n] == S.divisor_count_via_compositions(n, 3)


def test_ap_examples():
    assert S.ap_representation_count(1, 2, 2) == 3
    assert S.ap_representation_count(2, 2, 0) == 1
    for n, k in ((3, 2), (4, 3), (2, 5)):
        r = S.ap_representation_counts(n, k)
        assert sum(r) == (2 * n + 1) ** k
        assert r == r[::-1]
    with pytest.raises(ValidationError):
        S.ap_representation_count(2, 2, 9)


def test_combi1_examples():
    for k in (1, 2, 3, 4):
        for n in range(2 ** k, 40):
            assert S.verify_combi1(k, n).passed
    rep = S.verify_combi1(2, 8)
    assert rep.window == (12, 20) and rep.min_count == 13 and rep.bound == 4.0
    with pytest.raises(ValidationError):
        S.verify_combi1(3, 7)


def test_combi2_examples():
    C, table = S.verify_combi2(bc(30), 1)
    assert C == 1.0
    C2, _ = S.verify_combi2(bc(10 ** 2 + 20), 2)
    assert math.isfinite(C2) and C2 > 0
    with pytest.raises(ValidationError):
        S.verify_combi2(make_frequency("integers", 5), 2)


def test_sufficiency_examples():
    assert S.sufficiency_statistic(make_frequency("integers", 200), 2, 0.1) == pytest.approx(
        5 * math.exp(-1.2), rel=1e-12)
    f = bc(50)
    lam1 = float(f.values[0])
    assert S.sufficiency_statistic(f, 1, 0.3) == pytest.approx(math.exp(-0.6 * lam1))
    vals = [S.sufficiency_statistic(bc(m * m + 2 * m), 2, 0.3) for m in (4, 8, 14)]
    assert max(vals) < 1.0
    with pytest.raises(ValidationError):
        S.sufficiency_statistic(f, 2, 0.0)


def test_a_lambda_examples():
    est = S.a_lambda_k(bc(20 ** 2 + 40), 2).estimate
    assert est == pytest.approx(0.25, abs=0.05)
    ints = [S.a_lambda_k(make_frequency("integers", n), 2).estimate for n in (100, 300)]
    assert ints[1] < ints[0] < 0.05


def test_power_coefficients_match_expansion():
    from gendirichlet.summation import DirichletSeries
    D = DirichletSeries(make_frequency("integers", 3), [1.0, 2.0, -1j])
    b = S.power_coefficients(D, 2)
    a = D.coeffs
    want = np.convolve(a, a)
    assert np.allclose(b.counts, want)


def test_threshold_scan():
    f = bc(200 ** 2 + 400)
    grid = np.linspace(0, 0.5, 11)
    for k, theory in ((2, 0.25), (3, 1 / 3)):
        scan = S.t_sigma_threshold_scan(f, k, list(range(10, 201, 10)), grid)
        assert abs(scan.sigma_star - theory) <= 0.05
        gradient = np.polyfit(grid, scan.slopes, 1)[0]
        assert abs(gradient + 1) <= 0.02
    assert scan.slopes[0] == pytest.approx(1 / 3, abs=0.05)


def test_tolerance_mode():
    f = frequency_from_terms(["0", "1", "1.5", "2.42"])
    s = S.convolve_spectrum(f, 2, mode="tolerance", tau=0.2)
    assert s.total() == 16
    with pytest.raises(ValidationError):
        S.convolve_spectrum(f, 2, mode="exact")


def test_tolerance_mode_ambiguity_is_an_error():
    f = frequency_from_terms(["0", "1", "1.5", "2.35"])
    with pytest.raises(AmbiguityError):
        S.convolve_spectrum(f, 2, mode="tolerance", tau=0.2)


def test_budget_guard():
    with pytest.raises(ValidationError):
        S.convolve_spectrum(make_frequency("integers", 2000), 3)
    s = S.convolve_spectrum(make_frequency("integers", 2000), 3, max_point=20)
    assert s.points.max() <= 20
