import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gendirichlet.errors import PrecisionLossError, ValidationError
from gendirichlet.frequency import (GeneratorSpec, check_bc, check_lc, check_nc, densify,
                                    factorize, frequency_from_json, frequency_from_terms,
                                    integer_coordinates, l_lambda, log_gap, log_gaps,
                                    make_frequency)


def test_ordinary_terms():
    f = make_frequency("ordinary", 4)
    assert np.allclose(f.values, np.log([1, 2, 3, 4]))
    assert f[1] == 0.0


def test_example_nc_block_two():
    f = make_frequency("example_nc", 8)
    assert f[4] == 4.0
    assert log_gap(f, 4, 5) == pytest.approx(-math.exp(4), rel=1e-14)


def test_bc_first_block_brackets():
    f = make_frequency(GeneratorSpec("bc", 3), 3)
    b1 = f.block_params["b"][1]
    assert math.log(3) <= b1 <= math.log(4)
    c1 = f.block_params["c"][1]
    assert np.allclose(f.values[:3], [b1, b1 + c1, b1 + 2 * c1], rtol=1e-14)


def test_geometric_deltas_in_bracket():
    f = make_frequency(GeneratorSpec("geometric", 11), 2 ** 8)
    for n in range(1, 8):
        d = f.block_params["delta"][n]
        assert 2.0 ** (-n - 1) < d <= 2.0 ** -n


def test_block_families_regenerate_from_seed():
    for name in ("geometric", "bc"):
        a = make_frequency(GeneratorSpec(name, 5), 200)
        b = make_frequency(GeneratorSpec(name, 5), 200)
        assert a.terms == b.terms


def test_log_gap_examples():
    assert log_gap(make_frequency("ordinary", 2), 1, 2) == pytest.approx(-0.3665129205816643)
    f = make_frequency("example_nc", 16)
    assert log_gap(f, 8, 9) == pytest.approx(-8103.083927575384, rel=1e-14)
    assert log_gap(make_frequency("integers", 5), 2, 3) == 0.0


def test_log_gap_explicit_cancellation_is_an_error():
    # distinct at 64 bits, but closer than the 2**-56 relative guard
    f = frequency_from_terms(["1", "1.000000000000000001"], precision_bits=64)
    with pytest.raises(PrecisionLossError):
        log_gap(f, 1, 2)


def test_log_gap_matches_double_subtraction():
    f = make_frequency("ordinary", 300)
    n = np.arange(1, 299)
    got = log_gaps(f, n, n + 1)
    want = np.log(f.values[n] - f.values[n - 1])
    assert np.allclose(got, want, rtol=1e-9, atol=1e-9)


def test_check_bc_examples():
    g = make_frequency(GeneratorSpec("geometric", 1), 2 ** 10)
    rep = check_bc(g, math.log(2), 2 ** 10 - 1)
    assert rep.C_estimate >= 0.5 and rep.consistent
    assert check_bc(make_frequency("integers", 200), 0.5).consistent
    nc = check_bc(make_frequency("example_nc", 64), 1.0)
    assert not nc.consistent


def test_check_lc_examples():
    assert check_lc(make_frequency("ordinary", 20001), 0.5).consistent
    assert not check_lc(make_frequency("example_nc", 64), 0.5).consistent
    assert check_lc(make_frequency("integers", 300), 1.0).consistent


def test_check_nc_integers_witness():
    rep = check_nc(make_frequency("integers", 80), 1.0, 60, horizon=8)
    for n, m, lhs, _ in rep.rows:
        assert m == n + 1
        assert lhs == pytest.approx(math.log(2 * n + 1) + 1, rel=1e-12)


def test_check_nc_example_nc_jumps_to_next_block():
    f = make_frequency("example_nc", 128)
    rep = check_nc(f, 1.0, 40, horizon=40)
    rows = {int(r[0]): r for r in rep.rows}
    assert rows[16][1] == 32
    for n in (9, 20, 33):
        b = int(math.floor(math.log2(n)))
        assert rows[n][1] == 2 ** (b + 1)
        assert rows[n][2] <= math.log(2 * (b + 1) ** 2) + 2 ** b + 1e-12
    assert rep.consistent


def test_check_nc_horizon_beyond_prefix():
    with pytest.raises(ValidationError):
        check_nc(make_frequency("integers", 10), 1.0, 8, horizon=5)


def test_nc_log_term_reproduces_lc_statistic():
    f = make_frequency("ordinary", 400)
    lc = check_lc(f, 0.5, 300)
    nc = check_nc(f, 0.5, 300, horizon=1, log_term_only=True)
    assert [r[3] for r in lc.rows] == [r[3] for r in nc.rows]


def test_nc_monotone_in_delta():
    f = make_frequency("ordinary", 400)
    lo = check_nc(f, 0.3, 300, horizon=8)
    hi = check_nc(f, 0.6, 300, horizon=8)
    assert all(b[3] <= a[3] for a, b in zip(lo.rows, hi.rows))


def test_densify_examples():
    same = densify(frequency_from_terms(["0", "0.3", "1.2"]))
    assert same.terms == frequency_from_terms(["0", "0.3", "1.2"]).terms
    assert np.allclose(densify(frequency_from_terms(["0", "3"])).values, [0, 1, 2, 3])
    assert np.allclose(densify(frequency_from_terms(["0", "2.5"])).values, [0, 2.5 / 3, 5 / 3, 2.5])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.01, 7.0), min_size=1, max_size=12))
def test_densify_properties(gaps):
    terms = np.concatenate([[0.0], np.cumsum(gaps)])
    f = frequency_from_terms([repr(float(t)) for t in terms])
    d = densify(f)
    g = np.diff(d.values)
    assert np.all(g <= 1 + 1e-12)
    assert set(np.round(terms, 9)).issubset(set(np.round(d.values, 9)))
    old = np.diff(terms)
    for i, gap in enumerate(old):
        if gap > 1:
            lo, hi = terms[i], terms[i + 1]
            inside = g[(d.values[:-1] >= lo - 1e-12) & (d.values[1:] <= hi + 1e-12)]
            assert np.all(inside > 0.5)
    assert densify(d).terms == d.terms


def test_l_lambda_examples():
    assert l_lambda(make_frequency("ordinary", 500)).L_running_sup_tail == pytest.approx(1.0)
    a = l_lambda(make_frequency("integers", 100)).L_running_sup_tail
    b = l_lambda(make_frequency("integers", 1000)).L_running_sup_tail
    assert b < a < 0.1
    g = make_frequency(GeneratorSpec("geometric", 0), 2 ** 14)
    est = l_lambda(g).L_running_sup_tail
    assert abs(est - math.log(2)) < 0.06


def test_example_nc_l_statistic_is_computed_not_claimed():
    # the prefix statistic log N / lambda_N tends to 0 on this family
    est = l_lambda(make_frequency("example_nc", 2 ** 12)).L_running_sup_tail
    assert est < 0.1


def test_json_roundtrip():
    f = make_frequency(GeneratorSpec("bc", 2), 30)
    g = frequency_from_json(f.to_json(), 30)
    assert g.terms == f.terms
    h = frequency_from_json({"terms": ["0", "0.6931471805599453", "1.1"]})
    assert len(h) == 3
    with pytest.raises(ValidationError):
        frequency_from_json({"terms": ["1", "0.5"]})


def test_integer_coordinates_reproduce_terms():
    for name in ("ordinary", "integers", "example_nc", "geometric", "bc"):
        f = make_frequency(GeneratorSpec(name, 4), 120)
        gens, mat = integer_coordinates(f)
        with mp.workprec(256):
            for n in (1, 7, 64, 120):
                row = mat[n - 1].toarray().ravel()
                total = mp.fsum(int(c) * g for c, g in zip(row, gens) if c)
                assert abs(total - f.exact(n)) <= mp.mpf(2) ** -200 * max(1, abs(f.exact(n)))


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}


def test_invalid_inputs():
    with pytest.raises(ValidationError):
        make_frequency("nope", 3)
    with pytest.raises(ValidationError):
        make_frequency("ordinary", 0)
    with pytest.raises(ValidationError):
        make_frequency(GeneratorSpec("geometric", 0, {"deltas": [0.9]}), 8)
