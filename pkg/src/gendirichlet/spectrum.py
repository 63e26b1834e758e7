"""k-fold sumsets of frequencies, representation counts and T_sigma scans.

Sums are grouped exactly whenever the frequency has integer coordinates
over independent generators.  Each term's coordinate vector is packed into
a few 64-bit words using a mixed radix wide enough that adding ``k`` vectors
never carries, so equal sums have equal packed keys.  The ordinary
frequency uses the product of indices instead (a sum of logarithms is the
logarithm of a product).  Explicit frequencies fall back to tolerance
clustering, which refuses ambiguous configurations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import AmbiguityError, ValidationError
from .frequency import Frequency, factorize, integer_coordinates
from .summation import DirichletSeries, t_sigma  # noqa: F401  (re-exported)

_WORD_BITS = 62


@dataclass
class SpectrumMultiset:
    """Points of the k-fold sumset with their representation counts.

    Attributes
    ----------
    points : numpy.ndarray
        Double values of the sums, increasing.
    counts : numpy.ndarray
        ``r_k(mu)`` (``int64``, or Python ints when they may overflow).
    keys : numpy.ndarray
        Exact grouping keys (2-D array of words).
    complete : numpy.ndarray
        True where the count already equals the count over the whole
        frequency (no tuple with an index beyond the prefix can reach it).
    """

    points: np.ndarray
    counts: np.ndarray
    keys: np.ndarray
    k: int
    mode: str
    complete: np.ndarray
    prefix: int

    def __len__(self):
        return int(self.points.shape[0])

    def total(self) -> int:
        return int(sum(int(c) for c in self.counts))

    def csv_rows(self):
        yield ("mu", "count", "complete")
        for p, c, ok in zip(self.points, self.counts, self.complete):
            yield (repr(float(p)), str(int(c)), int(bool(ok)))


# ---------------------------------------------------------------- key setup

def _term_keys(freq: Frequency, N: int, k: int, mode: str):
    """Per-term keys and the combining operation (``add``, ``mul``, ``tol``)."""
    if mode == "tolerance":
        return None, "tol"
    v = freq.variant
    if v == "ordinary":
        return np.arange(1, N + 1, dtype=np.int64)[:, None], "mul"
    if v == "integers":
        return np.arange(1, N + 1, dtype=np.int64)[:, None], "add"
    coords = integer_coordinates(freq.prefix(N)) if N < len(freq) else integer_coordinates(freq)
    if coords is None:
        if mode == "exact":
            raise ValidationError("exact mode needs a generated frequency; "
                                  "use tolerance mode for explicit terms")
        return None, "tol"
    mat = coords[1].toarray().astype(np.int64)
    colmax = mat.max(axis=0)
    keep = colmax > 0
    mat, colmax = mat[:, keep], colmax[keep]
    radix = k * colmax + 1
    words, cur, shift = [], np.zeros(N, dtype=np.int64), 0
    for j in range(mat.shape[1]):
        bits = int(radix[j] - 1).bit_length() + 1
        if shift + bits > _WORD_BITS:
            words.append(cur)
            cur, shift = np.zeros(N, dtype=np.int64), 0
        cur = cur + (mat[:, j] << shift)
        shift += bits
    words.append(cur)
    return np.stack(words, axis=1), "add"


def _cluster(points: np.ndarray, tau: float):
    """Single-linkage clusters of sorted points; strict separation enforced."""
    if points.size == 0:
        return np.zeros(0, dtype=np.int64)
    d = np.diff(points)
    new = np.concatenate([[True], d > tau])
    ids = np.cumsum(new) - 1
    starts = np.flatnonzero(new)
    ends = np.concatenate([starts[1:], [points.size]]) - 1
    diam = points[ends] - points[starts]
    if np.any(diam > tau / 2):
        i = int(np.argmax(diam))
        raise AmbiguityError(f"cluster near {points[starts[i]]:.17g} has diameter "
                             f"{diam[i]:.3g} > tau/2; use exact mode")
    if starts.size > 1:
        gaps = points[starts[1:]] - points[ends[:-1]]
        if np.any(gaps < 2 * tau):
            i = int(np.argmin(gaps))
            raise AmbiguityError(f"clusters {gaps[i]:.3g} apart (< 2 tau); use exact mode")
    return ids


def _aggregate(mu, keys, counts, op, tau):
    if op == "tol":
        order = np.argsort(mu, kind="stable")
        mu, counts = mu[order], counts[order]
        ids = _cluster(mu, tau)
        starts = np.flatnonzero(np.concatenate([[True], np.diff(ids) > 0]))
        mu_out = np.add.reduceat(mu * counts.astype(float), starts) / \
            np.add.reduceat(counts.astype(float), starts)
        return mu_out, ids[starts][:, None], np.add.reduceat(counts, starts)
    order = np.lexsort(keys.T[::-1])
    keys, mu, counts = keys[order], mu[order], counts[order]
    new = np.concatenate([[True], np.any(keys[1:] != keys[:-1], axis=1)])
    starts = np.flatnonzero(new)
    return mu[starts], keys[starts], np.add.reduceat(counts, starts)


def convolve_spectrum(freq: Frequency, k: int, prefix: Optional[int] = None,
                      mode: str = "exact", tau: Optional[float] = None,
                      max_point: Optional[float] = None,
                      budget: float = 1e8, weights=None) -> SpectrumMultiset:
    """All k-fold sums of the first ``prefix`` terms with multiplicities.

    Parameters
    ----------
    mode : {"exact", "tolerance"}
        Exact grouping uses integer coordinates; tolerance mode clusters
        doubles at spacing ``tau`` (default ``1e-12 * max(lambda)``).
    max_point : float, optional
        Drop sums above this value (sums only grow, so the pruning is
        exact for the points that remain).
    budget : float
        Maximum number of intermediate tuples.
    weights : array, optional
        Per-term weights; the result then carries, for each sum, the total
        of the products of weights over its representations instead of the
        plain count.
    """
    k = int(k)
    if k < 1:
        raise ValidationError("k must be at least 1")
    N = len(freq) if prefix is None else int(prefix)
    if not 1 <= N <= len(freq):
        raise ValidationError("prefix outside the materialized frequency")
    lam = freq.values[:N]
    if max_point is None and float(N) ** k > budget:
        raise ValidationError(f"{N}^{k} tuples exceed the budget; pass max_point")
    if mode not in ("exact", "tolerance"):
        raise ValidationError("mode must be 'exact' or 'tolerance'")
    term_keys, op = _term_keys(freq, N, k, mode)
    if op == "tol":
        tau = 1e-12 * max(float(lam.max()), 1.0) if tau is None else float(tau)
        _cluster(lam, tau)
    cap = math.inf if max_point is None else float(max_point) + 1e-12 * max(abs(float(max_point)), 1.0)
    big = float(N) ** k >= 2.0 ** 62
    one = np.ones(N, dtype=object if big else np.int64)
    mu = lam.copy()
    keys = term_keys.copy() if term_keys is not None else np.arange(N)[:, None]
    counts = one.copy() if weights is None else np.asarray(weights, dtype=complex)[:N].copy()
    sel = mu <= cap
    mu, keys, counts = mu[sel], keys[sel], counts[sel]
    for _ in range(k - 1):
        order = np.argsort(mu, kind="stable")
        mu, keys, counts = mu[order], keys[order], counts[order]
        parts_mu, parts_key, parts_cnt = [], [], []
        size = 0
        for i in range(N):
            lim = np.searchsorted(mu, cap - lam[i], side="right") if math.isfinite(cap) else mu.size
            if lim == 0:
                continue
            parts_mu.append(mu[:lim] + lam[i])
            if op == "mul":
                parts_key.append(keys[:lim] * term_keys[i])
            elif op == "add":
                parts_key.append(keys[:lim] + term_keys[i])
            else:
                parts_key.append(keys[:lim])
            parts_cnt.append(counts[:lim] if weights is None else counts[:lim] * weights[i])
            size += lim
            if size > budget:
                raise ValidationError("intermediate tuple count exceeds the budget")
        if not parts_mu:
            mu, keys, counts = mu[:0], keys[:0], counts[:0]
            break
        mu, keys, counts = _aggregate(np.concatenate(parts_mu), np.concatenate(parts_key),
                                      np.concatenate(parts_cnt), op, tau)
    if op == "tol" and k == 1:
        mu, keys, counts = _aggregate(mu, keys, counts, op, tau)
    # order by value, exact key breaking ties between double-equal sums
    order = np.lexsort(tuple(keys.T[::-1]) + (mu,))
    mu, keys, counts = mu[order], keys[order], counts[order]
    complete = _completeness(freq, N, k, mu)
    return SpectrumMultiset(mu, counts, keys, k, op, complete, N)


def power_coefficients(D: DirichletSeries, k: int, mode: str = "exact",
                       tau: Optional[float] = None) -> SpectrumMultiset:
    """Coefficients of the k-th power of a Dirichlet polynomial.

    ``counts`` holds ``b_mu = sum over representations of a_{n_1}...a_{n_k}``.
    """
    return convolve_spectrum(D.freq, k, len(D), mode=mode, tau=tau, weights=D.coeffs)


def _completeness(freq, N, k, mu):
    if freq.variant == "bc_blocks" and (N == len(freq) or freq.block[N] != freq.block[N - 1]):
        # every term carries its block's offset generator, so sums of terms
        # from complete blocks cannot be reached from later blocks
        return np.ones(mu.shape, dtype=bool)
    thresh = float(freq.values[N - 1]) + (k - 1) * float(freq.values[0])
    return mu <= thresh + 1e-12 * max(abs(thresh), 1.0)


# ----------------------------------------------------------- A(lambda, k)

@dataclass
class ALambdaEstimate:
    samples: list
    estimate: float
    checkpoints: list = field(default_factory=list)


def a_lambda_k(freq: Frequency, k: int, prefix: Optional[int] = None,
               checkpoints: Sequence[int] = ()) -> ALambdaEstimate:
    """Samples ``(mu, log r_k(mu) / (2 mu))`` and the tail-half supremum.

    Only complete points are used (``mu <= lambda_N + (k-1) lambda_1``).
    The estimate is the supremum of the statistic over points whose value
    lies in the upper half of the covered indices, i.e. over ``mu`` above
    ``lambda_{N//2}``.  ``checkpoints`` (prefix lengths) additionally report
    the same estimate for shorter prefixes.
    """
    N = len(freq) if prefix is None else int(prefix)
    lam1 = float(freq.values[0])
    spec = convolve_spectrum(freq, k, N, max_point=float(freq.values[N - 1]) + (k - 1) * lam1)
    mu, cnt = spec.points, spec.counts
    ok = spec.complete & (mu > 0)
    mu, cnt = mu[ok], np.array([int(c) for c in cnt[ok]], dtype=float)
    stat = np.log(cnt) / (2.0 * mu)
    samples = list(zip(mu.tolist(), stat.tolist()))

    def tail_sup(n):
        lo = float(freq.values[n // 2 - 1]) + (k - 1) * lam1 if n >= 2 else -math.inf
        hi = float(freq.values[n - 1]) + (k - 1) * lam1
        eps = 1e-12 * max(hi, 1.0)
        sel = (mu > lo + eps) & (mu <= hi + eps)
        return float(stat[sel].max()) if sel.any() else math.nan

    cps = [(int(n), tail_sup(int(n))) for n in checkpoints if 2 <= int(n) <= N]
    return ALambdaEstimate(samples, tail_sup(N), cps)


# ------------------------------------------------------ divisor combinatorics

def divisor_count_via_compositions(n: int, k: int) -> int:
    """Ordered k-tuples with product ``n``: product of binomials over primes."""
    if n < 1 or k < 1:
        raise ValidationError("need n >= 1 and k >= 1")
    out = 1
    for _, a in factorize(int(n)).items():
        out *= math.comb(a + k - 1, k - 1)
    return out


def tuple_product_counts(n_max: int, k: int) -> np.ndarray:
    """Brute-force enumeration of ordered k-tuples with product ``<= n_max``.

    Entry ``n`` of the result counts the tuples whose product is ``n``.
    """
    counts = np.zeros(n_max + 1, dtype=np.int64)
    if k == 1:
        counts[1:] = 1
        return counts
    # the last factor ranges over a contiguous block, so add it vectorized
    def rec_last(prod, depth):
        if depth == k - 1:
            top = n_max // prod
            counts[prod:prod * top + 1:prod] += 1
            return
        for d in range(1, n_max // prod + 1):
            rec_last(prod * d, depth + 1)

    rec_last(1, 0)
    return counts


@lru_cache(maxsize=None)
def ap_representation_counts(n: int, k: int) -> tuple:
    """``#{(j_1..j_k) in {0..2n}^k : sum j_i = l}`` for ``l = 0..2nk``.

    Dynamic programming with exact integers (sliding-window sums).
    """
    if n < 0 or k < 1:
        raise ValidationError("need n >= 0 and k >= 1")
    width = 2 * n + 1
    cur = [1] * width
    for _ in range(k - 1):
        L = len(cur) + width - 1
        pref = [0]
        for c in cur:
            pref.append(pref[-1] + c)
        nxt = []
        for l in range(L):
            hi = min(l, len(cur) - 1)
            lo = max(0, l - width + 1)
            nxt.append(pref[hi + 1] - pref[lo])
        cur = nxt
    return tuple(cur)


def ap_representation_count(n: int, k: int, ell: int) -> int:
    """Number of ways to write ``ell`` as a sum of ``k`` integers in ``[0, 2n]``."""
    if not 0 <= ell <= 2 * n * k:
        raise ValidationError("ell outside 0..2nk")
    return ap_representation_counts(int(n), int(k))[int(ell)]


@dataclass
class Combi1Report:
    k: int
    n: int
    gamma: float
    delta: float
    window: tuple
    min_count: int
    bound: float
    min_slack: float
    passed: bool


def combi_constants(k: int):
    """``gamma_k = 2**-(k-1)`` and ``delta_k = prod_{j<=k} gamma_j``."""
    return 2.0 ** -(k - 1), 2.0 ** -(k * (k - 1) // 2)


def verify_combi1(k: int, n: int) -> Combi1Report:
    """Check the lower bound ``delta_k n**(k-1)`` on the central window.

    Every integer ``l`` in ``[(k - gamma_k) n, (k + gamma_k) n]`` must have at
    least ``delta_k n**(k-1)`` representations.
    """
    if k < 1 or n < 2 ** k:
        raise ValidationError("need k >= 1 and n >= 2**k")
    gamma, delta = combi_constants(k)
    lo = math.ceil((k - gamma) * n - 1e-12)
    hi = math.floor((k + gamma) * n + 1e-12)
    counts = ap_representation_counts(n, k)
    window = counts[lo:hi + 1]
    bound = delta * n ** (k - 1)
    mn = min(window)
    return Combi1Report(k, n, gamma, delta, (lo, hi), int(mn), bound,
                        float(mn - bound), mn >= bound)


def verify_combi2(freq: Frequency, k: int, prefix: Optional[int] = None):
    """Fit ``C_k`` in ``r_k(mu) <= C_k exp((k-1) mu / k)`` on a BC-block prefix.

    Returns
    -------
    C_fit : float
    table : list of (mu, r_k(mu), r_k(mu) exp(-(k-1) mu / k))
    """
    if freq.variant != "bc_blocks":
        raise ValidationError("verify_combi2 needs a bc_blocks frequency")
    N = len(freq) if prefix is None else int(prefix)
    blocks = sorted(set(int(b) for b in freq.block[:N]))
    b_mp, c_mp = freq.block_params["b_mp"], freq.block_params["c_mp"]
    for m in blocks:
        if not (2 * m + 1 <= math.exp(float(b_mp[m])) * (1 + 1e-15) and m * c_mp[m] <= 1):
            raise ValidationError(f"block {m} violates 2m+1 <= e^b_m or m c_m <= 1")
    spec = convolve_spectrum(freq, k, N)
    keep = spec.complete
    mu = spec.points[keep]
    cnt = [int(c) for c in spec.counts[keep]]
    stat = [c * math.exp(-(k - 1) * m / k) for m, c in zip(mu, cnt)]
    table = list(zip(mu.tolist(), cnt, stat))
    return (max(stat) if stat else math.nan), table


# ---------------------------------------------------------- T_sigma analysis

def sufficiency_statistic(freq: Frequency, k: int, sigma: float,
                          prefix: Optional[int] = None) -> float:
    """``sup_mu exp(-2 mu sigma) r_k(mu)`` over complete spectrum points."""
    if not sigma > 0:
        raise ValidationError("sigma must be positive")
    N = len(freq) if prefix is None else int(prefix)
    cap = float(freq.values[N - 1]) + (k - 1) * float(freq.values[0])
    spec = convolve_spectrum(freq, k, N, max_point=cap)
    keep = spec.complete
    mu = spec.points[keep]
    cnt = np.array([float(c) for c in spec.counts[keep]])
    return float(np.max(np.exp(-2 * sigma * mu) * cnt))


def block_norm_ratio(b: float, c: float, m: int, k: int, sigma: float) -> float:
    """``log(||T_sigma D^[m]||_{2k} / ||D^[m]||_2)`` by exact block counting."""
    r = np.array([float(x) for x in ap_representation_counts(m, k)])
    ell = np.arange(r.size, dtype=float)
    logs = 2 * np.log(r) - 2 * sigma * (k * b + ell * c)
    top = logs.max()
    log_norm2k = top + math.log(np.exp(logs - top).sum())
    return log_norm2k / (2 * k) - 0.5 * math.log(2 * m + 1)


@dataclass
class ThresholdScan:
    k: int
    sigma_grid: list
    slopes: list
    sigma_star: float
    theory_threshold: float
    table: list


def t_sigma_threshold_scan(freq: Frequency, k: int, m_grid: Sequence[int],
                           sigma_grid: Sequence[float]) -> ThresholdScan:
    """Growth exponent of ``||T_sigma D^[m]||_{2k} / ||D^[m]||_2`` in ``m``.

    For each ``sigma`` the least-squares slope of the log ratio against
    ``log m`` is reported; ``sigma_star`` is the zero crossing of the slope,
    found by linear interpolation along ``sigma_grid``.
    """
    if freq.variant != "bc_blocks":
        raise ValidationError("threshold scan needs a bc_blocks frequency")
    m_grid = [int(m) for m in m_grid]
    if len(m_grid) < 3:
        raise ValidationError("need at least 3 block sizes for the fit")
    if max(m_grid) > int(freq.block[-1]):
        raise ValidationError("frequency does not reach the largest block")
    b = freq.block_params["b"]
    c = freq.block_params["c"]
    x = np.log(np.asarray(m_grid, dtype=float))
    slopes, table = [], []
    for s in sigma_grid:
        y = np.array([block_norm_ratio(b[m], c[m], m, k, float(s)) for m in m_grid])
        slope = float(np.polyfit(x, y, 1)[0])
        slopes.append(slope)
        table.extend((float(s), m, float(v)) for m, v in zip(m_grid, y))
    star = math.nan
    sg = [float(s) for s in sigma_grid]
    for i in range(len(sg) - 1):
        s0, s1 = slopes[i], slopes[i + 1]
        if s0 == 0:
            star = sg[i]
            break
        if s0 * s1 < 0:
            star = sg[i] + (sg[i + 1] - sg[i]) * s0 / (s0 - s1)
            break
    if math.isnan(star) and slopes and slopes[-1] == 0:
        star = sg[-1]
    return ThresholdScan(k, sg, slopes, star, (k - 1) / (2 * k), table)
