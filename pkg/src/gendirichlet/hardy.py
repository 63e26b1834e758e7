"""Hardy-space norms of Dirichlet polynomials and random vertical limits.

Three routes are offered: the exact H2 norm (the l2 norm of the
coefficients), long-time averages of ``|D(it)|**p``, and sampling on a
finite torus.  For the torus route each frequency term is written as an
integer combination of rationally independent generators, so ``D(it)``
becomes a trigonometric polynomial in one angle per generator.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath as mp
import numpy as np
import scipy.sparse as sp
from scipy.spatial import ConvexHull
from scipy.stats import qmc

from .errors import NumericalError, ValidationError
from .frequency import Frequency, integer_coordinates
from .kernel import _gauss_legendre
from .spectrum import power_coefficients
from .summation import DirichletSeries


@dataclass(frozen=True, eq=False)
class RationalBasis:
    """Generators ``beta_j`` and integer rows with ``lambda_n = sum_j m_nj beta_j``."""

    generators: tuple
    decomposition: sp.csr_matrix

    @property
    def dim(self) -> int:
        return len(self.generators)

    @classmethod
    def from_frequency(cls, freq: Frequency) -> "RationalBasis":
        coords = integer_coordinates(freq)
        if coords is None:
            raise ValidationError("explicit frequencies need a user-supplied basis")
        gens, mat = coords
        return cls(tuple(gens), sp.csr_matrix(mat, dtype=np.int64))

    def to_json(self) -> dict:
        dense = self.decomposition.toarray()
        return {"generators": [mp.nstr(g, 40, strip_zeros=True) for g in self.generators],
                "rows": dense.astype(int).tolist()}

    @classmethod
    def from_json(cls, obj: dict, precision_bits: int = 256) -> "RationalBasis":
        with mp.workprec(precision_bits):
            gens = tuple(mp.mpf(str(g)) for g in obj["generators"])
        rows = np.asarray(obj["rows"], dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] != len(gens) or (rows < 0).any():
            raise ValidationError("basis rows must be nonnegative with one column per generator")
        return cls(gens, sp.csr_matrix(rows))

    def check(self, freq: Frequency, count: Optional[int] = None, rel: float = 1e-12):
        """Raise unless the rows reproduce the first ``count`` terms."""
        count = len(freq) if count is None else count
        if self.decomposition.shape[0] < count:
            raise ValidationError("basis has fewer rows than active terms")
        g = np.array([float(x) for x in self.generators])
        recon = self.decomposition[:count] @ g
        lam = freq.values[:count]
        if not np.allclose(recon, lam, rtol=rel, atol=rel):
            bad = int(np.argmax(np.abs(recon - lam)))
            raise ValidationError(f"basis does not reproduce term {bad + 1}")


@dataclass
class NormEstimate:
    value: float
    method: str
    error_bar: float
    samples_used: int
    flagged: bool = False
    history: list = field(default_factory=list)


def h2_norm(D: DirichletSeries) -> float:
    """``sqrt(sum |a_n|**2)``."""
    a = D.coeffs
    return math.sqrt(math.fsum((a.real ** 2 + a.imag ** 2).tolist()))


def hp_norm_time_average(D: DirichletSeries, p: float, T_list: Sequence[float],
                         quad_tol: float = 1e-3) -> NormEstimate:
    """``((1/2T) int_{-T}^{T} |D(it)|**p dt)**(1/p)`` for each ``T``.

    The value is the last average; the error bar is the spread of the last
    three.  The estimate is flagged when that spread exceeds ``quad_tol``.
    """
    if p < 1:
        raise ValidationError("p must be at least 1")
    T_list = [float(T) for T in T_list]
    if any(b <= a for a, b in zip(T_list, T_list[1:])) or not T_list:
        raise ValidationError("T_list must be increasing")
    lam, a = D.lam, D.coeffs
    fmax = max(float(np.abs(lam).max()), 1e-9) * max(p, 2.0)
    xg, wg = _gauss_legendre(16)
    hist = []
    total, done = 0.0, 0.0
    used = 0
    for T in T_list:
        width = min(math.pi / (2 * fmax), (T - done) / 4)
        npan = int(math.ceil((T - done) / width))
        edges = np.linspace(done, T, npan + 1)
        for start in range(0, npan, 2048):
            e = edges[start:start + 2049]
            mid = 0.5 * (e[1:] + e[:-1])[:, None]
            half = 0.5 * (e[1:] - e[:-1])[:, None]
            t = (mid + half * xg).ravel()
            w = (half * wg).ravel()
            for sgn in (1.0, -1.0):
                vals = np.exp(-1j * sgn * np.outer(t, lam)) @ a
                total += math.fsum((np.abs(vals) ** p * w).tolist())
            used += 2 * t.size
        done = T
        hist.append((T, (total / (2 * T)) ** (1.0 / p)))
    vals = [v for _, v in hist[-3:]]
    spread = max(vals) - min(vals) if len(vals) > 1 else math.inf
    return NormEstimate(hist[-1][1], "time_average", spread, used, spread > quad_tol, hist)


def h2k_norm_exact(D: DirichletSeries, k: int, mode: str = "exact",
                   tau: Optional[float] = None) -> float:
    """``(sum_mu |b_mu|**2)**(1/(2k))`` from the coefficients of ``D**k``."""
    k = int(k)
    if k < 1:
        raise ValidationError("k must be at least 1")
    if k == 1:
        return h2_norm(D)
    if D.freq.generator is None and mode == "exact":
        mode = "tolerance"
    spec = power_coefficients(D, k, mode=mode, tau=tau)
    b = spec.counts.astype(complex)
    return math.fsum((b.real ** 2 + b.imag ** 2).tolist()) ** (1.0 / (2 * k))


def _torus_phases(basis: RationalBasis, n_terms: int, theta: np.ndarray) -> np.ndarray:
    """``m_n . theta`` for a block of angle vectors (rows of ``theta``)."""
    M = basis.decomposition[:n_terms].astype(float)
    return np.asarray((M @ theta.T).T)


def _check_basis(D: DirichletSeries, basis: RationalBasis):
    if basis.decomposition.shape[0] < len(D):
        raise ValidationError("basis does not cover every active term")


def hp_norm_torus(D: DirichletSeries, basis: RationalBasis, p: float,
                  sampler: str = "mc", n_samples: int = 100_000, seed: int = 0,
                  block: int = 1 << 15, replicates: int = 16) -> NormEstimate:
    """Average ``|sum a_n prod_j z_j**m_nj|**p`` over the torus.

    ``mc`` uses independent uniform angles; the error bar is the CLT
    standard error of the ``p``-th moment propagated to the norm.  ``qmc``
    uses ``replicates`` independently scrambled Sobol sequences and the
    spread of the replicate means.
    """
    if p < 1:
        raise ValidationError("p must be at least 1")
    _check_basis(D, basis)
    nz = np.flatnonzero(D.coeffs)
    a = D.coeffs[nz]
    rows = basis.decomposition[nz].astype(float)
    d = basis.dim
    n_samples = int(n_samples)
    # keep each phase block near 4e6 complex entries
    block = max(256, min(block, 4_000_000 // max(nz.size, 1)))

    def moments(theta):
        return np.abs(np.exp(1j * np.asarray((rows @ theta.T).T)) @ a) ** p

    if sampler == "mc":
        rng = np.random.default_rng(seed)
        s1 = s2 = 0.0
        done = 0
        while done < n_samples:
            m = min(block, n_samples - done)
            v = moments(2 * np.pi * rng.random((m, d)))
            s1 += math.fsum(v.tolist())
            s2 += math.fsum((v * v).tolist())
            done += m
        mean = s1 / n_samples
        var = max(s2 / n_samples - mean * mean, 0.0)
        se = math.sqrt(var / n_samples)
    elif sampler == "qmc":
        per = max(1, n_samples // replicates)
        means = []
        for r in range(replicates):
            eng = qmc.Sobol(d, scramble=True, seed=np.random.default_rng([seed, r]))
            pts = eng.random(per)
            v = np.concatenate([moments(2 * np.pi * pts[i:i + block])
                                for i in range(0, per, block)])
            means.append(float(v.mean()))
        mean = float(np.mean(means))
        se = float(np.std(means, ddof=1) / math.sqrt(replicates))
        n_samples = per * replicates
    else:
        raise ValidationError("sampler must be 'mc' or 'qmc'")
    if nz.size == 0:
        return NormEstimate(0.0, f"torus_{sampler}", 0.0, n_samples)
    value = mean ** (1.0 / p)
    err = value * se / (p * mean) if mean > 0 else se ** (1.0 / p)
    return NormEstimate(value, f"torus_{sampler}", err, n_samples)


# ------------------------------------------------------- characters and limits

@dataclass(frozen=True, eq=False)
class Character:
    """A point of the torus: one angle per basis generator."""

    basis: RationalBasis
    theta: np.ndarray

    def values(self, n_terms: int) -> np.ndarray:
        """``omega(lambda_n) = exp(i m_n . theta)`` for the first terms."""
        return np.exp(1j * _torus_phases(self.basis, n_terms, self.theta[None, :])[0])


def random_character(basis: RationalBasis, seed: int) -> Character:
    """Independent uniform angles for every generator."""
    rng = np.random.default_rng(seed)
    return Character(basis, 2 * np.pi * rng.random(basis.dim))


def vertical_limit(D: DirichletSeries, character: Character) -> DirichletSeries:
    """Twist the coefficients: ``a_n -> a_n omega(lambda_n)``."""
    _check_basis(D, character.basis)
    return D.with_coeffs(D.coeffs * character.values(len(D)))


def _compensated_cumsum(x: np.ndarray) -> np.ndarray:
    """Cumulative sum along axis 1 with Neumaier compensation."""
    out = np.empty_like(x)
    total = np.zeros(x.shape[0], dtype=x.dtype)
    comp = np.zeros_like(total)
    for j in range(x.shape[1]):
        v = x[:, j]
        t = total + v
        big = np.abs(total) >= np.abs(v)
        comp += np.where(big, (total - t) + v, (v - t) + total)
        total = t
        out[:, j] = total + comp
    return out


def _diameter(z: np.ndarray) -> float:
    """Largest distance between two points of a complex point cloud."""
    pts = np.column_stack([z.real, z.imag])
    if pts.shape[0] > 8:
        try:
            pts = pts[ConvexHull(pts).vertices]
        except Exception:  # degenerate (collinear) clouds
            pass
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff ** 2).sum(-1)).max())


@dataclass
class HelsonStats:
    """Per-character maximal statistics of damped, twisted partial sums.

    Attributes
    ----------
    M : numpy.ndarray
        ``max_{sigma, N}`` of the partial-sum moduli per character.
    tail_cauchy : numpy.ndarray
        Oscillation (diameter) of the ``sigma = u`` partial sums over the
        last quarter of the ``N`` grid.
    checkpoint_osc : numpy.ndarray
        Oscillation from each checkpoint to ``max(N_grid)``.
    decreasing : numpy.ndarray
        True where the checkpoint oscillations strictly decrease.
    """

    u: float
    sigmas: tuple
    checkpoints: tuple
    M: np.ndarray
    tail_cauchy: np.ndarray
    checkpoint_osc: np.ndarray
    decreasing: np.ndarray
    flags: int

    @property
    def mean(self) -> float:
        return float(self.M.mean())

    @property
    def max(self) -> float:
        return float(self.M.max())

    @property
    def fraction_decreasing(self) -> float:
        return float(self.decreasing.mean())

    def csv_rows(self):
        yield ("character", "M", "tail_cauchy") + tuple(f"osc_{c}" for c in self.checkpoints) + ("decreasing",)
        for i in range(self.M.size):
            yield (i, repr(float(self.M[i])), repr(float(self.tail_cauchy[i]))) + \
                tuple(repr(float(x)) for x in self.checkpoint_osc[i]) + (int(self.decreasing[i]),)


def helson_maximal_stat(D: DirichletSeries, u: float, basis: RationalBasis,
                        n_chars: int, N_grid: Sequence[int], seed: int = 0,
                        chunk: int = 125) -> HelsonStats:
    """Maximal statistics of ``sum_{n <= N} a_n e^{-sigma lambda_n} omega(lambda_n)``.

    The supremum over ``sigma >= u`` is taken over the grid ``(u, 2u, 4u)``
    and the supremum over ``N`` over ``N_grid``.  The tail diagnostic at a
    checkpoint ``c`` is the diameter of ``{S_N : c <= N <= max(N_grid)}``
    at ``sigma = u``; the three grid points preceding ``max(N_grid)`` serve
    as checkpoints.  Since the windows are nested the oscillations never
    increase, so the informative event is a strict decrease, which needs
    well separated checkpoints (a geometric grid of ratio about 4 works for
    ``1/n`` coefficients).  ``flags`` counts characters whose maximal
    statistic is not finite.
    """
    if not u > 0:
        raise ValidationError("u must be positive")
    N_grid = sorted(set(int(n) for n in N_grid))
    if len(N_grid) < 4 or N_grid[0] < 1 or N_grid[-1] > len(D):
        raise ValidationError("N_grid needs at least 4 points inside the series")
    _check_basis(D, basis)
    Nmax = N_grid[-1]
    sigmas = (u, 2 * u, 4 * u)
    lam = D.lam[:Nmax]
    a = D.coeffs[:Nmax]
    rng = np.random.default_rng(seed)
    thetas = 2 * np.pi * rng.random((n_chars, basis.dim))
    cps = tuple(N_grid[-4:-1])
    quarter = [n for n in N_grid if n >= N_grid[-1] - (N_grid[-1] - N_grid[0]) / 4.0]
    q0 = min(quarter)
    idx = np.asarray(N_grid) - 1
    M = np.empty(n_chars)
    tail = np.empty(n_chars)
    osc = np.empty((n_chars, 3))
    for start in range(0, n_chars, chunk):
        th = thetas[start:start + chunk]
        omega = np.exp(1j * _torus_phases(basis, Nmax, th))
        best = np.zeros(th.shape[0])
        for s in sigmas:
            S = _compensated_cumsum(omega * (a * np.exp(-s * lam))[None, :])
            best = np.maximum(best, np.abs(S[:, idx]).max(axis=1))
            if s == u:
                for i in range(th.shape[0]):
                    row = S[i]
                    tail[start + i] = _diameter(row[q0 - 1:Nmax])
                    osc[start + i] = [_diameter(row[c - 1:Nmax]) for c in cps[:3]]
        M[start:start + th.shape[0]] = best
    decreasing = (osc[:, 0] > osc[:, 1]) & (osc[:, 1] > osc[:, 2])
    flags = int((~np.isfinite(M)).sum())
    return HelsonStats(u, sigmas, cps, M, tail, osc, decreasing, flags)


# ------------------------------------------------------------------ Lambda_N

@dataclass
class RatioSearch:
    coeffs: np.ndarray
    ratio: float
    error_bar: float
    evaluations: int
    history: list


def lambda_ratio_search(freq: Frequency, N: int, budget: int = 200, seed: int = 0,
                        basis: Optional[RationalBasis] = None,
                        n_samples: int = 20_000, restarts: int = 2) -> RatioSearch:
    """Coordinate ascent on ``||D||_2 / ||D||_1`` over ``N``-term polynomials.

    H1 norms are torus Monte-Carlo estimates on one fixed sample set (common
    random numbers), so candidate comparisons are not blurred by sampling
    noise.  The run starts from the all-ones vector and then from random
    restarts; each coordinate move tries a few moduli and phases.  ``budget``
    caps the number of H1 evaluations.
    """
    N = int(N)
    if budget < 1 or N < 1 or N > len(freq):
        raise ValidationError("need budget >= 1 and 1 <= N <= len(freq)")
    basis = RationalBasis.from_frequency(freq.prefix(N)) if basis is None else basis
    rng = np.random.default_rng(seed)
    theta = 2 * np.pi * rng.random((n_samples, basis.dim))
    E = np.exp(1j * _torus_phases(basis, N, theta))

    evals = 0

    def h1(c):
        nonlocal evals
        evals += 1
        v = np.abs(E @ c)
        return float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size))

    def ratio(c):
        m, se = h1(c)
        r = np.linalg.norm(c) / m
        # the error bar never drops below the rounding of the ratio itself
        return r, max(r * se / m, 8 * np.finfo(float).eps * r)

    best_c = np.ones(N, complex)
    best_r, best_e = ratio(best_c)
    hist = [(evals, best_r)]
    moves = [2.0, 0.5, 1j, -1j, -1.0, 0.0]
    starts = [best_c] + [np.exp(2j * np.pi * rng.random(N)) for _ in range(restarts)]
    for c0 in starts:
        cur = c0.copy()
        cur_r, cur_e = (best_r, best_e) if c0 is best_c else ratio(cur)
        improved = True
        while improved and evals < budget:
            improved = False
            for n in range(N):
                for f in moves:
                    if evals >= budget:
                        break
                    cand = cur.copy()
                    cand[n] = cand[n] * f if f != 0.0 else 0.0
                    if not np.any(cand):
                        continue
                    r, e = ratio(cand)
                    if r > cur_r * (1 + 1e-9):
                        cur, cur_r, cur_e, improved = cand, r, e, True
        if cur_r > best_r:
            best_c, best_r, best_e = cur, cur_r, cur_e
            hist.append((evals, best_r))
        if evals >= budget:
            break
    return RatioSearch(best_c, best_r, best_e, evals, hist)


def block_ratio(freq: Frequency, n: int, n_samples: int = 200_000, seed: int = 0):
    """``||D||_2 / ||D||_1`` for the all-ones polynomial on block ``n``.

    For the geometric-block family block ``n`` holds ``2**n`` terms.  The
    H1 norm is a torus Monte-Carlo estimate over the block's generators.
    """
    if freq.block is None:
        raise ValidationError("block_ratio needs a block family")
    idx = np.flatnonzero(freq.block == n)
    if idx.size == 0 or idx[-1] + 1 > len(freq) or (idx.size < 2 ** n and freq.variant != "bc_blocks"):
        raise ValidationError(f"block {n} is not fully materialized")
    basis = RationalBasis.from_frequency(freq)
    a = np.zeros(idx[-1] + 1, complex)
    a[idx] = 1.0
    D = DirichletSeries(freq, a)
    est = hp_norm_torus(D, basis, 1.0, "mc", n_samples, seed)
    r = h2_norm(D) / est.value
    return r, r * est.error_bar / est.value
