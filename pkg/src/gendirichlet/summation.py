"""Dirichlet series values, summation methods and abscissa estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernel as kern
from .errors import NumericalError, ValidationError
from .frequency import Frequency, frequency_from_json, log_gap, log_gaps


@dataclass(frozen=True, eq=False)
class DirichletSeries:
    """Coefficients ``a_n`` attached to the first ``len(coeffs)`` frequency terms."""

    freq: Frequency
    coeffs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=complex).ravel()
        if a.shape[0] > len(self.freq):
            raise ValidationError("more coefficients than frequency terms")
        if not np.all(np.isfinite(a)):
            raise ValidationError("coefficients must be finite")
        object.__setattr__(self, "coeffs", a)

    def __len__(self):
        return int(self.coeffs.shape[0])

    @property
    def lam(self) -> np.ndarray:
        return self.freq.values[: len(self)]

    def with_coeffs(self, coeffs) -> "DirichletSeries":
        return DirichletSeries(self.freq, np.asarray(coeffs, dtype=complex))

    def __add__(self, other: "DirichletSeries") -> "DirichletSeries":
        n = max(len(self), len(other))
        freq = self.freq if len(self.freq) >= len(other.freq) else other.freq
        a = np.zeros(n, complex)
        a[: len(self)] += self.coeffs
        a[: len(other)] += other.coeffs
        return DirichletSeries(freq, a)

    def __mul__(self, c) -> "DirichletSeries":
        return self.with_coeffs(self.coeffs * complex(c))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"frequency": self.freq.to_json(),
                "coeffs": [[repr(float(z.real)), repr(float(z.imag))] for z in self.coeffs]}


def series_from_json(obj: dict, precision_bits: int = 256) -> DirichletSeries:
    """Read ``{"frequency": {...}, "coeffs": [...]}``.

    Coefficients are numbers, ``[re, im]`` pairs, or a rule
    ``{"rule": "power", "exponent": p}`` (``a_n = n**-p``),
    ``{"rule": "alternating"}``, ``{"rule": "ones"}`` or
    ``{"rule": "geometric", "ratio": q}`` (``a_n = q**n``) together with
    ``"count"``.
    """
    c = obj.get("coeffs")
    if isinstance(c, dict):
        count = int(c.get("count", obj.get("count", 0)))
        n = np.arange(1, count + 1, dtype=float)
        rule = c.get("rule")
        if rule == "power":
            a = n ** (-float(c["exponent"]))
        elif rule == "alternating":
            a = (-1.0) ** n
        elif rule == "ones":
            a = np.ones_like(n)
        elif rule == "geometric":
            a = float(c["ratio"]) ** n
        else:
            raise ValidationError(f"unknown coefficient rule {rule!r}")
    elif isinstance(c, list):
        a = np.array([complex(float(z[0]), float(z[1])) if isinstance(z, list) else complex(z)
                      for z in c])
        count = len(a)
    else:
        raise ValidationError("series document needs 'coeffs'")
    freq = frequency_from_json(obj["frequency"], count or None, precision_bits)
    if len(freq) < len(a):
        raise ValidationError("frequency shorter than coefficient list")
    return DirichletSeries(freq, a)


def random_series(freq: Frequency, seed: int, decay: float = 2.0,
                  count: Optional[int] = None) -> DirichletSeries:
    """Complex Gaussian coefficients damped by ``n**-decay``."""
    count = len(freq) if count is None else int(count)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    return DirichletSeries(freq, z * np.arange(1, count + 1) ** (-float(decay)))


# ---------------------------------------------------------------- evaluation

def neumaier_sum(blocks):
    """Compensated running sum of an iterable of equally shaped arrays."""
    total = None
    comp = None
    for x in blocks:
        x = np.asarray(x)
        if total is None:
            total = x.astype(complex if np.iscomplexobj(x) else float, copy=True)
            comp = np.zeros_like(total)
            continue
        t = total + x
        big = np.abs(total) >= np.abs(x)
        comp += np.where(big, (total - t) + x, (x - t) + total)
        total = t
    return total + comp


def _fsum_complex(z) -> complex:
    z = np.asarray(z)
    return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))


def eval_partial(D: DirichletSeries, s, N: Optional[int] = None):
    """``sum_{n <= N} a_n exp(-lambda_n s)`` with compensated summation.

    ``s`` may be a scalar or an array; scalars use exactly rounded sums.
    """
    N = len(D) if N is None else int(N)
    if not 0 <= N <= len(D):
        raise ValidationError(f"N={N} outside 0..{len(D)}")
    a, lam = D.coeffs[:N], D.lam[:N]
    if np.ndim(s) == 0:
        return _fsum_complex(a * np.exp(-lam * complex(s)))
    s = np.asarray(s, dtype=complex)
    if N == 0:
        return np.zeros(s.shape, complex)
    if N <= 1000:
        return np.exp(-np.multiply.outer(s, lam)) @ a
    return neumaier_sum(a[i] * np.exp(-lam[i] * s) for i in range(N))


def partial_sums_on_grid(D: DirichletSeries, s_grid, N_list: Sequence[int]):
    """Partial sums ``S_N(s)`` for every ``N`` in ``N_list`` (one pass)."""
    s = np.asarray(s_grid, dtype=complex)
    want = sorted(set(int(n) for n in N_list))
    if want and (want[0] < 0 or want[-1] > len(D)):
        raise ValidationError("N_list outside the series length")
    out = {}
    total = np.zeros(s.shape, complex)
    comp = np.zeros(s.shape, complex)
    j = 0
    for n in range(0, (want[-1] if want else 0) + 1):
        while j < len(want) and want[j] == n:
            out[n] = total + comp
            j += 1
        if n == len(D):
            break
        x = D.coeffs[n] * np.exp(-D.lam[n] * s)
        t = total + x
        big = np.abs(total) >= np.abs(x)
        comp += np.where(big, (total - t) + x, (x - t) + total)
        total = t
    return [out[int(n)] for n in N_list]


def riesz_mean(D: DirichletSeries, x: float, k: float) -> DirichletSeries:
    """Series with coefficients ``a_n (1 - lambda_n/x)**k`` for ``lambda_n < x``."""
    if not x > 0 or not k > 0:
        raise ValidationError("riesz_mean needs x > 0 and k > 0")
    lam = D.lam
    w = np.where(lam < x, np.clip(1.0 - lam / x, 0.0, 1.0) ** k, 0.0)
    return D.with_coeffs(D.coeffs * w)


def mollified_sum(D: DirichletSeries, kernel: kern.KernelSpec, N: float,
                  weight_tol: float = 1e-6) -> DirichletSeries:
    """Series with coefficients ``a_n hat(lambda_n / N)``.

    Kernels whose transform is not compactly supported are rejected when
    the weights have not visibly decayed by the end of the prefix
    (``len * |last weight| > weight_tol``).
    """
    if not N > 0:
        raise ValidationError("N must be positive")
    k = kern.dilate(kernel, N)
    w = np.asarray(kern.hat_eval(k, D.lam), dtype=float)
    if not math.isfinite(k.hat_support) and len(D) * abs(w[-1]) > weight_tol:
        raise ValidationError("kernel weights do not decay over this prefix; "
                              "the weighted series may diverge")
    return D.with_coeffs(D.coeffs * w)


def t_sigma(D: DirichletSeries, sigma: float) -> DirichletSeries:
    """Horizontal translation: coefficients times ``exp(-sigma lambda_n)``."""
    return D.with_coeffs(D.coeffs * np.exp(-float(sigma) * D.lam))


# ------------------------------------------------------ convolution identity

@dataclass
class ConvolutionCheck:
    lhs: complex
    rhs: complex
    gap: float
    T: float
    nodes: int


def vertical_convolution_check(D: DirichletSeries, kernel: kern.KernelSpec,
                               s: complex, tol: float = 1e-6,
                               T: Optional[float] = None) -> ConvolutionCheck:
    """Compare ``sum a_n hat(lambda_n) e^{-lambda_n s}`` with ``int f(s+it) psi(t) dt``.

    ``f`` is the finite series itself, so no truncation tail is involved.
    The integral is computed by composite Gauss-Legendre quadrature on
    ``[-T, T]``; the part outside uses the kernel's closed-form tail.
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    s = complex(s)
    lam, a = D.lam, D.coeffs
    lhs = _fsum_complex(a * kern.hat_eval(kernel, lam) * np.exp(-lam * s))
    if T is None:
        T = 60.0 / kernel.scale if kernel.variant == "gaussian" else 600.0 / kernel.scale
        if kernel.variant == "exponential":
            T = 45.0 / kernel.scale
    fmax = float(lam.max()) + (kernel.hat_support if math.isfinite(kernel.hat_support)
                               else 8.0 * kernel.scale)
    width = min(math.pi / (2.0 * max(fmax, 1e-9)), T / 8)
    edges = np.linspace(0.0, T, int(math.ceil(T / width)) + 1)
    xg, wg = kern._gauss_legendre(16)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    t = (mid + half * xg).ravel()
    w = (half * wg).ravel() * np.asarray(kern.time_eval(kernel, t))
    # f(s+it) + f(s-it) on the positive half-line, by blocks of nodes
    damped = a * np.exp(-lam * s)
    acc = 0j
    for start in range(0, t.size, 4096):
        tt = t[start:start + 4096]
        fpos = np.exp(-1j * np.outer(tt, lam)) @ damped
        fneg = np.exp(1j * np.outer(tt, lam)) @ damped
        acc += _fsum_complex((fpos + fneg) * w[start:start + 4096])
    tail = _fsum_complex(damped * kern._cos_transform_tail(kernel, lam, T))
    rhs = acc + tail
    return ConvolutionCheck(lhs, rhs, abs(lhs - rhs), float(T), int(t.size))


# ------------------------------------------------------------- abscissae

@dataclass
class AbscissaEstimate:
    kind: str
    samples: list
    estimate: float


def sigma_u_grid(freq: Frequency, N: int, samples: int = 4096) -> np.ndarray:
    """Documented t-grid: ``[-T, T]`` with ``T = 10 max(1, 2 pi / min gap)``."""
    if N < 2:
        return np.linspace(-10.0, 10.0, samples)
    mingap = float(np.exp(log_gaps(freq, np.arange(1, N), np.arange(2, N + 1)).min()))
    T = 10.0 * max(1.0, 2.0 * math.pi / mingap) if mingap > 0 else 10.0
    return np.linspace(-T, T, samples)


def bohr_cahen(D: DirichletSeries, kind: str, prefix: Optional[int] = None,
               samples: int = 4096) -> AbscissaEstimate:
    """Bohr-Cahen quotients for ``sigma_a``, ``sigma_c`` or ``sigma_u``.

    The estimate is the supremum of the quotients over the tail half of the
    prefix.  A series with at most one nonzero coefficient is a single
    exponential, whose abscissae are ``-inf``.
    """
    kind = kind.lower().replace("sigma_", "")
    if kind not in ("a", "c", "u"):
        raise ValidationError("kind must be sigma_a, sigma_c or sigma_u")
    N = len(D) if prefix is None else int(prefix)
    if N < 2 or N > len(D):
        raise ValidationError("prefix must lie in 2..len(D)")
    a = D.coeffs[:N]
    nz = np.count_nonzero(a)
    if nz == 0:
        raise ValidationError("all coefficients are zero")
    if nz == 1:
        return AbscissaEstimate("sigma_" + kind, [], -math.inf)
    lam = D.lam[:N]
    if kind == "a":
        acc = np.cumsum(np.abs(a))
    elif kind == "c":
        acc = np.abs(np.cumsum(a))
    else:
        t = sigma_u_grid(D.freq, N, samples)
        acc = np.empty(N)
        total = np.zeros(t.shape, complex)
        comp = np.zeros(t.shape, complex)
        for i in range(N):
            x = a[i] * np.exp(-1j * lam[i] * t)
            s = total + x
            big = np.abs(total) >= np.abs(x)
            comp += np.where(big, (total - s) + x, (x - s) + total)
            total = s
            acc[i] = np.abs(total + comp).max()
    rows = []
    with np.errstate(divide="ignore"):
        logs = np.log(acc)
    for n in range(N):
        if lam[n] > 0:
            rows.append((n + 1, float(logs[n] / lam[n])))
    tail = [q for n, q in rows if n > N // 2]
    return AbscissaEstimate("sigma_" + kind, rows, float(max(tail)) if tail else math.nan)


# --------------------------------------------------------- projection bounds

@dataclass
class ProjectionBound:
    explicit: float
    closed_form: float
    kappa: float
    log_kappa: float
    error: float
    N: int
    M: int


def projection_bound(freq: Frequency, N: int, M: int) -> ProjectionBound:
    """Bound for the partial-sum projection from the trapezoid kernel.

    With ``h = (lambda_M - lambda_N)/2`` the explicit value is the L1 norm of
    the unit-normalized trapezoid with plateau ``lambda_N`` and support
    ``lambda_M`` plus ``M - 1 - N``; the closed form replaces the norm by
    ``(4 + 4 log kappa)/pi`` with ``kappa = max(lambda_N + h, 1/h)``.  Gaps
    below double resolution are handled in log scale.
    """
    N, M = int(N), int(M)
    if not 1 <= N < M <= len(freq):
        raise ValidationError("need 1 <= N < M <= len(freq)")
    log_h = log_gap(freq, N, M) - math.log(2.0)
    lam_n = freq[N]
    log_c = np.logaddexp(math.log(lam_n), log_h) if lam_n > 0 else log_h
    log_r = float(log_c - log_h)
    if log_r < math.log(kern._ASYMPTOTIC_RATIO):
        j2, err = kern.sinc_l1_ratio(r=math.exp(log_r))
    else:
        j2, err = kern.sinc_l1_ratio(log_r=log_r)
    penalty = M - 1 - N
    log_kappa = float(max(log_c, -log_h))
    kappa = math.exp(log_kappa) if log_kappa < 700 else math.inf
    return ProjectionBound(j2 / math.pi + penalty, (4 + 4 * log_kappa) / math.pi + penalty,
                           kappa, log_kappa, err / math.pi, N, M)


def best_projection_bound(freq: Frequency, N: int, horizon: int):
    """Smallest-``M`` minimizer of the explicit bound over ``N < M <= N + horizon``."""
    if horizon < 1:
        raise ValidationError("horizon must be at least 1")
    best = None
    for M in range(N + 1, min(N + horizon, len(freq)) + 1):
        pb = projection_bound(freq, N, M)
        if best is None or pb.explicit < best.explicit:
            best = pb
    if best is None:
        raise ValidationError("no admissible M within the materialized prefix")
    return best.M, best


# ----------------------------------------------------------- uniform tails

def uniform_tail(D: DirichletSeries, method: str, eps: float, grid,
                 N_list: Sequence[float], tail_bound: Callable[[float], float],
                 kernel: Optional[kern.KernelSpec] = None, k: float = 1.0):
    """Supremum errors of an approximation scheme against a certified reference.

    Parameters
    ----------
    method : {"partial", "riesz", "mollified"}
        ``partial`` uses ``N`` terms; ``riesz`` and ``mollified`` use ``N`` as
        the cutoff ``x`` (frequency units).
    eps : float
        The grid must lie in ``Re s >= eps``.
    grid : array of complex
    tail_bound : callable
        ``tail_bound(sigma)`` bounds ``|sum_{n > len(D)} a_n e^{-lambda_n s}|``
        for ``Re s >= sigma``; it is added to every reported error.

    Returns
    -------
    list of float
    """
    if not eps > 0:
        raise ValidationError("eps must be positive")
    grid = np.asarray(grid, dtype=complex)
    if grid.real.min() < eps - 1e-15:
        raise ValidationError("grid leaves the half-plane Re s >= eps")
    tb = float(tail_bound(float(grid.real.min())))
    if not math.isfinite(tb):
        raise NumericalError("uncertifiable tail")
    ref = eval_partial(D, grid)
    out = []
    for N in N_list:
        if method == "partial":
            approx = eval_partial(D, grid, int(N))
        elif method == "riesz":
            approx = eval_partial(riesz_mean(D, float(N), k), grid)
        elif method == "mollified":
            approx = eval_partial(mollified_sum(D, kernel or kern.fejer(), float(N)), grid)
        else:
            raise ValidationError(f"unknown method {method!r}")
        out.append(float(np.abs(approx - ref).max()) + tb)
    return out


def sup_on_imaginary_axis(D: DirichletSeries, t_grid) -> float:
    """Grid estimate of ``sup_t |D(it)|`` (a lower bound of the sup-norm)."""
    return float(np.abs(eval_partial(D, 1j * np.asarray(t_grid, float))).max())
