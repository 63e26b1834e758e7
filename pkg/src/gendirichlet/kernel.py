"""Summability kernels with compactly supported (or fast decaying) transforms.

Fourier convention: ``hat(f)(xi) = integral f(t) exp(-i xi t) dt`` and the
inverse carries ``1/(2 pi)``.  Every kernel is normalized so that
``hat(0) = 1``.

The trapezoid kernel with plateau half-width ``a`` and support half-width
``b`` has time form ``sin(c t) sin(h t) / (pi h t**2)`` with ``h = (b-a)/2``
and ``c = a + h``.  Its L1 norm only depends on the ratio ``r = c/h`` and is
computed by :func:`sinc_l1_ratio`, which combines Gauss-Legendre panels near
the origin with closed-form Fourier-mode integrals elsewhere, so it stays
fast and accurate for ratios up to ``exp(10**4)`` and beyond.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

from .errors import QuadratureError, ValidationError

# lim_{r->oo} [ integral_0^oo |sin(r x) sin(x)| / x**2 dx - (2/pi) log r ]
SINC_L1_CONSTANT = 1.5541950105499611507
_ASYMPTOTIC_RATIO = 1e7

VARIANTS = ("trapezoid", "riesz", "fejer", "gaussian", "exponential")


@dataclass(frozen=True)
class KernelSpec:
    """A unit-normalized kernel, optionally dilated.

    Parameters
    ----------
    variant : str
        ``trapezoid``, ``riesz``, ``fejer``, ``gaussian`` or ``exponential``.
    a, b : float
        Plateau and support half-widths of the trapezoid.
    alpha : float
        Exponent of the Riesz kernel.
    scale : float
        Dilation ``N``: the kernel is ``N psi(N t)`` with transform
        ``hat(xi / N)``.
    """

    variant: str
    a: float = 0.0
    b: float = 1.0
    alpha: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        v = self.variant.lower()
        if v not in VARIANTS:
            raise ValidationError(f"unknown kernel {self.variant!r}")
        object.__setattr__(self, "variant", v)
        if v == "trapezoid" and not (0 <= self.a < self.b):
            raise ValidationError("trapezoid needs 0 <= a < b")
        if v == "riesz" and not self.alpha > 0:
            raise ValidationError("riesz needs alpha > 0")
        if not self.scale > 0:
            raise ValidationError("scale must be positive")

    @property
    def h(self) -> float:
        return 0.5 * (self.b - self.a)

    @property
    def hat_support(self) -> float:
        """Half-width of the transform's support (``inf`` if not compact)."""
        base = {"trapezoid": self.b, "riesz": 1.0, "fejer": 1.0}.get(self.variant, math.inf)
        return base * self.scale

    def describe(self) -> str:
        v = self.variant
        body = {"trapezoid": f"a={self.a!r},b={self.b!r}",
                "riesz": f"alpha={self.alpha!r}"}.get(v, "")
        if self.scale != 1.0:
            body = (body + "," if body else "") + f"scale={self.scale!r}"
        return v + (":" + body if body else "")


def trapezoid(a: float, b: float) -> KernelSpec:
    return KernelSpec("trapezoid", a=float(a), b=float(b))


def riesz(alpha: float) -> KernelSpec:
    return KernelSpec("riesz", alpha=float(alpha))


def fejer() -> KernelSpec:
    return KernelSpec("fejer")


def gaussian() -> KernelSpec:
    return KernelSpec("gaussian")


def exponential() -> KernelSpec:
    return KernelSpec("exponential")


def dilate(kernel: KernelSpec, N: float) -> KernelSpec:
    """Return ``N * psi(N t)``, whose transform is ``hat(xi / N)``."""
    return replace(kernel, scale=kernel.scale * float(N))


def parse_kernel(text: str) -> KernelSpec:
    """Parse ``name[:key=value,...]``, e.g. ``trapezoid:a=2,b=4``."""
    name, _, rest = text.strip().partition(":")
    kw = {}
    for item in filter(None, re.split(r"[,;]", rest)):
        k, _, v = item.partition("=")
        try:
            kw[k.strip()] = float(v)
        except ValueError as exc:
            raise ValidationError(f"bad kernel parameter {item!r}") from exc
    unknown = set(kw) - {"a", "b", "alpha", "scale"}
    if unknown:
        raise ValidationError(f"unknown kernel parameters {sorted(unknown)}")
    return KernelSpec(name.strip(), **kw)


@dataclass(frozen=True)
class SincProduct:
    """``psi_{a,h}(t) = sin((a+h) t)/t * sin(h t)/(h t)``, equal to ``a+h`` at 0."""

    a: float
    h: float

    def __post_init__(self):
        if self.a < 0 or not self.h > 0:
            raise ValidationError("SincProduct needs a >= 0 and h > 0")

    @property
    def kappa(self) -> float:
        return max(self.a + self.h, 1.0 / self.h)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        c = self.a + self.h
        return c * np.sinc(c * t / np.pi) * np.sinc(self.h * t / np.pi)


# ------------------------------------------------------------------ evaluation

def hat_eval(kernel: KernelSpec, xi):
    """Fourier transform of the kernel (exact piecewise formulas)."""
    x = np.abs(np.asarray(xi, dtype=float)) / kernel.scale
    v = kernel.variant
    if v == "trapezoid":
        out = np.clip((kernel.b - x) / (kernel.b - kernel.a), 0.0, 1.0)
    elif v == "fejer":
        out = np.clip(1.0 - x, 0.0, 1.0)
    elif v == "riesz":
        out = np.where(x < 1.0, np.clip(1.0 - x, 0.0, 1.0) ** kernel.alpha, 0.0)
    elif v == "gaussian":
        out = np.exp(-x * x / 4.0)
    else:
        out = 1.0 / (1.0 + x * x)
    return out if out.ndim else float(out)


def time_eval(kernel: KernelSpec, t, tol: float = 1e-10):
    """Evaluate the kernel in the time domain.

    Closed forms are used for every variant except Riesz with
    ``alpha != 1``, which goes through oscillatory quadrature of the inverse
    transform.

    Raises
    ------
    QuadratureError
        If the Riesz quadrature misses ``tol``; ``achieved`` holds the bound.
    """
    s = kernel.scale
    tt = np.asarray(t, dtype=float) * s
    v = kernel.variant
    if v == "trapezoid":
        c, h = kernel.a + kernel.h, kernel.h
        out = (c / np.pi) * np.sinc(c * tt / np.pi) * np.sinc(h * tt / np.pi)
    elif v == "fejer" or (v == "riesz" and kernel.alpha == 1.0):
        out = np.sinc(tt / (2 * np.pi)) ** 2 / (2 * np.pi)
    elif v == "gaussian":
        out = np.exp(-tt * tt) / math.sqrt(math.pi)
    elif v == "exponential":
        out = 0.5 * np.exp(-np.abs(tt))
    else:
        flat = np.vectorize(lambda u: _riesz_time(kernel.alpha, u, tol / s),
                            otypes=[float])(tt)
        out = flat
    out = s * out
    return out if np.ndim(out) else float(out)


def _riesz_time(alpha: float, t: float, tol: float) -> float:
    """``(1/pi) * integral_0^1 u**alpha cos((1-u) t) du``."""
    t = abs(t)
    if t < 1e-4:
        terms = [(-1) ** j * t ** (2 * j) / math.factorial(2 * j)
                 * special.beta(2 * j + 1, alpha + 1) for j in range(4)]
        return math.fsum(terms) / math.pi
    # cos((1-u)t) = cos t cos(ut) + sin t sin(ut); the algebraic endpoint at
    # u = 0 is handled by QAWS on a short piece, the rest by QAWO.
    eps = min(1.0, 2.0 * math.pi / t)
    total, err = 0.0, 0.0
    for wfun, outer in (("cos", math.cos(t)), ("sin", math.sin(t))):
        fn = (lambda u: math.cos(u * t)) if wfun == "cos" else (lambda u: math.sin(u * t))
        v1, e1 = integrate.quad(fn, 0.0, eps, weight="alg", wvar=(alpha, 0.0),
                                epsabs=tol / 8, epsrel=1e-13, limit=200)
        v2, e2 = 0.0, 0.0
        if eps < 1.0:
            v2, e2 = integrate.quad(lambda u: u ** alpha, eps, 1.0, weight=wfun,
                                    wvar=t, epsabs=tol / 8, epsrel=1e-13, limit=400)
        total += outer * (v1 + v2)
        err += abs(outer) * (e1 + e2)
    if err / math.pi > tol:
        raise QuadratureError(f"Riesz quadrature at t={t} reached {err / math.pi:.3g}",
                              err / math.pi)
    return total / math.pi


def riesz_time_closed_form(alpha: float, t: float, dps: int = 30) -> float:
    """Reference value via a confluent hypergeometric function (mpmath)."""
    import mpmath as mp
    with mp.workdps(dps):
        if t == 0:
            return float(1 / (mp.pi * (alpha + 1)))
        z = mp.exp(1j * t) * mp.hyp1f1(alpha + 1, alpha + 2, -1j * t) / (alpha + 1)
        return float(mp.re(z) / mp.pi)


# --------------------------------------------------- auxiliary sine integrals

def _aux(z):
    """Return ``(1 - z f(z), g(z))`` for ``z > 0``.

    ``f`` and ``g`` are the auxiliary functions of the sine and cosine
    integrals: ``pi/2 - Si = f cos + g sin`` and ``Ci = f sin - g cos``.
    """
    z = np.asarray(z, dtype=float)
    F1 = np.empty_like(z)
    g = np.empty_like(z)
    big = z >= 40.0
    if big.any():
        zb = z[big]
        iz2 = 1.0 / (zb * zb)
        sf = np.zeros_like(zb)
        sg = np.zeros_like(zb)
        tf = np.ones_like(zb)
        tg = np.ones_like(zb)
        for k in range(12):
            sf += tf
            sg += tg
            tf = -tf * (2 * k + 1) * (2 * k + 2) * iz2
            tg = -tg * (2 * k + 2) * (2 * k + 3) * iz2
        F1[big] = 1.0 - sf
        g[big] = sg * iz2
    small = ~big
    if small.any():
        zs = z[small]
        si, ci = special.sici(zs)
        a = np.pi / 2 - si
        F1[small] = 1.0 - zs * (ci * np.sin(zs) + a * np.cos(zs))
        g[small] = -ci * np.cos(zs) + a * np.sin(zs)
    return F1, g


def cos_tail(omega, X: float, cos_z=None, sin_z=None):
    """``integral_X^oo cos(omega x) / x**2 dx`` for ``X > 0``.

    ``cos_z`` and ``sin_z`` may supply accurately reduced values of
    ``cos(omega X)`` and ``sin(omega X)``.
    """
    w = np.abs(np.asarray(omega, dtype=float))
    z = w * X
    if cos_z is None:
        cos_z, sin_z = np.cos(z), np.sin(z)
    zero = z == 0
    F1, g = _aux(np.where(zero, 1.0, z))
    out = cos_z * F1 / X - w * g * sin_z
    return np.where(zero, 1.0 / X, out)


def _sin_antiderivative(c, x, sin_z, cos_z):
    """Antiderivative of ``sin(c x)/x**2`` (``c > 0``) at ``x``."""
    F1, g = _aux(c * x)
    return -(sin_z / x) * F1 - c * g * cos_z


def _frac_multiple(r: float, ints) -> np.ndarray:
    """``frac(ints * r)`` without losing the fractional part to rounding."""
    mant, ex = math.frexp(r)
    hi = math.ldexp(math.floor(math.ldexp(mant, 26)), ex - 26)
    lo = r - hi
    ints = np.asarray(ints, dtype=float)
    return np.mod(np.mod(ints * hi, 1.0) + ints * lo, 1.0)


_GL_CACHE = {}


def _gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _fourier_abs_sin(M):
    """Cosine coefficients of ``|sin y| = sum c_m cos(2 m y)``."""
    m = np.arange(M + 1, dtype=float)
    c = -4.0 / (np.pi * (4 * m * m - 1))
    c[0] = 2.0 / np.pi
    return c


def _sinc_l1_half(r: float, M: int, K: int, N: int, LA: int = 32) -> float:
    """``J(r) = integral_0^oo |sin(r x) sin x| / x**2 dx`` for ``r >= 1``."""
    c = _fourier_abs_sin(max(M, N))
    cM = c[: M + 1]
    # A: fast half-periods [j pi/r, (j+1) pi/r] for j < jA, Gauss-Legendre
    jA = min(int(math.floor(r)), LA)
    xA = jA * math.pi / r
    xg, wg = _gauss_legendre(24)
    u = 0.5 * (xg + 1.0)
    x = (np.arange(jA)[:, None] + u) * (math.pi / r)
    A = float((np.sin(x) * np.sin(u * np.pi) / (x * x) * wg).sum()) * 0.5 * math.pi / r

    m = np.arange(1, M + 1, dtype=float)
    # B: [xA, pi], |sin r x| expanded in Fourier modes, per-mode closed forms
    si, ci = special.sici(np.array([xA, math.pi]))
    B = c[0] * ((ci[1]) - (-math.sin(xA) / xA + ci[0]))
    ph1 = 2 * np.pi * _frac_multiple(r, m)
    tot = np.zeros(M)
    for s in (1.0, -1.0):
        cc = 2 * m * r + s
        th = s * jA * math.pi / r
        at_pi = _sin_antiderivative(cc, math.pi, -np.sin(ph1), -np.cos(ph1))
        at_a = _sin_antiderivative(cc, xA, math.sin(th) + 0 * m, math.cos(th) + 0 * m)
        tot += s * (at_pi - at_a)
    B += 0.5 * float((cM[1:] * tot).sum())

    # C: slow cells [k pi, (k+1) pi], k = 1..K, with sign (-1)**k
    k = np.arange(1, K + 2, dtype=float)
    _, ci_k = special.sici(k * np.pi)
    eps = (-1.0) ** np.arange(1, K + 1)
    C = c[0] * float((eps * np.diff(ci_k)).sum())
    mm, kk = m[:, None], k[None, :]
    ph = 2 * np.pi * _frac_multiple(r, mm * kk)
    sgn = (-1.0) ** kk
    sz, cz = sgn * np.sin(ph), sgn * np.cos(ph)
    xk = np.broadcast_to(kk * np.pi, ph.shape)
    tot = np.zeros(ph.shape)
    for s in (1.0, -1.0):
        tot += s * _sin_antiderivative(np.broadcast_to(2 * mm * r + s, ph.shape), xk, sz, cz)
    C += 0.5 * float((cM[1:, None] * np.diff(tot, axis=1) * eps[None, :]).sum())

    # D: tail [X, oo), double Fourier sum of cos(omega x)/x**2 integrals
    X = (K + 1) * math.pi
    cn = c[: N + 1]
    n = np.arange(N + 1, dtype=float)
    D = cn[0] * cn[0] / X
    F1, _ = _aux(2 * n[1:] * X)
    D += float((cn[0] * cn[1:] * F1 / X).sum())
    phm = 2 * np.pi * _frac_multiple(r, m * (K + 1))
    cosm, sinm = np.cos(phm)[:, None], np.sin(phm)[:, None]
    wp = 2 * mm * r + 2 * n[None, :]
    wm = 2 * mm * r - 2 * n[None, :]
    Ep = cos_tail(wp, X, np.broadcast_to(cosm, wp.shape), np.broadcast_to(sinm, wp.shape))
    Em = cos_tail(wm, X, np.broadcast_to(cosm, wm.shape), np.sign(wm) * sinm)
    D += 0.5 * float((cM[1:, None] * cn[None, :] * (Ep + Em)).sum())
    return A + B + C + D


def sinc_l1_ratio(r: Optional[float] = None, log_r: Optional[float] = None):
    """L1 norm of ``sin(r x) sin(x) / x**2`` over the real line.

    Parameters
    ----------
    r : float, optional
        Frequency ratio, at least 1.
    log_r : float, optional
        Natural log of the ratio, for ratios beyond double range.

    Returns
    -------
    value, error : float
        The norm and an error estimate from two truncation levels.
    """
    if log_r is None:
        if r is None or not r >= 1.0:
            raise ValidationError("ratio must be at least 1")
        log_r = math.log(r)
    elif r is None and log_r < math.log(_ASYMPTOTIC_RATIO):
        r = math.exp(log_r)
    if log_r >= math.log(_ASYMPTOTIC_RATIO):
        # the remainder decays like r**-2
        return 2.0 * (2.0 / math.pi * log_r + SINC_L1_CONSTANT), 4e-15 * (1.0 + log_r)
    fine = _sinc_l1_half(r, 100, 200, 400)
    coarse = _sinc_l1_half(r, 60, 100, 300)
    return 2.0 * fine, 2.0 * abs(fine - coarse) + 1e-12


# ------------------------------------------------------------------- L1 norms

def l1_norm_estimate(obj, tol: float = 1e-6):
    """L1 norm and its error estimate.

    ``obj`` is a :class:`KernelSpec` or a :class:`SincProduct`.  Dilation
    does not change the norm.
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if isinstance(obj, SincProduct):
        return sinc_l1_ratio(1.0 + obj.a / obj.h)
    v = obj.variant
    if v in ("fejer", "gaussian", "exponential") or (v == "riesz" and obj.alpha >= 1):
        # nonnegative kernels (Polya's criterion covers Riesz with alpha >= 1)
        return 1.0, 0.0
    if v == "trapezoid":
        val, err = sinc_l1_ratio(1.0 + obj.a / obj.h)
        return val / math.pi, err / math.pi
    return _riesz_l1(obj.alpha, tol)


def l1_norm(obj, tol: float = 1e-6) -> float:
    """L1 norm of a kernel or sinc product (error below ``tol``)."""
    val, err = l1_norm_estimate(obj, tol)
    if err > tol:
        raise QuadratureError(f"L1 norm error {err:.3g} exceeds {tol:.3g}", err)
    return val


def _riesz_l1(alpha: float, tol: float):
    """Numeric L1 norm of the Riesz kernel for ``0 < alpha < 1``.

    Integrates ``|psi|`` on ``[0, T]`` and models the tail by the leading
    endpoint asymptotics ``Gamma(alpha+1) |cos(t - pi (alpha+1)/2)| / (pi t**(1+alpha))``.
    """
    kern = riesz(alpha)

    def head(T):
        edges = np.arange(0.0, T + 1e-9, math.pi / 4)
        xg, wg = _gauss_legendre(16)
        mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
        half = 0.5 * (edges[1:] - edges[:-1])[:, None]
        pts = mid + half * xg
        vals = np.abs(time_eval(kern, pts.ravel(), tol=1e-12)).reshape(pts.shape)
        return float((vals * wg * half).sum())

    def tail(T):
        amp = special.gamma(alpha + 1) / math.pi
        return amp * (2 / math.pi) / (alpha * T ** alpha)

    T1, T2 = 200 * math.pi, 400 * math.pi
    v1 = 2 * (head(T1) + tail(T1))
    v2 = 2 * (head(T2) + tail(T2))
    return v2, abs(v2 - v1)


# --------------------------------------------------------------- decay fits

@dataclass
class DecayEnvelope:
    """Fitted bound ``|psi(x)| <= C x**-(1+delta)`` on a grid."""

    C: float
    delta: float
    x: np.ndarray
    envelope: np.ndarray
    sup0: float = 0.0

    def majorant(self, x):
        """Radial nonincreasing majorant: constant on ``[0, 1)``, power law beyond."""
        x = np.abs(np.asarray(x, dtype=float))
        tail = self.C * np.maximum(x, 1.0) ** (-(1.0 + self.delta))
        return np.where(x < 1.0, max(self.sup0, self.C), tail)


def decay_envelope(kernel: KernelSpec, x_grid=None, delta_max: float = 10.0,
                   delta: Optional[float] = None) -> DecayEnvelope:
    """Fit the algebraic decay of ``|psi|`` on a grid in ``[1, oo)``.

    The running supremum from the right is a nonincreasing majorant of
    ``|psi|``.  Its record points (where the majorant touches ``|psi|``) in
    the upper two thirds of the grid's log range are regressed against
    ``log x``; ``delta`` is minus the slope minus one, capped at
    ``delta_max``.  ``C`` is then the smallest constant for which the bound
    holds at every grid point.  Passing ``delta`` skips the regression and
    only fits ``C``.
    """
    x = np.geomspace(1.0, 1e3, 4000) if x_grid is None else np.asarray(x_grid, float)
    if x.size < 3 or x.min() < 1.0:
        raise ValidationError("grid must have at least 3 points in [1, oo)")
    x = np.sort(x)
    vals = np.abs(time_eval(kernel, x))
    env = np.maximum.accumulate(vals[::-1])[::-1]
    if delta is None:
        lo = math.exp(math.log(x[0]) + (math.log(x[-1]) - math.log(x[0])) / 3.0)
        sel = (env == vals) & (env > 0) & (x >= lo)
        if sel.sum() < 3:
            delta = delta_max
        else:
            slope = np.polyfit(np.log(x[sel]), np.log(env[sel]), 1)[0]
            delta = min(-slope - 1.0, delta_max)
    if not delta > 0:
        raise QuadratureError(f"kernel does not decay faster than 1/x on grid "
                              f"(fitted delta {delta:.3g})", delta)
    C = float(np.max(vals * x ** (1.0 + delta)))
    sup0 = float(np.max(np.abs(time_eval(kernel, np.linspace(0.0, 1.0, 65)))))
    return DecayEnvelope(C, float(delta), x, env, sup0)


# ----------------------------------------------------- Fourier pair checking

def _cos_transform_tail(kernel: KernelSpec, xi, T: float):
    """``2 * integral_T^oo psi(t) cos(xi t) dt`` in closed form (or 0)."""
    v = kernel.variant
    s = kernel.scale
    xi = np.asarray(xi, dtype=float)
    if v in ("trapezoid", "fejer") or (v == "riesz" and kernel.alpha == 1.0):
        c, h = ((kernel.a + kernel.h, kernel.h) if v == "trapezoid" else (0.5, 0.5))
        c, h = c * s, h * s
        # psi = (cos((c-h)t) - cos((c+h)t)) / (2 pi h t**2)
        tot = 0.0
        for w, sign in ((c - h, 1.0), (c + h, -1.0)):
            tot = tot + sign * 0.5 * (cos_tail(w + xi, T) + cos_tail(w - xi, T))
        return 2.0 * tot / (2 * np.pi * h)
    if v == "exponential":
        # 2 * integral_T^oo (s/2) e^{-s t} cos(xi t) dt
        z = xi / s
        return np.exp(-s * T) * (np.cos(xi * T) - z * np.sin(xi * T)) / (1 + z * z)
    if v == "gaussian":
        return 0.0 * xi
    raise QuadratureError("no closed-form tail for this kernel", math.inf)


def fourier_pair_check(kernel: KernelSpec, grid=None, tol: float = 1e-6,
                       T: Optional[float] = None) -> float:
    """Maximum discrepancy between numeric and closed-form transforms.

    The transform of :func:`time_eval` is computed by composite
    Gauss-Legendre quadrature on ``[0, T]`` plus a closed-form tail.
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if grid is None:
        edge = kernel.hat_support if math.isfinite(kernel.hat_support) else 6.0 * kernel.scale
        grid = np.linspace(-1.5 * edge, 1.5 * edge, 50)
    grid = np.asarray(grid, dtype=float)
    if kernel.variant == "riesz" and kernel.alpha != 1.0:
        raise QuadratureError("Riesz transform check needs a closed-form tail", math.inf)
    fmax = float(np.max(np.abs(grid))) + (kernel.hat_support if math.isfinite(kernel.hat_support)
                                          else 8.0 * kernel.scale)
    if T is None:
        T = 400.0 * math.pi / max(kernel.scale * (kernel.h if kernel.variant == "trapezoid" else 0.5), 1e-3)
        if kernel.variant in ("gaussian", "exponential"):
            T = 40.0 / kernel.scale
    width = min(math.pi / (2 * fmax), T / 8)
    npan = int(math.ceil(T / width))
    edges = np.linspace(0.0, T, npan + 1)
    xg, wg = _gauss_legendre(16)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    t = (mid + half * xg).ravel()
    w = (half * wg).ravel()
    psi = np.asarray(time_eval(kernel, t)) * w
    numeric = 2.0 * (np.cos(np.outer(grid, t)) @ psi)
    numeric = numeric + _cos_transform_tail(kernel, grid, T)
    return float(np.max(np.abs(numeric - hat_eval(kernel, grid))))


def kernel_table(kernel: KernelSpec, t_grid, xi_grid):
    """Rows ``(t, psi(t))`` and ``(xi, hat(xi))`` for plotting."""
    return (list(zip(map(float, t_grid), map(float, np.atleast_1d(time_eval(kernel, t_grid))))),
            list(zip(map(float, xi_grid), map(float, np.atleast_1d(hat_eval(kernel, xi_grid))))))
