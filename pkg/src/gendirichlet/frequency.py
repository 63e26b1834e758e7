"""Frequencies, generated families and gap-condition diagnostics.

A frequency is a strictly increasing sequence of nonnegative reals.  All
indices in this package are 1-based, so ``freq[1]`` is the first term and,
for the ordinary frequency, equals ``log 1 = 0``.

Generated families carry integer block coordinates so that differences of
terms inside one block are known symbolically.  This matters for the
``example_nc`` family, whose intra-block gaps ``k * exp(-exp(n**2))`` are far
below the smallest positive double once ``n >= 3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath as mp
import numpy as np
import scipy.sparse as sp

from .errors import PrecisionLossError, ValidationError

VARIANTS = ("ordinary", "integers", "example_nc", "geometric_blocks",
            "bc_blocks", "explicit")

_ALIASES = {
    "ordinary": "ordinary", "log": "ordinary",
    "integers": "integers", "power": "integers",
    "example_nc": "example_nc", "examplenc": "example_nc", "nc": "example_nc",
    "geometric_blocks": "geometric_blocks", "geometricblocks": "geometric_blocks",
    "geometric": "geometric_blocks",
    "bc_blocks": "bc_blocks", "bcblocks": "bc_blocks", "bc": "bc_blocks",
    "explicit": "explicit",
}


def canonical_variant(name: str) -> str:
    key = str(name).strip().lower().replace("-", "_")
    if key not in _ALIASES:
        raise ValidationError(f"unknown frequency variant {name!r}; "
                              f"expected one of {', '.join(VARIANTS)}")
    return _ALIASES[key]


@dataclass(frozen=True)
class GeneratorSpec:
    """Description of a generated frequency family.

    Parameters
    ----------
    variant : str
        One of ``ordinary``, ``integers``, ``example_nc``,
        ``geometric_blocks``, ``bc_blocks`` or ``explicit``.
    rng_seed : int
        Seed for the random admissible choices of the block families.
    params : dict
        Optional overrides.  ``geometric_blocks`` accepts ``deltas`` (one per
        block, starting at block 1); ``bc_blocks`` accepts ``b`` and ``c``
        lists (starting at block 1); ``explicit`` requires ``terms``.
    """

    variant: str
    rng_seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variant", canonical_variant(self.variant))

    def to_json(self) -> dict:
        return {"variant": self.variant, "seed": int(self.rng_seed),
                "params": dict(self.params)}

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorSpec":
        return cls(obj["variant"], int(obj.get("seed", obj.get("rng_seed", 0))),
                   dict(obj.get("params", {})))


@dataclass(frozen=True, eq=False)
class Frequency:
    """A finite prefix of a frequency.

    Attributes
    ----------
    values : numpy.ndarray
        Double-precision shadow of the terms (may contain ties when the true
        gaps are below double resolution).
    generator : GeneratorSpec or None
        The family that produced the terms, if any.
    precision_bits : int
        Working precision of the high-precision representation.
    block : numpy.ndarray
        Block index per term (generated block families only).
    offset : numpy.ndarray
        Position inside the block per term.
    """

    values: np.ndarray
    generator: Optional[GeneratorSpec]
    precision_bits: int
    block: Optional[np.ndarray] = None
    offset: Optional[np.ndarray] = None
    block_params: dict = field(default_factory=dict)
    _exact: list = field(default_factory=list, repr=False)
    _decimals: list = field(default_factory=list, repr=False)

    def __len__(self):
        return int(self.values.shape[0])

    def __getitem__(self, n):
        """Double shadow of the 1-based term ``n``."""
        return float(self.values[_check_index(self, n) - 1])

    @property
    def variant(self) -> str:
        return self.generator.variant if self.generator else "explicit"

    def exact(self, n: int):
        """High-precision value of term ``n`` as an ``mpmath.mpf``."""
        i = _check_index(self, n) - 1
        if not self._exact:
            self._exact.extend([None] * len(self))
        if self._exact[i] is None:
            with mp.workprec(self.precision_bits):
                self._exact[i] = _closed_form(self, i + 1)
        return self._exact[i]

    @property
    def terms(self) -> tuple:
        """Decimal strings of every term, computed on first access."""
        if not self._decimals:
            digits = max(17, int(self.precision_bits * math.log10(2)))
            with mp.workprec(self.precision_bits):
                self._decimals.extend(
                    mp.nstr(self.exact(n), digits, strip_zeros=True)
                    for n in range(1, len(self) + 1))
        return tuple(self._decimals)

    def prefix(self, count: int) -> "Frequency":
        """The first ``count`` terms as a new frequency."""
        if not 1 <= count <= len(self):
            raise ValidationError(f"prefix {count} outside 1..{len(self)}")
        ex = list(self._exact[:count]) if self._exact else []
        return Frequency(self.values[:count].copy(), self.generator,
                         self.precision_bits,
                         None if self.block is None else self.block[:count].copy(),
                         None if self.offset is None else self.offset[:count].copy(),
                         dict(self.block_params), ex)

    def to_json(self) -> dict:
        if self.generator is not None and self.generator.variant != "explicit":
            out = self.generator.to_json()
            out["count"] = len(self)
            return {"generator": out}
        return {"terms": list(self.terms)}


def _check_index(freq, n) -> int:
    n = int(n)
    if not 1 <= n <= len(freq):
        raise ValidationError(f"index {n} outside 1..{len(freq)}")
    return n


def _closed_form(freq: Frequency, n: int):
    v = freq.variant
    if v == "ordinary":
        return mp.log(n)
    if v == "integers":
        return mp.mpf(n)
    b = int(freq.block[n - 1])
    k = int(freq.offset[n - 1])
    if v == "example_nc":
        return mp.mpf(b * b) + k * mp.exp(-mp.exp(b * b))
    if v == "geometric_blocks":
        return mp.mpf(b) + k * freq.block_params["delta_mp"][b]
    if v == "bc_blocks":
        return freq.block_params["b_mp"][b] + k * freq.block_params["c_mp"][b]
    raise AssertionError(v)


# ---------------------------------------------------------------- generation

def _dyadic_blocks(count):
    n = np.arange(1, count + 1, dtype=np.int64)
    block = np.floor(np.log2(n)).astype(np.int64)
    # guard against rounding of log2 near powers of two
    block[(1 << (block + 1)) <= n] += 1
    block[(1 << block) > n] -= 1
    return block, n - (1 << block)


def _square_blocks(count):
    n = np.arange(1, count + 1, dtype=np.int64)
    block = np.floor(np.sqrt(n)).astype(np.int64)
    block[(block + 1) ** 2 <= n] += 1
    block[block ** 2 > n] -= 1
    return block, n - block ** 2


def geometric_deltas(seed: int, nblocks: int, overrides=None) -> list:
    """Block spacings ``delta_n`` in ``(2**-(n+1), 2**-n]`` for ``n = 0..nblocks``.

    The draw for block ``n`` only depends on the seed, so longer prefixes
    extend shorter ones.
    """
    u = np.random.default_rng(seed).random(nblocks + 1)
    out = [mp.mpf(1)]
    for n in range(1, nblocks + 1):
        if overrides is not None and n - 1 < len(overrides):
            d = mp.mpf(str(overrides[n - 1]))
            lo, hi = mp.ldexp(1, -n - 1), mp.ldexp(1, -n)
            if not lo < d <= hi:
                raise ValidationError(f"delta_{n}={d} outside (2^-{n+1}, 2^-{n}]")
        else:
            d = mp.ldexp(1, -n) - mp.mpf(float(u[n])) * mp.ldexp(1, -n - 1)
        out.append(d)
    return out


def bc_parameters(seed: int, nblocks: int, b_over=None, c_over=None):
    """Block offsets ``b_m`` and steps ``c_m`` for ``m = 1..nblocks``.

    Returns lists indexed by ``m`` (index 0 unused).
    """
    u = np.random.default_rng(seed).random((nblocks + 2, 2))
    b = [None]
    for m in range(1, nblocks + 2):
        lo, hi = mp.log(2 * m + 1), mp.log(2 * m + 2)
        if b_over is not None and m - 1 < len(b_over):
            bm = mp.mpf(str(b_over[m - 1]))
            if not lo <= bm <= hi:
                raise ValidationError(f"b_{m}={bm} outside [log {2*m+1}, log {2*m+2}]")
        else:
            bm = lo + mp.mpf(float(u[m, 0])) * (hi - lo)
        b.append(bm)
    c = [None]
    for m in range(1, nblocks + 1):
        gap = b[m + 1] - b[m]
        lo, hi = gap / (8 * m), gap / (4 * m)
        if c_over is not None and m - 1 < len(c_over):
            cm = mp.mpf(str(c_over[m - 1]))
            if not lo <= cm <= hi:
                raise ValidationError(f"c_{m}={cm} outside its bracket")
        else:
            cm = lo + mp.mpf(float(u[m, 1])) * (hi - lo)
        c.append(cm)
    return b[:nblocks + 1], c


def make_frequency(spec, count: int, precision_bits: int = 256) -> Frequency:
    """Materialize the first ``count`` terms of a generated family.

    Parameters
    ----------
    spec : GeneratorSpec or str
        The family (a bare variant name uses seed 0).
    count : int
        Number of terms, at least 1.
    precision_bits : int
        Precision of the high-precision representation.

    Returns
    -------
    Frequency

    Examples
    --------
    >>> make_frequency("ordinary", 3).values.round(4).tolist()
    [0.0, 0.6931, 1.0986]
    """
    if isinstance(spec, str):
        spec = GeneratorSpec(spec)
    count = int(count)
    if count < 1:
        raise ValidationError("count must be at least 1")
    if precision_bits < 53:
        raise ValidationError("precision_bits must be at least 53")
    v = spec.variant
    n = np.arange(1, count + 1, dtype=float)
    if v == "explicit":
        return frequency_from_terms(spec.params["terms"], precision_bits)
    if v == "ordinary":
        return Frequency(np.log(n), spec, precision_bits)
    if v == "integers":
        return Frequency(n.copy(), spec, precision_bits)
    if v in ("example_nc", "geometric_blocks"):
        block, offset = _dyadic_blocks(count)
        nb = int(block[-1])
        if v == "example_nc":
            with mp.workprec(precision_bits):
                eps = [float(mp.exp(-mp.exp(b * b))) for b in range(nb + 1)]
            vals = block.astype(float) ** 2 + offset * np.array(eps)[block]
            return Frequency(vals, spec, precision_bits, block, offset,
                             {"log_eps": [-math.exp(b * b) for b in range(nb + 1)]})
        with mp.workprec(precision_bits):
            deltas = geometric_deltas(spec.rng_seed, nb, spec.params.get("deltas"))
        d = np.array([float(x) for x in deltas])
        vals = block.astype(float) + offset * d[block]
        return Frequency(vals, spec, precision_bits, block, offset,
                         {"delta_mp": deltas, "delta": d})
    if v == "bc_blocks":
        block, offset = _square_blocks(count)
        nb = int(block[-1])
        with mp.workprec(precision_bits):
            b, c = bc_parameters(spec.rng_seed, nb, spec.params.get("b"),
                                 spec.params.get("c"))
        bf = np.array([0.0] + [float(x) for x in b[1:]])
        cf = np.array([0.0] + [float(x) for x in c[1:]])
        vals = bf[block] + offset * cf[block]
        return Frequency(vals, spec, precision_bits, block, offset,
                         {"b_mp": b, "c_mp": c, "b": bf, "c": cf})
    raise AssertionError(v)


def frequency_from_terms(terms: Sequence, precision_bits: int = 256) -> Frequency:
    """Build an explicit frequency from decimal strings or numbers."""
    if len(terms) == 0:
        raise ValidationError("a frequency needs at least one term")
    with mp.workprec(precision_bits):
        ex = [mp.mpf(str(t)) for t in terms]
        if ex[0] < 0:
            raise ValidationError("first term must be nonnegative")
        for i in range(1, len(ex)):
            if not ex[i] > ex[i - 1]:
                raise ValidationError(f"terms not strictly increasing at index {i + 1}")
    vals = np.array([float(x) for x in ex])
    return Frequency(vals, None, precision_bits, _exact=ex)


def frequency_from_json(obj: dict, count: Optional[int] = None,
                        precision_bits: int = 256) -> Frequency:
    """Read the JSON frequency format (``generator`` or ``terms`` key)."""
    if "terms" in obj:
        f = frequency_from_terms(obj["terms"], precision_bits)
        return f.prefix(count) if count else f
    if "generator" not in obj:
        raise ValidationError("frequency document needs 'generator' or 'terms'")
    g = obj["generator"]
    spec = GeneratorSpec.from_json(g)
    n = count or g.get("count")
    if n is None:
        raise ValidationError("generator document needs a count")
    return make_frequency(spec, int(n), precision_bits)


# ------------------------------------------------------------------ log gaps

def log_gap(freq: Frequency, n: int, m: int) -> float:
    """``log(lambda_m - lambda_n)`` for ``m > n``.

    Uses the family's closed-form gap when both indices share a block and
    high-precision subtraction otherwise.

    Raises
    ------
    PrecisionLossError
        If an explicit frequency's terms agree to working precision.
    """
    n, m = _check_index(freq, n), _check_index(freq, m)
    if m <= n:
        raise ValidationError("log_gap needs m > n")
    v = freq.variant
    if v == "integers":
        return math.log(m - n)
    if v == "ordinary":
        return math.log(math.log1p((m - n) / n))
    if freq.block is not None and freq.block[n - 1] == freq.block[m - 1]:
        b = int(freq.block[n - 1])
        dk = int(freq.offset[m - 1] - freq.offset[n - 1])
        if v == "example_nc":
            with mp.workprec(freq.precision_bits):
                return float(mp.log(dk) - mp.exp(b * b))
        if v == "geometric_blocks":
            return float(mp.log(dk * freq.block_params["delta_mp"][b]))
        if v == "bc_blocks":
            return float(mp.log(dk * freq.block_params["c_mp"][b]))
    with mp.workprec(freq.precision_bits):
        a, c = freq.exact(n), freq.exact(m)
        d = c - a
        if d <= 0 or d <= abs(c) * mp.ldexp(1, 8 - freq.precision_bits):
            raise PrecisionLossError(
                f"terms {n} and {m} agree to {freq.precision_bits} bits")
        return float(mp.log(d))


def log_gaps(freq: Frequency, n, m) -> np.ndarray:
    """Vectorized double-precision ``log(lambda_m - lambda_n)``.

    Same-block pairs of generated families use the closed form, other pairs
    use double subtraction, with a high-precision fallback for gaps below
    ``1e-9`` relative.
    """
    n = np.asarray(n, dtype=np.int64)
    m = np.asarray(m, dtype=np.int64)
    n, m = np.broadcast_arrays(n, m)
    v = freq.variant
    if v == "integers":
        return np.log((m - n).astype(float))
    if v == "ordinary":
        return np.log(np.log1p((m - n) / n.astype(float)))
    vals = freq.values
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log(vals[m - 1] - vals[n - 1])
    if freq.block is not None:
        same = freq.block[n - 1] == freq.block[m - 1]
        if same.any():
            b = freq.block[n - 1][same]
            dk = (freq.offset[m - 1] - freq.offset[n - 1])[same].astype(float)
            if v == "example_nc":
                out[same] = np.log(dk) - np.exp(b.astype(float) ** 2)
            elif v == "geometric_blocks":
                out[same] = np.log(dk * freq.block_params["delta"][b])
            else:
                out[same] = np.log(dk * freq.block_params["c"][b])
    scale = np.maximum(np.abs(vals[m - 1]), 1.0)
    bad = ~(np.exp(np.minimum(out, 700.0)) > 1e-9 * scale)
    if freq.block is not None:
        bad &= freq.block[n - 1] != freq.block[m - 1]
    for idx in zip(*np.nonzero(bad)):
        out[idx] = log_gap(freq, int(n[idx]), int(m[idx]))
    return out


# --------------------------------------------------------- condition reports

@dataclass
class ConditionReport:
    """Finite-prefix witness table for one gap condition.

    ``rows`` holds ``(n, m, lhs, c_n)``; ``log_c`` holds ``log c_n`` so that
    underflowed constants remain comparable.  For the LC check ``raw`` holds
    the raw-form constant ``(lambda_{n+1} - lambda_n) * exp(exp(delta*lambda_n))``
    in log scale.
    """

    condition: str
    parameter: float
    rows: list
    log_c: np.ndarray
    C_estimate: float
    verdict: str
    violated_at: Optional[int] = None
    trend_slope: float = 0.0
    raw: Optional[np.ndarray] = None

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent"

    def csv_rows(self):
        yield ("n", "m", "lhs", "c_n")
        for n, m, lhs, c in self.rows:
            yield (int(n), int(m), repr(float(lhs)), repr(float(c)))


def _checkpoints(ns):
    """Dyadic checkpoints covering the tail half of the index range."""
    lo, hi = int(ns[0]), int(ns[-1])
    pts = []
    p = hi
    while p >= max(lo, hi // 4) and p >= 2:
        pts.append(p)
        p //= 2
    pts.append(max(lo, p))
    return sorted(set(pts))


def _trend(ns, log_c, mode, slope_tol):
    """Log-log slope of the running extremum at dyadic checkpoints."""
    run = (np.minimum.accumulate if mode == "min" else np.maximum.accumulate)(log_c)
    cps = _checkpoints(ns)
    if len(cps) < 2:
        return 0.0, run
    idx = np.searchsorted(ns, cps, side="right") - 1
    x = np.log(np.asarray(cps, float))
    y = run[idx]
    if not np.all(np.isfinite(y)):
        return (-np.inf if mode == "min" else np.inf), run
    slopes = np.diff(y) / np.diff(x)
    return float(slopes[-1] if mode == "min" else slopes.max()), run


def _prefix_range(freq, prefix, need_next=1):
    if prefix is None:
        prefix = range(1, len(freq) - need_next + 1)
    elif isinstance(prefix, int):
        prefix = range(1, prefix + 1)
    ns = np.asarray(list(prefix), dtype=np.int64)
    if ns.size < 2:
        raise ValidationError("prefix must contain at least 2 indices")
    if ns[0] < 1 or ns[-1] + need_next > len(freq):
        raise ValidationError(
            f"prefix up to {int(ns[-1])} needs {int(ns[-1]) + need_next} terms, "
            f"only {len(freq)} materialized")
    return ns


def check_bc(freq: Frequency, ell: float, prefix=None, slope_tol: float = 0.1
             ) -> ConditionReport:
    """Witness ``lambda_{n+1} - lambda_n >= C exp(-ell * lambda_n)``.

    ``c(n) = (lambda_{n+1} - lambda_n) exp(ell * lambda_n)``; the estimate of
    ``C`` is the minimum over the prefix.  The verdict is ``violated`` when
    the running minimum keeps decaying (log-log slope below ``-slope_tol``
    between the last dyadic checkpoints).
    """
    if not ell > 0:
        raise ValidationError("ell must be positive")
    ns = _prefix_range(freq, prefix)
    lg = log_gaps(freq, ns, ns + 1)
    lam = freq.values[ns - 1]
    log_c = lg + ell * lam
    slope, run = _trend(ns, log_c, "min", slope_tol)
    ok = slope >= -slope_tol
    rows = [(int(a), int(a) + 1, float(np.exp(g)), float(np.exp(c)))
            for a, g, c in zip(ns, lg, log_c)]
    C = float(np.exp(log_c.min()))
    return ConditionReport("BC", float(ell), rows, log_c, C,
                           "consistent" if ok else "violated",
                           None if ok else int(ns[int(np.argmin(log_c))]), slope)


def _log_ratio(freq, ns, ms, lg):
    """``log((lambda_m + lambda_n) / (lambda_m - lambda_n))`` from log-gaps."""
    s = freq.values[ms - 1] + freq.values[ns - 1]
    with np.errstate(divide="ignore"):
        return np.log(s) - lg


def check_lc(freq: Frequency, delta: float, prefix=None, slope_tol: float = 0.1
             ) -> ConditionReport:
    """Witness the LC condition through its log-ratio reformulation.

    The row statistic is ``log((l_{n+1}+l_n)/(l_{n+1}-l_n)) * exp(-delta*l_n)``.
    The raw form ``(l_{n+1} - l_n) * exp(exp(delta * l_n))`` is kept (in log
    scale) in ``report.raw``.  The verdict is ``violated`` when the running
    maximum of the statistic keeps growing.
    """
    if not delta > 0:
        raise ValidationError("delta must be positive")
    ns = _prefix_range(freq, prefix)
    lg = log_gaps(freq, ns, ns + 1)
    lam = freq.values[ns - 1]
    lhs = _log_ratio(freq, ns, ns + 1, lg)
    with np.errstate(divide="ignore"):
        log_c = np.log(np.maximum(lhs, 0.0)) - delta * lam
    slope, _ = _trend(ns, log_c, "max", slope_tol)
    ok = slope <= slope_tol
    rows = [(int(a), int(a) + 1, float(h), float(np.exp(c)))
            for a, h, c in zip(ns, lhs, log_c)]
    raw = lg + np.exp(np.minimum(delta * lam, 700.0))
    return ConditionReport("LC", float(delta), rows, log_c,
                           float(np.exp(log_c.max())),
                           "consistent" if ok else "violated",
                           None if ok else int(ns[int(np.argmax(log_c))]), slope,
                           raw)


def check_nc(freq: Frequency, delta: float, prefix=None, horizon: int = 16,
             slope_tol: float = 0.1, log_term_only: bool = False
             ) -> ConditionReport:
    """Witness the NC condition with a bounded search window.

    For each ``n`` the witness ``m`` minimizes
    ``log((l_m + l_n)/(l_m - l_n)) + (m - n)`` over ``n < m <= n + horizon``
    (ties go to the smallest ``m``), and ``c(n) = lhs * exp(-delta * l_n)``.

    ``log_term_only`` drops the ``(m - n)`` penalty; with ``horizon=1`` this
    reproduces the LC statistic.
    """
    if not delta > 0:
        raise ValidationError("delta must be positive")
    horizon = int(horizon)
    if horizon < 1:
        raise ValidationError("horizon must be at least 1")
    ns = _prefix_range(freq, prefix, need_next=horizon)
    best_lhs = np.full(ns.shape, np.inf)
    best_m = np.zeros(ns.shape, dtype=np.int64)
    for step in range(1, horizon + 1):
        ms = ns + step
        lhs = _log_ratio(freq, ns, ms, log_gaps(freq, ns, ms))
        if not log_term_only:
            lhs = lhs + step
        better = lhs < best_lhs
        best_lhs[better] = lhs[better]
        best_m[better] = ms[better]
    lam = freq.values[ns - 1]
    with np.errstate(divide="ignore"):
        log_c = np.log(np.maximum(best_lhs, 0.0)) - delta * lam
    slope, _ = _trend(ns, log_c, "max", slope_tol)
    ok = slope <= slope_tol
    rows = [(int(a), int(b), float(h), float(np.exp(c)))
            for a, b, h, c in zip(ns, best_m, best_lhs, log_c)]
    return ConditionReport("NC", float(delta), rows, log_c,
                           float(np.exp(log_c.max())),
                           "consistent" if ok else "violated",
                           None if ok else int(ns[int(np.argmax(log_c))]), slope)


# ------------------------------------------------------------ other helpers

def densify(freq: Frequency) -> Frequency:
    """Insert equally spaced points into every gap larger than 1.

    A gap ``g > 1`` is split into ``q = ceil(g)`` equal steps, so each new
    step lies in ``(1/2, 1]``.  Gaps already at most 1 are kept.  The result
    is an explicit frequency.
    """
    if len(freq) == 0:
        raise ValidationError("empty frequency")
    out = []
    with mp.workprec(freq.precision_bits):
        prev = freq.exact(1)
        out.append(prev)
        for n in range(2, len(freq) + 1):
            cur = freq.exact(n)
            gap = cur - prev
            if gap > 1:
                q = int(mp.ceil(gap))
                step = gap / q
                out.extend(prev + i * step for i in range(1, q))
            out.append(cur)
            prev = cur
    vals = np.array([float(x) for x in out])
    return Frequency(vals, None, freq.precision_bits, _exact=out)


@dataclass
class FrequencyStats:
    prefix_len: int
    L_estimates: list
    L_running_sup_tail: float


def l_lambda(freq: Frequency, prefix=None) -> FrequencyStats:
    """Samples of ``log N / lambda_N`` and the tail-half supremum.

    Rows with ``lambda_N = 0`` are skipped.
    """
    N = len(freq) if prefix is None else int(prefix)
    if N < 2 or N > len(freq):
        raise ValidationError("prefix must lie in 2..len(freq)")
    ns = np.arange(1, N + 1)
    lam = freq.values[:N]
    keep = lam > 0
    ratios = np.log(ns[keep]) / lam[keep]
    est = [(int(a), float(r)) for a, r in zip(ns[keep], ratios)]
    tail = ns[keep] > N // 2
    sup = float(ratios[tail].max()) if tail.any() else float("nan")
    return FrequencyStats(N, est, sup)


# -------------------------------------------------------- integer coordinates

def smallest_prime_factors(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, int(math.isqrt(n_max)) + 1):
        if spf[p] == 0:
            blk = spf[p * p::p]
            blk[blk == 0] = p
    rest = spf == 0
    spf[rest] = np.arange(n_max + 1)[rest]
    return spf


def factorize(n: int, spf=None) -> dict:
    """Prime factorization ``{p: exponent}`` of a positive integer."""
    if n < 1:
        raise ValidationError("factorize needs n >= 1")
    out = {}
    if spf is not None and n < spf.shape[0]:
        while n > 1:
            p = int(spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def integer_coordinates(freq: Frequency):
    """Rationally independent generators and nonnegative integer rows.

    Returns ``(generators, matrix)`` with ``generators`` a list of ``mpf``
    and ``matrix`` a CSR matrix such that ``lambda_n = matrix[n-1] @
    generators``; returns ``None`` for explicit frequencies.
    """
    v = freq.variant
    N = len(freq)
    with mp.workprec(freq.precision_bits):
        if v == "integers":
            mat = sp.csr_matrix(np.arange(1, N + 1, dtype=np.int64)[:, None])
            return [mp.mpf(1)], mat
        if v == "ordinary":
            spf = smallest_prime_factors(max(N, 2))
            primes = [p for p in range(2, N + 1) if spf[p] == p]
            col = {p: i for i, p in enumerate(primes)}
            r, c, d = [], [], []
            for n in range(2, N + 1):
                for p, e in factorize(n, spf).items():
                    r.append(n - 1), c.append(col[p]), d.append(e)
            mat = sp.csr_matrix((np.array(d, dtype=np.int64), (r, c)),
                                shape=(N, max(len(primes), 1)))
            gens = [mp.log(p) for p in primes] or [mp.log(2)]
            return gens, mat
        if v in ("example_nc", "geometric_blocks"):
            nb = int(freq.block[-1])
            rows = np.arange(N)
            b, k = freq.block, freq.offset
            nz = k > 0
            r = np.concatenate([rows, rows[nz]])
            c = np.concatenate([np.zeros(N, dtype=np.int64), b[nz]])
            lead = b ** 2 if v == "example_nc" else b
            d = np.concatenate([lead, k[nz]])
            mat = sp.csr_matrix((d, (r, c)), shape=(N, nb + 1))
            mat.eliminate_zeros()
            if v == "example_nc":
                tail = [mp.exp(-mp.exp(x * x)) for x in range(1, nb + 1)]
            else:
                tail = list(freq.block_params["delta_mp"][1:nb + 1])
            return [mp.mpf(1)] + tail, mat
        if v == "bc_blocks":
            nb = int(freq.block[-1])
            rows = np.arange(N)
            b, k = freq.block, freq.offset
            nz = k > 0
            r = np.concatenate([rows, rows[nz]])
            c = np.concatenate([b - 1, nb + b[nz] - 1])
            d = np.concatenate([np.ones(N, dtype=np.int64), k[nz]])
            mat = sp.csr_matrix((d, (r, c)), shape=(N, 2 * nb))
            gens = list(freq.block_params["b_mp"][1:]) + list(freq.block_params["c_mp"][1:])
            return gens, mat
    return None
