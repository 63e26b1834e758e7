"""Command-line entry point.

Every command writes its CSV/JSON outputs into ``--out`` together with a
``manifest.json`` recording the command line, the resolved configuration,
the seed, the package version, wall-clock time and SHA-256 digests of the
outputs.  ``repro --from-manifest FILE`` replays a recorded command.

Exit codes: 0 success, 2 invalid input, 3 numeric-tolerance failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import math
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import __version__, frequency as fq, hardy, kernel as kern, repro, spectrum, summation
from .errors import NumericalError, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting on bad usage."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(f"{self.prog}: {message}")


class Context:
    """Collects outputs of one command and writes them with a manifest."""

    def __init__(self, args, argv: List[str]):
        self.args = args
        self.argv = list(argv)
        self.out = Path(args.out)
        self.files: Dict[str, str] = {}
        self.extra: dict = {}

    def _write(self, name: str, data: bytes):
        self.out.mkdir(parents=True, exist_ok=True)
        (self.out / name).write_bytes(data)
        self.files[name] = hashlib.sha256(data).hexdigest()

    def csv(self, name: str, rows):
        import io
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in rows:
            w.writerow(r)
        self._write(name, buf.getvalue().encode())

    def json(self, name: str, obj):
        self._write(name, (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode())

    def manifest(self, wall: float, status: int):
        cfg = {k: v for k, v in sorted(vars(self.args).items()) if k != "func"}
        doc = {"command": self.argv, "config": cfg, "seed": self.args.seed,
               "version": __version__, "wall_clock_seconds": wall, "exit_code": status,
               "outputs": dict(sorted(self.files.items()))}
        doc.update(self.extra)
        self.out.mkdir(parents=True, exist_ok=True)
        (self.out / "manifest.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- inputs

def _num(x) -> str:
    """Shortest round-trip text of a real number (numpy scalars included)."""
    return repr(float(x))


def _floats(text: str) -> List[float]:
    """``"a:b:n"`` (linspace) or a comma list."""
    if text.count(":") == 2:
        a, b, n = text.split(":")
        return np.linspace(float(a), float(b), int(n)).tolist()
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> List[int]:
    """``"a:b:step"`` (inclusive range) or a comma list."""
    if text.count(":") == 2:
        a, b, s = (int(x) for x in text.split(":"))
        return list(range(a, b + 1, s))
    return [int(x) for x in text.split(",") if x.strip()]


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _frequency(args, count: Optional[int] = None) -> fq.Frequency:
    count = count or args.count or args.prefix
    if args.freq:
        return fq.frequency_from_json(_load_json(args.freq), count, args.precision_bits)
    if not args.gen:
        raise ValidationError("give --gen NAME or --freq FILE")
    if not count:
        raise ValidationError("give --count (or --prefix) for generated frequencies")
    return fq.make_frequency(fq.GeneratorSpec(args.gen, args.seed), int(count), args.precision_bits)


def _series(args) -> summation.DirichletSeries:
    if args.series:
        return summation.series_from_json(_load_json(args.series), args.precision_bits)
    freq = _frequency(args)
    n = np.arange(1, len(freq) + 1, dtype=float)
    rule, _, par = (args.coeffs or "ones").partition(":")
    table = {"ones": lambda: np.ones_like(n),
             "power": lambda: n ** -float(par or 1),
             "alternating": lambda: (-1.0) ** n,
             "geometric": lambda: float(par or 0.5) ** n,
             "random": lambda: summation.random_series(freq, args.seed).coeffs}
    if rule not in table:
        raise ValidationError(f"unknown coefficient rule {rule!r}")
    return summation.DirichletSeries(freq, table[rule]())


def _kernel(text: Optional[str]) -> kern.KernelSpec:
    if not text:
        raise ValidationError("give --kernel SPEC, e.g. trapezoid:a=1,b=2")
    return kern.parse_kernel(text)


# ------------------------------------------------------------------ freq

def cmd_freq(ctx: Context):
    a = ctx.args
    verb = a.verb
    if verb == "gen":
        f = _frequency(a)
        ctx.json("frequency.json", f.to_json())
        ctx.csv("terms.csv", [("n", "lambda")] + [(i, f.terms[i - 1]) for i in range(1, len(f) + 1)])
        print(f"{len(f)} terms of {f.variant}")
    elif verb == "gap":
        f = _frequency(a, max(a.m or 2, a.count or 0))
        v = fq.log_gap(f, a.n, a.m)
        ctx.csv("log_gap.csv", [("n", "m", "log_gap"), (a.n, a.m, _num(v))])
        print(f"log(lambda_{a.m} - lambda_{a.n}) = {v!r}")
    elif verb == "check":
        extra = a.horizon if a.cond == "nc" else 1
        f = _frequency(a, (a.prefix or a.count) + extra if (a.prefix or a.count) else None)
        pre = a.prefix or len(f) - extra
        if a.cond == "bc":
            rep = fq.check_bc(f, a.ell, pre)
        elif a.cond == "lc":
            rep = fq.check_lc(f, a.delta, pre)
        else:
            rep = fq.check_nc(f, a.delta, pre, horizon=a.horizon)
        ctx.csv(f"check_{a.cond}.csv", rep.csv_rows())
        ctx.extra["verdict"] = rep.verdict
        print(f"{a.cond.upper()}: {rep.verdict}, C_estimate={rep.C_estimate:.6g}")
    elif verb == "densify":
        d = fq.densify(_frequency(a))
        ctx.json("densified.json", d.to_json())
        print(f"densified to {len(d)} terms")
    elif verb == "stats":
        st = fq.l_lambda(_frequency(a), a.prefix)
        ctx.csv("l_lambda.csv", [("N", "logN_over_lambdaN")] + [(n, _num(r)) for n, r in st.L_estimates])
        print(f"L(lambda) tail sup over N <= {st.prefix_len}: {st.L_running_sup_tail:.6g}")
    elif verb == "basis":
        b = hardy.RationalBasis.from_frequency(_frequency(a))
        ctx.json("basis.json", b.to_json())
        print(f"basis with {b.dim} generators")
    return EXIT_OK


# ---------------------------------------------------------------- kernel

def cmd_kernel(ctx: Context):
    a = ctx.args
    if a.verb == "l1":
        if a.sinc:
            try:
                kw = dict(item.split("=") for item in a.sinc.split(","))
                obj = kern.SincProduct(float(kw.get("a", 0)), float(kw["h"]))
            except (KeyError, ValueError) as exc:
                raise ValidationError(f"--sinc expects a=A,h=H, got {a.sinc!r}") from exc
            bound = 4 + 4 * math.log(obj.kappa)
        else:
            obj = _kernel(a.kernel)
            bound = math.nan
        val, err = kern.l1_norm_estimate(obj, a.tol)
        ctx.csv("l1.csv", [("value", "error", "bound"), (_num(val), _num(err), _num(bound))])
        print(f"L1 = {val:.10g} (error {err:.2g})" + (f", bound 4+4 log kappa = {bound:.10g}"
                                                      if math.isfinite(bound) else ""))
        if err > a.tol:
            raise NumericalError(f"quadrature error {err:.3g} exceeds --tol")
        return EXIT_OK if not (math.isfinite(bound) and val > bound) else EXIT_NUMERIC
    k = _kernel(a.kernel)
    if a.verb == "eval":
        t_rows, x_rows = kern.kernel_table(k, _floats(a.t_grid), _floats(a.xi_grid))
        ctx.csv("time.csv", [("t", "psi")] + [(_num(t), _num(v)) for t, v in t_rows])
        ctx.csv("fourier.csv", [("xi", "hat")] + [(_num(t), _num(v)) for t, v in x_rows])
    elif a.verb == "decay":
        env = kern.decay_envelope(k, delta=a.delta)
        ctx.csv("decay.csv", [("C", "delta"), (_num(env.C), _num(env.delta))])
        print(f"|psi(x)| <= {env.C:.6g} x^-(1+{env.delta:.6g}) on [1, 1e3]")
    elif a.verb == "fourier":
        err = kern.fourier_pair_check(k, tol=a.tol)
        ctx.csv("fourier_check.csv", [("max_error",), (_num(err),)])
        print(f"max discrepancy {err:.3g}")
        if err > a.tol:
            return EXIT_NUMERIC
    return EXIT_OK


# ------------------------------------------------------------------- sum

def _cplx(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ValidationError(f"bad complex number {text!r}") from exc


def cmd_sum(ctx: Context):
    a = ctx.args
    D = _series(a)
    s = _cplx(a.s)
    if a.verb == "eval":
        v = summation.eval_partial(D, s, a.N)
        ctx.csv("eval.csv", [("s", "N", "re", "im"), (a.s, a.N or len(D), _num(v.real), _num(v.imag))])
        print(f"S_N({a.s}) = {v}")
    elif a.verb in ("riesz", "mollify"):
        R = summation.riesz_mean(D, a.x, a.k) if a.verb == "riesz" else \
            summation.mollified_sum(D, _kernel(a.kernel), a.x)
        v = summation.eval_partial(R, s)
        ctx.json(f"{a.verb}_series.json", R.to_json())
        ctx.csv(f"{a.verb}.csv", [("s", "re", "im"), (a.s, _num(v.real), _num(v.imag))])
        print(f"{a.verb} value at {a.s}: {v}")
    elif a.verb == "abscissa":
        est = summation.bohr_cahen(D, a.kind, a.prefix)
        ctx.csv(f"abscissa_{a.kind}.csv", [("n", "quotient")] + [(n, _num(q)) for n, q in est.samples])
        print(f"{est.kind} ~ {est.estimate:.6g}")
    elif a.verb == "projbound":
        if a.M:
            pb = summation.projection_bound(D.freq, a.N, a.M)
        else:
            _, pb = summation.best_projection_bound(D.freq, a.N, a.horizon)
        ctx.csv("projbound.csv", [("N", "M", "explicit", "closed_form", "log_kappa"),
                                  (pb.N, pb.M, _num(pb.explicit), _num(pb.closed_form), _num(pb.log_kappa))])
        print(f"N={pb.N} M={pb.M}: explicit {pb.explicit:.6g} <= closed form {pb.closed_form:.6g}")
    elif a.verb == "tail":
        grid = [complex(a.eps, t) for t in _floats(a.t_grid)]
        errs = summation.uniform_tail(D, a.method, a.eps, grid, _floats(a.N_list),
                                      lambda sig: a.tail_bound,
                                      _kernel(a.kernel) if a.kernel else None, a.k)
        ctx.csv("uniform_tail.csv", [("N", "sup_error")] +
                [(_num(n), _num(e)) for n, e in zip(_floats(a.N_list), errs)])
        print("sup errors: " + ", ".join(f"{e:.3g}" for e in errs))
    elif a.verb == "convcheck":
        chk = summation.vertical_convolution_check(D, _kernel(a.kernel), s, a.tol)
        ctx.csv("convcheck.csv", [("lhs_re", "lhs_im", "rhs_re", "rhs_im", "gap"),
                                  (_num(chk.lhs.real), _num(chk.lhs.imag), _num(chk.rhs.real),
                                   _num(chk.rhs.imag), _num(chk.gap))])
        print(f"|lhs - rhs| = {chk.gap:.3g}")
        if chk.gap > a.tol:
            return EXIT_NUMERIC
    elif a.verb == "translate":
        T = summation.t_sigma(D, a.sigma)
        ctx.json("translated.json", T.to_json())
        print(f"h2 norm {hardy.h2_norm(D):.6g} -> {hardy.h2_norm(T):.6g}")
    return EXIT_OK


# ----------------------------------------------------------------- hardy

def _basis(a, D) -> hardy.RationalBasis:
    if a.basis:
        b = hardy.RationalBasis.from_json(_load_json(a.basis), a.precision_bits)
        b.check(D.freq, len(D))
        return b
    return hardy.RationalBasis.from_frequency(D.freq)


def cmd_hardy(ctx: Context):
    a = ctx.args
    if a.verb == "lambda":
        f = _frequency(a, a.N)
        r = hardy.lambda_ratio_search(f, a.N, a.budget, a.seed, n_samples=a.samples)
        ctx.csv("lambda_search.csv", [("n", "re", "im")] +
                [(i + 1, _num(c.real), _num(c.imag)) for i, c in enumerate(r.coeffs)])
        ctx.extra["ratio"] = r.ratio
        print(f"Lambda_{a.N} >= {r.ratio:.6g} +- {r.error_bar:.2g}")
        return EXIT_OK
    D = _series(a)
    if a.verb == "norm":
        if a.method == "exact":
            k = int(round(a.p / 2))
            if a.p != 2 * k:
                raise ValidationError("exact norms need an even integer p")
            v = hardy.h2k_norm_exact(D, k)
            est = hardy.NormEstimate(v, "exact", 0.0, 0)
        elif a.method == "time":
            est = hardy.hp_norm_time_average(D, a.p, _floats(a.T_list), a.tol)
        else:
            est = hardy.hp_norm_torus(D, _basis(a, D), a.p, a.sampler, a.samples, a.seed)
        ctx.csv("norm.csv", [("p", "method", "value", "error_bar", "samples", "flagged"),
                             (_num(a.p), est.method, _num(est.value), _num(est.error_bar),
                              est.samples_used, int(est.flagged))])
        print(f"||D||_{a.p:g} = {est.value:.10g} +- {est.error_bar:.2g} ({est.method})")
        return EXIT_NUMERIC if est.flagged else EXIT_OK
    basis = _basis(a, D)
    if a.verb == "vlimit":
        ch = hardy.random_character(basis, a.seed)
        V = hardy.vertical_limit(D, ch)
        ctx.json("vertical_limit.json", V.to_json())
        ctx.csv("character.csv", [("generator", "theta")] + [(j + 1, _num(t)) for j, t in enumerate(ch.theta)])
        print(f"h2 norm preserved: {hardy.h2_norm(D):.12g} -> {hardy.h2_norm(V):.12g}")
    elif a.verb == "helson":
        st = hardy.helson_maximal_stat(D, a.u, basis, a.n_chars, _ints(a.N_grid), a.seed)
        ctx.csv("helson.csv", st.csv_rows())
        print(f"mean M {st.mean:.6g}, max M {st.max:.6g}, decreasing fraction "
              f"{st.fraction_decreasing:.4f}, flags {st.flags}")
    return EXIT_OK


# -------------------------------------------------------------- spectrum

def cmd_spectrum(ctx: Context):
    a = ctx.args
    v = a.verb
    if v == "conv":
        f = _frequency(a)
        sp_ = spectrum.convolve_spectrum(f, a.k, a.prefix, mode=a.mode, tau=a.tau)
        ctx.csv("spectrum.csv", [("mu", "count", "complete")] +
                [(_num(float(p)), str(int(c)), int(ok))
                 for p, c, ok in zip(sp_.points, sp_.counts, sp_.complete)])
        print(f"{len(sp_)} points, total mass {sp_.total()}")
    elif v == "alk":
        f = _frequency(a)
        est = spectrum.a_lambda_k(f, a.k, a.prefix, _ints(a.checkpoints) if a.checkpoints else ())
        ctx.csv("a_lambda.csv", [("N", "tail_sup")] + [(n, _num(x)) for n, x in est.checkpoints]
                + [(a.prefix or len(f), _num(est.estimate))])
        print(f"A(lambda,{a.k}) tail sup {est.estimate:.6g}")
    elif v == "combi1":
        rep = spectrum.verify_combi1(a.k, a.n)
        ctx.csv("combi1.csv", [("k", "n", "min_count", "bound", "passed"),
                               (rep.k, rep.n, rep.min_count, _num(rep.bound), int(rep.passed))])
        print(f"min count {rep.min_count} vs bound {rep.bound:.6g}: {'pass' if rep.passed else 'fail'}")
        return EXIT_OK if rep.passed else EXIT_NUMERIC
    elif v == "combi2":
        C, table = spectrum.verify_combi2(_frequency(a), a.k, a.prefix)
        ctx.csv("combi2.csv", [("mu", "count", "scaled")] + [(_num(m), c, _num(s)) for m, c, s in table])
        print(f"C_{a.k} fit {C:.6g}")
    elif v == "tsigma-scan":
        m_grid = _ints(a.m_grid)
        f = _frequency(a, max(m_grid) ** 2 + 2 * max(m_grid))
        scan = spectrum.t_sigma_threshold_scan(f, a.k, m_grid, _floats(a.sigma_grid))
        ctx.csv("tsigma_scan.csv", [("sigma", "slope")] +
                [(_num(s), _num(x)) for s, x in zip(scan.sigma_grid, scan.slopes)])
        print(f"sigma* = {scan.sigma_star:.4f} (theory {scan.theory_threshold:.4f})")
    elif v == "divisors":
        d = spectrum.divisor_count_via_compositions(a.n, a.k)
        ctx.csv("divisors.csv", [("n", "k", "count"), (a.n, a.k, d)])
        print(d)
    elif v == "aprep":
        r = spectrum.ap_representation_count(a.n, a.k, a.ell)
        ctx.csv("aprep.csv", [("n", "k", "ell", "count"), (a.n, a.k, a.ell, r)])
        print(r)
    elif v == "suff":
        x = spectrum.sufficiency_statistic(_frequency(a), a.k, a.sigma, a.prefix)
        ctx.csv("sufficiency.csv", [("k", "sigma", "statistic"), (a.k, _num(a.sigma), _num(x))])
        print(f"sup exp(-2 sigma mu) r_k(mu) = {x:.6g}")
    return EXIT_OK


# ----------------------------------------------------------------- repro

def cmd_repro(ctx: Context):
    a = ctx.args
    if not a.suite:
        raise ValidationError("name a suite: " + ", ".join(sorted(repro.SUITES)))
    opts = {"seed": a.seed, "tol": a.tol}
    if a.k is not None:
        opts["k"] = a.k
    if a.samples is not None:
        opts["samples"] = a.samples
    if a.prefix:
        opts["prefix"] = a.prefix
    res = repro.run_suite(a.suite, **opts)
    for c in res.checks:
        print(c.line())
    ctx.csv("checks.csv", res.check_rows())
    for name, rows in sorted(res.tables.items()):
        ctx.csv(name, rows)
    ctx.extra["timings"] = {c.name: c.measured for c in res.checks if c.volatile}
    print(f"suite {res.name}: {'PASS' if res.passed else 'FAIL'}")
    return EXIT_OK if res.passed else EXIT_NUMERIC


# ---------------------------------------------------------------- parser

VERBS = {
    "freq": ["gen", "gap", "check", "densify", "stats", "basis"],
    "kernel": ["eval", "l1", "decay", "fourier"],
    "sum": ["eval", "riesz", "mollify", "abscissa", "projbound", "tail", "convcheck", "translate"],
    "hardy": ["norm", "vlimit", "helson", "lambda"],
    "spectrum": ["conv", "alk", "combi1", "combi2", "tsigma-scan", "divisors", "aprep", "suff"],
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("common")
    g.add_argument("--out", default="gendirichlet-out", help="output directory")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--threads", type=int, default=1, help="recorded in the manifest")
    g.add_argument("--tol", type=float, default=1e-6)
    g.add_argument("--prefix", type=int, default=None)
    g.add_argument("--config", default=None, help="key=value file with [section] headers")
    src = _Parser(add_help=False)
    s = src.add_argument_group("inputs")
    s.add_argument("--gen", help="generated family: ordinary, integers, example_nc, geometric, bc")
    s.add_argument("--freq", help="frequency JSON file")
    s.add_argument("--count", type=int, default=None)
    s.add_argument("--precision-bits", type=int, default=256)
    s.add_argument("--series", help="series JSON file")
    s.add_argument("--coeffs", help="rule for --gen series: ones, power:P, alternating, geometric:Q, random")
    s.add_argument("--basis", help="basis JSON file (generators and integer rows)")

    p = _Parser(prog="gendirichlet", description="General Dirichlet series toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    fp = sub.add_parser("freq", parents=[common, src])
    fp.add_argument("verb", choices=VERBS["freq"])
    fp.add_argument("--n", type=int, default=1)
    fp.add_argument("--m", type=int, default=2)
    fp.add_argument("--cond", choices=["bc", "lc", "nc"], default="nc")
    fp.add_argument("--ell", type=float, default=1.0)
    fp.add_argument("--delta", type=float, default=0.5)
    fp.add_argument("--horizon", type=int, default=16)
    fp.set_defaults(func=cmd_freq)

    kp = sub.add_parser("kernel", parents=[common])
    kp.add_argument("verb", choices=VERBS["kernel"])
    kp.add_argument("--kernel")
    kp.add_argument("--sinc", help="a=A,h=H")
    kp.add_argument("--t-grid", default="-20:20:401")
    kp.add_argument("--xi-grid", default="-3:3:121")
    kp.add_argument("--delta", type=float, default=None)
    kp.set_defaults(func=cmd_kernel)

    sp_ = sub.add_parser("sum", parents=[common, src])
    sp_.add_argument("verb", choices=VERBS["sum"])
    sp_.add_argument("--s", default="1")
    sp_.add_argument("--N", type=int, default=None)
    sp_.add_argument("--M", type=int, default=None)
    sp_.add_argument("--horizon", type=int, default=16)
    sp_.add_argument("--x", type=float, default=1.0, help="cutoff for riesz/mollify")
    sp_.add_argument("--k", type=float, default=1.0)
    sp_.add_argument("--kernel")
    sp_.add_argument("--kind", default="a")
    sp_.add_argument("--method", default="partial", choices=["partial", "riesz", "mollified"])
    sp_.add_argument("--eps", type=float, default=0.5)
    sp_.add_argument("--t-grid", default="-50:50:201")
    sp_.add_argument("--N-list", default="1,2,4,8")
    sp_.add_argument("--tail-bound", type=float, default=0.0)
    sp_.add_argument("--sigma", type=float, default=0.0)
    sp_.set_defaults(func=cmd_sum)

    hp = sub.add_parser("hardy", parents=[common, src])
    hp.add_argument("verb", choices=VERBS["hardy"])
    hp.add_argument("--p", type=float, default=2.0)
    hp.add_argument("--method", default="exact", choices=["exact", "time", "torus"])
    hp.add_argument("--sampler", default="mc", choices=["mc", "qmc"])
    hp.add_argument("--samples", type=int, default=100_000)
    hp.add_argument("--T-list", default="100,200,400")
    hp.add_argument("--u", type=float, default=0.1)
    hp.add_argument("--n-chars", type=int, default=100)
    hp.add_argument("--N-grid", default="1,4,16,64")
    hp.add_argument("--N", type=int, default=4)
    hp.add_argument("--budget", type=int, default=200)
    hp.set_defaults(func=cmd_hardy)

    cp = sub.add_parser("spectrum", parents=[common, src])
    cp.add_argument("verb", choices=VERBS["spectrum"])
    cp.add_argument("--k", type=int, default=2)
    cp.add_argument("--n", type=int, default=10)
    cp.add_argument("--ell", type=int, default=0)
    cp.add_argument("--mode", default="exact", choices=["exact", "tolerance"])
    cp.add_argument("--tau", type=float, default=None)
    cp.add_argument("--sigma", type=float, default=0.3)
    cp.add_argument("--checkpoints", default=None)
    cp.add_argument("--m-grid", default="10:200:10")
    cp.add_argument("--sigma-grid", default="0:0.5:21")
    cp.set_defaults(func=cmd_spectrum)

    rp = sub.add_parser("repro", parents=[common])
    rp.add_argument("suite", nargs="?", choices=sorted(repro.SUITES))
    rp.add_argument("--k", type=int, default=None)
    rp.add_argument("--samples", type=int, default=None)
    rp.add_argument("--from-manifest", default=None, help="replay the command of a manifest")
    rp.set_defaults(func=cmd_repro)
    return p


def _apply_config(parser, argv):
    """Use ``--config`` values as defaults; explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cp = configparser.ConfigParser()
    try:
        with open(known.config) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ValidationError(f"cannot read config {known.config}: {exc}") from exc
    command = next((a for a in argv if a in VERBS or a == "repro"), None)
    values = dict(cp["common"]) if cp.has_section("common") else {}
    if command and cp.has_section(command):
        values.update(cp[command])
    sub = parser._subparsers._group_actions[0].choices.get(command) if command else None
    if sub is None:
        return
    types = {act.dest: act.type for act in sub._actions}
    for key, raw in values.items():
        dest = key.replace("-", "_")
        if dest not in types:
            raise ValidationError(f"unknown config key {key!r}")
        conv = types[dest] or str
        sub.set_defaults(**{dest: conv(raw)})


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the command and return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    t0 = time.perf_counter()
    ctx = None
    try:
        if "--from-manifest" in argv:
            i = argv.index("--from-manifest")
            man = _load_json(argv[i + 1])
            out_override = argv[argv.index("--out") + 1] if "--out" in argv else None
            argv = [x for x in man["command"]]
            if out_override:
                argv += ["--out", out_override]
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_usage(sys.stderr)
            raise ValidationError("missing command")
        ctx = Context(args, argv)
        status = args.func(ctx)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_INVALID
    except NumericalError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        status = EXIT_NUMERIC
    if ctx is not None:
        ctx.manifest(time.perf_counter() - t0, status)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
