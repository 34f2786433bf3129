"""Command-line interface.

Every subcommand writes CSV (header row, 17 significant digits) to stdout or
to ``--output``.  Settings may also come from a ``key = value`` file given by
``--config``; command-line flags take precedence.  Exit status is 0 on
success, 2 for invalid input and 3 when the numerics refuse the input (for
example a symbol outside the simple-loop class).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

import numpy as np

from . import expansion as ex
from . import matrixless as ml
from . import quadrature as quad
from . import tables
from .momentary import BetaSpec, MomentarySymbol, fn_family, instantiate
from .symbols import CosineSymbol, add, parse_symbol, simple_loop_check
from .toeplitz import METHODS, ConvergenceError, default_threads, eigenvalues, build

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3

CONFIG_KEYS = {
    "quad.nodes": "nodes",
    "quad.delta": "delta",
    "quad.fd_step": "fd_step",
    "symbol": "symbol",
    "f": "f",
    "g": "g",
    "n": "n",
    "n0": "n0",
    "k": "k",
    "kind": "kind",
    "levels": "levels",
    "degree": "degree",
    "alpha1": "alpha1",
    "alpha0": "alpha0",
    "method": "method",
    "threads": "threads",
    "output": "output",
    "base": "base",
}


class ConfigError(ValueError):
    pass


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``term`` may repeat and is collected in a list."""
    out: dict = {"term": []}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        if key == "term":
            out["term"].append(value)
        elif key in CONFIG_KEYS:
            out[CONFIG_KEYS[key]] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return out


def parse_term(text: str) -> tuple[BetaSpec, CosineSymbol]:
    """``form, c, p, q, symbol`` as in ``power_log, 3, 2, 0, laplacian``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 5:
        raise ConfigError(f"term {text!r} must have five fields: form, c, p, q, symbol")
    form, c, p, q, sym = parts
    try:
        return BetaSpec(form, float(c), float(p), int(q)), parse_symbol(sym)
    except ValueError as exc:
        raise ConfigError(f"bad term {text!r}: {exc}") from None


def _int_list(v) -> list[int]:
    if isinstance(v, list):
        return [int(x) for x in v]
    return [int(x) for x in str(v).replace(",", " ").split()]


def _setting(args, conf, name, default=None, cast=None):
    v = getattr(args, name, None)
    if v is None:
        v = conf.get(name, default)
    if v is None or cast is None:
        return v
    try:
        return cast(v)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {name}: {v!r}") from None


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def write_csv(stream, header, rows) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])


class Context:
    """Resolved settings shared by the subcommand handlers."""

    def __init__(self, args):
        self.args = args
        self.conf = read_config(args.config) if getattr(args, "config", None) else {"term": []}
        threads = _setting(args, self.conf, "threads", cast=int)
        self.threads = default_threads() if threads is None else threads
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        try:
            self.pv = quad.PVConfig(
                nodes=_setting(args, self.conf, "nodes", 4096, int),
                exclusion_radius=_setting(args, self.conf, "delta", 1e-6, float),
                fd_step=_setting(args, self.conf, "fd_step", 1e-3, float),
                threads=self.threads,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        self.method = _setting(args, self.conf, "method", "lapack")
        if self.method not in METHODS:
            raise ConfigError(f"unknown eigen method {self.method!r}; expected one of {METHODS}")

    def get(self, name, default=None, cast=None):
        return _setting(self.args, self.conf, name, default, cast)

    def symbol(self, name, default=None) -> CosineSymbol:
        spec = self.get(name, default)
        if spec is None:
            raise ConfigError(f"missing symbol --{name}")
        try:
            return parse_symbol(spec)
        except (ValueError, OSError) as exc:
            raise ConfigError(str(exc)) from None

    def sizes(self, default=None) -> list[int]:
        v = self.get("n", default)
        if v is None:
            raise ConfigError("missing --n")
        try:
            ns = _int_list(v)
        except ValueError:
            raise ConfigError(f"invalid matrix sizes {v!r}") from None
        if not ns:
            raise ConfigError("empty list of matrix sizes")
        if any(n < 1 for n in ns):
            raise ConfigError("matrix sizes must be >= 1")
        return ns

    def check_loop(self, *symbols):
        if getattr(self.args, "no_check", False):
            return
        for c in symbols:
            if not simple_loop_check(c).is_simple_loop:
                raise quad.DomainError(f"symbol {c!r} fails the simple-loop check (use --no-check to override)")


def _s_grid(ctx) -> np.ndarray:
    if ctx.args.s:
        try:
            s = np.array([float(x) for x in ctx.args.s.replace(",", " ").split()])
        except ValueError:
            raise ConfigError(f"invalid s values {ctx.args.s!r}") from None
    else:
        if ctx.args.points < 2:
            raise ConfigError("--points must be >= 2")
        s = np.linspace(0.0, np.pi, ctx.args.points)
    if np.any(s < 0) or np.any(s > np.pi):
        raise ConfigError("s values must lie in [0, pi]")
    return s


def cmd_ref_eig(ctx, out):
    c = ctx.symbol("symbol")
    (n,) = ctx.sizes()[:1]
    lam = eigenvalues(build(c, n), method=ctx.method, threads=ctx.threads)
    write_csv(out, ["j", "lambda"], zip(range(1, n + 1), lam))


def cmd_eta(ctx, out):
    f = ctx.symbol("symbol", ctx.get("f"))
    ctx.check_loop(f)
    s = _s_grid(ctx)
    write_csv(out, ["s", "value"], zip(s, np.atleast_1d(quad.eta(f, s, ctx.pv))))


def _two(ctx, out, fn):
    f, g = ctx.symbol("f", "kms:0.5"), ctx.symbol("g", "laplacian")
    ctx.check_loop(f, g)
    s = _s_grid(ctx)
    write_csv(out, ["s", "value"], zip(s, np.atleast_1d(fn(f, g, s, ctx.pv))))


def cmd_psi(ctx, out):
    _two(ctx, out, quad.psi)


def cmd_phi(ctx, out):
    _two(ctx, out, quad.phi)


def _kind_symbols(ctx):
    kind = ctx.get("kind", "sum")
    try:
        kind = ex.ExpansionKind(kind)
    except ValueError:
        raise ConfigError(f"unknown kind {kind!r}") from None
    f = ctx.symbol("f", "kms:0.5")
    g = None if kind is ex.ExpansionKind.SINGLE else ctx.symbol("g", "laplacian")
    needed = [f] if g is None else [f, g] + ([add(f, g)] if kind in (ex.ExpansionKind.SUM, ex.ExpansionKind.H_TO_H) else [])
    ctx.check_loop(*needed)
    return kind, f, g


def cmd_expand(ctx, out):
    kind, f, g = _kind_symbols(ctx)
    (n,) = ctx.sizes()[:1]
    k = ctx.get("k", 3, int)
    if not 1 <= k <= ex.MAX_TERMS:
        raise ConfigError(f"k must be in 1..{ex.MAX_TERMS}")
    apx = ex.approximations(kind, f, g, n, k, ctx.pv, ctx.method)
    exact = ex.exact_eigenvalues(kind, f, g, n, ctx.method)
    header = ["j", "d_jn", "lambda_exact"] + [f"lambda_k{i}" for i in range(1, k + 1)] + [f"err_k{i}" for i in range(1, k + 1)]
    cols = [np.arange(1, n + 1), ex.mesh(n), exact] + apx + [exact - a for a in apx]
    write_csv(out, header, zip(*cols))


def _family(ctx) -> MomentarySymbol:
    base = ctx.get("base")
    terms = ctx.conf.get("term", [])
    if base is not None and ctx.args.alpha1 is None and ctx.args.alpha0 is None:
        try:
            return MomentarySymbol(parse_symbol(base), tuple(parse_term(t) for t in terms))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return fn_family(ctx.get("alpha1", 3.0, float), ctx.get("alpha0", 2.0, float))


def cmd_matrixless(ctx, out):
    ms = _family(ctx)
    n0 = ctx.get("n0", 100, int)
    k = ctx.get("k", 4, int)
    levels = ctx.get("levels", None, int)
    degree = ctx.get("degree", ml.DEFAULT_DEGREE, int)
    use_boundary = not ctx.args.no_boundary
    if k < 2 or n0 < 4 or degree < 1:
        raise ConfigError("need k >= 2, n0 >= 4 and degree >= 1")
    if levels is not None and levels < k - 1:
        raise ConfigError("levels must be at least k - 1")
    grid = ml.extrapolate(ms, n0, k, levels=levels, method=ctx.method, threads=ctx.threads)
    emit = ctx.args.emit
    if emit == "grid":
        theta = grid.theta
        vals = [grid.values[i] for i in range(k - 1)]
        if use_boundary and grid.boundary is not None:
            theta = np.concatenate([[0.0], theta, [np.pi]])
            vals = [np.concatenate([[grid.boundary[i, 0]], v, [grid.boundary[i, 1]]]) for i, v in enumerate(vals)]
        write_csv(out, ["theta"] + [f"c{i}" for i in range(1, k)], zip(theta, *vals))
        return
    ns = ctx.sizes()
    if emit == "predict":
        n = ns[0]
        pred = ml.predict(ms, grid, n, k, degree, use_boundary)
        write_csv(out, ["j", "d_jn", "lambda_pred"], zip(range(1, n + 1), ex.mesh(n), pred))
        return
    if max(ns) > tables.MAX_N_FAMILY:
        raise tables.BudgetError(f"validation size exceeds the reference budget of {tables.MAX_N_FAMILY}")
    rows = []
    for n in ns:
        exact = eigenvalues(build(instantiate(ms, n), n), method=ctx.method, threads=ctx.threads)
        reps = [ml.validate(ms, grid, n, kk, degree, use_boundary, exact=exact) for kk in range(1, k + 1)]
        rows.append(tables.TableRow(n, tuple(r.max_error for r in reps), tuple(r.normalized_max for r in reps)))
    write_csv(out, *tables.as_columns(rows))


def cmd_table(ctx, out):
    which = ctx.args.which
    if which in tables.EXPANSION_TABLES:
        ns = ctx.sizes("256 512 1024")
        k = ctx.get("k", 3, int)
        if not 1 <= k <= ex.MAX_TERMS:
            raise ConfigError(f"k must be in 1..{ex.MAX_TERMS}")
        rows = tables.expansion_table(which, ns, k, ctx.pv, ctx.method)
    else:
        ns = ctx.sizes("256 512 1024 2048 4096 8192")
        k = ctx.get("k", 4, int)
        if k < 1:
            raise ConfigError("k must be >= 1")
        rows = tables.family_table(
            which, ns, ctx.get("n0", 100, int), k, ctx.get("levels", None, int),
            ctx.get("degree", ml.DEFAULT_DEGREE, int), not ctx.args.no_boundary, ctx.method, ctx.threads,
        )
    write_csv(out, *tables.as_columns(rows))


def cmd_plotdata(ctx, out):
    kind, f, g = _kind_symbols(ctx)
    (n,) = ctx.sizes("128")[:1]
    k = ctx.get("k", 1, int)
    if k not in (1, 2):
        raise ConfigError("plotdata needs k in {1, 2}")
    theta, coef, err = tables.overlay(kind, f, g, n, k, ctx.pv, ctx.method)
    write_csv(out, ["j", "theta", "coefficient", "normalized_error"], zip(range(1, n + 1), theta, coef, err))


def _common(p, symbol=False, two=False, sizes=False, kind=False):
    p.add_argument("--config", help="key = value settings file; flags override it")
    p.add_argument("--output", "-o", help="write CSV here instead of stdout")
    p.add_argument("--threads", type=int, help="worker threads (default: $TOEPLITZ_SPECTRA_THREADS or 1)")
    p.add_argument("--method", choices=METHODS, help="reference eigensolver (default lapack)")
    p.add_argument("--nodes", type=int, help="quadrature nodes M")
    p.add_argument("--delta", type=float, help="exclusion radius around singular nodes")
    p.add_argument("--fd-step", dest="fd_step", type=float, help="finite-difference step for eta'")
    if symbol:
        p.add_argument("--symbol", help="symbol spec, e.g. laplacian, f:2, kms:0.5, @coeffs.txt")
    if two:
        p.add_argument("--f", help="first symbol spec (default kms:0.5)")
        p.add_argument("--g", help="second symbol spec (default laplacian)")
        p.add_argument("--no-check", action="store_true", help="skip the simple-loop check")
    if sizes:
        p.add_argument("--n", help="matrix size(s), comma or space separated")
        p.add_argument("--k", type=int, help="number of expansion terms")
    if kind:
        p.add_argument("--kind", choices=[k.value for k in ex.ExpansionKind], help="expansion kind (default sum)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toeplitz-spectra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ref-eig", help="reference spectrum of T_n(f)")
    _common(sp, symbol=True, sizes=True)
    sp.set_defaults(func=cmd_ref_eig)

    for name, func, two in (("eta", cmd_eta, False), ("psi", cmd_psi, True), ("phi", cmd_phi, True)):
        sp = sub.add_parser(name, help=f"{name}(s) on a grid of s in [0, pi]")
        _common(sp, symbol=not two, two=two)
        if not two:
            sp.add_argument("--no-check", action="store_true", help="skip the simple-loop check")
        sp.add_argument("--s", help="explicit s values, comma or space separated")
        sp.add_argument("--points", type=int, default=65, help="number of equispaced s values (default 65)")
        sp.set_defaults(func=func)

    sp = sub.add_parser("expand", help="k-term eigenvalue approximations against the reference")
    _common(sp, two=True, sizes=True, kind=True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("matrixless", help="extrapolate, interpolate and predict for n-dependent symbols")
    _common(sp, sizes=True)
    sp.add_argument("--n0", type=int, help="coarse mesh size (default 100)")
    sp.add_argument("--levels", type=int, help="number of extrapolation levels")
    sp.add_argument("--degree", type=int, help="local interpolation degree (default 8)")
    sp.add_argument("--alpha1", type=float, help="h^2 weight of the family (default 3)")
    sp.add_argument("--alpha0", type=float, help="h^4 weight of the family (default 2)")
    sp.add_argument("--no-boundary", action="store_true", help="interpolate without endpoint values")
    sp.add_argument("--emit", choices=("grid", "predict", "validate"), default="predict")
    sp.set_defaults(func=cmd_matrixless)

    sp = sub.add_parser("table", help="error tables of the worked examples")
    sp.add_argument("which", choices=tables.TABLES)
    _common(sp, sizes=True)
    sp.add_argument("--n0", type=int, help="coarse mesh size for the family tables (default 100)")
    sp.add_argument("--levels", type=int)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--no-boundary", action="store_true")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("plotdata", help="per-index normalised errors next to the next expansion term")
    _common(sp, two=True, sizes=True, kind=True)
    sp.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    buf = io.StringIO()
    try:
        ctx = Context(args)
        args.func(ctx, buf)
        target = ctx.get("output")
    except quad.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if target:
        try:
            Path(target).write_text(buf.getvalue())
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        try:
            sys.stdout.write(buf.getvalue())
            sys.stdout.flush()
        except BrokenPipeError:
            # reader closed early (e.g. piped into head); silence the flush at exit
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
