"""Command-line driver: ``alglab <command> ...``.

Exit status is 0 on success or suite pass, 1 on suite failure, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import io as aio
from . import presets
from . import sectional as sec
from . import special as sp
from . import suites
from .core import AlgebraError, MetricError, MetrizedAlgebra
from .numeric import RATIONAL, parse_rational, snap_rational

SEED_ENV = "ALG_LAB_SEED"


class UsageError(Exception):
    pass


# --- sources and element literals -----------------------------------------------------

def resolve(src: str, product: str | None = None) -> MetrizedAlgebra:
    """A preset string (``preset:name:params`` or ``name:params``) or a JSON algebra file."""
    path = Path(src)
    if not src.startswith("preset:") and path.exists():
        M = aio.load_metrized(path)
    else:
        name = src.split(":")[1] if src.startswith("preset:") else src.split(":")[0]
        if name not in presets.REGISTRY:
            raise UsageError(f"{src!r} is neither a file nor a known preset")
        M = presets.build(src)
    if product:
        M = presets.with_product(M, product)
    return M


def _scalar(tok: str, mode: str):
    tok = tok.strip()
    try:
        return parse_rational(tok) if mode == RATIONAL else float(Fraction(tok)) if "/" in tok else float(tok)
    except (ValueError, TypeError, ZeroDivisionError):
        if mode == RATIONAL:
            try:
                return Fraction(float(tok))
            except ValueError:
                pass
        raise UsageError(f"bad scalar {tok!r}") from None


_TERM = re.compile(r"\s*([+-]?)\s*(?:([^*()+-]+)\s*\*\s*)?(diag|sym)\(([^)]*)\)\s*")


def parse_element(M: MetrizedAlgebra, text: str) -> list:
    """CSV coordinates, or sums of ``diag(a, b, ...)`` and ``c*sym(i, j)`` terms for Hermitian presets."""
    text = text.strip()
    if "(" not in text:
        vals = [_scalar(t, M.mode) for t in text.split(",")]
        if len(vals) != M.dim:
            raise UsageError(f"element has {len(vals)} coordinates, expected {M.dim}")
        return vals
    if "basis_index" not in M.meta:
        raise UsageError("diag(...)/sym(i,j) literals need a Hermitian-matrix preset")
    n = M.meta["herm_n"]
    entries: dict = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise UsageError(f"cannot parse element literal at {text[pos:]!r}")
        sign, coef, kind, args = m.groups()
        c = parse_rational(coef.strip()) if coef else Fraction(1)
        if sign == "-":
            c = -c
        parts = [a.strip() for a in args.split(",") if a.strip()]
        if kind == "diag":
            if len(parts) != n:
                raise UsageError(f"diag needs {n} entries")
            for i, a in enumerate(parts, 1):
                entries[(i, i)] = entries.get((i, i), 0) + c * parse_rational(a)
        else:
            if len(parts) != 2:
                raise UsageError("sym needs two indices")
            i, j = int(parts[0]), int(parts[1])
            if not (1 <= i <= n and 1 <= j <= n):
                raise UsageError(f"sym indices must lie in 1..{n}")
            # sym(i, i) = 2 e_ii
            key = (min(i, j), max(i, j))
            entries[key] = entries.get(key, 0) + (2 * c if i == j else c)
        pos = m.end()
    x = presets.herm_element(M, entries)
    return x if M.mode == RATIONAL else [float(v) for v in x]


# --- report emission ---------------------------------------------------------------------

def _emit(report: dict, args) -> None:
    header = {"tool": "alglab", "version": __version__, "command": args.command}
    if hasattr(args, "seed"):
        header["seed"] = args.seed
    body = {**header, **report}
    text = aio.report_csv(body) if args.format == "csv" else aio.report_json(body)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _opt_cfg(args) -> sec.OptimizerConfig:
    return sec.OptimizerConfig(starts=args.starts, iterations=args.iters, seed=args.seed, threads=args.threads,
                               samples=getattr(args, "samples", 0) or 0)


def _search_cfg(args) -> sp.SearchConfig:
    return sp.SearchConfig(starts=args.starts, seed=args.seed)


# --- commands -------------------------------------------------------------------------------

def cmd_list_presets(args) -> int:
    _emit({"presets": presets.list_presets()}, args)
    return 0


def cmd_info(args) -> int:
    M = resolve(args.src, args.product)
    rep = M.report
    _emit({"name": M.meta.get("name"), "dim": M.dim, "mode": M.mode, "labels": M.algebra.labels,
           "metric_invariant": rep.invariant, "nondegenerate": rep.nondegenerate, "signature": rep.signature,
           "definiteness": rep.definiteness, "invariance_defect": rep.max_defect,
           "provenance": M.meta.get("provenance"), "expected": M.meta.get("expected")}, args)
    return 0


def cmd_sect(args) -> int:
    M = resolve(args.src, args.product)
    x, y = parse_element(M, args.x), parse_element(M, args.y)
    val = sec.sect(M, x, y)
    sym, br = sec.sect_split(M, x, y)
    _emit({"sect": val, "sect_sym": sym, "sect_bracket": br, "x": x, "y": y}, args)
    return 0


def cmd_constant_sect(args) -> int:
    M = resolve(args.src, args.product)
    c = sec.constant_sect(M)
    _emit({"algebra": M.meta.get("name"), "constant": c is not None, "value": c}, args)
    return 0


def cmd_extrema(args) -> int:
    M = resolve(args.src, args.product)
    cfg = _opt_cfg(args)
    rep = sec.estimate_extrema(M, cfg)
    _emit({"algebra": M.meta.get("name"), "config": suites._cfg_echo(cfg), "result": rep.as_dict()}, args)
    return 0


def cmd_bw(args) -> int:
    M = resolve(args.src, args.product)
    cfg = _opt_cfg(args)
    rep = sec.bw_constant(M.algebra, M.form, cfg)
    _emit({"algebra": M.meta.get("name"), "config": suites._cfg_echo(cfg), "result": rep.as_dict()}, args)
    return 0


def cmd_special(args) -> int:
    M = resolve(args.src, args.product)
    cfg = _search_cfg(args)
    found = sp.find_idempotents(M, cfg) if args.command == "idempotents" else sp.find_square_zero(M, cfg)
    d = found.as_dict()
    d.pop("histories", None)
    _emit({"algebra": M.meta.get("name"), "config": {"starts": cfg.starts, "seed": cfg.seed}, "result": d}, args)
    return 0


def cmd_spectrum(args) -> int:
    M = resolve(args.src, args.product)
    e = parse_element(M, args.e)
    spec = sp.orthogonal_spectrum(M, e)
    _emit({"algebra": M.meta.get("name"), "e": e, "orthogonal_spectrum": spec,
           "exact": [snap_rational(v) if isinstance(v, float) else None for v in spec]}, args)
    return 0


def cmd_verify(args) -> int:
    name = args.suite
    if name == "table1":
        rep = suites.table1(parse_rational(args.eps), sp.SearchConfig(seed=args.seed))
    elif name == "herm-bounds":
        rep = suites.herm_bounds(args.n, args.level, _opt_cfg(args), samples=args.samples)
    elif name == "bw-mat":
        rep = suites.bw_mat(args.n, args.level, _opt_cfg(args))
    elif name == "symmetric-composition":
        rep = suites.symmetric_composition(args.samples, args.seed)
    elif name == "identities":
        rep = suites.identity_battery()
    elif name == "bianchi":
        rep = suites.bianchi(args.count, args.seed)
    elif name == "norton":
        rep = suites.norton(seed=args.seed)
    elif name == "cdk":
        rep = suites.cdk(args.samples, args.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown suite {name!r}")
    _emit(rep, args)
    return 0 if rep["passed"] else 1


# --- argument parsing ------------------------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return sec.DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser(default_seed: int) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=default_seed)
    common.add_argument("--threads", type=int, default=1)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("src", help="preset:name:params, name:params, or a JSON algebra file")
    src.add_argument("--product", choices=("symmetrized", "bracket", "adjoint"),
                     help="use a derived product with the same metric")

    opt = argparse.ArgumentParser(add_help=False)
    opt.add_argument("--starts", type=int, default=64)
    opt.add_argument("--iters", type=int, default=500)

    p = argparse.ArgumentParser(prog="alglab", description="Sectional nonassociativity of metrized algebras.")
    p.add_argument("--version", action="version", version=f"alglab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list-presets", parents=[common])
    s.set_defaults(func=cmd_list_presets)
    s = sub.add_parser("info", parents=[common, src])
    s.set_defaults(func=cmd_info)
    s = sub.add_parser("sect", parents=[common, src])
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.set_defaults(func=cmd_sect)
    s = sub.add_parser("constant-sect", parents=[common, src])
    s.set_defaults(func=cmd_constant_sect)
    s = sub.add_parser("extrema", parents=[common, src, opt])
    s.set_defaults(func=cmd_extrema)
    s = sub.add_parser("bw", parents=[common, src, opt])
    s.add_argument("--samples", type=int, default=1_000_000)
    s.set_defaults(func=cmd_bw)
    for name in ("idempotents", "square-zero"):
        s = sub.add_parser(name, parents=[common, src])
        s.add_argument("--starts", type=int, default=256)
        s.set_defaults(func=cmd_special)
    s = sub.add_parser("spectrum", parents=[common, src])
    s.add_argument("--e", required=True)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("verify", parents=[common, opt])
    s.add_argument("suite", choices=sorted(suites.SUITES))
    s.add_argument("--eps", default="1")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--level", type=int, default=0, choices=(0, 1, 2, 3))
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(func=cmd_verify)
    return p


_SUITE_SAMPLES = {"herm-bounds": 100_000, "bw-mat": 1_000_000, "symmetric-composition": 100_000, "cdk": 10_000}


def run_cli(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"alglab: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    if args.command == "verify" and args.samples is None:
        args.samples = _SUITE_SAMPLES.get(args.suite, 0)
    if args.command == "verify" and args.suite == "bw-mat" and args.n < 1:
        print("alglab: error: --n must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, AlgebraError, MetricError, aio.FormatError, ValueError, KeyError) as exc:
        print(f"alglab: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(run_cli())


if __name__ == "__main__":  # pragma: no cover
    main()
