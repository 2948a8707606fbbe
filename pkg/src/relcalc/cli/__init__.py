"""Command line interface: ``relcalc {eval,report,nrange,laws,classify}``.

Exit codes: 0 success (all laws pass), 1 usage or I/O error, 2 parse, type
or name error, 3 law failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from .. import classify as cl
from .. import decompose as dec
from .. import spectral as sp
from ..relation import Relation
from ..subspace import Subspace
from ..laws import registry
from .dsl import DSLError, Evaluator, parse
from .fileio import Environment, FormatError, format_complex, load

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_LAWS = 0, 1, 2, 3
SNAP = 1e-12


class UsageError(Exception):
    pass


class InputError(Exception):
    """Bad input content (unknown name, wrong kind of binding)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- formatting ---------------------------------------------------------------------

def _snap(x: float, scale: float = 1.0) -> float:
    return 0.0 if abs(x) <= SNAP * scale else x


def fmt_real(x: float) -> str:
    if np.isinf(x):
        return "inf"
    return "%.12g" % (_snap(float(x)) + 0.0)


def fmt_complex(z: complex) -> str:
    z = complex(z)
    return format_complex(complex(_snap(z.real), _snap(z.imag)), "%.12g")


def fmt_residual(r: float) -> str:
    return "0" if r <= 1e-13 else "%.1e" % r


def echelon_basis(B: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Reduced column echelon form of a basis: a canonical basis for display.

    Pivot rows are the first rows (top to bottom) that increase the rank;
    the returned basis is the identity on those rows.
    """
    m, k = B.shape
    if k == 0:
        return B
    piv: list[int] = []
    for j in range(m):
        cand = piv + [j]
        if np.linalg.svd(B[cand], compute_uv=False)[-1] > tol:
            piv = cand
            if len(piv) == k:
                break
    E = B @ np.linalg.inv(B[piv])
    re = np.where(np.abs(E.real) <= SNAP, 0.0, E.real)
    im = np.where(np.abs(E.imag) <= SNAP, 0.0, E.imag)
    return re + 1j * im


def _vec_text(col: np.ndarray, n: int | None) -> str:
    if n is None:
        return "(" + ", ".join(fmt_complex(z) for z in col) + ")"
    return ("(" + ", ".join(fmt_complex(z) for z in col[:n]) + " | "
            + ", ".join(fmt_complex(z) for z in col[n:]) + ")")


def _vec_json(col: np.ndarray) -> list:
    return [[float(fmt_real(z.real)), float(fmt_real(z.imag))] for z in col]


def describe(value) -> list[str]:
    """Printable lines for a scalar, subspace or relation."""
    if isinstance(value, Relation):
        head = (f"relation dim={value.dim} dom={value.dom.dim} ran={value.ran.dim} "
                f"ker={value.ker.dim} mul={value.mul.dim}")
        return [head] + ["  " + _vec_text(c, value.n)
                         for c in echelon_basis(value.basis).T]
    if isinstance(value, Subspace):
        head = f"subspace dim={value.dim} in C^{value.ambient_dim}"
        return [head] + ["  " + _vec_text(c, None) for c in echelon_basis(value.basis).T]
    return [f"scalar {fmt_complex(value)}"]


# -- shared helpers ----------------------------------------------------------------

def _load(path: str) -> Environment:
    try:
        return load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _relation(env: Environment, name: str) -> Relation:
    if name not in env.bindings:
        raise InputError(f"unknown name {name!r}")
    v = env.bindings[name]
    if not isinstance(v, Relation):
        raise InputError(f"{name!r} is a subspace, not a relation")
    return v


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline="\n"), True
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def parse_dims(text: str) -> list[int]:
    """"5", "2..6" or "2,3,5"."""
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise UsageError(f"empty dimension range {text!r}")
        dims = list(range(lo, hi + 1))
    elif re.fullmatch(r"\s*\d+(\s*,\s*\d+)*\s*", text):
        dims = [int(p) for p in text.split(",")]
    else:
        raise UsageError(f"bad --dim {text!r}; use e.g. 5, 2..6 or 2,3,4")
    if min(dims) < 2:
        raise UsageError("laws need dimensions >= 2")
    return dims


# -- report --------------------------------------------------------------------------

def _decompositions(A: Relation) -> list[tuple[str, object, str | None]]:
    """(kind, Decomposition or None, reason when unavailable)."""
    out = [("canonical", dec.canonical(A), None),
           ("componentwise", dec.componentwise(A), None)]
    try:
        out.append(("orthogonal", dec.orthogonal_decompose(A), None))
    except dec.NotOrthogonal:
        out.append(("orthogonal", None, "mul A** is not contained in mul A*"))
    try:
        out.append(("cartesian", dec.cartesian_components(A), None))
    except dec.NotFormallyDomainTight:
        out.append(("cartesian", None, "A is not formally domain tight"))
    return out


PART_NAMES = {"canonical": ("reg", "sing"), "componentwise": ("op", "mul"),
              "orthogonal": ("op", "mul"), "cartesian": ("A1", "A2")}


def build_report(name: str, A: Relation) -> dict:
    spectrum = sp.eigenvalues(A, sp.DEFAULT_SAMPLE_POINTS)
    decomps = {}
    for kind, d, reason in _decompositions(A):
        if d is None:
            decomps[kind] = {"available": False, "reason": reason}
            continue
        parts = {}
        for pname, P in zip(PART_NAMES[kind], d.parts):
            parts[pname] = {"dim": P.dim,
                            "basis": [_vec_json(c) for c in echelon_basis(P.basis).T]}
        residuals = {"identity": float(fmt_residual(d.identity_residual))}
        for key, val in d.extra.items():
            if key.endswith("residual"):
                residuals[key[:-len("_residual")]] = float(fmt_residual(val))
        decomps[kind] = {"available": True, "parts": parts, "residuals": residuals}
    return {
        "format_version": 1,
        "name": name,
        "n": A.n,
        "dims": {"graph": A.dim, "dom": A.dom.dim, "ran": A.ran.dim,
                 "ker": A.ker.dim, "mul": A.mul.dim},
        "flags": cl.flags(A),
        "decompositions": decomps,
        "spectrum": {
            "every_point": spectrum.every_point,
            "mul_dim": spectrum.mul_dim,
            "eigenvalues": [{"value": [float(fmt_real(z.real)), float(fmt_real(z.imag))],
                             "multiplicity": m} for z, m in spectrum.eigenvalues],
        },
        "samples": [{"lambda": [float(fmt_real(lam.real)), float(fmt_real(lam.imag))],
                     "regularity_constant": None if np.isinf(c) else float(fmt_real(c)),
                     "defect": d} for lam, c, d in spectrum.samples],
    }


def report_text(rep: dict) -> str:
    lines = [f"relation {rep['name']} in C^{rep['n']}"]
    d = rep["dims"]
    lines.append("dims: " + " ".join(f"{k}={v}" for k, v in d.items()))
    lines.append("flags:")
    lines += [f"  {k}={'true' if v else 'false'}" for k, v in rep["flags"].items()]
    lines.append("decompositions:")
    for kind, info in rep["decompositions"].items():
        if not info["available"]:
            lines.append(f"  {kind}: not available ({info['reason']})")
            continue
        res = ", ".join(f"{k} {fmt_residual(v)}" for k, v in info["residuals"].items())
        lines.append(f"  {kind} (residuals: {res})")
        for pname, part in info["parts"].items():
            lines.append(f"    {pname}: dim={part['dim']}")
            for vec in part["basis"]:
                z = [complex(a, b) for a, b in vec]
                lines.append("      " + _vec_text(np.array(z), rep["n"]))
    s = rep["spectrum"]
    lines.append("spectrum:")
    lines.append(f"  every_point={'true' if s['every_point'] else 'false'}")
    lines.append(f"  mul_dim={s['mul_dim']}")
    for e in s["eigenvalues"]:
        lines.append(f"  eigenvalue {fmt_complex(complex(*e['value']))} "
                     f"multiplicity={e['multiplicity']}")
    lines.append("samples:")
    for smp in rep["samples"]:
        c = smp["regularity_constant"]
        lines.append(f"  lambda={fmt_complex(complex(*smp['lambda']))} "
                     f"c={'inf' if c is None else fmt_real(c)} defect={smp['defect']}")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------------

def cmd_eval(args) -> int:
    if args.file:
        env = _load(args.file)
    elif args.dim:
        env = Environment(args.dim)
    else:
        raise UsageError("eval needs -f <defs> or --dim <n>")
    for value in Evaluator(env).run(parse(args.expr)):
        print("\n".join(describe(value)))
    return EXIT_OK


def cmd_report(args) -> int:
    env = _load(args.file)
    rep = build_report(args.name, _relation(env, args.name))
    if args.format == "json":
        print(json.dumps(rep, indent=2))
    else:
        sys.stdout.write(report_text(rep))
    return EXIT_OK


def cmd_classify(args) -> int:
    env = _load(args.file)
    A = _relation(env, args.name)
    for k, v in cl.flags(A).items():
        print(f"{k}={'true' if v else 'false'}")
    return EXIT_OK


def cmd_nrange(args) -> int:
    env = _load(args.file)
    A = _relation(env, args.name)
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    vals = sp.nrange_sample(A, args.samples, args.seed)
    scale = max(1.0, float(np.max(np.abs(vals)))) if vals.size else 1.0
    out, close = _open_out(args.output)
    try:
        out.write("re,im\n")
        for z in vals:
            out.write("%.12g,%.12g\n" % (_snap(z.real, scale) + 0.0, _snap(z.imag, scale) + 0.0))
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_laws(args) -> int:
    dims = parse_dims(args.dim)
    ids = None if args.law == "all" else [args.law]
    if ids and ids[0] not in registry.LAWS:
        raise UsageError(f"unknown law {args.law!r}; known: {', '.join(registry.LAWS)}")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    reports = registry.run_all(args.trials, dims, args.seed, ids, workers=args.workers)
    failed = 0
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        line = (f"{status} {r.law_id} trials={r.trials} failures={len(r.failures)} "
                f"max_residual={fmt_residual(r.max_residual)}")
        if r.note:
            line += f" [{r.note}]"
        print(line)
        for f in r.failures[: args.show]:
            print(f"  seed={f.seed} n={f.n} residual={fmt_residual(f.residual)} at: {f.witness}")
        failed += not r.passed
    print(f"{len(reports)} laws, {len(reports) - failed} passed, {failed} failed")
    return EXIT_LAWS if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relcalc", description="Linear relations in C^n.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate expressions")
    e.add_argument("-f", "--file", help="definitions file")
    e.add_argument("--dim", type=int, help="dimension when no file is given")
    e.add_argument("-e", "--expr", required=True, help="program text")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("report", help="full report on a relation")
    r.add_argument("name")
    r.add_argument("-f", "--file", required=True)
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.set_defaults(func=cmd_report)

    c = sub.add_parser("classify", help="classification flags")
    c.add_argument("name")
    c.add_argument("-f", "--file", required=True)
    c.set_defaults(func=cmd_classify)

    nr = sub.add_parser("nrange", help="sample the numerical range as CSV")
    nr.add_argument("name")
    nr.add_argument("-f", "--file", required=True)
    nr.add_argument("--samples", type=int, default=1000)
    nr.add_argument("--seed", type=int, default=0)
    nr.add_argument("-o", "--output", help="CSV path (default: stdout)")
    nr.set_defaults(func=cmd_nrange)

    lw = sub.add_parser("laws", help="run the randomized law suite")
    lw.add_argument("--law", default="all", help="law id or 'all'")
    lw.add_argument("--trials", type=int, default=100)
    lw.add_argument("--dim", default="2..6", help="n, lo..hi or a comma list")
    lw.add_argument("--seed", type=int, default=42)
    lw.add_argument("--workers", type=int, default=1)
    lw.add_argument("--show", type=int, default=3, help="failures listed per law")
    lw.set_defaults(func=cmd_laws)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"relcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DSLError, FormatError, InputError) as exc:
        print(f"relcalc: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
