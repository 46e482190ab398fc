"""Command line front end: problem files, dispatch, reports, exit codes.

Problem files are line oriented, ``#`` starts a comment and every statement
ends with ``;``::

    ring x, y, z;
    variety: y^2 - x^3;
    dim 2;
    normalization (t, s) -> (t^2, t^3, s);
    collection k=1: (0, x^3, z^2), (z^3, 0, x^2);
    collection k=1: (y^2, z^3, 0), (0, y^3, z^2);

An optional ``singular: g1, g2, ...;`` replaces the Jacobian-criterion
singular locus.  Exit codes: 0 success, 2 hypothesis violation, 3 parse
error, 4 cap exceeded or not stabilized, 5 route disagreement.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import chern, oracle
from .errors import InputFileError, LocalChernError, NotStabilized, PolyParseError
from .groebner import Ideal, colength, degree_cap, krull_dimension, standard_basis
from .polyalg import INFINITY, PolyRing, format_poly

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_PARSE = 3
EXIT_CAP = 4
EXIT_ROUTE = 5


@dataclass
class ProblemSpec:
    variety: chern.VarietyInput
    collection: chern.FormCollection
    options: dict = field(default_factory=dict)


@dataclass
class _Statement:
    text: str
    line: int
    end: int


def _statements(text: str) -> list[_Statement]:
    out = []
    buf: list[str] = []
    start = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        while line:
            head, sep, line = line.partition(";")
            if head.strip() and start is None:
                start = lineno
            buf.append(head)
            if sep:
                body = " ".join(buf).strip()
                if body:
                    out.append(_Statement(body, start, lineno))
                buf, start = [], None
            else:
                break
    leftover = " ".join(buf).strip()
    if leftover:
        raise InputFileError("statement is missing its ';' terminator", line=start)
    return out


def _split_top(text: str, line: int, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputFileError("unbalanced ')'", line=line)
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise InputFileError("unbalanced '('", line=line)
    parts.append("".join(cur).strip())
    return parts


def _tuple_items(text: str, line: int) -> list[str]:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise InputFileError(f"expected a parenthesized tuple, got {text!r}", line=line)
    inner = text[1:-1]
    depth = 0
    for ch in inner:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            raise InputFileError(f"expected a single tuple, got {text!r}", line=line)
    return _split_top(inner, line)


def _parse_poly(ring: PolyRing, text: str, line: int):
    try:
        return ring.parse(text)
    except PolyParseError as exc:
        raise InputFileError(f"{exc.message} in {text!r}", pos=exc.pos, line=line) from None


def parse_input_file(text: str) -> ProblemSpec:
    """Parse and validate a problem file; errors name the offending line."""
    ring = None
    equations = []
    dim = None
    normalization = None
    norm_line = None
    singular = None
    collections: list[tuple[int, list, int]] = []

    for st in _statements(text):
        body, line = st.text, st.line
        m = re.fullmatch(r"ring\s+(.+)", body, re.S)
        if m:
            if ring is not None:
                raise InputFileError("ring declared twice", line=line)
            try:
                ring = PolyRing(v.strip() for v in m.group(1).split(","))
            except ValueError as exc:
                raise InputFileError(str(exc), line=line) from None
            continue
        if ring is None:
            raise InputFileError("the ring must be declared first", line=line)
        m = re.fullmatch(r"variety\s*:\s*(.+)", body, re.S)
        if m:
            equations.append(_parse_poly(ring, m.group(1), line))
            continue
        m = re.fullmatch(r"dim\s+(\d+)", body)
        if m:
            dim = int(m.group(1))
            continue
        m = re.fullmatch(r"singular\s*:\s*(.+)", body, re.S)
        if m:
            singular = Ideal(ring, [_parse_poly(ring, t, line) for t in _split_top(m.group(1), line)])
            continue
        m = re.fullmatch(r"normalization\s*(\(.*?\))\s*->\s*(\(.*\))", body, re.S)
        if m:
            names = _tuple_items(m.group(1), line)
            try:
                source = PolyRing(names)
            except ValueError as exc:
                raise InputFileError(str(exc), line=line) from None
            images = [_parse_poly(source, t, line) for t in _tuple_items(m.group(2), line)]
            if len(images) != ring.nvars:
                raise InputFileError(
                    f"normalization arity: {len(images)} images for {ring.nvars} variables", line=line)
            normalization = chern.Normalization(source, tuple(images))
            norm_line = line
            continue
        m = re.fullmatch(r"collection\s+k\s*=\s*(\d+)\s*:\s*(.+)", body, re.S)
        if m:
            k = int(m.group(1))
            forms = []
            for item in _split_top(m.group(2), line):
                entries = _tuple_items(item, line)
                if len(entries) != ring.nvars:
                    raise InputFileError(
                        f"form has {len(entries)} entries, expected {ring.nvars}", line=line)
                forms.append(tuple(_parse_poly(ring, t, line) for t in entries))
            collections.append((k, forms, line))
            continue
        hint = f"; is a ';' missing before line {st.end}?" if st.end > line else ""
        raise InputFileError(f"unrecognized statement {body.split()[0]!r}{hint}", line=line)

    if ring is None:
        raise InputFileError("no ring declared")
    if dim is None:
        raise InputFileError("no 'dim' statement")
    if not collections:
        raise InputFileError("no collection given")
    if not 1 <= dim <= ring.nvars:
        raise InputFileError(f"dim {dim} outside 1..{ring.nvars}")
    total = sum(k for k, _, _ in collections)
    if total != dim:
        raise InputFileError(f"partition sums to {total}, expected d = {dim}",
                             line=collections[-1][2])
    for k, forms, line in collections:
        if len(forms) != dim - k + 1:
            raise InputFileError(f"collection has {len(forms)} forms, expected d-k_i+1 = {dim - k + 1}",
                                 line=line)
    if normalization is not None and normalization.source.nvars != dim:
        raise InputFileError(
            f"normalization arity: source has {normalization.source.nvars} variables, expected {dim}",
            line=norm_line)
    try:
        variety = chern.VarietyInput(ring, tuple(equations), dim, normalization, singular)
    except ValueError as exc:
        raise InputFileError(str(exc)) from None
    coll = chern.FormCollection(tuple(k for k, _, _ in collections),
                                tuple(tuple(f) for _, f, _ in collections))
    return ProblemSpec(variety, coll)


# -- report formatting -------------------------------------------------------

def _fmt_value(v) -> str:
    return "inf" if v == INFINITY else str(v)


def _echo(spec: ProblemSpec) -> list[str]:
    X, C = spec.variety, spec.collection
    lines = ["input:", f"  ring {', '.join(X.ring.variables)}"]
    for e in X.equations:
        lines.append(f"  variety: {format_poly(e)}")
    lines.append(f"  dim {X.dim}")
    if X.normalization is not None:
        nz = X.normalization
        lines.append(f"  normalization ({', '.join(nz.source.variables)}) -> "
                     f"({', '.join(format_poly(p) for p in nz.images)})")
    if X.singular_override is not None:
        lines.append(f"  singular: {', '.join(format_poly(g) for g in X.singular_override.gens)}")
    for k, sub in zip(C.partition, C.forms):
        forms = ", ".join("(" + ", ".join(format_poly(p) for p in w) + ")" for w in sub)
        lines.append(f"  collection k={k}: {forms}")
    return lines


def _geometry_lines(geo: chern.GeometryReport) -> list[str]:
    lines = ["geometry:", f"  singular locus dimension: {geo.singular_dim}"]
    for i, (d, e, r, inside) in enumerate(zip(geo.prefix_dims, geo.expected_dims,
                                               geo.raw_dims, geo.inside_singular), 1):
        extra = ", inside S(X)" if inside else ""
        lines.append(f"  prefix {i}: dim {d} (expected {e}, raw {r}{extra})")
    lines.append(f"  isolated: {'yes' if geo.isolated else 'no'}")
    return lines


def _report_text(spec: ProblemSpec, report: chern.ChernReport, opts: dict) -> str:
    lines = _echo(spec)
    lines.append("options: " + " ".join(f"{k}={opts[k]}" for k in sorted(opts)))
    if report.geometry is not None:
        lines += _geometry_lines(report.geometry)
    lines.append(f"method: {report.method}")
    lines.append("terms:")
    for t in report.terms:
        seed = f"  (seed {t.seed})" if t.seed is not None else ""
        lines.append(f"  {t.label} = {_fmt_value(t.value)}{seed}")
    lines.append(f"seeds: {', '.join(str(s) for s in report.seeds)}")
    if report.warnings:
        lines.append("warnings:")
        lines += [f"  {w}" for w in report.warnings]
    lines.append(f"final: {report.final}")
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------

def _load(path: str) -> ProblemSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_input_file(text)


def _ring_and_polys(args) -> tuple[PolyRing, list]:
    try:
        ring = PolyRing(v for v in args.vars.split(","))
    except ValueError as exc:
        raise InputFileError(str(exc)) from None
    polys = []
    for text in args.polys:
        try:
            polys.append(ring.parse(text))
        except PolyParseError as exc:
            raise PolyParseError(f"{exc.message} in {text!r}", exc.pos) from None
    return ring, polys


def _mode(args) -> str:
    return "global" if args.glob else "local"


def _choose_method(spec: ProblemSpec, method: str) -> str:
    if method != "auto":
        return method
    X, C = spec.variety, spec.collection
    if X.n == 3 and X.dim == 2 and len(X.equations) == 1 and C.partition == (1, 1):
        return "surface"
    return "icis"


def cmd_compute(args) -> str:
    spec = _load(args.file)
    method = _choose_method(spec, args.method)
    opts = {"seed": args.seed, "trials": args.trials, "bound": args.bound, "method": method}
    if method == "surface":
        opts["route"] = args.route
        _, report = chern.chern_surface(spec.variety, spec.collection, seed=args.seed,
                                        trials=args.trials, route=args.route, bound=args.bound)
    else:
        _, report = chern.chern_icis(spec.variety, spec.collection, seed=args.seed,
                                     trials=args.trials, bound=args.bound)
    if args.format == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    return _report_text(spec, report, opts)


def cmd_ind(args) -> str:
    spec = _load(args.file)
    spec.collection.validate(spec.variety)
    value = chern.ind_point(spec.variety, spec.collection)
    if args.format == "json":
        return json.dumps({"ind": "inf" if value == INFINITY else value}) + "\n"
    return "\n".join(_echo(spec)) + f"\nind: {_fmt_value(value)}\n"


def cmd_check(args) -> str:
    spec = _load(args.file)
    spec.collection.validate(spec.variety)
    geo = chern.geometry_checks(spec.variety, spec.collection)
    if args.format == "json":
        d = geo.to_dict()
        d.update(raw_dims=geo.raw_dims, inside_singular=geo.inside_singular,
                 singular_dim=geo.singular_dim)
        return json.dumps(d, indent=2) + "\n"
    return "\n".join(_echo(spec) + _geometry_lines(geo)) + "\n"


def cmd_imult(args) -> str:
    ring, polys = _ring_and_polys(args)
    if ring.nvars != 2 or len(polys) != 2:
        raise PolyParseError("imult takes --vars with two variables and two polynomials")
    value = chern.imult_plane(*polys)
    out = {"imult": "inf" if value == INFINITY else value}
    if args.oracle and value != INFINITY:
        out["resultant"] = oracle.imult_resultant(*polys, seed=args.seed)
    if args.format == "json":
        return json.dumps(out) + "\n"
    return "\n".join(f"{k}: {v}" for k, v in out.items()) + "\n"


def cmd_colength(args) -> str:
    ring, polys = _ring_and_polys(args)
    value = colength(Ideal(ring, polys), _mode(args))
    if args.format == "json":
        return json.dumps({"colength": "inf" if value == INFINITY else value}) + "\n"
    return f"colength ({_mode(args)}): {_fmt_value(value)}\n"


def cmd_dim(args) -> str:
    ring, polys = _ring_and_polys(args)
    value = krull_dimension(Ideal(ring, polys), _mode(args))
    if args.format == "json":
        return json.dumps({"dim": value}) + "\n"
    return f"dim ({_mode(args)}): {value}\n"


def cmd_gb(args) -> str:
    ring, polys = _ring_and_polys(args)
    B = standard_basis(Ideal(ring, polys), _mode(args))
    if args.format == "json":
        return json.dumps({"basis": [format_poly(p) for p in B.basis]}) + "\n"
    return "".join(f"{format_poly(p)}\n" for p in B.basis)


_SELFTEST_IDEALS = [
    ("x, y", ["x^2", "y^2"]),
    ("x, y", ["x^2", "y"]),
    ("x, y", ["x^3 + y^3 + x^4", "x*y"]),
    ("x, y, z", ["x", "y", "z"]),
    ("x, y, z", ["x^2 + y*z", "y^2 + x*z", "z^2 + x*y"]),
    ("t, z", ["z^2*(2t^5+3z^3)", "-3t^11+2z^5"]),
]

_SELFTEST_CURVES = [
    ("t", "z"),
    ("z^2 - t^3", "z"),
    ("z^2*(2t^5+3z^3)", "-3t^11+2z^5"),
]


def cmd_selftest(args) -> str:
    lines = []
    failed = unstable = False
    cap = args.cap if args.cap is not None else oracle.DEFAULT_CAP
    for names, gens in _SELFTEST_IDEALS:
        ring = PolyRing(v.strip() for v in names.split(","))
        I = Ideal(ring, [ring.parse(g) for g in gens])
        main = colength(I, "local")
        res = oracle.colength_truncation(I, cap=cap)
        if not res.stabilized:
            lines.append(f"NOT STABILIZED colength({', '.join(gens)}) cap={cap}")
            unstable = True
            continue
        ok = main == res.value
        failed |= not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} colength({', '.join(gens)}) = {main} "
                     f"truncation {res.value} (N={res.stabilized_at})")
    ring = PolyRing(["t", "z"])
    for f, g in _SELFTEST_CURVES:
        a = chern.imult_plane(ring.parse(f), ring.parse(g))
        b = oracle.imult_resultant(ring.parse(f), ring.parse(g), seed=args.seed)
        ok = a == b
        failed |= not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} imult({f}, {g}) = {a} resultant {b}")
    lines.append(f"selftest: {'FAILED' if failed or unstable else 'ok'}")
    text = "\n".join(lines) + "\n"
    if failed:
        raise _SelftestFailed(text)
    if unstable:
        raise _SelftestUnstable(text)
    return text


class _SelftestFailed(LocalChernError):
    exit_code = 1


class _SelftestUnstable(NotStabilized):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localchern",
                                     description="Local Chern obstructions of 1-form collections.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=chern.DEFAULT_TRIALS)
    common.add_argument("--bound", type=int, default=chern.DEFAULT_BOUND,
                        help="coefficient bound for generic linear forms")
    common.add_argument("--cap", type=int, default=None,
                        help="S-pair degree cap (selftest: truncation degree cap)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    loc = common.add_mutually_exclusive_group()
    loc.add_argument("--local", dest="glob", action="store_false", default=False)
    loc.add_argument("--global", dest="glob", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="local Chern obstruction of a problem file")
    p.add_argument("file")
    p.add_argument("--route", choices=chern.ROUTES, default="colength")
    p.add_argument("--method", choices=("auto", "icis", "surface"), default="auto")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("ind", parents=[common], help="index ind(omega) of a problem file")
    p.add_argument("file")
    p.set_defaults(func=cmd_ind)

    p = sub.add_parser("check", parents=[common], help="dimension diagnostics of a problem file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    for name, func, hlp in (("imult", cmd_imult, "intersection multiplicity of two plane curves"),
                            ("colength", cmd_colength, "colength of an ideal"),
                            ("dim", cmd_dim, "Krull dimension of an ideal"),
                            ("gb", cmd_gb, "standard basis of an ideal")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--vars", required=True, help="comma separated variable names")
        p.add_argument("polys", nargs="+")
        if name == "imult":
            p.add_argument("--oracle", action="store_true", help="also run the resultant oracle")
        p.set_defaults(func=func)

    p = sub.add_parser("selftest", parents=[common], help="cross-check engines against oracles")
    p.set_defaults(func=cmd_selftest)
    return parser


def _shield_negatives(argv: Sequence[str]) -> list[str]:
    # "-3x^2" is a polynomial, not a flag; a leading space hides the dash from
    # argparse and is dropped again by the polynomial parser.
    return [f" {a}" if a.startswith("-") and not a.startswith("--") and a != "-h" and len(a) > 1
            else a for a in argv]


def run(argv: Sequence[str]) -> tuple[str, int]:
    """Execute a command line; returns (output text, exit code)."""
    parser = build_parser()
    try:
        args = parser.parse_args(_shield_negatives(argv))
    except SystemExit as exc:
        return "", EXIT_PARSE if exc.code else EXIT_OK
    try:
        cap = args.cap if args.command != "selftest" else None
        with degree_cap(cap):
            return args.func(args), EXIT_OK
    except (_SelftestFailed, _SelftestUnstable) as exc:
        return str(exc), exc.exit_code
    except LocalChernError as exc:
        return f"error: {exc}\n", exc.exit_code
    except ValueError as exc:
        return f"error: {exc}\n", EXIT_HYPOTHESIS


def main(argv: Sequence[str] | None = None) -> int:
    text, code = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
