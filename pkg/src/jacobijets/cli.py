"""Command line front end and the plain-text space definition format.

Space definition files are UTF-8, one field per line, fields in this order
(``#`` starts a comment, blank lines are ignored)::

    name: m6
    field: 2                      # d, the radicand of Q(sqrt d); 1 means Q
    dim: 8
    labels: H1 H2 E1 ...          # optional
    constants:                    # i j k c_ij^k, 1-based, i < j
    1 3 4 -1+0*sqrt(2)
    ...
    h: 1 2                        # may be empty
    m: 3 4 5 6 7 8
    metric:                       # lower triangle, row i holds i entries
    1
    0 1
    ...

Exit codes: 0 success, 1 validation failure, 2 parse or usage error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .catalog import RECIPES, build
from .exactalg import QArray, Scalar, as_scalar, parse_scalar, render_scalar
from .homogeneous import (
    InvariantViolation,
    ReductiveSpace,
    ReductiveSpaceError,
    connection_operator,
    curvature_identity_failures,
    jet_invariance_holds,
    raw_curvature,
    ricci,
    second_bianchi_holds,
)
from .jacobi import (
    NoRelationError,
    UnsupportedSignature,
    find_relation,
    osculating_probe,
    scale_invariant_signature,
)
from .lie import LieAlgebraData, LieAlgebraError, validate as validate_lie
from .stabilizer import singer_invariant

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3

FIELDS = ("name", "field", "dim", "labels", "constants", "h", "m", "metric")
_OPTIONAL = {"labels"}


class SpaceParseError(ValueError):
    def __init__(self, source: str, line: int, field: str, message: str):
        self.source, self.line, self.field = source, line, field
        super().__init__(f"{source}:{line}: [{field}] {message}")


# -- space definition files ----------------------------------------------------------


def dump_space(s: ReductiveSpace) -> str:
    """Canonical text of ``s``; equal spaces give byte-identical output."""
    alg = s.alg
    lines = [
        f"name: {s.name}",
        f"field: {s.d}",
        f"dim: {alg.dim}",
        "labels: " + " ".join(alg.labels),
        "constants:",
    ]
    for i, j, k, v in alg.sparse_upper():
        lines.append(f"{i + 1} {j + 1} {k + 1} {render_scalar(v)}")
    lines.append("h:" + "".join(f" {i + 1}" for i in s.h_idx))
    lines.append("m:" + "".join(f" {i + 1}" for i in s.m_idx))
    lines.append("metric:")
    for i in range(s.n):
        lines.append(" ".join(render_scalar(s.metric[i, j]) for j in range(i + 1)))
    return "\n".join(lines) + "\n"


@dataclass
class SpaceDefinition:
    """Parsed but not yet validated file contents."""

    name: str
    d: int
    dim: int
    labels: list[str] | None
    constants: list[tuple[int, int, int, Scalar]]
    h: list[int]
    m: list[int]
    metric: list[list[Scalar]]

    def algebra(self, check: bool = True) -> LieAlgebraData:
        return LieAlgebraData(self.dim, self.constants, self.labels, d=self.d, check=check)

    def space(self, check: bool = True) -> ReductiveSpace:
        n = len(self.m)
        full = [[None] * n for _ in range(n)]
        for i, row in enumerate(self.metric):
            for j, v in enumerate(row):
                full[i][j] = full[j][i] = v
        metric = QArray.from_scalars(full, self.d)
        return ReductiveSpace(self.algebra(check), self.h, self.m, metric, name=self.name, check=check)


def _logical_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_space_text(text: str, source: str = "<text>") -> SpaceDefinition:
    """Parse the definition format; errors carry the line number and field."""
    lines = list(_logical_lines(text))
    pos = 0
    values: dict[str, object] = {}

    def err(line, field, msg):
        return SpaceParseError(source, line, field, msg)

    def header(expect: str):
        nonlocal pos
        if pos >= len(lines):
            raise err(lines[-1][0] if lines else 0, expect, "unexpected end of file")
        no, line = lines[pos]
        key, sep, rest = line.partition(":")
        if not sep or key.strip() != expect:
            raise err(no, expect, f"expected '{expect}:' but found {line!r}")
        pos += 1
        return no, rest.strip()

    def scalar(tok, no, field):
        try:
            return parse_scalar(tok)
        except ValueError as e:
            raise err(no, field, str(e)) from None

    def ints(rest, no, field):
        try:
            return [int(t) for t in rest.split()]
        except ValueError:
            raise err(no, field, f"expected integers, got {rest!r}") from None

    for field in FIELDS:
        if field in _OPTIONAL and (pos >= len(lines) or not lines[pos][1].startswith(field + ":")):
            values[field] = None
            continue
        no, rest = header(field)
        if field == "name":
            if not rest:
                raise err(no, field, "empty name")
            values[field] = rest
        elif field in ("field", "dim"):
            vals = ints(rest, no, field)
            if len(vals) != 1 or vals[0] < 1:
                raise err(no, field, "expected one positive integer")
            values[field] = vals[0]
        elif field == "labels":
            labels = rest.split()
            if len(labels) != values["dim"]:
                raise err(no, field, f"{len(labels)} labels for dimension {values['dim']}")
            values[field] = labels
        elif field == "constants":
            if rest:
                raise err(no, field, "entries go on the following lines")
            consts = []
            while pos < len(lines) and ":" not in lines[pos][1]:
                cno, line = lines[pos]
                toks = line.split()
                if len(toks) != 4:
                    raise err(cno, field, "expected 'i j k value'")
                i, j, k = ints(" ".join(toks[:3]), cno, field)
                consts.append((i - 1, j - 1, k - 1, scalar(toks[3], cno, field)))
                pos += 1
            values[field] = consts
        elif field in ("h", "m"):
            values[field] = [i - 1 for i in ints(rest, no, field)]
        elif field == "metric":
            if rest:
                raise err(no, field, "rows go on the following lines")
            n = len(values["m"])
            rows = []
            for i in range(n):
                if pos >= len(lines):
                    raise err(no, field, f"expected {n} rows, found {i}")
                rno, line = lines[pos]
                toks = line.split()
                if len(toks) != i + 1:
                    raise err(rno, field, f"row {i + 1} must have {i + 1} entries")
                rows.append([scalar(t, rno, field) for t in toks])
                pos += 1
            values[field] = rows
    if pos < len(lines):
        raise err(lines[pos][0], "end", f"trailing content {lines[pos][1]!r}")
    d = values["field"]
    for *_, v in values["constants"]:
        if v.d not in (1, d):
            raise err(0, "field", f"scalar uses sqrt({v.d}) but the file declares field {d}")
    return SpaceDefinition(
        values["name"], d, values["dim"], values["labels"], values["constants"],
        values["h"], values["m"], values["metric"],
    )


def load_space(path: str | Path, check: bool = True) -> ReductiveSpace:
    p = Path(path)
    return parse_space_text(p.read_text(encoding="utf-8"), str(p)).space(check)


def resolve(ref: str, metric_scale: Fraction | None = None) -> ReductiveSpace:
    """A catalog identifier or a path to a definition file."""
    if Path(ref).is_file():
        s = load_space(ref)
    else:
        try:
            s = build(ref)
        except KeyError as e:
            raise SpaceParseError(ref, 0, "space", str(e.args[0])) from None
        except ValueError as e:
            raise SpaceParseError(ref, 0, "space", str(e)) from None
    if metric_scale is not None:
        s = s.rescaled(metric_scale, name=s.name)
    return s


def checksum(s: ReductiveSpace) -> str:
    return hashlib.sha256(dump_space(s).encode("utf-8")).hexdigest()[:16]


# -- reports -----------------------------------------------------------------------------


def _matrix_rows(m: QArray) -> list[list[str]]:
    return [[render_scalar(v) for v in row] for row in m.to_scalars()]


def space_section(s: ReductiveSpace) -> dict:
    return {
        "name": s.name,
        "dim_g": s.alg.dim,
        "dim_h": len(s.h_idx),
        "dim_m": s.n,
        "field": s.d,
        "checksum": checksum(s),
    }


def curvature_section(s: ReductiveSpace) -> dict:
    _, verdict = ricci(s)
    return {
        "einstein": verdict.einstein,
        "einstein_constant": render_scalar(verdict.constant) if verdict.einstein else None,
    }


def singer_section(s: ReductiveSpace, max_order: int | None = None) -> dict:
    k, chain = singer_invariant(s, max_order)
    return {
        "singer": k,
        "dims": chain.dims,
        "chain": [
            {"order": e.order, "dim": e.dim, "basis": [_matrix_rows(b.matrix) for b in e.basis]}
            for e in chain.entries
        ],
    }


SCALE_NOTE = "under g -> lambda g the coefficient of g^p R^(j) scales by lambda^-p"


def _relation_dict(s: ReductiveSpace, rel, probe_samples: int) -> dict:
    out = {
        "order": rel.order,
        "coefficients": {str(j): render_scalar(as_scalar(c)) for j, c in sorted(rel.coefficients.items())},
        "equation": rel.as_equation(),
        "minimal": rel.minimal,
    }
    try:
        probe = osculating_probe(s, rel.order, samples=probe_samples)
        out["osculating_witness"] = probe.independent
    except NoRelationError:
        out["osculating_witness"] = False
    if rel.order == 4:
        try:
            out["root_ratio"] = render_scalar(scale_invariant_signature(rel))
        except UnsupportedSignature as e:
            out["root_ratio"] = f"unsupported ({e})"
    if rel.coefficients:
        out["scale_note"] = SCALE_NOTE
    return out


def jacobi_section(s: ReductiveSpace, order: int | None = None, scan: int | None = None,
                   probe_samples: int = 8) -> dict:
    if order is not None:
        rel = find_relation(s, order)
        return {"mode": "order", "requested": order,
                "relation": None if rel is None else _relation_dict(s, rel, probe_samples)}
    for k in range(scan + 1):
        rel = find_relation(s, k)
        if rel is not None:
            return {"mode": "scan", "requested": scan, "minimal_order": k,
                    "relation": _relation_dict(s, rel, probe_samples)}
    return {"mode": "scan", "requested": scan, "minimal_order": None, "relation": None}


def validation_section(s_def: SpaceDefinition | None, s: ReductiveSpace | None, max_order: int) -> dict:
    """Run the invariant battery; later checks are skipped once the structure is broken."""
    checks: dict[str, str] = {}
    if s_def is not None:
        try:
            alg = s_def.algebra(check=False)
        except LieAlgebraError as e:
            return {"checks": {"lie-algebra": f"fail: {e}"}, "ok": False}
        v = validate_lie(alg)
        checks["lie-algebra"] = "pass" if v is None else f"fail: {v}"
        if v is not None:
            return {"checks": checks, "ok": False}
        try:
            s = s_def.space(check=False)
        except ReductiveSpaceError as e:
            checks[e.check] = f"fail: {e}"
            return {"checks": checks, "ok": False}
    structural = s.checks()
    for name, ok in structural.items():
        checks[name] = "pass" if ok else "fail"
    if not all(structural.values()):
        return {"checks": checks, "ok": False}
    ok = all(e.is_skew_adjoint(s.metric) for e in
             (_safe_alpha(s, i) for i in range(s.n)) if e is not None)
    checks["connection-skew"] = "pass" if ok else "fail"
    r = raw_curvature(s)
    failed = curvature_identity_failures(r)
    for name in ("antisymmetry-xy", "antisymmetry-zw", "pair-symmetry", "bianchi-1"):
        checks[name] = "fail" if name in failed else "pass"
    if failed:
        return {"checks": checks, "ok": False}
    checks["bianchi-2"] = "pass" if second_bianchi_holds(s.jet_tensor(1)) else "fail"
    for k in range(max_order + 1):
        checks[f"jet-invariance-{k}"] = "pass" if jet_invariance_holds(s, s.jet_tensor(k)) else "fail"
    return {"checks": checks, "ok": all(v == "pass" for v in checks.values())}


def _safe_alpha(s: ReductiveSpace, i: int):
    e = [0] * s.n
    e[i] = 1
    try:
        return connection_operator(s, QArray.from_ints(e, d=s.d))
    except InvariantViolation:
        return None


def render(report: dict, fmt: str) -> str:
    if fmt == "machine":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    out: list[str] = []
    _text(report, [], out)
    return "\n".join(out) + "\n"


def _text(node, path, out):
    if isinstance(node, dict):
        for key, val in node.items():
            _text(val, path + [str(key)], out)
    elif isinstance(node, list) and node and all(isinstance(x, (dict, list)) for x in node):
        for i, val in enumerate(node):
            _text(val, path + [str(i)], out)
    else:
        if isinstance(node, list):
            val = json.dumps(node, separators=(",", ":"))
        elif node is None:
            val = "none"
        elif isinstance(node, bool):
            val = "yes" if node else "no"
        else:
            val = str(node)
        out.append(f"{'.'.join(path)}: {val}")


# -- commands -------------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("metric scale must be positive")
    return q


def cmd_catalog(args) -> dict:
    records = []
    for ident, recipe in RECIPES.items():
        s = recipe.builder(**recipe.params)
        records.append({
            "id": ident,
            "dim_g": s.alg.dim,
            "dim_h": len(s.h_idx),
            "dim_m": s.n,
            "field": s.d,
            "params": {k: str(v) for k, v in recipe.params.items()},
            "description": recipe.description,
        })
    return {"catalog": records}


def cmd_singer(args) -> dict:
    s = resolve(args.space, args.metric_scale)
    return {"space": space_section(s), "stabilizer": singer_section(s, args.max_order)}


def cmd_jacobi(args) -> dict:
    s = resolve(args.space, args.metric_scale)
    return {"space": space_section(s),
            "jacobi": jacobi_section(s, args.order, args.scan, args.probe_samples)}


def cmd_report(args) -> dict:
    s = resolve(args.space, args.metric_scale)
    return {
        "space": space_section(s),
        "curvature": curvature_section(s),
        "stabilizer": singer_section(s, args.max_order),
        "jacobi": jacobi_section(s, None, args.scan, args.probe_samples),
    }


def cmd_validate(args) -> dict:
    if Path(args.space).is_file():
        p = Path(args.space)
        s_def = parse_space_text(p.read_text(encoding="utf-8"), str(p))
        return {"space": {"name": s_def.name}, "validation": validation_section(s_def, None, args.max_order)}
    s = resolve(args.space)
    return {"space": {"name": s.name}, "validation": validation_section(None, s, args.max_order)}


def cmd_export(args) -> dict | None:
    s = resolve(args.space)
    text = dump_space(s)
    if args.path == "-":
        sys.stdout.write(text)
        return None
    Path(args.path).write_text(text, encoding="utf-8")
    return {"exported": {"space": s.name, "path": args.path, "checksum": checksum(s)}}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacobijets", description=__doc__.split("\n")[0])
    p.add_argument("--format", choices=["text", "machine"], default="text")
    p.add_argument("--timing", action="store_true", help="append wall-clock seconds (breaks byte-identity)")
    sub = p.add_subparsers(dest="command", required=True)

    def space_cmd(name, help_, scale=True):
        c = sub.add_parser(name, help=help_)
        c.add_argument("space", help="catalog identifier or path to a definition file")
        if scale:
            c.add_argument("--metric-scale", type=_rational, default=None, metavar="Q",
                           help="multiply the metric by Q > 0 before computing")
        c.add_argument("--format", choices=["text", "machine"], default=argparse.SUPPRESS)
        c.add_argument("--timing", action="store_true", default=argparse.SUPPRESS)
        return c

    c = sub.add_parser("catalog", help="list built-in spaces")
    c.add_argument("--format", choices=["text", "machine"], default=argparse.SUPPRESS)
    c.set_defaults(func=cmd_catalog)

    c = space_cmd("singer", "stabilizer chain and Singer invariant")
    c.add_argument("--max-order", type=int, default=None)
    c.set_defaults(func=cmd_singer)

    c = space_cmd("jacobi", "linear Jacobi relation of a given order, or the minimal one")
    grp = c.add_mutually_exclusive_group(required=True)
    grp.add_argument("--order", type=int)
    grp.add_argument("--scan", type=int, metavar="K_MAX")
    c.add_argument("--probe-samples", type=int, default=8)
    c.set_defaults(func=cmd_jacobi)

    c = space_cmd("report", "curvature, stabilizer chain and minimal relation together")
    c.add_argument("--max-order", type=int, default=None)
    c.add_argument("--scan", type=int, default=5, metavar="K_MAX")
    c.add_argument("--probe-samples", type=int, default=8)
    c.set_defaults(func=cmd_report)

    c = space_cmd("validate", "run the invariant battery", scale=False)
    c.add_argument("--max-order", type=int, default=2, help="highest jet order checked for invariance")
    c.set_defaults(func=cmd_validate)

    c = sub.add_parser("export", help="write a catalog space as a definition file ('-' for stdout)")
    c.add_argument("space")
    c.add_argument("path")
    c.add_argument("--format", choices=["text", "machine"], default=argparse.SUPPRESS)
    c.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    if getattr(args, "order", None) is not None and args.order < 0 or \
            getattr(args, "scan", None) is not None and args.scan < 0:
        print("error: orders must be non-negative", file=sys.stderr)
        return EXIT_PARSE
    start = time.perf_counter()
    try:
        report = args.func(args)
    except SpaceParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (LieAlgebraError, ReductiveSpaceError, ValueError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except InvariantViolation as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if report is None:
        return EXIT_OK
    if getattr(args, "timing", False):
        report["timing_seconds"] = f"{time.perf_counter() - start:.3f}"
    sys.stdout.write(render(report, args.format))
    if "validation" in report and not report["validation"]["ok"]:
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
