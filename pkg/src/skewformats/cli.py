"""Command-line front end: matrix documents in, JSON reports out."""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Sequence

from .algebra import Polynomial, RationalMatrix, VariableSet
from .classify import classify_full, orbit_sample
from .formats import CATALOG, NOT_SEMISTABLE, NOT_STABLE, FormatError, generic_instance, verify_format_witness
from .groebner import EMPTY, Budget, GroebnerBudgetError, hilbert_data
from .invariants import (
    NORMAL_FORM_STABILITY,
    P4_LABELS,
    d4,
    entry_span_dim,
    normal_form,
    rank2_ideal,
    stability_screen,
    z_profile,
)
from .skew import SkewMatrix, pfaffian

EXIT_OK, EXIT_INPUT, EXIT_UNVERIFIED = 0, 1, 2

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class DocumentError(ValueError):
    """Malformed matrix document; the message says where."""


# ---------------------------------------------------------------------------
# documents


@dataclass
class MatrixDocument:
    variables: list[str]
    entries: list[dict[str, Fraction]]  # upper triangle, row by row
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def size(self) -> int:
        m = len(self.entries)
        n = int((1 + (1 + 8 * m) ** 0.5) / 2)
        if n * (n - 1) // 2 != m:
            raise DocumentError(f"{m} entries do not fill the upper triangle of a square matrix")
        return n

    def to_matrix(self) -> SkewMatrix:
        vs = VariableSet(tuple(self.variables))
        n = self.size
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        upper = {}
        for (i, j), coeffs in zip(pairs, self.entries):
            upper[(i, j)] = Polynomial.linear(vs, [coeffs.get(v, Fraction(0)) for v in self.variables])
        return SkewMatrix.from_upper(vs, n, upper)

    @classmethod
    def from_matrix(cls, M: SkewMatrix, metadata: dict | None = None) -> "MatrixDocument":
        names = list(M.vars.names)
        entries = []
        for i in range(M.n):
            for j in range(i + 1, M.n):
                coeffs = M.rows[i][j].linear_coeffs() if M.rows[i][j] else [Fraction(0)] * len(names)
                entries.append({v: c for v, c in zip(names, coeffs) if c})
        return cls(names, entries, dict(metadata or {}))

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "entries": [{v: format_rational(c) for v, c in e.items()} for e in self.entries],
            "metadata": self.metadata,
        }


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: Any, where: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise DocumentError(f"{where}: expected an exact rational string such as \"3/7\", got {json.dumps(text)}")
    return Fraction(text.strip())


def parse_document(text: str) -> MatrixDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise DocumentError("top level must be an object with 'variables' and 'entries'")
    variables = raw.get("variables")
    if not isinstance(variables, list) or not all(isinstance(v, str) and v for v in variables):
        raise DocumentError("'variables' must be a list of non-empty names")
    if len(set(variables)) != len(variables):
        raise DocumentError("'variables' contains duplicates")
    entries_raw = raw.get("entries")
    if not isinstance(entries_raw, list):
        raise DocumentError("'entries' must be a list of coefficient maps")
    entries = []
    for k, e in enumerate(entries_raw):
        if not isinstance(e, dict):
            raise DocumentError(f"entries[{k}]: expected an object mapping variables to rationals")
        coeffs = {}
        for v, c in e.items():
            if v not in variables:
                raise DocumentError(f"entries[{k}]: unknown variable {v!r}")
            q = parse_rational(c, f"entries[{k}].{v}")
            if q:
                coeffs[v] = q
        entries.append(coeffs)
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("'metadata' must be an object")
    doc = MatrixDocument(list(variables), entries, metadata)
    doc.size  # validates the triangle length
    return doc


def load_document(path: str) -> MatrixDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    try:
        return parse_document(text)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def dump_json(obj: Any, pretty: bool = True) -> str:
    return json.dumps(obj, indent=2 if pretty else None, sort_keys=False)


# ---------------------------------------------------------------------------
# budgets


def parse_budget(spec: str | None) -> Budget:
    """Environment defaults, overridden by ``key=value`` pairs such as ``max_basis=200,max_pairs=5000``."""
    budget = Budget.from_env()
    if not spec:
        return budget
    changes = {}
    for part in spec.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("max_basis", "max_degree", "max_pairs"):
            raise DocumentError(f"bad --budget item {part!r}; use max_basis=N,max_degree=N,max_pairs=N")
        try:
            changes[key] = int(value)
        except ValueError:
            raise DocumentError(f"bad --budget value {value!r}") from None
    return replace(budget, **changes)


# ---------------------------------------------------------------------------
# commands


def classify_document(doc: MatrixDocument, seed: int, budget: Budget) -> tuple[int, dict]:
    M = doc.to_matrix()
    if M.n != 6:
        raise DocumentError(f"classification needs a 6x6 matrix, got {M.n}x{M.n}")
    pf = pfaffian(M)
    if not pf.is_zero():
        raise DocumentError(f"Pfaffian does not vanish: {pf}")
    try:
        rep = classify_full(M, seed=seed, budget=budget)
    except GroebnerBudgetError as exc:
        return EXIT_UNVERIFIED, {"label": None, "verified": False, "caveats": [f"resource budget exhausted: {exc}"]}
    record = rep.as_record()
    if rep.normal_form is not None:
        record["stability"] = NORMAL_FORM_STABILITY[rep.normal_form]
    return (EXIT_OK if rep.verified and rep.label is not None else EXIT_UNVERIFIED), record


def _classify_path(args: tuple[str, int, Budget]) -> tuple[int, dict]:
    path, seed, budget = args
    try:
        code, record = classify_document(load_document(path), seed, budget)
    except DocumentError as exc:
        return EXIT_INPUT, {"input": path, "error": str(exc)}
    return code, {"input": path, **record}


def cmd_classify(paths: Sequence[str], seed: int, budget: Budget, jobs: int = 1) -> list[tuple[int, dict]]:
    work = [(p, seed, budget) for p in paths]
    if jobs > 1 and len(work) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_classify_path, work))
    return [_classify_path(w) for w in work]


def invariants_record(M: SkewMatrix, budget: Budget) -> dict:
    def locus(dim: int, deg: int | None) -> dict:
        return {"dim": dim, "degree": deg if dim != EMPTY else 0, "empty": dim == EMPTY}

    if M.n != 6:
        raise DocumentError(f"invariants need a 6x6 matrix, got {M.n}x{M.n}")
    I = rank2_ideal(M)
    if I.is_zero():
        rank2 = locus(len(M.vars) - 1, 1)
    else:
        h = hilbert_data(I, budget)
        rank2 = locus(h["dim"], h["degree"])
    return {
        "d4": d4(M),
        "entry_span": entry_span_dim(M),
        "rank2": rank2,
        "z_profile": [{"s": s, "dim": d, "empty": d == EMPTY} for s, d in z_profile(M, budget)],
    }


def cmd_invariants(path: str, budget: Budget) -> dict:
    return invariants_record(load_document(path).to_matrix(), budget)


# tables

PFAFFZERO_HEADER = ("type", "d4", "stability")
NSS_HEADER = ("format", "d4")


def table_pfaffzero() -> list[tuple]:
    rows = []
    for label in P4_LABELS:
        M = normal_form(label)
        rows.append((label, d4(M), stability_screen(M).describe()))
    return rows


def table_nss() -> list[tuple]:
    return [(name, d4(generic_instance(CATALOG[name]))) for name in NOT_STABLE + NOT_SEMISTABLE]


def render_csv(header: Sequence, rows: Sequence[Sequence]) -> str:
    """Comma-and-space separated values; fields containing commas are quoted."""
    out = io.StringIO()
    for row in [header, *rows]:
        # quote each field on its own, then join with ", "
        fields = []
        for x in row:
            b = io.StringIO()
            csv.writer(b, lineterminator="").writerow([str(x)])
            fields.append(b.getvalue())
        out.write(", ".join(fields) + "\n")
    return out.getvalue()


def parse_csv(text: str) -> list[list[str]]:
    return [row for row in csv.reader(io.StringIO(text), skipinitialspace=True) if row]


def cmd_tables(which: str = "all") -> str:
    parts = []
    if which in ("all", "pfaffzero"):
        parts.append(render_csv(PFAFFZERO_HEADER, table_pfaffzero()))
    if which in ("all", "nss"):
        parts.append(render_csv(NSS_HEADER, table_nss()))
    return "\n".join(parts)


def cmd_sample(name: str, seed: int, count: int, nvars: int | None = None, normal: bool = False) -> list[dict]:
    if normal:
        if name not in P4_LABELS:
            raise DocumentError(f"unknown normal form {name!r}; choose from {', '.join(P4_LABELS)}")
    elif name not in CATALOG or CATALOG[name].shape != (6, 6):
        six = sorted(k for k, F in CATALOG.items() if F.shape == (6, 6))
        raise DocumentError(f"unknown pattern {name!r}; choose from {', '.join(six)}")
    docs = []
    for k in range(count):
        M = orbit_sample(name, nvars, seed=seed * 10_000 + k, normal=normal)
        meta = {"pattern": name, "normal_form": normal, "seed": seed, "index": k}
        docs.append(MatrixDocument.from_matrix(M, meta).to_json())
    return docs


def cmd_verify(doc_path: str, report_path: str) -> dict:
    M = load_document(doc_path).to_matrix()
    try:
        with open(report_path, encoding="utf-8") as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"{report_path}: cannot read report ({exc})") from None
    label, rows = report.get("label"), report.get("witness")
    if label not in CATALOG:
        raise DocumentError(f"{report_path}: report has no known label")
    if not isinstance(rows, list) or len(rows) != M.n:
        raise DocumentError(f"{report_path}: report has no {M.n}x{M.n} witness")
    S = RationalMatrix([[parse_rational(x, f"witness[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])
    try:
        ok = verify_format_witness(M, S, CATALOG[label])
    except FormatError as exc:
        raise DocumentError(str(exc)) from None
    return {"label": label, "verified": bool(ok)}


# ---------------------------------------------------------------------------
# output


def human(record: dict, indent: int = 0) -> str:
    lines = []
    width = max((len(k) for k in record), default=0)
    for k, v in record.items():
        pad = " " * indent
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(human(v, indent + 2))
        elif isinstance(v, list) and v and all(isinstance(x, list) for x in v):
            lines.append(f"{pad}{k}:")
            lines.extend(f"{pad}  " + "  ".join(f"{x:>6}" for x in row) for row in v)
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines.append(f"{pad}{k.ljust(width)}  " + "; ".join(" ".join(f"{a}={b}" for a, b in x.items()) for x in v))
        elif isinstance(v, list):
            lines.append(f"{pad}{k.ljust(width)}  " + ("; ".join(map(str, v)) if v else "-"))
        else:
            lines.append(f"{pad}{k.ljust(width)}  {v}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized search (default 0)")
    common.add_argument("--budget", default=None, help="Groebner limits, e.g. max_basis=400,max_degree=12,max_pairs=200000")
    common.add_argument("--human", action="store_true", help="aligned text instead of JSON")

    p = argparse.ArgumentParser(prog="skewformats", description="Classify 6x6 skew matrices of linear forms up to congruence.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="classify matrix documents")
    c.add_argument("paths", nargs="+")
    c.add_argument("--jobs", type=int, default=1, help="parallel workers across input files")

    i = sub.add_parser("invariants", parents=[common], help="d4, entry span, rank-2 locus and Z_s profile")
    i.add_argument("path")

    t = sub.add_parser("tables", parents=[common], help="regenerate the d4 tables as CSV")
    t.add_argument("--which", choices=("all", "pfaffzero", "nss"), default="all")

    s = sub.add_parser("sample", parents=[common], help="random congruence translates as documents (JSON lines)")
    s.add_argument("pattern")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--nvars", type=int, default=None)
    s.add_argument("--normal", action="store_true", help="sample translates of a normal form a-f over P^4")

    v = sub.add_parser("verify", parents=[common], help="re-check a report's witness from scratch")
    v.add_argument("path")
    v.add_argument("report")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    try:
        budget = parse_budget(args.budget)
        if args.command == "classify":
            results = cmd_classify(args.paths, args.seed, budget, args.jobs)
            for code, record in results:
                if code == EXIT_INPUT:
                    print(f"error: {record['error']}", file=err)
                    continue
                if len(results) == 1:
                    record = {k: v for k, v in record.items() if k != "input"}
                print(human(record) if args.human else dump_json(record, pretty=len(results) == 1), file=out)
            codes = [code for code, _ in results]
            return EXIT_INPUT if EXIT_INPUT in codes else max(codes)
        if args.command == "invariants":
            try:
                record = cmd_invariants(args.path, budget)
            except GroebnerBudgetError as exc:
                print(f"error: resource budget exhausted ({budget}): {exc}", file=err)
                return EXIT_UNVERIFIED
            print(human(record) if args.human else dump_json(record), file=out)
            return EXIT_OK
        if args.command == "tables":
            out.write(cmd_tables(args.which))
            return EXIT_OK
        if args.command == "sample":
            for doc in cmd_sample(args.pattern, args.seed, args.count, args.nvars, args.normal):
                print(dump_json(doc, pretty=False), file=out)
            return EXIT_OK
        if args.command == "verify":
            record = cmd_verify(args.path, args.report)
            print(human(record) if args.human else dump_json(record), file=out)
            return EXIT_OK if record["verified"] else EXIT_UNVERIFIED
    except DocumentError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    return EXIT_INPUT  # pragma: no cover - argparse rejects unknown commands


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
