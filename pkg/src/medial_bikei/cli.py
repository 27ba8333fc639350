"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 size bound exceeded, 3 negative
result (not isomorphic, axioms violated).
"""
from __future__ import annotations

import argparse
import hashlib
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import (
    BikeiTable,
    MalformedTableError,
    check_bikei_axioms,
    check_medial,
    format_table,
    invariant_profile,
    is_isomorphic,
    parse_table,
)
from .diagram import GaussCodeError, diagram_to_presentation, parse_gauss_code
from .engine import DEFAULT_MAX_SIZE, EngineConfig, Status, ZeroStrategy, complete, format_trace
from .presentation import (
    PresentationMatrix,
    PresentationSyntaxError,
    parse_presentation,
    read_matrix,
    to_short_form,
)

log = logging.getLogger("medial_bikei")

EXIT_OK, EXIT_INPUT, EXIT_BOUND, EXIT_NEGATIVE = 0, 1, 2, 3

INPUT_ERRORS = (OSError, ValueError, MalformedTableError, GaussCodeError, PresentationSyntaxError)


class InputError(Exception):
    pass


# --- loading ----------------------------------------------------------------

def load_presentation(text: str) -> PresentationMatrix:
    """A presentation-matrix file, or a presentation (``gens n; ...``)."""
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gens"):
            return to_short_form(parse_presentation(text))
        break
    return read_matrix(text)


def load_complete_table(path: str) -> BikeiTable:
    text = _read(path)
    _, under, over = parse_table(text, allow_zero=True)
    if (under == 0).any() or (over == 0).any():
        raise InputError(f"{path}: table has unknown (0) entries")
    return BikeiTable(under, over)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _code_argument(arg: str) -> str:
    """A Gauss code given inline, or the first code line of a file."""
    p = Path(arg)
    if p.is_file():
        for line in p.read_text().splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                return line
        return ""
    return arg


# --- results cache ---------------------------------------------------------------

def cache_key(m: PresentationMatrix, config: EngineConfig) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(m.matrix(), dtype="<i8").tobytes())
    h.update(repr((m.n, m.seeds, config.max_size, config.zero_strategy.value, config.medial)).encode())
    return h.hexdigest()


@dataclass
class Result:
    status: Status
    table: BikeiTable | None
    final_size: int
    trace: list | None = None


def _cache_load(path: Path) -> Result | None:
    try:
        head, _, body = path.read_text().partition("\n")
    except OSError:
        return None
    status, _, size = head.partition(" ")
    if status == Status.FINITE.value:
        _, under, over = parse_table(body)
        return Result(Status.FINITE, BikeiTable(under, over), under.shape[0])
    if status == Status.BOUND_EXCEEDED.value:
        return Result(Status.BOUND_EXCEEDED, None, int(size))
    return None


def _cache_store(path: Path, r: Result) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if r.status is Status.FINITE:
        text = f"{r.status.value} {r.final_size}\n" + format_table(r.table.under, r.table.over)
    else:
        text = f"{r.status.value} {r.final_size}\n"
    tmp = path.with_suffix(".tmp")
    tmp.write_text(text)
    tmp.replace(path)


def run_engine(m: PresentationMatrix, config: EngineConfig, cache_dir: str | None = None) -> Result:
    entry = None
    if cache_dir and not config.trace:
        entry = Path(cache_dir) / f"{cache_key(m, config)}.txt"
        hit = _cache_load(entry)
        if hit is not None:
            log.info("cache hit %s", entry.name)
            return hit
    out = complete(m, config=config)
    r = Result(out.status, out.table, out.final_size, out.trace)
    if entry is not None:
        _cache_store(entry, r)
    return r


# --- commands -----------------------------------------------------------------

def _config(args) -> EngineConfig:
    return EngineConfig(
        max_size=args.max_size,
        zero_strategy=ZeroStrategy(args.zero_strategy),
        trace=bool(getattr(args, "trace", None)),
        medial=not args.plain_bikei,
    )


def _report_outcome(r: Result, args) -> int:
    if getattr(args, "trace", None) and r.trace is not None:
        Path(args.trace).write_text(format_trace(r.trace))
    if r.status is Status.BOUND_EXCEEDED:
        print(f"exceeded bound {args.max_size}")
        return EXIT_BOUND
    print(f"n={r.table.n}")
    sys.stdout.write(format_table(r.table.under, r.table.over))
    if getattr(args, "figure", None):
        from .plotting import plot_table
        plot_table(r.table, args.figure)
    return EXIT_OK


def cmd_complete(args) -> int:
    m = load_presentation(_read(args.matrix))
    return _report_outcome(run_engine(m, _config(args), args.cache), args)


def cmd_knot(args) -> int:
    d = parse_gauss_code(_code_argument(args.code))
    m = diagram_to_presentation(d)
    return _report_outcome(run_engine(m, _config(args), args.cache), args)


def cmd_iso(args) -> int:
    a = load_complete_table(args.table_a)
    b = load_complete_table(args.table_b)
    iso = is_isomorphic(a, b)
    if iso is None:
        print("not isomorphic")
        return EXIT_NEGATIVE
    print(" ".join(map(str, iso.map)))
    return EXIT_OK


def cmd_verify(args) -> int:
    t = load_complete_table(args.table)
    violations = check_bikei_axioms(t)
    if args.medial:
        violations += check_medial(t)
    for v in violations:
        names = "xyzw"
        witness = " ".join(f"{names[k]}={e}" for k, e in enumerate(v.witness))
        print(f"{v.axiom}\t{witness}\t{v.lhs} != {v.rhs}")
    if violations:
        return EXIT_NEGATIVE
    kind = "medial bikei" if args.medial else "bikei"
    print(f"ok: {kind} of order {t.n}")
    return EXIT_OK


# --- classification --------------------------------------------------------------

@dataclass
class Entry:
    name: str
    status: str  # FINITE, BOUND_EXCEEDED or ERROR
    table: BikeiTable | None = None
    error: str = ""
    class_id: int | None = None

    @property
    def cardinality(self) -> int | None:
        return self.table.n if self.table is not None else None


def read_classify_corpus(path: Path) -> list[tuple[str, str]]:
    """``name: code`` lines; a code ``@file`` names a matrix or presentation file."""
    from .diagram import read_corpus

    return read_corpus(path)


def _classify_one(name: str, code: str, base: str, config: EngineConfig, cache: str | None) -> Entry:
    try:
        if code.startswith("@"):
            m = load_presentation((Path(base) / code[1:].strip()).read_text())
        else:
            m = diagram_to_presentation(parse_gauss_code(code))
        r = run_engine(m, config, cache)
    except INPUT_ERRORS as e:
        return Entry(name, "ERROR", error=str(e))
    return Entry(name, r.status.value, r.table)


def classify_entries(entries: list[Entry]) -> list[list[int]]:
    """Assign class ids in input order; returns member indices per class."""
    classes: list[list[int]] = []
    buckets: dict[tuple, list[int]] = {}
    for k, e in enumerate(entries):
        if e.table is None:
            continue
        bucket = buckets.setdefault(invariant_profile(e.table), [])
        for c in bucket:
            if is_isomorphic(entries[classes[c][0]].table, e.table) is not None:
                classes[c].append(k)
                e.class_id = c + 1
                break
        else:
            classes.append([k])
            bucket.append(len(classes) - 1)
            e.class_id = len(classes)
    return classes


def format_report(entries: list[Entry], classes: list[list[int]]) -> str:
    def cell(v):
        return "-" if v is None else str(v)

    lines = ["name\tstatus\tcardinality\tclassId"]
    for e in entries:
        lines.append(f"{e.name}\t{e.status}\t{cell(e.cardinality)}\t{cell(e.class_id)}")
    lines.append("# classes")
    lines.append("# classId\tcardinality\trepresentative\tmembers")
    for c, members in enumerate(classes, 1):
        rep = entries[members[0]]
        names = ",".join(entries[k].name for k in members)
        lines.append(f"{c}\t{rep.cardinality}\t{rep.name}\t{names}")
    errors = [e for e in entries if e.status == "ERROR"]
    if errors:
        lines.append("# errors")
        lines += [f"# {e.name}: {e.error}" for e in errors]
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> int:
    corpus = Path(args.corpus)
    pairs = read_classify_corpus(corpus)
    config = _config(args)
    base = str(corpus.parent)
    jobs = max(1, args.jobs)
    if jobs == 1 or len(pairs) <= 1:
        entries = [_classify_one(n, c, base, config, args.cache) for n, c in pairs]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_classify_one, n, c, base, config, args.cache) for n, c in pairs]
            entries = [f.result() for f in futures]
    classes = classify_entries(entries)
    out = Path(args.output)
    out.write_text(format_report(entries, classes))
    if not args.no_figure and entries:
        from .plotting import plot_classification
        figure = Path(args.figure) if args.figure else out.with_suffix(".png")
        plot_classification(
            [e.name for e in entries], [e.cardinality for e in entries],
            [e.class_id for e in entries], figure, bound=config.max_size,
        )
    finite = sum(e.status == Status.FINITE.value for e in entries)
    bound = sum(e.status == Status.BOUND_EXCEEDED.value for e in entries)
    errors = sum(e.status == "ERROR" for e in entries)
    sizes = sorted({entries[m[0]].cardinality for m in classes})
    print(f"{len(entries)} entries: {finite} finite, {bound} bound exceeded, {errors} errors")
    print(f"{len(classes)} classes; cardinalities {' '.join(map(str, sizes)) or '-'}")
    print(f"report written to {out}")
    return EXIT_OK


# --- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE,
                        help="stop once the table has this many generators (default %(default)s)")
    common.add_argument("--zero-strategy", choices=[s.value for s in ZeroStrategy], default="score",
                        help="how to pick the unknown cell that gets a new generator")
    common.add_argument("--plain-bikei", action="store_true",
                        help="drop the medial identities (fundamental bikei instead)")
    common.add_argument("--cache", metavar="DIR", help="reuse results stored under DIR")
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(
        prog="medial-bikei",
        description="Fundamental medial bikei of virtual knots and links.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complete", parents=[common], help="complete a presentation matrix")
    p.add_argument("matrix", help="presentation-matrix or presentation file ('-' for stdin)")
    p.add_argument("--trace", metavar="FILE", help="write the completion trace to FILE")
    p.add_argument("--figure", metavar="PNG", help="also draw the table")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("knot", parents=[common], help="invariant of a signed Gauss code")
    p.add_argument("code", help="Gauss code such as 'O1+U2+O3+U1+O2+U3+', or a file holding one")
    p.add_argument("--trace", metavar="FILE", help="write the completion trace to FILE")
    p.add_argument("--figure", metavar="PNG", help="also draw the table")
    p.set_defaults(func=cmd_knot)

    p = sub.add_parser("iso", help="test two tables for isomorphism")
    p.add_argument("table_a")
    p.add_argument("table_b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("verify", help="check a table against the axioms")
    p.add_argument("table")
    p.add_argument("--medial", action="store_true", help="also check the medial identities")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", parents=[common], help="classify a corpus by isomorphism class")
    p.add_argument("corpus", help="file of 'name: code' lines")
    p.add_argument("-o", "--output", default="classification.tsv",
                   help="report path (default %(default)s)")
    p.add_argument("--figure", metavar="PNG", help="figure path (default: report path with .png)")
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="entries completed in parallel")
    p.set_defaults(func=cmd_classify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * getattr(args, "verbose", 0)
    logging.basicConfig(level=max(level, logging.DEBUG), format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "max_size", 1) < 1:
        print("error: --max-size must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
