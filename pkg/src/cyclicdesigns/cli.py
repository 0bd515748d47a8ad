"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 nonexistence or unsupported case,
3 as-printed recipe refused or failed without search, 4 threshold
verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import Optional

from . import bounds
from .config import load_config
from .constructors import AsPrintedRejected, NonexistenceError, SearchBudgetExceeded, UnsupportedCase, construct
from .core import DesignError
from .corpus import CorpusManifest, iter_corpus, load_manifest, read_design, write_design, write_manifest
from .equivalence import census
from .search import SearchBudget
from .skolem import (
    Family,
    NoSequenceError,
    ResidueError,
    SkolemKind,
    construct_sequence,
    count_sequences,
    enumerate_sequences,
    format_sequences,
    kind_for,
    read_sequences,
)
from .variants import (
    all_class_vectors,
    all_sign_vectors,
    class_variant,
    format_classes,
    format_signs,
    parse_classes,
    parse_signs,
    sign_variant,
)

EXIT_OK, EXIT_USAGE, EXIT_NONEXISTENT, EXIT_AS_PRINTED, EXIT_BOUNDS = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _budget(cfg) -> SearchBudget:
    return SearchBudget(node_limit=cfg.search_nodes, time_limit=cfg.search_seconds)


# --------------------------------------------------------------------------
# skolem
# --------------------------------------------------------------------------

def _kind(args) -> SkolemKind:
    if args.kind:
        return SkolemKind(args.kind)
    return kind_for(args.order, args.family)


def cmd_skolem(args, cfg) -> int:
    n = args.order
    if n < 1:
        raise UsageError("--order must be positive")
    if args.action == "gen":
        seq = construct_sequence(n, args.family)
        text = format_sequences([seq], n, seq.kind)
        if args.output:
            Path(args.output).write_text(text)
        _emit(args, {"n": n, "kind": seq.kind.value, "values": list(seq.values)}, text.rstrip("\n"))
        return EXIT_OK
    kind = _kind(args)
    if args.action == "count":
        count = count_sequences(n, kind, workers=cfg.workers)
        _emit(args, {"n": n, "kind": kind.value, "count": count}, str(count))
        return EXIT_NONEXISTENT if count == 0 else EXIT_OK
    seqs = []
    enumerate_sequences(n, kind, seqs.append, workers=cfg.workers)
    text = format_sequences(seqs, n, kind)
    if args.output:
        Path(args.output).write_text(text)
    if args.json:
        print(json.dumps({"n": n, "kind": kind.value, "count": len(seqs),
                          "sequences": [list(s.values) for s in seqs]}, sort_keys=True))
    elif not args.output:
        sys.stdout.write(text)
    else:
        print(f"{len(seqs)} sequences written to {args.output}")
    return EXIT_NONEXISTENT if not seqs else EXIT_OK


# --------------------------------------------------------------------------
# construct
# --------------------------------------------------------------------------

def cmd_construct(args, cfg) -> int:
    seq = None
    if args.sequence:
        seqs = read_sequences(args.sequence)
        if not seqs:
            raise UsageError(f"{args.sequence} contains no sequences")
        seq = seqs[0]
    ds = construct(args.v, args.k, seq, allow_search=args.allow_search, allow_as_printed=args.allow_as_printed,
                   budget=_budget(cfg))
    out = Path(args.output or Path(cfg.output_dir) / f"design_v{args.v}_k{args.k}.jsonl")
    digest = write_design(out, ds)
    payload = {"v": ds.v, "k": ds.k, "path": str(out), "sha256": digest, "starters": len(ds.starters),
               "recipe": ds.meta.get("recipe"), "trust": ds.meta.get("trust")}
    _emit(args, payload, f"wrote {out}: v={ds.v} k={ds.k} starters={len(ds.starters)} "
                         f"recipe={payload['recipe']} trust={payload['trust']}")
    return EXIT_OK


# --------------------------------------------------------------------------
# variants / census
# --------------------------------------------------------------------------

def cmd_variants(args, cfg) -> int:
    ds = read_design(args.input)
    if not hasattr(ds, "starters"):
        raise UsageError(f"{args.input} is not a difference-system file")
    s = len(ds.type_one())
    limit = args.limit or cfg.variant_limit
    if args.signs is not None:
        vectors = all_sign_vectors(s) if args.signs == "all" else iter([parse_signs(args.signs)])
        make, fmt = sign_variant, format_signs
    else:
        vectors = all_class_vectors(s) if args.classes == "all" else iter([parse_classes(args.classes)])
        make, fmt = class_variant, format_classes
    out = Path(args.output or Path(cfg.output_dir) / f"variants_v{ds.v}_k{ds.k}")
    out.mkdir(parents=True, exist_ok=True)
    manifest = CorpusManifest(ds.v, ds.k, str(ds.meta.get("recipe", "")), list(ds.meta.get("sequence", [])))
    for idx, vec in enumerate(vectors):
        if idx >= limit:
            break
        variant = make(ds, vec)
        name = f"variant_{idx:06d}.jsonl"
        manifest.hashes.append(write_design(out / name, variant))
        manifest.files.append(name)
        manifest.variants.append(fmt(vec))
    write_manifest(out, manifest)
    _emit(args, {"corpus": str(out), "designs": len(manifest.files), "type1_starters": s},
          f"wrote {len(manifest.files)} variants to {out}")
    return EXIT_OK


def cmd_census(args, cfg) -> int:
    result = census(iter_corpus(args.corpus))
    m = load_manifest(args.corpus)
    payload = {**result.to_dict(), "recipe": m.recipe}
    text = (f"v={result.v} k={result.k} designs={result.total} distinct={result.distinct} "
            f"multiplier_classes={result.affine_classes} phi={result.phi}\n"
            f"ceil(distinct/phi) = {result.ceiling_bound}\n"
            f"NC lower bound = {result.nc_lower_bound}")
    _emit(args, payload, text)
    return EXIT_OK


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------

def cmd_bounds(args, cfg) -> int:
    if args.action == "count":
        value = bounds.design_count_bound(args.kind, args.n, args.k)
        _emit(args, {"kind": args.kind, "n": args.n, "k": args.k, "bound": value}, str(value))
        return EXIT_OK
    if args.formula:
        chosen = [bounds.formula(f) for f in args.formula]
    elif args.all:
        chosen = list(bounds.FORMULAS.values())
    else:
        raise UsageError("bounds verify needs --all or --formula")
    window = args.window or cfg.bound_window
    rows = []
    for f in chosen:
        for claim in f.claims:
            verdict = bounds.verify_threshold(f, window, claim.base)
            try:
                crossing: Optional[int] = bounds.min_crossing(f, claim.threshold + window, claim.base)
            except bounds.CrossingNotFound:
                crossing = None
            rows.append({**asdict(verdict), "min_crossing": crossing})
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        print(f"{'formula':<10} {'base':>6} {'n0':>5} {'n*':>5} {'window':>6} {'margin@n0':>10} {'min margin':>11}  result")
        for r in rows:
            status = "ok" if r["ok"] else f"FAIL at n={r['first_failure']}"
            print(f"{r['formula']:<10} {r['base']:>6} {r['threshold']:>5} {str(r['min_crossing']):>5} "
                  f"{r['window']:>6} {r['margin_at_threshold']:>10.4f} {r['min_margin']:>11.4f}  {status}")
    return EXIT_OK if all(r["ok"] for r in rows) else EXIT_BOUNDS


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cyclicdesigns", description="Cyclic k-cycle systems from Skolem-type sequences.")
    p.add_argument("--config", help="key=value run configuration (default: $CYCLICDESIGNS_CONFIG)")
    p.add_argument("--workers", type=int, help="override the configured parallelism")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sk = sub.add_parser("skolem", help="generate, enumerate or count Skolem-type sequences")
    sk.add_argument("action", choices=["gen", "enum", "count"])
    sk.add_argument("--order", type=int, required=True)
    sk.add_argument("--family", choices=[f.value for f in Family], default=Family.SKOLEM.value)
    sk.add_argument("--kind", choices=[k.value for k in SkolemKind], help="explicit kind (enum/count)")
    sk.add_argument("--output")
    sk.add_argument("--json", action="store_true")
    sk.set_defaults(func=cmd_skolem)

    c = sub.add_parser("construct", help="build and validate a cyclic design")
    c.add_argument("--v", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--sequence", help="sequence file; the first sequence is used")
    c.add_argument("--allow-search", action="store_true")
    c.add_argument("--allow-as-printed", action="store_true")
    c.add_argument("--output")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_construct)

    va = sub.add_parser("variants", help="write sign or class variants of a difference system")
    va.add_argument("--input", required=True)
    g = va.add_mutually_exclusive_group(required=True)
    g.add_argument("--signs", help="'all' or a string such as +-+ (write --signs=-+ when it starts with '-')")
    g.add_argument("--classes", help="'all' or a string such as 1.17.24")
    va.add_argument("--limit", type=int)
    va.add_argument("--output")
    va.add_argument("--json", action="store_true")
    va.set_defaults(func=cmd_variants)

    ce = sub.add_parser("census", help="distinct designs and the isomorphism-class lower bound")
    ce.add_argument("--corpus", required=True)
    ce.add_argument("--json", action="store_true")
    ce.set_defaults(func=cmd_census)

    b = sub.add_parser("bounds", help="check growth-rate thresholds or count-based bounds")
    b.add_argument("action", choices=["verify", "count"])
    b.add_argument("--all", action="store_true")
    b.add_argument("--formula", action="append", choices=list(bounds.FORMULAS))
    b.add_argument("--window", type=int)
    b.add_argument("--kind", choices=list(bounds.DESIGN_KINDS))
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        if args.workers:
            cfg = replace(cfg, workers=args.workers)
        if args.command == "bounds" and args.action == "count" and (args.kind is None or args.n is None):
            raise UsageError("bounds count needs --kind and --n")
        return args.func(args, cfg)
    except (UsageError, ResidueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoSequenceError, NonexistenceError, UnsupportedCase, SearchBudgetExceeded) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONEXISTENT
    except AsPrintedRejected as exc:
        print(f"AsPrintedRejected: {exc}", file=sys.stderr)
        return EXIT_AS_PRINTED
    except (DesignError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
