"""Command-line interface.

Subcommands: validate, check, invariant, generate, sample, export-obj.
Exit codes: 0 = pass, 1 = domain failure (invalid/inconclusive/failed
verification), 2 = input failure (missing or malformed input, bad usage).

All randomness is seed-in, bytes-out reproducible; batch commands derive
per-instance seeds from the base seed with a splitmix64 mix so results do
not depend on processing order.  The environment variable
LINFREE_RETRY_BUDGET overrides rejection-sampling budgets.

Every command ends by printing one `report {...}` JSON line carrying the
command name, input digest, verdicts, timings, seed and version.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from decimal import Decimal, localcontext

from . import __version__
from .certcheck import verify_certificate
from .constructions import (
    ConstructionError,
    Thm3Params,
    Thm4Params,
    theorem3_graph,
    theorem4_graph,
    thm3_core_ids,
    thm4_designated_cycle_ids,
)
from .freeness import FreenessCertificate, Inconclusive, PreconditionError, certify
from .knotlink import build_diagram, conway_gordon_sum, diagram_to_dict, \
    generic_direction, knot_determinant, linking_number
from .seeding import derive_seed
from .spatialgraph import (
    EmbeddingFormatError,
    LinearEmbedding,
    complete_graph,
    enumerate_graphs,
    load_embedding,
    min_valency,
    sample_embedding,
    save_embedding,
    validate_embedding,
    vertex_connectivity,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2


@dataclass
class RunReport:
    command: str
    input_digest: str | None = None
    verdicts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__

    def emit(self):
        print("report " + json.dumps(self.__dict__, sort_keys=True))


def _digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _retry_budget(default: int) -> int:
    value = os.environ.get("LINFREE_RETRY_BUDGET")
    return int(value) if value else default


def _load(path, report: RunReport) -> LinearEmbedding | None:
    try:
        report.input_digest = _digest(path)
        return load_embedding(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}")
        return None
    except EmbeddingFormatError as exc:
        print(f"error: {exc}")
        return None


def _extract_cycles(e: LinearEmbedding):
    """Split an embedding whose graph is a disjoint union of cycles into
    point cycles, deterministically oriented (start at the component's
    minimal id, step to its smaller neighbor)."""
    adj = e.graph.adjacency()
    for v, ns in adj.items():
        if len(ns) != 2:
            raise ValueError(f"vertex {v} has degree {len(ns)}, not 2")
    seen = set()
    cycles = []
    for start in e.graph.vertices:
        if start in seen:
            continue
        walk = [start]
        seen.add(start)
        current, prev = min(adj[start]), start
        while current != start:
            walk.append(current)
            seen.add(current)
            a, b = adj[current]
            current, prev = (b if a == prev else a), current
        cycles.append([e.coords[v] for v in walk])
    return cycles


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    report = RunReport("validate")
    t0 = time.perf_counter()
    e = _load(args.file, report)
    if e is None:
        return EXIT_INPUT
    result = validate_embedding(e)
    print(result)
    report.verdicts["valid"] = result.ok
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    report.emit()
    return EXIT_OK if result.ok else EXIT_DOMAIN


def cmd_check(args) -> int:
    report = RunReport("check")
    t0 = time.perf_counter()
    e = _load(args.file, report)
    if e is None:
        return EXIT_INPUT
    try:
        outcome = certify(e.graph, e)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}")
        report.verdicts["free"] = False
        report.verdicts["precondition"] = str(exc)
        report.emit()
        return EXIT_DOMAIN
    if isinstance(outcome, Inconclusive):
        print(f"inconclusive: {outcome.reason}")
        report.verdicts["free"] = False
        report.emit()
        return EXIT_DOMAIN
    cert_dict = outcome.to_dict()
    problems = verify_certificate(cert_dict, e)
    if problems:
        print("certificate failed the independent re-check:")
        for p in problems:
            print(f"  {p}")
        report.verdicts["free"] = False
        report.emit()
        return EXIT_DOMAIN
    out = args.out or (args.file + ".cert.json")
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(cert_dict, fh, indent=1)
        fh.write("\n")
    print(f"free: certificate written to {out} (re-check passed)")
    report.verdicts["free"] = True
    report.verdicts["certificate"] = out
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    report.emit()
    return EXIT_OK


def cmd_invariant(args) -> int:
    report = RunReport(f"invariant-{args.kind}")
    t0 = time.perf_counter()
    e = _load(args.file, report)
    if e is None:
        return EXIT_INPUT
    try:
        if args.kind == "cg":
            if args.dump_diagram:
                print("error: --dump-diagram applies to lk and det only")
                return EXIT_INPUT
            value = conway_gordon_sum(e)
        else:
            cycles = _extract_cycles(e)
            want = 2 if args.kind == "lk" else 1
            if len(cycles) != want:
                raise ValueError(f"{args.kind} needs exactly {want} cycle "
                                 f"component(s), found {len(cycles)}")
            if args.kind == "lk":
                value = linking_number(cycles[0], cycles[1])
            else:
                value = knot_determinant(cycles[0])
            if args.dump_diagram:
                direction = generic_direction(cycles)
                diag = build_diagram(cycles, direction)
                with open(args.dump_diagram, "w", encoding="utf-8") as fh:
                    json.dump(diagram_to_dict(diag), fh, indent=1)
                    fh.write("\n")
    except ValueError as exc:
        print(f"error: {exc}")
        report.verdicts["error"] = str(exc)
        report.emit()
        return EXIT_DOMAIN
    print(value)
    report.verdicts[args.kind] = value
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    report.emit()
    return EXIT_OK


def cmd_generate(args) -> int:
    report = RunReport(f"generate-{args.family}", seed=args.seed)
    t0 = time.perf_counter()
    budget = _retry_budget(2000)
    try:
        if args.family == "thm3":
            params = Thm3Params(n=args.n)
            g, e = theorem3_graph(params, seed=args.seed, retry_budget=budget)
            core = [e.coords[v] for v in thm3_core_ids(args.n)]
            verification = {
                "valid": True,
                "vertices": len(g.vertices),
                "min_valency": min_valency(g),
                "core_determinant": knot_determinant(core),
            }
            meta_params = {"n": args.n}
        else:
            params = Thm4Params(n=args.n)
            g, e = theorem4_graph(params, seed=args.seed)
            gon = [e.coords[v] for v in thm4_designated_cycle_ids(args.n)]
            verification = {
                "valid": True,
                "vertices": len(g.vertices),
                "vertex_connectivity": vertex_connectivity(g),
                "designated_cycle": thm4_designated_cycle_ids(args.n),
                "designated_determinant": knot_determinant(gon),
            }
            meta_params = {"n": args.n,
                           "shear": f"{params.shear.numerator}/"
                                    f"{params.shear.denominator}"}
    except (ValueError, ConstructionError) as exc:
        print(f"generation failed: {exc}")
        report.verdicts["error"] = str(exc)
        report.emit()
        return EXIT_DOMAIN
    metadata = {
        "family": args.family,
        "params": meta_params,
        "seed": args.seed,
        "version": __version__,
        "verification": verification,
    }
    save_embedding(e, args.out, metadata=metadata)
    print(f"{args.family} n={args.n}: {len(g.vertices)} vertices, "
          f"{len(g.edges)} edges -> {args.out}")
    for key, value in verification.items():
        print(f"  {key}: {value}")
    report.verdicts.update(verification)
    report.input_digest = _digest(args.out)
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    report.emit()
    return EXIT_OK


def cmd_sample(args) -> int:
    report = RunReport(f"sample-{args.graph}", seed=args.seed)
    t0 = time.perf_counter()
    budget = _retry_budget(1000)
    if args.graph == "enumerated":
        graphs = enumerate_graphs(6, 3)
    else:
        graphs = [complete_graph(int(args.graph[1]))]
    total = passed = 0
    failing = None
    for gi, g in enumerate(graphs):
        for i in range(args.count):
            seed = derive_seed(args.seed, gi, i)
            try:
                e = sample_embedding(g, args.bound, seed, retry_budget=budget)
            except Exception as exc:
                print(f"sampler failed (graph {gi}, seed {seed}): {exc}")
                report.verdicts["error"] = str(exc)
                report.emit()
                return EXIT_DOMAIN
            total += 1
            if not args.check:
                passed += 1
                continue
            ok = False
            if args.graph == "k6":
                ok = conway_gordon_sum(e) == 1
            else:
                outcome = certify(g, e)
                ok = (isinstance(outcome, FreenessCertificate)
                      and not verify_certificate(outcome.to_dict(), e))
            if ok:
                passed += 1
            elif failing is None:
                failing = (gi, seed)
    checked = "checked" if args.check else "generated"
    print(f"{passed}/{total} embeddings {checked} "
          f"({len(graphs)} graph(s) x {args.count} instance(s))")
    report.verdicts["passed"] = passed
    report.verdicts["total"] = total
    if failing is not None:
        print(f"first failure: graph index {failing[0]}, seed {failing[1]}")
        report.verdicts["first_failure_seed"] = failing[1]
        report.emit()
        return EXIT_DOMAIN
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    report.emit()
    return EXIT_OK


def _decimal12(fr) -> str:
    with localcontext() as ctx:
        ctx.prec = 12
        return str(Decimal(fr.numerator) / Decimal(fr.denominator))


def cmd_export_obj(args) -> int:
    report = RunReport("export-obj")
    t0 = time.perf_counter()
    e = _load(args.file, report)
    if e is None:
        return EXIT_INPUT
    result = validate_embedding(e)
    if not result.ok:
        print(f"error: invalid embedding: {result.violations[0]}")
        report.verdicts["valid"] = False
        report.emit()
        return EXIT_DOMAIN
    order = {v: i + 1 for i, v in enumerate(e.graph.vertices)}
    lines = []
    for v in e.graph.vertices:
        p = e.coords[v]
        lines.append(f"v {_decimal12(p.x)} {_decimal12(p.y)} {_decimal12(p.z)}")
    for a, b in sorted(e.graph.edges):
        lines.append(f"l {order[a]} {order[b]}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(e.graph.vertices)} vertices, {len(e.graph.edges)} "
          f"edges to {args.out}")
    if args.rational:
        save_embedding(e, args.out + ".json")
        print(f"lossless coordinates written to {args.out}.json")
    report.verdicts["valid"] = True
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    report.emit()
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linfree",
        description="decide and certify freeness of linear graph embeddings "
                    "in 3-space; generate knotted non-free families")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check embedding invariants")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="certify freeness of an embedding")
    p.add_argument("file")
    p.add_argument("--out", help="certificate path (default FILE.cert.json)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invariant", help="compute lk / det / cg invariants")
    p.add_argument("kind", choices=("lk", "det", "cg"))
    p.add_argument("file")
    p.add_argument("--dump-diagram", metavar="PATH",
                   help="write the crossing diagram as JSON")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("generate", help="generate a non-free family instance")
    p.add_argument("family", choices=("thm3", "thm4"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="sample seeded random embeddings")
    p.add_argument("graph", choices=("k4", "k5", "k6", "enumerated"))
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--bound", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", action="store_true",
                   help="verify each instance (cg for k6, freeness otherwise)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("export-obj", help="export an embedding as OBJ")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.add_argument("--rational", action="store_true",
                   help="also write lossless JSON next to the OBJ")
    p.set_defaults(func=cmd_export_obj)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
