"""dwcalc command line: run, validate and list-builtins."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

import numpy as np

from . import tqft
from .cocycles import BudgetExceeded, random_normalized_cochain
from .action import coboundary_shift
from .fields import Presentation
from .manifest import (
    SCHEMA_VERSION, ManifestError, Resolver, UnresolvedReference, inputs_digest,
    schema_errors,
)
from .reproduction import format_table, table7
from .scalars import CyclotomicScalar
from .topology.builtins import BUILTINS, builtin_complex
from .topology.models import AlgebraicModel

EXIT_OK = 0
EXIT_FAILED = 1  # a job errored or a reproduction row failed
EXIT_SCHEMA = 3
EXIT_REFERENCE = 4
EXIT_BUDGET = 5


def _scalar_fields(x: CyclotomicScalar) -> dict:
    return {"value": x.to_json(), "decimal": x.decimal()}


def _run_closed(r: Resolver, job: dict) -> dict:
    T = r.theory(job["theory"])
    X = r.manifold(job["manifold"])
    kw = {"budget": job["budget"]} if "budget" in job else {}
    return _scalar_fields(tqft.partition_closed(tqft.ClosedManifoldJob(T, X, job.get("route", "auto"), **kw)))


def _boundary(r: Resolver, ref: str) -> Presentation:
    Y = r.manifold(ref)
    if isinstance(Y, AlgebraicModel):
        if Y.presentation is None:
            raise ManifestError(f"manifold {ref!r} has no presentation")
        return Y.presentation
    if not isinstance(Y, Presentation):
        raise ManifestError(f"manifold {ref!r} must be a presentation for this job")
    return Y


def _run_state_space(r: Resolver, job: dict) -> dict:
    S = tqft.state_space(r.theory(job["theory"]), _boundary(r, job["manifold"]))
    out = _scalar_fields(CyclotomicScalar.rational(S.dimension))
    out["basis"] = [list(o.representative.values) for o in S.basis]
    out["stabilizers"] = list(S.stabilizers)
    out["admissible"] = list(S.admissible)
    return out


def _run_dim_via_torus(r: Resolver, job: dict) -> dict:
    return _scalar_fields(tqft.dim_via_torus(r.theory(job["theory"]), _boundary(r, job["manifold"])))


def _run_product_formula(r: Resolver, job: dict) -> dict:
    X = r.manifold(job["manifold"])
    try:
        return _scalar_fields(tqft.partition_product_formula(X, job.get("power", X.dimension)))
    except tqft.ProductFormulaRefused as e:
        return {"status": "refused", "message": str(e)}


def _run_bordism(r: Resolver, job: dict) -> dict:
    M = tqft.bordism_matrix(r.theory(job["theory"]), r.bordism(job["bordism"]))
    return {"matrix": M.to_json(), "shape": list(M.shape)}


def _run_table7(r: Resolver, job: dict) -> dict:
    rows = table7()
    return {"rows": [row.to_json() for row in rows],
            "status": "PASS" if all(row.passed for row in rows) else "FAIL"}


def _run_coboundary_invariance(r: Resolver, job: dict, seed: int) -> dict:
    T = r.theory(job["theory"])
    X = r.manifold(job["manifold"])
    base = tqft.partition_closed(tqft.ClosedManifoldJob(T, X))
    rng = np.random.default_rng([seed, job.get("trials", 100)])
    w = T.cocycle
    ok = True
    for _ in range(job.get("trials", 100)):
        eta = random_normalized_cochain(T.group, w.degree - 1, w.modulus, rng)
        shifted = coboundary_shift(T, eta)
        ok &= tqft.partition_closed(tqft.ClosedManifoldJob(shifted, X)) == base
    out = _scalar_fields(base)
    out["status"] = "PASS" if ok else "FAIL"
    return out


RUNNERS = {
    "closed": _run_closed,
    "state_space": _run_state_space,
    "dim_via_torus": _run_dim_via_torus,
    "product_formula": _run_product_formula,
    "bordism": _run_bordism,
    "table7": _run_table7,
}


def run_job(data: dict, index: int, seed: int, timing: bool) -> dict:
    """Run one job; errors become part of the record rather than exceptions."""
    r = Resolver(data)
    job = data["jobs"][index]
    record: dict[str, Any] = {"id": job["id"], "type": job["type"], "inputs_digest": inputs_digest(r, job)}
    start = time.perf_counter()
    try:
        if job["type"] == "coboundary_invariance":
            record.update(_run_coboundary_invariance(r, job, seed))
        else:
            record.update(RUNNERS[job["type"]](r, job))
        record.setdefault("status", "ok")
    except BudgetExceeded as e:
        record.update(status="budget_exceeded", message=str(e))
    except UnresolvedReference as e:
        record.update(status="unresolved_reference", message=str(e))
    except (ValueError, ArithmeticError) as e:
        record.update(status="error", message=f"{type(e).__name__}: {e}")
    if timing:
        record["timing_seconds"] = round(time.perf_counter() - start, 6)
    return record


def _exit_code(records: Sequence[dict]) -> int:
    statuses = {r["status"] for r in records}
    if "unresolved_reference" in statuses:
        return EXIT_REFERENCE
    if "budget_exceeded" in statuses:
        return EXIT_BUDGET
    if statuses & {"error", "FAIL"}:
        return EXIT_FAILED
    return EXIT_OK


def run_manifest(data: dict, jobs: int = 1, seed: int = 0, timing: bool = False) -> list[dict]:
    n = len(data["jobs"])
    args = [(data, i, seed, timing) for i in range(n)]
    if jobs <= 1 or n <= 1:
        return [run_job(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_job, *zip(*args)))


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"schema_version": SCHEMA_VERSION, "results": records},
                          sort_keys=True, indent=2, ensure_ascii=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "type", "status", "inputs_digest", "level", "numerators", "denominators", "decimal"])
        for rec in records:
            v = rec.get("value") or {}
            w.writerow([rec["id"], rec["type"], rec["status"], rec["inputs_digest"], v.get("level", ""),
                        " ".join(map(str, v.get("numerators", []))),
                        " ".join(map(str, v.get("denominators", []))), rec.get("decimal", "")])
        return buf.getvalue()
    lines = []
    for rec in records:
        if "value" in rec:
            shown = str(CyclotomicScalar.from_json(rec["value"]))
            shown += f"  (~{rec['decimal']}, display only)"
        elif "matrix" in rec:
            shown = "matrix " + "; ".join(" ".join(row) for row in rec["matrix"]["entries"])
        else:
            shown = rec.get("message", "")
        lines.append(f"{rec['id']:<24} {rec['type']:<22} {rec['status']:<10} {shown}")
        if rec["type"] == "table7":
            for row in rec["rows"]:
                val = CyclotomicScalar.from_json(row["value"])
                lines.append(f"    {row['label']:<24} {row['route']:<16} expected {row['expected']:>5}  "
                             f"got {str(val):>5}  {row['status']}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_manifest(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _check(data: Any) -> tuple[int, list[str]]:
    errs = schema_errors(data)
    if errs:
        return EXIT_SCHEMA, errs
    missing = Resolver(data).check_references()
    if missing:
        return EXIT_REFERENCE, missing
    return EXIT_OK, []


def cmd_run(args) -> int:
    try:
        data = load_manifest(args.manifest)
    except json.JSONDecodeError as e:
        print(f"manifest is not valid JSON: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    code, errs = _check(data)
    if code:
        print("\n".join(errs), file=sys.stderr)
        return code
    records = run_manifest(data, args.jobs, args.seed, args.timing)
    out = render(records, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return _exit_code(records)


def cmd_validate(args) -> int:
    try:
        data = load_manifest(args.manifest)
    except json.JSONDecodeError as e:
        print(f"manifest is not valid JSON: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    code, errs = _check(data)
    if code:
        print("\n".join(errs), file=sys.stderr)
    else:
        print(f"ok: {len(data['jobs'])} jobs")
    return code


def cmd_list_builtins(args) -> int:
    print("complexes:")
    for name in BUILTINS:
        K = builtin_complex(name)
        counts = ",".join(str(K.count(k)) for k in range(K.dimension + 1))
        print(f"  {name:<12} dim {K.dimension}  simplices ({counts})  "
              f"{'orientable' if K.is_orientable else 'non-orientable'}")
    print("  sigma(g)     orientable surface of genus g <= 3")
    print("models: rp(n), dold(m, l), surface(g), klein, product of models")
    print("groups: Zn, Sk (k <= 4), products such as Z2xZ2, explicit tables")
    print("bordisms: " + ", ".join(tqft.STANDARD_BORDISMS))
    print("table7: reference values for the Z/2 theory with action w1^n")
    return EXIT_OK


def cmd_table7(args) -> int:
    rows = table7()
    print(format_table(rows))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dwcalc", description="Exact finite gauge theory calculator.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run every job in a manifest")
    run.add_argument("--manifest", "-m", required=True)
    run.add_argument("--jobs", "-j", type=int, default=1, help="worker processes (output order is fixed)")
    run.add_argument("--format", choices=("json", "csv", "table"), default="json")
    run.add_argument("--seed", type=int, default=0, help="seed for randomized invariance jobs")
    run.add_argument("--timing", action="store_true", help="add wall-clock seconds to each record")
    run.add_argument("--output", "-o", help="write the report here instead of stdout")
    run.set_defaults(func=cmd_run)
    val = sub.add_parser("validate", help="check a manifest without running it")
    val.add_argument("--manifest", "-m", required=True)
    val.set_defaults(func=cmd_validate)
    lst = sub.add_parser("list-builtins", help="list library complexes, models and bordisms")
    lst.set_defaults(func=cmd_list_builtins)
    tab = sub.add_parser("table7", help="print the w1^n reference table")
    tab.set_defaults(func=cmd_table7)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
