"""Batch runs of the grid transfer over generated instances, reported as CSV."""

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .conquest import transfer, transfer_side
from .contraction import DEFAULT_BUDGET, bcg, verify_contraction
from .errors import BudgetExceeded, GridContractError, InputError
from .instances import gen_instance
from .treewidth import MAX_EXACT_VERTICES, exact_treewidth

COLUMNS = ("k", "c", "inflate", "seed", "n_g", "n_h", "k_prime", "status", "verified",
           "steps", "tw_h", "bcg_h")
OVER = "over"


@dataclass(frozen=True)
class RunSpec:
    k: int
    c: int
    inflate: int
    seeds: tuple


def _parse_seeds(text, lineno):
    seeds = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise InputError(f"line {lineno}: no seeds given", "parse-error")
    return tuple(seeds)


def parse_experiment(text):
    """Lines ``run <k> <c> <inflate> <seeds>``; seeds as ``1..20`` or ``1,4,9``."""
    runs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "run" or len(parts) != 5:
            raise InputError(f"line {lineno}: expected 'run <k> <c> <inflate> <seeds>'",
                             "parse-error")
        try:
            k, c, inflate = (int(x) for x in parts[1:4])
            seeds = _parse_seeds(parts[4], lineno)
        except ValueError:
            raise InputError(f"line {lineno}: malformed numbers", "parse-error") from None
        runs.append(RunSpec(k, c, inflate, seeds))
    return runs


def _bounded(fn, g, limit):
    if len(g) > limit:
        return OVER
    try:
        return fn(g)
    except BudgetExceeded:
        return OVER


def run_instance(k, c, inflate, seed, timing=False, budget=DEFAULT_BUDGET):
    """One CSV row (as a dict) for the generated instance."""
    start = time.perf_counter()
    inst = gen_instance(k, c, inflate, seed)
    row = {"k": k, "c": c, "inflate": inflate, "seed": seed, "n_g": len(inst.g),
           "n_h": len(inst.h), "k_prime": transfer_side(k, c)}
    try:
        res = transfer(inst.g, inst.sigma, inst.phi)
    except GridContractError:
        row.update(status="failure", verified="no", steps=0)
    else:
        if res.degenerate:
            row.update(status="degenerate", verified="na", steps=0)
        else:
            ok = bool(verify_contraction(res.witness)) and res.k_prime == row["k_prime"]
            row.update(status="ok", verified="yes" if ok else "no", steps=len(res.log.records))
    row["tw_h"] = _bounded(lambda g: exact_treewidth(g)[0], inst.h, MAX_EXACT_VERTICES)
    row["bcg_h"] = _bounded(lambda g: bcg(g, budget), inst.h, budget.max_vertices)
    if timing:
        row["seconds"] = f"{time.perf_counter() - start:.3f}"
    return row


def _run_packed(args):
    return run_instance(*args)


def row_failed(row):
    return row["status"] == "failure" or row["verified"] == "no"


def run_experiment(runs, jobs=1, timing=False):
    """Return ``(csv_text, all_passed)``; rows keep the input order."""
    tasks = [(r.k, r.c, r.inflate, s, timing) for r in runs for s in r.seeds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_packed, tasks))
    else:
        rows = [_run_packed(t) for t in tasks]
    columns = COLUMNS + (("seconds",) if timing else ())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue(), not any(row_failed(r) for r in rows)
