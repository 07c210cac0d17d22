"""Command-line driver: generate instances, run algorithms over parameter grids,
re-verify stored records and aggregate benchmarks.

Records are JSON lines with sorted keys, so identical seeds give identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import algorithms as alg
from . import verify as vf
from .coloring import Coloring
from .hypergraph import GeneratorConfig, Hypergraph, InfeasibleConfig, InvalidInput, generate, load, save

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# which grid parameters each algorithm consumes
ALGO_PARAMS = {
    "zero-round": ("alpha", "beta"),
    "moser-tardos": ("alpha", "beta"),
    "high-rank": ("k",),
    "edge-partition": ("alpha", "beta"),
    "ruling-set": ("k",),
    "k-weak-large-k": ("k",),
    "matching": (),
}


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ------------------------------------------------------------------ cells

def _cells(args) -> list[dict]:
    """Cartesian grid over the list-valued flags; parameters the algorithm
    ignores are dropped so they do not multiply the grid."""
    used = ALGO_PARAMS[args.algo]
    axes = {"alpha": args.alpha, "beta": args.beta, "k": args.k}
    if args.input:
        graph_axes = {"input": [str(p) for p in args.input]}
    else:
        if not (args.n and args.r and args.delta_max):
            raise UsageError("give --input files or all of --n, --r, --delta-max")
        graph_axes = {"n": args.n, "r": args.r, "delta_max": args.delta_max}
        if args.lambda_:
            graph_axes["lam"] = args.lambda_
    keys = list(graph_axes) + [p for p in used]
    lists = [graph_axes[k] for k in graph_axes] + [axes[p] or [1] for p in used]
    cells = []
    for combo in itertools.product(*lists):
        cell = dict(zip(keys, combo))
        if not args.input:
            cell["uniform"] = not args.non_uniform
        cells.append(cell)
    return cells


def _instance(cell: dict, seed: int) -> Hypergraph:
    if "input" in cell:
        return load(cell["input"])
    cfg = GeneratorConfig(
        n=cell["n"], r=cell["r"], max_degree=cell["delta_max"], uniform=cell["uniform"],
        lam=cell.get("lam"), seed=seed,
    )
    return generate(cfg)


def run_one(algo: str, H: Hypergraph, params: dict, seed: int, budget=None, strict=False, trace=False):
    """Run ``algo`` once and return ``(record fields, trace text)``."""
    a, b, k = params.get("alpha"), params.get("beta"), params.get("k")
    if algo == "zero-round":
        res = alg.zero_round_is(H, a, b, seed)
    elif algo == "moser-tardos":
        res = alg.moser_tardos_is(H, a, b, seed, budget=budget, trace=trace)
    elif algo == "high-rank":
        res = alg.high_rank_remove(H, k, seed)
    elif algo == "edge-partition":
        res = alg.edge_partition_is(H, a, b, seed, trace=trace)
    elif algo == "ruling-set":
        res = alg.find_ruling_set(H, k, seed)
    elif algo == "k-weak-large-k":
        res = alg.k_weak_mis_large_k(H, k, seed)
    elif algo == "matching":
        res = alg.extract_maximal_matching(H, seed)
        out = {"valid": res.valid, "rounds": res.rounds, "messages": res.report.messages,
               "set_size": len(res.edges), "matching": res.edges}
        return out, res.report.trace_jsonl()
    else:
        raise UsageError(f"unknown algorithm {algo!r}")
    valid = res.valid
    if strict and algo in ("zero-round", "moser-tardos", "edge-partition"):
        valid = bool(vf.is_alpha_beta(H, res.vertices, a, b, strict=True))
    out = {"valid": valid, "rounds": res.rounds, "messages": res.messages,
           "set_size": len(res.vertices), "set": sorted(res.vertices.members)}
    if algo == "moser-tardos":
        out["resamples"] = res.info["resamples"]
    return out, res.report.trace_jsonl()


def _cell_job(job):
    algo, cell_ix, cell, trial, seed, budget, strict, trace = job
    base = {"algo": algo, "cell": cell, "cell_index": cell_ix, "trial": trial, "seed": seed}
    try:
        H = _instance(cell, seed)
        params = {p: cell[p] for p in ALGO_PARAMS[algo]}
        fields, tr = run_one(algo, H, params, seed, budget, strict, trace)
    except (InvalidInput, InfeasibleConfig) as exc:
        return {**base, "error": f"{type(exc).__name__}: {exc}"}, ""
    return {**base, **fields}, tr


def _jobs(args) -> list[tuple]:
    jobs = []
    for ci, cell in enumerate(_cells(args)):
        for t in range(args.trials):
            jobs.append((args.algo, ci, cell, t, args.seed + t, args.budget, args.strict_alpha_beta, bool(args.trace)))
    return jobs


def _execute(args):
    jobs = _jobs(args)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            return list(pool.map(_cell_job, jobs))
    return [_cell_job(j) for j in jobs]


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


# --------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    if not (args.n and args.r and args.delta_max):
        raise UsageError("gen needs --n, --r and --delta-max")
    cfg = GeneratorConfig(
        n=args.n[0], r=args.r[0], max_degree=args.delta_max[0], uniform=not args.non_uniform,
        lam=args.lambda_[0] if args.lambda_ else None, seed=args.seed, edges=args.edges,
    )
    H = generate(cfg)
    if args.out in (None, "-"):
        from .hypergraph import to_text
        sys.stdout.write(to_text(H))
    else:
        save(H, args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    results = _execute(args)
    fh, close = _open_out(args.out)
    try:
        for rec, _ in results:
            fh.write(_dump(rec) + "\n")
    finally:
        if close:
            fh.close()
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="\n") as tf:
            for rec, tr in results:
                for line in tr.splitlines():
                    row = json.loads(line)
                    row.update(cell_index=rec["cell_index"], trial=rec["trial"])
                    tf.write(_dump(row) + "\n")
    return EXIT_OK


PREDICATES = ("k-weak", "k-weak-mis", "alpha-beta", "ruling-set", "proper-coloring",
              "defective-coloring", "matching")


def _check(pred: str, H: Hypergraph, obj, args) -> vf.CheckReport:
    a = args.alpha[0] if args.alpha else 1
    b = args.beta[0] if args.beta else a
    k = args.k[0] if args.k else 1
    if pred == "k-weak":
        return vf.is_k_weak(H, obj, k)
    if pred == "k-weak-mis":
        return vf.is_k_weak_maximal(H, obj, k)
    if pred == "alpha-beta":
        return vf.is_alpha_beta(H, obj, a, b, strict=args.strict_alpha_beta)
    if pred == "ruling-set":
        return vf.is_ruling_set(H, obj, 2, k)
    if pred == "proper-coloring":
        return vf.is_proper_coloring(H, obj)
    if pred == "defective-coloring":
        return vf.is_defective_coloring(H, obj, args.defect if args.defect else b - a + 1)
    if pred == "matching":
        return vf.is_maximal_matching(H, obj)
    raise UsageError(f"unknown predicate {pred!r}")


RECORD_PREDICATE = {
    "zero-round": "alpha-beta",
    "moser-tardos": "alpha-beta",
    "edge-partition": "alpha-beta",
    "ruling-set": "ruling-set",
    "k-weak-large-k": "k-weak-mis",
    "matching": "matching",
}


def _verify_records(args) -> int:
    failures = 0
    checked = 0
    for line in Path(args.records).read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if "error" in rec or not rec.get("valid"):
            continue
        algo = rec["algo"]
        H = _instance(rec["cell"], rec["seed"])
        cell = rec["cell"]
        if algo == "high-rank":
            rep = vf.CheckReport.from_witnesses(
                [{"edge": eid, "predicate": "edge kept all members"}
                 for eid, e in zip(H.edge_ids, H.edges) if set(e) <= set(rec["set"])]
            )
        else:
            ns = argparse.Namespace(
                alpha=[cell.get("alpha", 1)], beta=[cell.get("beta", cell.get("alpha", 1))],
                k=[cell.get("k", 1)], strict_alpha_beta=args.strict_alpha_beta, defect=None,
            )
            obj = rec["matching"] if algo == "matching" else rec["set"]
            rep = _check(RECORD_PREDICATE[algo], H, obj, ns)
        checked += 1
        if not rep:
            failures += 1
            print(_dump({"cell_index": rec["cell_index"], "trial": rec["trial"], **json.loads(rep.to_json())}))
    print(_dump({"checked": checked, "failures": failures}))
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.records:
        return _verify_records(args)
    if not args.input or not args.set or not args.predicate:
        raise UsageError("verify needs --records, or --input, --set and --predicate")
    H = load(args.input[0])
    text = Path(args.set).read_text()
    if args.predicate in ("proper-coloring", "defective-coloring"):
        obj = Coloring.from_json(text)
    else:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("matching", data.get("set"))
        obj = data
    rep = _check(args.predicate, H, obj, args)
    print(rep.to_json())
    return EXIT_OK if rep else EXIT_FAIL


BENCH_FIELDS = ["cell_index", "cell", "trials", "errors", "success_rate",
                "mean_rounds", "min_rounds", "max_rounds", "mean_messages"]


def cmd_bench(args) -> int:
    results = _execute(args)
    rows = {}
    for rec, _ in results:
        row = rows.setdefault(rec["cell_index"], {"cell": rec["cell"], "recs": []})
        row["recs"].append(rec)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_FIELDS)
    for ci in sorted(rows):
        recs = [r for r in rows[ci]["recs"] if "error" not in r]
        errors = len(rows[ci]["recs"]) - len(recs)
        rounds = [r["rounds"] for r in recs]
        msgs = [r["messages"] for r in recs]
        ok = sum(1 for r in recs if r["valid"])
        w.writerow([
            ci, _dump(rows[ci]["cell"]), len(rows[ci]["recs"]), errors,
            f"{ok / len(recs):.6f}" if recs else "",
            f"{sum(rounds) / len(rounds):.6f}" if rounds else "",
            min(rounds, default=""), max(rounds, default=""),
            f"{sum(msgs) / len(msgs):.6f}" if msgs else "",
        ])
    fh, close = _open_out(args.out)
    try:
        fh.write(buf.getvalue())
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_plot_data(args) -> int:
    """Turn a bench CSV into a whitespace-separated data file for gnuplot."""
    if not args.csv:
        raise UsageError("plot-data needs --csv")
    with open(args.csv, newline="") as fh:
        rows = list(csv.DictReader(fh))
    lines = ["# x mean_rounds min_rounds max_rounds success_rate"]
    for row in rows:
        if not row["mean_rounds"]:
            continue
        cell = json.loads(row["cell"])
        x = eval_x(cell, args.x)
        lines.append(f"{x} {row['mean_rounds']} {row['min_rounds']} {row['max_rounds']} {row['success_rate']}")
    fh, close = _open_out(args.out)
    try:
        fh.write("\n".join(lines) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def eval_x(cell: dict, name: str):
    """x-coordinate for plots: a cell field, or ``load`` = Δ·r/δ."""
    if name == "load":
        delta = cell.get("beta", 1) - cell.get("alpha", 1) + 1
        return cell["delta_max"] * cell["r"] / delta
    return cell[name]


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypermis", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=_ints)
        sp.add_argument("--r", type=_ints)
        sp.add_argument("--delta-max", type=_ints)
        sp.add_argument("--lambda", dest="lambda_", type=_ints)
        sp.add_argument("--non-uniform", action="store_true")
        sp.add_argument("--alpha", type=_ints)
        sp.add_argument("--beta", type=_ints)
        sp.add_argument("--k", type=_ints)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--strict-alpha-beta", action="store_true")
        sp.add_argument("--out")

    g = sub.add_parser("gen", help="generate a random hypergraph")
    common(g)
    g.add_argument("--edges", type=int)

    for name, helptext in (("run", "run an algorithm over a grid"), ("bench", "aggregate rounds per grid cell")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--algo", required=True, choices=sorted(ALGO_PARAMS))
        sp.add_argument("--input", nargs="+")
        sp.add_argument("--trials", type=int, default=1)
        sp.add_argument("--budget", type=int)
        sp.add_argument("--trace")
        sp.add_argument("--jobs", type=int, default=1)

    v = sub.add_parser("verify", help="check a stored set or a file of run records")
    common(v)
    v.add_argument("--input", nargs="+")
    v.add_argument("--set")
    v.add_argument("--records")
    v.add_argument("--predicate", choices=PREDICATES)
    v.add_argument("--defect", type=int)

    pd = sub.add_parser("plot-data", help="write gnuplot data from a bench CSV")
    pd.add_argument("--csv")
    pd.add_argument("--x", default="load")
    pd.add_argument("--out")
    return p


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "verify": cmd_verify, "bench": cmd_bench, "plot-data": cmd_plot_data}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hypermis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInput, InfeasibleConfig, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"hypermis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
