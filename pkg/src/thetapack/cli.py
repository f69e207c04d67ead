"""Command-line front end: solve, oracle, gen, bench.

Exit codes: 0 success, 2 bad input, 3 the driver exhausted its structure
search at a scale where the exact fallback is off-limits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Dict, List, Optional

from . import oracle
from .approx import ApproxConfig, approximate, pack_or_cover
from .certificates import cover_to_obj, packing_to_obj
from .errors import GraphError, OracleSizeError
from .generators import FAMILIES, generate
from .hfamily import HCollection
from .multigraph import MultiGraph, format_edge_list, parse_edge_list

CSV_SCHEMA_VERSION = "1"
CSV_FIELDS = [
    "schema",
    "instance",
    "family",
    "params",
    "n",
    "m",
    "r",
    "mode",
    "status",
    "oracle_pack",
    "oracle_cover",
    "k0",
    "appx_value",
    "probes",
    "trace",
]


def _read_graph(path: str) -> MultiGraph:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return parse_edge_list(text)


def _emit(obj, out: Optional[str]) -> None:
    data = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def cmd_solve(args) -> int:
    g = _read_graph(args.input)
    config = ApproxConfig(oracle_fallback_cap=args.oracle_cap)
    t0 = time.monotonic()
    if args.k is not None:
        out = pack_or_cover(g, args.mode, args.r, args.k, config)
        result = {
            "n": g.n(),
            "m": g.m(),
            "r": args.r,
            "mode": args.mode,
            "k": args.k,
            "outcome": out.kind,
            "trace": [list(ev) for ev in out.trace],
            "seconds": round(time.monotonic() - t0, 3),
        }
        if out.packing is not None:
            result["packing"] = packing_to_obj(out.packing)
        if out.covering is not None:
            result["covering"] = cover_to_obj(out.covering)
    else:
        res = approximate(g, args.mode, args.r, config)
        result = {
            "n": g.n(),
            "m": g.m(),
            "r": args.r,
            "mode": args.mode,
            "k0": res.k0,
            "appx_value": res.value,
            "appx_constant": res.appx,
            "probes": [list(p) for p in res.probes],
            "trace": [list(ev) for ev in res.trace],
            "seconds": round(time.monotonic() - t0, 3),
        }
        if res.covering is not None:
            result["covering"] = cover_to_obj(res.covering)
    _emit(result, args.out)
    return 0


def cmd_oracle(args) -> int:
    g = _read_graph(args.input)
    if args.rr is not None:
        fam = HCollection.double_thetas(args.r, args.rr)
    else:
        fam = HCollection.thetas(args.r)
    pack, pcert = oracle.exact_pack(g, fam, args.mode, cap=args.oracle_cap)
    cover, ccert = oracle.exact_cover(g, fam, args.mode, cap=args.oracle_cap)
    _emit(
        {
            "n": g.n(),
            "m": g.m(),
            "family": fam.describe(),
            "mode": args.mode,
            "pack": pack,
            "cover": cover,
            "packing": packing_to_obj(pcert),
            "covering": cover_to_obj(ccert),
        },
        args.out,
    )
    return 0


def cmd_gen(args) -> int:
    params = {}
    for kv in args.param or []:
        key, _, value = kv.partition("=")
        params[key] = int(value)
    g = generate(args.family, **params)
    text = format_edge_list(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _bench_instance(spec: Dict, seed: int, oracle_cap: int) -> Dict:
    row: Dict = {
        "schema": CSV_SCHEMA_VERSION,
        "instance": spec.get("id", ""),
        "family": spec.get("family", ""),
        "params": json.dumps(spec.get("params", {}), sort_keys=True),
        "status": "ok",
    }
    timings: Dict[str, float] = {}
    try:
        params = dict(spec.get("params", {}))
        if spec.get("family") == "random" and "seed" not in params:
            params["seed"] = seed + hash(spec.get("id", "")) % 65536
        g = generate(spec["family"], **params)
        row["n"], row["m"] = g.n(), g.m()
        r = int(spec.get("r", 2))
        rp = spec.get("rp")
        mode = spec.get("mode", "v")
        row["r"], row["mode"] = r, mode
        if rp is not None:
            fam = HCollection.double_thetas(r, int(rp))
        else:
            fam = HCollection.thetas(r)
        if spec.get("oracle", True) and g.n() <= oracle_cap:
            t0 = time.monotonic()
            row["oracle_pack"] = oracle.exact_pack(g, fam, mode, cap=oracle_cap)[0]
            row["oracle_cover"] = oracle.exact_cover(g, fam, mode, cap=oracle_cap)[0]
            timings["oracle"] = time.monotonic() - t0
        if rp is None and spec.get("approx", True):
            t0 = time.monotonic()
            res = approximate(g, mode, r, ApproxConfig(oracle_fallback_cap=oracle_cap))
            timings["approx"] = time.monotonic() - t0
            row["k0"] = res.k0
            row["appx_value"] = res.value
            row["probes"] = len(res.probes)
            row["trace"] = "+".join(sorted({ev[0] for ev in res.trace}))
    except (GraphError, OracleSizeError) as exc:
        row["status"] = "error: %s" % exc
    return {"row": row, "timings": {k: round(v, 4) for k, v in timings.items()}}


def cmd_bench(args) -> int:
    config = json.loads(open(args.config).read())
    seed = int(config.get("seed", 0))
    oracle_cap = int(config.get("oracle_cap", args.oracle_cap))
    results = [
        _bench_instance(spec, seed, oracle_cap) for spec in config.get("instances", [])
    ]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for res in results:
        writer.writerow({k: res["row"].get(k, "") for k in CSV_FIELDS})
    csv_text = buf.getvalue()
    base = args.out or "bench"
    with open(base + ".csv", "w") as fh:
        fh.write(csv_text)
    payload = {
        "seed": seed,
        "oracle_cap": oracle_cap,
        "results": [dict(r["row"], timings=r["timings"]) for r in results],
    }
    if args.format == "json" or True:
        with open(base + ".json", "w") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    sys.stdout.write(csv_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thetapack",
        description="Packing and covering of theta-minor targets.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--oracle-cap", type=int, default=16)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="json")

    p = sub.add_parser("solve", help="approximate pack/cover on one graph")
    p.add_argument("--input", required=True, help="edge list file, or - for stdin")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=["v", "e"], required=True)
    p.add_argument("--k", type=int, help="run a single packing-or-covering trial")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("oracle", help="exact pack and cover (small instances)")
    p.add_argument("--input", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--rr", type=int, help="second arm: double-theta targets")
    p.add_argument("--mode", choices=["v", "e"], required=True)
    common(p)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("gen", help="emit a generated instance as an edge list")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument(
        "--param",
        action="append",
        metavar="KEY=INT",
        help="generator parameter, repeatable (e.g. --param n=7)",
    )
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="run an experiment config, emit CSV + JSON")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (GraphError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OracleSizeError as exc:
        print("exhausted: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
