"""Command line front end.

    giantscope <experiment> [--config file.toml] [--n ...] [--eps ...] ...
    giantscope sample --model young --n 1000000 --eps 0.1 --out giant

Exit codes: 0 success, 2 config error, 3 partial trial failures (flagged rows).
"""

from __future__ import annotations

import argparse
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import graphcore as gc
from . import harness
from . import samplers as sm
from .harness import ConfigError, ExperimentConfig, RUNNERS


def _add_experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML config file; CLI flags override it")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--eps", type=float, nargs="+")
    p.add_argument("--d", type=int, nargs="+")
    p.add_argument("--mu", type=float, nargs="+")
    p.add_argument("--k", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--exact-cap", type=int, dest="exact_cap")
    p.add_argument("--kernel-gate", type=int, dest="kernel_gate")
    p.add_argument("--pgw-trees", type=int, dest="pgw_trees")
    p.add_argument("--models", nargs="+")
    p.add_argument("--workers", type=int)
    p.add_argument("--timings", action="store_const", const=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="giantscope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in RUNNERS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        _add_experiment_args(p)
    p = sub.add_parser("sample", help="sample one giant and export it")
    p.add_argument("--model", choices=("young", "general", "gnp"), default="young")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="basename for .edges/.meta.json files")
    return parser


def load_config(kind: str, args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        with open(args.config, "rb") as fh:
            data.update(tomllib.load(fh))
    data["kind"] = kind
    for key in ("n", "eps", "d", "mu", "k", "trials", "seed", "out", "format",
                "exact_cap", "kernel_gate", "pgw_trees", "models", "workers", "timings"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    return harness.config_from_dict(data)


def _run_sample(args: argparse.Namespace) -> int:
    rng = sm.rng_stream(args.seed)
    if args.model == "gnp":
        g = sm.sample_gnp(args.n, (1.0 + args.eps) / args.n, rng)
        meta = {"model": "gnp", "n": args.n, "eps": args.eps, "seed": args.seed}
    else:
        build = sm.sample_young_giant if args.model == "young" else sm.sample_general_giant
        ag = build(args.n, args.eps, rng)
        g = ag.graph
        params = ag.params
        meta = {
            "model": params.model, "n": params.n, "eps": params.eps, "p": params.p,
            "mu": params.mu, "lambda": params.lam, "Z": params.Z, "N": params.N,
            "N_k": {str(k): v for k, v in params.N_k.items()},
            "Lambda": params.Lambda, "seed": args.seed,
            "truncated_trees": ag.truncated_trees,
            "core_vertices": ag.core_vertices.tolist(),
            "kernel_vertices": ag.kernel_vertices.tolist(),
        }
    gc.write_edge_list(g, args.out + ".edges")
    with open(args.out + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out}.edges ({g.n} vertices, {g.edge_count} edges) "
          f"and {args.out}.meta.json")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sample":
        return _run_sample(args)
    try:
        cfg = load_config(args.command, args)
        rows = RUNNERS[cfg.kind](cfg)
    except (ConfigError, FileNotFoundError, tomllib.TOMLDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    flagged = sum(1 for r in rows if r.get("flag"))
    if cfg.out:
        harness.write_rows(rows, cfg.out, cfg.format)
        print(f"wrote {len(rows)} rows to {cfg.out} ({flagged} flagged)")
    else:
        text = harness.rows_to_csv(rows) if cfg.format == "csv" else harness.rows_to_json(rows)
        sys.stdout.write(text)
    if cfg.kind == "model_compare":
        for row in rows:
            if str(row.get("model", "")).startswith(("mean:", "gap:")):
                fields = {k: v for k, v in row.items()
                          if k.startswith(("size_", "diam_", "gap_"))}
                print(f"# n={row['n']} eps={row['eps']} {row['model']} "
                      + " ".join(f"{k}={v:.6g}" for k, v in fields.items()),
                      file=sys.stderr)
    return 3 if flagged else 0


if __name__ == "__main__":
    sys.exit(main())
