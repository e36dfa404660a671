"""Command-line entry points: run, converge, compare, reference."""
from __future__ import annotations

import argparse
import json
import sys

from .config import load_config
from .driver import compare, convergence_study, load_bundle, run_case

__all__ = ["main"]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--problem", help="built-in problem name")
    p.add_argument("--order", type=int, help="gPC order M")
    p.add_argument("--cells", help="cell count, e.g. 200 or 100x100")
    p.add_argument("--cfl", type=float)
    p.add_argument("--mode", choices=["strang", "thirdorder"], help="2D splitting")
    p.add_argument("--out", help="output directory")


def _parse_cells(text):
    if text is None:
        return None
    if "x" in text:
        nx, ny = text.lower().split("x")
        return [int(nx), int(ny)]
    return int(text)


def _overrides(args) -> dict:
    return {
        "problem": args.problem,
        "order": args.order,
        "cells": _parse_cells(args.cells),
        "cfl": args.cfl,
        "mode": args.mode,
        "out": args.out,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gpcsg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one case")
    _add_common(p_run)
    p_run.add_argument("--solver", choices=["sg", "collocation"])
    p_run.add_argument("--t-final", type=float, dest="t_final")
    p_run.add_argument("--no-limiter", action="store_true")
    p_run.add_argument("--vtk", action="store_true")
    p_run.add_argument("--dry-run", action="store_true")

    p_conv = sub.add_parser("converge", help="mesh-refinement error table")
    _add_common(p_conv)
    p_conv.add_argument("--mesh-list", default="10,20,40,80,160",
                        help="comma-separated cell counts")
    p_conv.add_argument("--dt-policy", choices=["cfl", "dx53"], dest="dt_policy")

    p_cmp = sub.add_parser("compare", help="difference report between two runs")
    p_cmp.add_argument("--a", required=True, help="first run directory")
    p_cmp.add_argument("--b", required=True, help="second run directory")
    p_cmp.add_argument("--slice", dest="slice_spec", choices=["diagonal"])
    p_cmp.add_argument("--out")

    p_ref = sub.add_parser("reference", help="collocation reference run")
    _add_common(p_ref)
    p_ref.add_argument("--nodes", type=int, help="collocation nodes")
    p_ref.add_argument("--t-final", type=float, dest="t_final")

    args = parser.parse_args(argv)

    if args.command == "run":
        extra = {
            "solver": args.solver,
            "t_final": args.t_final,
            "vtk": args.vtk or None,
            "dry_run": args.dry_run or None,
        }
        if args.no_limiter:
            extra["limiter"] = False
        cfg = load_config(args.config, {**_overrides(args), **extra})
        bundle = run_case(cfg)
        print(json.dumps({
            "kind": bundle.kind,
            "n_steps": bundle.n_steps,
            "wall_time": round(bundle.wall_time, 3),
            "out": bundle.outdir,
        }, indent=2))
        return 0

    if args.command == "converge":
        extra = {"dt_policy": args.dt_policy}
        cfg = load_config(args.config, {**_overrides(args), **extra, "out": None, "cells": None})
        cells = [int(c) for c in args.mesh_list.split(",")]
        table = convergence_study(cfg, cells)
        header = f"{'cells':>7} {'l1 mean':>13} {'order':>7} {'l1 std':>13} {'order':>7}"
        print(header)
        for i, n in enumerate(table["cells"]):
            print(
                f"{n:>7d} {table['err_mean'][i]:>13.4e} {table['order_mean'][i]:>7.3f} "
                f"{table['err_std'][i]:>13.4e} {table['order_std'][i]:>7.3f}"
            )
        if args.out:
            from pathlib import Path

            Path(args.out).mkdir(parents=True, exist_ok=True)
            (Path(args.out) / "convergence.json").write_text(
                json.dumps(table, indent=2, sort_keys=True) + "\n"
            )
        return 0

    if args.command == "compare":
        report = compare(load_bundle(args.a), load_bundle(args.b),
                         slice_spec=args.slice_spec, outdir=args.out)
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0

    if args.command == "reference":
        extra = {"solver": "collocation", "t_final": args.t_final,
                 "colloc_nodes": args.nodes}
        cfg = load_config(args.config, {**_overrides(args), **extra})
        bundle = run_case(cfg)
        print(json.dumps({
            "kind": bundle.kind,
            "wall_time": round(bundle.wall_time, 3),
            "out": bundle.outdir,
        }, indent=2))
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
