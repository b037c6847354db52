"""Command line front end.

Every subcommand works from a seed so runs are reproducible; anything
slow streams its partial results before exiting on an error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from diskgames import adversaries
from diskgames import dissection as dis
from diskgames import games, grand, harness, rgg
from diskgames.graphs import UnionFind

PROPS = ("min_deg_2", "min_deg_4", "pm_necessary", "two_trees")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, grand.PlanError, grand.StitchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diskgames")
    sub = p.add_subparsers(required=True)

    q = sub.add_parser("sample", help="draw a point set and write it to a file")
    _seeded(q)
    q.add_argument("-o", "--out", required=True)
    q.set_defaults(func=cmd_sample)

    q = sub.add_parser("build", help="graph statistics at a radius or scaling")
    _seeded(q)
    _radius_args(q)
    q.set_defaults(func=cmd_build)

    q = sub.add_parser("hit", help="hitting radii of the standard properties")
    _seeded(q)
    q.add_argument("--prop", default="all", choices=PROPS + ("all",))
    q.set_defaults(func=cmd_hit)

    q = sub.add_parser("dissect", help="dissection structure report as JSON")
    _seeded(q)
    _radius_args(q)
    q.add_argument("--eta", type=float, default=0.05)
    q.add_argument("--T", type=int, default=10)
    q.set_defaults(func=cmd_dissect)

    q = sub.add_parser("play", help="play one game and verify the certificate")
    q.add_argument("--game", required=True, choices=["connectivity", "hamilton", "pm"])
    q.add_argument("--n", type=int, default=2000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--breaker", default="random",
                   choices=["random", "lowdeg", "cluster", "cut"])
    q.add_argument("--synthetic", type=int, metavar="M",
                   help="play on an M-by-M synthetic instance instead of a sample")
    q.add_argument("--transcript", help="file for the move transcript")
    q.set_defaults(func=cmd_play)

    q = sub.add_parser("solve", help="exact-solve a small board")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--edges", required=True,
                   help="comma list like 0-1,1-2,0-2 (or 'complete')")
    q.add_argument("--goal", default="subgraph",
                   choices=["subgraph", "hamilton", "pm", "connectivity"])
    q.add_argument("--h", default="K3", help="pattern for --goal subgraph")
    q.add_argument("--first", default="breaker", choices=["breaker", "maker"])
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("kh", help="least Maker-win clique and the member family")
    q.add_argument("--h", required=True, help="pattern name (triangle/K3/P3/K2) or edge list")
    q.add_argument("--kmax", type=int, default=6)
    q.set_defaults(func=cmd_kh)

    q = sub.add_parser("mc", help="run a Monte-Carlo experiment, emit CSV")
    q.add_argument("--config", help="JSON ExperimentConfig file (overrides flags)")
    q.add_argument("--experiment", choices=sorted(harness.RUNNERS))
    q.add_argument("--game")
    q.add_argument("--n", type=int, action="append", default=None)
    q.add_argument("--x", type=float, action="append", default=None)
    q.add_argument("--reps", type=int, default=50)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--param", action="append", default=[],
                   help="extra key=value (value parsed as JSON when possible)")
    q.add_argument("-o", "--out", help="CSV path (default stdout)")
    q.set_defaults(func=cmd_mc)
    return p


def _seeded(q) -> None:
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--model", default="binomial", choices=["binomial", "poisson"])


def _radius_args(q) -> None:
    q.add_argument("--r", type=float, help="explicit radius")
    q.add_argument("--game", default="connectivity", choices=list(harness.GAMES),
                   help="threshold scale when --r is absent")
    q.add_argument("--x", type=float, default=0.0)


def _resolve_r(args) -> float:
    if args.r is not None:
        return args.r
    return harness.scaling_radius(args.game, args.n, args.x)


def cmd_sample(args) -> int:
    pts = rgg.sample(args.model, args.n, args.seed)
    pts.save(args.out)
    print(f"wrote {len(pts)} points to {args.out}")
    return 0


def cmd_build(args) -> int:
    pts = rgg.sample(args.model, args.n, args.seed)
    r = _resolve_r(args)
    G = rgg.build_graph(pts, r)
    deg = G.degrees()
    ed = rgg.edge_degrees(G)
    stats = {
        "n": G.n,
        "r": r,
        "edges": int(deg.sum()) // 2,
        "min_degree": int(deg.min()) if G.n else 0,
        "min_edge_degree": min(ed.values()) if ed else None,
        "components": len(G.components()),
    }
    print(json.dumps(stats, indent=2))
    return 0


def cmd_hit(args) -> int:
    pts = rgg.sample(args.model, args.n, args.seed)
    props = PROPS if args.prop == "all" else (args.prop,)
    table = {
        "min_deg_2": ("min_deg", 2),
        "min_deg_4": ("min_deg", 4),
        "pm_necessary": "pm_necessary",
        "two_trees": "two_trees",
    }
    for name in props:
        res = rgg.hitting_radius(pts, table[name])
        if res:
            print(f"{name}: rho={res.radius:.6f} edges={res.n_edges} "
                  f"violations={len(res.violations)}")
        else:
            print(f"{name}: not reached (doublings={res.doublings})")
    return 0


def cmd_dissect(args) -> int:
    pts = rgg.sample(args.model, args.n, args.seed)
    r = _resolve_r(args)
    d = dis.Dissection(pts.coords, r, dis.DissectionParams(eta=args.eta, T=args.T))
    print(json.dumps(d.report(), indent=2))
    return 0


def cmd_play(args) -> int:
    if args.game == "connectivity":
        pts = rgg.sample("binomial", args.n, args.seed)
        hit = rgg.hitting_radius(pts, "two_trees", audit=False)
        if not hit:
            print("error: no two-tree packing within the radius cap", file=sys.stderr)
            return 1
        G = rgg.edge_process(pts.coords).graph_at_index(hit.n_edges)
        maker = grand.maker_connectivity(G)
        goal = "connectivity"
    elif args.synthetic is not None:
        inst = grand.synthetic_instance(
            goal="hamilton" if args.game == "hamilton" else "matching",
            m=args.synthetic,
            seed=args.seed,
        )
        G = inst.graph
        maker = grand.GrandMakerStrategy(G, inst.plan)
        goal = args.game
    else:
        pts = rgg.sample("binomial", args.n, args.seed)
        prop = ("min_deg", 4) if args.game == "hamilton" else "pm_necessary"
        hit = rgg.hitting_radius(pts, prop, audit=False)
        if not hit:
            print("error: necessary condition not reached", file=sys.stderr)
            return 1
        G = rgg.edge_process(pts.coords).graph_at_index(hit.n_edges)
        d = dis.Dissection(pts.coords, hit.radius)
        gl = "hamilton" if args.game == "hamilton" else "matching"
        plan = grand.marking_plan(G, d, goal=gl)  # raises PlanError with details
        maker = grand.GrandMakerStrategy(G, plan)
        goal = args.game

    board = list(G.edges())
    state = games.GameState(board)
    breaker = adversaries.make_adversary(args.breaker, board, seed=args.seed)
    games.play_game(state, maker, breaker)

    if goal == "connectivity":
        ok = _spanning_connected(G.n, state.maker_edges())
        what = "spanning connected subgraph"
    elif goal == "hamilton":
        cycle = grand.stitch_hamilton(state, maker)
        ok = games.verify_hamilton_cycle(G.n, state.maker_edges(), cycle)
        what = "Hamilton cycle"
    else:
        matching = grand.stitch_perfect_matching(state, maker)
        ok = games.verify_perfect_matching(G.n, state.maker_edges(), matching)
        what = "perfect matching"

    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(state.transcript_json() + "\n")
    if not ok:
        print(f"Maker FAILED: certificate for {what} did not verify")
        return 1
    print(f"Maker wins: verified {what} on {G.n} vertices "
          f"({len(state.maker_edges())} Maker edges)")
    return 0


def _spanning_connected(n: int, edges) -> bool:
    uf = UnionFind(n)
    parts = n
    for u, v in edges:
        if uf.union(u, v):
            parts -= 1
    return parts == 1


def _parse_edges(text: str, k: int) -> list:
    if text == "complete":
        return [(u, v) for u in range(k) for v in range(u + 1, k)]
    out = []
    for tok in text.split(","):
        u, v = tok.split("-")
        out.append((int(u), int(v)))
    return out


def cmd_solve(args) -> int:
    edges = _parse_edges(args.edges, args.k)
    if args.goal == "subgraph":
        kp, pe = harness.pattern_graph("K3" if args.h == "triangle" else args.h)
        win = games.SubgraphWin(args.k, kp, pe)
    elif args.goal == "hamilton":
        win = games.HamiltonWin(args.k)
    elif args.goal == "pm":
        win = games.PerfectMatchingWin(args.k)
    else:
        win = games.ConnectivityWin(args.k)
    verdict = games.solve_exact(args.k, edges, win, first=args.first)
    print(f"{'Maker' if verdict else 'Breaker'} wins "
          f"({args.goal} on {args.k} vertices, {len(edges)} edges, "
          f"{args.first} moves first)")
    return 0


def cmd_kh(args) -> int:
    kp, pe = harness.pattern_graph("K3" if args.h == "triangle" else args.h)
    kh = games.compute_kH(kp, pe, max_k=args.kmax)
    wins = [m for m in kh.family if m.maker_win]
    print(f"k_H = {kh.k}")
    print(f"Maker-win boards on {kh.k} vertices (up to isomorphism): {len(wins)}")
    for m in wins:
        tag = {True: "realizable", False: "not unit-disk realizable", None: ""}[
            m.realizable
        ]
        print(f"  {len(m.edges)} edges: {sorted(m.edges)} {tag}".rstrip())
    return 0


def cmd_mc(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = harness.ExperimentConfig.from_json(fh.read())
    else:
        if not args.experiment:
            raise ValueError("either --config or --experiment is required")
        params = {}
        for kv in args.param:
            key, _, val = kv.partition("=")
            try:
                params[key] = json.loads(val)
            except json.JSONDecodeError:
                params[key] = val
        cfg = harness.ExperimentConfig(
            experiment=args.experiment,
            ns=args.n or [1000],
            xs=args.x if args.x is not None else [0.0],
            reps=args.reps,
            seed=args.seed,
            game=args.game,
            params=params,
        )

    rows: list = []
    try:
        # one parameter point at a time, so an interrupt still leaves
        # every finished point on disk
        for n in cfg.ns:
            for x in cfg.xs:
                point = harness.ExperimentConfig(
                    experiment=cfg.experiment, ns=[n], xs=[x], reps=cfg.reps,
                    seed=cfg.seed, game=cfg.game, params=cfg.params,
                )
                rows.extend(harness.run_experiment(point))
    finally:
        if args.out:
            harness.write_csv(rows, args.out)
            print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
        else:
            import csv as _csv

            w = _csv.DictWriter(sys.stdout, fieldnames=harness.COLUMNS)
            w.writeheader()
            for row in rows:
                w.writerow({c: row.get(c, "") for c in harness.COLUMNS})
    return 0


if __name__ == "__main__":
    sys.exit(main())
