"""Command-line front end: ``teamscore {score,select,adversary,verify,reduce}``.

Exit codes: 0 success, 1 verification failed, 2 missing input file,
3 unparseable input, 4 invalid parameters, 5 enumeration budget exceeded,
6 report could not be written.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import adversary, suites
from .errors import BudgetExceeded, TeamScoreError
from .pool_io import (
    ParseError,
    load_pool,
    round_floats,
    write_json,
    write_pool,
    write_ratio_csv,
)
from .rv import SCORERS, as_weighted_bernoulli
from .selection import (
    DEFAULT_BUDGET,
    brute_force_optimal,
    greedy_hill_climb,
    select_by_test,
    wb_greedy,
)
from .team_value import TeamInstance

EXIT_VERIFY_FAILED = 1
EXIT_NOT_FOUND = 2
EXIT_PARSE = 3
EXIT_PARAMS = 4
EXIT_BUDGET = 5
EXIT_WRITE = 6


class ReportWriteError(Exception):
    pass


def _emit(doc) -> None:
    print(json.dumps(round_floats(doc), indent=2))


def _write(fn, path, *args) -> None:
    try:
        fn(path, *args)
    except OSError as exc:
        raise ReportWriteError(f"cannot write {path}: {exc}") from exc


def _instance(args) -> TeamInstance:
    pool, k, h = load_pool(args.pool)
    k = args.k if args.k is not None else k
    h = args.h if args.h is not None else h
    if k is None:
        raise TeamScoreError("k must be given on the command line or in the pool file")
    if h is None:
        h = 1
    return TeamInstance(tuple(pool), int(k), int(h))


def cmd_score(args) -> int:
    inst = _instance(args)
    fn = SCORERS[args.method]
    rows = sorted(((c.id, fn(c.rv, inst.k, inst.h)) for c in inst.pool),
                  key=lambda r: (-r[1], r[0]))
    lines = ["id\tscore"] + [f"{cid}\t{score:.12g}" for cid, score in rows]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        _write(lambda p, t: Path(p).write_text(t), args.out, text)
    return 0


def cmd_select(args) -> int:
    inst = _instance(args)
    if args.method == "wb":
        pool = []
        for c in inst.pool:
            wbv = as_weighted_bernoulli(c.rv)
            if wbv is None:
                raise TeamScoreError(f"candidate {c.id} is not weighted Bernoulli")
            pool.append((c.id, wbv))
        report = wb_greedy(pool, inst.k, oracle_budget=args.budget if args.oracle else 0)
    else:
        if args.method == "brute":
            report = brute_force_optimal(inst, budget=args.budget)
        elif args.method == "greedy":
            report = greedy_hill_climb(inst)
        else:
            report = select_by_test(inst, args.method)
        if args.oracle and report.optimal_value is None:
            report.with_optimum(brute_force_optimal(inst, budget=args.budget).team_value)
    doc = {"k": inst.k, "h": inst.h, **report.to_dict()}
    if not args.oracle and args.method != "brute":
        for key in ("optimal_value", "ratio"):
            doc.pop(key)
    _emit(doc)
    if args.out:
        _write(write_json, args.out, doc)
    return 0


def _adversary_tightness(args):
    inst = adversary.canonical_tightness_instance(args.k, args.h, args.n, args.epsilon)
    rep = select_by_test(inst, "canonical")
    best = brute_force_optimal(inst, budget=args.budget)
    rep.with_optimum(best.team_value)
    summary = {"kind": "tightness", "k": inst.k, "h": inst.h, "selected": rep.team,
               "selected_value": rep.team_value, "optimal_team": best.team,
               "optimal_value": best.team_value, "ratio": rep.ratio, "bound": rep.bound}
    return summary, lambda path: write_pool(path, inst.pool, inst.k, inst.h)


def _adversary_hillclimb(args):
    inst = adversary.hill_climb_counterexample()
    greedy = greedy_hill_climb(inst)
    best = brute_force_optimal(inst, budget=args.budget)
    summary = {"kind": "hillclimb", "k": inst.k, "h": inst.h, "selected": greedy.team,
               "selected_value": greedy.team_value, "optimal_team": best.team,
               "optimal_value": best.team_value}
    return summary, lambda path: write_pool(path, inst.pool, inst.k, inst.h)


def _adversary_cardinality(args):
    test = adversary.SET_TESTS[args.test]
    out = adversary.cardinality_adversary(test, args.k)
    summary = {"kind": "cardinality", "k": args.k, "test": args.test,
               "selected_value": out.selected_value, "optimal_value": out.optimal_value}
    doc = {"k": args.k, "sets": [{"id": s.id, "elements": sorted(s.elements)}
                                 for s in out.fooling_pool]}
    return summary, lambda path: Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _adversary_clique(args):
    test = adversary.vertex_tests(args.k)[args.test]
    out = adversary.clique_adversary(test, args.k)
    verts = out.fooling_pool
    edges = [[a, b] for i, a in enumerate(verts) for b in verts[i + 1:]
             if adversary.CliqueWorld.clique_of(a) == adversary.CliqueWorld.clique_of(b)]
    summary = {"kind": "clique", "k": args.k, "test": args.test,
               "selected_edges": out.selected_value, "optimal_edges": out.optimal_value}
    doc = {"k": args.k, "vertices": verts, "edges": edges}
    return summary, lambda path: Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _adversary_setcover(args):
    import numpy as np

    inst = adversary.random_setcover_instance(np.random.default_rng(args.seed))
    team, value = adversary.best_expected_max_team(inst)
    decision = adversary.cover_decision(inst)
    summary = {"kind": "setcover", "k": inst.k, "universe_size": len(inst.universe),
               "subsets": len(inst.subsets), "cover_exists": decision,
               "best_team": team, "best_expected_max": value,
               "reduction_agrees": decision == (abs(value - 1.0) <= 1e-12)}
    return summary, lambda path: Path(path).write_text(adversary.format_setcover(inst))


def cmd_adversary(args) -> int:
    if args.kind in ("cardinality", "clique"):
        names = adversary.SET_TESTS if args.kind == "cardinality" else adversary.vertex_tests(2)
        if args.test not in names:
            raise TeamScoreError(f"unknown test {args.test!r}; choose from {sorted(names)}")
        if args.k < 2:
            raise TeamScoreError("k must be >= 2")
    builder = {"tightness": _adversary_tightness, "hillclimb": _adversary_hillclimb,
               "cardinality": _adversary_cardinality, "clique": _adversary_clique,
               "setcover": _adversary_setcover}[args.kind]
    summary, writer = builder(args)
    if args.out:
        _write(lambda p: writer(p), args.out)
        summary["instance_file"] = str(args.out)
    _emit(summary)
    return 0


def cmd_verify(args) -> int:
    trials = args.trials if args.trials is not None else suites.DEFAULT_TRIALS[args.suite]
    options = {}
    if args.suite == "submodular":
        options["control"] = args.control
    if args.suite == "ratios":
        options.update(n=args.n, k=args.k, h=args.h, budget=args.budget)
    result = suites.run_suite(args.suite, args.seed, trials, **options)
    doc = result.to_dict()

    out = Path(args.out) if args.out else None
    csv_path = args.csv or (out.with_suffix(".csv") if out and args.suite == "ratios" else None)
    fig_path = args.figure or (out.with_suffix(".png") if out and args.suite in ("ratios", "theorems")
                               else None)
    if args.suite == "ratios" and csv_path:
        _write(write_ratio_csv, csv_path, result.experiment.rows)
        doc["csv"] = str(csv_path)
    if fig_path and args.suite in ("ratios", "theorems"):
        from . import plotting

        if args.suite == "ratios":
            _write(lambda p: plotting.plot_ratio_histograms(result.experiment, p), fig_path)
        else:
            _write(lambda p: plotting.plot_theorem_bounds(result.bound_points, p), fig_path)
        doc["figure"] = str(fig_path)
    if out:
        _write(write_json, out, doc)

    status = "PASS" if result.passed else "FAIL"
    print(f"{args.suite}: {status} ({result.violations} violations, seed {args.seed}, {trials} trials)")
    print(json.dumps(round_floats(result.details), indent=2))
    return 0 if result.passed else EXIT_VERIFY_FAILED


def cmd_reduce(args) -> int:
    text = Path(args.file).read_text()
    try:
        inst = adversary.parse_setcover(text)
    except ValueError as exc:
        if isinstance(exc, TeamScoreError):
            raise ParseError(str(exc)) from exc
        raise ParseError(f"malformed Set Cover file: {exc}") from exc
    ensemble = adversary.setcover_to_ensemble(inst)
    decision = adversary.cover_decision(inst, limit=args.limit)
    team, value = adversary.best_expected_max_team(inst, limit=args.limit)
    summary = {"universe_size": len(inst.universe), "subsets": len(inst.subsets), "k": inst.k,
               "cover_exists": decision, "best_team": team, "best_expected_max": value,
               "reduction_agrees": decision == (abs(value - 1.0) <= 1e-12)}
    if args.out:
        doc = {"candidate_ids": list(ensemble.candidate_ids),
               "outcomes": [{"probability": p, "values": a} for p, a in ensemble.outcomes]}
        _write(lambda p: Path(p).write_text(json.dumps(doc, indent=2) + "\n"), args.out)
    _emit(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teamscore", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="maximum subsets enumerated by brute force")

    def team_args(p):
        p.add_argument("pool", help="pool document (JSON)")
        p.add_argument("--k", type=int)
        p.add_argument("--h", type=int)

    p = sub.add_parser("score", help="score every candidate with one test")
    team_args(p)
    p.add_argument("--method", choices=["canonical", "potential", "conditional"], default="potential")
    common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("select", help="select a team")
    team_args(p)
    p.add_argument("--method", default="potential",
                   choices=["canonical", "potential", "conditional", "greedy", "brute", "wb"])
    p.add_argument("--oracle", action="store_true", help="compare against the exhaustive optimum")
    common(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("adversary", help="build an adversarial instance")
    p.add_argument("kind", choices=["tightness", "hillclimb", "cardinality", "clique", "setcover"])
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--n", type=float, default=1e4, help="long-shot value for tightness")
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--test", default="constant", help="named deterministic test")
    common(p)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("suite", choices=suites.SUITES)
    p.add_argument("--trials", type=int)
    p.add_argument("--control", action="store_true",
                   help="add the supermodular edge-count control (fails by design)")
    p.add_argument("--csv", help="per-trial CSV for the ratios suite")
    p.add_argument("--figure", help="figure path (ratios, theorems)")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--h", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="Set Cover file -> expected-max ensemble and decision")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=adversary.COVER_ENUM_LIMIT,
                   help="maximum number of subsets to enumerate")
    common(p)
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        code, msg = EXIT_NOT_FOUND, f"file not found: {exc.filename}"
    except ParseError as exc:
        code, msg = EXIT_PARSE, str(exc)
    except BudgetExceeded as exc:
        code, msg = EXIT_BUDGET, str(exc)
    except ReportWriteError as exc:
        code, msg = EXIT_WRITE, str(exc)
    except TeamScoreError as exc:
        code, msg = EXIT_PARAMS, str(exc)
    print(f"teamscore: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
