"""Command line interface.

Subcommands: check (home-space decision), witness (non-home witness set for
one linear component), reach (semilinear-to-semilinear reachability),
minbasis (minimal basis of a decrease set), simulate (seeded random walk).

Exit codes: 0 for a definite result, 2 when the analysis stayed inconclusive
within its budget, 1 for usage or input errors.  Output is deterministic:
no timestamps, sorted JSON keys, seeded randomness only in simulate.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__, homespace
from .formats import ParseError, format_semilinear, parse_net, parse_semilinear
from .nets import PetriNet, enabled_actions, fire
from .reach import Budget, CallStats, ReachQuery, Reachable, Unknown, Unreachable, decide
from .semilinear import LinearSet, SemilinearSet
from .upward import Basis, Inconclusive, Undecided
from .vectors import Vector
from .witness import base_decrease_min_basis, decrease_min_basis, witness_linear

_ENV_BUDGET = "PNHS_BUDGET"

EXIT_DEFINITE = 0
EXIT_USAGE = 1
EXIT_UNDECIDED = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse maps its own usage failures to exit code 2; we reserve that
    for inconclusive analyses, so route them through exit code 1 instead."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_net(path: str) -> PetriNet:
    try:
        return parse_net(_read(path))
    except ParseError as err:
        raise _UsageError(f"{path}: {err}") from err


def _load_set(path: str, net: PetriNet, what: str) -> SemilinearSet:
    try:
        s = parse_semilinear(_read(path))
    except ParseError as err:
        raise _UsageError(f"{path}: {err}") from err
    if s.dim is not None and s.dim != net.dim:
        raise _UsageError(
            f"{what} set in {path} has dimension {s.dim}, the net has {net.dim}"
        )
    return s


def _budget(args: argparse.Namespace) -> Budget:
    nodes = args.node_budget
    if nodes is None:
        env = os.environ.get(_ENV_BUDGET)
        if env is not None:
            try:
                nodes = int(env)
            except ValueError:
                raise _UsageError(f"{_ENV_BUDGET} must be an integer, got {env!r}")
        else:
            nodes = 100_000
    if nodes < 1:
        raise _UsageError("node budget must be at least 1")
    if args.time_budget_secs <= 0:
        raise _UsageError("time budget must be positive")
    return Budget(node_budget=nodes, time_budget_secs=args.time_budget_secs)


def _provenance(stats: CallStats, budget: Budget) -> dict:
    return {
        "oracle_calls": stats.snapshot(),
        "node_budget": budget.node_budget,
        "time_budget_secs": budget.time_budget_secs,
    }


def _emit(args: argparse.Namespace, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _vec(v: Vector) -> list[int]:
    return list(v)


def _set_json(s: SemilinearSet) -> list[dict]:
    return [
        {"base": _vec(c.base), "periods": [_vec(p) for p in c.periods]}
        for c in s.components
    ]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args: argparse.Namespace) -> int:
    net = _load_net(args.net)
    start = _load_set(args.source, net, "start")
    home = _load_set(args.home, net, "home")
    budget = _budget(args)
    stats = CallStats()
    verdict = homespace.check(homespace.HomeSpaceQuery(net, start, home), budget, stats)
    payload: dict = {"version": __version__, "provenance": _provenance(stats, budget)}
    if isinstance(verdict, homespace.HomeSpace):
        payload["verdict"] = "home-space"
        _emit(args, payload, ["home-space"])
        return EXIT_DEFINITE
    if isinstance(verdict, homespace.NotHomeSpace):
        payload["verdict"] = "not-home-space"
        payload["culprit"] = _vec(verdict.culprit)
        lines = ["not-home-space", f"culprit {' '.join(map(str, verdict.culprit))}"]
        if verdict.chain is not None:
            chain = verdict.chain
            payload["witness_chain"] = {
                "start": _vec(chain.start),
                "segments": [
                    [net.actions[i].name for i in seg] for seg in chain.segments
                ],
                "snapshots": [_vec(s) for s in chain.snapshots],
            }
            lines.append(f"chain start {' '.join(map(str, chain.start))}")
            for j, (seg, snap) in enumerate(zip(chain.segments, chain.snapshots)):
                names = " ".join(net.actions[i].name for i in seg) or "(empty)"
                lines.append(
                    f"stage {j}: fire {names} -> {' '.join(map(str, snap))}"
                )
        _emit(args, payload, lines)
        return EXIT_DEFINITE
    payload["verdict"] = "unknown"
    payload["reason"] = verdict.reason
    _emit(args, payload, ["unknown", f"reason: {verdict.reason}"])
    return EXIT_UNDECIDED


def _single_component(s: SemilinearSet, path: str) -> LinearSet:
    if len(s.components) != 1:
        raise _UsageError(
            f"{path}: expected exactly one linear component, found {len(s.components)}"
        )
    return s.components[0]


def _cmd_witness(args: argparse.Namespace) -> int:
    net = _load_net(args.net)
    target = _single_component(_load_set(args.linear, net, "target"), args.linear)
    budget = _budget(args)
    stats = CallStats()
    try:
        result = witness_linear(net, target, budget, stats)
    except Undecided as err:
        payload = {
            "version": __version__,
            "verdict": "unknown",
            "reason": f"blocked on box {err.blocked_on}",
            "provenance": _provenance(stats, budget),
        }
        _emit(args, payload, ["unknown", f"blocked on box {err.blocked_on}"])
        return EXIT_UNDECIDED
    payload = {
        "version": __version__,
        "verdict": "witness",
        "witness": _set_json(result.witness),
        "provenance": _provenance(stats, budget),
    }
    text = format_semilinear(result.witness).rstrip("\n")
    _emit(args, payload, [text] if text else ["empty"])
    return EXIT_DEFINITE


def _cmd_reach(args: argparse.Namespace) -> int:
    net = _load_net(args.net)
    source = _load_set(args.source, net, "source")
    target = _load_set(args.to, net, "target")
    budget = _budget(args)
    stats = CallStats()
    verdict = decide(ReachQuery(net, source, target), budget, stats)
    payload: dict = {"version": __version__, "provenance": _provenance(stats, budget)}
    if isinstance(verdict, Reachable):
        payload["verdict"] = "reachable"
        payload["source_component"] = verdict.source_component
        payload["target_component"] = verdict.target_component
        lines = ["reachable"]
        _emit(args, payload, lines)
        return EXIT_DEFINITE
    if isinstance(verdict, Unreachable):
        payload["verdict"] = "unreachable"
        payload["certificate"] = verdict.certificate
        _emit(args, payload, ["unreachable", f"certificate: {verdict.certificate}"])
        return EXIT_DEFINITE
    assert isinstance(verdict, Unknown)
    payload["verdict"] = "unknown"
    payload["reason"] = verdict.reason
    _emit(args, payload, ["unknown", f"reason: {verdict.reason}"])
    return EXIT_UNDECIDED


def _cmd_minbasis(args: argparse.Namespace) -> int:
    net = _load_net(args.net)
    budget = _budget(args)
    stats = CallStats()
    if args.kind == "decrease":
        out = decrease_min_basis(net, budget, stats)
    else:
        if args.linear is None:
            raise _UsageError("--kind base-decrease requires --linear for the periods")
        target = _single_component(_load_set(args.linear, net, "target"), args.linear)
        out = base_decrease_min_basis(net, target.periods, budget, stats)
    payload: dict = {"version": __version__, "provenance": _provenance(stats, budget)}
    if isinstance(out, Basis):
        payload["verdict"] = "basis"
        payload["elements"] = [_vec(e) for e in out.basis.elements]
        lines = [" ".join(map(str, e)) for e in out.basis.elements] or ["empty"]
        _emit(args, payload, lines)
        return EXIT_DEFINITE
    assert isinstance(out, Inconclusive)
    payload["verdict"] = "inconclusive"
    payload["blocked_on"] = str(out.blocked_on)
    _emit(args, payload, ["inconclusive", f"blocked on box {out.blocked_on}"])
    return EXIT_UNDECIDED


def _cmd_simulate(args: argparse.Namespace) -> int:
    net = _load_net(args.net)
    start_set = _load_set(args.source, net, "start")
    comp = _single_component(start_set, args.source)
    if comp.periods:
        raise _UsageError(
            f"{args.source}: simulation needs a single configuration, not periods"
        )
    rng = random.Random(args.seed)
    config = comp.base
    steps: list[dict] = []
    lines = [f"start {' '.join(map(str, config))}"]
    deadlock = False
    for _ in range(args.steps):
        options = enabled_actions(net, config)
        if not options:
            deadlock = True
            break
        i = rng.choice(options)
        config = fire(net, config, i)
        steps.append({"action": net.actions[i].name, "config": _vec(config)})
        lines.append(f"{net.actions[i].name} -> {' '.join(map(str, config))}")
    if deadlock:
        lines.append("deadlock")
    payload = {
        "version": __version__,
        "verdict": "deadlock" if deadlock else "ok",
        "seed": args.seed,
        "steps": steps,
        "final": _vec(config),
    }
    _emit(args, payload, lines)
    return EXIT_DEFINITE


# ---------------------------------------------------------------------------
# wiring


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--net", required=True, help="net description file")
    p.add_argument(
        "--node-budget",
        type=int,
        default=None,
        help=f"search node budget per query (default 100000, env {_ENV_BUDGET})",
    )
    p.add_argument(
        "--time-budget-secs",
        type=float,
        default=10.0,
        help="wall clock budget per reachability call (default 10)",
    )
    p.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="pnhs", description=__doc__)
    top.add_argument("--version", action="version", version=f"pnhs {__version__}")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="decide whether a set is a home space")
    _add_common(p)
    p.add_argument("--from", dest="source", required=True, help="start set file")
    p.add_argument("--home", required=True, help="candidate home set file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("witness", help="witness set for one linear target")
    _add_common(p)
    p.add_argument("--linear", required=True, help="file with one linear set")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("reach", help="semilinear reachability")
    _add_common(p)
    p.add_argument("--from", dest="source", required=True, help="source set file")
    p.add_argument("--to", required=True, help="target set file")
    p.set_defaults(func=_cmd_reach)

    p = sub.add_parser("minbasis", help="minimal basis of a decrease set")
    _add_common(p)
    p.add_argument(
        "--kind",
        choices=("decrease", "base-decrease"),
        default="decrease",
        help="which upward-closed set to extract",
    )
    p.add_argument("--linear", default=None, help="linear set supplying the periods")
    p.set_defaults(func=_cmd_minbasis)

    p = sub.add_parser("simulate", help="seeded random firing walk")
    _add_common(p)
    p.add_argument("--from", dest="source", required=True, help="start configuration file")
    p.add_argument("--steps", type=int, default=20, help="maximum steps (default 20)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.set_defaults(func=_cmd_simulate)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
