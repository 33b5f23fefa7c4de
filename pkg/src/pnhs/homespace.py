"""Deciding whether a semilinear set is a home space.

A home set H is a home space for a net with start set X when every
configuration reachable from X can still reach H.  The decision runs on
witnesses: for each component H_i a semilinear witness W_i whose members can
never reach H_i and which is reachable from every configuration that can
never reach H_i.  Because "can never reach H_i" is preserved by firing, H
fails to be a home space exactly when some chain

    x0 in X,  x0 ->* x1 in W_1,  x1 ->* x2 in W_2,  ...,  x(m-1) ->* xm in W_m

exists; its final configuration can reach no component of H.  The chain
search is compiled into a single reachability query on a staged net holding
m+1 synchronized copies of the configuration: copy i freezes when stage i
begins and is then checked against W_i by exact token subtraction, while copy
0 keeps running.  A trace of that net decodes back into the chain.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .nets import Action, PetriNet, Trace, fire
from .reach import Budget, CallStats, ReachQuery, Reachable, Unreachable, decide
from .reach import Unknown as ReachUnknown
from .semilinear import LinearSet, SemilinearSet, member, singleton
from .upward import Undecided
from .vectors import Vector
from .witness import WitnessResult, witness_linear


@dataclass(frozen=True)
class HomeSpaceQuery:
    """Is every configuration reachable from `start` able to reach `home`?"""

    net: PetriNet
    start: SemilinearSet
    home: SemilinearSet

    def __post_init__(self) -> None:
        for s in (self.start, self.home):
            if s.dim is not None and s.dim != self.net.dim:
                raise ValueError(
                    f"set of dimension {s.dim} does not match net dimension {self.net.dim}"
                )


@dataclass(frozen=True)
class WitnessChain:
    """A decoded counterexample chain.

    Firing segments[j] from the previous configuration (start for j = 0)
    yields snapshots[j], which lies in the witness of home component j.  The
    last snapshot can reach no component of the home set; an empty chain
    means start itself already cannot.
    """

    start: Vector
    segments: tuple[tuple[int, ...], ...]
    snapshots: tuple[Vector, ...]


@dataclass(frozen=True)
class HomeSpace:
    """Definite yes: the home set is always reachable again."""


@dataclass(frozen=True)
class NotHomeSpace:
    """Definite no: `culprit` is reachable from the start set but can never
    reach the home set.  `chain` explains how (absent for brute-force
    results)."""

    culprit: Vector
    chain: Optional[WitnessChain] = None


@dataclass(frozen=True)
class Unknown:
    """The analysis hit an inconclusive reachability answer."""

    reason: str


HomeSpaceVerdict = Union[HomeSpace, NotHomeSpace, Unknown]


# ---------------------------------------------------------------------------
# the staged chain net


@dataclass(frozen=True)
class FreezeRole:
    """What a staged-net action does, for decoding traces back to chains.

    kind is one of select, pump, enter, run, checkpoint, base, period,
    collapse; stage and index locate it (index is the original action for
    run actions, the component for select/base/period/collapse).
    """

    kind: str
    stage: int = -1
    index: int = -1


@dataclass(frozen=True)
class FreezeNet:
    net: PetriNet
    source: Vector
    target: SemilinearSet
    roles: tuple[FreezeRole, ...]
    original_dim: int
    stages: int


def build_freeze_net(
    net: PetriNet, start: SemilinearSet, witnesses: tuple[SemilinearSet, ...]
) -> FreezeNet:
    """Net whose target is reachable exactly when a witness chain exists.

    Place layout: m+1 banks of the original places (bank 0 first), stage
    places s_0..s_m, an init place, one staging place per start component,
    then per bank a pending place, one place per witness component, and a
    done place.
    """
    d = net.dim
    m = len(witnesses)
    if m < 1:
        raise ValueError("chain net needs at least one witness")
    if not start.components:
        raise ValueError("chain net needs a nonempty start set")
    banks = m + 1
    s0 = banks * d
    init = s0 + m + 1
    init_c0 = init + 1
    xc = len(start.components)
    pos = init_c0 + xc
    pend: list[int] = []
    comp_base: list[int] = []
    done: list[int] = []
    for i in range(1, m + 1):
        pend.append(pos)
        pos += 1
        comp_base.append(pos)
        pos += len(witnesses[i - 1].components)
        done.append(pos)
        pos += 1
    dim = pos

    def place(v: dict[int, int]) -> Vector:
        out = [0] * dim
        for i, x in v.items():
            out[i] = x
        return tuple(out)

    def on_banks(v: Vector, which: list[int], extra: dict[int, int]) -> Vector:
        out = [0] * dim
        for b in which:
            for i, x in enumerate(v):
                out[b * d + i] += x
        for i, x in extra.items():
            out[i] += x
        return tuple(out)

    all_banks = list(range(banks))
    actions: list[Action] = []
    roles: list[FreezeRole] = []

    for c, comp in enumerate(start.components):
        actions.append(
            Action(
                place({init: 1}),
                on_banks(comp.base, all_banks, {init_c0 + c: 1}),
                f"@choose{c}",
            )
        )
        roles.append(FreezeRole("select", index=c))
        for pi, p in enumerate(comp.periods):
            actions.append(
                Action(
                    place({init_c0 + c: 1}),
                    on_banks(p, all_banks, {init_c0 + c: 1}),
                    f"@grow{c}_{pi}",
                )
            )
            roles.append(FreezeRole("pump", index=c))
        actions.append(
            Action(place({init_c0 + c: 1}), place({s0: 1}), f"@enter{c}")
        )
        roles.append(FreezeRole("enter", index=c))

    for j in range(m):
        live = [0] + list(range(j + 1, banks))
        for ai, a in enumerate(net.actions):
            actions.append(
                Action(
                    on_banks(a.pre, live, {s0 + j: 1}),
                    on_banks(a.post, live, {s0 + j: 1}),
                    f"@run{j}_{a.name}",
                )
            )
            roles.append(FreezeRole("run", stage=j, index=ai))

    for i in range(1, m + 1):
        actions.append(
            Action(
                place({s0 + i - 1: 1}),
                place({s0 + i: 1, pend[i - 1]: 1}),
                f"@freeze{i}",
            )
        )
        roles.append(FreezeRole("checkpoint", stage=i))
        for c, comp in enumerate(witnesses[i - 1].components):
            vcomp = comp_base[i - 1] + c
            actions.append(
                Action(
                    on_banks(comp.base, [i], {pend[i - 1]: 1}),
                    place({vcomp: 1}),
                    f"@claim{i}_{c}",
                )
            )
            roles.append(FreezeRole("base", stage=i, index=c))
            for pi, p in enumerate(comp.periods):
                actions.append(
                    Action(
                        on_banks(p, [i], {vcomp: 1}),
                        place({vcomp: 1}),
                        f"@settle{i}_{c}_{pi}",
                    )
                )
                roles.append(FreezeRole("period", stage=i, index=c))
            actions.append(
                Action(place({vcomp: 1}), place({done[i - 1]: 1}), f"@seal{i}_{c}")
            )
            roles.append(FreezeRole("collapse", stage=i, index=c))

    source = place({init: 1})
    target_base = place({s0 + m: 1, **{dn: 1 for dn in done}})
    target_periods = tuple(place({i: 1}) for i in range(d))
    target = SemilinearSet((LinearSet(target_base, target_periods),))
    return FreezeNet(
        PetriNet(dim, tuple(actions)), source, target, tuple(roles), d, m
    )


def decode_chain(freeze: FreezeNet, pair_trace: Trace) -> WitnessChain:
    """Reconstruct the chain from a trace of the wrapped staged net.

    The pair net produced by the reachability reduction prepends one loading
    action (the query source has no periods) and appends the commit and
    absorption actions, so staged-net actions sit at offset 1.
    """
    d = freeze.original_dim
    n_actions = len(freeze.net.actions)
    config = freeze.source
    start: Vector | None = None
    segments: list[list[int]] = [[] for _ in range(freeze.stages)]
    snapshots: list[Vector] = []
    for step in pair_trace.steps:
        if step == 0:
            continue
        if step > n_actions:
            break
        fi = step - 1
        role = freeze.roles[fi]
        config = fire(freeze.net, config, fi)
        if role.kind == "enter":
            start = config[:d]
        elif role.kind == "run":
            segments[role.stage].append(role.index)
        elif role.kind == "checkpoint":
            snapshots.append(config[:d])
    if start is None:
        raise ValueError("trace never entered the running phase")
    return WitnessChain(
        start, tuple(tuple(seg) for seg in segments), tuple(snapshots)
    )


# ---------------------------------------------------------------------------
# the decision procedure

_witness_cache: dict[
    tuple[PetriNet, LinearSet, Budget], tuple[WitnessResult, dict[str, int]]
] = {}


def _component_witness(
    net: PetriNet,
    component: LinearSet,
    budget: Budget,
    stats: CallStats | None,
) -> WitnessResult:
    """Memoized witness construction.

    The recorded call counters are replayed on cache hits, so repeated checks
    report identical provenance whether or not the cache was warm.
    """
    key = (net, component, budget)
    hit = _witness_cache.get(key)
    if hit is None:
        probe = CallStats()
        try:
            result = witness_linear(net, component, budget, probe)
        finally:
            if stats is not None:
                for name, count in probe.snapshot().items():
                    stats.bump(name, count)
        _witness_cache[key] = (result, probe.snapshot())
        return result
    result, recorded = hit
    if stats is not None:
        for name, count in recorded.items():
            stats.bump(name, count)
    return result


def check(
    q: HomeSpaceQuery, budget: Budget = Budget(), stats: CallStats | None = None
) -> HomeSpaceVerdict:
    """Decide the home-space property, or report why it stayed open."""
    if stats is not None:
        stats.bump("homespace_checks")
    if not q.start.components:
        return HomeSpace()
    if not q.home.components:
        x0 = q.start.components[0].base
        return NotHomeSpace(x0, WitnessChain(x0, (), ()))

    witnesses: list[SemilinearSet] = []
    for component in q.home.components:
        try:
            result = _component_witness(q.net, component, budget, stats)
        except Undecided as err:
            return Unknown(f"witness construction blocked on box {err.blocked_on}")
        if not result.witness.components:
            # nothing ever escapes this component, so the home set is safe
            return HomeSpace()
        witnesses.append(result.witness)

    freeze = build_freeze_net(q.net, q.start, tuple(witnesses))
    verdict = decide(
        ReachQuery(freeze.net, singleton(freeze.source), freeze.target),
        budget,
        stats,
    )
    if isinstance(verdict, Reachable):
        chain = decode_chain(freeze, verdict.trace)
        return NotHomeSpace(chain.snapshots[-1], chain)
    if isinstance(verdict, Unreachable):
        return HomeSpace()
    assert isinstance(verdict, ReachUnknown)
    return Unknown(f"chain reachability inconclusive ({verdict.reason})")


def brute_force_check(
    net: PetriNet,
    configs: tuple[Vector, ...],
    home: SemilinearSet,
    node_budget: int = 100_000,
) -> HomeSpaceVerdict:
    """Reference decision by explicit state-space search.

    Only valid when the reachable space from every start configuration fits
    in the budget; returns Unknown otherwise.  NotHomeSpace reports the
    lexicographically smallest culprit and carries no chain.
    """
    from .nets import reachable_set_bounded, try_fire

    states: set[Vector] = set()
    for x0 in configs:
        closure, complete = reachable_set_bounded(net, x0, node_budget)
        if not complete:
            return Unknown("state space exceeds the node budget")
        states.update(closure)
    inside = [s for s in states if member(home, s)]
    preds: dict[Vector, list[Vector]] = {s: [] for s in states}
    for s in states:
        for a in net.actions:
            t = try_fire(s, a)
            if t is not None and t in preds:
                preds[t].append(s)
    good = set(inside)
    frontier = list(inside)
    while frontier:
        t = frontier.pop()
        for s in preds[t]:
            if s not in good:
                good.add(s)
                frontier.append(s)
    bad = states - good
    if not bad:
        return HomeSpace()
    return NotHomeSpace(min(bad))
