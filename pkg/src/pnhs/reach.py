"""Three-valued reachability between semilinear sets of configurations.

A query asks whether some member of a source set can reach some member of a
target set.  Each (source component, target component) pair is reduced to a
single-pair reachability instance on an augmented net, then a portfolio of
backends runs in a fixed order: firing-count equation infeasibility (cheap
refutation), Karp-Miller coverability (refutation plus boundedness
information), the firing-count equation restricted to actions whose
preconditions are provably coverable (a complete coverability structure lets
dead actions be removed, which often breaks feasibility), replay of a
firing-count solution into an enabled sequence (finds deep traces that
breadth-first search would miss), and breadth-first search (exact on exhausted
state spaces).  Definite answers are always sound; budget exhaustion and
backend gaps yield Unknown, never a guess.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Union

from .nets import Action, PetriNet, Trace
from .semilinear import (
    ConstraintSystem,
    LinearSet,
    SemilinearSet,
    find_solution,
    has_solution,
)
from .vectors import OMEGA, Entry, Vector, zero


@dataclass(frozen=True)
class Budget:
    """Per-query resource cap: explored nodes and wall-clock seconds."""

    node_budget: int = 100_000
    time_budget_secs: float = 10.0

    def __post_init__(self) -> None:
        if self.node_budget < 1:
            raise ValueError("node budget must be at least 1")
        if self.time_budget_secs <= 0:
            raise ValueError("time budget must be positive")


class CallStats:
    """Mutable counters for provenance output; keys are short snake_case names."""

    def __init__(self) -> None:
        self.counters: dict[str, int] = {}

    def bump(self, key: str, n: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + n

    def get(self, key: str) -> int:
        return self.counters.get(key, 0)

    def snapshot(self) -> dict[str, int]:
        return dict(sorted(self.counters.items()))


@dataclass(frozen=True)
class ReachQuery:
    """Can some configuration of `source` reach some configuration of `target`?"""

    net: PetriNet
    source: SemilinearSet
    target: SemilinearSet

    def __post_init__(self) -> None:
        for s in (self.source, self.target):
            if s.dim is not None and s.dim != self.net.dim:
                raise ValueError(
                    f"set of dimension {s.dim} does not match net dimension {self.net.dim}"
                )


@dataclass(frozen=True)
class Reachable:
    """Witnessed by a replayable trace over the augmented pair net."""

    trace: Trace
    source_component: int = 0
    target_component: int = 0


@dataclass(frozen=True)
class Unreachable:
    """certificate is one of exhausted-state-space, state-equation-infeasible,
    pruned-equation-infeasible, not-coverable; details holds the per-pair
    certificates when several component pairs were refuted."""

    certificate: str
    details: tuple[str, ...] = ()


@dataclass(frozen=True)
class Unknown:
    """reason is budget-exhausted or backend-gap."""

    reason: str


ReachVerdict = Union[Reachable, Unreachable, Unknown]


@dataclass(frozen=True)
class PairInstance:
    """Single-pair reachability instance produced by reduce_to_pair.

    Place layout: original places 0..d-1, then the three control places
    (loading, running, draining).  switch_pre is the precondition of the one
    action that leaves the running phase; covering it is necessary for success.
    """

    net: PetriNet
    initial: Vector
    final: Vector
    switch_pre: Vector
    original_dim: int
    original_action_count: int


def reduce_to_pair(net: PetriNet, src: LinearSet, tgt: LinearSet) -> PairInstance:
    """Reduce linear-to-linear reachability to one configuration pair.

    The augmented net loads an arbitrary member of src (base plus pumped
    periods), runs the original actions, then commits to the target by paying
    its base and draining target periods.  The final configuration is
    reachable exactly when some member of src reaches some member of tgt.
    """
    d = net.dim
    big = d + 3
    c_src, c_run, c_tgt = d, d + 1, d + 2

    def wide(v: Vector, extra: dict[int, int]) -> Vector:
        out = list(v) + [0, 0, 0]
        for i, x in extra.items():
            out[i] = x
        return tuple(out)

    actions: list[Action] = []
    for j, p in enumerate(src.periods):
        actions.append(
            Action(wide(zero(d), {c_src: 1}), wide(p, {c_src: 1}), f"@pump{j}")
        )
    actions.append(Action(wide(zero(d), {c_src: 1}), wide(src.base, {c_run: 1}), "@start"))
    for a in net.actions:
        actions.append(
            Action(wide(a.pre, {c_run: 1}), wide(a.post, {c_run: 1}), a.name)
        )
    switch_pre = wide(tgt.base, {c_run: 1})
    actions.append(Action(switch_pre, wide(zero(d), {c_tgt: 1}), "@switch"))
    for j, p in enumerate(tgt.periods):
        actions.append(
            Action(wide(p, {c_tgt: 1}), wide(zero(d), {c_tgt: 1}), f"@drain{j}")
        )

    return PairInstance(
        net=PetriNet(big, tuple(actions)),
        initial=wide(zero(d), {c_src: 1}),
        final=wide(zero(d), {c_tgt: 1}),
        switch_pre=switch_pre,
        original_dim=d,
        original_action_count=len(net.actions),
    )


# ---------------------------------------------------------------------------
# backends


def _firing_system(
    pair: PairInstance, actions: tuple[int, ...] | None = None
) -> ConstraintSystem:
    """initial + sum_j count_j * delta_j == final, over the given action
    indices (all of them by default)."""
    net = pair.net
    idx = tuple(range(len(net.actions))) if actions is None else actions
    eqs = []
    for i in range(net.dim):
        coeffs = tuple(net.actions[j].delta[i] for j in idx)
        eqs.append((coeffs, pair.final[i] - pair.initial[i]))
    return ConstraintSystem(len(idx), tuple(eqs))


def state_equation_backend(
    pair: PairInstance, node_cap: int | None = None
) -> ReachVerdict:
    """Refute via infeasibility of the firing-count equation.

    initial + sum_i count_i * delta_i = final must admit a nonnegative integer
    solution for the final configuration to be reachable; nothing follows from
    feasibility.
    """
    feasible = has_solution(_firing_system(pair), node_cap=node_cap)
    if feasible is None:
        return Unknown("budget-exhausted")
    if not feasible:
        return Unreachable("state-equation-infeasible")
    return Unknown("backend-gap")


OmegaVector = tuple[Entry, ...]


def _omega_enabled(m: OmegaVector, pre: Vector) -> bool:
    return all(x is OMEGA or x >= p for x, p in zip(m, pre))


def _omega_fire(m: OmegaVector, a: Action) -> OmegaVector:
    return tuple(
        x if x is OMEGA else x - p + q for x, p, q in zip(m, a.pre, a.post)
    )


def _omega_leq(a: OmegaVector, b: OmegaVector) -> bool:
    for x, y in zip(a, b):
        if y is OMEGA:
            continue
        if x is OMEGA or x > y:
            return False
    return True


def _omega_covers(m: OmegaVector, t: Vector) -> bool:
    return all(x is OMEGA or x >= v for x, v in zip(m, t))


@dataclass
class KarpMillerResult:
    """labels of the coverability structure, completeness, boundedness."""

    labels: list[OmegaVector]
    complete: bool

    @property
    def bounded(self) -> bool | None:
        """True/False when the structure is complete, None otherwise."""
        if any(OMEGA in lab for lab in self.labels):
            return False
        return True if self.complete else None

    def coverable(self, t: Vector) -> bool | None:
        """Exact when complete; None when incomplete and no cover was found."""
        if any(_omega_covers(lab, t) for lab in self.labels):
            return True
        return False if self.complete else None


def karp_miller(
    net: PetriNet,
    start: Vector,
    node_budget: int,
    deadline: float | None = None,
    stats: CallStats | None = None,
) -> KarpMillerResult:
    """Karp-Miller coverability structure with ancestor acceleration.

    Nodes with a label already expanded elsewhere become leaves; acceleration
    compares against tree ancestors only, which keeps the construction sound
    for coverability and boundedness.
    """
    root: OmegaVector = tuple(start)
    labels: list[OmegaVector] = []
    parents: list[int] = []
    seen: set[OmegaVector] = set()
    queue: deque[tuple[OmegaVector, int]] = deque([(root, -1)])
    complete = True
    expanded = 0
    while queue:
        if expanded >= node_budget:
            complete = False
            break
        if deadline is not None and expanded % 128 == 0 and time.monotonic() > deadline:
            complete = False
            break
        label, parent = queue.popleft()
        if label in seen:
            continue
        seen.add(label)
        idx = len(labels)
        labels.append(label)
        parents.append(parent)
        expanded += 1
        if stats is not None:
            stats.bump("km_nodes")
        for a in net.actions:
            if not _omega_enabled(label, a.pre):
                continue
            child = _omega_fire(label, a)
            # accelerate against strictly dominated ancestors until stable
            changed = True
            while changed:
                changed = False
                anc = idx
                while anc != -1:
                    lab = labels[anc]
                    if lab != child and _omega_leq(lab, child):
                        new = tuple(
                            OMEGA
                            if (c is OMEGA or (l is not OMEGA and l < c))
                            else c
                            for l, c in zip(lab, child)
                        )
                        if new != child:
                            child = new
                            changed = True
                    anc = parents[anc]
            if child not in seen:
                queue.append((child, idx))
    return KarpMillerResult(labels, complete)


def coverability_backend(
    pair: PairInstance,
    node_budget: int,
    deadline: float | None = None,
    stats: CallStats | None = None,
) -> ReachVerdict:
    """Refute when the committing action's precondition (or the final
    configuration itself) is provably not coverable."""
    km = karp_miller(pair.net, pair.initial, node_budget, deadline, stats)
    if km.coverable(pair.switch_pre) is False or km.coverable(pair.final) is False:
        return Unreachable("not-coverable")
    if not km.complete:
        return Unknown("budget-exhausted")
    return Unknown("backend-gap")


def bfs_backend(
    pair: PairInstance,
    node_budget: int,
    deadline: float | None = None,
    stats: CallStats | None = None,
) -> ReachVerdict:
    """Exact forward search: a trace on success, exhaustion proves failure."""
    start = pair.initial
    final = pair.final
    if start == final:
        return Reachable(Trace(start, (), final))
    actions = pair.net.actions
    parent: dict[Vector, tuple[Vector, int] | None] = {start: None}
    queue: deque[Vector] = deque([start])
    expanded = 0
    while queue:
        if deadline is not None and expanded % 256 == 0 and time.monotonic() > deadline:
            return Unknown("budget-exhausted")
        cur = queue.popleft()
        expanded += 1
        if stats is not None:
            stats.bump("bfs_nodes")
        for i, a in enumerate(actions):
            nxt_list = []
            ok = True
            for x, p, q in zip(cur, a.pre, a.post):
                if x < p:
                    ok = False
                    break
                nxt_list.append(x - p + q)
            if not ok:
                continue
            nxt = tuple(nxt_list)
            if nxt in parent:
                continue
            parent[nxt] = (cur, i)
            if nxt == final:
                steps = []
                node = nxt
                while parent[node] is not None:
                    prev, ai = parent[node]  # type: ignore[misc]
                    steps.append(ai)
                    node = prev
                steps.reverse()
                return Reachable(Trace(start, tuple(steps), final))
            if len(parent) >= node_budget:
                return Unknown("budget-exhausted")
            queue.append(nxt)
    return Unreachable("exhausted-state-space")


def _replay(
    net: PetriNet, start: Vector, final: Vector, counts: Vector, node_cap: int
) -> Trace | None:
    """Arrange exact firing counts into an enabled sequence, if one exists.

    Depth-first over (configuration, remaining counts) states with visited
    pruning; the state graph is acyclic because the remaining total strictly
    decreases, so within the node cap a None is exact for these counts.
    """
    actions = net.actions
    seen: set[tuple[Vector, Vector]] = {(start, counts)}
    markings: list[Vector] = [start]
    remainings: list[Vector] = [counts]
    next_try: list[int] = [0]
    path: list[int] = []
    nodes = 0
    while markings:
        m = markings[-1]
        rem = remainings[-1]
        if not any(rem):
            # every full arrangement ends at start + sum counts*delta, so a
            # miss here is a miss for all orderings
            return Trace(start, tuple(path), m) if m == final else None
        advanced = False
        j = next_try[-1]
        while j < len(actions) and not advanced:
            if rem[j] > 0 and all(x >= p for x, p in zip(m, actions[j].pre)):
                a = actions[j]
                child_m = tuple(x - p + q for x, p, q in zip(m, a.pre, a.post))
                child_rem = tuple(r - 1 if k == j else r for k, r in enumerate(rem))
                key = (child_m, child_rem)
                if key not in seen:
                    seen.add(key)
                    nodes += 1
                    if nodes > node_cap:
                        return None
                    next_try[-1] = j + 1
                    markings.append(child_m)
                    remainings.append(child_rem)
                    next_try.append(0)
                    path.append(j)
                    advanced = True
            j += 1
        if not advanced:
            markings.pop()
            remainings.pop()
            next_try.pop()
            if path:
                path.pop()
    return None


# ---------------------------------------------------------------------------
# the portfolio


def _portfolio(
    pair: PairInstance,
    budget: Budget,
    deadline: float,
    stats: CallStats | None,
) -> ReachVerdict:
    # searches poll the deadline internally; equation completions are only
    # node-capped, so enforce the time budget between backends instead
    if time.monotonic() > deadline:
        return Unknown("budget-exhausted")
    nodes = budget.node_budget
    # completion nodes are an order of magnitude cheaper than search nodes,
    # and equation refutations carry most gadget queries: keep a high floor
    se_cap = max(20_000, nodes // 8)
    solution, exact = find_solution(_firing_system(pair), node_cap=se_cap)
    if stats is not None:
        stats.bump("state_equation_calls")
    if exact and solution is None:
        return Unreachable("state-equation-infeasible")
    km_cap = max(1000, nodes // 4)
    km = karp_miller(pair.net, pair.initial, km_cap, deadline, stats)
    if km.coverable(pair.switch_pre) is False or km.coverable(pair.final) is False:
        return Unreachable("not-coverable")
    if km.complete:
        live = tuple(
            j
            for j, a in enumerate(pair.net.actions)
            if km.coverable(a.pre) is not False
        )
        if len(live) < len(pair.net.actions):
            if stats is not None:
                stats.bump("pruned_equation_calls")
            feasible = has_solution(_firing_system(pair, live), node_cap=se_cap)
            if feasible is False:
                return Unreachable("pruned-equation-infeasible")
    if solution is not None:
        if stats is not None:
            stats.bump("replay_calls")
        trace = _replay(
            pair.net, pair.initial, pair.final, solution, max(4000, nodes // 8)
        )
        if trace is not None:
            return Reachable(trace)
    return bfs_backend(pair, nodes, deadline, stats)


def decide(
    q: ReachQuery, budget: Budget = Budget(), stats: CallStats | None = None
) -> ReachVerdict:
    """Three-valued answer over all (source, target) component pairs.

    Reachable wins as soon as any pair succeeds; Unreachable needs every pair
    refuted; anything else is Unknown.  An empty source or target makes the
    query vacuously Unreachable.
    """
    if stats is not None:
        stats.bump("reach_calls")
    if not q.source.components or not q.target.components:
        return Unreachable("exhausted-state-space")
    deadline = time.monotonic() + budget.time_budget_secs
    certificates: list[str] = []
    unknown: Unknown | None = None
    for si, sc in enumerate(q.source.components):
        for ti, tc in enumerate(q.target.components):
            pair = reduce_to_pair(q.net, sc, tc)
            v = _portfolio(pair, budget, deadline, stats)
            if isinstance(v, Reachable):
                return Reachable(v.trace, si, ti)
            if isinstance(v, Unreachable):
                certificates.append(v.certificate)
            elif unknown is None:
                unknown = v
    if unknown is not None:
        return unknown
    return Unreachable(certificates[0], tuple(certificates))
