"""Semilinear witness sets certifying that a target set is not a home space.

For a target linear set L = { b + u_1 p_1 + ... + u_k p_k } the witness of a
net is a semilinear set W, computed from reachability queries only, with two
properties that make it the crux of the home-space decision:

  soundness     every member of W can never reach L, and
  completeness  every configuration that can never reach L can reach W.

So L fails to be a home space from a start set exactly when W is reachable
from it.  The construction runs on presentations (y, u) in N^(d+k) of
configurations y + sum u_j p_j: budgeted-decrease analysis shows that from
any presentation one can fall down to a stable one (the residual y cannot
shrink any further), and stable presentations with a residual heavier than b
can never enter L, while the finitely many light residuals are analyzed
exactly, coefficient space by coefficient space.

All upward-closed sets involved are extracted as minimal bases through the
box-oracle refinement in `upward`; every box query compiles to one
reachability call on a gadget net.  Inconclusive reachability surfaces as the
`Undecided` exception, never as a wrong set.
"""
from __future__ import annotations

from dataclasses import dataclass

from .nets import Action, PetriNet
from .reach import Budget, CallStats, ReachQuery, Reachable, Unknown, Unreachable, decide
from .semilinear import (
    ConstraintSystem,
    LinearSet,
    MinBasis,
    SemilinearSet,
    attach_prefix,
    complement_upward,
    constraints_to_semilinear,
    fiber,
    image_affine,
    intersect,
    singleton,
    union,
)
from .upward import Answer, Inconclusive, Undecided, VjOutcome, min_basis
from .vectors import (
    PartialVector,
    Vector,
    add,
    concrete_pv,
    norm,
    scale,
    unit,
    vectors_norm_at_most,
    zero,
)

_CALL_FLOOR = 2000
_ASSUMED_CALLS_PER_RUN = 24


def presented(y: Vector, u: Vector, periods: tuple[Vector, ...]) -> Vector:
    """The configuration y + sum u_j * periods_j."""
    out = y
    for c, p in zip(u, periods):
        out = add(out, scale(c, p))
    return out


def presentation_rows(d: int, periods: tuple[Vector, ...]) -> tuple[Vector, ...]:
    """Rows of the linear map (y, u) -> y + sum u_j * periods_j."""
    return tuple(
        tuple(unit(d, i)) + tuple(p[i] for p in periods) for i in range(d)
    )


def _per_call_budget(budget: Budget, runs: int) -> Budget:
    per_run = max(1, budget.node_budget // max(1, runs))
    return Budget(
        max(_CALL_FLOOR, per_run // _ASSUMED_CALLS_PER_RUN), budget.time_budget_secs
    )


# ---------------------------------------------------------------------------
# gadget construction
#
# Layout of a decrease gadget over a net of dimension d: places 0..d-1 mirror
# the net, place d is the budget counter, then three phase places (fill, run,
# drain).  The budget counts exactly the tokens of the residual part loaded
# into the mirror, the run phase fires the original actions, and the drain
# phase must consume the full mirror: one budget token per plain token, whole
# periods for free.  The drained end configuration keeps a positive budget
# exactly when the run lost residual weight.


def _gadget(
    net: PetriNet,
    y_box: PartialVector,
    free_loads: tuple[Vector, ...],
    fixed_free_load: Vector,
    strip_periods: tuple[Vector, ...],
) -> tuple[PetriNet, Vector, SemilinearSet]:
    d = net.dim
    big = d + 4
    bud, fill, run, drain = d, d + 1, d + 2, d + 3

    def wide(v: Vector, extra: dict[int, int]) -> Vector:
        out = list(v) + [0, 0, 0, 0]
        for i, x in extra.items():
            out[i] = x
        return tuple(out)

    actions: list[Action] = []
    for i in y_box.omega_positions():
        pre = wide(zero(d), {fill: 1})
        post = wide(unit(d, i), {fill: 1, bud: 1})
        actions.append(Action(pre, post, f"@add{i}"))
    for j, p in enumerate(free_loads):
        pre = wide(zero(d), {fill: 1})
        post = wide(p, {fill: 1})
        actions.append(Action(pre, post, f"@addp{j}"))
    fixed = y_box.fixed_part()
    actions.append(
        Action(
            wide(zero(d), {fill: 1}),
            wide(add(fixed, fixed_free_load), {run: 1, bud: norm(fixed)}),
            "@load",
        )
    )
    for a in net.actions:
        actions.append(Action(wide(a.pre, {run: 1}), wide(a.post, {run: 1}), a.name))
    actions.append(Action(wide(zero(d), {run: 1}), wide(zero(d), {drain: 1}), "@halt"))
    for i in range(d):
        pre = wide(unit(d, i), {drain: 1, bud: 1})
        actions.append(Action(pre, wide(zero(d), {drain: 1}), f"@shed{i}"))
    for j, p in enumerate(strip_periods):
        pre = wide(p, {drain: 1})
        actions.append(Action(pre, wide(zero(d), {drain: 1}), f"@strip{j}"))

    source = wide(zero(d), {fill: 1})
    target_base = wide(zero(d), {drain: 1, bud: 1})
    target = SemilinearSet((LinearSet(target_base, (tuple(unit(big, bud)),)),))
    return PetriNet(big, tuple(actions)), source, target


def _answer(verdict) -> Answer:
    if isinstance(verdict, Reachable):
        return Answer.YES
    if isinstance(verdict, Unreachable):
        return Answer.NO
    return Answer.UNKNOWN


class NormDecreaseOracle:
    """Box oracle for { x : some z reachable from x has |z| < |x| }."""

    def __init__(
        self, net: PetriNet, budget: Budget, stats: CallStats | None = None
    ) -> None:
        self.net = net
        self.budget = budget
        self.stats = stats
        self.dim = net.dim

    def query(self, pv: PartialVector) -> Answer:
        if self.stats is not None:
            self.stats.bump("decrease_queries")
        gadget, source, target = _gadget(self.net, pv, (), zero(self.net.dim), ())
        verdict = decide(
            ReachQuery(gadget, singleton(source), target), self.budget, self.stats
        )
        return _answer(verdict)


class BaseDecreaseOracle:
    """Box oracle over presentations (y, u) in N^(d+k) for the set

        { (y, u) : y + P u can reach some w + P v with |w| < |y| }.

    The budget place counts only the residual y; period loads, and period
    strips during draining, are free.
    """

    def __init__(
        self,
        net: PetriNet,
        periods: tuple[Vector, ...],
        budget: Budget,
        stats: CallStats | None = None,
    ) -> None:
        self.net = net
        self.periods = tuple(periods)
        self.budget = budget
        self.stats = stats
        self.dim = net.dim + len(self.periods)

    def _trivially_in(self, y_box: PartialVector) -> bool:
        # a residual dominating a nonzero period sheds it at no cost
        for p in self.periods:
            if not any(x > 0 for x in p):
                continue
            ok = True
            for i, e in enumerate(y_box.entries):
                if isinstance(e, int) and e < p[i]:
                    ok = False
                    break
            if ok:
                return True
        return False

    def query(self, pv: PartialVector) -> Answer:
        if self.stats is not None:
            self.stats.bump("decrease_queries")
        d = self.net.dim
        y_box = PartialVector(pv.entries[:d])
        u_box = pv.entries[d:]
        if self._trivially_in(y_box):
            if self.stats is not None:
                self.stats.bump("trivial_yes")
            return Answer.YES
        free_loads = tuple(
            self.periods[j] for j, e in enumerate(u_box) if not isinstance(e, int)
        )
        fixed_free = zero(d)
        for j, e in enumerate(u_box):
            if isinstance(e, int):
                fixed_free = add(fixed_free, scale(e, self.periods[j]))
        gadget, source, target = _gadget(
            self.net, y_box, free_loads, fixed_free, self.periods
        )
        verdict = decide(
            ReachQuery(gadget, singleton(source), target), self.budget, self.stats
        )
        return _answer(verdict)


class CoefficientReachOracle:
    """Box oracle over N^k for { u : y + P u can reach the target set }."""

    def __init__(
        self,
        net: PetriNet,
        target: LinearSet,
        y: Vector,
        budget: Budget,
        stats: CallStats | None = None,
    ) -> None:
        self.net = net
        self.target = target
        self.y = tuple(y)
        self.budget = budget
        self.stats = stats
        self.dim = len(target.periods)

    def query(self, pv: PartialVector) -> Answer:
        if self.stats is not None:
            self.stats.bump("coeff_queries")
        base = self.y
        loose: list[Vector] = []
        for j, e in enumerate(pv.entries):
            if isinstance(e, int):
                base = add(base, scale(e, self.target.periods[j]))
            else:
                loose.append(self.target.periods[j])
        source = SemilinearSet((LinearSet(base, tuple(loose)),))
        verdict = decide(
            ReachQuery(self.net, source, SemilinearSet((self.target,))),
            self.budget,
            self.stats,
        )
        return _answer(verdict)


def decrease_min_basis(
    net: PetriNet, budget: Budget = Budget(), stats: CallStats | None = None
) -> VjOutcome:
    """Minimal basis of the configurations that can strictly lose weight."""
    return min_basis(NormDecreaseOracle(net, _per_call_budget(budget, 1), stats))


def base_decrease_min_basis(
    net: PetriNet,
    periods: tuple[Vector, ...],
    budget: Budget = Budget(),
    stats: CallStats | None = None,
) -> VjOutcome:
    """Minimal basis of the presentations whose residual can strictly shrink."""
    return min_basis(
        BaseDecreaseOracle(net, periods, _per_call_budget(budget, 1), stats)
    )


# ---------------------------------------------------------------------------
# witness sets


@dataclass(frozen=True)
class WitnessProvenance:
    """Intermediate bases behind a witness, for reporting and debugging."""

    decrease_basis: MinBasis
    coeff_bases: tuple[tuple[Vector, MinBasis], ...]
    pieces: int


@dataclass(frozen=True)
class WitnessResult:
    witness: SemilinearSet
    provenance: WitnessProvenance


def _norm_at_least(n: int, weighted: int, bound: int) -> SemilinearSet:
    """{ x in N^n : x_0 + ... + x_(weighted-1) >= bound } as a semilinear set."""
    row = tuple(1 if i < weighted else 0 for i in range(n))
    return constraints_to_semilinear(ConstraintSystem(n, (), ((row, bound),)))


def witness_singleton(
    net: PetriNet,
    b: Vector,
    budget: Budget = Budget(),
    stats: CallStats | None = None,
) -> WitnessResult:
    """Witness for the one-element target set { b }.

    Raises Undecided when a required reachability answer is inconclusive.
    """
    d = net.dim
    if len(b) != d:
        raise ValueError(f"target {b} does not match net dimension {d}")
    call_budget = _per_call_budget(budget, 2)
    out = min_basis(NormDecreaseOracle(net, call_budget, stats))
    if isinstance(out, Inconclusive):
        raise Undecided(out.blocked_on)
    stable = complement_upward(out.basis)
    pieces = _norm_at_least(d, d, norm(b) + 1)
    for x in vectors_norm_at_most(d, norm(b)):
        verdict = decide(
            ReachQuery(net, singleton(x), singleton(b)), call_budget, stats
        )
        if isinstance(verdict, Unknown):
            raise Undecided(concrete_pv(x))
        if isinstance(verdict, Unreachable):
            pieces = union(pieces, singleton(x))
    w = intersect(stable, pieces)
    return WitnessResult(w, WitnessProvenance(out.basis, (), len(w.components)))


def witness_linear(
    net: PetriNet,
    target: LinearSet,
    budget: Budget = Budget(),
    stats: CallStats | None = None,
) -> WitnessResult:
    """Witness for a linear target set, computed on presentation space.

    Handles targets without periods as the k = 0 case of the same
    construction rather than delegating to witness_singleton.
    """
    d = net.dim
    if target.dim != d:
        raise ValueError(f"target of dimension {target.dim} does not match net ({d})")
    k = len(target.periods)
    b = target.base
    ys = list(vectors_norm_at_most(d, norm(b)))
    call_budget = _per_call_budget(budget, 1 + len(ys))

    out = min_basis(BaseDecreaseOracle(net, target.periods, call_budget, stats))
    if isinstance(out, Inconclusive):
        raise Undecided(out.blocked_on)
    stable = complement_upward(out.basis)

    pieces = intersect(stable, _norm_at_least(d + k, d, norm(b) + 1))
    coeff_bases: list[tuple[Vector, MinBasis]] = []
    for y in ys:
        out_y = min_basis(CoefficientReachOracle(net, target, y, call_budget, stats))
        if isinstance(out_y, Inconclusive):
            raise Undecided(out_y.blocked_on)
        coeff_bases.append((y, out_y.basis))
        cannot_reach = complement_upward(out_y.basis)
        stable_at_y = fiber(stable, y)
        pieces = union(
            pieces, attach_prefix(y, intersect(stable_at_y, cannot_reach))
        )

    w = image_affine(pieces, presentation_rows(d, target.periods), zero(d))
    return WitnessResult(
        w, WitnessProvenance(out.basis, tuple(coeff_bases), len(w.components))
    )


def stable_presentation_set(
    net: PetriNet,
    target: LinearSet,
    budget: Budget = Budget(),
    stats: CallStats | None = None,
) -> SemilinearSet:
    """Configurations presentable with a residual that can never shrink."""
    out = base_decrease_min_basis(net, target.periods, budget, stats)
    if isinstance(out, Inconclusive):
        raise Undecided(out.blocked_on)
    stable = complement_upward(out.basis)
    return image_affine(
        stable, presentation_rows(net.dim, target.periods), zero(net.dim)
    )
