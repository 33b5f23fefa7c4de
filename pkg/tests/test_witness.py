"""Witness construction: gadget oracles, minimal bases, witness sets."""
from __future__ import annotations

import itertools

import pytest

from pnhs.nets import PetriNet
from pnhs.reach import Budget, CallStats
from pnhs.semilinear import LinearSet, SemilinearSet, member
from pnhs.upward import Basis, Undecided, min_basis
from pnhs.vectors import OMEGA, PartialVector, vectors_in_box
from pnhs.witness import (
    BaseDecreaseOracle,
    NormDecreaseOracle,
    base_decrease_min_basis,
    decrease_min_basis,
    presentation_rows,
    presented,
    stable_presentation_set,
    witness_linear,
    witness_singleton,
)

from util import closure, consumer, drop_first, frozen, mover, producer, swap


def in_box(s: SemilinearSet, bound: int, dim: int) -> set:
    return {x for x in vectors_in_box(dim, bound) if member(s, x)}


def assert_witness_contract(net, target: SemilinearSet, w: SemilinearSet, bound=6):
    """Soundness and completeness of a witness over a finite box.

    Sound: members of w never reach the target.  Complete: configurations
    that never reach the target can reach w.  Closures must be finite.
    """
    for x in vectors_in_box(net.dim, bound):
        reach, complete = closure(net, x, cap=200_000)
        assert complete, "state space unexpectedly large"
        hits_target = any(member(target, z) for z in reach)
        if member(w, x):
            assert not hits_target, f"unsound witness member {x}"
        if not hits_target:
            assert any(member(w, z) for z in reach), f"incomplete at {x}"


def test_presented_and_rows():
    periods = ((1, 1), (0, 2))
    assert presented((1, 0), (2, 1), periods) == (3, 4)
    rows = presentation_rows(2, periods)
    assert rows == ((1, 0, 1, 0), (0, 1, 1, 2))


def test_decrease_basis_fixtures():
    out = decrease_min_basis(mover())
    assert isinstance(out, Basis) and out.basis.elements == ()
    out = decrease_min_basis(consumer())
    assert isinstance(out, Basis) and out.basis.elements == ((1, 1),)
    out = decrease_min_basis(drop_first())
    assert isinstance(out, Basis) and out.basis.elements == ((1, 0),)
    out = decrease_min_basis(producer())
    assert isinstance(out, Basis) and out.basis.elements == ()


def test_decrease_basis_matches_brute_force():
    from util import brute_decrease_set, random_net
    import random

    rng = random.Random(424242)
    checked = 0
    for _ in range(25):
        net = random_net(rng, dim_max=2, actions_max=3)
        brute = brute_decrease_set(net, bound=5, cap=60_000)
        if brute is None:
            continue
        out = decrease_min_basis(net)
        if not isinstance(out, Basis):
            continue
        got = {
            x for x in vectors_in_box(net.dim, 5) if out.basis.covers(x)
        }
        assert got == brute, f"net {net} basis {out.basis.elements}"
        checked += 1
    assert checked >= 12


def test_base_decrease_oracle_trivial_shortcut():
    stats = CallStats()
    oracle = BaseDecreaseOracle(mover(), ((1, 1),), Budget(), stats)
    from pnhs.upward import Answer

    top = PartialVector((OMEGA, OMEGA, OMEGA))
    assert oracle.query(top) is Answer.YES
    assert stats.get("trivial_yes") == 1
    # concrete residual dominating the period is also immediate
    assert oracle.query(PartialVector((1, 1, 0))) is Answer.YES
    assert stats.get("trivial_yes") == 2


def test_base_decrease_basis_mover_diagonal():
    out = base_decrease_min_basis(mover(), ((1, 1),))
    assert isinstance(out, Basis)
    # a residual covering the period sheds it; (2,0) moves one step first
    assert out.basis.elements == ((1, 1, 0), (2, 0, 0))


def test_norm_decrease_oracle_concrete_answers():
    from pnhs.upward import Answer

    oracle = NormDecreaseOracle(consumer(), Budget())
    assert oracle.query(PartialVector((1, 1))) is Answer.YES
    assert oracle.query(PartialVector((1, 0))) is Answer.NO
    assert oracle.query(PartialVector((OMEGA, 0))) is Answer.NO
    assert oracle.query(PartialVector((OMEGA, OMEGA))) is Answer.YES


def test_witness_singleton_mover():
    w = witness_singleton(mover(), (0, 1)).witness
    expect = {(0, 0)} | {x for x in vectors_in_box(2, 7) if x[0] + x[1] >= 2}
    assert in_box(w, 7, 2) == expect
    assert_witness_contract(mover(), SemilinearSet((LinearSet((0, 1), ()),)), w)


def test_witness_singleton_consumer_origin():
    w = witness_singleton(consumer(), (0, 0)).witness
    got = in_box(w, 7, 2)
    assert got == {x for x in vectors_in_box(2, 7) if min(x) == 0 and max(x) > 0}
    assert_witness_contract(consumer(), SemilinearSet((LinearSet((0, 0), ()),)), w)


def test_witness_singleton_frozen_net():
    w = witness_singleton(frozen(2), (0, 0)).witness
    assert in_box(w, 5, 2) == {x for x in vectors_in_box(2, 5) if sum(x) >= 1}


def test_witness_linear_drop_first_diagonal():
    target = LinearSet((0, 0), ((1, 1),))
    w = witness_linear(drop_first(), target).witness
    # dropping from the first place can only fix a surplus there, never a deficit
    assert in_box(w, 7, 2) == {x for x in vectors_in_box(2, 7) if x[1] > x[0]}
    assert_witness_contract(drop_first(), SemilinearSet((target,)), w)


def test_witness_linear_mover_diagonal():
    target = LinearSet((0, 0), ((1, 1),))
    w = witness_linear(mover(), target).witness
    # not every doomed configuration appears, but each can reach one that does:
    # any surplus on the first place falls to exactly one before going stale
    expect = {
        x for x in vectors_in_box(2, 7) if x[0] < x[1] or x[0] == x[1] + 1
    }
    assert in_box(w, 7, 2) == expect
    assert_witness_contract(mover(), SemilinearSet((target,)), w)


def test_witness_linear_contract_on_fixtures():
    cases = [
        (consumer(), LinearSet((1, 0), ((1, 1),))),
        (swap(), LinearSet((0, 0), ((1, 1),))),
        (drop_first(), LinearSet((1, 2), ((1, 0),))),
        (frozen(2), LinearSet((1, 1), ((0, 1),))),
    ]
    for net, target in cases:
        w = witness_linear(net, target).witness
        assert_witness_contract(net, SemilinearSet((target,)), w, bound=5)


def test_witness_linear_producer_unbounded():
    # reach(x) = { x + (t, 0) }, so the target is reachable exactly when the
    # second place is already empty; closures are infinite, check in closed form
    target = LinearSet((2, 0), ((1, 0),))
    w = witness_linear(producer(), target).witness
    for x in vectors_in_box(2, 6):
        bad = x[1] >= 1
        if member(w, x):
            assert bad, f"unsound witness member {x}"
        if bad:
            assert any(member(w, (x[0] + t, x[1])) for t in range(10)), x


def test_witness_linear_no_periods_matches_singleton():
    for net in (mover(), consumer(), drop_first(), producer()):
        for b in ((0, 0), (0, 1), (1, 1), (2, 0)):
            ws = witness_singleton(net, b).witness
            wl = witness_linear(net, LinearSet(b, ())).witness
            assert in_box(ws, 6, 2) == in_box(wl, 6, 2), (net, b)


def test_stable_presentation_set_mover():
    s = stable_presentation_set(mover(), LinearSet((0, 0), ((1, 1),)))
    expect = {
        x for x in vectors_in_box(2, 7) if x[0] <= x[1] or x[0] == x[1] + 1
    }
    assert in_box(s, 7, 2) == expect


def test_witness_provenance_contents():
    r = witness_linear(mover(), LinearSet((0, 0), ((1, 1),)))
    assert r.provenance.decrease_basis.elements == ((1, 1, 0), (2, 0, 0))
    assert len(r.provenance.coeff_bases) == 1  # only y = (0, 0)
    y, basis = r.provenance.coeff_bases[0]
    assert y == (0, 0)
    # from the origin the diagonal is reached with any coefficient
    assert basis.elements == ((0,),)
    assert r.provenance.pieces == len(r.witness.components)


def test_witness_dimension_validation():
    with pytest.raises(ValueError):
        witness_singleton(mover(), (1, 0, 0))
    with pytest.raises(ValueError):
        witness_linear(mover(), LinearSet((0, 0, 0), ()))


def test_undecided_raised_when_time_starved():
    tiny = Budget(node_budget=100_000, time_budget_secs=1e-9)
    with pytest.raises(Undecided):
        witness_singleton(producer(), (3, 0), tiny)
    with pytest.raises(Undecided):
        witness_linear(producer(), LinearSet((3, 0), ()), tiny)
