"""Firing semantics and bounded exploration."""
from __future__ import annotations

import random

import pytest

from pnhs.nets import (
    IndexOutOfRange,
    NotEnabled,
    PetriNet,
    enabled_actions,
    fire,
    fire_sequence,
    reachable_set_bounded,
)
from pnhs.vectors import add, norm, sub
from util import closure, mover, producer, random_net, swap


def test_fire_moves_token():
    assert fire(mover(), (1, 0), 0) == (0, 1)


def test_fire_not_enabled():
    with pytest.raises(NotEnabled):
        fire(mover(), (0, 1), 0)


def test_fire_bad_index():
    with pytest.raises(IndexOutOfRange):
        fire(mover(), (1, 0), 3)


def test_fire_accumulates():
    net = producer()
    assert fire(net, (4, 4), 0) == (5, 4)


def test_fire_sequence_trace():
    net = swap()
    t = fire_sequence(net, (1, 0), [0, 1, 0])
    assert t.start == (1, 0)
    assert t.end == (0, 1)
    assert t.steps == (0, 1, 0)


def test_fire_sequence_empty():
    t = fire_sequence(mover(), (2, 2), [])
    assert t.end == (2, 2)


def test_fire_sequence_reports_position():
    with pytest.raises(NotEnabled) as e:
        fire_sequence(mover(), (1, 0), [0, 0])
    assert e.value.position == 1


def test_reachable_mover_complete():
    got, complete = reachable_set_bounded(mover(), (1, 0), 100)
    assert complete
    assert set(got) == {(1, 0), (0, 1)}
    assert list(got) == sorted(got)


def test_reachable_producer_budget():
    got, complete = reachable_set_bounded(producer(), (0, 0), 5)
    assert not complete
    assert len(got) == 5


def test_reachable_frozen_net():
    got, complete = reachable_set_bounded(PetriNet(3, ()), (1, 2, 3), 10)
    assert complete
    assert got == ((1, 2, 3),)


def test_enabled_actions_order():
    net = swap()
    assert enabled_actions(net, (1, 1)) == [0, 1]
    assert enabled_actions(net, (0, 0)) == []


def test_firing_matches_arithmetic_on_random_nets():
    rng = random.Random(7)
    for _ in range(50):
        net = random_net(rng)
        c = tuple(rng.randint(0, 3) for _ in range(net.dim))
        for i, a in enumerate(net.actions):
            if all(x >= p for x, p in zip(c, a.pre)):
                out = fire(net, c, i)
                assert out == add(sub(c, a.pre), a.post)
                assert norm(out) - norm(c) == norm(a.post) - norm(a.pre)
            else:
                with pytest.raises(NotEnabled):
                    fire(net, c, i)


def test_complete_sets_closed_under_firing():
    rng = random.Random(11)
    checked = 0
    while checked < 20:
        net = random_net(rng)
        c = tuple(rng.randint(0, 2) for _ in range(net.dim))
        got, complete = reachable_set_bounded(net, c, 2000)
        if not complete:
            continue
        checked += 1
        members = set(got)
        assert closure(net, c)[0] == members
        for x in members:
            for i in range(len(net.actions)):
                try:
                    assert fire(net, x, i) in members
                except NotEnabled:
                    pass
