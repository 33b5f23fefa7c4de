"""Petri nets as vector addition systems: actions, firing, bounded exploration.

A net of dimension d has actions (pre, post) with pre, post in N^d.  An action
fires at configuration x when x >= pre, producing x - pre + post.  All values
are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass

from .vectors import Vector, add, leq, sub


class NotEnabled(Exception):
    """An action's precondition is not met at the given configuration."""

    def __init__(self, name: str, config: Vector, position: int | None = None):
        self.name = name
        self.config = config
        self.position = position
        where = f" at step {position}" if position is not None else ""
        super().__init__(f"action {name!r} not enabled at {config}{where}")


class IndexOutOfRange(IndexError):
    """An action index does not name an action of the net."""


@dataclass(frozen=True)
class Action:
    """One net action: consume pre, then produce post."""

    pre: Vector
    post: Vector
    name: str

    def __post_init__(self) -> None:
        if len(self.pre) != len(self.post):
            raise ValueError(
                f"action {self.name!r}: pre has length {len(self.pre)}, "
                f"post has length {len(self.post)}"
            )
        if any(x < 0 for x in self.pre) or any(x < 0 for x in self.post):
            raise ValueError(f"action {self.name!r} has a negative entry")
        object.__setattr__(self, "pre", tuple(self.pre))
        object.__setattr__(self, "post", tuple(self.post))

    @property
    def delta(self) -> Vector:
        return tuple(b - a for a, b in zip(self.pre, self.post))


@dataclass(frozen=True)
class PetriNet:
    """A dimension and a finite list of actions, addressed by index."""

    dim: int
    actions: tuple[Action, ...] = ()

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"net dimension must be at least 1, got {self.dim}")
        names = [a.name for a in self.actions]
        if len(set(names)) != len(names):
            raise ValueError("duplicate action names")
        for a in self.actions:
            if len(a.pre) != self.dim:
                raise ValueError(
                    f"action {a.name!r} has arity {len(a.pre)}, net has dimension {self.dim}"
                )
        object.__setattr__(self, "actions", tuple(self.actions))

    @staticmethod
    def from_vectors(dim: int, pairs: list[tuple[Vector, Vector]]) -> "PetriNet":
        """Build a net with synthesized action names a0, a1, ..."""
        return PetriNet(
            dim,
            tuple(Action(pre, post, f"a{i}") for i, (pre, post) in enumerate(pairs)),
        )


@dataclass(frozen=True)
class Trace:
    """A firing sequence with its start and end configurations."""

    start: Vector
    steps: tuple[int, ...]
    end: Vector


def _check_config(net: PetriNet, c: Vector) -> None:
    if len(c) != net.dim:
        raise ValueError(f"configuration {c} does not have dimension {net.dim}")
    if any(x < 0 for x in c):
        raise ValueError(f"configuration {c} has a negative coordinate")


def _action(net: PetriNet, i: int) -> Action:
    if not 0 <= i < len(net.actions):
        raise IndexOutOfRange(f"action index {i} out of range for {len(net.actions)} actions")
    return net.actions[i]


def enabled(net: PetriNet, c: Vector, i: int) -> bool:
    return leq(_action(net, i).pre, c)


def enabled_actions(net: PetriNet, c: Vector) -> list[int]:
    return [i for i, a in enumerate(net.actions) if leq(a.pre, c)]


def fire(net: PetriNet, c: Vector, i: int) -> Vector:
    """Fire action i at c; raises NotEnabled when the precondition fails."""
    _check_config(net, c)
    a = _action(net, i)
    if not leq(a.pre, c):
        raise NotEnabled(a.name, c)
    return add(sub(c, a.pre), a.post)


def fire_sequence(net: PetriNet, c: Vector, seq: tuple[int, ...] | list[int]) -> Trace:
    """Fire a sequence of action indices; NotEnabled carries the failing position."""
    _check_config(net, c)
    cur = tuple(c)
    for pos, i in enumerate(seq):
        a = _action(net, i)
        if not leq(a.pre, cur):
            raise NotEnabled(a.name, cur, pos)
        cur = add(sub(cur, a.pre), a.post)
    return Trace(tuple(c), tuple(seq), cur)


def reachable_set_bounded(
    net: PetriNet, start: Vector, node_budget: int
) -> tuple[tuple[Vector, ...], bool]:
    """Breadth-first reachability set from start, capped at node_budget configurations.

    Returns the visited configurations in lexicographic order and a flag that
    is True exactly when the whole reachability set was exhausted.
    """
    _check_config(net, start)
    if node_budget < 1:
        raise ValueError("node budget must be at least 1")
    start = tuple(start)
    visited: set[Vector] = {start}
    queue: list[Vector] = [start]
    head = 0
    complete = True
    while head < len(queue):
        cur = queue[head]
        head += 1
        for a in net.actions:
            nxt = try_fire(cur, a)
            if nxt is None or nxt in visited:
                continue
            if len(visited) >= node_budget:
                complete = False
                break
            visited.add(nxt)
            queue.append(nxt)
        if not complete:
            break
    return tuple(sorted(visited)), complete


def try_fire(c: Vector, a: Action) -> Vector | None:
    """Fire without enabledness errors: None when the precondition fails."""
    out = []
    for x, p, q in zip(c, a.pre, a.post):
        if x < p:
            return None
        out.append(x - p + q)
    return tuple(out)
