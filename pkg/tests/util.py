"""Shared helpers for tests: fixture nets and brute-force semantics oracles."""
from __future__ import annotations

import itertools
import random

from pnhs.nets import PetriNet, try_fire
from pnhs.semilinear import LinearSet, SemilinearSet
from pnhs.vectors import Vector, add, leq, norm, scale


def mover() -> PetriNet:
    """Moves one token from place 1 to place 2; total is conserved."""
    return PetriNet.from_vectors(2, [((1, 0), (0, 1))])


def consumer() -> PetriNet:
    """Consumes one token from each place."""
    return PetriNet.from_vectors(2, [((1, 1), (0, 0))])


def producer() -> PetriNet:
    """Creates tokens on place 1 from nothing."""
    return PetriNet.from_vectors(2, [((0, 0), (1, 0))])


def drop_first() -> PetriNet:
    """Consumes one token from place 1."""
    return PetriNet.from_vectors(2, [((1, 0), (0, 0))])


def swap() -> PetriNet:
    """Moves a token either way between the two places."""
    return PetriNet.from_vectors(2, [((1, 0), (0, 1)), ((0, 1), (1, 0))])


def frozen(dim: int = 2) -> PetriNet:
    """A net with no actions at all."""
    return PetriNet(dim, ())


def members_in_box(s: SemilinearSet | LinearSet, bound: int) -> set[Vector]:
    """All members of a presented set with every coordinate <= bound.

    Generated forward from the presentation: periods are nonnegative, so any
    member inside the box is reached through partial sums inside the box.
    """
    comps = s.components if isinstance(s, SemilinearSet) else (s,)
    out: set[Vector] = set()
    for c in comps:
        if any(x > bound for x in c.base):
            continue
        seen = {c.base}
        stack = [c.base]
        while stack:
            cur = stack.pop()
            out.add(cur)
            for p in c.periods:
                nxt = add(cur, p)
                if nxt not in seen and all(x <= bound for x in nxt):
                    seen.add(nxt)
                    stack.append(nxt)
    return out


def box(n: int, bound: int) -> list[Vector]:
    return [tuple(v) for v in itertools.product(range(bound + 1), repeat=n)]


def closure(net: PetriNet, start: Vector, cap: int = 200_000) -> tuple[set[Vector], bool]:
    """Plain forward closure with a node cap, independent of the library BFS."""
    seen = {tuple(start)}
    queue = [tuple(start)]
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for a in net.actions:
            nxt = try_fire(cur, a)
            if nxt is not None and nxt not in seen:
                if len(seen) >= cap:
                    return seen, False
                seen.add(nxt)
                queue.append(nxt)
    return seen, True


def brute_decrease_set(net: PetriNet, bound: int, cap: int = 100_000) -> set[Vector] | None:
    """Configurations in the box that can reach a strictly smaller total.

    None when some closure in the box cannot be exhausted.
    """
    out = set()
    for x in box(net.dim, bound):
        reach, complete = closure(net, x, cap)
        if not complete:
            return None
        if any(norm(r) < norm(x) for r in reach):
            out.add(x)
    return out


def random_net(rng: random.Random, dim_max: int = 3, actions_max: int = 4,
               entry_max: int = 2) -> PetriNet:
    d = rng.randint(1, dim_max)
    k = rng.randint(0, actions_max)
    pairs = []
    for _ in range(k):
        pre = tuple(rng.randint(0, entry_max) for _ in range(d))
        post = tuple(rng.randint(0, entry_max) for _ in range(d))
        pairs.append((pre, post))
    return PetriNet.from_vectors(d, pairs)


def random_linear(rng: random.Random, n: int, periods_max: int = 3,
                  entry_max: int = 3) -> LinearSet:
    base = tuple(rng.randint(0, entry_max) for _ in range(n))
    k = rng.randint(0, periods_max)
    periods = tuple(
        tuple(rng.randint(0, entry_max) for _ in range(n)) for _ in range(k)
    )
    return LinearSet(base, periods)


def random_semilinear(rng: random.Random, n: int, comps_max: int = 3,
                      periods_max: int = 3, entry_max: int = 3) -> SemilinearSet:
    k = rng.randint(0, comps_max)
    return SemilinearSet(tuple(random_linear(rng, n, periods_max, entry_max) for _ in range(k)))
