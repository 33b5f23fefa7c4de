"""Minimal bases of upward-closed sets from a three-valued box oracle.

An upward-closed subset of N^dim is determined by its finite antichain of
minimal elements.  Given an oracle that answers whether the set meets a box
(a partial vector: some coordinates pinned, the rest unconstrained), the basis
is computed by iterated refinement: query the boxes covering the complement of
the current antichain, extract a fresh member from a YES box, minimize it
coordinate by coordinate, and repeat until every box answers NO.  Every
appended vector is a true minimal element of the target set, so the loop
terminates because antichains of incomparable vectors cannot grow forever.

The oracle may answer UNKNOWN; the computation then either routes around the
blocked box or reports Inconclusive with the first blocking query.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Protocol, Union

from .semilinear import MinBasis, complement_boxes
from .vectors import PartialVector, Vector, concrete_pv

_FILL_CAP = 1 << 20


class Answer(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class BoxOracle(Protocol):
    """Does the upward-closed set contain an instance of the partial vector?"""

    dim: int

    def query(self, pv: PartialVector) -> Answer: ...


@dataclass(frozen=True)
class Basis:
    basis: MinBasis


@dataclass(frozen=True)
class Inconclusive:
    """The first box whose answer was needed but came back UNKNOWN."""

    blocked_on: PartialVector


VjOutcome = Union[Basis, Inconclusive]


class Undecided(Exception):
    """Raised by layers that cannot proceed past an inconclusive basis."""

    def __init__(self, blocked_on: PartialVector) -> None:
        super().__init__(f"oracle could not decide box {blocked_on}")
        self.blocked_on = blocked_on


class _Memo:
    def __init__(self, oracle: BoxOracle) -> None:
        self._oracle = oracle
        self._cache: dict[PartialVector, Answer] = {}
        self.dim = oracle.dim

    def query(self, pv: PartialVector) -> Answer:
        hit = self._cache.get(pv)
        if hit is None:
            hit = self._oracle.query(pv)
            self._cache[pv] = hit
        return hit


def minimize(x: Vector, member: Callable[[Vector], bool]) -> Vector:
    """Lower x to a minimal member of an upward-closed set containing it.

    Coordinates are minimized left to right by binary search; the result is a
    true minimal element of the set, not merely locally unimprovable.
    """
    cur = list(x)
    for i in range(len(cur)):
        lo, hi = 0, cur[i]
        while lo < hi:
            mid = (lo + hi) // 2
            probe = cur[:]
            probe[i] = mid
            if member(tuple(probe)):
                hi = mid
            else:
                lo = mid + 1
        cur[i] = lo
    return tuple(cur)


class _Blocked(Exception):
    pass


def _member_or_blocked(oracle: _Memo) -> Callable[[Vector], bool]:
    def member(v: Vector) -> bool:
        ans = oracle.query(concrete_pv(v))
        if ans is Answer.UNKNOWN:
            raise _Blocked
        return ans is Answer.YES

    return member


def _harvest(oracle: _Memo, box: PartialVector) -> Vector | None:
    """A concrete member of the set inside a box that answered YES.

    Fills every unconstrained coordinate with t = 0, 1, 2, ...; upward
    closure guarantees a YES at some finite fill level.  UNKNOWN answers do
    not refute, so the scan continues past a bounded number of them before
    giving up.
    """
    if box.is_concrete():
        return box.concrete()
    unknowns = 0
    for t in range(_FILL_CAP):
        ans = oracle.query(concrete_pv(box.filled(t)))
        if ans is Answer.YES:
            return box.filled(t)
        if ans is Answer.UNKNOWN:
            unknowns += 1
            if unknowns > 64:
                return None
    raise RuntimeError(f"no member found in YES box {box}; oracle is inconsistent")


def min_basis(oracle: BoxOracle) -> VjOutcome:
    """Antichain of minimal elements of the upward-closed set behind `oracle`.

    Basis(b) is exact.  Inconclusive(q) means progress required the answer to
    box q and the oracle returned UNKNOWN.
    """
    memo = _Memo(oracle)
    member = _member_or_blocked(memo)
    elements: list[Vector] = []
    while True:
        boxes = sorted(complement_boxes(elements, memo.dim), key=PartialVector.sort_key)
        blocked: PartialVector | None = None
        grown = False
        for box in boxes:
            ans = memo.query(box)
            if ans is Answer.NO:
                continue
            if ans is Answer.UNKNOWN:
                if blocked is None:
                    blocked = box
                continue
            found = _harvest(memo, box)
            if found is None:
                if blocked is None:
                    blocked = box
                continue
            try:
                minimal = minimize(found, member)
            except _Blocked:
                if blocked is None:
                    blocked = box
                continue
            elements.append(minimal)
            grown = True
            break
        if grown:
            continue
        if blocked is not None:
            return Inconclusive(blocked)
        return Basis(MinBasis(memo.dim, tuple(sorted(elements))))


@dataclass(frozen=True)
class TableOracle:
    """Test helper: exact oracle for the upward closure of known generators."""

    dim: int
    generators: tuple[Vector, ...]

    def query(self, pv: PartialVector) -> Answer:
        for g in self.generators:
            if _box_meets_up(pv, g):
                return Answer.YES
        return Answer.NO


def _box_meets_up(pv: PartialVector, g: Vector) -> bool:
    """Some instance of pv dominates g: every pinned coordinate already does."""
    for e, gi in zip(pv.entries, g):
        if isinstance(e, int) and e < gi:
            return False
    return True
