"""Vectors of naturals, partial vectors with unspecified coordinates, and small helpers.

All values are immutable; vectors are plain tuples of arbitrary-precision ints.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


Vector = tuple[int, ...]


class _Omega:
    """Placeholder for an unspecified coordinate in a partial vector."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "*"


OMEGA = _Omega()

Entry = Union[int, _Omega]


def zero(n: int) -> Vector:
    return (0,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


def add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vector, b: Vector) -> Vector:
    """Componentwise difference; caller must know it is nonnegative."""
    return tuple(x - y for x, y in zip(a, b))


def try_sub(a: Vector, b: Vector) -> Vector | None:
    """a - b, or None if any coordinate would go negative."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def scale(k: int, a: Vector) -> Vector:
    return tuple(k * x for x in a)


def dot(a: Iterable[int], b: Iterable[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def norm(a: Vector) -> int:
    """Total of all coordinates."""
    return sum(a)


def leq(a: Vector, b: Vector) -> bool:
    return all(x <= y for x, y in zip(a, b))


def is_zero(a: Vector) -> bool:
    return all(x == 0 for x in a)


def check_nonneg(a: Vector) -> None:
    if any(x < 0 for x in a):
        raise ValueError(f"negative coordinate in {a!r}")


def vectors_with_norm(n: int, total: int) -> Iterator[Vector]:
    """All vectors in N^n whose coordinates sum to exactly `total`, lexicographically."""
    if n == 0:
        if total == 0:
            yield ()
        return
    if n == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in vectors_with_norm(n - 1, total - head):
            yield (head,) + rest


def vectors_norm_at_most(n: int, bound: int) -> Iterator[Vector]:
    """All vectors in N^n with coordinate sum <= bound, by increasing norm."""
    for total in range(bound + 1):
        yield from vectors_with_norm(n, total)


def vectors_in_box(n: int, bound: int) -> Iterator[Vector]:
    """All vectors in N^n with every coordinate <= bound."""
    yield from itertools.product(range(bound + 1), repeat=n)


def minimal_elements(vecs: Iterable[Vector]) -> list[Vector]:
    """The minimal elements of a finite set under the componentwise order, sorted."""
    pool = sorted(set(vecs), key=lambda v: (norm(v), v))
    kept: list[Vector] = []
    for v in pool:
        if not any(leq(m, v) for m in kept):
            kept.append(v)
    return sorted(kept)


@dataclass(frozen=True)
class PartialVector:
    """A vector whose coordinates are naturals or unspecified (OMEGA).

    An instance of a partial vector is any concrete vector that agrees with it
    on every specified coordinate.
    """

    entries: tuple[Entry, ...]

    def __post_init__(self) -> None:
        for e in self.entries:
            if e is not OMEGA and (not isinstance(e, int) or e < 0):
                raise ValueError(f"partial vector entry must be a natural or OMEGA, got {e!r}")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_concrete(self) -> bool:
        return all(e is not OMEGA for e in self.entries)

    def concrete(self) -> Vector:
        if not self.is_concrete():
            raise ValueError(f"partial vector {self} has unspecified coordinates")
        return tuple(e for e in self.entries)  # type: ignore[misc]

    def filled(self, value: int) -> Vector:
        """Concrete vector with every unspecified coordinate set to `value`."""
        return tuple(value if e is OMEGA else e for e in self.entries)

    def fixed_part(self) -> Vector:
        """Concrete vector with unspecified coordinates zeroed."""
        return self.filled(0)

    def omega_positions(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e is OMEGA)

    def with_entry(self, i: int, value: Entry) -> "PartialVector":
        entries = list(self.entries)
        entries[i] = value
        return PartialVector(tuple(entries))

    def admits(self, x: Vector) -> bool:
        """True when x is an instance of this partial vector."""
        return len(x) == len(self.entries) and all(
            e is OMEGA or e == v for e, v in zip(self.entries, x)
        )

    def sort_key(self) -> tuple[tuple[int, int], ...]:
        """Total order key; unspecified coordinates sort after all naturals."""
        return tuple((1, 0) if e is OMEGA else (0, e) for e in self.entries)

    def __str__(self) -> str:
        return "(" + " ".join(str(e) for e in self.entries) + ")"


def concrete_pv(x: Vector) -> PartialVector:
    return PartialVector(tuple(x))
