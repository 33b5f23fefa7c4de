"""Presentation-level algebra of semilinear sets over vectors of naturals.

A linear set is given by a base vector and finitely many period vectors and
denotes every sum of the base with a nonnegative integer combination of the
periods.  A semilinear set is a finite union of linear sets.  Everything here
works on presentations; no set is ever materialized.

Integer linear systems are solved with the Contejean-Devie completion
procedure, which yields minimal solutions and the Hilbert basis of the
associated homogeneous system.  Complements of upward-closed sets are built
from finite antichains of minimal elements via the usual box construction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .vectors import (
    OMEGA,
    PartialVector,
    Vector,
    add,
    dot,
    is_zero,
    leq,
    minimal_elements,
    scale,
    try_sub,
    unit,
    zero,
)


class DimensionMismatch(ValueError):
    """Operands live in spaces of different dimension."""


class NotAntichain(ValueError):
    """A claimed minimal basis contains comparable elements."""


@dataclass(frozen=True)
class LinearSet:
    """base + all nonnegative integer combinations of the periods.

    Normalization drops zero periods, deduplicates, and sorts the rest, so
    structurally equal presentations compare equal.
    """

    base: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self) -> None:
        if any(x < 0 for x in self.base):
            raise ValueError(f"linear set base must be nonnegative: {self.base!r}")
        n = len(self.base)
        for p in self.periods:
            if len(p) != n:
                raise DimensionMismatch(
                    f"period {p!r} has length {len(p)}, base has length {n}"
                )
            if any(x < 0 for x in p):
                raise ValueError(f"linear set period must be nonnegative: {p!r}")
        cleaned = tuple(sorted({p for p in self.periods if not is_zero(p)}))
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "periods", cleaned)

    @property
    def dim(self) -> int:
        return len(self.base)

    def sort_key(self):
        return (self.base, self.periods)


@dataclass(frozen=True)
class SemilinearSet:
    """Finite union of linear sets of one common dimension.

    Component order is preserved (duplicates dropped); the zero-component set
    denotes the empty set and is compatible with any dimension.
    """

    components: tuple[LinearSet, ...] = ()

    def __post_init__(self) -> None:
        dims = {c.dim for c in self.components}
        if len(dims) > 1:
            raise DimensionMismatch(f"components of mixed dimensions {sorted(dims)}")
        seen: set[LinearSet] = set()
        kept = []
        for c in self.components:
            if c not in seen:
                seen.add(c)
                kept.append(c)
        object.__setattr__(self, "components", tuple(kept))

    @property
    def dim(self) -> int | None:
        return self.components[0].dim if self.components else None

    def is_empty(self) -> bool:
        return not self.components


EMPTY = SemilinearSet(())


def singleton(x: Vector) -> SemilinearSet:
    return SemilinearSet((LinearSet(tuple(x)),))


def whole_space(n: int) -> SemilinearSet:
    return SemilinearSet((LinearSet(zero(n), tuple(unit(n, i) for i in range(n))),))


@dataclass(frozen=True)
class MinBasis:
    """Antichain of minimal elements generating an upward-closed subset of N^dim."""

    dim: int
    elements: tuple[Vector, ...] = ()

    def __post_init__(self) -> None:
        for e in self.elements:
            if len(e) != self.dim:
                raise DimensionMismatch(f"element {e!r} does not have length {self.dim}")
            if any(x < 0 for x in e):
                raise ValueError(f"basis element must be nonnegative: {e!r}")
        elems = tuple(sorted(set(self.elements)))
        for a in elems:
            for b in elems:
                if a != b and leq(a, b):
                    raise NotAntichain(f"{a!r} <= {b!r}")
        object.__setattr__(self, "elements", elems)

    def covers(self, x: Vector) -> bool:
        """True when x lies in the generated upward-closed set."""
        return any(leq(e, x) for e in self.elements)


def _check_dims(a: SemilinearSet, b: SemilinearSet) -> None:
    if a.dim is not None and b.dim is not None and a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")


# ---------------------------------------------------------------------------
# membership


def member_linear(ls: LinearSet, x: Vector) -> bool:
    if len(x) != ls.dim:
        raise DimensionMismatch(f"vector of length {len(x)} vs dimension {ls.dim}")
    residual = try_sub(tuple(x), ls.base)
    if residual is None:
        return False
    return _decomposable(residual, ls.periods)


def _decomposable(residual: Vector, periods: tuple[Vector, ...]) -> bool:
    """Can residual be written as a nonnegative integer combination of periods?"""
    k = len(periods)
    # coordinates coverable by the period suffix starting at index j
    suffix_support: list[set[int]] = [set() for _ in range(k + 1)]
    for j in range(k - 1, -1, -1):
        suffix_support[j] = suffix_support[j + 1] | {
            i for i, v in enumerate(periods[j]) if v > 0
        }

    def rec(r: Vector, j: int) -> bool:
        if is_zero(r):
            return True
        if j == k:
            return False
        if any(v > 0 and i not in suffix_support[j] for i, v in enumerate(r)):
            return False
        p = periods[j]
        cap = min(r[i] // p[i] for i, v in enumerate(p) if v > 0)
        for c in range(cap, -1, -1):
            nxt = tuple(r[i] - c * p[i] for i in range(len(r)))
            if rec(nxt, j + 1):
                return True
        return False

    return rec(residual, 0)


def member(s: SemilinearSet, x: Vector) -> bool:
    return any(member_linear(c, x) for c in s.components)


# ---------------------------------------------------------------------------
# basic constructions


def union(a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    _check_dims(a, b)
    return SemilinearSet(a.components + b.components)


def image_affine(
    s: SemilinearSet, matrix: Sequence[Vector], offset: Vector
) -> SemilinearSet:
    """Image of s under x -> offset + matrix @ x (entries nonnegative).

    matrix is given as a tuple of rows; the result lives in N^len(offset).
    """
    rows = tuple(tuple(r) for r in matrix)
    if len(rows) != len(offset):
        raise DimensionMismatch(
            f"matrix has {len(rows)} rows but offset has length {len(offset)}"
        )
    if s.dim is not None:
        for r in rows:
            if len(r) != s.dim:
                raise DimensionMismatch(
                    f"matrix row of length {len(r)} vs dimension {s.dim}"
                )

    def apply(x: Vector) -> Vector:
        return tuple(o + dot(r, x) for o, r in zip(offset, rows))

    comps = []
    for c in s.components:
        comps.append(LinearSet(apply(c.base), tuple(
            tuple(dot(r, p) for r in rows) for p in c.periods
        )))
    return SemilinearSet(tuple(sorted(comps, key=LinearSet.sort_key)))


def instances_of(pv: PartialVector) -> LinearSet:
    """All concrete instances of a partial vector, as a linear set."""
    base = pv.fixed_part()
    periods = tuple(unit(pv.dim, i) for i in pv.omega_positions())
    return LinearSet(base, periods)


# ---------------------------------------------------------------------------
# complements of upward-closed sets


def complement_boxes(elements: Sequence[Vector], n: int) -> list[PartialVector]:
    """The complement of the upward closure of an antichain, as partial-vector boxes.

    A vector avoids every element of the antichain exactly when, for each
    element, some coordinate stays strictly below it.  Every choice of such a
    coordinate per element yields a box: chosen coordinates are pinned to the
    finitely many values below the bound, the rest stay unspecified.
    """
    for e in elements:
        if len(e) != n:
            raise DimensionMismatch(f"element {e!r} does not have length {n}")
    choice_axes = []
    for e in elements:
        positive = [i for i, v in enumerate(e) if v > 0]
        if not positive:
            return []  # the zero vector is below everything: empty complement
        choice_axes.append(positive)

    boxes: set[PartialVector] = set()
    for choice in itertools.product(*choice_axes):
        bound: dict[int, int] = {}
        for e, i in zip(elements, choice):
            cap = e[i] - 1
            bound[i] = min(bound.get(i, cap), cap)
        coords = sorted(bound)
        for values in itertools.product(*(range(bound[i] + 1) for i in coords)):
            entries: list = [OMEGA] * n
            for i, v in zip(coords, values):
                entries[i] = v
            boxes.add(PartialVector(tuple(entries)))

    pruned = _prune_subsumed_boxes(sorted(boxes, key=PartialVector.sort_key))
    return pruned


def _box_subsumes(general: PartialVector, special: PartialVector) -> bool:
    """Instances of special are contained in instances of general."""
    return all(
        g is OMEGA or g == s for g, s in zip(general.entries, special.entries)
    )


def _prune_subsumed_boxes(boxes: list[PartialVector]) -> list[PartialVector]:
    kept = []
    for i, b in enumerate(boxes):
        if any(j != i and _box_subsumes(o, b) for j, o in enumerate(boxes)):
            # mutual subsumption implies equality, and boxes are deduplicated
            continue
        kept.append(b)
    return kept


def complement_upward(basis: MinBasis) -> SemilinearSet:
    """Semilinear presentation of N^dim minus the upward closure of the basis."""
    boxes = complement_boxes(basis.elements, basis.dim)
    comps = tuple(sorted((instances_of(b) for b in boxes), key=LinearSet.sort_key))
    return SemilinearSet(comps)


def prune_subsumed(s: SemilinearSet) -> SemilinearSet:
    """Drop components syntactically contained in another component.

    A component is dropped when its base lies in another component whose
    period set includes all of its periods.  Best effort only; the denoted
    set is unchanged.
    """
    comps = s.components
    kept = []
    for i, c in enumerate(comps):
        # mutual subsumption would force structural equality, which the
        # constructor already deduplicates, so a single pass is safe
        if any(
            j != i and set(c.periods) <= set(o.periods) and member_linear(o, c.base)
            for j, o in enumerate(comps)
        ):
            continue
        kept.append(c)
    return SemilinearSet(tuple(kept))


# ---------------------------------------------------------------------------
# integer linear systems


@dataclass(frozen=True)
class ConstraintSystem:
    """Conjunction of integer linear constraints over N^n.

    equalities:   rows (coeffs, c) meaning  coeffs . x == c
    inequalities: rows (coeffs, c) meaning  coeffs . x >= c
    Coefficients and constants may be negative; solutions are nonnegative.
    """

    n: int
    equalities: tuple[tuple[Vector, int], ...] = ()
    inequalities: tuple[tuple[Vector, int], ...] = ()

    def __post_init__(self) -> None:
        for coeffs, _ in self.equalities + self.inequalities:
            if len(coeffs) != self.n:
                raise DimensionMismatch(
                    f"constraint row {coeffs!r} does not have length {self.n}"
                )

    def satisfied_by(self, x: Vector) -> bool:
        if len(x) != self.n:
            raise DimensionMismatch(f"vector of length {len(x)} vs {self.n} variables")
        return all(dot(a, x) == c for a, c in self.equalities) and all(
            dot(a, x) >= c for a, c in self.inequalities
        )


class _NodeCapHit(Exception):
    pass


def _completion(columns: list[tuple[int, ...]], node_cap: int | None,
                stop_on_var: int | None = None) -> list[Vector] | Vector | None:
    """Contejean-Devie completion for sum_j x_j * columns[j] == 0 over N.

    Returns the Hilbert basis (all minimal nonzero solutions).  When
    stop_on_var is given, returns the first discovered solution with that
    coordinate equal to 1 (or None after exhaustive search).  Raises
    _NodeCapHit when node_cap expansions are exceeded.

    Each frontier node carries its residual's dot products with every column,
    updated incrementally through the precomputed column Gram matrix; that
    keeps the inner descent test free of per-row arithmetic.
    """
    nvars = len(columns)
    gram = [tuple(dot(columns[i], columns[j]) for j in range(nvars)) for i in range(nvars)]
    minimal: list[Vector] = []
    # count tuple -> (residual, residual-column dot products)
    frontier: dict[Vector, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for i in range(nvars):
        t = unit(nvars, i)
        frontier[t] = (columns[i], gram[i])
    nodes = 0
    while frontier:
        solutions = [t for t, (v, _) in frontier.items() if not any(v)]
        for t in sorted(solutions):
            if stop_on_var is not None and t[stop_on_var] == 1:
                return t
            minimal.append(t)
        nxt: dict[Vector, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        for t, (v, d) in frontier.items():
            if not any(v):
                continue
            for i in range(nvars):
                if d[i] < 0:
                    child = tuple(
                        x + 1 if j == i else x for j, x in enumerate(t)
                    )
                    if child in nxt:
                        continue
                    if any(leq(m, child) for m in minimal):
                        continue
                    nxt[child] = (
                        tuple(a + b for a, b in zip(v, columns[i])),
                        tuple(a + b for a, b in zip(d, gram[i])),
                    )
                    nodes += 1
                    if node_cap is not None and nodes > node_cap:
                        raise _NodeCapHit()
        frontier = nxt
    if stop_on_var is not None:
        return None
    return minimal_elements(minimal)


def _homogenized_columns(sys: ConstraintSystem) -> tuple[list[tuple[int, ...]], int, int]:
    """Column vectors for the slack-extended, homogenized system.

    Variables are ordered (original .. slacks .. fresh homogenizing variable);
    returns (columns, slack_count, index of the homogenizing variable).
    """
    rows: list[tuple[Vector, int, int | None]] = []
    for coeffs, c in sys.equalities:
        rows.append((coeffs, c, None))
    for si, (coeffs, c) in enumerate(sys.inequalities):
        rows.append((coeffs, c, si))
    m = len(rows)
    slacks = len(sys.inequalities)
    nvars = sys.n + slacks + 1
    columns: list[list[int]] = [[0] * m for _ in range(nvars)]
    for r, (coeffs, c, si) in enumerate(rows):
        for j, a in enumerate(coeffs):
            columns[j][r] = a
        if si is not None:
            columns[sys.n + si][r] = -1
        columns[sys.n + slacks][r] = -c
    return [tuple(col) for col in columns], slacks, sys.n + slacks


def min_solutions(
    sys: ConstraintSystem,
) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    """Generators of the solution set of an integer linear system over N^n.

    Returns (inhomogeneous, hilbert): the solution set equals every
    inhomogeneous generator plus any nonnegative combination of the hilbert
    generators.  Inequalities are translated through slack variables that are
    projected away from the result, so on systems with inequalities the
    projected generators need not form antichains; on pure equality systems
    they are exactly the minimal solutions and the Hilbert basis.
    """
    columns, _slacks, hvar = _homogenized_columns(sys)
    basis = _completion(columns, node_cap=None)
    assert isinstance(basis, list)
    inhom = sorted({t[: sys.n] for t in basis if t[hvar] == 1})
    hilbert = sorted({t[: sys.n] for t in basis if t[hvar] == 0})
    hilbert = [h for h in hilbert if not is_zero(h)]
    return tuple(inhom), tuple(hilbert)


def find_solution(
    sys: ConstraintSystem, node_cap: int | None = None
) -> tuple[Vector | None, bool]:
    """One solution of a system over N^n, plus an exactness flag.

    (x, True): x satisfies the system; (None, True): the system is infeasible,
    established exhaustively; (None, False): the search exceeded node_cap
    before deciding either way.
    """
    columns, _slacks, hvar = _homogenized_columns(sys)
    try:
        found = _completion(columns, node_cap=node_cap, stop_on_var=hvar)
    except _NodeCapHit:
        return None, False
    if found is None:
        return None, True
    assert isinstance(found, tuple)
    return found[: sys.n], True


def has_solution(sys: ConstraintSystem, node_cap: int | None = None) -> bool | None:
    """Three-valued feasibility of a system over N^n.

    True/False are exact; None means the search exceeded node_cap.
    """
    x, exact = find_solution(sys, node_cap=node_cap)
    if not exact:
        return None
    return x is not None


def constraints_to_semilinear(sys: ConstraintSystem) -> SemilinearSet:
    """The exact solution set of the system, as a semilinear presentation."""
    inhom, hilbert = min_solutions(sys)
    comps = tuple(
        sorted((LinearSet(b, hilbert) for b in inhom), key=LinearSet.sort_key)
    )
    return SemilinearSet(comps)


# ---------------------------------------------------------------------------
# intersections and sections


def _intersect_linear(a: LinearSet, b: LinearSet) -> list[LinearSet]:
    ka, kb = len(a.periods), len(b.periods)
    n = a.dim
    eqs = []
    for i in range(n):
        coeffs = tuple(p[i] for p in a.periods) + tuple(-q[i] for q in b.periods)
        eqs.append((coeffs, b.base[i] - a.base[i]))
    inhom, hilbert = min_solutions(ConstraintSystem(ka + kb, tuple(eqs)))

    def through_a(coeffs: Vector) -> Vector:
        out = zero(n)
        for c, p in zip(coeffs[:ka], a.periods):
            out = add(out, scale(c, p))
        return out

    comps = []
    for s in inhom:
        comps.append(
            LinearSet(add(a.base, through_a(s)), tuple(through_a(h) for h in hilbert))
        )
    return comps


def intersect(a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    _check_dims(a, b)
    comps: list[LinearSet] = []
    for ca in a.components:
        for cb in b.components:
            comps.extend(_intersect_linear(ca, cb))
    return SemilinearSet(tuple(sorted(set(comps), key=LinearSet.sort_key)))


def fiber(s: SemilinearSet, prefix: Vector) -> SemilinearSet:
    """The section { u : prefix ++ u in s } of a set over N^(len(prefix)+k)."""
    d = len(prefix)
    comps: list[LinearSet] = []
    for c in s.components:
        k = c.dim - d
        if k < 0:
            raise DimensionMismatch(f"prefix longer than dimension {c.dim}")
        nper = len(c.periods)
        eqs = []
        for i in range(d):
            coeffs = tuple(p[i] for p in c.periods)
            eqs.append((coeffs, prefix[i] - c.base[i]))
        inhom, hilbert = min_solutions(ConstraintSystem(nper, tuple(eqs)))

        def tail_combo(coeffs: Vector) -> Vector:
            out = zero(k)
            for q, p in zip(coeffs, c.periods):
                out = add(out, scale(q, p[d:]))
            return out

        for sgen in inhom:
            comps.append(
                LinearSet(
                    add(c.base[d:], tail_combo(sgen)),
                    tuple(tail_combo(h) for h in hilbert),
                )
            )
    return SemilinearSet(tuple(sorted(set(comps), key=LinearSet.sort_key)))


def attach_prefix(prefix: Vector, s: SemilinearSet) -> SemilinearSet:
    """Embed a set over N^k as { prefix ++ u : u in s } over N^(d+k)."""
    d = len(prefix)
    comps = tuple(
        LinearSet(
            tuple(prefix) + c.base,
            tuple(zero(d) + p for p in c.periods),
        )
        for c in s.components
    )
    return SemilinearSet(comps)
