"""Finite bounded lattices with bitmask order rows.

The central object is :class:`FiniteLattice`: elements are indices ``0..n-1``
with string labels, and the order is stored as bit rows — ``up[i]`` has bit
``j`` set iff ``i <= j``.  Meets and joins are either table-driven (generic
lattices, built once from the cover relation) or computed directly on element
indices (powerset lattices, where the index *is* the subset bitmask).

Lattice objects are immutable and compared by identity: two structurally equal
lattices built separately are distinct carriers, and operations that require a
shared carrier check identity, not shape.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import (
    BudgetExceeded,
    CyclicCovers,
    LatticeMismatch,
    NotALattice,
    NotAMorphism,
    NotASublattice,
    NotDistributive,
)

__all__ = [
    "FiniteLattice",
    "FinitePoset",
    "LatticeReport",
    "LatticeMorphism",
    "bits",
    "build_lattice",
    "powerset_lattice",
    "poset_from_covers",
    "downset_lattice",
    "dualize",
    "analyze",
    "pseudocomplement",
    "cover_pairs",
    "sublattice",
    "check_morphism",
    "morphism_violation",
    "left_adjoint",
    "identity_morphism",
    "compose",
]

# meet/join strategy markers
_TABLES = 0  # use precomputed tables
_MASK = 1  # element index is a subset mask: meet = &, join = |
_MASK_DUAL = 2  # dual of a mask lattice: meet = |, join = &


def bits(mask: int) -> Iterator[int]:
    """Iterate the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """A finite bounded lattice.

    ``up[i]`` / ``down[i]`` are bitmasks over element indices giving the
    principal up-set / down-set of ``i`` (reflexive).  ``bottom`` and ``top``
    are element indices.
    """

    name: str
    elements: tuple[str, ...]
    up: tuple[int, ...]
    down: tuple[int, ...]
    bottom: int
    top: int
    meet_table: tuple[tuple[int, ...], ...] | None = None
    join_table: tuple[tuple[int, ...], ...] | None = None
    op_mode: int = _TABLES

    # -- basic views ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def label(self, i: int) -> str:
        return self.elements[i]

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise KeyError(label) from None

    # -- order and operations ---------------------------------------------

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def meet(self, i: int, j: int) -> int:
        if self.op_mode == _MASK:
            return i & j
        if self.op_mode == _MASK_DUAL:
            return i | j
        return self.meet_table[i][j]  # type: ignore[index]

    def join(self, i: int, j: int) -> int:
        if self.op_mode == _MASK:
            return i | j
        if self.op_mode == _MASK_DUAL:
            return i & j
        return self.join_table[i][j]  # type: ignore[index]

    def meet_of(self, items: Iterable[int]) -> int:
        """Infimum of a finite family; the empty infimum is ``top``."""
        acc = self.top
        for x in items:
            acc = self.meet(acc, x)
        return acc

    def join_of(self, items: Iterable[int]) -> int:
        """Supremum of a finite family; the empty supremum is ``bottom``."""
        acc = self.bottom
        for x in items:
            acc = self.join(acc, x)
        return acc

    def rank_order(self) -> list[int]:
        """Element indices in a linear extension (by down-set size)."""
        return sorted(range(self.n), key=lambda i: self.down[i].bit_count())

    def lower_covers(self, j: int) -> list[int]:
        """Maximal elements strictly below ``j``."""
        strictly_below = self.down[j] ^ (1 << j)
        return [
            i for i in bits(strictly_below)
            if self.up[i] & strictly_below == 1 << i
        ]

    def __repr__(self) -> str:
        return f"FiniteLattice({self.name!r}, n={self.n})"


# ---------------------------------------------------------------------------
# construction


def _check_labels(elements: Sequence[str]) -> None:
    if not elements:
        raise NotALattice("a lattice needs at least one element")
    if len(set(elements)) != len(elements):
        raise NotALattice("element labels must be unique")
    if any(not e for e in elements):
        raise NotALattice("element labels must be non-empty")


def _closure_from_covers(n: int, pairs: list[tuple[int, int]]) -> list[int]:
    """Reflexive-transitive up-rows from cover pairs; raises CyclicCovers."""
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for lo, hi in pairs:
        succ[lo].append(hi)
        indeg[hi] += 1
    # Kahn's algorithm: a leftover node means a cycle.
    queue = [i for i in range(n) if indeg[i] == 0]
    topo: list[int] = []
    while queue:
        i = queue.pop()
        topo.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    if len(topo) != n:
        raise CyclicCovers("cover relation contains a cycle")
    up = [1 << i for i in range(n)]
    for i in reversed(topo):
        for j in succ[i]:
            up[i] |= up[j]
    return up


def _resolve_pairs(
    elements: Sequence[str], covers: Iterable[tuple[int | str, int | str]]
) -> list[tuple[int, int]]:
    index = {e: i for i, e in enumerate(elements)}
    out: list[tuple[int, int]] = []
    for lo, hi in covers:
        a = index[lo] if isinstance(lo, str) else int(lo)
        b = index[hi] if isinstance(hi, str) else int(hi)
        if not (0 <= a < len(elements) and 0 <= b < len(elements)):
            raise NotALattice(f"cover ({lo}, {hi}) out of range")
        if a == b:
            raise CyclicCovers(f"self-loop cover at {elements[a]!r}")
        out.append((a, b))
    return out


def build_lattice(
    name: str,
    elements: Sequence[str],
    covers: Iterable[tuple[int | str, int | str]],
) -> FiniteLattice:
    """Build a lattice from labels and a cover relation ``lo -< hi``.

    Raises :class:`CyclicCovers` for cyclic input and :class:`NotALattice`
    when some pair lacks a meet or a join (or bounds are missing).
    """
    _check_labels(elements)
    n = len(elements)
    pairs = _resolve_pairs(elements, covers)
    up = _closure_from_covers(n, pairs)
    down = [0] * n
    for i in range(n):
        row = up[i]
        for j in bits(row):
            down[j] |= 1 << i
    full = (1 << n) - 1
    bottoms = [i for i in range(n) if up[i] == full]
    tops = [i for i in range(n) if down[i] == full]
    if len(bottoms) != 1 or len(tops) != 1:
        raise NotALattice(f"{name}: missing global bottom or top")

    def extremum(common: int, rows: list[int], what: str, x: int, y: int) -> int:
        for z in bits(common):
            if rows[z] == common:
                return z
        raise NotALattice(
            f"{name}: no {what} for {elements[x]!r}, {elements[y]!r}"
        )

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            m = extremum(down[x] & down[y], down, "meet", x, y)
            j = extremum(up[x] & up[y], up, "join", x, y)
            meet[x][y] = meet[y][x] = m
            join[x][y] = join[y][x] = j
    return FiniteLattice(
        name=name,
        elements=tuple(elements),
        up=tuple(up),
        down=tuple(down),
        bottom=bottoms[0],
        top=tops[0],
        meet_table=tuple(tuple(r) for r in meet),
        join_table=tuple(tuple(r) for r in join),
    )


def subset_label(ground: Sequence[str], mask: int) -> str:
    """Canonical label for a subset of ``ground``: sorted, comma-joined, braced."""
    return "{" + ",".join(sorted(ground[i] for i in bits(mask))) + "}"


_POWERSET_BUDGET = 12


@lru_cache(maxsize=None)
def _powerset_lattice_cached(ground: tuple[str, ...]) -> FiniteLattice:
    k = len(ground)
    if k > _POWERSET_BUDGET:
        raise BudgetExceeded(
            f"powerset lattice over {k} generators exceeds the budget of "
            f"{_POWERSET_BUDGET}"
        )
    n = 1 << k
    up = [1 << i for i in range(n)]
    down = [1 << i for i in range(n)]
    for d in range(k):
        bit = 1 << d
        for i in range(n):
            if i & bit:
                down[i] |= down[i ^ bit]
            else:
                up[i] |= up[i | bit]
    return FiniteLattice(
        name="P(" + ",".join(ground) + ")",
        elements=tuple(subset_label(ground, m) for m in range(n)),
        up=tuple(up),
        down=tuple(down),
        bottom=0,
        top=n - 1,
        op_mode=_MASK,
    )


def powerset_lattice(ground: Sequence[str]) -> FiniteLattice:
    """The powerset lattice of a finite set, with subset-mask element indices.

    Results are cached per ground tuple, so repeated calls return the *same*
    carrier object — important because structures compare carriers by identity.
    """
    if len(set(ground)) != len(ground) or any(not g for g in ground):
        raise NotALattice("ground labels must be unique and non-empty")
    return _powerset_lattice_cached(tuple(ground))


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """A finite poset: labels plus reflexive down-rows (bit ``j`` of
    ``below[i]`` set iff ``j <= i``)."""

    labels: tuple[str, ...]
    below: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.labels)


def poset_from_covers(
    labels: Sequence[str], covers: Iterable[tuple[int | str, int | str]]
) -> FinitePoset:
    _check_labels(labels)
    pairs = _resolve_pairs(labels, covers)
    up = _closure_from_covers(len(labels), pairs)
    below = [0] * len(labels)
    for i, row in enumerate(up):
        for j in bits(row):
            below[j] |= 1 << i
    return FinitePoset(labels=tuple(labels), below=tuple(below))


def downset_lattice(poset: FinitePoset, name: str | None = None) -> FiniteLattice:
    """The lattice of down-closed subsets of a poset, ordered by inclusion.

    This is always a distributive lattice; meets and joins are set
    intersection and union.  Elements are ordered by (size, mask), which is a
    linear extension.
    """
    k = poset.n
    if k > 16:
        raise BudgetExceeded("downset lattice over more than 16 poset elements")
    masks = [
        m
        for m in range(1 << k)
        if all(poset.below[i] & m == poset.below[i] for i in bits(m))
    ]
    masks.sort(key=lambda m: (m.bit_count(), m))
    n = len(masks)
    index_of = {m: i for i, m in enumerate(masks)}
    up = [0] * n
    down = [0] * n
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            if mi & mj == mi:
                up[i] |= 1 << j
                down[j] |= 1 << i
    meet = [tuple(index_of[mi & mj] for mj in masks) for mi in masks]
    join = [tuple(index_of[mi | mj] for mj in masks) for mi in masks]
    return FiniteLattice(
        name=name or "D(" + ",".join(poset.labels) + ")",
        elements=tuple(subset_label(poset.labels, m) for m in masks),
        up=tuple(up),
        down=tuple(down),
        bottom=0,
        top=n - 1,
        meet_table=tuple(meet),
        join_table=tuple(join),
    )


_DUALS: "weakref.WeakKeyDictionary[FiniteLattice, FiniteLattice]" = (
    weakref.WeakKeyDictionary()
)


def dualize(lattice: FiniteLattice) -> FiniteLattice:
    """The order-dual of a lattice (meets and joins swapped).

    The dual is cached both ways, so ``dualize(dualize(L)) is L``.  This is
    the single orientation primitive: frame-oriented inputs are turned into
    the coframe the engine works with by dualizing once at the boundary.
    """
    cached = _DUALS.get(lattice)
    if cached is not None:
        return cached
    mode = lattice.op_mode
    if mode == _MASK:
        dual_mode = _MASK_DUAL
    elif mode == _MASK_DUAL:
        dual_mode = _MASK
    else:
        dual_mode = _TABLES
    base = lattice.name
    name = base[:-3] if base.endswith("^op") else base + "^op"
    dual = FiniteLattice(
        name=name,
        elements=lattice.elements,
        up=lattice.down,
        down=lattice.up,
        bottom=lattice.top,
        top=lattice.bottom,
        meet_table=lattice.join_table,
        join_table=lattice.meet_table,
        op_mode=dual_mode,
    )
    _DUALS[lattice] = dual
    _DUALS[dual] = lattice
    return dual


def cover_pairs(lattice: FiniteLattice) -> list[tuple[str, str]]:
    """The cover relation as (lower, higher) label pairs, for serialization."""
    out: list[tuple[str, str]] = []
    for j in range(lattice.n):
        for i in lattice.lower_covers(j):
            out.append((lattice.elements[i], lattice.elements[j]))
    return out


def sublattice(
    lattice: FiniteLattice, members: Iterable[int], name: str | None = None
) -> tuple[FiniteLattice, list[int]]:
    """The sublattice on ``members`` (must be meet/join closed).

    Returns the new lattice together with the list mapping new indices to
    indices in the ambient lattice.  Raises :class:`NotASublattice` with a
    witness pair when the subset is not closed.
    """
    idx = sorted(set(members), key=lambda i: (lattice.down[i].bit_count(), i))
    pos = {x: p for p, x in enumerate(idx)}
    for a in idx:
        for b in idx:
            for op, word in ((lattice.meet, "meet"), (lattice.join, "join")):
                r = op(a, b)
                if r not in pos:
                    raise NotASublattice(
                        f"{word} of {lattice.label(a)!r} and {lattice.label(b)!r} "
                        f"is {lattice.label(r)!r}, outside the subset"
                    )
    n = len(idx)
    up = [0] * n
    down = [0] * n
    for p, a in enumerate(idx):
        for q, b in enumerate(idx):
            if lattice.leq(a, b):
                up[p] |= 1 << q
                down[q] |= 1 << p
    meet = [tuple(pos[lattice.meet(a, b)] for b in idx) for a in idx]
    join = [tuple(pos[lattice.join(a, b)] for b in idx) for a in idx]
    full = (1 << n) - 1
    bottom = next(p for p in range(n) if up[p] == full)
    top = next(p for p in range(n) if down[p] == full)
    sub = FiniteLattice(
        name=name or lattice.name + "|sub",
        elements=tuple(lattice.label(a) for a in idx),
        up=tuple(up),
        down=tuple(down),
        bottom=bottom,
        top=top,
        meet_table=tuple(meet),
        join_table=tuple(join),
    )
    return sub, idx


# ---------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class LatticeReport:
    """Derived structure of a lattice.

    All element sets are bitmasks over element indices.  ``wwb_below[j]`` is
    the mask of elements ``i`` such that every family whose supremum dominates
    ``j`` contains a member above ``i`` (the "way-way-below" relation used for
    prime-continuity).
    """

    distributive: bool
    complemented: int
    complement: tuple[int, ...]
    join_primes: int
    meet_primes: int
    spatial: bool
    prime_continuous: bool
    wwb_below: tuple[int, ...]
    distributivity_sampled: bool = False

    def complemented_list(self) -> list[int]:
        return list(bits(self.complemented))


def _distributive(lattice: FiniteLattice) -> tuple[bool, bool]:
    """(is distributive, was sampled).  Full scan when feasible."""
    n = lattice.n
    meet, join = lattice.meet, lattice.join
    if n <= 128:
        rng_triples: Iterable[tuple[int, int, int]] = (
            (x, y, z) for x in range(n) for y in range(n) for z in range(n)
        )
        sampled = False
    else:
        # Powerset-scale carriers: &/| over masks distribute as an integer
        # identity; we still spot-check a deterministic sample.
        import random

        rng = random.Random(0)
        rng_triples = (
            (rng.randrange(n), rng.randrange(n), rng.randrange(n))
            for _ in range(5000)
        )
        sampled = True
    for x, y, z in rng_triples:
        if meet(x, join(y, z)) != join(meet(x, y), meet(x, z)):
            return False, sampled
    return True, sampled


def _join_primes(lattice: FiniteLattice) -> int:
    """Mask of join-prime elements (x ≤ a∨b implies x ≤ a or x ≤ b, x ≠ ⊥)."""
    n = lattice.n
    if lattice.op_mode == _MASK:
        # subsets of the ground set: exactly the singletons
        return sum(1 << i for i in range(n) if i.bit_count() == 1)
    if lattice.op_mode == _MASK_DUAL:
        # dual powerset: exactly the co-singletons (bottom is the full subset)
        return sum(
            1 << i for i in range(n) if (lattice.bottom ^ i).bit_count() == 1
        )
    out = 0
    for x in range(n):
        if x == lattice.bottom:
            continue
        prime = True
        for a in range(n):
            if not prime:
                break
            if lattice.leq(x, a):
                continue
            for b in range(n):
                j = lattice.join(a, b)
                if lattice.leq(x, j) and not lattice.leq(x, b):
                    prime = False
                    break
        if prime:
            out |= 1 << x
    return out


def _meet_primes(lattice: FiniteLattice) -> int:
    n = lattice.n
    if lattice.op_mode == _MASK:
        return sum(1 << i for i in range(n) if (lattice.top ^ i).bit_count() == 1)
    if lattice.op_mode == _MASK_DUAL:
        return sum(1 << i for i in range(n) if i.bit_count() == 1)
    out = 0
    for x in range(n):
        if x == lattice.top:
            continue
        prime = True
        for a in range(n):
            if not prime:
                break
            if lattice.leq(a, x):
                continue
            for b in range(n):
                m = lattice.meet(a, b)
                if lattice.leq(m, x) and not lattice.leq(b, x):
                    prime = False
                    break
        if prime:
            out |= 1 << x
    return out


_WWB_BRUTE_LIMIT = 16


def wwb_brute_force(lattice: FiniteLattice) -> tuple[int, ...]:
    """Way-way-below rows by scanning every family of elements.

    ``i`` is way-way-below ``j`` iff every subset ``S`` with ``j <= sup S``
    contains some ``s >= i``.  Exponential; the oracle for the distributive
    shortcut.
    """
    n = lattice.n
    if n > _WWB_BRUTE_LIMIT:
        raise BudgetExceeded(
            f"way-way-below brute force on {n} elements (limit {_WWB_BRUTE_LIMIT})"
        )
    full = lattice.full_mask
    not_wwb = [0] * n  # not_wwb[j]: mask of i refuted as way-way-below j
    sup = [lattice.bottom] * (1 << n)
    covered = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        e = low.bit_length() - 1
        rest = s ^ low
        sup[s] = lattice.join(sup[rest], e)
        covered[s] = covered[rest] | lattice.down[e]
        gap = full & ~covered[s]
        if gap:
            for j in bits(lattice.down[sup[s]]):
                not_wwb[j] |= gap
    # the empty family: sup is bottom, nothing is covered
    not_wwb[lattice.bottom] = full
    return tuple(full & ~row for row in not_wwb)


def wwb_distributive_closed_form(
    lattice: FiniteLattice, join_primes: int
) -> tuple[int, ...]:
    """Way-way-below rows for a finite distributive lattice, in closed form.

    Every family covering ``j`` refines to a family of join-primes, and a
    prime family covers ``j`` exactly when each join-prime ``p <= j`` sits
    below some member.  A refutation therefore exists unless some join-prime
    ``p <= j`` has *all* join-primes above it already above ``i``; hence
    ``i`` is way-way-below ``j`` iff ``i <= inf{q join-prime : q >= p}`` for
    some join-prime ``p <= j``.  The exhaustive scan cross-checks this on
    every small carrier in the test suite.
    """
    hull = {
        p: lattice.meet_of(q for q in bits(join_primes) if lattice.leq(p, q))
        for p in bits(join_primes)
    }
    rows = []
    for j in range(lattice.n):
        row = 0
        for p in bits(join_primes & lattice.down[j]):
            row |= lattice.down[hull[p]]
        rows.append(row)
    return tuple(rows)


def _wwb_rows(lattice: FiniteLattice, distributive: bool, join_primes: int) -> tuple[int, ...]:
    if lattice.n <= _WWB_BRUTE_LIMIT:
        return wwb_brute_force(lattice)
    if distributive:
        return wwb_distributive_closed_form(lattice, join_primes)
    raise BudgetExceeded(
        "way-way-below on a large non-distributive lattice is out of budget"
    )


@lru_cache(maxsize=None)
def analyze(lattice: FiniteLattice) -> LatticeReport:
    """Derived structure: distributivity, complemented part, primes,
    spatiality, prime-continuity, way-way-below rows.

    Cached per carrier (lattices are immutable and identity-compared).
    """
    n = lattice.n
    distributive, sampled = _distributive(lattice)
    # complemented elements and a canonical complement (least index)
    complemented = 0
    complement = [-1] * n
    if lattice.op_mode == _MASK:
        top = lattice.top
        complemented = lattice.full_mask
        complement = [top ^ i for i in range(n)]
    elif lattice.op_mode == _MASK_DUAL:
        bot = lattice.bottom
        complemented = lattice.full_mask
        complement = [bot ^ i for i in range(n)]
    else:
        for x in range(n):
            for y in range(n):
                if (
                    lattice.meet(x, y) == lattice.bottom
                    and lattice.join(x, y) == lattice.top
                ):
                    complemented |= 1 << x
                    complement[x] = y
                    break
    join_primes = _join_primes(lattice)
    meet_primes = _meet_primes(lattice)
    spatial = all(
        lattice.join_of(bits(join_primes & lattice.down[x])) == x for x in range(n)
    )
    wwb = _wwb_rows(lattice, distributive, join_primes)
    prime_continuous = all(
        lattice.join_of(bits(wwb[x])) == x for x in range(n)
    )
    return LatticeReport(
        distributive=distributive,
        complemented=complemented,
        complement=tuple(complement),
        join_primes=join_primes,
        meet_primes=meet_primes,
        spatial=spatial,
        prime_continuous=prime_continuous,
        wwb_below=wwb,
        distributivity_sampled=sampled,
    )


def pseudocomplement(lattice: FiniteLattice, x: int) -> int:
    """The largest element whose meet with ``x`` is bottom.

    Exists in every finite distributive lattice; raises
    :class:`NotDistributive` when the candidate join fails the defining
    property (as happens e.g. in the diamond M3).
    """
    if lattice.op_mode == _MASK:
        return lattice.top ^ x
    if lattice.op_mode == _MASK_DUAL:
        return lattice.bottom ^ x
    candidates = [
        m for m in range(lattice.n) if lattice.meet(x, m) == lattice.bottom
    ]
    z = lattice.join_of(candidates)
    if lattice.meet(x, z) != lattice.bottom:
        raise NotDistributive(
            f"{lattice.name}: {lattice.label(x)!r} has no pseudocomplement"
        )
    return z


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class LatticeMorphism:
    """A map between lattices given by its value table.

    ``kind`` states what the map is claimed to preserve:

    - ``"coframe"``: arbitrary infima and finite suprema (including bounds);
    - ``"lattice"``: binary meet/join and bounds;
    - ``"monotone"``: order only.
    """

    source: FiniteLattice
    target: FiniteLattice
    values: tuple[int, ...]
    kind: str = "coframe"

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __repr__(self) -> str:
        return (
            f"LatticeMorphism({self.source.name!r} -> {self.target.name!r}, "
            f"kind={self.kind!r})"
        )


_SUBSET_SCAN_BUDGET = 1 << 12


def morphism_violation(
    phi: LatticeMorphism, subset_budget: int = _SUBSET_SCAN_BUDGET
) -> str | None:
    """First violated law of ``phi`` (human-readable), or None.

    For coframe morphisms the empty-family laws mean both bounds must be
    preserved, and *arbitrary* infima are checked by scanning every subset
    while ``2**n`` fits the budget.  (On a finite carrier these follow from
    the binary and empty cases, so the scan is a cross-check, not a widening.)
    """
    src, tgt = phi.source, phi.target
    vals = phi.values
    if len(vals) != src.n or any(not 0 <= v < tgt.n for v in vals):
        return "value table does not match the carriers"
    lbl_s, lbl_t = src.label, tgt.label
    if phi.kind == "monotone":
        for x in range(src.n):
            for y in bits(src.up[x]):
                if not tgt.leq(vals[x], vals[y]):
                    return f"not monotone at {lbl_s(x)!r} <= {lbl_s(y)!r}"
        return None
    if vals[src.bottom] != tgt.bottom:
        return f"bottom maps to {lbl_t(vals[src.bottom])!r}, not bottom"
    if vals[src.top] != tgt.top:
        return f"top maps to {lbl_t(vals[src.top])!r}, not top"
    for x in range(src.n):
        for y in range(x, src.n):
            if vals[src.meet(x, y)] != tgt.meet(vals[x], vals[y]):
                return f"binary meet broken at {lbl_s(x)!r}, {lbl_s(y)!r}"
            if vals[src.join(x, y)] != tgt.join(vals[x], vals[y]):
                return f"binary join broken at {lbl_s(x)!r}, {lbl_s(y)!r}"
    if phi.kind == "coframe" and (1 << src.n) <= subset_budget:
        n = src.n
        size = 1 << n
        meet_src = [src.top] * size
        meet_img = [tgt.top] * size
        for s in range(1, size):
            low = s & -s
            e = low.bit_length() - 1
            rest = s ^ low
            meet_src[s] = src.meet(meet_src[rest], e)
            meet_img[s] = tgt.meet(meet_img[rest], vals[e])
            if vals[meet_src[s]] != meet_img[s]:
                members = ", ".join(repr(lbl_s(i)) for i in bits(s))
                return f"infimum of {{{members}}} not preserved"
    return None


def check_morphism(
    phi: LatticeMorphism, subset_budget: int = _SUBSET_SCAN_BUDGET
) -> bool:
    """Whether ``phi`` satisfies the laws of its declared kind."""
    return morphism_violation(phi, subset_budget) is None


def require_morphism(phi: LatticeMorphism) -> None:
    """Raise :class:`NotAMorphism` (with the witness) unless ``phi`` checks out."""
    violation = morphism_violation(phi)
    if violation is not None:
        raise NotAMorphism(f"{phi!r}: {violation}")


def require_same_carrier(a: FiniteLattice, b: FiniteLattice, what: str) -> None:
    if a is not b:
        raise LatticeMismatch(f"{what}: {a.name!r} is not {b.name!r}")


def left_adjoint(phi: LatticeMorphism) -> LatticeMorphism:
    """The left adjoint of an infima-preserving map.

    For a coframe morphism ``phi: L -> M`` this is the map ``M -> L`` sending
    ``m`` to the least ``l`` with ``m <= phi(l)``.  The adjunction is verified
    before returning.
    """
    require_morphism(phi)
    src, tgt = phi.source, phi.target
    vals = []
    for m in range(tgt.n):
        vals.append(
            src.meet_of(l for l in range(src.n) if tgt.leq(m, phi.values[l]))
        )
    adj = LatticeMorphism(source=tgt, target=src, values=tuple(vals), kind="monotone")
    for m in range(tgt.n):
        for l in range(src.n):
            if src.leq(vals[m], l) != tgt.leq(m, phi.values[l]):
                raise NotAMorphism(
                    f"{phi!r}: adjunction fails at {tgt.label(m)!r}, {src.label(l)!r}"
                )
    return adj


def identity_morphism(lattice: FiniteLattice) -> LatticeMorphism:
    return LatticeMorphism(
        source=lattice,
        target=lattice,
        values=tuple(range(lattice.n)),
        kind="coframe",
    )


def compose(outer: LatticeMorphism, inner: LatticeMorphism) -> LatticeMorphism:
    """``outer ∘ inner`` (checks the carriers match)."""
    require_same_carrier(inner.target, outer.source, "composition")
    kind = outer.kind if outer.kind == inner.kind else "monotone"
    return LatticeMorphism(
        source=inner.source,
        target=outer.target,
        values=tuple(outer.values[v] for v in inner.values),
        kind=kind,
    )
