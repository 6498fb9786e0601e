"""Filters on a finite lattice, their grills, and complemented restrictions.

On a finite lattice every filter (nonempty, up-closed, meet-closed subset) is
principal — the meet of its members belongs to it — so filters are stored by
generator.  The improper filter (generated by bottom, containing everything)
is included: the set of filters ordered by refinement is the lattice upside
down.  Grills are up-sets but generally not filters, so they get their own
type.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import AxiomViolation, BudgetExceeded, LatticeMismatch
from .lattice import (
    FiniteLattice,
    LatticeMorphism,
    analyze,
    bits,
    require_morphism,
    require_same_carrier,
)

__all__ = [
    "Filter",
    "UpSet",
    "all_filters",
    "enumerate_filter_masks",
    "enumerate_upset_masks",
    "intersection",
    "is_proper",
    "refines",
    "mesh",
    "grill",
    "restrict_complemented",
    "preimage_filter",
    "preimage_upset",
]


@dataclass(frozen=True, eq=False)
class Filter:
    """The principal filter of ``generator``: all elements above it."""

    lattice: FiniteLattice
    generator: int

    @property
    def members(self) -> int:
        """Bitmask of member elements."""
        return self.lattice.up[self.generator]

    def __contains__(self, element: int) -> bool:
        return self.lattice.leq(self.generator, element)

    def __repr__(self) -> str:
        return f"Filter(^{self.lattice.label(self.generator)!r} in {self.lattice.name})"


@dataclass(frozen=True, eq=False)
class UpSet:
    """An up-closed subset, as a bitmask (may be empty, need not be a filter)."""

    lattice: FiniteLattice
    members: int

    def __post_init__(self) -> None:
        lat = self.lattice
        if self.members >> lat.n:
            raise AxiomViolation("upset", "member mask out of range")
        for i in bits(self.members):
            if lat.up[i] & self.members != lat.up[i]:
                above = next(
                    j for j in bits(lat.up[i]) if not self.members >> j & 1
                )
                raise AxiomViolation(
                    "upset",
                    f"{lat.label(i)!r} is a member but {lat.label(above)!r} above it is not",
                )

    def __contains__(self, element: int) -> bool:
        return bool(self.members >> element & 1)

    def __repr__(self) -> str:
        labels = [self.lattice.label(i) for i in bits(self.members)]
        return f"UpSet({{{', '.join(labels)}}} in {self.lattice.name})"


def all_filters(lattice: FiniteLattice) -> list[Filter]:
    """Every filter, one per generator, in element-index order.

    Includes the improper filter (generated by bottom).
    """
    return [Filter(lattice, g) for g in range(lattice.n)]


_FILTER_SCAN_LIMIT = 16


def enumerate_filter_masks(lattice: FiniteLattice) -> list[int]:
    """Brute-force oracle: every nonempty, up-closed, meet-closed subset.

    Scans all ``2**n`` subsets, so only for small carriers.  The test suite
    freezes the claim that these are exactly the principal up-sets.
    """
    n = lattice.n
    if n > _FILTER_SCAN_LIMIT:
        raise BudgetExceeded(
            f"filter subset scan on {n} elements (limit {_FILTER_SCAN_LIMIT})"
        )
    out = []
    for mask in range(1, 1 << n):
        members = list(bits(mask))
        if any(lattice.up[i] & mask != lattice.up[i] for i in members):
            continue
        if all(
            mask >> lattice.meet(a, b) & 1 for a in members for b in members
        ):
            out.append(mask)
    return out


def enumerate_upset_masks(lattice: FiniteLattice) -> list[int]:
    """Every up-closed subset (including the empty one), for exhaustive law
    checks on small carriers."""
    n = lattice.n
    if n > _FILTER_SCAN_LIMIT:
        raise BudgetExceeded(
            f"up-set subset scan on {n} elements (limit {_FILTER_SCAN_LIMIT})"
        )
    return [
        mask
        for mask in range(1 << n)
        if all(lattice.up[i] & mask == lattice.up[i] for i in bits(mask))
    ]


def is_proper(f: Filter) -> bool:
    """A filter is proper unless it contains bottom (i.e. is all of L)."""
    return f.generator != f.lattice.bottom


def intersection(f: Filter, g: Filter) -> Filter:
    """Set intersection of filters; principal on the join of the generators."""
    require_same_carrier(f.lattice, g.lattice, "filter intersection")
    return Filter(f.lattice, f.lattice.join(f.generator, g.generator))


def refines(f: Filter, g: Filter) -> bool:
    """Whether ``f`` is finer than ``g`` (contains every member of ``g``)."""
    require_same_carrier(f.lattice, g.lattice, "filter refinement")
    return f.lattice.leq(f.generator, g.generator)


@lru_cache(maxsize=None)
def _nonzero_meet_rows(lattice: FiniteLattice) -> tuple[int, ...]:
    """Row per element: mask of elements whose meet with it is not bottom."""
    n = lattice.n
    rows = [0] * n
    for a in range(n):
        for b in range(a, n):
            if lattice.meet(a, b) != lattice.bottom:
                rows[a] |= 1 << b
                rows[b] |= 1 << a
    return tuple(rows)


def _member_mask(x: Filter | UpSet) -> int:
    return x.members


def mesh(a: Filter | UpSet, b: Filter | UpSet) -> bool:
    """Whether every member of ``a`` meets every member of ``b`` above bottom."""
    require_same_carrier(a.lattice, b.lattice, "mesh")
    rows = _nonzero_meet_rows(a.lattice)
    bm = _member_mask(b)
    return all(rows[x] & bm == bm for x in bits(_member_mask(a)))


def grill(a: Filter | UpSet) -> UpSet:
    """The elements meeting every member of ``a`` above bottom.

    Always an up-set; the grill of the improper filter is empty, the grill of
    the empty up-set is everything.
    """
    lat = a.lattice
    rows = _nonzero_meet_rows(lat)
    out = lat.full_mask
    if isinstance(a, Filter):
        out = rows[a.generator]
    else:
        for x in bits(a.members):
            out &= rows[x]
    return UpSet(lat, out)


def restrict_complemented(f: Filter) -> Filter:
    """The filter generated by the complemented members of ``f``.

    Top is always a complemented member, so this is well defined; the result
    is the coarsest filter with the same complemented members.
    """
    comp = analyze(f.lattice).complemented
    gen = f.lattice.meet_of(bits(f.members & comp))
    return Filter(f.lattice, gen)


def preimage_upset(phi: LatticeMorphism, a: UpSet) -> UpSet:
    """The preimage of an up-set under a monotone map (again an up-set)."""
    require_same_carrier(phi.target, a.lattice, "up-set preimage")
    members = 0
    for l in range(phi.source.n):
        if a.members >> phi.values[l] & 1:
            members |= 1 << l
    return UpSet(phi.source, members)


def _preimage_generator(phi: LatticeMorphism, target_gen: int) -> int:
    src, tgt = phi.source, phi.target
    return src.meet_of(
        l for l in range(src.n) if tgt.leq(target_gen, phi.values[l])
    )


def preimage_filter(phi: LatticeMorphism, f: Filter) -> Filter:
    """The preimage of a filter under an infima-preserving map.

    For a coframe morphism the preimage of a principal up-set is again a
    principal up-set; the membership equality is verified, not assumed.
    """
    require_same_carrier(phi.target, f.lattice, "filter preimage")
    require_morphism(phi)
    gen = _preimage_generator(phi, f.generator)
    src = phi.source
    for l in range(src.n):
        if phi.target.leq(f.generator, phi.values[l]) != src.leq(gen, l):
            raise AxiomViolation(
                "preimage",
                f"preimage of ^{f.lattice.label(f.generator)!r} is not principal "
                f"at {src.label(l)!r}",
            )
    return Filter(src, gen)
