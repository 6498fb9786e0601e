"""Convergence structures on finite coframes.

A convergence structure assigns to every filter a limit element, antitone in
the filter order: finer filters converge to at least as much.  Since filters
on a finite lattice are principal, the structure is a table indexed by
generator: ``limtab[g]`` is the limit of the filter of elements above ``g``.

The module provides classification (classical / limit / strict /
pretopological / centered / topological), continuity and finality of coframe
morphisms, the one-step and iterated modifications that complete a structure
into a limit (or pretopological) one, final lifts along sinks, and points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    AxiomViolation,
    BudgetExceeded,
    IterationBound,
    NotDistributive,
)
from .filters import Filter, _preimage_generator
from .lattice import (
    FiniteLattice,
    LatticeMorphism,
    analyze,
    bits,
    require_morphism,
    require_same_carrier,
)

__all__ = [
    "ConvergenceStructure",
    "StructureClass",
    "ContinuityReport",
    "convergence_structure",
    "lim",
    "classify",
    "check_continuity",
    "s1",
    "s_infinity",
    "final_lift",
    "points",
    "S1_KINDS",
]


@dataclass(frozen=True, eq=False)
class ConvergenceStructure:
    """An antitone limit table on a finite distributive lattice.

    Validated eagerly: the carrier must be distributive and the table
    antitone.  Instances are immutable; compare tables, not objects.
    """

    lattice: FiniteLattice
    limtab: tuple[int, ...]

    def __post_init__(self) -> None:
        lat = self.lattice
        tab = self.limtab
        if len(tab) != lat.n or any(not 0 <= v < lat.n for v in tab):
            raise AxiomViolation("convergence.table", "table does not match carrier")
        if not analyze(lat).distributive:
            raise NotDistributive(
                f"{lat.name}: convergence structures live on distributive lattices"
            )
        for g in range(lat.n):
            for h in bits(lat.up[g]):
                if not lat.leq(tab[h], tab[g]):
                    raise AxiomViolation(
                        "convergence.antitone",
                        f"finer filter at {lat.label(h)!r} converges to "
                        f"{lat.label(tab[h])!r}, above {lat.label(tab[g])!r}",
                    )

    def __repr__(self) -> str:
        vals = ", ".join(
            f"{self.lattice.label(g)}->{self.lattice.label(v)}"
            for g, v in enumerate(self.limtab)
        )
        return f"ConvergenceStructure({self.lattice.name}: {vals})"


def convergence_structure(
    lattice: FiniteLattice, limtab: Sequence[int]
) -> ConvergenceStructure:
    """Validating constructor (same checks as the dataclass, kept for symmetry)."""
    return ConvergenceStructure(lattice, tuple(limtab))


def lim(cs: ConvergenceStructure, f: Filter) -> int:
    """The limit of a filter."""
    require_same_carrier(cs.lattice, f.lattice, "lim")
    return cs.limtab[f.generator]


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class StructureClass:
    """Which structure classes a convergence structure belongs to.

    ``pretopological_sampled`` marks that the family check was randomized
    (carrier too large for the exhaustive scan) rather than exhaustive.
    """

    classical: bool
    limit: bool
    strict: bool
    pretopological: bool
    centered: bool
    topological: bool
    pretopological_sampled: bool = False

    def flags(self) -> dict[str, bool]:
        return {
            "classical": self.classical,
            "limit": self.limit,
            "strict": self.strict,
            "pretopological": self.pretopological,
            "centered": self.centered,
            "topological": self.topological,
        }


_EXHAUSTIVE_FAMILY_BITS = 12


def _pretopological(
    cs: ConvergenceStructure, seed: int, sample_count: int
) -> tuple[bool, bool]:
    """Limits must turn arbitrary filter intersections into limit infima.

    A family of filters intersects to the filter generated by the join of the
    generators; the empty family intersects to the improper filter (generated
    by bottom) and the empty infimum of limits is top, so pretopological
    structures are in particular strict.  Exhaustive over all families while
    ``2**n`` is small; seeded sampling (reported via the second component)
    beyond that.
    """
    lat, tab = cs.lattice, cs.limtab
    n = lat.n
    if n <= _EXHAUSTIVE_FAMILY_BITS:
        size = 1 << n
        join_gen = [lat.bottom] * size
        meet_lim = [lat.top] * size
        for s in range(1, size):
            low = s & -s
            g = low.bit_length() - 1
            rest = s ^ low
            join_gen[s] = lat.join(join_gen[rest], g)
            meet_lim[s] = lat.meet(meet_lim[rest], tab[g])
        ok = all(tab[join_gen[s]] == meet_lim[s] for s in range(size))
        return ok, False
    import random

    rng = random.Random(seed)
    full = lat.full_mask
    samples = [0, full] + [rng.getrandbits(n) for _ in range(sample_count)]
    for s in samples:
        members = list(bits(s & full))
        j = lat.join_of(members)
        m = lat.meet_of(tab[g] for g in members)
        if tab[j] != m:
            return False, True
    return True, True


def classify(
    cs: ConvergenceStructure, *, seed: int = 0, sample_count: int = 4096
) -> StructureClass:
    """Membership of the structure in each of the six classes.

    - classical: the limit only depends on the complemented members of the
      filter;
    - limit: binary filter intersections map to limit infima;
    - strict: the improper filter converges to top;
    - pretopological: arbitrary (including empty) intersections map to infima;
    - centered: every element sits below its adherence;
    - topological: equal to its own topological modification.
    """
    lat, tab = cs.lattice, cs.limtab
    comp = analyze(lat).complemented
    classical = all(
        tab[g] == tab[lat.meet_of(bits(lat.up[g] & comp))] for g in range(lat.n)
    )
    limit_flag = all(
        tab[lat.join(g, h)] == lat.meet(tab[g], tab[h])
        for g in range(lat.n)
        for h in range(g, lat.n)
    )
    strict = tab[lat.bottom] == lat.top
    pretop, sampled = _pretopological(cs, seed, sample_count)

    from .adherence import adh_table  # deferred: adherence builds on this module

    adh = adh_table(cs)
    centered = all(lat.leq(l, adh[l]) for l in range(lat.n))

    from .topology import topological_modification  # deferred, as above

    topological = tab == topological_modification(cs).limtab
    if topological:
        assert pretop, "topological structures must be pretopological"
    if pretop and not sampled:
        assert strict and limit_flag, (
            "pretopological structures must be strict limit structures"
        )
    return StructureClass(
        classical=classical,
        limit=limit_flag,
        strict=strict,
        pretopological=pretop,
        centered=centered,
        topological=topological,
        pretopological_sampled=sampled,
    )


# ---------------------------------------------------------------------------
# continuity


@dataclass(frozen=True)
class ContinuityReport:
    continuous: bool
    final: bool
    witness: str | None = None


def check_continuity(
    phi: LatticeMorphism,
    source: ConvergenceStructure,
    target: ConvergenceStructure,
) -> ContinuityReport:
    """Continuity (and finality) of a coframe morphism between structures.

    The map is continuous when every filter on the target converges below the
    image of the limit of its preimage filter, and final when equality holds
    throughout.
    """
    require_same_carrier(phi.source, source.lattice, "continuity source")
    require_same_carrier(phi.target, target.lattice, "continuity target")
    require_morphism(phi)
    src_lat, tgt_lat = phi.source, phi.target
    continuous = True
    final = True
    witness: str | None = None
    for g in range(tgt_lat.n):
        lhs = target.limtab[g]
        rhs = phi.values[source.limtab[_preimage_generator(phi, g)]]
        if lhs != rhs:
            final = False
        if not tgt_lat.leq(lhs, rhs):
            continuous = False
            if witness is None:
                witness = (
                    f"filter at {tgt_lat.label(g)!r}: limit "
                    f"{tgt_lat.label(lhs)!r} not below image "
                    f"{tgt_lat.label(rhs)!r}"
                )
    return ContinuityReport(continuous=continuous, final=final, witness=witness)


# ---------------------------------------------------------------------------
# one-step and iterated modifications

S1_KINDS = ("limit", "strict", "strict_limit", "pretop")

_S1_SUBSET_BITS = 20


def s1(cs: ConvergenceStructure, kind: str) -> ConvergenceStructure:
    """One completion step towards the given class.

    - ``limit``: new limit at ``f`` is the join of ``lim g ∧ lim h`` over all
      binary splittings ``g ∨ h ≥ f``;
    - ``strict``: bumps the improper filter's limit to top;
    - ``strict_limit`` / ``pretop``: join over arbitrary families whose
      intersection refines ``f`` (on finite carriers these two coincide; the
      empty family only covers the improper filter and contributes top).

    The result is pointwise above the input and antitone; iterating reaches
    the least fixed point (see :func:`s_infinity`).
    """
    lat, tab = cs.lattice, cs.limtab
    n = lat.n
    if kind == "strict":
        new = list(tab)
        new[lat.bottom] = lat.top
        return ConvergenceStructure(lat, tuple(new))
    if kind == "limit":
        contrib = [lat.bottom] * n
        for g in range(n):
            for h in range(g, n):
                j = lat.join(g, h)
                contrib[j] = lat.join(contrib[j], lat.meet(tab[g], tab[h]))
        new = [
            lat.join_of(contrib[j] for j in bits(lat.up[f])) for f in range(n)
        ]
        return ConvergenceStructure(lat, tuple(new))
    if kind in ("strict_limit", "pretop"):
        if n > _S1_SUBSET_BITS:
            raise BudgetExceeded(
                f"family completion step on {n} elements (limit {_S1_SUBSET_BITS})"
            )
        size = 1 << n
        contrib = [lat.bottom] * n
        join_gen = [lat.bottom] * size
        meet_lim = [lat.top] * size
        contrib[lat.bottom] = lat.top  # the empty family
        for s in range(1, size):
            low = s & -s
            g = low.bit_length() - 1
            rest = s ^ low
            join_gen[s] = lat.join(join_gen[rest], g)
            meet_lim[s] = lat.meet(meet_lim[rest], tab[g])
            j = join_gen[s]
            contrib[j] = lat.join(contrib[j], meet_lim[s])
        new = [
            lat.join_of(contrib[j] for j in bits(lat.up[f])) for f in range(n)
        ]
        return ConvergenceStructure(lat, tuple(new))
    raise ValueError(f"unknown completion kind {kind!r}; expected one of {S1_KINDS}")


def s_infinity(cs: ConvergenceStructure, kind: str) -> ConvergenceStructure:
    """Iterate :func:`s1` to its least fixed point above the input.

    Each step is inflationary and monotone, so the iteration is a Kleene
    chain; it must stabilize within ``n**2 + 2`` steps (every entry can only
    climb along a chain in the carrier), and a failure to do so is an
    internal-bug guard, not an input error.
    """
    bound = cs.lattice.n * cs.lattice.n + 2
    current = cs
    for _ in range(bound):
        step = s1(current, kind)
        if step.limtab == current.limtab:
            return current
        current = step
    raise IterationBound(f"completion {kind!r} did not stabilize in {bound} steps")


# ---------------------------------------------------------------------------
# final lifts and points


def final_lift(
    lattice: FiniteLattice,
    sink: Sequence[tuple[LatticeMorphism, ConvergenceStructure]],
) -> ConvergenceStructure:
    """The coarsest structure on ``lattice`` making every sink map continuous.

    Each sink entry is a coframe morphism into ``lattice`` together with a
    structure on its source; the lifted limit of a filter is the infimum over
    the sink of the images of the limits of the preimage filters.  The empty
    sink yields the chaotic structure (everything converges to top).
    """
    for phi, cs in sink:
        require_same_carrier(phi.target, lattice, "final lift target")
        require_same_carrier(phi.source, cs.lattice, "final lift source")
        require_morphism(phi)
    tab = []
    for f in range(lattice.n):
        tab.append(
            lattice.meet_of(
                phi.values[cs.limtab[_preimage_generator(phi, f)]]
                for phi, cs in sink
            )
        )
    return ConvergenceStructure(lattice, tuple(tab))


def points(cs: ConvergenceStructure) -> tuple[int, ...]:
    """Join-prime elements converging to themselves (up to refinement):
    ``p`` is a point when the filter at ``p`` converges above ``p``."""
    lat = cs.lattice
    primes = analyze(lat).join_primes
    return tuple(p for p in bits(primes) if lat.leq(p, cs.limtab[p]))
