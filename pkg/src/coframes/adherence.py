"""Adherence structures on finite coframes.

An adherence structure assigns to every lattice element an adherence,
monotonically, additively on complemented elements, vanishing at bottom, and
determined on arbitrary elements as the infimum over complemented elements
above.  On distributive carriers additivity then extends to all pairs; the
validator asserts that consequence rather than re-checking it as an axiom.

The module converts between convergence and adherence views (adherence of a
convergence structure, limits of an adherence structure), computes closed
elements, checks continuity, builds final lifts along sinks, and enumerates
or samples adherence structures through their values on the atoms of the
complemented part (a bijective parametrization).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .convergence import ConvergenceStructure
from .errors import AxiomViolation, BudgetExceeded, NotDistributive
from .filters import _nonzero_meet_rows
from .lattice import (
    FiniteLattice,
    LatticeMorphism,
    analyze,
    bits,
    left_adjoint,
    require_morphism,
    require_same_carrier,
)

__all__ = [
    "AdherenceStructure",
    "adherence_structure",
    "adherence_violation",
    "adh0_table",
    "adh0",
    "adh_table",
    "adh",
    "adh_structure_of",
    "lim_of_nu",
    "ClosedReport",
    "closed_sets",
    "check_adh_continuity",
    "final_lift_adh",
    "complemented_atoms",
    "adherence_from_atom_values",
    "enumerate_adherence_structures",
    "random_adherence_structure",
]


@dataclass(frozen=True, eq=False)
class AdherenceStructure:
    """A validated adherence table.  Build through :func:`adherence_structure`."""

    lattice: FiniteLattice
    nutab: tuple[int, ...]

    def __repr__(self) -> str:
        vals = ", ".join(
            f"{self.lattice.label(l)}->{self.lattice.label(v)}"
            for l, v in enumerate(self.nutab)
        )
        return f"AdherenceStructure({self.lattice.name}: {vals})"


def adherence_violation(
    lattice: FiniteLattice, nutab: Sequence[int]
) -> tuple[str, str] | None:
    """First broken axiom as ``(axiom, witness)``, or None if all hold.

    Checked: monotonicity; bottom maps to bottom; additivity on complemented
    pairs; determination of every value as the infimum over complemented
    elements above.  All-pairs additivity follows from these on a
    distributive carrier and is asserted, not reported.
    """
    lat = lattice
    if len(nutab) != lat.n or any(not 0 <= v < lat.n for v in nutab):
        return ("adherence.table", "table does not match carrier")
    if not analyze(lat).distributive:
        raise NotDistributive(
            f"{lat.name}: adherence structures live on distributive lattices"
        )
    comp = analyze(lat).complemented
    for l in range(lat.n):
        for m in bits(lat.up[l]):
            if not lat.leq(nutab[l], nutab[m]):
                return (
                    "adherence.monotone",
                    f"{lat.label(l)!r} <= {lat.label(m)!r} but adherences "
                    f"{lat.label(nutab[l])!r} !<= {lat.label(nutab[m])!r}",
                )
    if nutab[lat.bottom] != lat.bottom:
        return (
            "adherence.bottom",
            f"adherence of bottom is {lat.label(nutab[lat.bottom])!r}",
        )
    comp_elems = list(bits(comp))
    for a in comp_elems:
        for b in comp_elems:
            j = lat.join(a, b)
            if nutab[j] != lat.join(nutab[a], nutab[b]):
                return (
                    "adherence.additive",
                    f"adherence of {lat.label(a)!r} v {lat.label(b)!r} is "
                    f"{lat.label(nutab[j])!r}, expected "
                    f"{lat.label(lat.join(nutab[a], nutab[b]))!r}",
                )
    for l in range(lat.n):
        expected = lat.meet_of(nutab[a] for a in bits(lat.up[l] & comp))
        if nutab[l] != expected:
            return (
                "adherence.infimum",
                f"adherence of {lat.label(l)!r} is {lat.label(nutab[l])!r}, "
                f"infimum over complemented elements above gives "
                f"{lat.label(expected)!r}",
            )
    for x in range(lat.n):
        for y in range(x, lat.n):
            j = lat.join(x, y)
            assert nutab[j] == lat.join(nutab[x], nutab[y]), (
                "additivity on complemented pairs with infimum determination "
                "must force additivity everywhere on a distributive carrier"
            )
    return None


def adherence_structure(
    lattice: FiniteLattice, nutab: Sequence[int]
) -> AdherenceStructure:
    """Validating constructor; raises :class:`AxiomViolation` with a witness."""
    violation = adherence_violation(lattice, nutab)
    if violation is not None:
        raise AxiomViolation(*violation)
    return AdherenceStructure(lattice, tuple(nutab))


# ---------------------------------------------------------------------------
# adherence of a convergence structure


def adh0_table(cs: ConvergenceStructure) -> tuple[int, ...]:
    """Raw adherence: join of limits over all filters meshing the element."""
    lat = cs.lattice
    rows = _nonzero_meet_rows(lat)
    return tuple(
        lat.join_of(cs.limtab[g] for g in bits(rows[l])) for l in range(lat.n)
    )


def adh0(cs: ConvergenceStructure, l: int) -> int:
    return adh0_table(cs)[l]


def adh_table(cs: ConvergenceStructure) -> tuple[int, ...]:
    """Adherence corrected to be infimum-determined by complemented elements."""
    lat = cs.lattice
    raw = adh0_table(cs)
    comp = analyze(lat).complemented
    return tuple(
        lat.meet_of(raw[a] for a in bits(lat.up[l] & comp)) for l in range(lat.n)
    )


def adh(cs: ConvergenceStructure, l: int) -> int:
    return adh_table(cs)[l]


def adh_structure_of(cs: ConvergenceStructure) -> AdherenceStructure:
    """The adherence structure induced by a convergence structure.

    The corrected table satisfies the axioms by construction, so validation
    runs only as a debug assertion.
    """
    tab = adh_table(cs)
    assert adherence_violation(cs.lattice, tab) is None
    return AdherenceStructure(cs.lattice, tab)


def lim_of_nu(ns: AdherenceStructure) -> ConvergenceStructure:
    """The convergence structure induced by an adherence structure: a filter
    converges to the infimum of the adherences of the complemented elements
    it meshes."""
    lat = ns.lattice
    comp = analyze(lat).complemented
    rows = _nonzero_meet_rows(lat)
    tab = tuple(
        lat.meet_of(ns.nutab[a] for a in bits(rows[g] & comp))
        for g in range(lat.n)
    )
    return ConvergenceStructure(lat, tab)


# ---------------------------------------------------------------------------
# closed elements


@dataclass(frozen=True)
class ClosedReport:
    """Elements fixed under adherence.

    ``quasi_closed`` collects elements whose raw adherence stays below them;
    ``closed`` is its complemented part.  Both routes (raw or corrected
    adherence) carve out the same complemented elements, which is asserted.
    """

    quasi_closed: tuple[int, ...]
    closed: tuple[int, ...]


def closed_sets(
    x: ConvergenceStructure | AdherenceStructure,
) -> ClosedReport:
    lat = x.lattice
    comp = analyze(lat).complemented
    if isinstance(x, AdherenceStructure):
        quasi = tuple(l for l in range(lat.n) if lat.leq(x.nutab[l], l))
        return ClosedReport(
            quasi_closed=quasi, closed=tuple(l for l in quasi if comp >> l & 1)
        )
    raw = adh0_table(x)
    corrected = adh_table(x)
    quasi = tuple(l for l in range(lat.n) if lat.leq(raw[l], l))
    closed = tuple(l for l in quasi if comp >> l & 1)
    via_corrected = tuple(
        l for l in range(lat.n) if comp >> l & 1 and lat.leq(corrected[l], l)
    )
    assert closed == via_corrected, (
        "raw and corrected adherence must agree about closedness of "
        "complemented elements"
    )
    return ClosedReport(quasi_closed=quasi, closed=closed)


# ---------------------------------------------------------------------------
# continuity and final lifts


def check_adh_continuity(
    phi: LatticeMorphism,
    source: AdherenceStructure,
    target: AdherenceStructure,
) -> bool:
    """Continuity of a coframe morphism between adherence structures: every
    target element's adherence lies below the image of the adherence of its
    inverse image (computed through the left adjoint)."""
    require_same_carrier(phi.source, source.lattice, "continuity source")
    require_same_carrier(phi.target, target.lattice, "continuity target")
    require_morphism(phi)
    adj = left_adjoint(phi)
    tgt = phi.target
    return all(
        tgt.leq(target.nutab[l], phi.values[source.nutab[adj.values[l]]])
        for l in range(tgt.n)
    )


def _antichains(lattice: FiniteLattice, members: Sequence[int]) -> Iterable[int]:
    """Bitmasks over ``members`` indices forming antichains in the lattice."""
    order = list(members)
    k = len(order)
    comparable = []
    for i in range(k):
        mask = 0
        for j in range(k):
            if i != j and (
                lattice.leq(order[i], order[j]) or lattice.leq(order[j], order[i])
            ):
                mask |= 1 << j
        comparable.append(mask)

    def walk(idx: int, chosen: int, blocked: int) -> Iterable[int]:
        if idx == k:
            yield chosen
            return
        yield from walk(idx + 1, chosen, blocked)
        if not blocked >> idx & 1:
            yield from walk(idx + 1, chosen | 1 << idx, blocked | comparable[idx])

    yield from walk(0, 0, 0)


def final_lift_adh(
    lattice: FiniteLattice,
    sink: Sequence[tuple[LatticeMorphism, AdherenceStructure]],
) -> AdherenceStructure:
    """The coarsest adherence structure on ``lattice`` making every sink map
    continuous.

    Each complemented element receives a contribution: the infimum over the
    sink of the images of the adherences of its inverse images.  The lifted
    adherence of an element is the infimum, over families of complemented
    elements joining above it, of the joins of their contributions; it
    suffices to range over antichains, since dropping a dominated family
    member keeps the join constraint while shrinking the term.  The empty
    sink yields the chaotic structure (bottom at bottom, top elsewhere).
    """
    adjoints = []
    for phi, ns in sink:
        require_same_carrier(phi.target, lattice, "final lift target")
        require_same_carrier(phi.source, ns.lattice, "final lift source")
        require_morphism(phi)
        adjoints.append(left_adjoint(phi))
    comp_elems = list(bits(analyze(lattice).complemented))
    contrib = {
        a: lattice.meet_of(
            phi.values[ns.nutab[adj.values[a]]]
            for (phi, ns), adj in zip(sink, adjoints)
        )
        for a in comp_elems
    }
    best = [None] * lattice.n
    for chosen in _antichains(lattice, comp_elems):
        family = [comp_elems[i] for i in bits(chosen)]
        j = lattice.join_of(family)
        term = lattice.join_of(contrib[a] for a in family)
        best[j] = term if best[j] is None else lattice.meet(best[j], term)
    tab = []
    for l in range(lattice.n):
        tab.append(
            lattice.meet_of(
                best[j] for j in bits(lattice.up[l]) if best[j] is not None
            )
        )
    result = tuple(tab)
    assert adherence_violation(lattice, result) is None
    return AdherenceStructure(lattice, result)


# ---------------------------------------------------------------------------
# enumeration through atom values


def complemented_atoms(lattice: FiniteLattice) -> tuple[int, ...]:
    """Minimal nonbottom complemented elements (the complemented part of a
    distributive lattice is a finite Boolean algebra, so these generate it
    by joins)."""
    comp = analyze(lattice).complemented
    elems = [a for a in bits(comp) if a != lattice.bottom]
    return tuple(
        a
        for a in elems
        if not any(b != a and lattice.leq(b, a) for b in elems)
    )


def adherence_from_atom_values(
    lattice: FiniteLattice, values: Sequence[int]
) -> AdherenceStructure:
    """The adherence structure with the given adherences at the complemented
    atoms.

    Any choice of values is legal: the additive extension to complemented
    elements and the infimum extension everywhere else satisfy all axioms,
    and every adherence structure arises this way exactly once.
    """
    atoms = complemented_atoms(lattice)
    if len(values) != len(atoms):
        raise AxiomViolation(
            "adherence.atoms",
            f"expected {len(atoms)} atom values, got {len(values)}",
        )
    comp = analyze(lattice).complemented
    on_comp = {}
    for c in bits(comp):
        on_comp[c] = lattice.join_of(
            v for a, v in zip(atoms, values) if lattice.leq(a, c)
        )
    tab = tuple(
        lattice.meet_of(on_comp[c] for c in bits(lattice.up[l] & comp))
        for l in range(lattice.n)
    )
    assert adherence_violation(lattice, tab) is None
    return AdherenceStructure(lattice, tab)


def enumerate_adherence_structures(
    lattice: FiniteLattice, *, budget: int = 200_000
) -> Iterable[AdherenceStructure]:
    """All adherence structures on the carrier, via atom values."""
    atoms = complemented_atoms(lattice)
    total = lattice.n ** len(atoms)
    if total > budget:
        raise BudgetExceeded(
            f"{total} adherence structures on {lattice.name} (budget {budget})"
        )
    values = [0] * len(atoms)
    while True:
        yield adherence_from_atom_values(lattice, values)
        i = 0
        while i < len(values) and values[i] == lattice.n - 1:
            values[i] = 0
            i += 1
        if i == len(values):
            return
        values[i] += 1


def random_adherence_structure(
    rng: random.Random, lattice: FiniteLattice
) -> AdherenceStructure:
    """A uniformly random adherence structure (uniform over atom values)."""
    atoms = complemented_atoms(lattice)
    return adherence_from_atom_values(
        lattice, [rng.randrange(lattice.n) for _ in atoms]
    )
