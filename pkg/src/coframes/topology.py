"""Topological structures on finite coframes, and the sublocale retract.

A topological structure on a finite distributive lattice is a sublattice of
complemented elements containing both bounds: its members are the closed
elements.  Such a structure induces an adherence structure (infimum over
closed elements above) and a convergence structure (a filter converges to
the infimum of the closed elements it meshes); conversely every convergence
structure has a topological modification, the finest topological structure
coarser than it.

The second half of the module builds the lattice of sublocales of a finite
frame, the canonical closed-element embedding, the induced action on frame
morphisms, and the collapse morphism exhibiting topological carriers as a
coreflective image of sublocale lattices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .adherence import AdherenceStructure, adherence_violation
from .convergence import ConvergenceStructure
from .errors import (
    AxiomViolation,
    BudgetExceeded,
    NotASublattice,
    NotComplemented,
    NotDistributive,
    StarFormulaMismatch,
)
from .filters import _nonzero_meet_rows
from .lattice import (
    FiniteLattice,
    LatticeMorphism,
    analyze,
    bits,
    dualize,
    morphism_violation,
    require_morphism,
    require_same_carrier,
    sublattice,
)

__all__ = [
    "TopologicalStructure",
    "topological_structure",
    "nu_of_C",
    "C_of_nu",
    "lim_of_C",
    "topological_modification",
    "is_topological",
    "maps_closed_to_closed",
    "enumerate_topologies",
    "heyting_implication",
    "SublocaleLattice",
    "sublocale_lattice",
    "wedge_C",
    "is_strong",
    "star",
    "sublocale_map",
    "sublocale_counit",
]


@dataclass(frozen=True, eq=False)
class TopologicalStructure:
    """A set of closed elements: complemented, both bounds, meet/join closed.

    ``closed`` is a bitmask over carrier indices.  Build through
    :func:`topological_structure`.
    """

    lattice: FiniteLattice
    closed: int

    def closed_list(self) -> list[int]:
        return list(bits(self.closed))

    def __repr__(self) -> str:
        members = ", ".join(self.lattice.label(c) for c in bits(self.closed))
        return f"TopologicalStructure({self.lattice.name}: {{{members}}})"


def topological_structure(
    lattice: FiniteLattice, members: Iterable[int]
) -> TopologicalStructure:
    """Validating constructor for a topological structure."""
    if not analyze(lattice).distributive:
        raise NotDistributive(
            f"{lattice.name}: topological structures live on distributive lattices"
        )
    mask = 0
    for m in members:
        if not 0 <= m < lattice.n:
            raise AxiomViolation("topology.members", f"index {m} out of range")
        mask |= 1 << m
    comp = analyze(lattice).complemented
    for m in bits(mask & ~comp):
        raise NotComplemented(
            f"closed element {lattice.label(m)!r} has no complement"
        )
    if not mask >> lattice.bottom & 1 or not mask >> lattice.top & 1:
        raise AxiomViolation(
            "topology.bounds", "closed elements must include both bounds"
        )
    elems = list(bits(mask))
    for a in elems:
        for b in elems:
            for op, word in ((lattice.meet, "meet"), (lattice.join, "join")):
                r = op(a, b)
                if not mask >> r & 1:
                    raise NotASublattice(
                        f"{word} of closed {lattice.label(a)!r} and "
                        f"{lattice.label(b)!r} is {lattice.label(r)!r}, not closed"
                    )
    return TopologicalStructure(lattice, mask)


def nu_of_C(ts: TopologicalStructure) -> AdherenceStructure:
    """The adherence structure of a topological structure: each element's
    adherence is the infimum of the closed elements above it.  The axioms
    hold by construction (asserted, not re-raised)."""
    lat = ts.lattice
    tab = tuple(
        lat.meet_of(c for c in bits(lat.up[l] & ts.closed)) for l in range(lat.n)
    )
    assert adherence_violation(lat, tab) is None
    return AdherenceStructure(lat, tab)


def C_of_nu(ns: AdherenceStructure) -> TopologicalStructure:
    """The topological structure of an adherence structure: complemented
    elements fixed (from above) by their adherence."""
    lat = ns.lattice
    comp = analyze(lat).complemented
    members = [l for l in bits(comp) if lat.leq(ns.nutab[l], l)]
    return topological_structure(lat, members)


def lim_of_C(ts: TopologicalStructure) -> ConvergenceStructure:
    """The convergence structure of a topological structure: a filter
    converges to the infimum of the closed elements it meshes."""
    lat = ts.lattice
    rows = _nonzero_meet_rows(lat)
    tab = tuple(
        lat.meet_of(c for c in bits(rows[g] & ts.closed)) for g in range(lat.n)
    )
    return ConvergenceStructure(lat, tab)


def topological_modification(cs: ConvergenceStructure) -> ConvergenceStructure:
    """The finest topological convergence structure coarser than the input:
    induced by the input's closed elements."""
    from .adherence import closed_sets  # local import keeps module load acyclic

    report = closed_sets(cs)
    ts = topological_structure(cs.lattice, report.closed)
    return lim_of_C(ts)


def is_topological(cs: ConvergenceStructure) -> bool:
    return cs.limtab == topological_modification(cs).limtab


def maps_closed_to_closed(
    phi: LatticeMorphism, source: TopologicalStructure, target: TopologicalStructure
) -> tuple[bool, str | None]:
    """Whether the morphism carries every closed element of its source
    structure to a closed element of the target structure (the topological
    reading of continuity)."""
    require_same_carrier(phi.source, source.lattice, "closed-map source")
    require_same_carrier(phi.target, target.lattice, "closed-map target")
    require_morphism(phi)
    for c in bits(source.closed):
        img = phi.values[c]
        if not target.closed >> img & 1:
            return False, (
                f"closed {phi.source.label(c)!r} maps to non-closed "
                f"{phi.target.label(img)!r}"
            )
    return True, None


def enumerate_topologies(
    lattice: FiniteLattice, *, budget: int = 1 << 20
) -> Iterable[TopologicalStructure]:
    """All topological structures on the carrier, coarsest (just the bounds)
    first by member count."""
    comp = analyze(lattice).complemented
    optional = [
        c for c in bits(comp) if c != lattice.bottom and c != lattice.top
    ]
    if 1 << len(optional) > budget:
        raise BudgetExceeded(
            f"2**{len(optional)} candidate topologies on {lattice.name}"
        )
    base = 1 << lattice.bottom | 1 << lattice.top
    found = []
    for pick in range(1 << len(optional)):
        mask = base
        for i in bits(pick):
            mask |= 1 << optional[i]
        elems = list(bits(mask))
        if all(
            mask >> lattice.meet(a, b) & 1 and mask >> lattice.join(a, b) & 1
            for a in elems
            for b in elems
        ):
            found.append(mask)
    for mask in sorted(found, key=lambda m: (m.bit_count(), m)):
        yield TopologicalStructure(lattice, mask)


# ---------------------------------------------------------------------------
# sublocales of a finite frame
#
# Frames enter these functions in frame orientation: the lattice's own meet
# is the frame meet.  The lattice of sublocales is itself produced in coframe
# orientation (ordered by inclusion), and the canonical embedding of the
# frame's opposite into it is a coframe morphism.


def heyting_implication(lattice: FiniteLattice, u: int, v: int) -> int:
    """The largest ``w`` with ``w ∧ u <= v`` (meets in the lattice's own
    orientation).  Requires a distributive carrier."""
    best = lattice.join_of(
        w for w in range(lattice.n) if lattice.leq(lattice.meet(w, u), v)
    )
    if not lattice.leq(lattice.meet(best, u), v):
        raise NotDistributive(
            f"{lattice.name}: implication {lattice.label(u)!r} -> "
            f"{lattice.label(v)!r} does not exist"
        )
    return best


_SUBLOCALE_BUDGET = 8


@dataclass(frozen=True, eq=False)
class SublocaleLattice:
    """The sublocales of a finite frame, ordered by inclusion.

    ``masks[i]`` is the member set of the ``i``-th sublocale as a bitmask
    over frame elements.  ``closed_index[u]`` / ``open_index[u]`` locate the
    closed and open sublocales attached to the frame element ``u``, and
    ``closed_embedding`` is the (injective) coframe morphism from the frame's
    opposite sending ``u`` to its closed sublocale.
    """

    frame: FiniteLattice
    lattice: FiniteLattice
    masks: tuple[int, ...]
    closed_index: tuple[int, ...]
    open_index: tuple[int, ...]
    closed_embedding: LatticeMorphism

    def canonical_topology(self) -> TopologicalStructure:
        return topological_structure(self.lattice, self.closed_index)


def sublocale_lattice(omega: FiniteLattice) -> SublocaleLattice:
    """All sublocales of a finite frame (given in frame orientation).

    A sublocale is a subset containing the frame's top, closed under binary
    meets, and closed under implication from arbitrary frame elements.  The
    collection is closed under intersection, so it forms a lattice under
    inclusion; meets are intersections, joins are least upper bounds.
    """
    if not analyze(omega).distributive:
        raise NotDistributive(f"{omega.name}: sublocales need a distributive frame")
    n = omega.n
    if n > _SUBLOCALE_BUDGET:
        raise BudgetExceeded(
            f"sublocales of {omega.name}: {n} elements (limit {_SUBLOCALE_BUDGET})"
        )
    imp = [
        [heyting_implication(omega, u, v) for v in range(n)] for u in range(n)
    ]
    members = []
    for s in range(1 << n):
        if not s >> omega.top & 1:
            continue
        elems = list(bits(s))
        if not all(s >> omega.meet(a, b) & 1 for a in elems for b in elems):
            continue
        if not all(s >> imp[u][v] & 1 for u in range(n) for v in elems):
            continue
        members.append(s)
    members.sort(key=lambda s: (s.bit_count(), s))
    pos = {s: i for i, s in enumerate(members)}
    count = len(members)
    up = [0] * count
    down = [0] * count
    for i, s in enumerate(members):
        for j, t in enumerate(members):
            if s & t == s:
                up[i] |= 1 << j
                down[j] |= 1 << i
    meet_table = []
    join_table = []
    for s in members:
        meets = []
        joins = []
        for t in members:
            meets.append(pos[s & t])
            union = s | t
            least = (1 << n) - 1
            for w in members:
                if w & union == union:
                    least &= w
            joins.append(pos[least])
        meet_table.append(tuple(meets))
        join_table.append(tuple(joins))
    labels = tuple(
        "{" + ",".join(omega.label(i) for i in bits(s)) + "}" for s in members
    )
    lat = FiniteLattice(
        name=f"Subloc({omega.name})",
        elements=labels,
        up=tuple(up),
        down=tuple(down),
        bottom=pos[1 << omega.top],
        top=pos[(1 << n) - 1],
        meet_table=tuple(meet_table),
        join_table=tuple(join_table),
    )
    closed_index = tuple(pos[omega.up[u]] for u in range(n))
    open_index = []
    for u in range(n):
        mask = 0
        for v in range(n):
            mask |= 1 << imp[u][v]
        assert mask in pos, "open parts must be sublocales"
        open_index.append(pos[mask])
    rep = analyze(lat)
    for u in range(n):
        c, o = closed_index[u], open_index[u]
        assert rep.complement[c] != -1 and lat.meet(c, o) == lat.bottom and (
            lat.join(c, o) == lat.top
        ), "closed and open parts must complement each other"
    embedding = LatticeMorphism(
        source=dualize(omega),
        target=lat,
        values=closed_index,
        kind="coframe",
    )
    require_morphism(embedding)
    assert len(set(closed_index)) == n, "closed embedding must be injective"
    return SublocaleLattice(
        frame=omega,
        lattice=lat,
        masks=tuple(members),
        closed_index=closed_index,
        open_index=tuple(open_index),
        closed_embedding=embedding,
    )


def wedge_C(ts: TopologicalStructure) -> tuple[FiniteLattice, list[int]]:
    """The closure of the closed elements under all infima of the carrier,
    as a sublattice (with the index map into the carrier).

    On a finite carrier the closed elements are already closed under all
    infima (finite meets generate them), so this returns the closed part
    itself; the closure is still computed rather than assumed.
    """
    lat = ts.lattice
    members = set(bits(ts.closed))
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in list(members):
                m = lat.meet(a, b)
                if m not in members:
                    members.add(m)
                    changed = True
    return sublattice(lat, members, name=f"Wedge({lat.name})")


def is_strong(ts: TopologicalStructure) -> bool:
    """Whether the closed elements are closed under all infima of the
    carrier.  True for every finite carrier (finite meets reach every
    infimum); computed honestly rather than hard-coded."""
    _, mapping = wedge_C(ts)
    return set(mapping) == set(bits(ts.closed))


# ---------------------------------------------------------------------------
# the universal morphism out of a sublocale lattice


_UNIQUENESS_SIZE = 6
_UNIQUENESS_SCAN_CAP = 1 << 21


def star(
    sl: SublocaleLattice, target_frame: FiniteLattice, values: Sequence[int]
) -> LatticeMorphism:
    """Extend a frame morphism with complemented values through the closed
    embedding: the unique coframe morphism out of the sublocale lattice
    agreeing with the given map on closed sublocales.

    ``values[u]`` is the image in ``target_frame`` (frame orientation) of the
    frame element ``u``.  The result maps the sublocale ``S`` to the join
    over ``u`` of ``complement(values[u]) ∧ values[j_S(u)]``, where ``j_S(u)``
    is the least member of ``S`` above ``u``; it is validated to extend the
    given map, to satisfy the morphism laws, and (on small inputs) to be the
    unique such extension.  Validation failures raise
    :class:`StarFormulaMismatch` and are never patched over.
    """
    omega = sl.frame
    if len(values) != omega.n:
        raise AxiomViolation("star.values", "one value per frame element required")
    phi = LatticeMorphism(
        source=dualize(omega),
        target=dualize(target_frame),
        values=tuple(values),
        kind="coframe",
    )
    require_morphism(phi)
    rep = analyze(target_frame)
    for u in range(omega.n):
        if rep.complement[values[u]] == -1:
            raise NotComplemented(
                f"image {target_frame.label(values[u])!r} of "
                f"{omega.label(u)!r} has no complement"
            )
    star_values = []
    for s in sl.masks:
        parts = []
        for u in range(omega.n):
            j_su = omega.meet_of(v for v in bits(s) if omega.leq(u, v))
            parts.append(
                target_frame.meet(rep.complement[values[u]], values[j_su])
            )
        star_values.append(target_frame.join_of(parts))
    for u in range(omega.n):
        got = star_values[sl.closed_index[u]]
        if got != values[u]:
            raise StarFormulaMismatch(
                f"closed sublocale of {omega.label(u)!r} maps to "
                f"{target_frame.label(got)!r}, expected "
                f"{target_frame.label(values[u])!r}"
            )
    result = LatticeMorphism(
        source=sl.lattice,
        target=dualize(target_frame),
        values=tuple(star_values),
        kind="coframe",
    )
    bad = morphism_violation(result)
    if bad is not None:
        raise StarFormulaMismatch(f"extension breaks morphism law: {bad}")
    count = sl.lattice.n
    if count <= _UNIQUENESS_SIZE:
        forced = {sl.closed_index[u]: values[u] for u in range(omega.n)}
        free = [i for i in range(count) if i not in forced]
        if target_frame.n ** len(free) <= _UNIQUENESS_SCAN_CAP:
            for combo in itertools.product(range(target_frame.n), repeat=len(free)):
                table = list(star_values)
                for i, v in zip(free, combo):
                    table[i] = v
                for i, v in forced.items():
                    table[i] = v
                if tuple(table) == tuple(star_values):
                    continue
                candidate = LatticeMorphism(
                    source=sl.lattice,
                    target=dualize(target_frame),
                    values=tuple(table),
                    kind="coframe",
                )
                if morphism_violation(candidate) is None:
                    raise StarFormulaMismatch(
                        "extension is not unique: found a second morphism "
                        "agreeing on closed sublocales"
                    )
    return result


def sublocale_map(
    sl_src: SublocaleLattice,
    sl_tgt: SublocaleLattice,
    frame_values: Sequence[int],
) -> LatticeMorphism:
    """The action of a frame morphism on sublocale lattices: the unique
    coframe morphism sending each closed sublocale of ``u`` to the closed
    sublocale of the image of ``u``."""
    composite = [sl_tgt.closed_index[v] for v in frame_values]
    return star(sl_src, dualize(sl_tgt.lattice), composite)


def sublocale_counit(
    ts: TopologicalStructure,
) -> tuple[SublocaleLattice, LatticeMorphism]:
    """Collapse the sublocale lattice of a topological carrier's closed-part
    frame back onto the carrier.

    The closed elements, read in opposite order, form a frame; the returned
    morphism is the unique coframe morphism from its sublocale lattice to the
    carrier sending the closed sublocale of each closed element to that
    element.  Together with the closed embedding this exhibits the carrier
    as a retract of the sublocale lattice.
    """
    wedge, mapping = wedge_C(ts)
    omega = dualize(wedge)
    sl = sublocale_lattice(omega)
    collapse = star(sl, dualize(ts.lattice), mapping)
    return sl, collapse
