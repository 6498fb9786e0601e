"""Finite convergence spaces and their passage to and from lattice structures.

A finite convergence space stores, for every subset ``A`` of its points,
the set of limit points of the filter of supersets of ``A``.  ``P_space``
reads such a space as a convergence structure on the powerset lattice;
``pt_space`` goes the other way, recovering a space from the join-prime
points of any convergence structure.  The two directions form an
adjunction whose unit ``eta`` is an isomorphism on finite spaces and whose
counit ``epsilon`` sends a lattice element to its set of points.  The
module also hosts the space-level modifications, the equivalence between
pretopological spaces and closure ("adherence") spaces, and the point
spaces of adherence and topological structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .adherence import AdherenceStructure, adh_structure_of, lim_of_nu
from .convergence import (
    ConvergenceStructure,
    check_continuity,
    classify,
    points,
    s_infinity,
    StructureClass,
)
from .errors import (
    AxiomViolation,
    BudgetExceeded,
    LatticeMismatch,
    NotAMorphism,
    NotPretopological,
)
from .filters import Filter
from .lattice import (
    FiniteLattice,
    LatticeMorphism,
    analyze,
    bits,
    left_adjoint,
    morphism_violation,
    powerset_lattice,
)
from .topology import TopologicalStructure, topological_modification, wedge_C

__all__ = [
    "FiniteConvergenceSpace",
    "SpaceMap",
    "FiniteAdherenceSpace",
    "FiniteTopologicalSpace",
    "convergence_space",
    "space_map",
    "is_continuous",
    "space_lattice",
    "P_space",
    "P_map",
    "bullet",
    "kow",
    "pt_space",
    "eta",
    "epsilon",
    "phi_dagger",
    "pt_map",
    "classify_space",
    "modify_space",
    "to_adherence",
    "to_pretop",
    "adherence_continuous",
    "pt_adh",
    "pt_top",
    "top_space_convergence",
    "enumerate_spaces",
    "all_point_maps",
    "is_isomorphism",
]

_SPACE_POINT_CAP = 12


@dataclass(frozen=True, eq=False)
class FiniteConvergenceSpace:
    """A finite set of points with a table of limits per subset.

    ``limtab[A]`` is the bitmask of points to which the filter of supersets
    of ``A`` converges.  Two axioms are enforced: each point is a limit of
    its own singleton's filter, and enlarging the filter (shrinking ``A``)
    can only enlarge the limit set.
    """

    points: tuple[str, ...]
    limtab: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.points)
        if k > _SPACE_POINT_CAP:
            raise BudgetExceeded(
                f"space on {k} points (limit {_SPACE_POINT_CAP})"
            )
        if len(set(self.points)) != k or any(not p for p in self.points):
            raise AxiomViolation(
                "space.points", "point labels must be unique and non-empty"
            )
        if len(self.limtab) != 1 << k:
            raise AxiomViolation(
                "space.table", f"expected {1 << k} limit entries"
            )
        full = (1 << k) - 1
        for a, lim in enumerate(self.limtab):
            if lim & ~full:
                raise AxiomViolation(
                    "space.table", f"limit of {self.subset_label(a)} out of range"
                )
        for x in range(k):
            if not self.limtab[1 << x] >> x & 1:
                raise AxiomViolation(
                    "space.point",
                    f"point {self.points[x]!r} is not a limit of its own "
                    "singleton filter",
                )
        for a in range(1 << k):
            for x in bits(a):
                smaller = a & ~(1 << x)
                if self.limtab[a] & ~self.limtab[smaller]:
                    raise AxiomViolation(
                        "space.monotone",
                        f"limits of {self.subset_label(a)} exceed those of "
                        f"{self.subset_label(smaller)}",
                    )

    @property
    def n_points(self) -> int:
        return len(self.points)

    def point_index(self, label: str) -> int:
        try:
            return self.points.index(label)
        except ValueError:
            raise KeyError(label) from None

    def subset_label(self, mask: int) -> str:
        return "{" + ",".join(sorted(self.points[i] for i in bits(mask))) + "}"

    def subset_mask(self, label: str) -> int:
        body = label.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise KeyError(label)
        inner = body[1:-1].strip()
        mask = 0
        if inner:
            for part in inner.split(","):
                mask |= 1 << self.point_index(part.strip())
        return mask

    def __repr__(self) -> str:
        return f"FiniteConvergenceSpace({list(self.points)})"


def convergence_space(
    points_: Sequence[str], limtab: Sequence[int]
) -> FiniteConvergenceSpace:
    return FiniteConvergenceSpace(tuple(points_), tuple(limtab))


@dataclass(frozen=True, eq=False)
class SpaceMap:
    """A function between the point sets of two spaces (``values[i]`` is the
    target index of source point ``i``).  Continuity is a checked property,
    not an invariant."""

    source: FiniteConvergenceSpace
    target: FiniteConvergenceSpace
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.source.n_points:
            raise AxiomViolation("map.total", "one value per source point")
        for v in self.values:
            if not 0 <= v < self.target.n_points:
                raise AxiomViolation("map.total", f"target index {v} out of range")

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.values[i]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i in range(self.source.n_points):
            if mask >> self.values[i] & 1:
                out |= 1 << i
        return out

    def __repr__(self) -> str:
        pairs = ", ".join(
            f"{self.source.points[i]}->{self.target.points[v]}"
            for i, v in enumerate(self.values)
        )
        return f"SpaceMap({pairs})"


def space_map(
    source: FiniteConvergenceSpace,
    target: FiniteConvergenceSpace,
    values: Sequence[int],
) -> SpaceMap:
    return SpaceMap(source, target, tuple(values))


def is_continuous(f: SpaceMap) -> bool:
    """Whether the map sends limits to limits: the image of every limit set
    is contained in the limit set of the image filter."""
    for a in range(1 << f.source.n_points):
        img = f.image_mask(f.source.limtab[a])
        if img & ~f.target.limtab[f.image_mask(a)]:
            return False
    return True


def space_lattice(space: FiniteConvergenceSpace) -> FiniteLattice:
    """The powerset lattice of the space's points (element index = mask)."""
    return powerset_lattice(space.points)


def P_space(space: FiniteConvergenceSpace) -> ConvergenceStructure:
    """Read a space as a convergence structure on its powerset lattice: a
    principal filter converges to the set of its limit points."""
    return ConvergenceStructure(space_lattice(space), space.limtab)


def P_map(f: SpaceMap) -> LatticeMorphism:
    """The preimage morphism between powerset lattices, running opposite to
    the point map.  The map is continuous exactly when the morphism is a
    continuous structure map; both directions are asserted."""
    phi = LatticeMorphism(
        source=space_lattice(f.target),
        target=space_lattice(f.source),
        values=tuple(
            f.preimage_mask(b) for b in range(1 << f.target.n_points)
        ),
        kind="coframe",
    )
    assert morphism_violation(phi) is None
    assert (
        check_continuity(phi, P_space(f.target), P_space(f.source)).continuous
        == is_continuous(f)
    )
    return phi


def bullet(cs: ConvergenceStructure, element: int) -> int:
    """The set of points lying below an element, as a mask over the point
    list of the structure."""
    lat = cs.lattice
    mask = 0
    for i, p in enumerate(points(cs)):
        if lat.leq(p, element):
            mask |= 1 << i
    return mask


def kow(cs: ConvergenceStructure, point_filter: Filter) -> Filter:
    """Pull a filter on the powerset of the structure's points back to a
    filter on the structure's lattice: the elements whose point sets are
    members.  The result is generated by the join of the points named by the
    input's generator (verified against the definitional infimum)."""
    lat = cs.lattice
    pts = points(cs)
    plat = powerset_lattice(tuple(lat.label(p) for p in pts))
    if point_filter.lattice is not plat:
        raise LatticeMismatch(
            "filter must live on the powerset of the structure's points"
        )
    a = point_filter.generator
    gen = lat.meet_of(
        l for l in range(lat.n) if bullet(cs, l) & a == a
    )
    assert gen == lat.join_of(pts[i] for i in bits(a))
    return Filter(lat, gen)


def pt_space(cs: ConvergenceStructure) -> FiniteConvergenceSpace:
    """The space of points of a convergence structure: join-primes below
    their own limit, with a subset converging to every point under the limit
    of its pulled-back filter."""
    lat = cs.lattice
    pts = points(cs)
    if len(pts) > _SPACE_POINT_CAP:
        raise BudgetExceeded(f"{len(pts)} points (limit {_SPACE_POINT_CAP})")
    labels = tuple(lat.label(p) for p in pts)
    plat = powerset_lattice(labels)
    limtab = []
    for a in range(1 << len(pts)):
        gen = kow(cs, Filter(plat, a)).generator
        limtab.append(bullet(cs, cs.limtab[gen]))
    return FiniteConvergenceSpace(labels, tuple(limtab))


def eta(space: FiniteConvergenceSpace) -> SpaceMap:
    """The unit comparison: each point goes to the point of the powerset
    structure carried by its singleton.  An isomorphism on finite spaces."""
    back = pt_space(P_space(space))
    lat = space_lattice(space)
    values = tuple(
        back.point_index(lat.label(1 << x)) for x in range(space.n_points)
    )
    return SpaceMap(space, back, values)


def epsilon(cs: ConvergenceStructure) -> LatticeMorphism:
    """The counit comparison: send each element to its set of points, a
    morphism into the powerset lattice of the point space."""
    lat = cs.lattice
    labels = tuple(lat.label(p) for p in points(cs))
    plat = powerset_lattice(labels)
    phi = LatticeMorphism(
        source=lat,
        target=plat,
        values=tuple(bullet(cs, l) for l in range(lat.n)),
        kind="coframe",
    )
    assert morphism_violation(phi) is None
    return phi


def phi_dagger(
    phi: LatticeMorphism,
    cs: ConvergenceStructure,
    space: FiniteConvergenceSpace,
) -> SpaceMap:
    """Transpose a continuous morphism into a powerset structure to the map
    sending each point of the space to the least element whose image
    contains it.  Satisfies ``P(transpose)(points of l) = phi(l)`` and is
    the unique map doing so."""
    plat = space_lattice(space)
    if phi.source is not cs.lattice or phi.target is not plat:
        raise LatticeMismatch(
            "morphism must run from the structure's lattice to the space's "
            "powerset lattice"
        )
    report = check_continuity(phi, cs, P_space(space))
    if not report.continuous:
        raise NotAMorphism(
            f"not a continuous structure map: witness {report.witness}"
        )
    adj = left_adjoint(phi)
    pts = points(cs)
    back = pt_space(cs)
    values = []
    for x in range(space.n_points):
        element = adj.values[1 << x]
        if element not in pts:
            raise NotAMorphism(
                f"adjoint image {cs.lattice.label(element)!r} of point "
                f"{space.points[x]!r} is not a point of the structure"
            )
        values.append(pts.index(element))
    out = SpaceMap(space, back, tuple(values))
    for l in range(cs.lattice.n):
        assert out.preimage_mask(bullet(cs, l)) == phi.values[l]
    return out


def pt_map(
    phi: LatticeMorphism,
    source: ConvergenceStructure,
    target: ConvergenceStructure,
) -> SpaceMap:
    """The point map of a continuous morphism: points of the target
    structure go to their least preimages, running opposite to the
    morphism."""
    report = check_continuity(phi, source, target)
    if not report.continuous:
        raise NotAMorphism(
            f"not a continuous structure map: witness {report.witness}"
        )
    adj = left_adjoint(phi)
    src_pts = points(source)
    values = []
    for p in points(target):
        element = adj.values[p]
        assert element in src_pts
        values.append(src_pts.index(element))
    return SpaceMap(pt_space(target), pt_space(source), tuple(values))


def classify_space(space: FiniteConvergenceSpace) -> StructureClass:
    return classify(P_space(space))


def modify_space(
    space: FiniteConvergenceSpace, kind: str
) -> FiniteConvergenceSpace:
    """The coarsest-fix modifications at space level: ``lim`` and ``pretop``
    iterate the one-step completion of the powerset structure; ``top``
    rebuilds convergence from the closed sets."""
    cs = P_space(space)
    if kind == "lim":
        out = s_infinity(cs, "limit")
    elif kind == "pretop":
        out = s_infinity(cs, "pretop")
    elif kind == "top":
        out = topological_modification(cs)
    else:
        raise ValueError(f"unknown modification kind {kind!r}")
    return FiniteConvergenceSpace(space.points, out.limtab)


@dataclass(frozen=True, eq=False)
class FiniteAdherenceSpace:
    """A finite set of points with an additive closure table: the closure
    of the empty set is empty and closure distributes over unions (no
    expansiveness is required)."""

    points: tuple[str, ...]
    adhtab: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.points)
        if len(self.adhtab) != 1 << k:
            raise AxiomViolation(
                "closure.table", f"expected {1 << k} closure entries"
            )
        if self.adhtab[0] != 0:
            raise AxiomViolation(
                "closure.grounded", "closure of the empty set must be empty"
            )
        for a in range(1 << k):
            expected = 0
            for x in bits(a):
                expected |= self.adhtab[1 << x]
            if self.adhtab[a] != expected:
                raise AxiomViolation(
                    "closure.additive",
                    f"closure of {a:b} is not the union of its singletons'",
                )

    @property
    def n_points(self) -> int:
        return len(self.points)


def to_adherence(space: FiniteConvergenceSpace) -> FiniteAdherenceSpace:
    """Read a pretopological space as a closure space: the closure of a set
    is the union of the limits of filters meshing it."""
    got = classify_space(space)
    if not got.pretopological:
        raise NotPretopological(
            "only pretopological spaces carry an equivalent closure space"
        )
    ns = adh_structure_of(P_space(space))
    return FiniteAdherenceSpace(space.points, ns.nutab)


def to_pretop(adh_space: FiniteAdherenceSpace) -> FiniteConvergenceSpace:
    """The pretopological space of a closure space: a filter converges to
    the points in the closure of everything it meshes."""
    plat = powerset_lattice(adh_space.points)
    ns = AdherenceStructure(plat, adh_space.adhtab)
    cs = lim_of_nu(ns)
    return FiniteConvergenceSpace(adh_space.points, cs.limtab)


def adherence_continuous(
    values: Sequence[int],
    source: FiniteAdherenceSpace,
    target: FiniteAdherenceSpace,
) -> bool:
    """Whether a point map sends closures into closures of images."""
    for a in range(1 << source.n_points):
        img_of_closure = 0
        for i in bits(source.adhtab[a]):
            img_of_closure |= 1 << values[i]
        img = 0
        for i in bits(a):
            img |= 1 << values[i]
        if img_of_closure & ~target.adhtab[img]:
            return False
    return True


def pt_adh(ns: AdherenceStructure) -> FiniteAdherenceSpace:
    """The point space of an adherence structure: join-primes inside their
    own closure, with set closures computed from joins.  Cross-checked
    against the closure of the induced point convergence."""
    lat = ns.lattice
    pts = [
        p for p in bits(analyze(lat).join_primes) if lat.leq(p, ns.nutab[p])
    ]
    if len(pts) > _SPACE_POINT_CAP:
        raise BudgetExceeded(f"{len(pts)} points (limit {_SPACE_POINT_CAP})")
    labels = tuple(lat.label(p) for p in pts)
    adhtab = []
    for a in range(1 << len(pts)):
        closure = ns.nutab[lat.join_of(pts[i] for i in bits(a))]
        mask = 0
        for i, p in enumerate(pts):
            if lat.leq(p, closure):
                mask |= 1 << i
        adhtab.append(mask)
    out = FiniteAdherenceSpace(labels, tuple(adhtab))
    cross = to_adherence(pt_space(lim_of_nu(ns)))
    assert cross.points == out.points and cross.adhtab == out.adhtab
    return out


@dataclass(frozen=True, eq=False)
class FiniteTopologicalSpace:
    """A finite set of points with a family of closed subsets (containing
    the empty and full sets, closed under union and intersection)."""

    points: tuple[str, ...]
    closed: tuple[int, ...]

    def __post_init__(self) -> None:
        family = set(self.closed)
        full = (1 << len(self.points)) - 1
        if 0 not in family or full not in family:
            raise AxiomViolation(
                "space.closed", "closed family must contain empty and full sets"
            )
        for a in family:
            for b in family:
                if a | b not in family or a & b not in family:
                    raise AxiomViolation(
                        "space.closed", "closed family must be a set lattice"
                    )

    @property
    def n_points(self) -> int:
        return len(self.points)


def pt_top(ts: TopologicalStructure) -> FiniteTopologicalSpace:
    """The point space of a topological structure: all join-primes, with
    one closed subset per closed element."""
    lat = ts.lattice
    pts = list(bits(analyze(lat).join_primes))
    if len(pts) > _SPACE_POINT_CAP:
        raise BudgetExceeded(f"{len(pts)} points (limit {_SPACE_POINT_CAP})")
    labels = tuple(lat.label(p) for p in pts)
    wedge, mapping = wedge_C(ts)
    family = set()
    for c in mapping:
        mask = 0
        for i, p in enumerate(pts):
            if lat.leq(p, c):
                mask |= 1 << i
        family.add(mask)
    return FiniteTopologicalSpace(labels, tuple(sorted(family)))


def top_space_convergence(tsp: FiniteTopologicalSpace) -> FiniteConvergenceSpace:
    """The convergence of a finite topological space: the improper filter
    converges everywhere, every other filter to the intersection of the
    closed sets it meets."""
    k = tsp.n_points
    full = (1 << k) - 1
    out = []
    for a in range(1 << k):
        if a == 0:
            out.append(full)
            continue
        lim = full
        for c in tsp.closed:
            if c & a:
                lim &= c
        out.append(lim)
    return FiniteConvergenceSpace(tsp.points, tuple(out))


def enumerate_spaces(labels: Sequence[str]) -> Iterator[FiniteConvergenceSpace]:
    """All convergence spaces on the given points, by direct search over
    antitone tables satisfying the point axiom."""
    pts = tuple(labels)
    k = len(pts)
    order = sorted(range(1 << k), key=lambda a: (a.bit_count(), a))
    tab = [0] * (1 << k)

    def choices(a: int) -> Iterator[int]:
        ceiling = (1 << k) - 1
        for x in bits(a):
            ceiling &= tab[a & ~(1 << x)]
        required = a if a.bit_count() == 1 else 0
        if required & ~ceiling:
            return
        sub = ceiling & ~required
        s = sub
        while True:
            yield s | required
            if s == 0:
                break
            s = (s - 1) & sub

    def rec(i: int) -> Iterator[FiniteConvergenceSpace]:
        if i == len(order):
            yield FiniteConvergenceSpace(pts, tuple(tab))
            return
        a = order[i]
        for choice in choices(a):
            tab[a] = choice
            yield from rec(i + 1)

    yield from rec(0)


def all_point_maps(
    source: FiniteConvergenceSpace, target: FiniteConvergenceSpace
) -> Iterator[SpaceMap]:
    """Every function between the point sets (continuous or not)."""
    import itertools

    for values in itertools.product(
        range(target.n_points), repeat=source.n_points
    ):
        yield SpaceMap(source, target, values)


def is_isomorphism(f: SpaceMap) -> bool:
    """Bijective, continuous, with continuous inverse."""
    if sorted(f.values) != list(range(f.target.n_points)):
        return False
    if not is_continuous(f):
        return False
    inverse = [0] * f.target.n_points
    for i, v in enumerate(f.values):
        inverse[v] = i
    return is_continuous(SpaceMap(f.target, f.source, tuple(inverse)))
