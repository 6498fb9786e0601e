"""Topological structures, their closure/convergence passages, sublocales."""

from __future__ import annotations

import itertools
import random

import pytest

from coframes import (
    AxiomViolation,
    BudgetExceeded,
    C_of_nu,
    ConvergenceStructure,
    NotASublattice,
    NotAMorphism,
    NotComplemented,
    NotDistributive,
    StarFormulaMismatch,
    adh_structure_of,
    adherence_structure,
    analyze,
    check_continuity,
    classify,
    closed_sets,
    enumerate_topologies,
    heyting_implication,
    is_strong,
    is_topological,
    lim_of_C,
    lim_of_nu,
    maps_closed_to_closed,
    nu_of_C,
    star,
    sublocale_counit,
    sublocale_lattice,
    sublocale_map,
    topological_modification,
    topological_structure,
    wedge_C,
)
from coframes.fixtures import (
    adherence_fixture,
    convergence_fixture,
    lattice_fixture,
    random_convergence_structure,
    topology_fixture,
)
from coframes.lattice import (
    LatticeMorphism,
    bits,
    compose,
    dualize,
    identity_morphism,
    morphism_violation,
    require_morphism,
)


def labels(lat, items):
    return [lat.label(i) for i in items]


def by_label(lat, *names):
    return [lat.index(n) for n in names]


class TestConstructor:
    def test_rejects_uncomplemented_members(self):
        lat = lattice_fixture("CHAIN3")
        with pytest.raises(NotComplemented, match="'m'"):
            topological_structure(lat, range(lat.n))

    def test_rejects_non_sublattice(self):
        lat = lattice_fixture("BOOL3")
        members = by_label(lat, "{}", "{1}", "{2}", "{1,2,3}")
        with pytest.raises(NotASublattice):
            topological_structure(lat, members)

    def test_rejects_missing_bounds(self):
        lat = lattice_fixture("BOOL2")
        with pytest.raises(AxiomViolation) as err:
            topological_structure(lat, [lat.top])
        assert err.value.axiom == "topology.bounds"

    def test_rejects_nondistributive_carrier(self):
        lat = lattice_fixture("M3")
        with pytest.raises(NotDistributive):
            topological_structure(lat, [lat.bottom, lat.top])

    def test_rejects_out_of_range_member(self):
        lat = lattice_fixture("BOOL2")
        with pytest.raises(AxiomViolation):
            topological_structure(lat, [lat.bottom, lat.top, 99])


class TestClosureOperator:
    def test_sierpinski_closure_table(self):
        ts = topology_fixture("SIERP_TOP")
        assert nu_of_C(ts).nutab == adherence_fixture("SIERP_ADH").nutab

    def test_indiscrete_closure_table(self):
        ts = topology_fixture("INDISCRETE_TOP")
        lat = ts.lattice
        assert nu_of_C(ts).nutab == tuple(
            lat.bottom if l == lat.bottom else lat.top for l in range(lat.n)
        )

    def test_closure_laws(self):
        # inflationary; closed elements are exactly their own closures;
        # a closed element dominates the closure iff it dominates the element;
        # idempotent
        for name in ("BOOL2", "PX3", "V5", "CHAIN3"):
            lat = lattice_fixture(name)
            for ts in enumerate_topologies(lat):
                nu = nu_of_C(ts).nutab
                for l in range(lat.n):
                    assert lat.leq(l, nu[l])
                    assert nu[nu[l]] == nu[l]
                    for c in bits(ts.closed):
                        assert lat.leq(nu[l], c) == lat.leq(l, c)
                for c in bits(ts.closed):
                    assert nu[c] == c

    def test_fixed_points_are_the_closed_elements(self):
        for name in ("BOOL2", "PX3"):
            lat = lattice_fixture(name)
            for ts in enumerate_topologies(lat):
                nu = nu_of_C(ts).nutab
                fixed = {l for l in range(lat.n) if nu[l] == l}
                assert fixed == set(bits(ts.closed))
                _, mapping = wedge_C(ts)
                assert fixed == set(mapping)


class TestClosureGalois:
    def test_more_closed_elements_give_smaller_closures(self):
        lat = lattice_fixture("PX3")
        topos = list(enumerate_topologies(lat))
        for a in topos:
            for b in topos:
                if a.closed & b.closed == a.closed:
                    na, nb = nu_of_C(a).nutab, nu_of_C(b).nutab
                    assert all(lat.leq(nb[l], na[l]) for l in range(lat.n))

    def test_smaller_adherence_gives_more_closed_elements(self):
        lat = lattice_fixture("BOOL2")
        from coframes import enumerate_adherence_structures

        structures = list(enumerate_adherence_structures(lat))
        for a in structures:
            for b in structures:
                if all(lat.leq(x, y) for x, y in zip(a.nutab, b.nutab)):
                    assert C_of_nu(b).closed & C_of_nu(a).closed == C_of_nu(b).closed

    def test_topology_roundtrip_is_identity(self):
        for name in ("BOOL2", "PX3", "V5", "CHAIN3"):
            lat = lattice_fixture(name)
            for ts in enumerate_topologies(lat):
                assert C_of_nu(nu_of_C(ts)).closed == ts.closed

    def test_adherence_roundtrip_only_dominates(self):
        lat = lattice_fixture("BOOL2")
        from coframes import enumerate_adherence_structures

        for ns in enumerate_adherence_structures(lat):
            back = nu_of_C(C_of_nu(ns)).nutab
            assert all(lat.leq(ns.nutab[l], back[l]) for l in range(lat.n))

    def test_adherence_roundtrip_gap_witness(self):
        # the singleton 1 closes to {1,2}, which is not closed, so the
        # induced topology coarsens its closure all the way to the top
        ns = adherence_fixture("PX3_ADH")
        lat = ns.lattice
        back = nu_of_C(C_of_nu(ns)).nutab
        one = lat.index("{1}")
        assert lat.label(ns.nutab[one]) == "{1,2}"
        assert back[one] == lat.top


class TestTopologicalConvergence:
    def test_sierpinski_topology_gives_sierpinski_convergence(self):
        got = lim_of_C(topology_fixture("SIERP_TOP"))
        assert got.limtab == convergence_fixture("SIERP_LIM").limtab

    def test_factors_through_the_closure_operator(self):
        for name in ("BOOL2", "PX3", "V5"):
            lat = lattice_fixture(name)
            for ts in enumerate_topologies(lat):
                assert lim_of_C(ts).limtab == lim_of_nu(nu_of_C(ts)).limtab

    def test_output_is_topological_with_the_same_closed_elements(self):
        for name in ("BOOL2", "PX3"):
            lat = lattice_fixture(name)
            for ts in enumerate_topologies(lat):
                cs = lim_of_C(ts)
                assert classify(cs).topological
                assert set(closed_sets(cs).closed) == set(bits(ts.closed))


class TestModification:
    def test_px3_pretopology_modifies_to_its_closed_family(self):
        cs = convergence_fixture("PX3_PRETOP")
        got = topological_modification(cs)
        assert got.limtab == lim_of_C(topology_fixture("PX3_TOP")).limtab
        assert not is_topological(cs)
        assert is_topological(got)

    def test_coarsens_idempotently_and_fixes_topological_inputs(self):
        rng = random.Random(83)
        for name in ("CHAIN3", "BOOL2", "PX3", "V5"):
            lat = lattice_fixture(name)
            for _ in range(20):
                cs = random_convergence_structure(rng, lat)
                mod = topological_modification(cs)
                assert all(
                    lat.leq(cs.limtab[g], mod.limtab[g]) for g in range(lat.n)
                )
                again = topological_modification(mod)
                assert again.limtab == mod.limtab
                assert classify(mod).topological
        for ts in enumerate_topologies(lattice_fixture("BOOL2")):
            cs = lim_of_C(ts)
            assert topological_modification(cs).limtab == cs.limtab

    def test_preserves_the_closed_family(self):
        rng = random.Random(89)
        for name in ("BOOL2", "PX3"):
            lat = lattice_fixture(name)
            for _ in range(20):
                cs = random_convergence_structure(rng, lat)
                mod = topological_modification(cs)
                assert closed_sets(mod).closed == closed_sets(cs).closed

    def test_minimality_against_every_topology(self):
        # brute force: among all topological structures whose convergence
        # coarsens the input, the modification is the finest
        rng = random.Random(97)
        for name in ("CHAIN3", "BOOL2", "V5"):
            lat = lattice_fixture(name)
            for _ in range(15):
                cs = random_convergence_structure(rng, lat)
                mod = topological_modification(cs)
                coarser = []
                for ts in enumerate_topologies(lat):
                    cand = lim_of_C(ts)
                    if all(
                        lat.leq(cs.limtab[g], cand.limtab[g])
                        for g in range(lat.n)
                    ):
                        coarser.append(cand)
                assert any(cand.limtab == mod.limtab for cand in coarser)
                for cand in coarser:
                    assert all(
                        lat.leq(mod.limtab[g], cand.limtab[g])
                        for g in range(lat.n)
                    )


def coframe_endomorphisms(lat):
    out = []
    for values in itertools.product(range(lat.n), repeat=lat.n):
        phi = LatticeMorphism(lat, lat, values, kind="coframe")
        if morphism_violation(phi) is None:
            out.append(phi)
    return out


class TestClosedMaps:
    def test_agrees_with_filter_continuity_between_topologies(self):
        lat = lattice_fixture("BOOL2")
        topos = list(enumerate_topologies(lat))
        for phi in coframe_endomorphisms(lat):
            for src in topos:
                for tgt in topos:
                    ok, witness = maps_closed_to_closed(phi, src, tgt)
                    report = check_continuity(phi, lim_of_C(src), lim_of_C(tgt))
                    assert ok == report.continuous
                    assert (witness is None) == ok

    def test_witness_names_the_offending_element(self):
        lat = lattice_fixture("BOOL2")
        src = topology_fixture("DISCRETE_TOP")
        tgt = topology_fixture("INDISCRETE_TOP")
        ok, witness = maps_closed_to_closed(identity_morphism(lat), src, tgt)
        assert not ok and "non-closed" in witness


class TestEnumeration:
    def test_counts(self):
        # two-point carrier: indiscrete, two one-sided, discrete; a carrier
        # with only trivial complements admits only the indiscrete topology;
        # three labeled points admit 29 topologies
        assert sum(1 for _ in enumerate_topologies(lattice_fixture("BOOL2"))) == 4
        assert sum(1 for _ in enumerate_topologies(lattice_fixture("V5"))) == 1
        assert sum(1 for _ in enumerate_topologies(lattice_fixture("CHAIN3"))) == 1
        assert sum(1 for _ in enumerate_topologies(lattice_fixture("PX3"))) == 29
        assert sum(1 for _ in enumerate_topologies(lattice_fixture("BOOL3"))) == 29

    def test_coarsest_first(self):
        sizes = [
            ts.closed.bit_count()
            for ts in enumerate_topologies(lattice_fixture("PX3"))
        ]
        assert sizes == sorted(sizes)
        assert sizes[0] == 2 and sizes[-1] == 8

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            list(enumerate_topologies(lattice_fixture("BOOL4"), budget=1 << 10))


class TestHeyting:
    def test_frozen_values(self):
        lat = lattice_fixture("BOOL2")
        zero, one = by_label(lat, "{0}", "{1}")
        assert heyting_implication(lat, zero, one) == one
        chain = lattice_fixture("CHAIN3")
        m = chain.index("m")
        assert heyting_implication(chain, m, chain.bottom) == chain.bottom
        assert heyting_implication(chain, chain.bottom, m) == chain.top
        for u in range(chain.n):
            assert heyting_implication(chain, u, chain.top) == chain.top
            assert heyting_implication(chain, chain.top, u) == u

    def test_characteristic_property(self):
        for name in ("CHAIN4", "BOOL2", "V5", "PX3"):
            lat = lattice_fixture(name)
            for u in range(lat.n):
                for v in range(lat.n):
                    imp = heyting_implication(lat, u, v)
                    for w in range(lat.n):
                        assert lat.leq(lat.meet(w, u), v) == lat.leq(w, imp)

    def test_nondistributive_carrier_rejected(self):
        lat = lattice_fixture("M3")
        atoms = [l for l in range(lat.n) if l not in (lat.bottom, lat.top)]
        with pytest.raises(NotDistributive):
            heyting_implication(lat, atoms[0], atoms[1])


class TestSublocales:
    def test_two_element_chain_has_two_sublocales(self):
        sl = sublocale_lattice(lattice_fixture("CHAIN2"))
        assert sl.lattice.n == 2

    def test_three_element_chain_members(self):
        omega = lattice_fixture("CHAIN3")
        sl = sublocale_lattice(omega)
        assert sl.lattice.n == 4
        assert list(sl.lattice.elements) == ["{1}", "{0,1}", "{m,1}", "{0,m,1}"]
        # the closed part of the middle element keeps everything above it;
        # the open part is everything forced by implication into it
        assert sl.lattice.label(sl.closed_index[omega.index("m")]) == "{m,1}"
        assert sl.lattice.label(sl.open_index[omega.index("m")]) == "{0,1}"

    def test_boolean_frame_sublocales_are_its_own_elements(self):
        # on a Boolean frame every sublocale is closed: the lattice of
        # sublocales is the frame again (up to dualizing)
        for name in ("BOOL2", "BOOL3"):
            omega = lattice_fixture(name)
            sl = sublocale_lattice(omega)
            assert sl.lattice.n == omega.n
            assert sorted(sl.closed_index) == list(range(omega.n))

    def test_diamond_bounds_pair_is_not_a_sublocale(self):
        # {bottom, top} fails implication closure on a Boolean frame bigger
        # than a chain, so it does not appear
        omega = lattice_fixture("BOOL2")
        sl = sublocale_lattice(omega)
        pair = 1 << omega.bottom | 1 << omega.top
        assert pair not in sl.masks

    def test_masks_are_intersection_closed(self):
        for name in ("CHAIN3", "BOOL2", "PX3"):
            sl = sublocale_lattice(lattice_fixture(name))
            members = set(sl.masks)
            for s in members:
                for t in members:
                    assert s & t in members

    def test_meets_are_intersections_and_joins_cover_unions(self):
        sl = sublocale_lattice(lattice_fixture("PX3"))
        lat = sl.lattice
        for i in range(lat.n):
            for j in range(lat.n):
                assert sl.masks[lat.meet(i, j)] == sl.masks[i] & sl.masks[j]
                join_mask = sl.masks[lat.join(i, j)]
                union = sl.masks[i] | sl.masks[j]
                assert join_mask & union == union
                for k in range(lat.n):
                    if sl.masks[k] & union == union:
                        assert join_mask & sl.masks[k] == join_mask

    def test_closed_embedding_is_an_order_embedding(self):
        for name in ("CHAIN3", "BOOL2", "PX3"):
            omega = lattice_fixture(name)
            sl = sublocale_lattice(omega)
            require_morphism(sl.closed_embedding)
            opposite = dualize(omega)
            for u in range(omega.n):
                for v in range(omega.n):
                    assert opposite.leq(u, v) == sl.lattice.leq(
                        sl.closed_index[u], sl.closed_index[v]
                    )

    def test_open_and_closed_parts_complement(self):
        for name in ("CHAIN3", "BOOL2", "PX3"):
            omega = lattice_fixture(name)
            sl = sublocale_lattice(omega)
            lat = sl.lattice
            for u in range(omega.n):
                c, o = sl.closed_index[u], sl.open_index[u]
                assert lat.meet(c, o) == lat.bottom
                assert lat.join(c, o) == lat.top

    def test_budget_and_distributivity_guards(self):
        with pytest.raises(BudgetExceeded):
            sublocale_lattice(lattice_fixture("BOOL4"))
        with pytest.raises(NotDistributive):
            sublocale_lattice(lattice_fixture("N5"))

    def test_canonical_topology_is_valid_and_strong(self):
        for name in ("CHAIN3", "BOOL2"):
            sl = sublocale_lattice(lattice_fixture(name))
            ts = sl.canonical_topology()
            assert is_strong(ts)


class TestStrength:
    def test_every_finite_topology_is_strong(self):
        # finite meets reach arbitrary infima, so the wedge adds nothing;
        # verified by computing the closure rather than assuming it
        for name in ("BOOL2", "PX3"):
            lat = lattice_fixture(name)
            for ts in enumerate_topologies(lat):
                assert is_strong(ts)
                wedge, mapping = wedge_C(ts)
                assert wedge.n == ts.closed.bit_count()
                assert set(mapping) == set(bits(ts.closed))


class TestStar:
    def test_values_length_guard(self):
        sl = sublocale_lattice(lattice_fixture("CHAIN2"))
        with pytest.raises(AxiomViolation):
            star(sl, lattice_fixture("CHAIN2"), [0])

    def test_uncomplemented_image_rejected(self):
        omega = lattice_fixture("CHAIN3")
        sl = sublocale_lattice(omega)
        with pytest.raises(NotComplemented):
            star(sl, omega, list(range(omega.n)))

    def test_non_morphism_values_rejected(self):
        omega = lattice_fixture("CHAIN2")
        sl = sublocale_lattice(omega)
        bool2 = lattice_fixture("BOOL2")
        with pytest.raises(NotAMorphism):
            star(sl, bool2, [bool2.bottom, bool2.index("{0}")])

    def test_extension_restricts_to_the_given_values(self):
        omega = lattice_fixture("BOOL2")
        sl = sublocale_lattice(omega)
        values = list(range(omega.n))
        phi = star(sl, omega, values)
        for u in range(omega.n):
            assert phi.values[sl.closed_index[u]] == values[u]


class TestSublocaleFunctor:
    def test_identity_frame_map_gives_identity(self):
        omega = lattice_fixture("CHAIN3")
        sl = sublocale_lattice(omega)
        mu = sublocale_map(sl, sl, list(range(omega.n)))
        assert mu.values == tuple(range(sl.lattice.n))

    def test_naturality_square(self):
        # acting on sublocales then taking closed parts agrees with taking
        # closed parts then applying the frame morphism
        src = lattice_fixture("CHAIN2")
        tgt = lattice_fixture("CHAIN3")
        sl_src = sublocale_lattice(src)
        sl_tgt = sublocale_lattice(tgt)
        frame_values = [tgt.bottom, tgt.top]
        mu = sublocale_map(sl_src, sl_tgt, frame_values)
        for u in range(src.n):
            assert mu.values[sl_src.closed_index[u]] == sl_tgt.closed_index[
                frame_values[u]
            ]

    def test_composition(self):
        a = lattice_fixture("CHAIN2")
        b = lattice_fixture("CHAIN3")
        sl_a = sublocale_lattice(a)
        sl_b = sublocale_lattice(b)
        ab = [b.bottom, b.top]
        ba = [a.bottom, a.bottom, a.top]
        mu_ab = sublocale_map(sl_a, sl_b, ab)
        mu_ba = sublocale_map(sl_b, sl_a, ba)
        both = sublocale_map(sl_a, sl_a, [ba[v] for v in ab])
        assert compose(mu_ba, mu_ab).values == both.values


class TestCounit:
    def test_collapse_hits_the_closed_elements(self):
        for name in ("SIERP_TOP", "DISCRETE_TOP", "PX3_TOP", "INDISCRETE_TOP"):
            ts = topology_fixture(name)
            sl, collapse = sublocale_counit(ts)
            assert collapse.target is ts.lattice
            require_morphism(collapse)
            wedge, mapping = wedge_C(ts)
            for w in range(wedge.n):
                assert collapse.values[sl.closed_index[w]] == mapping[w]

    def test_boolean_carrier_collapse_is_an_isomorphism(self):
        ts = topology_fixture("DISCRETE_TOP")
        sl, collapse = sublocale_counit(ts)
        assert sl.lattice.n == ts.lattice.n
        assert sorted(collapse.values) == list(range(ts.lattice.n))

    def test_retract_triangle(self):
        # embedding the closed part of the collapsed carrier back into
        # sublocales and collapsing again is the identity
        for name in ("SIERP_TOP", "DISCRETE_TOP", "INDISCRETE_TOP"):
            ts = topology_fixture(name)
            sl, collapse = sublocale_counit(ts)
            canon = sl.canonical_topology()
            sl2, collapse2 = sublocale_counit(canon)
            wedge2, mapping2 = wedge_C(canon)
            omega = dualize(wedge_C(ts)[0])
            iso = [mapping2.index(sl.closed_index[u]) for u in range(omega.n)]
            mu = sublocale_map(sl, sl2, iso)
            roundtrip = compose(collapse2, mu)
            assert roundtrip.values == tuple(range(sl.lattice.n))
            assert compose(collapse, roundtrip).values == collapse.values
