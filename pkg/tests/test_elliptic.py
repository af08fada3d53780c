"""Single-component algebra: classes, section bases, twists, endomorphisms."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellchain.elliptic import (
    AlgebraError,
    BundleOnComponent,
    Degree0Class,
    IndecomposableSlot,
    LineBundleClass,
    class_isomorphic,
    end_decomposition,
    h0_component,
    iter_trivial_slots,
    section_basis,
    section_space,
    twist_sections,
)


def orders(rows):
    return [(r.ord_p, r.ord_q) for r in rows]


class TestDegree0Class:
    def test_trivial(self):
        assert Degree0Class.zero().is_trivial
        assert not Degree0Class.of_pq(1).is_trivial
        assert not Degree0Class.of_generic("x").is_trivial

    def test_torsion_reduces(self):
        t = Degree0Class.of_torsion("eta", 3, 5)
        assert t.torsion == (("eta", 3, 2),)
        assert (t + t + t).is_trivial

    def test_group_laws(self):
        a = Degree0Class.of_pq(2) + Degree0Class.of_generic("x", -1)
        b = Degree0Class.of_torsion("eta", 4) + Degree0Class.of_generic("x", 1)
        assert (a + b) - b == a
        assert (a - a).is_trivial

    def test_order_mismatch_rejected(self):
        with pytest.raises(AlgebraError):
            Degree0Class.of_torsion("eta", 2) + Degree0Class.of_torsion("eta", 3)


class TestClassIsomorphic:
    def test_identity(self):
        assert class_isomorphic(LineBundleClass(3, 2), LineBundleClass(3, 2))

    def test_pq_shift_is_nontrivial(self):
        # O(3P+2Q) vs O(2P+3Q) differ by P-Q, which is never torsion
        assert not class_isomorphic(LineBundleClass(3, 2), LineBundleClass(2, 3))

    def test_distinct_generic_twists(self):
        l1 = LineBundleClass(2, 2, Degree0Class.of_generic("g1"))
        l2 = LineBundleClass(2, 2, Degree0Class.of_generic("g2"))
        assert not class_isomorphic(l1, l2)

    def test_pq_twist_matches_shape(self):
        twisted = LineBundleClass(2, 3, Degree0Class.of_pq(1))
        assert class_isomorphic(twisted, LineBundleClass(3, 2))
        assert twisted.special_index() == 3


class TestH0:
    def test_positive_degree(self):
        assert h0_component(BundleOnComponent((LineBundleClass(5, 0),))) == 5

    def test_degree_zero_torsion(self):
        slot = LineBundleClass(0, 0, Degree0Class.of_torsion("eta", 3))
        assert h0_component(BundleOnComponent((slot,))) == 0

    def test_trivial_class(self):
        assert h0_component(BundleOnComponent((LineBundleClass(0, 0),))) == 1

    def test_negative_and_balanced(self):
        e = BundleOnComponent((LineBundleClass(-1, 0), IndecomposableSlot(2, 5)))
        assert h0_component(e) == 5


class TestSectionBasis:
    def test_generic_twist_all_exact(self):
        l = LineBundleClass(2, 3, Degree0Class.of_generic("g"))
        basis = section_basis(l)
        assert orders(basis.sections) == [(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]
        assert basis.coincidence is None

    def test_coincidence_merges_rows(self):
        basis = section_basis(LineBundleClass(3, 2))
        assert basis.coincidence == 3
        assert basis.sections[2] == basis.sections[3]
        assert orders(basis.distinct_rows) == [(0, 4), (1, 3), (3, 2), (4, 0)]

    def test_degree_one(self):
        basis = section_basis(LineBundleClass(1, 0, Degree0Class.of_generic("g")))
        assert orders(basis.sections) == [(0, 0)]

    def test_boundary_coincidences(self):
        lo = section_basis(LineBundleClass(0, 4))
        assert orders(lo.sections)[0] == (0, 4)  # promoted edge row
        hi = section_basis(LineBundleClass(4, 0))
        assert orders(hi.sections)[-1] == (4, 0)

    def test_rejects_nonpositive_degree(self):
        with pytest.raises(AlgebraError):
            section_basis(LineBundleClass(0, 0))


class TestSectionSpace:
    def test_special_class_window(self):
        table = section_space(LineBundleClass(3, 2), 1, 3)
        assert orders(table.rows) == [(1, 3), (3, 2), (4, 0)]

    def test_generic_window(self):
        l = LineBundleClass(0, 5, Degree0Class.of_generic("g"))
        assert orders(section_space(l, 1, 3).rows) == [(1, 3), (2, 2), (3, 1)]

    def test_full_basis(self):
        l = LineBundleClass(0, 6, Degree0Class.of_generic("g"))
        table = section_space(l, 0, 6)
        assert [r.ord_p for r in table.rows] == list(range(6))

    def test_rejects_window_starting_at_coincidence(self):
        # s_3 = s_2 has orders (3, 2); a window of plain rows beginning at
        # index 3 would claim the impossible exact orders (3, 1)
        with pytest.raises(AlgebraError):
            section_space(LineBundleClass(3, 2), 3, 1)

    def test_rejects_out_of_range(self):
        l = LineBundleClass(0, 4, Degree0Class.of_generic("g"))
        with pytest.raises(AlgebraError):
            section_space(l, 2, 3)

    def test_rows_sit_inside_basis(self):
        for l in (LineBundleClass(3, 2), LineBundleClass(1, 4, Degree0Class.of_generic("g"))):
            basis = {(s.ord_p, s.ord_q) for s in section_basis(l).sections}
            table = section_space(l, 1, 3)
            assert {(s.ord_p, s.ord_q) for s in table.rows} <= basis


class TestTwistSections:
    def test_rank_two_degree_five(self):
        e = BundleOnComponent((IndecomposableSlot(2, 5),))
        table = twist_sections(e, 1)
        assert [r.ord_p for r in table.rows] == [2, 1, 1]
        assert all(not r.exact_q for r in table.rows)

    def test_three_line_slots(self):
        # h0(E(-0*P)) = 3 by the degree count; one section per slot at order 0
        slots = tuple(LineBundleClass(0, 1, Degree0Class.of_generic(f"L{i}")) for i in range(3))
        table = twist_sections(BundleOnComponent(slots), 0)
        assert [(r.slot, r.ord_p) for r in table.rows] == [(0, 0), (1, 0), (2, 0)]

    def test_full_twist_empty(self):
        e = BundleOnComponent((IndecomposableSlot(3, 6),))
        assert twist_sections(e, 2).dimension == 0

    def test_rejects_non_uniform(self):
        e = BundleOnComponent((IndecomposableSlot(2, 5), IndecomposableSlot(2, 3)))
        with pytest.raises(AlgebraError):
            twist_sections(e, 0)


class TestEndDecomposition:
    def test_single_atom(self):
        out = end_decomposition(BundleOnComponent((IndecomposableSlot(2, 1),)))
        assert out.rank == 4 and out.degree == 0
        assert len(list(iter_trivial_slots(out))) == 1
        assert h0_component(out) == 1

    def test_two_twisted_rank_one_atoms(self):
        l1 = LineBundleClass(0, 1, Degree0Class.of_generic("L1"))
        l2 = LineBundleClass(0, 1, Degree0Class.of_generic("L2"))
        out = end_decomposition(BundleOnComponent((l1, l2)))
        assert out.rank == 4
        assert len(list(iter_trivial_slots(out))) == 2  # the two diagonal pairs

    def test_single_line_slot(self):
        out = end_decomposition(BundleOnComponent((LineBundleClass(2, 3),)))
        assert out.rank == 1
        assert len(list(iter_trivial_slots(out))) == 1

    def test_rejects_imprimitive_atom(self):
        with pytest.raises(AlgebraError):
            end_decomposition(BundleOnComponent((IndecomposableSlot(2, 4),)))

    @pytest.mark.parametrize("slots", [
        (IndecomposableSlot(3, 1),),
        (IndecomposableSlot(2, 1, Degree0Class.of_generic("a")),
         IndecomposableSlot(2, 1, Degree0Class.of_generic("b"))),
        (LineBundleClass(1, 1), LineBundleClass(0, 2, Degree0Class.of_generic("c"))),
    ])
    def test_rank_squares_degree_zero(self, slots):
        e = BundleOnComponent(slots)
        out = end_decomposition(e)
        assert out.rank == e.rank ** 2
        assert out.degree == 0


# -- property tests ---------------------------------------------------------

line_classes = st.builds(
    LineBundleClass,
    st.integers(min_value=0, max_value=8),
    st.integers(min_value=0, max_value=8),
    st.one_of(
        st.just(Degree0Class.zero()),
        st.builds(Degree0Class.of_pq, st.integers(min_value=-3, max_value=3)),
        st.builds(Degree0Class.of_generic, st.just("g")),
    ),
).filter(lambda l: l.degree >= 1)


@given(line_classes)
@settings(max_examples=200)
def test_basis_orders_distinct_with_one_coincidence(l):
    basis = section_basis(l)
    distinct = basis.distinct_rows
    assert len({r.ord_p for r in distinct}) == len(distinct)
    merged = len(basis.sections) - len(distinct)
    assert merged in (0, 1)


@given(line_classes, st.data())
@settings(max_examples=200)
def test_section_space_spanned_by_basis(l, data):
    d = l.degree
    u = data.draw(st.integers(min_value=0, max_value=d - 1))
    t = data.draw(st.integers(min_value=1, max_value=d - u))
    try:
        table = section_space(l, u, t)
    except AlgebraError:
        return
    assert table.dimension == t
    basis = {(s.ord_p, s.ord_q) for s in section_basis(l).sections}
    assert {(s.ord_p, s.ord_q) for s in table.rows} <= basis
    assert table.per_slot_orders_distinct()


@given(line_classes, line_classes, line_classes)
@settings(max_examples=100)
def test_isomorphism_is_equivalence(a, b, c):
    assert class_isomorphic(a, a)
    assert class_isomorphic(a, b) == class_isomorphic(b, a)
    if class_isomorphic(a, b) and class_isomorphic(b, c):
        assert class_isomorphic(a, c)
