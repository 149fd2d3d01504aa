from fractions import Fraction

import pytest

from crystorb.crystal import CrystData, is_torsion_free, verify_crystallographic
from crystorb.exactla import IntMatrix
from crystorb.quotient import (
    classify_action,
    factorization_report,
    fixed_points,
    free_action_report,
    gpr_subgroup,
    orbifold_descriptor,
    pointwise_stabilizer,
    pseudoreflections,
    subtori_equal,
    _transform_subtorus,
    all_fixed_loci,
)

F = Fraction

D = lambda *xs: [[(xs[i] if i == j else 0) for j in range(len(xs))] for i in range(len(xs))]

KUMMER = CrystData.make(4, [(D(-1, -1, -1, -1), (0, 0, 0, 0))])
BDF = CrystData.make(4, [(D(1, 1, -1, -1), (F(1, 2), 0, 0, 0))])
PSEUDOREF = CrystData.make(4, [(D(1, 1, -1, -1), (0, 0, 0, 0))])
MIXED = CrystData.make(4, [(D(-1, -1, -1, -1), (0, 0, F(1, 2), 0)),
                           (D(1, 1, -1, -1), (0, 0, 0, 0))])
MINUS1_RANK2 = CrystData.make(2, [(D(-1, -1), (0, 0))])


def crys(data):
    return verify_crystallographic(data)


class TestFixedPoints:
    def test_kummer_sixteen(self):
        # |det(-2 I_4)| = 16, cross-checked against half-lattice enumeration
        g = crys(KUMMER)
        locus = fixed_points(g, 1)
        assert locus.solutions.cardinality == 16
        assert locus.real_dim == 0
        assert locus.complex_codim == 2

    def test_bdf_empty(self):
        # first block forces 0 = 1/2 (mod 1)
        g = crys(BDF)
        assert fixed_points(g, 1).is_empty()

    def test_family_components(self):
        # v1, v2 free; v3, v4 half-lattice: four 2-real-dim components
        g = crys(PSEUDOREF)
        locus = fixed_points(g, 1)
        assert locus.real_dim == 2
        assert len(locus.components()) == 4
        assert locus.complex_codim == 1

    def test_determinant_oracle(self):
        for data in (KUMMER, BDF, PSEUDOREF, MIXED, MINUS1_RANK2):
            g = crys(data)
            ident = IntMatrix.identity(g.rank)
            for gi in range(1, g.order()):
                lin = g.linear(gi)
                A = IntMatrix(g.rank, g.rank,
                              tuple(a - b for a, b in zip(lin.entries, ident.entries)))
                d = A.det()
                if d == 0:
                    continue
                locus = fixed_points(g, gi)
                assert locus.solutions.cardinality == abs(d)

    def test_identity_rejected(self):
        with pytest.raises(ValueError):
            fixed_points(crys(KUMMER), 0)

    def test_conjugation_equivariance(self):
        g = crys(MIXED)
        for h in range(g.order()):
            for gi in range(1, g.order()):
                conj = g.group.mul(g.group.mul(h, gi), g.group.inv(h))
                if conj == 0:
                    continue
                a = fixed_points(g, gi)
                b = fixed_points(g, conj)
                assert a.is_empty() == b.is_empty()
                if a.is_empty():
                    continue
                images = [_transform_subtorus(g, h, c) for c in a.components()]
                targets = list(b.components())
                assert len(images) == len(targets)
                for img in images:
                    assert any(subtori_equal(img, t) for t in targets)


class TestClassification:
    def test_kummer_quasi_free(self):
        res = classify_action(crys(KUMMER))
        assert res.kind == "quasi_free"
        assert res.evidence == ((1, 2),)

    def test_bdf_free(self):
        assert classify_action(crys(BDF)).kind == "free"

    def test_pseudoref_divisorial(self):
        res = classify_action(crys(PSEUDOREF))
        assert res.kind == "divisorial"

    def test_minus1_rank2_divisorial(self):
        # isolated points on an elliptic curve are branch divisors
        assert classify_action(crys(MINUS1_RANK2)).kind == "divisorial"

    def test_agreement_with_torsion(self):
        for data in (KUMMER, BDF, PSEUDOREF, MIXED, MINUS1_RANK2):
            g = crys(data)
            tf = is_torsion_free(g).torsion_free
            assert free_action_report(g).free == tf
            assert (classify_action(g).kind == "free") == tf

    def test_odd_group_rejected(self):
        g = crys(CrystData.make(2, [(D(1, -1), (0, 0))]))
        with pytest.raises(ValueError):
            classify_action(g)


class TestPseudoreflections:
    def test_product_reflection(self):
        # complex eigenvalues (1, -1): fixed hyperplane
        g = crys(PSEUDOREF)
        assert pseudoreflections(g) == (1,)

    def test_minus_identity_not_reflection_rank4(self):
        g = crys(KUMMER)
        assert pseudoreflections(g) == ()

    def test_mixed_group(self):
        g = crys(MIXED)
        refl = pseudoreflections(g)
        assert len(refl) == 1
        lin = g.linear(refl[0])
        assert [lin.at(i, i) for i in range(4)] == [1, 1, -1, -1]


class TestGpr:
    def test_trivial_when_no_reflections(self):
        g = crys(KUMMER)
        assert gpr_subgroup(g).order() == 1

    def test_whole_group(self):
        g = crys(PSEUDOREF)
        assert gpr_subgroup(g).order() == g.order()

    def test_mixed_index_two(self):
        g = crys(MIXED)
        sub = gpr_subgroup(g)
        assert sub.order() == 2
        rep = factorization_report(g)
        assert rep.index == 2
        assert rep.quasi_etale
        assert not rep.first_map_trivial
        assert not rep.second_map_trivial
        # the elements outside G^pr with fixed points sit in codim >= 2
        assert rep.audit and all(c >= 2 for _, c in rep.audit)

    def test_kummer_factorization(self):
        rep = factorization_report(crys(KUMMER))
        assert rep.first_map_trivial
        assert rep.quasi_etale

    def test_gpr_equals_group_second_map_identity(self):
        rep = factorization_report(crys(PSEUDOREF))
        assert rep.second_map_trivial


class TestDescriptor:
    def test_free_descriptor(self):
        d = orbifold_descriptor(crys(BDF))
        assert d.kind == "free"
        assert d.divisor_classes == ()
        assert d.stratum_summary == ()

    def test_pseudoref_divisors(self):
        # 4 divisor components (E x 2-torsion points), each its own orbit,
        # multiplicity 2
        d = orbifold_descriptor(crys(PSEUDOREF))
        assert d.kind == "divisorial"
        assert sum(c.component_count for c in d.divisor_classes) == 4
        assert all(c.multiplicity == 2 for c in d.divisor_classes)
        assert d.stratum_summary == ()

    def test_kummer_descriptor(self):
        d = orbifold_descriptor(crys(KUMMER))
        assert d.kind == "quasi_free"
        assert d.divisor_classes == ()
        assert d.stratum_summary == (((2, 2), 16),)

    def test_mixed_descriptor(self):
        d = orbifold_descriptor(crys(MIXED))
        assert d.kind == "divisorial"
        assert all(c.multiplicity == 2 for c in d.divisor_classes)
        # the -I-with-shift element contributes 16 isolated codim-2 points
        assert (((2, 2), 16)) in d.stratum_summary

    def test_elliptic_involution_descriptor(self):
        # four 2-torsion branch points of multiplicity 2 on the quotient line
        d = orbifold_descriptor(crys(MINUS1_RANK2))
        assert d.kind == "divisorial"
        assert sum(c.component_count for c in d.divisor_classes) == 4
        assert all(c.multiplicity == 2 for c in d.divisor_classes)

    def test_stabilizers_cyclic(self):
        for data in (PSEUDOREF, MIXED, MINUS1_RANK2):
            g = crys(data)
            d = orbifold_descriptor(g)
            for cls in d.divisor_classes:
                stab = pointwise_stabilizer(g, cls.representative)
                assert len(stab) == cls.multiplicity
                assert any(g.group.element_order(h) == len(stab) for h in stab)

    def test_union_of_loci_is_stable(self):
        g = crys(MIXED)
        comps = [c for l in all_fixed_loci(g) if not l.is_empty()
                 for c in l.components()]
        for h in range(g.order()):
            for c in comps:
                img = _transform_subtorus(g, h, c)
                assert any(subtori_equal(img, other) for other in comps)
