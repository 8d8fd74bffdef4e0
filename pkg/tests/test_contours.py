import pytest

from rfim1d import (Contour, SeparationConstant, SpinConfiguration, Triangle,
                    TriangleFamily, Volume, choose_C, contour_power_mass,
                    contours, separation_series, verify_P1, verify_P2)
from rfim1d.model import enumerate_spins
from rfim1d.triangles import spins_to_triangles


class TestSeparationConstant:
    def test_chosen_value(self):
        assert int(choose_C()) == 3

    def test_series_certificate(self):
        # the defining series crosses 1/2 between C=2 and C=3
        p2, t2 = separation_series(2)
        p3, t3 = separation_series(3)
        assert p2 > 0.5 + 1e-6
        assert p3 + t3 <= 0.5 - 1e-6
        assert t2 < 1e-6 and t3 < 1e-6

    def test_validation(self):
        with pytest.raises(ValueError):
            SeparationConstant(0)


class TestContour:
    def test_enclosing_and_mass(self, nested_contour):
        assert nested_contour.left_bond == 0
        assert nested_contour.right_bond == 8
        assert nested_contour.mass == 9
        assert nested_contour.enclosing.bonds == (0, 8)
        assert nested_contour.x_minus == 1 and nested_contour.x_plus == 8

    def test_classes_sorted_by_mass(self, nested_contour):
        classes = nested_contour.classes()
        assert [(d, len(ts)) for d, ts in classes] == [(1, 1), (8, 1)]
        assert nested_contour.n_classes == 2

    def test_power_mass(self, nested_contour):
        assert nested_contour.power_mass(1.0) == pytest.approx(9.0)
        assert contour_power_mass(nested_contour, 0.5) == pytest.approx(1.0 + 8.0 ** 0.5)

    def test_contains_site(self, nested_contour):
        assert nested_contour.contains_site(1)
        assert nested_contour.contains_site(8)
        assert not nested_contour.contains_site(0)
        assert not nested_contour.contains_site(9)

    def test_shift(self, nested_contour):
        shifted = nested_contour.shifted(5)
        assert {t.bonds for t in shifted.triangles} == {(5, 13), (8, 9)}

    def test_needs_triangles(self):
        with pytest.raises(ValueError):
            Contour.of([])


class TestDecomposition:
    def test_single_triangle(self):
        fam = TriangleFamily.from_bond_pairs([(0, 3)])
        [g] = contours(fam)
        assert g.mass == 3

    def test_close_pair_merges(self):
        # two mass-1 triangles at distance 2 <= C merge into one contour
        fam = TriangleFamily.from_bond_pairs([(0, 1), (3, 4)])
        assert len(contours(fam, 3)) == 1

    def test_distant_pair_stays_separate(self):
        fam = TriangleFamily.from_bond_pairs([(0, 1), (10, 11)])
        gs = contours(fam, 3)
        assert len(gs) == 2
        assert verify_P1(gs, 3)

    def test_nested_inner_merges(self, nested_contour):
        # inner mass-1 triangle at distance 3 = C*1^3 is not separated
        fam = nested_contour.family()
        assert len(contours(fam, 3)) == 1

    def test_merge_threshold_is_strict(self):
        # distance exactly C*min(m,m')^3 still merges; one more bond separates
        at_threshold = TriangleFamily.from_bond_pairs([(0, 1), (4, 5)])
        beyond = TriangleFamily.from_bond_pairs([(0, 1), (5, 6)])
        assert len(contours(at_threshold, 3)) == 1
        assert len(contours(beyond, 3)) == 2

    def test_mass_conserved(self):
        fam = TriangleFamily.from_bond_pairs([(0, 1), (3, 4), (20, 26), (40, 41)])
        gs = contours(fam, 3)
        assert sum(g.mass for g in gs) == fam.total_mass
        assert sorted(t.bonds for g in gs for t in g.triangles) == sorted(fam.bond_pairs())

    def test_output_always_satisfies_separation(self):
        vol = Volume.centered(12)
        spins = enumerate_spins(12)
        for code in range(0, 2 ** 12, 7):
            fam = spins_to_triangles(SpinConfiguration(vol, spins[code]))
            if len(fam):
                assert verify_P1(contours(fam, 3), 3)

    def test_translation_covariant(self):
        fam = TriangleFamily.from_bond_pairs([(0, 1), (3, 4), (9, 15)])
        base = {tuple(sorted(t.bonds for t in g.triangles)) for g in contours(fam, 3)}
        shifted = {tuple(sorted(t.bonds for t in g.triangles))
                   for g in contours(fam.shifted(11), 3)}
        assert shifted == {tuple(sorted((l + 11, r + 11) for l, r in m)) for m in base}


class TestIndependence:
    def test_union_of_distant_families(self):
        a = TriangleFamily.from_bond_pairs([(0, 1), (3, 4)])
        b = TriangleFamily.from_bond_pairs([(100, 101), (104, 106)])
        assert verify_P2([a, b], 3)

    def test_precondition_violation_raises(self):
        a = TriangleFamily.from_bond_pairs([(0, 1)])
        b = TriangleFamily.from_bond_pairs([(3, 4)])  # too close: would merge
        with pytest.raises(ValueError):
            verify_P2([a, b], 3)
