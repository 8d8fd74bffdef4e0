import math

import pytest

from rfim1d import (CapacityError, WeightSpec, certify_C0,
                    enumerate_origin_contours, max_span,
                    spin_scan_origin_contours, verify_P1, weight_bound,
                    weight_sum)


def contour_keys(contour_list):
    return sorted(tuple(t.bonds for t in g.triangles) for g in contour_list)


class TestWeightSpec:
    def test_log_weight(self):
        w = WeightSpec(b=2.0, gamma=0.5)
        assert w.log_weight([1, 4]) == pytest.approx(-2.0 * (1.0 + 2.0))

    def test_validation(self):
        with pytest.raises(ValueError):
            WeightSpec(b=0.0, gamma=0.1)
        with pytest.raises(ValueError):
            WeightSpec(b=1.0, gamma=-1.0)


class TestEnumeration:
    def test_mass_one(self):
        gs = enumerate_origin_contours(1)
        assert contour_keys(gs) == [((-1, 0),)]

    def test_mass_two_count(self):
        # 2 single mass-2 triangles + 12 merged pairs of unit triangles
        gs = enumerate_origin_contours(2)
        assert len(gs) == 14
        singles = [g for g in gs if len(g.triangles) == 1]
        assert contour_keys(singles) == [((-2, 0),), ((-1, 1),)]

    def test_all_outputs_have_requested_mass_and_origin(self):
        for m in (1, 2, 3):
            for g in enumerate_origin_contours(m):
                assert g.mass == m
                assert g.contains_site(0)
                assert verify_P1([g])

    def test_outputs_are_distinct(self):
        keys = contour_keys(enumerate_origin_contours(3))
        assert len(keys) == len(set(keys))

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_agrees_with_spin_scan_oracle(self, m):
        fast = contour_keys(enumerate_origin_contours(m))
        scan = contour_keys(spin_scan_origin_contours(m))
        assert fast == scan

    def test_translation_covariance(self):
        # contours through site k are the origin contours shifted by k
        k = 4
        origin = contour_keys(enumerate_origin_contours(2))
        through_k = sorted(
            tuple((l + k, r + k) for l, r in key) for key in origin
        )
        scanned = [g for g in spin_scan_origin_contours(2, half_width=14)]
        # rebuild the site-k scan by shifting the window result
        shifted = contour_keys([g.shifted(k) for g in scanned])
        assert shifted == through_k

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            enumerate_origin_contours(7)
        with pytest.raises(ValueError):
            enumerate_origin_contours(0)

    def test_max_span_growth(self):
        assert max_span(1) == 1
        assert max_span(2) == 2 + 3
        assert max_span(3) == 3 + 3 * (1 + 1)


class TestWeightSums:
    def test_mass_one_value(self):
        w = WeightSpec(b=2.0, gamma=0.1)
        assert weight_sum(1, w) == pytest.approx(math.exp(-2.0))

    def test_matches_direct_sum(self):
        w = WeightSpec(b=1.5, gamma=0.3)
        for m in (1, 2, 3):
            direct = sum(
                math.exp(w.log_weight([t.mass for t in g.triangles]))
                for g in enumerate_origin_contours(m)
            )
            assert weight_sum(m, w) == pytest.approx(direct, rel=1e-12)

    def test_monotone_decreasing_in_b(self):
        values = [weight_sum(3, WeightSpec(b=b, gamma=0.1)) for b in (1.0, 2.0, 4.0)]
        assert values[0] > values[1] > values[2]

    def test_bound_formula(self):
        w = WeightSpec(b=3.0, gamma=0.1)
        assert weight_bound(5, w) == pytest.approx(10.0 * math.exp(-3.0 * 5.0 ** 0.1))


class TestCertificate:
    def test_small_mass_certificate(self):
        result = certify_C0(0.1, m_max=3)
        assert result.b_star is not None
        assert result.b_star <= 50
        # stability: the bound holds at every grid point above b*
        for m, b, s, bd, ok in result.rows:
            if b >= result.b_star:
                assert ok and s <= bd

    def test_smaller_gamma_is_easier(self):
        # the slack in the bound comes from sum |T|^gamma - m^gamma, which
        # grows as gamma shrinks; at gamma=1 it vanishes and no b works
        stars = [certify_C0(g, m_max=3).b_star for g in (0.1, 0.5, 0.8)]
        assert all(s is not None for s in stars)
        assert stars[0] <= stars[1] <= stars[2]
        assert certify_C0(1.0, m_max=3).b_star is None

    def test_csv_rows_shape(self):
        result = certify_C0(0.1, m_max=2, b_grid=(1, 2, 3))
        rows = result.csv_rows()
        assert len(rows) == 6
        assert all(len(r) == 6 for r in rows)
