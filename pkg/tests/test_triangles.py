from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from rfim1d import (IncompatibleFamiliesError, InterfacePoint, SpinConfiguration,
                    Triangle, TriangleFamily, Volume, assign_offsets,
                    energy_difference, family_volume, hamiltonian,
                    interfaces, is_compatible, pair_interface_bonds,
                    spins_to_triangles, triangle_distance, triangles_to_spins)
from rfim1d.model import enumerate_spins


class TestInterfacePoints:
    def test_position(self):
        p = InterfacePoint(3, Fraction(1, 400))
        assert p.position == Fraction(7, 2) + Fraction(1, 400)

    def test_offset_cap(self):
        with pytest.raises(ValueError):
            InterfacePoint(0, Fraction(1, 50))

    def test_offsets_make_distances_distinct(self):
        vol = Volume(0, 9)
        offsets = assign_offsets(vol)
        points = [Fraction(2 * b + 1, 2) + o for b, o in offsets.items()]
        dists = [q - p for p, q in combinations(sorted(points), 2)]
        assert len(set(dists)) == len(dists)

    def test_offsets_within_bound(self):
        for o in assign_offsets(Volume(-5, 5)).values():
            assert 0 < o <= Fraction(1, 100)


class TestTriangle:
    def test_mass_and_sites(self):
        t = Triangle.from_bonds(2, 5)
        assert t.mass == 3
        assert list(t.sites()) == [3, 4, 5]
        assert t.contains_site(3) and not t.contains_site(2)

    def test_orientation_required(self):
        with pytest.raises(ValueError):
            Triangle.from_bonds(4, 4)

    def test_distance_disjoint(self):
        assert triangle_distance(Triangle.from_bonds(0, 2), Triangle.from_bonds(5, 6)) == 3

    def test_distance_nested(self):
        outer, inner = Triangle.from_bonds(0, 8), Triangle.from_bonds(3, 4)
        assert triangle_distance(outer, inner) == 3
        assert triangle_distance(inner, outer) == 3

    def test_distance_shared_endpoint(self):
        assert triangle_distance(Triangle.from_bonds(0, 2), Triangle.from_bonds(2, 4)) == 0


class TestPairing:
    def test_two_interfaces(self):
        assert pair_interface_bonds([3, 7]) == [(3, 7)]

    def test_closest_pair_first(self):
        # gaps 3, 1, 4: the middle pair collides first, the rest nest around it
        assert set(pair_interface_bonds([0, 3, 4, 8])) == {(3, 4), (0, 8)}

    def test_leftmost_tie_break(self):
        # equal gaps: pair from the left
        assert set(pair_interface_bonds([0, 1, 2, 3])) == {(0, 1), (2, 3)}

    def test_translation_covariance(self):
        bonds = [0, 3, 4, 8, 20, 21]
        base = pair_interface_bonds(bonds)
        for k in (-7, 1, 13):
            shifted = pair_interface_bonds([b + k for b in bonds])
            assert shifted == [(l + k, r + k) for l, r in base]

    def test_odd_count_rejected(self):
        with pytest.raises(RuntimeError):
            pair_interface_bonds([0, 1, 2])


class TestSpinTriangleBijection:
    def test_all_plus_maps_to_empty_family(self):
        sigma = SpinConfiguration.homogeneous(Volume(0, 5), +1)
        assert len(spins_to_triangles(sigma)) == 0

    def test_single_minus_site(self):
        sigma = SpinConfiguration.from_minus_sites(Volume(0, 5), [2])
        fam = spins_to_triangles(sigma)
        assert fam.bond_pairs() == frozenset({(1, 2)})

    def test_nested_block(self):
        # minus sites 1,2,3,5,6,7,8 with site 4 plus: one big triangle, one island
        vol = Volume(0, 9)
        sigma = SpinConfiguration.from_minus_sites(vol, [1, 2, 3, 5, 6, 7, 8])
        fam = spins_to_triangles(sigma)
        assert fam.bond_pairs() == frozenset({(0, 8), (3, 4)})

    def test_minus_boundary_rejected(self):
        sigma = SpinConfiguration.homogeneous(Volume(0, 3), +1, boundary=-1)
        with pytest.raises(ValueError):
            interfaces(sigma)

    @pytest.mark.parametrize("n", [1, 4, 8])
    def test_roundtrip_exhaustive(self, n):
        vol = Volume.centered(n)
        spins = enumerate_spins(n)
        for code in range(2 ** n):
            sigma = SpinConfiguration(vol, spins[code])
            fam = spins_to_triangles(sigma)
            assert triangles_to_spins(fam, vol) == sigma

    def test_decomposition_translation_covariant(self):
        vol = Volume(0, 9)
        sigma = SpinConfiguration.from_minus_sites(vol, [1, 3, 4, 5])
        fam = spins_to_triangles(sigma)
        shifted_vol = Volume(5, 14)
        shifted = SpinConfiguration.from_minus_sites(shifted_vol, [6, 8, 9, 10])
        assert spins_to_triangles(shifted).bond_pairs() == fam.shifted(5).bond_pairs()

    def test_pairwise_distance_compatibility_exhaustive(self):
        # every produced family keeps pair distances >= the smaller mass
        vol = Volume.centered(10)
        spins = enumerate_spins(10)
        for code in range(2 ** 10):
            fam = spins_to_triangles(SpinConfiguration(vol, spins[code]))
            assert fam.satisfies_ma1()


class TestFamilies:
    def test_coverage_parity(self):
        fam = TriangleFamily.from_bond_pairs([(0, 8), (3, 4)])
        assert fam.coverage_parity(4) == 0
        assert fam.coverage_parity(3) == 1
        assert fam.coverage_parity(9) == 0

    def test_total_mass(self):
        fam = TriangleFamily.from_bond_pairs([(0, 2), (5, 6)])
        assert fam.total_mass == 3

    def test_family_volume(self):
        vol = family_volume(TriangleFamily.from_bond_pairs([(0, 2), (5, 6)]))
        assert vol == Volume(0, 7)


class TestCompatibility:
    def test_disjoint_families_compatible(self):
        a = TriangleFamily.from_bond_pairs([(0, 1)])
        b = TriangleFamily.from_bond_pairs([(10, 12)])
        assert is_compatible(a, b)

    def test_repairing_union_incompatible(self):
        # interfaces 2,3,4,5 would re-pair as (2,3),(4,5)
        a = TriangleFamily.from_bond_pairs([(2, 5)])
        b = TriangleFamily.from_bond_pairs([(3, 4)])
        assert not is_compatible(a, b)

    def test_shared_bond_incompatible(self):
        a = TriangleFamily.from_bond_pairs([(0, 2)])
        b = TriangleFamily.from_bond_pairs([(2, 4)])
        assert not is_compatible(a, b)

    def test_energy_difference_matches_direct(self, spec):
        vol = Volume(0, 9)
        s = TriangleFamily.from_bond_pairs([(1, 2)])
        rest = TriangleFamily.from_bond_pairs([(6, 8)])
        expected = (hamiltonian(spec, triangles_to_spins(s.union(rest), vol))
                    - hamiltonian(spec, triangles_to_spins(rest, vol)))
        assert energy_difference(spec, s, rest, vol) == pytest.approx(expected, abs=1e-12)

    def test_energy_difference_rejects_incompatible(self, spec):
        vol = Volume(0, 9)
        with pytest.raises(IncompatibleFamiliesError):
            energy_difference(spec, TriangleFamily.from_bond_pairs([(2, 5)]),
                              TriangleFamily.from_bond_pairs([(3, 4)]), vol)
