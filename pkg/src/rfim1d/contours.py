"""Grouping triangle families into well-separated contours.

A contour is a cluster of triangles; two distinct contours must either
have disjoint enclosing intervals at distance > C * min(|G|^3, |G'|^3)
or be nested, with the inner one at distance > C * |inner|^3 from the
outer and each outer triangle containing or avoiding the inner's
enclosing interval.  The decomposition is computed by merging violating
pairs to a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .triangles import Triangle, TriangleFamily, triangle_distance

DEFAULT_SEPARATION_TERMS = 2_000_000


@dataclass(frozen=True)
class SeparationConstant:
    """Constant C controlling contour separation."""

    c: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("separation constant must be >= 1")

    def __int__(self) -> int:
        return self.c


def separation_series(c: int, terms: int = DEFAULT_SEPARATION_TERMS) -> Tuple[float, float]:
    """Partial sum and tail bound of sum_m 4m / floor(c*m)**3."""
    m = np.arange(1, terms + 1, dtype=np.float64)
    partial = float(np.sum(4.0 * m / np.floor(c * m) ** 3))
    # floor(c*m) >= c*m - 1, so the tail is below (4/c^3) * (1/M) / (1 - 1/(c*M))^3
    tail = (4.0 / c**3) / terms / (1.0 - 1.0 / (c * terms)) ** 3
    return partial, tail


def choose_C(terms: int = DEFAULT_SEPARATION_TERMS) -> SeparationConstant:
    """Smallest integer C with sum_m 4m / floor(C*m)**3 <= 1/2."""
    for c in range(1, 64):
        partial, tail = separation_series(c, terms)
        if partial + tail <= 0.5:
            return SeparationConstant(c)
    raise RuntimeError("no admissible separation constant found")


@dataclass(frozen=True)
class Contour:
    """A cluster of triangles with its equal-mass class decomposition."""

    triangles: Tuple[Triangle, ...]

    def __post_init__(self):
        if not self.triangles:
            raise ValueError("a contour needs at least one triangle")
        object.__setattr__(self, "triangles", tuple(sorted(self.triangles, key=lambda t: t.bonds)))

    @classmethod
    def of(cls, triangles) -> "Contour":
        return cls(tuple(triangles))

    @property
    def left_bond(self) -> int:
        return min(t.left_bond for t in self.triangles)

    @property
    def right_bond(self) -> int:
        return max(t.right_bond for t in self.triangles)

    @property
    def enclosing(self) -> Triangle:
        """T(Gamma): smallest triangle containing all members."""
        return Triangle.from_bonds(self.left_bond, self.right_bond)

    @property
    def x_minus(self) -> int:
        """Leftmost integer site of the enclosing basis."""
        return self.left_bond + 1

    @property
    def x_plus(self) -> int:
        return self.right_bond

    @property
    def mass(self) -> int:
        return sum(t.mass for t in self.triangles)

    def family(self) -> TriangleFamily:
        return TriangleFamily.of(self.triangles)

    def classes(self) -> List[Tuple[int, List[Triangle]]]:
        """Equal-mass classes (Delta_l, members), strictly increasing in mass."""
        by_mass: Dict[int, List[Triangle]] = {}
        for t in self.triangles:
            by_mass.setdefault(t.mass, []).append(t)
        return [(mass, sorted(by_mass[mass], key=lambda t: t.bonds)) for mass in sorted(by_mass)]

    @property
    def n_classes(self) -> int:
        return len({t.mass for t in self.triangles})

    def power_mass(self, rho: float) -> float:
        """sum_l n_l * Delta_l**rho."""
        return float(sum(n * d**rho for d, n in ((d, len(ts)) for d, ts in self.classes())))

    def contains_site(self, i: int) -> bool:
        """Site inside the enclosing basis."""
        return self.left_bond < i <= self.right_bond

    def distance(self, other: "Contour") -> int:
        return min(
            triangle_distance(a, b) for a in self.triangles for b in other.triangles
        )

    def shifted(self, k: int) -> "Contour":
        return Contour.of(Triangle.from_bonds(l + k, r + k) for l, r in (t.bonds for t in self.triangles))


def contour_power_mass(gamma: Contour, rho: float) -> float:
    return gamma.power_mass(rho)


def _intervals_disjoint(a: Contour, b: Contour) -> bool:
    return a.right_bond <= b.left_bond or b.right_bond <= a.left_bond


def _pair_separated(a: Contour, b: Contour, c: int) -> bool:
    """True iff the pair satisfies one of the separation alternatives."""
    if _intervals_disjoint(a, b):
        return a.distance(b) > c * min(a.mass, b.mass) ** 3
    if a.enclosing.contains_triangle(b.enclosing):
        a, b = b, a
    if not b.enclosing.contains_triangle(a.enclosing):
        return False  # partial overlap of enclosing intervals
    inner, outer = a, b
    for t in outer.triangles:
        if not (t.contains_triangle(inner.enclosing)
                or t.right_bond <= inner.left_bond
                or inner.right_bond <= t.left_bond):
            return False
    return inner.distance(outer) > c * inner.mass**3


def contours(family: TriangleFamily, c: SeparationConstant | int = 3) -> List[Contour]:
    """Partition a family into contours by merging to a fixed point.

    Deterministic: among violating pairs, the one with the smallest
    (left endpoint, mass) keys merges first.  Output ordered by left
    endpoint.
    """
    cval = int(c)
    clusters = [Contour.of([t]) for t in family.sorted()]
    merged = True
    while merged:
        merged = False
        clusters.sort(key=lambda g: (g.left_bond, g.mass))
        n = len(clusters)
        best = None
        for i in range(n):
            for j in range(i + 1, n):
                if not _pair_separated(clusters[i], clusters[j], cval):
                    best = (i, j)
                    break
            if best:
                break
        if best:
            i, j = best
            fused = Contour.of(clusters[i].triangles + clusters[j].triangles)
            clusters = [g for k, g in enumerate(clusters) if k not in (i, j)] + [fused]
            merged = True
    return sorted(clusters, key=lambda g: g.left_bond)


def verify_P1(contour_list: Sequence[Contour], c: SeparationConstant | int = 3) -> bool:
    """Certificate: every distinct pair satisfies a separation alternative."""
    cval = int(c)
    for i, a in enumerate(contour_list):
        for b in contour_list[i + 1:]:
            if not _pair_separated(a, b, cval):
                return False
    return True


def verify_P2(families: Sequence[TriangleFamily], c: SeparationConstant | int = 3) -> bool:
    """Independence: the decomposition of a union of pre-separated families
    is the union of the individual decompositions."""
    cval = int(c)
    individual: List[Contour] = []
    for fam in families:
        individual.extend(contours(fam, cval))
    if not verify_P1(individual, cval):
        raise ValueError("families' contours do not pairwise satisfy the separation rules")
    union = TriangleFamily.empty()
    for fam in families:
        union = union.union(fam)
    joint = contours(union, cval)
    key = lambda gs: sorted(tuple(t.bonds for t in g.triangles) for g in gs)
    return key(joint) == key(individual)
