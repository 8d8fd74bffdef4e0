"""Random functionals of the Peierls argument, computed exactly on small volumes.

For a fixed contour, the log-ratio functionals F_j compare constrained
partition sums in which the j smallest equal-mass classes of the contour
have been erased from the deterministic energy, with and without the
matching erasure in the field term.  Sign flips of the field on the
composed class supports exchange numerator and denominator, which makes
F_j antisymmetric and mean zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .bounds import zeta
from .contours import Contour
from .model import (CapacityError, CouplingSpec, DisorderField,
                    SpinConfiguration, Volume, enumerate_spins)
from .triangles import TriangleFamily, spins_to_triangles

EXHAUSTIVE_SITE_CAP = 12
ANTISYMMETRY_TOL = 1e-9
# constant in the exponent of the class-level probability bound
PROBABILITY_CONSTANT = 2.0**10


def flip_field(h: DisorderField, sites: FrozenSet[int] | Sequence[int]) -> DisorderField:
    """Negate the field on the given sites (an involution)."""
    values = h.values.copy()
    for i in sites:
        values[h.volume.index(i)] *= -1.0
    return DisorderField(h.volume, values, h.theta, h.distribution, h.seed)


def class_support(contour: Contour, ell: int) -> FrozenSet[int]:
    """Integer support of the ell-th equal-mass class."""
    classes = contour.classes()
    if not 0 <= ell < len(classes):
        raise ValueError(f"class index {ell} out of range")
    sites = set()
    for t in classes[ell][1]:
        sites.update(t.sites())
    return frozenset(sites)


def flip_composition(contour: Contour, j: int) -> FrozenSet[int]:
    """Effective flip set D_j of the composed class flips 0..j.

    Sites covered by an even number of class supports drop out; equality
    with the union holds exactly when the supports are disjoint.
    """
    if not 0 <= j < contour.n_classes:
        raise ValueError(f"level {j} out of range")
    counts: dict = {}
    for ell in range(j + 1):
        for i in class_support(contour, ell):
            counts[i] = counts.get(i, 0) + 1
    return frozenset(i for i, c in counts.items() if c % 2 == 1)


def thresholds(contour: Contour, alpha: float) -> np.ndarray:
    """A_i = (zeta/4) * sum_{l <= i} n_l * Delta_l**alpha, strictly increasing."""
    z = zeta(alpha)
    terms = [len(ts) * d**alpha for d, ts in contour.classes()]
    return 0.25 * z * np.cumsum(terms)


def b_bar(beta: float, theta: float, alpha: float) -> float:
    """min(beta*zeta/4, zeta^2 / (2^10 theta^2)); the first branch at theta=0."""
    z = zeta(alpha)
    first = beta * z / 4.0
    if theta == 0.0:
        return first
    return min(first, z**2 / (PROBABILITY_CONSTANT * theta**2))


class ConstrainedEnsemble:
    """Exhaustive sums over triangle families compatible with a fixed contour.

    Precomputes, for every compatible family T and every level j, the
    deterministic energy of the configuration with classes 0..j erased and
    the spin images entering the two field terms of F_j.
    """

    def __init__(self, spec: CouplingSpec, contour: Contour, vol: Volume,
                 site_cap: int = EXHAUSTIVE_SITE_CAP):
        n = vol.n_sites
        if n > site_cap:
            raise CapacityError(f"{n} sites exceeds exhaustive cap {site_cap}")
        self.spec = spec
        self.contour = contour
        self.vol = vol
        self.n_levels = contour.n_classes
        gamma_fam = contour.family()
        gamma_pairs = gamma_fam.bond_pairs()

        compatible: List[TriangleFamily] = []
        all_spins = enumerate_spins(n)
        for code in range(2**n):
            sigma = SpinConfiguration(vol, all_spins[code])
            fam = spins_to_triangles(sigma)
            if gamma_pairs <= fam.bond_pairs():
                compatible.append(fam.difference(gamma_fam))
        if not compatible:
            raise ValueError("contour does not fit the volume")
        self.families = compatible

        from .bounds import EnergyModel

        model = EnergyModel(spec, vol)
        classes = contour.classes()
        prefixes = [
            TriangleFamily.of(t for _, ts in classes[: j + 1] for t in ts)
            for j in range(self.n_levels)
        ]
        t_count = len(compatible)
        self.sigma_full = np.empty((t_count, n))
        self.h0_erased = np.empty((self.n_levels, t_count))
        self.sigma_erased = np.empty((self.n_levels, t_count, n))
        for t_idx, tbar in enumerate(compatible):
            full_fam = tbar.union(gamma_fam)
            self.sigma_full[t_idx] = model.family_image(full_fam)
            for j in range(self.n_levels):
                erased = full_fam.difference(prefixes[j])
                img = model.family_image(erased)
                self.sigma_erased[j, t_idx] = img
                self.h0_erased[j, t_idx] = model.h0(img)

    def f_values(self, fields: np.ndarray, theta: float, beta: float) -> np.ndarray:
        """F_j for a batch of field rows; shape (n_fields, n_levels)."""
        fields = np.atleast_2d(np.asarray(fields, dtype=np.float64))
        out = np.empty((fields.shape[0], self.n_levels))
        m_full = fields @ self.sigma_full.T  # (R, T)
        for j in range(self.n_levels):
            base = -beta * self.h0_erased[j][None, :]
            num = base + beta * theta * m_full
            den = base + beta * theta * (fields @ self.sigma_erased[j].T)
            out[:, j] = (logsumexp(num, axis=1) - logsumexp(den, axis=1)) / beta
        return out


def F_j(spec: CouplingSpec, contour: Contour, j: int, vol: Volume,
        h: DisorderField, theta: float, beta: float) -> float:
    """The level-j log-ratio functional for one field realization."""
    ens = ConstrainedEnsemble(spec, contour, vol)
    if not 0 <= j < ens.n_levels:
        raise ValueError(f"level {j} out of range")
    return float(ens.f_values(h.values[None, :], theta, beta)[0, j])


def _all_bernoulli_fields(n: int) -> np.ndarray:
    if n > 20:
        raise CapacityError("too many sites for exhaustive field enumeration")
    return enumerate_spins(n).astype(np.float64)


def check_antisymmetry(spec: CouplingSpec, contour: Contour, j: int, vol: Volume,
                       theta: float, beta: float,
                       tol: float = ANTISYMMETRY_TOL,
                       ensemble: Optional[ConstrainedEnsemble] = None) -> bool:
    """F_j(h) = -F_j(h flipped on D_j) over all Bernoulli realizations."""
    ens = ensemble or ConstrainedEnsemble(spec, contour, vol)
    fields = _all_bernoulli_fields(vol.n_sites)
    f = ens.f_values(fields, theta, beta)[:, j]
    mask = 0
    for i in flip_composition(contour, j):
        mask |= 1 << vol.index(i)
    codes = np.arange(fields.shape[0])
    return bool(np.all(np.abs(f + f[codes ^ mask]) <= tol))


def check_antisymmetry_sampled(spec: CouplingSpec, contour: Contour, j: int, vol: Volume,
                               theta: float, beta: float,
                               n_samples: int = 1000, seed: int = 0,
                               distribution: str = "gaussian",
                               tol: float = ANTISYMMETRY_TOL) -> bool:
    """Antisymmetry on antithetic pairs (h, h flipped on D_j) of sampled fields.

    Continuous distributions cannot be enumerated, so each sampled field is
    paired with its flipped partner and the two F_j values must cancel.
    """
    ens = ConstrainedEnsemble(spec, contour, vol)
    d_j = flip_composition(contour, j)
    fields = np.stack([
        DisorderField.generate(vol, theta, seed=seed + r, distribution=distribution).values
        for r in range(n_samples)
    ])
    flipped = fields.copy()
    for i in d_j:
        flipped[:, vol.index(i)] *= -1.0
    f = ens.f_values(fields, theta, beta)[:, j]
    g = ens.f_values(flipped, theta, beta)[:, j]
    return bool(np.all(np.abs(f + g) <= tol))


@dataclass(frozen=True)
class BjEstimate:
    """Probability of the level-j event with its class-level bound."""

    j: int
    estimate: float
    stderr: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.estimate <= self.bound + 3.0 * self.stderr

    def csv_row(self, instance: str = "") -> List:
        return [instance, self.j, self.estimate, self.stderr, self.bound, int(self.passed)]


BJ_CSV_COLUMNS = ["instance", "j", "estimate", "stderr", "bound", "pass"]


def _bj_indicators(f: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Indicator matrix of the events B_{-1}, ..., B_k from F rows."""
    k = f.shape[1] - 1
    below = f <= a[None, :]
    above = ~below
    cols = []
    # B_{-1}: every level stays above its threshold
    cols.append(np.all(above, axis=1))
    for j in range(k):
        cols.append(below[:, j] & np.all(above[:, j + 1:], axis=1))
    cols.append(below[:, k])
    return np.column_stack(cols)


def _bj_bounds(contour: Contour, alpha: float, theta: float) -> np.ndarray:
    """Right-hand sides of the class-level probability bound, j = -1..k."""
    z = zeta(alpha)
    masses = np.array([len(ts) * float(d)**(2 * alpha - 1.0) for d, ts in contour.classes()])
    k = len(masses) - 1
    out = np.empty(k + 2)
    for idx, j in enumerate(range(-1, k + 1)):
        tail = float(np.sum(masses[j + 1:]))
        if tail == 0.0:
            out[idx] = 1.0
        elif theta == 0.0:
            out[idx] = 0.0
        else:
            out[idx] = math.exp(-(z**2 / (PROBABILITY_CONSTANT * theta**2)) * tail)
    return out


def estimate_Bj_probability(spec: CouplingSpec, contour: Contour, vol: Volume,
                            theta: float, beta: float,
                            exhaustive: bool = True,
                            n_samples: int = 100_000,
                            seed: int = 0,
                            distribution: str = "gaussian") -> List[BjEstimate]:
    """P[B_j] for j = -1..k, exact over Bernoulli fields or by Monte Carlo.

    The exact indicators are verified to partition field space.
    """
    ens = ConstrainedEnsemble(spec, contour, vol)
    a = thresholds(contour, spec.alpha)
    bounds = _bj_bounds(contour, spec.alpha, theta)
    if exhaustive:
        fields = _all_bernoulli_fields(vol.n_sites)
        ind = _bj_indicators(ens.f_values(fields, theta, beta), a)
        if not np.all(ind.sum(axis=1) == 1):
            raise AssertionError("B_j events do not partition field space")
        probs = ind.mean(axis=0)
        errs = np.zeros_like(probs)
    else:
        fields = np.stack([
            DisorderField.generate(vol, theta, seed=seed + r, distribution=distribution).values
            for r in range(n_samples)
        ])
        ind = _bj_indicators(ens.f_values(fields, theta, beta), a)
        probs = ind.mean(axis=0)
        errs = np.sqrt(probs * (1.0 - probs) / n_samples)
    return [BjEstimate(j, float(p), float(e), float(b))
            for j, p, e, b in zip(range(-1, ens.n_levels), probs, errs, bounds)]
