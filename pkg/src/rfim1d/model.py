"""Core model: long-range couplings, random fields, Hamiltonians, exact Gibbs marginals.

The chain carries ferromagnetic pair couplings J(1) = j1 (large) and
J(n) = n**(alpha - 2) for n >= 2, a site-wise random field of strength
theta, and homogeneous +/-1 boundary conditions outside a finite
interval.  Exterior sums reduce to power-law tails, evaluated by a
truncated sum with an Euler-Maclaurin correction whose remainder is kept
below ``tail_tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

# zeta(alpha) = 1 - 2(2**alpha - 1) is positive strictly below this value.
ALPHA_PEIERLS_MAX = math.log(3, 2) - 1.0

DISTRIBUTIONS = ("bernoulli", "gaussian", "uniform")


class CapacityError(RuntimeError):
    """An exhaustive computation was requested above its configured limit."""


class VolumeMismatchError(ValueError):
    """Operands defined on different volumes."""


@dataclass(frozen=True, order=True)
class Volume:
    """Finite integer interval [lo, hi], both ends included."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty volume [{self.lo}, {self.hi}]")

    @property
    def n_sites(self) -> int:
        return self.hi - self.lo + 1

    def sites(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def bonds(self) -> range:
        """Bonds (x, x+1) touching the volume, boundary bonds included."""
        return range(self.lo - 1, self.hi + 1)

    def __contains__(self, i) -> bool:
        return self.lo <= i <= self.hi

    def index(self, i: int) -> int:
        if i not in self:
            raise ValueError(f"site {i} outside volume [{self.lo}, {self.hi}]")
        return i - self.lo

    @classmethod
    def centered(cls, n_sites: int) -> "Volume":
        """Volume of n_sites sites containing the origin."""
        lo = -(n_sites // 2)
        return cls(lo, lo + n_sites - 1)


@dataclass(frozen=True)
class CouplingSpec:
    """Coupling parameters: alpha in [0, 1), nearest-neighbour value j1 > 1."""

    alpha: float = 0.55
    j1: float = 10.0
    tail_tolerance: float = 1e-10

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.j1 <= 1.0:
            raise ValueError(f"j1 must exceed 1, got {self.j1}")
        if self.tail_tolerance <= 0.0:
            raise ValueError("tail_tolerance must be positive")

    def coupling(self, n: int) -> float:
        """J(n): j1 at distance 1, n**(alpha-2) beyond."""
        if n < 1:
            raise ValueError(f"coupling distance must be >= 1, got {n}")
        if n == 1:
            return self.j1
        return float(n) ** (self.alpha - 2.0)

    def power_tail(self, d: int) -> float:
        """Sum of n**(alpha-2) over n >= d, to absolute accuracy tail_tolerance.

        Truncated sum plus the Euler-Maclaurin closure
        integral + f(M)/2 - f'(M)/12; the remainder is below
        M**(alpha-5)/30, which fixes the truncation point M.
        """
        if d < 1:
            raise ValueError("tail start must be >= 1")
        a = self.alpha
        m_min = (1.0 / (30.0 * self.tail_tolerance)) ** (1.0 / (5.0 - a))
        m = max(d, int(math.ceil(m_min)), 16)
        n = np.arange(d, m, dtype=np.float64)
        partial = float(np.sum(n ** (a - 2.0))) if n.size else 0.0
        fm = float(m) ** (a - 2.0)
        closure = float(m) ** (a - 1.0) / (1.0 - a) + fm / 2.0 - (a - 2.0) * float(m) ** (a - 3.0) / 12.0
        return partial + closure

    def tail(self, d: int) -> float:
        """Sum of J(n) over n >= d (j1 honoured when d == 1)."""
        if d == 1:
            return self.j1 + self.power_tail(2)
        return self.power_tail(d)

    def boundary_field(self, i: int, vol: Volume) -> float:
        """Sum of J(|i-j|) over sites j outside the volume."""
        if i not in vol:
            raise ValueError(f"site {i} outside volume")
        d_left = i - vol.lo + 1
        d_right = vol.hi - i + 1
        return self.tail(d_left) + self.tail(d_right)

    def coupling_matrix(self, vol: Volume) -> np.ndarray:
        """Dense J(|i-j|) over the volume, zero diagonal."""
        n = vol.n_sites
        dist = np.abs(np.subtract.outer(np.arange(n), np.arange(n))).astype(np.float64)
        with np.errstate(divide="ignore"):
            jm = np.where(dist > 0, dist ** (self.alpha - 2.0), 0.0)
        jm[dist == 1] = self.j1
        return jm

    def boundary_vector(self, vol: Volume) -> np.ndarray:
        return np.array([self.boundary_field(i, vol) for i in vol.sites()])


@dataclass(frozen=True, eq=False)
class SpinConfiguration:
    """+-1 spins on a volume with a homogeneous boundary value."""

    volume: Volume
    spins: np.ndarray
    boundary: int = +1

    def __post_init__(self):
        spins = np.asarray(self.spins, dtype=np.int8)
        object.__setattr__(self, "spins", spins)
        if spins.shape != (self.volume.n_sites,):
            raise ValueError("spin count does not match volume")
        if not np.all(np.abs(spins) == 1):
            raise ValueError("spins must be +-1")
        if self.boundary not in (-1, +1):
            raise ValueError("boundary must be +-1")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SpinConfiguration)
            and self.volume == other.volume
            and self.boundary == other.boundary
            and np.array_equal(self.spins, other.spins)
        )

    def spin(self, i: int) -> int:
        return int(self.spins[self.volume.index(i)])

    def flipped(self, i: int) -> "SpinConfiguration":
        spins = self.spins.copy()
        spins[self.volume.index(i)] *= -1
        return SpinConfiguration(self.volume, spins, self.boundary)

    @classmethod
    def homogeneous(cls, vol: Volume, value: int = +1, boundary: int = +1) -> "SpinConfiguration":
        return cls(vol, np.full(vol.n_sites, value, dtype=np.int8), boundary)

    @classmethod
    def from_minus_sites(cls, vol: Volume, minus, boundary: int = +1) -> "SpinConfiguration":
        spins = np.ones(vol.n_sites, dtype=np.int8)
        for i in minus:
            spins[vol.index(i)] = -1
        return cls(vol, spins, boundary)


def _site_rng(seed: int, site: int) -> np.random.Generator:
    # zigzag map keeps spawn keys non-negative; the field at a site is then
    # independent of the enclosing volume and of generation order
    key = 2 * site if site >= 0 else -2 * site - 1
    return np.random.default_rng(np.random.SeedSequence(entropy=seed & (2**64 - 1), spawn_key=(key,)))


@dataclass(frozen=True, eq=False)
class DisorderField:
    """A realization of the i.i.d. symmetric random field (unit scale; theta separate)."""

    volume: Volume
    values: np.ndarray
    theta: float
    distribution: str = "bernoulli"
    seed: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.shape != (self.volume.n_sites,):
            raise ValueError("field length does not match volume")
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.distribution == "bernoulli" and not np.all(np.abs(values) == 1.0):
            raise ValueError("bernoulli field values must be exactly +-1")

    def value(self, i: int) -> float:
        return float(self.values[self.volume.index(i)])

    @classmethod
    def generate(
        cls,
        vol: Volume,
        theta: float,
        seed: int,
        distribution: str = "bernoulli",
    ) -> "DisorderField":
        """Draw one realization, keyed per (seed, site) for order-independence."""
        values = np.empty(vol.n_sites)
        for k, i in enumerate(vol.sites()):
            rng = _site_rng(seed, int(i))
            if distribution == "bernoulli":
                values[k] = 2.0 * rng.integers(0, 2) - 1.0
            elif distribution == "gaussian":
                values[k] = rng.standard_normal()
            else:  # uniform on [-1, 1], a convenient subgaussian example
                values[k] = rng.uniform(-1.0, 1.0)
        return cls(vol, values, theta, distribution, seed)


def _check_same_volume(a_vol: Volume, b_vol: Volume) -> None:
    if a_vol != b_vol:
        raise VolumeMismatchError(f"volumes differ: {a_vol} vs {b_vol}")


def hamiltonian_deterministic(spec: CouplingSpec, sigma: SpinConfiguration) -> float:
    """H_0 with homogeneous boundary: pair term plus boundary term; >= 0."""
    jm = spec.coupling_matrix(sigma.volume)
    bv = spec.boundary_vector(sigma.volume)
    s = sigma.spins.astype(np.float64)
    pair = 0.5 * (jm.sum() - s @ jm @ s)
    boundary = bv @ (1.0 - sigma.boundary * s)
    return float(pair + boundary)


def field_energy(sigma: SpinConfiguration, h: DisorderField) -> float:
    """G = -sum_i h_i sigma_i (theta not included)."""
    _check_same_volume(sigma.volume, h.volume)
    return float(-(h.values @ sigma.spins.astype(np.float64)))


def hamiltonian(
    spec: CouplingSpec,
    sigma: SpinConfiguration,
    h: Optional[DisorderField] = None,
    theta: Optional[float] = None,
) -> float:
    """Full random Hamiltonian H_0 + theta * G."""
    e = hamiltonian_deterministic(spec, sigma)
    if h is not None:
        th = h.theta if theta is None else theta
        e += th * field_energy(sigma, h)
    return e


def _logsumexp(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    m = np.max(a)
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.sum(np.exp(a - m))))


def enumerate_spins(n: int) -> np.ndarray:
    """All 2**n sign vectors as an int8 array of shape (2**n, n)."""
    codes = np.arange(2**n, dtype=np.uint32)
    bits = (codes[:, None] >> np.arange(n, dtype=np.uint32)[None, :]) & 1
    return (2 * bits.astype(np.int8) - 1).astype(np.int8)


def batch_h0(spec: CouplingSpec, vol: Volume, spins: np.ndarray, boundary: int = +1) -> np.ndarray:
    """Deterministic energies for a batch of spin rows on one volume."""
    jm = spec.coupling_matrix(vol)
    bv = spec.boundary_vector(vol)
    s = spins.astype(np.float64)
    pair = 0.5 * (jm.sum() - np.einsum("ki,ij,kj->k", s, jm, s, optimize=True))
    bnd = (1.0 - boundary * s) @ bv
    return pair + bnd


def exact_gibbs_marginal(
    spec: CouplingSpec,
    vol: Volume,
    h: Optional[DisorderField],
    theta: float,
    beta: float,
    site: int,
    boundary: int = +1,
    exhaustive_limit: int = 20,
) -> float:
    """P[sigma_site = -1] under the finite-volume Gibbs measure, by enumeration."""
    n = vol.n_sites
    if n > exhaustive_limit:
        raise CapacityError(f"{n} sites exceeds exhaustive limit {exhaustive_limit}")
    idx = vol.index(site)
    spins = enumerate_spins(n)
    energies = batch_h0(spec, vol, spins, boundary)
    if h is not None and theta != 0.0:
        _check_same_volume(vol, h.volume)
        energies = energies - theta * (spins.astype(np.float64) @ h.values)
    log_w = -beta * energies
    minus = spins[:, idx] == -1
    return float(np.exp(_logsumexp(log_w[minus]) - _logsumexp(log_w)))
