"""Annulus geometry of the radial frame.

For dimension n, nu = (n-2)/2 and the zeros j_{nu,k} (with j_{nu,0} = 0),
the annulus A_{mu,k} is 2^{-mu} j_{nu,k-1} <= |x| <= 2^{-mu} j_{nu,k}.
Neighbouring annuli share a boundary sphere; point evaluations assign that
sphere to the lower index k, i.e. A_{mu,k} is taken as r_lo < |x| <= r_hi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfTable, InvalidParameters
from .profiles import Indicator
from .special_functions import BesselZeroTable, bessel_zeros
from .transforms import nu_of, sphere_area


@dataclass(frozen=True, order=True)
class FrameIndex:
    """Address (mu, k) of one annulus / atom: mu >= 0 dyadic scale, k >= 1 radial index."""

    mu: int
    k: int

    def __post_init__(self):
        if int(self.mu) != self.mu or int(self.k) != self.k:
            raise InvalidParameters("frame indices must be integers")
        if self.mu < 0 or self.k < 1:
            raise InvalidParameters(f"invalid frame index (mu={self.mu}, k={self.k}); need mu >= 0, k >= 1")


@dataclass(frozen=True, eq=False)
class AnnulusTable:
    """Truncated annulus geometry for one dimension."""

    n: int
    mu_max: int
    k_max: int
    zeros: BesselZeroTable

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameters("dimension must be >= 2")
        if self.mu_max < 0 or self.k_max < 1:
            raise InvalidParameters("need mu_max >= 0 and k_max >= 1")
        if self.zeros.K < self.k_max or self.zeros.nu != nu_of(self.n):
            raise InvalidParameters("zero table does not match (n, k_max)")

    @property
    def nu(self) -> float:
        return nu_of(self.n)

    @property
    def omega(self) -> float:
        return sphere_area(self.n)

    def check(self, idx: FrameIndex):
        if idx.mu > self.mu_max or idx.k > self.k_max:
            raise IndexOutOfTable(f"index (mu={idx.mu}, k={idx.k}) outside table (mu_max={self.mu_max}, k_max={self.k_max})")

    def radii(self, mu: int) -> np.ndarray:
        """Boundary radii (0, 2^{-mu} j_1, ..., 2^{-mu} j_{k_max}) of scale mu."""
        return np.ldexp(self.zeros.with_origin()[: self.k_max + 1], -int(mu))

    def measures(self, mu: int) -> np.ndarray:
        """|A_{mu,k}| for k = 1..k_max."""
        b = self.radii(mu) ** self.n
        return self.omega / self.n * np.diff(b)

    def locate(self, mu: int, r) -> np.ndarray:
        """Radial index k of the annulus containing r (0 if r is beyond the table)."""
        r = np.asarray(r, dtype=float)
        edges = self.radii(mu)
        k = np.searchsorted(edges, r, side="left")
        k = np.where(r <= 0, 1, k)
        return np.where(k > self.k_max, 0, k)


def annulus_table(n: int, mu_max: int, k_max: int) -> AnnulusTable:
    if int(n) != n or n < 2:
        raise InvalidParameters(f"dimension n={n} must be an integer >= 2")
    return AnnulusTable(n=n, mu_max=mu_max, k_max=k_max, zeros=bessel_zeros(nu_of(n), k_max))


def annulus_bounds(table: AnnulusTable, idx: FrameIndex):
    """Inner and outer radius (r_lo, r_hi) of A_{mu,k}."""
    table.check(idx)
    z = table.zeros
    return float(np.ldexp(z[idx.k - 1], -idx.mu)), float(np.ldexp(z[idx.k], -idx.mu))


def annulus_measure(table: AnnulusTable, idx: FrameIndex) -> float:
    """Lebesgue measure omega_{n-1}/n (r_hi^n - r_lo^n)."""
    lo, hi = annulus_bounds(table, idx)
    return table.omega / table.n * (hi ** table.n - lo ** table.n)


def indicator_profile(table: AnnulusTable, idx: FrameIndex) -> Indicator:
    """L2-normalized indicator |A|^{-1/2} chi_A as a radial profile."""
    lo, hi = annulus_bounds(table, idx)
    return Indicator(lo, hi, annulus_measure(table, idx) ** -0.5)
