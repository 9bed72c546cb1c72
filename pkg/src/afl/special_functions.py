"""Bessel functions of the first kind and their positive zeros.

Two evaluation paths are provided:

* :func:`eval_bessel_j` -- a scalar reference evaluator (power series in
  extended precision, Hankel asymptotic expansion for large arguments).
* :func:`bessel_j` / :func:`bessel_kernel` -- vectorized evaluation used by
  the transform and frame kernels, backed by ``scipy.special.jv``.

The zeros j_{nu,k} are located with a McMahon initial guess refined by a
safeguarded Newton iteration (bisection fallback inside a sign-change
bracket).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import mpmath
import numpy as np
from scipy import special

from .errors import NumericalFailure, UnsupportedOrderError

MAX_ORDER = 50.0
CACHE_ENV = "AFL_CACHE_DIR"
DEFAULT_CACHE_DIR = ".afl-cache"


def _check_order(nu):
    if not (0.0 <= nu <= MAX_ORDER) or not math.isfinite(nu):
        raise UnsupportedOrderError(f"Bessel order nu={nu!r} outside supported range [0, {MAX_ORDER}]")


# ---------------------------------------------------------------------------
# scalar reference evaluator
# ---------------------------------------------------------------------------

def _power_series(nu: float, x: float) -> float:
    # Terms grow to roughly e^x / sqrt(x) before cancelling; carry enough
    # guard digits to absorb that.
    dps = 25 + int(x / math.log(10)) + 5
    with mpmath.workdps(dps):
        mx = mpmath.mpf(x)
        mnu = mpmath.mpf(nu)
        half = mx / 2
        term = half ** mnu / mpmath.gamma(mnu + 1)
        total = term
        h2 = -(half * half)
        m = 0
        eps = mpmath.mpf(10) ** (-(dps - 3))
        while True:
            m += 1
            term = term * h2 / (m * (m + mnu))
            total += term
            if m > half and abs(term) <= eps * max(abs(total), mpmath.mpf(10) ** -300):
                break
        return float(total)


def _hankel_asymptotic(nu: float, x: float):
    """Large-argument expansion; returns (value, truncation_error_estimate)."""
    with mpmath.workdps(40):
        mx = mpmath.mpf(x)
        mu4 = 4 * mpmath.mpf(nu) ** 2
        P = mpmath.mpf(0)
        Q = mpmath.mpf(0)
        a = mpmath.mpf(1)
        prev = mpmath.inf
        err = mpmath.mpf(0)
        # factors (4nu^2 - (2k-1)^2) can dip near zero for small k; terms only
        # grow for good once (2k-1)^2 exceeds 4nu^2
        k_settled = int(math.ceil((math.sqrt(4 * nu * nu) + 1) / 2)) + 1
        for k in range(0, 400):
            if k > 0:
                a = a * (mu4 - (2 * k - 1) ** 2) / (k * 8 * mx)
            mag = abs(a)
            if mag == 0:
                err = mpmath.mpf(0)
                break
            if mag > prev and k > k_settled:
                err = prev
                break
            sign = -1 if (k // 2) % 2 else 1
            if k % 2 == 0:
                P += sign * a
            else:
                Q += sign * a
            prev = mag
            if mag < mpmath.mpf(10) ** -30:
                err = mag
                break
        else:
            err = prev
        chi = mx - (mpmath.mpf(nu) / 2 + mpmath.mpf(1) / 4) * mpmath.pi
        amp = mpmath.sqrt(2 / (mpmath.pi * mx))
        val = amp * (P * mpmath.cos(chi) - Q * mpmath.sin(chi))
        return float(val), float(err * amp)


def eval_bessel_j(nu: float, x: float) -> float:
    """Reference value of J_nu(x) for 0 <= nu <= 50 and finite x >= 0.

    Below ``max(12, 2*nu)`` the power series is summed in extended
    precision. Above it the Hankel expansion is used when its truncation
    error is below 1e-17; otherwise the extended-precision series is used,
    which converges for every x.
    """
    nu = float(nu)
    x = float(x)
    _check_order(nu)
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"argument must be finite and non-negative, got {x!r}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x >= max(12.0, 2.0 * nu):
        val, err = _hankel_asymptotic(nu, x)
        if err <= 1e-17:
            return val
    return _power_series(nu, x)


# ---------------------------------------------------------------------------
# vectorized kernels
# ---------------------------------------------------------------------------

def bessel_j(nu: float, x) -> np.ndarray:
    """Vectorized J_nu(x)."""
    _check_order(nu)
    x = np.asarray(x, dtype=float)
    if nu == 0.5:
        xs = np.where(x > 0, x, 1.0)
        return np.where(x > 0, np.sqrt(2.0 / (np.pi * xs)) * np.sin(x), 0.0)
    out = np.asarray(special.jv(nu, x), dtype=float)
    tiny = x < 1e-6
    if np.any(tiny):
        # two series terms are exact to double precision here; avoids
        # underflow trouble in the library routine near subnormal x
        h = 0.5 * x[tiny]
        lead = np.exp(nu * np.log(np.where(h > 0, h, 1.0)) - math.lgamma(nu + 1.0))
        val = lead * (1.0 - h * h / (nu + 1.0))
        out = np.array(out, copy=True)
        out[tiny] = np.where(h > 0, val, 1.0 if nu == 0 else 0.0)
    return out[()] if out.ndim == 0 else out


def kernel_at_zero(nu: float) -> float:
    """lim_{x->0} x^{-nu} J_nu(x) = 1 / (2^nu Gamma(nu+1))."""
    return 1.0 / (2.0 ** nu * math.gamma(nu + 1.0))


def bessel_kernel(nu: float, x) -> np.ndarray:
    """Regularized kernel x^{-nu} J_nu(x), smooth through x = 0.

    This is the radial part of the Fourier transform of the unit sphere
    measure: the sphere integral of exp(-i x.xi) equals
    (2 pi)^{n/2} (r rho)^{-nu} J_nu(r rho) with nu = (n-2)/2.
    """
    _check_order(nu)
    x = np.abs(np.asarray(x, dtype=float))
    if x.ndim == 0:
        return bessel_kernel(nu, x[None])[0]
    if nu == 0.5:
        # sqrt(2/pi) sin(x)/x; x == 0 handled by the where
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.sin(x)
            out /= x
        out[x == 0] = 1.0
        out *= math.sqrt(2.0 / math.pi)
        return out
    if nu == 0.0:
        return special.j0(x)
    out = np.empty_like(x)
    small = x < 1.0
    if np.any(small):
        xs = x[small]
        q = -(0.5 * xs) ** 2
        term = np.full_like(xs, kernel_at_zero(nu))
        acc = term.copy()
        for m in range(1, 13):
            term = term * q / (m * (m + nu))
            acc += term
        out[small] = acc
    big = ~small
    if np.any(big):
        xb = x[big]
        if nu == 1.0:
            out[big] = special.j1(xb) / xb
        elif nu == 1.5:
            out[big] = math.sqrt(2.0 / math.pi) * (np.sin(xb) / xb - np.cos(xb)) / (xb * xb)
        else:
            out[big] = special.jv(nu, xb) / xb ** nu
    return out


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BesselZeroTable:
    """Positive zeros j_{nu,1} < ... < j_{nu,K} of J_nu."""

    nu: float
    zeros: np.ndarray

    @property
    def K(self) -> int:
        return int(self.zeros.size)

    def __getitem__(self, k: int) -> float:
        """1-based access with the convention j_{nu,0} = 0."""
        if k == 0:
            return 0.0
        if not 1 <= k <= self.K:
            raise IndexError(f"zero index {k} outside 0..{self.K}")
        return float(self.zeros[k - 1])

    def with_origin(self) -> np.ndarray:
        """Array (0, j_1, ..., j_K)."""
        return np.concatenate(([0.0], self.zeros))

    def to_dict(self) -> dict:
        return {"schema": "afl-zeros/1", "nu": self.nu, "K": self.K, "zeros": [float(z) for z in self.zeros]}

    @classmethod
    def from_dict(cls, data: dict) -> "BesselZeroTable":
        zeros = np.array(data["zeros"], dtype=float)
        zeros.setflags(write=False)
        return cls(nu=float(data["nu"]), zeros=zeros)


def mcmahon_guess(nu: float, k: int) -> float:
    """McMahon's large-k expansion for j_{nu,k}."""
    beta = (k + 0.5 * nu - 0.25) * math.pi
    m = 4.0 * nu * nu
    b8 = 8.0 * beta
    return (
        beta
        - (m - 1) / b8
        - 4 * (m - 1) * (7 * m - 31) / (3 * b8 ** 3)
        - 32 * (m - 1) * (83 * m * m - 982 * m + 3779) / (15 * b8 ** 5)
    )


def _j(nu, x):
    return float(bessel_j(nu, x))


def _refine_zero(nu, lo, hi, f_lo, guess):
    """Safeguarded Newton inside a sign-change bracket [lo, hi]."""
    x = guess if lo < guess < hi else 0.5 * (lo + hi)
    for _ in range(100):
        fx = _j(nu, x)
        if fx == 0.0:
            return x
        if (fx > 0) == (f_lo > 0):
            lo, f_lo = x, fx
        else:
            hi = x
        dfx = (nu / x) * fx - _j(nu + 1.0, x)
        step_ok = dfx != 0.0
        if step_ok:
            x_new = x - fx / dfx
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 4e-16 * x or hi - lo <= 4e-16 * hi:
            return x_new
        x = x_new
    return x


def _compute_zeros(nu: float, K: int) -> np.ndarray:
    zeros = np.empty(K)
    # consecutive zeros are at least ~3.1 apart for nu >= 0; a 0.5 step
    # cannot skip a sign change
    step = 0.5
    start = max(nu, 1e-3)
    prev = 0.0
    for k in range(1, K + 1):
        a = max(start, prev + 1e-6 * max(1.0, prev))
        found = False
        for _ in range(400):
            xs = a + step * np.arange(65)
            vals = bessel_j(nu, xs)
            if vals[0] == 0.0 and xs[0] > prev:
                zeros[k - 1] = xs[0]
                found = True
                break
            sgn = np.sign(vals)
            idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
            if idx.size:
                i = idx[0]
                lo, hi = xs[i], xs[i + 1]
                root = _refine_zero(nu, lo, hi, vals[i], mcmahon_guess(nu, k))
                zeros[k - 1] = root
                found = True
                break
            a = xs[-1]
        if not found:
            raise NumericalFailure(f"could not bracket zero k={k} of J_{nu}", k=k, nu=nu)
        prev = zeros[k - 1]
        start = prev + 1.0
    return zeros


@lru_cache(maxsize=64)
def _zeros_cached(nu: float, K: int) -> np.ndarray:
    z = _compute_zeros(nu, K)
    z.setflags(write=False)
    return z


def bessel_zeros(nu: float, K: int) -> BesselZeroTable:
    """First K positive zeros of J_nu (deterministic, memoized in-process)."""
    nu = float(nu)
    _check_order(nu)
    if int(K) < 1:
        raise ValueError("K must be >= 1")
    return BesselZeroTable(nu=nu, zeros=_zeros_cached(nu, int(K)))


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR))


def _cache_path(nu: float, K: int, directory: Path) -> Path:
    return directory / f"zeros_nu{nu!r}_K{K}.json"


def cached_bessel_zeros(nu: float, K: int, directory=None) -> BesselZeroTable:
    """Like :func:`bessel_zeros` but persisted as JSON keyed by (nu, K).

    The directory defaults to ``$AFL_CACHE_DIR`` or ``./.afl-cache``.
    """
    nu = float(nu)
    K = int(K)
    directory = Path(directory) if directory is not None else cache_dir()
    path = _cache_path(nu, K, directory)
    if path.exists():
        try:
            data = json.loads(path.read_text())
            if float(data["nu"]) == nu and int(data["K"]) == K:
                return BesselZeroTable.from_dict(data)
        except (ValueError, KeyError):
            pass
    table = bessel_zeros(nu, K)
    directory.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(table.to_dict()))
    tmp.replace(path)
    return table
