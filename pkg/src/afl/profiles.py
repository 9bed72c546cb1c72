"""Radial profiles: functions of one variable r > 0 standing for radial
functions on R^n (space side) or radial spectra (frequency side).

Every profile exposes the information the quadrature layer needs:
``extent`` (radius beyond which it vanishes or is negligible),
``breakpoints`` (points where it is not smooth), ``feature_scale``
(smallest length scale) and ``bandwidth`` (frequency beyond which its
transform is negligible, or ``None`` if it decays only algebraically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import transforms
from .errors import InvalidParameters

# Gaussian tails: exp(-8.5^2 / 2) ~ 2e-16
GAUSS_CUT = 8.5
# radius * transition-width product at which a C-infinity cutoff of the
# exp(-1/t) family has decayed below ~1e-11 (measured on the LP kernel)
SMOOTH_DECAY = 100.0

_REGISTRY = {}


def _register(cls):
    _REGISTRY[cls.kind] = cls
    return cls


class RadialProfile:
    """Base class. Subclasses implement ``__call__`` and geometry hints."""

    kind = "abstract"

    def __call__(self, r):
        raise NotImplementedError

    def transform(self, rho, n):
        """Closed-form radial Fourier transform, or ``None`` if unavailable."""
        return None

    def extent(self) -> float:
        raise NotImplementedError

    def breakpoints(self):
        return np.empty(0)

    def feature_scale(self) -> float:
        return self.extent()

    def bandwidth(self):
        return None

    def to_dict(self) -> dict:
        raise TypeError(f"{type(self).__name__} is not serializable")

    @staticmethod
    def from_dict(data: dict) -> "RadialProfile":
        try:
            cls = _REGISTRY[data["kind"]]
        except KeyError as exc:
            raise InvalidParameters(f"unknown profile kind {data.get('kind')!r}") from exc
        return cls._from_dict(data)

    def __add__(self, other):
        return LinearCombination(((1.0, self), (1.0, other)))

    def __mul__(self, c):
        return LinearCombination(((float(c), self),))

    __rmul__ = __mul__


def _fields(data, *names, **defaults):
    out = {}
    for name in names:
        if name not in data:
            raise InvalidParameters(f"profile field {name!r} missing")
        out[name] = float(data[name])
    for name, val in defaults.items():
        out[name] = float(data.get(name, val))
    return out


@_register
@dataclass(frozen=True)
class Gaussian(RadialProfile):
    """amplitude * exp(-r^2 / (2 scale^2))."""

    scale: float = 1.0
    amplitude: float = 1.0
    kind = "gaussian"

    def __post_init__(self):
        if not self.scale > 0:
            raise InvalidParameters("Gaussian scale must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * np.exp(-0.5 * (r / self.scale) ** 2)

    def transform(self, rho, n):
        rho = np.asarray(rho, dtype=float)
        s = self.scale
        return self.amplitude * (2 * math.pi) ** (0.5 * n) * s ** n * np.exp(-0.5 * (s * rho) ** 2)

    def extent(self):
        return GAUSS_CUT * self.scale

    def feature_scale(self):
        return self.scale

    def bandwidth(self):
        return GAUSS_CUT / self.scale

    def to_dict(self):
        return {"kind": self.kind, "scale": self.scale, "amplitude": self.amplitude}

    @classmethod
    def _from_dict(cls, d):
        return cls(**_fields(d, scale=1.0, amplitude=1.0))


@_register
@dataclass(frozen=True)
class ShellGaussian(RadialProfile):
    """amplitude * exp(-(r - radius)^2 / (2 scale^2)): a Gaussian shell."""

    radius: float = 1.0
    scale: float = 0.25
    amplitude: float = 1.0
    kind = "shell_gaussian"

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * np.exp(-0.5 * ((r - self.radius) / self.scale) ** 2)

    def extent(self):
        return self.radius + GAUSS_CUT * self.scale

    def breakpoints(self):
        lo = self.radius - GAUSS_CUT * self.scale
        return np.array([lo]) if lo > 0 else np.empty(0)

    def feature_scale(self):
        return self.scale

    def bandwidth(self):
        return GAUSS_CUT / self.scale

    def to_dict(self):
        return {"kind": self.kind, "radius": self.radius, "scale": self.scale, "amplitude": self.amplitude}

    @classmethod
    def _from_dict(cls, d):
        return cls(**_fields(d, radius=1.0, scale=0.25, amplitude=1.0))


@_register
@dataclass(frozen=True)
class Bump(RadialProfile):
    """Smooth compactly supported bump amplitude * exp(1 - 1/(1 - u^2)),
    u = (r - center)/width, vanishing for |u| >= 1. Equals ``amplitude`` at
    r = center."""

    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0
    kind = "bump"

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidParameters("bump width must be positive")

    def __call__(self, r):
        u = (np.asarray(r, dtype=float) - self.center) / self.width
        inside = np.abs(u) < 1
        us = np.where(inside, u, 0.0)
        return np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / (1.0 - us * us)), 0.0)

    def extent(self):
        return self.center + self.width

    def breakpoints(self):
        return np.array([p for p in (self.center - self.width, self.center) if p > 0])

    def feature_scale(self):
        return self.width

    def bandwidth(self):
        return 2 * SMOOTH_DECAY / self.width

    def to_dict(self):
        return {"kind": self.kind, "center": self.center, "width": self.width, "amplitude": self.amplitude}

    @classmethod
    def _from_dict(cls, d):
        return cls(**_fields(d, center=0.0, width=1.0, amplitude=1.0))


@_register
@dataclass(frozen=True)
class PowerBump(RadialProfile):
    """amplitude * (1 - (r/radius)^2)_+^power.

    Closed-form transform:
    amplitude * radius^n Gamma(m+1) 2^m (2 pi)^{n/2} K_{n/2+m}(radius rho).
    """

    radius: float = 1.0
    power: float = 2.0
    amplitude: float = 1.0
    kind = "power_bump"

    def __post_init__(self):
        if not (self.radius > 0 and self.power >= 0):
            raise InvalidParameters("power bump needs radius > 0 and power >= 0")

    def __call__(self, r):
        u = np.asarray(r, dtype=float) / self.radius
        base = np.clip(1.0 - u * u, 0.0, None)
        return self.amplitude * np.where(u < 1, base ** self.power, 0.0)

    def transform(self, rho, n):
        from .special_functions import bessel_kernel

        a, m = self.radius, self.power
        rho = np.asarray(rho, dtype=float)
        c = self.amplitude * a ** n * math.gamma(m + 1) * 2.0 ** m * (2 * math.pi) ** (0.5 * n)
        return c * bessel_kernel(0.5 * n + m, a * rho)

    def extent(self):
        return self.radius

    def feature_scale(self):
        return self.radius

    def bandwidth(self):
        # algebraic envelope (a rho)^{-(m+1)}; cut at 1e-10
        return 1e10 ** (1.0 / (self.power + 1.0)) / self.radius

    def to_dict(self):
        return {"kind": self.kind, "radius": self.radius, "power": self.power, "amplitude": self.amplitude}

    @classmethod
    def _from_dict(cls, d):
        return cls(**_fields(d, radius=1.0, power=2.0, amplitude=1.0))


@_register
@dataclass(frozen=True)
class Indicator(RadialProfile):
    """height on r_lo < r <= r_hi, zero elsewhere (lower boundary excluded)."""

    r_lo: float = 0.0
    r_hi: float = 1.0
    height: float = 1.0
    kind = "indicator"

    def __post_init__(self):
        if not 0 <= self.r_lo < self.r_hi:
            raise InvalidParameters("indicator needs 0 <= r_lo < r_hi")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        lower = (r > self.r_lo) if self.r_lo > 0 else (r >= 0)
        return np.where(lower & (r <= self.r_hi), self.height, 0.0)

    def transform(self, rho, n):
        from .special_functions import bessel_kernel

        rho = np.asarray(rho, dtype=float)
        c = self.height * (2 * math.pi) ** (0.5 * n)
        out = self.r_hi ** n * bessel_kernel(0.5 * n, self.r_hi * rho)
        if self.r_lo > 0:
            out = out - self.r_lo ** n * bessel_kernel(0.5 * n, self.r_lo * rho)
        return c * out

    def extent(self):
        return self.r_hi

    def breakpoints(self):
        return np.array([self.r_lo]) if self.r_lo > 0 else np.empty(0)

    def feature_scale(self):
        return self.r_hi - self.r_lo

    def to_dict(self):
        return {"kind": self.kind, "r_lo": self.r_lo, "r_hi": self.r_hi, "height": self.height}

    @classmethod
    def _from_dict(cls, d):
        return cls(**_fields(d, r_lo=0.0, r_hi=1.0, height=1.0))


@_register
@dataclass(frozen=True, eq=False)
class Sampled(RadialProfile):
    """Tabulated profile on a strictly increasing grid.

    Interpolation is piecewise linear in log r (``"log"``) or in r
    (``"linear"``, required when the grid contains 0). Zero outside the grid.
    """

    r: np.ndarray = field(default_factory=lambda: np.array([1.0, 2.0]))
    values: np.ndarray = field(default_factory=lambda: np.zeros(2))
    interpolation: str = "log"
    kind = "sampled"

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 2:
            raise InvalidParameters("sampled profile needs matching 1-d grid and values (>= 2 points)")
        if not np.all(np.diff(r) > 0):
            raise InvalidParameters("sampled grid must be strictly increasing")
        if not np.all(np.isfinite(v)) or not np.all(np.isfinite(r)):
            raise InvalidParameters("sampled profile values must be finite")
        if self.interpolation not in ("log", "linear"):
            raise InvalidParameters("interpolation must be 'log' or 'linear'")
        if self.interpolation == "log" and r[0] <= 0:
            raise InvalidParameters("log interpolation needs a positive grid")
        r.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", v)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.interpolation == "log":
            x = np.log(np.maximum(r, 1e-300))
            out = np.interp(x, np.log(self.r), self.values, left=0.0, right=0.0)
        else:
            out = np.interp(r, self.r, self.values, left=0.0, right=0.0)
        return np.where((r >= self.r[0]) & (r <= self.r[-1]), out, 0.0)

    def extent(self):
        return float(self.r[-1])

    def breakpoints(self):
        return self.r

    def feature_scale(self):
        return float(np.min(np.diff(self.r))) * 16

    @classmethod
    def log_uniform(cls, func, r_min, r_max, count):
        grid = np.geomspace(r_min, r_max, count)
        return cls(grid, np.asarray(func(grid), dtype=float))

    def to_dict(self):
        return {
            "kind": self.kind,
            "interpolation": self.interpolation,
            "r": [float(x) for x in self.r],
            "values": [float(x) for x in self.values],
        }

    @classmethod
    def _from_dict(cls, d):
        return cls(np.array(d["r"], dtype=float), np.array(d["values"], dtype=float), d.get("interpolation", "log"))


@_register
@dataclass(frozen=True, eq=False)
class LinearCombination(RadialProfile):
    """sum_i c_i f_i."""

    terms: tuple = ()
    kind = "linear_combination"

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape)
        for c, p in self.terms:
            out = out + c * p(r)
        return out

    def transform(self, rho, n):
        parts = [p.transform(rho, n) for _, p in self.terms]
        if any(v is None for v in parts):
            return None
        return sum(c * v for (c, _), v in zip(self.terms, parts))

    def extent(self):
        return max(p.extent() for _, p in self.terms)

    def breakpoints(self):
        pts = [p.breakpoints() for _, p in self.terms]
        pts += [np.array([p.extent()]) for _, p in self.terms]
        return np.unique(np.concatenate(pts))

    def feature_scale(self):
        return min(p.feature_scale() for _, p in self.terms)

    def bandwidth(self):
        bws = [p.bandwidth() for _, p in self.terms]
        return None if any(b is None for b in bws) else max(bws)

    def to_dict(self):
        return {"kind": self.kind, "terms": [[c, p.to_dict()] for c, p in self.terms]}

    @classmethod
    def _from_dict(cls, d):
        return cls(tuple((float(c), RadialProfile.from_dict(p)) for c, p in d["terms"]))




@dataclass(frozen=True, eq=False)
class FunctionProfile(RadialProfile):
    """Wraps a vectorized callable with explicit geometry hints."""

    func: object = None
    support: float = 1.0
    points: tuple = ()
    scale: float = None
    kind = "function"

    def __call__(self, r):
        return np.asarray(self.func(np.asarray(r, dtype=float)), dtype=float)

    def extent(self):
        return self.support

    def breakpoints(self):
        return np.asarray(self.points, dtype=float)

    def feature_scale(self):
        return self.scale if self.scale is not None else self.support


@dataclass(frozen=True, eq=False)
class SpectralProfile(RadialProfile):
    """Radial function defined by its spectrum on a union of frequency segments.

    Space-side values are computed by the inverse radial transform.
    ``support`` is the radius beyond which the space-side function is
    negligible, used to size quadrature grids.
    """

    spectrum: object = None
    segments: tuple = ()
    n: int = 3
    support: float = 1.0
    kind = "spectral"

    def __call__(self, r):
        return transforms.inverse_values(self.spectrum, self.segments, self.n, r)

    def transform(self, rho, n):
        if n != self.n:
            raise InvalidParameters(f"spectral profile built for n={self.n}, asked for n={n}")
        rho = np.asarray(rho, dtype=float)
        out = np.zeros(rho.shape)
        inside = np.zeros(rho.shape, dtype=bool)
        for lo, hi in self.segments:
            inside |= (rho >= lo) & (rho <= hi)
        if np.any(inside):
            out[inside] = self.spectrum(rho[inside])
        return out

    def extent(self):
        return self.support

    def feature_scale(self):
        top = max(hi for _, hi in self.segments) if self.segments else 1.0
        return min(self.support, 2.0 / top)

    def bandwidth(self):
        return max(hi for _, hi in self.segments) if self.segments else 0.0


def smooth_bump(u):
    """exp(1 - 1/(1 - u^2)) on |u| < 1, zero elsewhere."""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1
    us = np.where(inside, u, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - us * us)), 0.0)


@_register
@dataclass(frozen=True, eq=False)
class BandBump(SpectralProfile):
    """Radial function whose spectrum is a smooth bump on [lo, hi].

    The spectrum is ``amplitude * exp(1 - 1/(1 - u^2))`` with u mapping
    [lo, hi] onto [-1, 1], so the transform is exactly band-limited.
    """

    lo: float = 1.0
    hi: float = 2.0
    amplitude: float = 1.0
    kind = "band_bump"

    def __post_init__(self):
        if not 0 <= self.lo < self.hi:
            raise InvalidParameters("band bump needs 0 <= lo < hi")
        mid = 0.5 * (self.lo + self.hi)
        half = 0.5 * (self.hi - self.lo)
        amp = self.amplitude
        object.__setattr__(self, "spectrum", lambda rho: amp * smooth_bump((np.asarray(rho) - mid) / half))
        object.__setattr__(self, "segments", ((self.lo, self.hi),))
        object.__setattr__(self, "support", 2 * SMOOTH_DECAY / half)

    def to_dict(self):
        return {"kind": self.kind, "lo": self.lo, "hi": self.hi, "amplitude": self.amplitude, "n": self.n}

    @classmethod
    def _from_dict(cls, d):
        return cls(lo=float(d["lo"]), hi=float(d["hi"]), amplitude=float(d.get("amplitude", 1.0)), n=int(d.get("n", 3)))
