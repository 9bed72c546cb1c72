"""Littlewood-Paley filter banks, radial transforms and Besov/TL norms.

Two banks share one smooth cutoff phi(xi) = g(2(|xi| - 1)) with
g(t) = h(1-t)/(h(1-t)+h(t)), h(t) = exp(-1/t) for t > 0:

* ``"lp"``: phi_0 = phi, phi_mu(xi) = phi(2^{-mu} xi) - phi(2^{1-mu} xi),
  summing to one.
* ``"frame"``: theta_mu(xi) = phi1(2^{1-mu} a xi) / sqrt(N(a xi)) with the
  homogeneous normalizer N(eta) = sum over all integers nu of
  phi1(2^{1-nu} eta)^2, phi1 = phi_1 of the LP bank and a = 7/4. A low-pass
  Phi completes Phi^2 + sum theta_mu^2 = 1. The dilation a places
  supp theta_mu inside 2^mu [2/7, 6/7], strictly within (2^{mu-2}, 2^mu).

Norms are evaluated on the space side: each band S_mu f is obtained by the
inverse radial transform of phi_mu f^ on a composite Gauss-Legendre grid,
then integrated against the weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from . import transforms
from .errors import ConstructionError, InvalidParameters
from .profiles import SMOOTH_DECAY, RadialProfile, SpectralProfile
from .quadrature import composite_gauss, graded_edges, merge_edges, panel_edges
from .transforms import forward_values, kernel_apply, nu_of, sphere_area
from .weights import PowerWeight, WeightSpec

FRAME_DILATION = 7.0 / 4.0
PARTITION_TOL = 1e-10
POINTS_PER_OCTAVE = 256
# bands whose filtered spectrum stays below this fraction of max|f^| are skipped
BAND_SKIP = 1e-14


# ---------------------------------------------------------------------------
# cutoffs
# ---------------------------------------------------------------------------

def smooth_step(t):
    """g(t): 1 for t <= 0, 0 for t >= 1, C-infinity in between."""
    t = np.asarray(t, dtype=float)
    out = np.where(t <= 0, 1.0, 0.0)
    mid = (t > 0) & (t < 1)
    if np.any(mid):
        tm = t[mid]
        out[mid] = expit(1.0 / tm - 1.0 / (1.0 - tm))
    return out


def cutoff(xi):
    """phi(xi) = g(2(|xi| - 1)): 1 on |xi| <= 1, 0 on |xi| >= 3/2."""
    return smooth_step(2.0 * (np.abs(np.asarray(xi, dtype=float)) - 1.0))


def lp_multiplier(mu: int, rho):
    rho = np.abs(np.asarray(rho, dtype=float))
    if mu == 0:
        return cutoff(rho)
    return cutoff(np.ldexp(rho, -mu)) - cutoff(np.ldexp(rho, 1 - mu))


def _hom(nu, eta):
    # phi1(2^{1-nu} eta) = phi(2^{-nu} eta) - phi(2^{1-nu} eta), nu any integer
    return cutoff(eta * 2.0 ** (-nu)) - cutoff(eta * 2.0 ** (1 - nu))


def _hom_normalizer(eta):
    """N(eta) = sum_{nu in Z} phi1(2^{1-nu} eta)^2 (at most two nonzero terms)."""
    eta = np.asarray(eta, dtype=float)
    base = np.floor(np.log2(np.maximum(eta, 1e-300)))
    total = np.zeros(eta.shape)
    for off in (-1, 0, 1, 2):
        total += _hom(base + off, eta) ** 2
    return total


def frame_multiplier(mu: int, rho, a: float = FRAME_DILATION):
    rho = np.abs(np.asarray(rho, dtype=float))
    eta = a * rho
    out = np.zeros(eta.shape)
    if mu == 0:
        out[eta <= 1] = 1.0
        mid = (eta > 1) & (eta < 1.5)
        if np.any(mid):
            e = eta[mid]
            out[mid] = np.sqrt(_hom(0, e) ** 2 / _hom_normalizer(e))
        return out
    live = (eta > 2.0 ** (mu - 1)) & (eta < 3 * 2.0 ** (mu - 1))
    if np.any(live):
        e = eta[live]
        out[live] = _hom(mu, e) / np.sqrt(_hom_normalizer(e))
    return out


# ---------------------------------------------------------------------------
# filter bank
# ---------------------------------------------------------------------------

def default_frequency_grid(mu_max: int, points_per_octave: int = POINTS_PER_OCTAVE) -> np.ndarray:
    """0 plus a log-uniform grid from 2^-4 to 2^{mu_max+1}."""
    octaves = mu_max + 5
    pos = np.geomspace(2.0 ** -4, 2.0 ** (mu_max + 1), octaves * points_per_octave + 1)
    return np.concatenate(([0.0], pos))


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Sampled dyadic filter bank (``variant`` is ``"lp"`` or ``"frame"``).

    ``samples[mu]`` holds the multiplier of band mu on ``grid``; for the
    frame variant band 0 is the low-pass Phi.
    """

    variant: str
    n: int
    mu_max: int
    grid: np.ndarray
    samples: np.ndarray
    residual: float
    dilation: float = 1.0
    metadata: dict = field(default_factory=dict)

    def multiplier(self, mu: int, rho):
        if not 0 <= mu <= self.mu_max:
            raise InvalidParameters(f"band {mu} outside 0..{self.mu_max}")
        if self.variant == "lp":
            return lp_multiplier(mu, rho)
        return frame_multiplier(mu, rho, self.dilation)

    def support(self, mu: int):
        """Closed frequency interval containing the support of band mu."""
        a = self.dilation
        if mu == 0:
            return 0.0, 1.5 / a
        return 2.0 ** (mu - 1) / a, 3 * 2.0 ** (mu - 1) / a

    def top(self, mu: int) -> float:
        return self.support(mu)[1]

    def transition_width(self, mu: int) -> float:
        """Narrowest ramp of band mu (in frequency)."""
        return (0.5 if mu == 0 else 2.0 ** (mu - 2)) / self.dilation

    def kernel_radius(self, mu: int) -> float:
        """Radius beyond which the band's convolution kernel is negligible (~1e-11)."""
        return SMOOTH_DECAY / self.transition_width(mu)

    def covered_band(self) -> float:
        """|xi| up to which the partition identity holds for this truncation."""
        if self.variant == "lp":
            return 2.0 ** (self.mu_max - 1)
        return 2.0 ** self.mu_max / self.dilation

    def partition(self, rho):
        """sum phi_mu (lp) or Phi^2 + sum theta_mu^2 (frame) at rho."""
        rho = np.asarray(rho, dtype=float)
        total = np.zeros(rho.shape)
        for mu in range(self.mu_max + 1):
            m = self.multiplier(mu, rho)
            total += m if self.variant == "lp" else m * m
        return total


def build_filter_bank(variant: str = "lp", n: int = 3, mu_max: int = 10, freq_grid=None) -> FilterBank:
    """Sample a bank on ``freq_grid`` and check its partition identity."""
    if variant not in ("lp", "frame"):
        raise InvalidParameters("variant must be 'lp' or 'frame'")
    if mu_max < 1:
        raise InvalidParameters("mu_max must be >= 1")
    grid = default_frequency_grid(mu_max) if freq_grid is None else np.asarray(freq_grid, dtype=float)
    dil = 1.0 if variant == "lp" else FRAME_DILATION
    fn = lp_multiplier if variant == "lp" else (lambda mu, r: frame_multiplier(mu, r, dil))
    samples = np.array([fn(mu, grid) for mu in range(mu_max + 1)])
    if np.any(samples < 0) or np.any(samples > 1 + 1e-15):
        raise ConstructionError("multiplier outside [0, 1]")
    total = samples.sum(axis=0) if variant == "lp" else (samples ** 2).sum(axis=0)
    covered = 2.0 ** (mu_max - 1) if variant == "lp" else 2.0 ** mu_max / dil
    inside = np.abs(grid) <= covered
    residual = float(np.max(np.abs(total[inside] - 1.0))) if np.any(inside) else 0.0
    if residual > PARTITION_TOL:
        raise ConstructionError(f"partition residual {residual:.3e} exceeds {PARTITION_TOL}", residual=residual)
    samples.setflags(write=False)
    grid.setflags(write=False)
    meta = {"variant": variant, "dilation": dil, "mu_max": mu_max, "residual": residual}
    if variant == "frame":
        meta["support"] = "theta_mu supported in 2^mu [2/7, 6/7]; Phi = 1 on |xi| <= 4/7"
    return FilterBank(variant, n, mu_max, grid, samples, residual, dil, meta)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TransformedProfile(RadialProfile):
    """Frequency-side profile of ``source``; exact values at any rho,
    plus cached samples on ``grid``."""

    source: RadialProfile = None
    n: int = 3
    grid: np.ndarray = None
    values: np.ndarray = None
    kind = "transformed"

    def __call__(self, rho):
        return forward_values(self.source, self.n, rho)

    def extent(self):
        bw = self.source.bandwidth()
        return float(bw) if bw is not None else float(np.max(self.grid))

    def feature_scale(self):
        return 1.0 / max(self.source.extent(), 1e-300)


def hankel_transform(f: RadialProfile, n: int, freq_grid=None) -> TransformedProfile:
    """Radial Fourier transform of ``f`` in dimension ``n``.

    f^(rho) = (2 pi)^{n/2} rho^{-nu} int_0^inf f(r) J_nu(r rho) r^{nu+1} dr.
    """
    if freq_grid is None:
        bw = f.bandwidth() or 64.0 / f.feature_scale()
        freq_grid = np.linspace(0.0, bw, 257)
    grid = np.asarray(freq_grid, dtype=float)
    vals = forward_values(f, n, grid)
    return TransformedProfile(source=f, n=n, grid=grid, values=vals)


def inverse_hankel_transform(F, n: int, support=None, cutoff_freq=None) -> SpectralProfile:
    """Space-side profile whose radial transform is ``F`` (truncated at ``cutoff_freq``)."""
    top = cutoff_freq if cutoff_freq is not None else F.extent()
    if support is None:
        src = getattr(F, "source", None)
        support = src.extent() if src is not None else 2.0 * math.pi * 64 / top
    return SpectralProfile(spectrum=F, segments=((0.0, float(top)),), n=n, support=float(support))


def lp_piece(f: RadialProfile, bank: FilterBank, mu: int) -> SpectralProfile:
    """S_mu f = F^{-1}[phi_mu f^] as a profile."""
    n = bank.n
    m = lambda rho: bank.multiplier(mu, rho) * forward_values(f, n, rho)  # noqa: E731
    return SpectralProfile(spectrum=m, segments=(bank.support(mu),), n=n, support=f.extent() + bank.kernel_radius(mu))


# ---------------------------------------------------------------------------
# weighted norms
# ---------------------------------------------------------------------------

def _p_scale(p):
    return 1.0 if math.isinf(p) or p <= 4 else 4.0 / p


def radial_grid(f: RadialProfile, w: WeightSpec = None, p: float = 2.0, order: int = 16):
    """Composite Gauss rule on [0, extent] adapted to f, the weight and p."""
    ext = float(f.extent())
    width = 0.5 * float(f.feature_scale()) * _p_scale(p)
    brk = [np.array([0.0, ext]), np.asarray(f.breakpoints(), dtype=float)]
    if w is not None:
        brk.append(np.asarray(w.breakpoints(), dtype=float))
    brk = merge_edges(*brk, lo=0.0, hi=ext)
    parts = [brk[:1]]
    for a, b in zip(brk[:-1], brk[1:]):
        parts.append(panel_edges(a, b, width)[1:])
    edges = np.concatenate(parts)
    edges = merge_edges(edges, graded_edges(edges[1]))
    return composite_gauss(edges, order)


def weighted_lp_norm(f: RadialProfile, w: WeightSpec = None, p: float = 2.0, n: int = None) -> float:
    """||f||_{L^p(R^n, w)} of a radial profile; p = inf gives sup |f| (weight ignored)."""
    if not p >= 1:
        raise InvalidParameters("p must be >= 1")
    if n is None:
        n = w.n if w is not None else getattr(f, "n", 3)
    if w is None:
        w = PowerWeight(0.0, n)
    nodes, wts = radial_grid(f, w, p)
    if math.isinf(p):
        pts = np.concatenate((nodes, np.asarray(f.breakpoints(), dtype=float)))
        return float(np.max(np.abs(f(pts)))) if pts.size else 0.0
    vals = np.abs(np.asarray(f(nodes), dtype=float))
    wv = np.asarray(w(nodes), dtype=float)
    integrand = vals ** p * wv * nodes ** (n - 1) * wts
    total = sphere_area(n) * float(np.sum(integrand))
    if not math.isfinite(total):
        return math.inf
    return total ** (1.0 / p)


@dataclass(frozen=True)
class SpaceParams:
    """One function space: kind "B" (Besov) or "F" (Triebel-Lizorkin), s, p, q, n, weight."""

    kind: str
    s: float
    p: float
    q: float
    n: int = 3
    weight: WeightSpec = None

    def __post_init__(self):
        kind = {"besov": "B", "tl": "F", "triebel-lizorkin": "F"}.get(str(self.kind).lower(), self.kind)
        if kind not in ("B", "F"):
            raise InvalidParameters(f"kind must be 'B' or 'F', got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if not (self.p >= 1 and self.q >= 1):
            raise InvalidParameters("p and q must lie in [1, inf]")
        if kind == "F" and math.isinf(self.p):
            raise InvalidParameters("Triebel-Lizorkin spaces need p < inf")
        w = self.weight if self.weight is not None else PowerWeight(0.0, self.n)
        if w.n != self.n:
            raise InvalidParameters("weight dimension differs from space dimension")
        object.__setattr__(self, "weight", w)

    def to_dict(self):
        return {"kind": self.kind, "s": self.s, "p": _num(self.p), "q": _num(self.q), "n": self.n,
                "weight": self.weight.to_dict()}


def _num(x):
    return "inf" if math.isinf(x) else x


@dataclass(frozen=True)
class NormReport:
    value: float
    band_values: tuple
    bands: tuple
    truncated_sup: bool
    spectrum_tail: float

    def to_dict(self):
        return {
            "value": self.value,
            "bands": list(self.bands),
            "band_values": list(self.band_values),
            "truncated_sup": self.truncated_sup,
            "spectrum_tail": self.spectrum_tail,
        }


def _lq(values, q):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    if math.isinf(q):
        return float(np.max(values))
    return float(np.sum(values ** q) ** (1.0 / q))


class BandDecomposition:
    """All bands S_mu f of one profile, sampled on a common radial grid.

    Band mu is evaluated for r <= extent(f) + kernel_radius(mu) and taken as
    zero beyond. The grid is graded so each radial segment is resolved at the
    finest band still present there, which makes p = q Besov and TL norms the
    same quadrature sum.
    """

    def __init__(self, f: RadialProfile, bank: FilterBank, p_max: float = 4.0, order: int = 16):
        self.f = f
        self.bank = bank
        n = self.n = bank.n
        nu = nu_of(n)
        scale = _p_scale(p_max)

        rho_nodes, fhat, keep = {}, {}, []
        peak = 0.0
        bw = f.bandwidth()
        for mu in range(bank.mu_max + 1):
            lo, hi = bank.support(mu)
            radius = f.extent() + bank.kernel_radius(mu)
            if bw is not None and lo > bw:
                # spectrum negligible on this band by the profile's own bound
                rho_nodes[mu] = (np.empty(0), np.empty(0), np.empty(0), radius)
                continue
            edges = panel_edges(lo, hi, 2 * math.pi / radius, transforms.MIN_PANELS)
            x, wx = composite_gauss(edges, order)
            spec = bank.multiplier(mu, x) * forward_values(f, n, x)
            rho_nodes[mu] = (x, wx, spec, radius)
            peak = max(peak, float(np.max(np.abs(spec))) if spec.size else 0.0)
        for mu in range(bank.mu_max + 1):
            spec = rho_nodes[mu][2]
            if spec.size and np.max(np.abs(spec)) >= BAND_SKIP * peak and peak > 0:
                keep.append(mu)
        self.bands = tuple(keep)
        top_band = rho_nodes[bank.mu_max]
        self.spectrum_tail = float(np.max(np.abs(top_band[2])) / peak) if peak > 0 and top_band[2].size else 0.0

        # radial grid: segment between consecutive band radii uses the finest width present
        radii = {mu: rho_nodes[mu][3] for mu in keep}
        self.radii = radii
        if keep:
            cuts = sorted(set(radii.values()))
            breaks = np.concatenate(([0.0], cuts))
            parts = [np.array([0.0])]
            for a, b in zip(breaks[:-1], breaks[1:]):
                present = [mu for mu in keep if radii[mu] >= b]
                width = min(2.0 / bank.top(mu) for mu in present) * scale
                parts.append(panel_edges(a, b, width)[1:])
            edges = np.concatenate(parts)
            extra = [np.array([1.0])] if edges[-1] > 1.0 else []
            edges = merge_edges(edges, graded_edges(edges[1]), *extra)
            r, wr = composite_gauss(edges, order)
        else:
            r, wr = np.empty(0), np.empty(0)
        self.r, self.wr = r, wr
        self.values = np.zeros((len(keep), r.size))
        const = (2 * math.pi) ** (-0.5 * n)
        for i, mu in enumerate(keep):
            x, wx, spec, radius = rho_nodes[mu]
            sel = r <= radius
            self.values[i, sel] = const * kernel_apply(nu, r[sel], x, spec * x ** (n - 1) * wx)

    def _measure(self, w: WeightSpec):
        return sphere_area(self.n) * np.asarray(w(self.r), dtype=float) * self.r ** (self.n - 1) * self.wr

    def band_norms(self, w: WeightSpec, p: float) -> np.ndarray:
        """||S_mu f||_{L^p(w)} for each retained band."""
        if math.isinf(p):
            return np.max(np.abs(self.values), axis=1) if self.r.size else np.zeros(len(self.bands))
        dm = self._measure(w)
        return (np.abs(self.values) ** p @ dm) ** (1.0 / p)

    def besov(self, params: SpaceParams) -> NormReport:
        norms = self.band_norms(params.weight, params.p)
        scaled = 2.0 ** (params.s * np.asarray(self.bands, dtype=float)) * norms
        return NormReport(_lq(scaled, params.q), tuple(float(x) for x in scaled), self.bands,
                          math.isinf(params.q) or math.isinf(params.p), self.spectrum_tail)

    def tl(self, params: SpaceParams) -> NormReport:
        if math.isinf(params.p):
            raise InvalidParameters("Triebel-Lizorkin norm needs p < inf")
        if not self.bands:
            return NormReport(0.0, (), (), math.isinf(params.q), self.spectrum_tail)
        scaled = 2.0 ** (params.s * np.asarray(self.bands, dtype=float))[:, None] * np.abs(self.values)
        if math.isinf(params.q):
            agg = np.max(scaled, axis=0)
        else:
            agg = np.sum(scaled ** params.q, axis=0) ** (1.0 / params.q)
        dm = self._measure(params.weight)
        total = float(np.sum(agg ** params.p * dm))
        value = total ** (1.0 / params.p)
        per_band = (scaled ** params.p @ dm) ** (1.0 / params.p)
        return NormReport(value, tuple(float(x) for x in per_band), self.bands,
                          math.isinf(params.q), self.spectrum_tail)


def _default_bank(n):
    return build_filter_bank("lp", n, 10)


def besov_norm_report(f, params: SpaceParams, bank: FilterBank = None) -> NormReport:
    if params.kind != "B":
        raise InvalidParameters("besov_norm needs kind 'B'")
    bank = bank or _default_bank(params.n)
    return BandDecomposition(f, bank, p_max=params.p).besov(params)


def besov_norm(f, params: SpaceParams, bank: FilterBank = None) -> float:
    """(sum_mu 2^{q mu s} ||S_mu f||^q_{L^p(w)})^{1/q}, truncated at the bank's mu_max."""
    return besov_norm_report(f, params, bank).value


def tl_norm_report(f, params: SpaceParams, bank: FilterBank = None) -> NormReport:
    if params.kind != "F":
        raise InvalidParameters("tl_norm needs kind 'F'")
    bank = bank or _default_bank(params.n)
    return BandDecomposition(f, bank, p_max=params.p).tl(params)


def tl_norm(f, params: SpaceParams, bank: FilterBank = None) -> float:
    """|| (sum_mu 2^{q mu s} |S_mu f|^q)^{1/q} ||_{L^p(w)}, truncated at mu_max."""
    return tl_norm_report(f, params, bank).value
