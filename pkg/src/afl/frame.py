"""Radial annulus frame: atoms, analysis S, synthesis T and reconstruction.

The atom of index (mu, k) is c_{mu,k} theta_mu * d sigma_t, a band filter
convolved with the normalized surface measure of the sphere of radius
t = 2^{-mu} j_{nu,k}. On the frequency side

    atom^(rho) = c_{mu,k} theta_mu(rho) sigma_t^(rho),
    sigma_t^(rho) = (2 pi)^{n/2} t^{n-1} (t rho)^{-nu} J_nu(t rho),

with c_{mu,k}^2 = 2^{mu(n-2)+1} / (j_k^n J_{nu+1}(j_k)^2 omega_{n-1}). Band 0
uses the low-pass Phi. Because theta_mu f^ is supported in [0, 2^mu], these
constants turn sum_k lambda_{mu,k} atom^_{mu,k} into the Fourier-Bessel series
of theta_mu^2 f^ on that interval, so T(S f) = f up to truncation in k.

Analysis and synthesis use the same atoms; all pairings are evaluated on the
frequency side.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .annuli import AnnulusTable, FrameIndex, annulus_table
from .errors import IndexOutOfTable, InvalidParameters
from .profiles import RadialProfile, SpectralProfile
from .quadrature import composite_gauss, merge_edges, panel_edges
from .spectral import FilterBank, build_filter_bank
from .special_functions import bessel_j, bessel_kernel
from .transforms import MIN_PANELS, forward_values, nu_of, sphere_area


def sphere_transform(t: float, rho, n: int):
    """Fourier transform of the surface measure of the sphere of radius t."""
    return (2 * math.pi) ** (0.5 * n) * t ** (n - 1) * bessel_kernel(nu_of(n), t * np.asarray(rho, dtype=float))


def frame_constants(table: AnnulusTable) -> np.ndarray:
    """c_{mu,k} for mu = 0..mu_max, k = 1..k_max (array index [mu, k-1])."""
    n, nu = table.n, table.nu
    j = table.zeros.zeros[: table.k_max]
    jn1 = bessel_j(nu + 1.0, j)
    base = 2.0 / (j ** n * jn1 ** 2 * table.omega)
    mus = np.arange(table.mu_max + 1, dtype=float)
    return np.sqrt(np.outer(2.0 ** (mus * (n - 2)), base))


@dataclass(frozen=True, eq=False)
class Frame:
    """Truncated radial frame (mu <= mu_max, k <= k_max) in dimension n."""

    n: int
    table: AnnulusTable
    bank: FilterBank
    constants: np.ndarray
    _nodes: dict = field(default_factory=dict, repr=False)

    @property
    def mu_max(self) -> int:
        return self.table.mu_max

    @property
    def k_max(self) -> int:
        return self.table.k_max

    @property
    def metadata(self) -> dict:
        return {
            "n": self.n,
            "mu_max": self.mu_max,
            "k_max": self.k_max,
            "dilation": self.bank.dilation,
            "alignment": "theta_mu(xi) = phi1(2^{1-mu} a xi)/sqrt(N(a xi)), a = 7/4",
        }

    def radii(self, mu: int) -> np.ndarray:
        """Sphere radii t_{mu,k} = 2^{-mu} j_{nu,k}, k = 1..k_max."""
        return self.table.radii(mu)[1:]

    def check(self, idx: FrameIndex):
        self.table.check(idx)

    def band_nodes(self, mu: int):
        """Frequency quadrature (nodes, weights) on the support of band mu."""
        if mu not in self._nodes:
            grid, wts, _ = self.common_grid()
            lo, hi = self.bank.support(mu)
            sel = (grid >= lo) & (grid <= hi)
            self._nodes[mu] = (grid[sel], wts[sel])
        return self._nodes[mu]

    def common_grid(self):
        """Composite Gauss rule on [0, top of band mu_max] shared by all bands.

        Each segment between band edges is resolved so that the widest
        sphere present (largest t) oscillates at most once per panel.
        Returns (nodes, weights, edges).
        """
        if "common" not in self._nodes:
            supports = [self.bank.support(mu) for mu in range(self.mu_max + 1)]
            breaks = merge_edges(np.ravel(supports))
            t_top = [float(self.radii(mu)[-1]) for mu in range(self.mu_max + 1)]
            parts = [breaks[:1]]
            for a, b in zip(breaks[:-1], breaks[1:]):
                present = [mu for mu, (lo, hi) in enumerate(supports) if lo <= a and hi >= b]
                t = max(t_top[mu] for mu in present)
                count = max(MIN_PANELS // 2, int(math.ceil((b - a) * t / (2 * math.pi))))
                parts.append(np.linspace(a, b, count + 1)[1:])
            edges = np.concatenate(parts)
            nodes, wts = composite_gauss(edges)
            self._nodes["common"] = (nodes, wts, edges)
        return self._nodes["common"]

    def sphere_matrix(self, mu: int, rho) -> np.ndarray:
        """sigma^_{t_k}(rho) for all k (rows) and rho (columns)."""
        t = self.radii(mu)
        n = self.n
        return (2 * math.pi) ** (0.5 * n) * (t ** (n - 1))[:, None] * bessel_kernel(nu_of(n), np.multiply.outer(t, rho))


def build_frame(n: int = 3, mu_max: int = 10, k_max: int = 256) -> Frame:
    """Frame with the symmetric squared bank and Bessel-zero annuli."""
    table = annulus_table(n, mu_max, k_max)
    bank = build_filter_bank("frame", n, mu_max)
    c = frame_constants(table)
    if not (np.all(np.isfinite(c)) and np.all(c > 0)):
        raise InvalidParameters("frame constants must be finite and positive")
    c.setflags(write=False)
    return Frame(n, table, bank, c)


def atom_frequency_profile(frame: Frame, idx: FrameIndex) -> SpectralProfile:
    """Frequency profile c_{mu,k} theta_mu(rho) sigma^_t(rho) of one atom."""
    frame.check(idx)
    mu, k = idx.mu, idx.k
    t = float(frame.radii(mu)[k - 1])
    c = float(frame.constants[mu, k - 1])
    bank, n = frame.bank, frame.n
    spec = lambda rho: c * bank.multiplier(mu, rho) * sphere_transform(t, rho, n)  # noqa: E731
    return SpectralProfile(spectrum=spec, segments=(bank.support(mu),), n=n, support=t + bank.kernel_radius(mu))


@dataclass(frozen=True, eq=False)
class CoefficientGrid:
    """Frame coefficients lambda_{mu,k} (array index [mu, k-1])."""

    values: np.ndarray
    n: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2:
            raise InvalidParameters("coefficient array must be 2-d (mu, k)")
        if not np.all(np.isfinite(v)):
            raise InvalidParameters("coefficients must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def mu_max(self) -> int:
        return self.values.shape[0] - 1

    @property
    def k_max(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, idx: FrameIndex) -> float:
        if idx.mu > self.mu_max or idx.k > self.k_max:
            raise IndexOutOfTable(f"index (mu={idx.mu}, k={idx.k}) outside grid")
        return float(self.values[idx.mu, idx.k - 1])

    @classmethod
    def zeros(cls, n, mu_max, k_max):
        return cls(np.zeros((mu_max + 1, k_max)), n)

    def with_entry(self, idx: FrameIndex, value: float) -> "CoefficientGrid":
        v = self.values.copy()
        v[idx.mu, idx.k - 1] = value
        return CoefficientGrid(v, self.n, dict(self.metadata))

    def scaled(self, c: float) -> "CoefficientGrid":
        return CoefficientGrid(c * self.values, self.n, dict(self.metadata))

    def __add__(self, other):
        return CoefficientGrid(self.values + other.values, self.n, dict(self.metadata))

    # -- serialization; floats are written with repr so round trips are exact

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "afl-coefficients/1",
                "n": self.n,
                "mu_max": self.mu_max,
                "k_max": self.k_max,
                "metadata": self.metadata,
                "coefficients": self.values.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "CoefficientGrid":
        d = json.loads(text)
        return cls(np.array(d["coefficients"], dtype=float), int(d["n"]), d.get("metadata", {}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# n={self.n} mu_max={self.mu_max} k_max={self.k_max}\n")
        if self.metadata:
            buf.write("# metadata " + json.dumps(self.metadata, sort_keys=True) + "\n")
        buf.write("mu,k,lambda\n")
        for mu in range(self.mu_max + 1):
            for k in range(1, self.k_max + 1):
                buf.write(f"{mu},{k},{float(self.values[mu, k - 1])!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, n: int = None) -> "CoefficientGrid":
        header = {}
        meta = {}
        body = []
        for line in text.splitlines():
            if line.startswith("# metadata "):
                meta = json.loads(line[len("# metadata "):])
            elif line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    header[key] = int(val)
            elif line.strip():
                body.append(line)
        rows = list(csv.DictReader(body))
        mus = [int(r["mu"]) for r in rows]
        ks = [int(r["k"]) for r in rows]
        mu_max = header.get("mu_max", max(mus, default=0))
        k_max = header.get("k_max", max(ks, default=1))
        v = np.zeros((mu_max + 1, k_max))
        for mu, k, r in zip(mus, ks, rows):
            v[mu, k - 1] = float(r["lambda"])
        n = n if n is not None else header.get("n", 3)
        return cls(v, n, meta)


def _spectrum(f, n, rho, fhat):
    return forward_values(f, n, rho) if fhat is None else fhat


def analyze(f: RadialProfile, frame: Frame) -> CoefficientGrid:
    """lambda_{mu,k} = (2 pi)^{-n} omega int f^ atom^_{mu,k} rho^{n-1} drho."""
    n = frame.n
    scale = (2 * math.pi) ** (-n) * sphere_area(n)
    nodes, wts, _ = frame.common_grid()
    fhat = forward_values(f, n, nodes)
    out = np.zeros((frame.mu_max + 1, frame.k_max))
    for mu in range(frame.mu_max + 1):
        lo, hi = frame.bank.support(mu)
        sel = (nodes >= lo) & (nodes <= hi)
        x = nodes[sel]
        g = fhat[sel] * frame.bank.multiplier(mu, x) * x ** (n - 1) * wts[sel]
        if not np.any(g):
            continue
        out[mu] = scale * frame.constants[mu] * (frame.sphere_matrix(mu, x) @ g)
    meta = dict(frame.metadata)
    try:
        meta["source_profile"] = f.to_dict()
    except (TypeError, NotImplementedError):
        pass
    return CoefficientGrid(out, n, meta)


def _check_grid(lam: CoefficientGrid, frame: Frame):
    if lam.n != frame.n:
        raise InvalidParameters("coefficient grid and frame differ in dimension")
    if lam.mu_max > frame.mu_max or lam.k_max > frame.k_max:
        raise IndexOutOfTable("coefficient grid exceeds frame truncation")


def synthesize_spectrum(lam: CoefficientGrid, frame: Frame, rho) -> np.ndarray:
    """sum lambda_{mu,k} atom^_{mu,k}(rho)."""
    _check_grid(lam, frame)
    rho = np.abs(np.asarray(rho, dtype=float))
    flat = rho.ravel()
    out = np.zeros(flat.size)
    for mu in range(lam.mu_max + 1):
        coef = lam.values[mu] * frame.constants[mu, : lam.k_max]
        if not np.any(coef):
            continue
        lo, hi = frame.bank.support(mu)
        sel = (flat >= lo) & (flat <= hi)
        if not np.any(sel):
            continue
        x = flat[sel]
        t = frame.radii(mu)[: lam.k_max]
        mat = (2 * math.pi) ** (0.5 * frame.n) * (t ** (frame.n - 1))[:, None] * bessel_kernel(
            nu_of(frame.n), np.multiply.outer(t, x)
        )
        out[sel] += frame.bank.multiplier(mu, x) * (coef @ mat)
    return out.reshape(rho.shape)


def synthesize(lam: CoefficientGrid, frame: Frame) -> SpectralProfile:
    """T lambda = sum lambda_{mu,k} psi_{mu,k}, as a radial profile."""
    _check_grid(lam, frame)
    live = [mu for mu in range(lam.mu_max + 1) if np.any(lam.values[mu])]
    if not live:
        return SpectralProfile(spectrum=lambda rho: np.zeros(np.shape(rho)), segments=(), n=frame.n, support=1.0)
    segments = tuple(frame.bank.support(mu) for mu in live)
    support = 0.0
    for mu in live:
        last = int(np.max(np.nonzero(lam.values[mu])[0]))
        support = max(support, float(frame.radii(mu)[last]) + frame.bank.kernel_radius(mu))
    spec = lambda rho: synthesize_spectrum(lam, frame, rho)  # noqa: E731
    return SpectralProfile(spectrum=spec, segments=segments, n=frame.n, support=support)


def l2_norm_frequency(spectrum_values, nodes, weights, n) -> float:
    """||g||_{L^2(R^n)} from spectrum samples via Plancherel."""
    return math.sqrt((2 * math.pi) ** (-n) * sphere_area(n) * float(np.sum(spectrum_values ** 2 * nodes ** (n - 1) * weights)))


def _spectral_tail(f, n, start):
    """int_{rho > start} |f^|^2 rho^{n-1} drho (up to the profile's bandwidth)."""
    bw = f.bandwidth()
    stop = bw if bw is not None else 64.0 * start
    if stop <= start:
        return 0.0
    width = 2 * math.pi / max(f.extent(), 1e-12)
    x, w = composite_gauss(panel_edges(start, stop, width, MIN_PANELS))
    return float(np.sum(forward_values(f, n, x) ** 2 * x ** (n - 1) * w))


def reconstruction_error(f: RadialProfile, lam: CoefficientGrid, frame: Frame) -> float:
    """Relative L2 error ||f - T lam|| / ||f||, evaluated on the frequency side."""
    n = frame.n
    nodes, wts, edges = frame.common_grid()
    fhat = forward_values(f, n, nodes)
    g = synthesize_spectrum(lam, frame, nodes)
    tail = _spectral_tail(f, n, float(edges[-1]))
    diff = float(np.sum((fhat - g) ** 2 * nodes ** (n - 1) * wts)) + tail
    ref = float(np.sum(fhat ** 2 * nodes ** (n - 1) * wts)) + tail
    if ref == 0.0:
        return 0.0
    return math.sqrt(diff / ref)


def reconstruct(f: RadialProfile, frame: Frame):
    """(T(S f), relative L2 error against f)."""
    lam = analyze(f, frame)
    return synthesize(lam, frame), reconstruction_error(f, lam, frame)
