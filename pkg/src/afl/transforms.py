"""Quadrature kernels for the radial Fourier transform.

Convention: f^(xi) = integral of f(x) exp(-i x.xi) dx. For a radial f with
profile f0 and nu = (n-2)/2,

    f^(rho) = (2 pi)^{n/2} int_0^inf f0(r) K_nu(r rho) r^{n-1} dr,
    f0(r)   = (2 pi)^{-n/2} int_0^inf f^(rho) K_nu(r rho) rho^{n-1} drho,

with K_nu(x) = x^{-nu} J_nu(x) (see :func:`bessel_kernel`).

These helpers work on duck-typed profile objects (``__call__``,
``transform``, ``extent``, ``breakpoints``, ``feature_scale``) so that the
profile module can use them without an import cycle.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericalFailure
from .quadrature import composite_gauss, merge_edges, panel_edges
from .special_functions import bessel_kernel

# rows * columns of one kernel block; bounds peak memory at ~32 MB
_BLOCK = 4_000_000
MIN_PANELS = 32


def nu_of(n: int) -> float:
    return 0.5 * (n - 2)


def sphere_area(n: int) -> float:
    """omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)."""
    return 2.0 * math.pi ** (0.5 * n) / math.gamma(0.5 * n)


def kernel_apply(nu, outer, inner, inner_weighted):
    """sum_j K_nu(outer_i * inner_j) * inner_weighted_j, in memory-bounded blocks."""
    outer = np.asarray(outer, dtype=float)
    out = np.zeros(outer.shape)
    flat = outer.ravel()
    res = out.ravel()
    if inner.size == 0 or flat.size == 0:
        return out
    rows = max(1, _BLOCK // inner.size)
    for s in range(0, flat.size, rows):
        blk = flat[s:s + rows]
        res[s:s + rows] = bessel_kernel(nu, np.multiply.outer(blk, inner)) @ inner_weighted
    return res.reshape(outer.shape)


def _magnitude_groups(x):
    """Split indices of |x| into groups of roughly constant magnitude (octaves)."""
    x = np.abs(np.ravel(x))
    octave = np.floor(np.log2(np.maximum(x, 1e-300)))
    octave[x <= 0] = -np.inf
    groups = []
    for o in np.unique(octave):
        idx = np.nonzero(octave == o)[0]
        top = float(np.max(x[idx]))
        groups.append((idx, top))
    return groups


def space_edges(f, max_width):
    """Panel boundaries on [0, extent] respecting the profile's breakpoints."""
    ext = float(f.extent())
    brk = merge_edges([0.0], f.breakpoints(), [ext], lo=0.0, hi=ext)
    width = min(max_width, 0.5 * float(f.feature_scale()))
    out = [brk[:1]]
    for a, b in zip(brk[:-1], brk[1:]):
        out.append(panel_edges(a, b, width)[1:])
    return np.concatenate(out)


def forward_values(f, n: int, rho, order: int = 16) -> np.ndarray:
    """Radial Fourier transform of profile ``f`` in dimension ``n`` at ``rho``.

    Uses the profile's closed form when it has one, otherwise composite
    Gauss-Legendre quadrature with at most one kernel oscillation per panel.
    """
    rho = np.abs(np.asarray(rho, dtype=float))
    closed = f.transform(rho, n)
    if closed is not None:
        return np.asarray(closed, dtype=float)
    nu = nu_of(n)
    out = np.empty(rho.size)
    flat = rho.ravel()
    const = (2.0 * math.pi) ** (0.5 * n)
    for idx, top in _magnitude_groups(flat):
        width = 2.0 * math.pi / top if top > 0 else np.inf
        nodes, weights = composite_gauss(space_edges(f, width), order)
        fw = np.asarray(f(nodes), dtype=float) * nodes ** (n - 1) * weights
        out[idx] = const * kernel_apply(nu, flat[idx], nodes, fw)
    if not np.all(np.isfinite(out)):
        bad = flat[~np.isfinite(out)]
        raise NumericalFailure("radial transform produced non-finite values", rho=float(bad[0]))
    return out.reshape(rho.shape)


def frequency_edges(segments, r_top, min_panels=MIN_PANELS):
    """Panel boundaries on each frequency segment; phase r_top*width <= 2 pi."""
    width = 2.0 * math.pi / r_top if r_top > 0 else np.inf
    parts = []
    for lo, hi in segments:
        if hi > lo:
            parts.append(panel_edges(lo, hi, width, min_panels))
    if not parts:
        return np.empty(0)
    return merge_edges(*parts)


def inverse_values(spectrum, segments, n: int, r, order: int = 16) -> np.ndarray:
    """Inverse radial transform of ``spectrum`` (callable) supported on ``segments``."""
    r = np.abs(np.asarray(r, dtype=float))
    nu = nu_of(n)
    out = np.zeros(r.size)
    flat = r.ravel()
    const = (2.0 * math.pi) ** (-0.5 * n)
    for idx, top in _magnitude_groups(flat):
        nodes, weights = composite_gauss(frequency_edges(segments, top), order)
        if nodes.size == 0:
            continue
        sw = np.asarray(spectrum(nodes), dtype=float) * nodes ** (n - 1) * weights
        out[idx] = const * kernel_apply(nu, flat[idx], nodes, sw)
    return out.reshape(r.shape)
