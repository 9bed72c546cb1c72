"""Composite Gauss-Legendre rules used by the radial transforms and norms."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_ORDER = 16


@lru_cache(maxsize=None)
def _legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gauss(edges, order: int = DEFAULT_ORDER):
    """Nodes and weights of a composite Gauss-Legendre rule.

    Parameters
    ----------
    edges : array_like
        Strictly increasing panel boundaries.
    order : int
        Number of nodes per panel.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return np.empty(0), np.empty(0)
    x, w = _legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def panel_edges(a: float, b: float, max_width: float, min_panels: int = 1) -> np.ndarray:
    """Uniform panel boundaries on [a, b] with panel width at most ``max_width``."""
    if not b > a:
        return np.array([a, b], dtype=float)[: 1 if b <= a else 2]
    count = max(min_panels, int(np.ceil((b - a) / max_width)))
    return np.linspace(a, b, count + 1)


def graded_edges(b: float, levels: int = 30, ratio: float = 0.5) -> np.ndarray:
    """Geometrically refined boundaries on [0, b], clustered at the origin.

    Resolves integrable power singularities r**e (e > -1) at r = 0.
    """
    inner = b * ratio ** np.arange(levels, 0, -1)
    return np.concatenate(([0.0], inner, [b]))


def merge_edges(*edge_sets, lo=None, hi=None) -> np.ndarray:
    """Sorted union of boundary sets, clipped to [lo, hi] and deduplicated."""
    allv = np.concatenate([np.asarray(e, dtype=float).ravel() for e in edge_sets])
    if lo is not None:
        allv = allv[allv >= lo]
    if hi is not None:
        allv = allv[allv <= hi]
    allv = np.unique(allv)
    if allv.size > 1:
        keep = np.concatenate(([True], np.diff(allv) > 1e-14 * np.maximum(1.0, np.abs(allv[1:]))))
        allv = allv[keep]
    return allv


def segmented_edges(breaks, widths, order_hint=None) -> np.ndarray:
    """Panel boundaries over consecutive segments with per-segment max width.

    ``breaks`` has one more entry than ``widths``; segment i spans
    [breaks[i], breaks[i+1]] and is cut into panels no wider than widths[i].
    """
    out = [np.array([breaks[0]], dtype=float)]
    for a, b, h in zip(breaks[:-1], breaks[1:], widths):
        if b > a:
            out.append(panel_edges(a, b, h)[1:])
    return np.concatenate(out)
