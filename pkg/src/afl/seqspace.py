"""Weighted sequence-space norms b^s_{p,q}(w) and f^s_{p,q}(w).

Both norms see the coefficients through the normalized annulus indicators
chi_{mu,k} = |A_{mu,k}|^{-1/2} 1_{A_{mu,k}}. Because the annuli of one scale
are disjoint, ||sum_k a_k chi_{mu,k}||_{L^p(w)} = (sum_k (a_k w_{mu,k})^p)^{1/p}
with w_{mu,k} the weighted annulus mass; the b-norm uses this identity
directly. The f-norm integrates a piecewise-constant function whose cells
are the common refinement of all annulus boundaries, so each cell integral
of the weight is exact for closed-form weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .annuli import AnnulusTable, annulus_table
from .errors import InvalidParameters
from .frame import CoefficientGrid
from .weights import PowerWeight, WeightSpec, mass_table, radial_weight_integral


@dataclass(frozen=True)
class SeqNormParams:
    s: float
    p: float
    q: float
    weight: WeightSpec = None
    n: int = 3

    def __post_init__(self):
        if not (self.p >= 1 and self.q >= 1):
            raise InvalidParameters("p and q must lie in [1, inf]")
        w = self.weight if self.weight is not None else PowerWeight(0.0, self.n)
        if w.n != self.n:
            raise InvalidParameters("weight dimension differs from n")
        object.__setattr__(self, "weight", w)


def _table_for(lam: CoefficientGrid, table: AnnulusTable = None) -> AnnulusTable:
    if table is not None:
        if table.mu_max < lam.mu_max or table.k_max < lam.k_max or table.n != lam.n:
            raise InvalidParameters("annulus table does not cover the coefficient grid")
        return table
    return annulus_table(lam.n, lam.mu_max, lam.k_max)


def _lq(x, q, axis=None):
    if math.isinf(q):
        return np.max(x, axis=axis) if np.size(x) else 0.0
    if not np.size(x):
        return 0.0
    # scale by the largest entry so tiny or huge coefficients do not under/overflow
    top = np.max(x, axis=axis, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    out = np.sum((x / safe) ** q, axis=axis, keepdims=True) ** (1.0 / q) * safe
    return np.squeeze(out, axis=axis) if axis is not None else float(out.ravel()[0])


def b_norm(lam: CoefficientGrid, params: SeqNormParams, table: AnnulusTable = None) -> float:
    """(sum_mu || sum_k 2^{mu s} |lambda_{mu,k}| chi_{mu,k} ||^q_{L^p(w)})^{1/q}."""
    if lam.n != params.n:
        raise InvalidParameters("dimension mismatch")
    table = _table_for(lam, table)
    masses = mass_table(params.weight, params.p, table).masses[: lam.mu_max + 1, : lam.k_max]
    mus = np.arange(lam.mu_max + 1, dtype=float)
    a = 2.0 ** (params.s * mus)[:, None] * np.abs(lam.values) * masses
    inner = _lq(a, params.p, axis=1)
    return float(_lq(inner, params.q))


def f_norm(lam: CoefficientGrid, params: SeqNormParams, table: AnnulusTable = None) -> float:
    """|| (sum_mu sum_k [2^{mu s} |lambda_{mu,k}| chi_{mu,k}]^q)^{1/q} ||_{L^p(w)}.

    p = inf or q = inf are the usual suprema over the truncated index set.
    """
    if lam.n != params.n:
        raise InvalidParameters("dimension mismatch")
    table = _table_for(lam, table)
    mu_top = lam.mu_max
    mus = range(mu_top + 1)
    # cells: common refinement of all boundaries
    edges = np.unique(np.concatenate([table.radii(mu)[: lam.k_max + 1] for mu in mus]))
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    pieces = np.zeros((mu_top + 1, mid.size))
    for mu in mus:
        k = table.locate(mu, mid)
        k = np.where(k > lam.k_max, 0, k)
        live = k > 0
        measures = table.measures(mu)[: lam.k_max]
        vals = np.zeros(mid.size)
        kk = k[live] - 1
        vals[live] = 2.0 ** (params.s * mu) * np.abs(lam.values[mu, kk]) * measures[kk] ** -0.5
        pieces[mu] = vals
    agg = _lq(pieces, params.q, axis=0)
    if math.isinf(params.p):
        return float(np.max(agg)) if agg.size else 0.0
    cell_w = radial_weight_integral(params.weight, lo, hi)
    use = agg > 0
    if not np.any(use):
        return 0.0
    top = float(np.max(agg[use]))
    return top * float(np.sum((agg[use] / top) ** params.p * cell_w[use]) ** (1.0 / params.p))
