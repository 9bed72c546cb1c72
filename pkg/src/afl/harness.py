"""End-to-end verification suites with persisted JSON/CSV reports."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .annuli import FrameIndex, annulus_table
from .embeddings import EmbeddingQuery, HOLDS, NOT_IMPLIED, check_embedding
from .frame import analyze, build_frame
from .profiles import BandBump, Gaussian, RadialProfile, ShellGaussian
from .seqspace import SeqNormParams, b_norm, f_norm
from .spectral import BandDecomposition, SpaceParams, build_filter_bank
from .weights import PowerWeight, ap_constant_estimate, verify_product_lemma

SCHEMA = "afl-report/1"

DEFAULT_NORM_GRID = [
    {"s": s, "p": p, "q": q, "gamma": g}
    for s, p, q, g in itertools.product((0.5, 1.0), (2.0, 4.0), (2.0, 4.0), (0.0, 1.0))
]


@dataclass
class SuiteReport:
    """Outcome of one suite: every case records its metrics, tolerance and verdict."""

    suite: str
    grid: list
    cases: list = field(default_factory=list)
    runtime: float = 0.0
    seed: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.cases)

    def add(self, case: dict, tolerance, passed: bool):
        self.cases.append(dict(case, tolerance=tolerance, passed=bool(passed)))

    def to_dict(self) -> dict:
        return _clean({
            "schema": SCHEMA,
            "suite": self.suite,
            "seed": self.seed,
            "grid": self.grid,
            "cases": self.cases,
            "passed": self.passed,
            "runtime": self.runtime,
            "metadata": self.metadata,
        })

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        """One row per case with scalar fields only (lists are JSON-encoded)."""
        rows = [_flat(c) for c in self.to_dict()["cases"]]
        cols = []
        for r in rows:
            cols.extend(k for k in r if k not in cols)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()

    def write(self, out_dir) -> tuple:
        os.makedirs(out_dir, exist_ok=True)
        jpath = os.path.join(out_dir, f"{self.suite}.json")
        cpath = os.path.join(out_dir, f"{self.suite}.csv")
        with open(jpath, "w") as fh:
            fh.write(self.to_json())
        with open(cpath, "w") as fh:
            fh.write(self.to_csv())
        return jpath, cpath


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return None
        return ("inf" if x > 0 else "-inf") if math.isinf(x) else x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def _flat(case):
    return {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in case.items()}


def dilated_gaussians(j_values=range(-3, 7)):
    """f_j(x) = exp(-|2^j x|^2 / 2)."""
    return [Gaussian(2.0 ** -j) for j in j_values]


def _bank_for(f: RadialProfile, n: int, mu_min: int = 10):
    mu_max = max(mu_min, int(math.ceil(math.log2(max(f.bandwidth(), 1.0)))) + 2)
    return build_filter_bank("lp", n, mu_max)


@lru_cache(maxsize=32)
def _witness_decomposition(f: RadialProfile, n: int, p_max: float) -> BandDecomposition:
    return BandDecomposition(f, _bank_for(f, n), p_max=p_max)


def _space_norm(dec: BandDecomposition, params: SpaceParams) -> float:
    return dec.besov(params).value if params.kind == "B" else dec.tl(params).value


# ---------------------------------------------------------------------------
# norm equivalence
# ---------------------------------------------------------------------------

def norm_equivalence_suite(grid=None, family=None, n: int = 3, mu_max: int = 10, k_max: int = 256,
                           kind: str = "B", spread_tol: float = 50.0) -> SuiteReport:
    """Ratio sequence-norm(analyze f) / function-norm(f) across a test family.

    A parameter point passes when max/min of its ratios is below ``spread_tol``.
    ``kind="F"`` uses f_norm / tl_norm instead of b_norm / besov_norm.
    """
    t0 = time.perf_counter()
    grid = list(DEFAULT_NORM_GRID if grid is None else grid)
    family = list(dilated_gaussians() if family is None else family)
    if not family:
        raise ValueError("empty test family")
    frame = build_frame(n, mu_max, k_max)
    table = frame.table
    bank = build_filter_bank("lp", n, mu_max)
    p_max = max(float(g["p"]) for g in grid)
    coeffs, decs = [], []
    for f in family:
        coeffs.append(analyze(f, frame))
        decs.append(BandDecomposition(f, bank, p_max=p_max))
    report = SuiteReport("norm_equivalence", grid, metadata={
        "kind": kind, "family": [f.to_dict() for f in family], "frame": frame.metadata, "bank_mu_max": mu_max})
    for point in grid:
        w = PowerWeight(float(point["gamma"]), n)
        sp = SpaceParams(kind, float(point["s"]), float(point["p"]), float(point["q"]), n, w)
        seq = SeqNormParams(sp.s, sp.p, sp.q, w, n)
        ratios = []
        for lam, dec in zip(coeffs, decs):
            fn = _space_norm(dec, sp)
            if not fn > 0:
                raise ValueError("zero function norm: ratio undefined")
            sn = b_norm(lam, seq, table) if kind == "B" else f_norm(lam, seq, table)
            ratios.append(sn / fn)
        spread = max(ratios) / min(ratios)
        report.add(dict(point, kind=kind, ratios=ratios, spread=spread), spread_tol, spread < spread_tol)
    report.runtime = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

def witness_family(family: str, steps, n: int = 3):
    """Radial test families indexed by the dyadic step j."""
    if family == "dilation":
        return [Gaussian(2.0 ** -j) for j in steps]
    if family == "radial-translation":
        return [ShellGaussian(2.0 ** j, 0.5) for j in steps]
    if family == "modulation":
        return [BandBump(lo=2.0 ** j, hi=2.0 ** j + 4.0, amplitude=1.0, n=n) for j in steps]
    raise ValueError(f"unknown witness family {family!r}")


def homogeneity_slope(query: EmbeddingQuery, family: str):
    """Predicted log2 growth per step of target/source norms (None if no oracle).

    Dilations f(2^j x) scale like 2^{j(s - (n+gamma)/p)}; shells of fixed
    thickness at radius 2^j like 2^{j(n-1+gamma)/p}.
    """
    n = query.n
    out = []
    for sp in (query.source, query.target):
        g = getattr(sp.weight, "gamma", None)
        if g is None:
            return None
        if family == "dilation":
            out.append(sp.s - (n + g) / sp.p)
        elif family == "radial-translation":
            out.append((n - 1 + g) / sp.p)
        else:
            return None
    return out[1] - out[0]


DEFAULT_STEPS = {"dilation": range(0, 9), "radial-translation": range(0, 7), "modulation": range(0, 5)}


def witness_suite(query: EmbeddingQuery, family: str = "dilation", steps=None,
                  slope_tol: float = 0.2, flat_tol: float = 0.02, bound_factor: float = 4.0) -> SuiteReport:
    """Target/source norm ratios along a witness family.

    Pass rules, fixed before the run:
    - with a predicted slope e != 0: the fitted log2 slope over the second half
      of the steps is within ``slope_tol`` (relative) of e and, for e > 0, the
      ratios increase monotonically;
    - with a Holds verdict: max/min of the ratios is below ``bound_factor`` and
      the tail slope is at most ``flat_tol``.
    """
    t0 = time.perf_counter()
    steps = list(DEFAULT_STEPS[family] if steps is None else steps)
    decision = check_embedding(query)
    expected = homogeneity_slope(query, family)
    profiles = witness_family(family, steps, query.n)
    # one grid resolution for all exponents up to 8 lets families share decompositions
    p_max = max(8.0, query.source.p, query.target.p)
    ratios, src_norms, tgt_norms = [], [], []
    for f in profiles:
        dec = _witness_decomposition(f, query.n, p_max)
        a, b = _space_norm(dec, query.source), _space_norm(dec, query.target)
        src_norms.append(a)
        tgt_norms.append(b)
        ratios.append(b / a)
    logs = np.log2(ratios)
    half = len(steps) // 2
    tail_slope = float(np.polyfit(np.asarray(steps[half:], float), logs[half:], 1)[0])
    step_slopes = np.diff(logs)
    report = SuiteReport(f"witness_{family}", [{"step": j} for j in steps], metadata={
        "query": query.to_dict(), "decision": decision.to_dict(), "family": family})
    base = {"family": family, "steps": steps, "ratios": ratios, "source_norms": src_norms,
            "target_norms": tgt_norms, "tail_slope": tail_slope, "step_slopes": step_slopes,
            "expected_slope": expected, "continuity": str(decision.continuity)}
    if expected is not None and abs(expected) > flat_tol:
        ok = abs(tail_slope - expected) <= slope_tol * abs(expected)
        if expected > 0:
            ok = ok and bool(np.all(step_slopes > 0))
        report.add(dict(base, check="slope"), slope_tol, ok)
    if decision.continuity == HOLDS:
        spread = max(ratios) / min(ratios)
        report.add(dict(base, check="bounded", spread=spread), bound_factor,
                   spread < bound_factor and tail_slope <= flat_tol)
    if not report.cases:
        report.add(dict(base, check="recorded"), None, True)
    report.runtime = time.perf_counter() - t0
    return report


def sobolev_query(n=3, s=1.0, p=2.0, q=8.0, c=0.0) -> EmbeddingQuery:
    """H^{s,p} -> L^q(|x|^c) written as RF^s_{p,2} -> RF^0_{q,2}(|x|^c)."""
    src = SpaceParams("F", s, p, 2.0, n, PowerWeight(0.0, n))
    tgt = SpaceParams("F", 0.0, q, 2.0, n, PowerWeight(c, n))
    return EmbeddingQuery(src, tgt)


# ---------------------------------------------------------------------------
# lemmas
# ---------------------------------------------------------------------------

def ap_grid(dims=(2, 3), ps=(1.5, 2.0, 4.0), step: float = 0.5):
    """(n, p, gamma) with gamma from -n + step to n(p-1) + step in steps of ``step``."""
    pts = []
    for n in dims:
        for p in ps:
            count = int(round((n * p) / step)) + 1
            pts.extend((n, p, -n + step * (i + 1)) for i in range(count))
    return pts


def lemma_suite(n: int = 3, gammas=(-1.0, 0.0, 1.0, 2.0), eps_values=(0.01, 0.05), mu_max: int = 6,
                k_max: int = 32, ratio_bound: float = 10.0, ap_points=None) -> SuiteReport:
    """Product inequality on annuli and numeric A_p classification of |x|^gamma."""
    t0 = time.perf_counter()
    table = annulus_table(n, mu_max, k_max)
    indices = [FrameIndex(mu, k) for mu in range(mu_max + 1) for k in range(1, k_max + 1)]
    grid = [{"gamma1": g1, "gamma2": g2, "eps": e} for g1, g2 in itertools.product(gammas, gammas)
            for e in eps_values]
    report = SuiteReport("lemmas", grid, metadata={"n": n, "mu_max": mu_max, "k_max": k_max})
    for g in grid:
        w1, w2 = PowerWeight(g["gamma1"], n), PowerWeight(g["gamma2"], n)
        r = verify_product_lemma(w1, w2, g["eps"], indices, table)
        if g["gamma1"] == g["gamma2"]:
            report.add(dict(g, check="product-identical", max_ratio=r), 0.0, r == 1.0)
        else:
            report.add(dict(g, check="product", max_ratio=r), ratio_bound, 1.0 <= r < ratio_bound)
    for dim, p, gamma in (ap_points or ap_grid()):
        est = ap_constant_estimate(PowerWeight(gamma, dim), p) if gamma > -dim else math.inf
        numeric = math.isfinite(est)
        analytic = -dim < gamma < dim * (p - 1)
        report.add({"check": "ap", "n": dim, "p": p, "gamma": gamma, "constant": est, "numeric_in": numeric,
                    "analytic_in": analytic}, "exact", numeric == analytic)
    report.runtime = time.perf_counter() - t0
    return report


SUITES = {
    "norm-equivalence": lambda: norm_equivalence_suite(),
    "witness-critical": lambda: witness_suite(sobolev_query(q=6.0)),
    "witness-supercritical": lambda: witness_suite(sobolev_query(q=8.0)),
    "lemmas": lambda: lemma_suite(),
}


def run_suite(name: str) -> SuiteReport:
    try:
        return SUITES[name]()
    except KeyError as exc:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from exc
