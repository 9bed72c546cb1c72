"""Sufficient-condition checkers for continuity and compactness of embeddings
between weighted radial Besov / Triebel-Lizorkin spaces.

Verdicts never claim a disproof: ``NotImplied`` means the sufficient
condition fails, not that the embedding fails.

Notation: 1/p* = (1/p2 - 1/p1)_+, 1/q* = (1/q2 - 1/q1)_+,
delta = s1 - n/p1 - s2 + n/p2. For power weights A = g1/p1 - g2/p2 and
D = (n-1)(1/p2 - 1/p1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .annuli import annulus_table
from .errors import InvalidParameters
from .spectral import SpaceParams
from .weights import PowerWeight, TwoRegimeWeight, WeightSpec, in_ap_class, mass_table, weight_from_dict

EQ_TOL = 1e-12
MONOTONE_TOL = 1e-9


class Verdict(str, Enum):
    HOLDS = "HoldsBySufficientCondition"
    NOT_IMPLIED = "NotImplied"
    OUT_OF_SCOPE = "OutOfTheoremScope"

    def __str__(self):
        return self.value


HOLDS, NOT_IMPLIED, OUT_OF_SCOPE = Verdict.HOLDS, Verdict.NOT_IMPLIED, Verdict.OUT_OF_SCOPE


def _inv(x):
    return 0.0 if math.isinf(x) else 1.0 / x


def star_exponent(a1, a2):
    """Exponent r with 1/r = (1/a2 - 1/a1)_+ (inf when the difference is <= 0)."""
    d = _inv(a2) - _inv(a1)
    return math.inf if d <= EQ_TOL else 1.0 / d


def _fmt(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _parse_num(x):
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "+inf"):
            return math.inf
        return float(x)
    return float(x)


@dataclass(frozen=True)
class NumericConfig:
    """Truncation and classification settings for the numeric checkers.

    ``mu_max = None`` picks 24 for pure power weights and a smaller value
    when a weight has breakpoints, so that the k-window of every scale in
    the mu-window lies beyond the outermost breakpoint.
    """

    mu_max: int = None
    k_max: int = 1024
    eps_margin: float = 0.02
    k_window: tuple = (0.25, 1.0)
    mu_window: tuple = (0.5, 1.0)

    def to_dict(self):
        return {"mu_max": self.mu_max, "k_max": self.k_max, "eps_margin": self.eps_margin,
                "k_window": list(self.k_window), "mu_window": list(self.mu_window)}


@dataclass(frozen=True)
class EmbeddingQuery:
    source: SpaceParams
    target: SpaceParams
    config: NumericConfig = field(default_factory=NumericConfig)

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise InvalidParameters("source and target must share the dimension")

    @property
    def n(self):
        return self.source.n

    def to_dict(self):
        return {"source": self.source.to_dict(), "target": self.target.to_dict(), "config": self.config.to_dict()}


@dataclass(frozen=True)
class EmbeddingDecision:
    continuity: Verdict
    compactness: Verdict
    margin: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.compactness == HOLDS and self.continuity != HOLDS:
            raise AssertionError("compactness cannot hold without continuity")

    def to_dict(self):
        return {
            "schema": "afl-decision/1",
            "continuity": str(self.continuity),
            "compactness": str(self.compactness),
            "margin": _fmt(self.margin),
            "method": self.method,
            "diagnostics": _jsonable(self.diagnostics),
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return _fmt(x) if math.isinf(x) else (None if math.isnan(x) else x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, Enum):
        return str(obj)
    return obj


def _scope(method, reason, **diag):
    return EmbeddingDecision(OUT_OF_SCOPE, OUT_OF_SCOPE, 0.0, method, dict(diag, reason=reason))


def _margin(slacks):
    return float(min(slacks)) if slacks else 0.0


def _ge(x, y):
    return x >= y - EQ_TOL


def _gt(x, y):
    return x > y + EQ_TOL


def _common(q: EmbeddingQuery):
    s1, s2 = q.source, q.target
    n = q.n
    p_star = star_exponent(s1.p, s2.p)
    q_star = star_exponent(s1.q, s2.q)
    delta = s1.s - n * _inv(s1.p) - s2.s + n * _inv(s2.p)
    D = (n - 1) * (_inv(s2.p) - _inv(s1.p))
    return n, p_star, q_star, delta, D


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def power_conditions(n, p1, p2, q1, q2, s1, s2, g1, g2):
    """Closed-form slacks for power weights |x|^g1 -> |x|^g2.

    Returns (continuity_slacks, continuity_strict, compact_slacks, diagnostics).
    Each slack is lhs - rhs; non-strict conditions need slack >= 0, strict
    ones slack > 0.
    """
    p_star, q_star = star_exponent(p1, p2), star_exponent(q1, q2)
    delta = s1 - n * _inv(p1) - s2 + n * _inv(p2)
    A = g1 * _inv(p1) - g2 * _inv(p2)
    D = (n - 1) * (_inv(p2) - _inv(p1))
    if math.isinf(p_star):
        k_cond = (A - D, False)
    else:
        k_cond = (A - n / p_star, True)
    mu_cond = (delta - A, not math.isinf(q_star))
    compact = []
    if math.isinf(p_star):
        compact.append(A - D)
    if math.isinf(q_star):
        compact.append(delta - A)
    diag = {"p_star": p_star, "q_star": q_star, "delta": delta, "A": A, "D": D}
    return [k_cond, mu_cond], compact, diag


def _decide(conds, compact_slacks):
    ok = all(_gt(s, 0) if strict else _ge(s, 0) for s, strict in conds)
    margin = _margin([s for s, _ in conds])
    if not ok:
        return NOT_IMPLIED, NOT_IMPLIED, margin
    comp = HOLDS if all(_gt(s, 0) for s in compact_slacks) else NOT_IMPLIED
    return HOLDS, comp, margin


def _require_besov(q, method):
    if q.source.kind != "B" or q.target.kind != "B":
        return _scope(method, "both spaces must be Besov spaces")
    return None


def _power_gammas(q):
    w1, w2 = q.source.weight, q.target.weight
    g = []
    for w in (w1, w2):
        if isinstance(w, PowerWeight):
            g.append(w.gamma)
        elif isinstance(w, TwoRegimeWeight) and w.alpha == w.beta:
            g.append(w.alpha)
        else:
            return None
    return g


def check_power_weights(q: EmbeddingQuery) -> EmbeddingDecision:
    """Closed-form conditions for |x|^g1 -> |x|^g2 between Besov spaces."""
    method = "power-weights closed form"
    bad = _require_besov(q, method)
    if bad:
        return bad
    g = _power_gammas(q)
    if g is None:
        return _scope(method, "both weights must be power weights")
    a, b = q.source, q.target
    conds, compact, diag = power_conditions(q.n, a.p, b.p, a.q, b.q, a.s, b.s, g[0], g[1])
    cont, comp, margin = _decide(conds, compact)
    diag["slacks"] = [s for s, _ in conds]
    return EmbeddingDecision(cont, comp, margin, method, diag)


def _regime_exponents(w: WeightSpec):
    if isinstance(w, TwoRegimeWeight):
        return w.alpha, w.beta
    if isinstance(w, PowerWeight):
        return w.gamma, w.gamma
    return None


def two_regime_conditions(n, p1, p2, q1, q2, s1, s2, a1, b1, a2, b2):
    """Slacks for w_{a1,b1} -> w_{a2,b2} (target unweighted: a2 = b2 = 0)."""
    p_star, q_star = star_exponent(p1, p2), star_exponent(q1, q2)
    delta = s1 - n * _inv(p1) - s2 + n * _inv(p2)
    A_a = a1 * _inv(p1) - a2 * _inv(p2)
    A_b = b1 * _inv(p1) - b2 * _inv(p2)
    D = (n - 1) * (_inv(p2) - _inv(p1))
    if math.isinf(p_star):
        beta_cond = (A_b - D, False)
        floor = max(A_a, D)
        delta_cond = (delta - floor, not math.isinf(q_star))
        compact = [A_b - D, delta - floor]
    else:
        beta_cond = (A_b - n / p_star, True)
        floor = max(A_a, n / p_star)
        equality_ok = math.isinf(q_star) and abs(n / p_star - A_a) > EQ_TOL
        delta_cond = (delta - floor, not equality_ok)
        compact = [A_b - n / p_star, delta - floor]
    diag = {"p_star": p_star, "q_star": q_star, "delta": delta, "A_alpha": A_a, "A_beta": A_b, "D": D}
    return [beta_cond, delta_cond], compact, diag


def check_two_regime(q: EmbeddingQuery, two_weight: bool = True) -> EmbeddingDecision:
    """Closed-form conditions for two-regime weights.

    With ``two_weight=False`` the target must be unweighted.
    Requires s2 <= s1 and p1 < inf.
    """
    method = "two-regime closed form" + (" (two weights)" if two_weight else "")
    bad = _require_besov(q, method)
    if bad:
        return bad
    a, b = q.source, q.target
    e1, e2 = _regime_exponents(a.weight), _regime_exponents(b.weight)
    if e1 is None or e2 is None:
        return _scope(method, "weights must be two-regime (or power) weights")
    if not two_weight and not b.weight.is_unweighted():
        return _scope(method, "single-weight form needs an unweighted target")
    if a.s < b.s or math.isinf(a.p):
        return _scope(method, "requires s2 <= s1 and p1 < inf", s1=a.s, s2=b.s, p1=a.p)
    conds, compact, diag = two_regime_conditions(q.n, a.p, b.p, a.q, b.q, a.s, b.s, e1[0], e1[1], e2[0], e2[1])
    cont, comp, margin = _decide(conds, compact)
    diag["slacks"] = [s for s, _ in conds]
    return EmbeddingDecision(cont, comp, margin, method, diag)


def check_bessel_potential(n: int, s: float, p: float, q: float, c: float) -> EmbeddingDecision:
    """H^{s,p}_rad -> L^q(|x|^c): continuous for p <= q <= p*_c = p(n+c)/(n-sp)
    when -sp < c < (n-1)(q-p)/p and |x|^c in A_q; compact when p < q < p*_c."""
    method = "Bessel-potential closed form"
    diag = {"n": n, "s": s, "p": p, "q": q, "c": c}
    if not (1 < p < math.inf and 0 < s < n / p):
        return _scope(method, "requires 1 < p < inf and 0 < s < n/p", **diag)
    if not (q >= 1):
        return _scope(method, "q must be >= 1", **diag)
    if not (-n < c < n * (q - 1)):
        return _scope(method, "|x|^c is not in A_q", **diag)
    upper = (n - 1) * (q - p) / p
    if not (-s * p < c < upper):
        return _scope(method, "weight exponent outside (-sp, (n-1)(q-p)/p)", weight_upper=upper, **diag)
    p_crit = p * (n + c) / (n - s * p)
    diag.update(p_star_c=p_crit, weight_upper=upper)
    if q < p:
        return _scope(method, "q < p", **diag)
    margin = min(q - p, p_crit - q)
    if q > p_crit + EQ_TOL:
        return EmbeddingDecision(NOT_IMPLIED, NOT_IMPLIED, margin, method, diag)
    comp = HOLDS if (q > p + EQ_TOL and q < p_crit - EQ_TOL) else NOT_IMPLIED
    return EmbeddingDecision(HOLDS, comp, margin, method, diag)


def bessel_potential_query(n, s, p, q, c, config: NumericConfig = None) -> EmbeddingQuery:
    """The TL query RF^s_{p,2}(1) -> RF^0_{q,2}(|x|^c) equivalent to the Bessel-potential case."""
    src = SpaceParams("F", s, p, 2.0, n, PowerWeight(0.0, n))
    tgt = SpaceParams("F", 0.0, q, 2.0, n, PowerWeight(c, n))
    return EmbeddingQuery(src, tgt, config or NumericConfig())


def check_elementary(q: EmbeddingQuery) -> EmbeddingDecision:
    """Elementary embeddings between spaces with the same p and weight."""
    method = "elementary embeddings"
    a, b = q.source, q.target
    if a.p != b.p or a.weight != b.weight:
        return _scope(method, "elementary clauses need the same p and weight")
    p = a.p
    kinds = a.kind + b.kind
    holds = False
    clause = None
    if a.s > b.s + EQ_TOL:
        if "F" not in kinds or not math.isinf(p):
            holds, clause = True, "smoothness gap"
    elif abs(a.s - b.s) <= EQ_TOL:
        if kinds in ("BB", "FF") and a.q <= b.q:
            holds, clause = True, "q monotonicity"
        elif kinds == "BF" and not math.isinf(p) and a.q <= min(p, b.q):
            holds, clause = True, "B into F nesting"
        elif kinds == "FB" and not math.isinf(p) and b.q >= max(p, a.q):
            holds, clause = True, "F into B nesting"
    cont = HOLDS if holds else NOT_IMPLIED
    return EmbeddingDecision(cont, NOT_IMPLIED, a.s - b.s, method, {"clause": clause, "kinds": kinds})


# ---------------------------------------------------------------------------
# numeric general conditions
# ---------------------------------------------------------------------------

def _fit_power(k, y):
    """Least-squares fit log y = e log k + c + d/k; returns e."""
    X = np.column_stack((np.log(k), np.ones_like(k), 1.0 / k))
    coef, *_ = np.linalg.lstsq(X, np.log(y), rcond=None)
    return float(coef[0])


def _non_increasing(y):
    return bool(np.all(np.diff(y) <= MONOTONE_TOL * np.abs(y[:-1])))


def _trend(values, slope, eps):
    """Classify a positive tail with fitted log-slope: 'decay', 'grow', 'flat' or 'unclear'."""
    if slope < -eps:
        return "decay"
    if slope > eps:
        return "grow"
    return "flat" if _non_increasing(values) else "unclear"


def _auto_mu_max(config, w1, w2, n, k_max):
    if config.mu_max is not None:
        return int(config.mu_max)
    brk = np.concatenate((w1.breakpoints(), w2.breakpoints()))
    if brk.size == 0:
        return 24
    from .special_functions import mcmahon_guess

    j = mcmahon_guess(0.5 * (n - 2), max(1, int(k_max * config.k_window[0])))
    return max(4, min(24, int(math.floor(math.log2(j / (4.0 * float(np.max(brk))))))))


def _ratio_tables(q: EmbeddingQuery):
    cfg = q.config
    n = q.n
    a, b = q.source, q.target
    mu_max = _auto_mu_max(cfg, a.weight, b.weight, n, cfg.k_max)
    table = annulus_table(n, mu_max, cfg.k_max)
    m1 = mass_table(a.weight, a.p, table).masses
    m2 = mass_table(b.weight, b.p, table).masses
    return m2 / m1, mu_max


def _windows(cfg, K, mu_max):
    k_lo = max(2, int(K * cfg.k_window[0]))
    k_hi = int(K * cfg.k_window[1])
    mu_lo = int(mu_max * cfg.mu_window[0])
    return np.arange(k_lo, k_hi + 1), np.arange(mu_lo, mu_max + 1)


def check_besov_general(q: EmbeddingQuery) -> EmbeddingDecision:
    """Numeric evaluation of the general Besov condition from the mass tables.

    For each mu the ratio R_k = w2_{mu,k}/w1_{mu,k} is fitted as a power of
    k on the tail window and the l_{p*} norm over k is classified
    (convergent / divergent / unclear); then a_mu = 2^{-mu(s1-s2)} ||R||_{p*}
    is fitted geometrically in mu and classified in l_{q*}. Margins are in
    units of the fitted exponents, which coincide with the closed-form slacks
    for power weights.
    """
    method = "general Besov condition (numeric)"
    bad = _require_besov(q, method)
    if bad:
        return bad
    cfg = q.config
    eps = cfg.eps_margin
    a, b = q.source, q.target
    n, p_star, q_star, delta, D = _common(q)
    R, mu_max = _ratio_tables(q)
    K = cfg.k_max
    kwin, muwin = _windows(cfg, K, mu_max)
    kk = np.arange(1, K + 1, dtype=float)

    exps = np.empty(mu_max + 1)
    inner = np.empty(mu_max + 1)
    k_state = []
    for mu in range(mu_max + 1):
        row = R[mu]
        e = _fit_power(kk[kwin - 1], row[kwin - 1])
        exps[mu] = e
        if math.isinf(p_star):
            st = _trend(row[kwin - 1], e, eps)
            state = {"decay": "bounded", "flat": "bounded", "grow": "divergent", "unclear": "unclear"}[st]
            inner[mu] = float(np.max(row))
        else:
            x = p_star * e
            if x < -1 - eps:
                state = "bounded"
                tail = row[-1] ** p_star * K / (-x - 1)
                inner[mu] = float((np.sum(row ** p_star) + tail) ** (1 / p_star))
            elif x > -1 + eps:
                state, inner[mu] = "divergent", math.inf
            else:
                state, inner[mu] = "unclear", math.nan
        k_state.append(state)

    k_slack = float(np.min(-exps)) if math.isinf(p_star) else float(np.min(-1.0 / p_star - exps))
    diag = {"p_star": p_star, "q_star": q_star, "delta": delta, "D": D, "mu_max": mu_max, "k_max": K,
            "k_exponents": exps, "k_state": k_state}

    if "divergent" in k_state:
        return EmbeddingDecision(NOT_IMPLIED, NOT_IMPLIED, k_slack, method, diag)
    if "unclear" in k_state:
        diag["reason"] = "k-tail classification inconclusive within eps_margin"
        return EmbeddingDecision(OUT_OF_SCOPE, OUT_OF_SCOPE, k_slack, method, diag)

    mus = np.arange(mu_max + 1, dtype=float)
    amu = 2.0 ** (-mus * (a.s - b.s)) * inner
    g = float(np.polyfit(muwin.astype(float), np.log2(amu[muwin]), 1)[0])
    diag.update(a_mu=amu, mu_exponent=g)
    mu_slack = -g
    margin = min(k_slack, mu_slack)
    if math.isinf(q_star):
        st = _trend(amu[muwin], g, eps)
        mu_ok = {"decay": True, "flat": True, "grow": False, "unclear": None}[st]
    else:
        mu_ok = True if g < -eps else (False if g > eps else None)
    diag["mu_state"] = {True: "summable", False: "divergent", None: "unclear"}[mu_ok]
    if mu_ok is False:
        return EmbeddingDecision(NOT_IMPLIED, NOT_IMPLIED, margin, method, diag)
    if mu_ok is None:
        diag["reason"] = "mu-trend classification inconclusive within eps_margin"
        return EmbeddingDecision(OUT_OF_SCOPE, OUT_OF_SCOPE, margin, method, diag)

    # compactness extras
    comp_states = []
    if math.isinf(q_star):
        comp_states.append(_strict_state(g, eps))
    if math.isinf(p_star):
        comp_states.append(_strict_state(float(np.max(exps)), eps))
    comp = _combine(comp_states)
    return EmbeddingDecision(HOLDS, comp, margin, method, diag)


def _strict_state(exponent, eps):
    if exponent < -eps:
        return HOLDS
    if exponent > eps:
        return NOT_IMPLIED
    return OUT_OF_SCOPE


def _combine(states):
    if all(s == HOLDS for s in states):
        return HOLDS
    if NOT_IMPLIED in states:
        return NOT_IMPLIED
    return OUT_OF_SCOPE


def check_tl_general(q: EmbeddingQuery) -> EmbeddingDecision:
    """Numeric evaluation of sup_{mu,k} 2^{-mu(s1-s2)} w2/w1 < inf (needs p1 <= p2).

    Compactness needs w1/w2 -> inf in k for every mu; it is also required
    that the supremum decays in mu, since the interpolation argument behind
    the TL result relies on a compact Besov embedding, which needs that decay.
    """
    method = "general Triebel-Lizorkin condition (numeric)"
    a, b = q.source, q.target
    if a.kind != "F" or b.kind != "F":
        return _scope(method, "both spaces must be Triebel-Lizorkin spaces")
    if a.p > b.p:
        return _scope(method, "requires p1 <= p2", p1=a.p, p2=b.p)
    cfg = q.config
    eps = cfg.eps_margin
    R, mu_max = _ratio_tables(q)
    K = cfg.k_max
    kwin, muwin = _windows(cfg, K, mu_max)
    kk = np.arange(1, K + 1, dtype=float)
    exps = np.array([_fit_power(kk[kwin - 1], R[mu, kwin - 1]) for mu in range(mu_max + 1)])
    states = [_trend(R[mu, kwin - 1], exps[mu], eps) for mu in range(mu_max + 1)]
    diag = {"mu_max": mu_max, "k_max": K, "k_exponents": exps, "k_state": states}
    k_slack = float(np.min(-exps))
    if "grow" in states:
        return EmbeddingDecision(NOT_IMPLIED, NOT_IMPLIED, k_slack, method, diag)
    if "unclear" in states:
        diag["reason"] = "k-trend inconclusive within eps_margin"
        return EmbeddingDecision(OUT_OF_SCOPE, OUT_OF_SCOPE, k_slack, method, diag)
    mus = np.arange(mu_max + 1, dtype=float)
    sup_mu = 2.0 ** (-mus * (a.s - b.s)) * np.max(R, axis=1)
    g = float(np.polyfit(muwin.astype(float), np.log2(sup_mu[muwin]), 1)[0])
    diag.update(sup_mu=sup_mu, mu_exponent=g)
    margin = min(k_slack, -g)
    st = _trend(sup_mu[muwin], g, eps)
    if st == "grow":
        return EmbeddingDecision(NOT_IMPLIED, NOT_IMPLIED, margin, method, diag)
    if st == "unclear":
        diag["reason"] = "mu-trend inconclusive within eps_margin"
        return EmbeddingDecision(OUT_OF_SCOPE, OUT_OF_SCOPE, margin, method, diag)
    comp = _combine([_strict_state(float(np.max(exps)), eps), _strict_state(g, eps)])
    return EmbeddingDecision(HOLDS, comp, margin, method, diag)


# ---------------------------------------------------------------------------
# dispatch and I/O
# ---------------------------------------------------------------------------

def check_embedding(q: EmbeddingQuery, method: str = "auto") -> EmbeddingDecision:
    """Run one checker; ``auto`` picks the sharpest applicable one."""
    table = {
        "general": check_besov_general,
        "power": check_power_weights,
        "two_regime": check_two_regime,
        "tl": check_tl_general,
        "elementary": check_elementary,
    }
    if method != "auto":
        try:
            return table[method](q)
        except KeyError as exc:
            raise InvalidParameters(f"unknown method {method!r}") from exc
    kinds = q.source.kind + q.target.kind
    if kinds == "BB":
        if _power_gammas(q) is not None:
            return check_power_weights(q)
        if _regime_exponents(q.source.weight) and _regime_exponents(q.target.weight):
            d = check_two_regime(q)
            if d.continuity != OUT_OF_SCOPE:
                return d
        return check_besov_general(q)
    if kinds == "FF":
        return check_tl_general(q)
    return check_elementary(q)


def space_from_dict(d: dict, n_default: int = 3) -> SpaceParams:
    n = int(d.get("n", n_default))
    w = d.get("weight")
    weight = weight_from_dict(dict(w, n=w.get("n", n))) if w else PowerWeight(0.0, n)
    return SpaceParams(d.get("kind", "B"), float(d.get("s", 0.0)), _parse_num(d.get("p", 2)),
                       _parse_num(d.get("q", 2)), n, weight)


def query_from_dict(d: dict) -> EmbeddingQuery:
    n = int(d.get("n", 3))
    cfg = d.get("config", {}) or {}
    config = NumericConfig(
        mu_max=cfg.get("mu_max"),
        k_max=int(cfg.get("k_max", 1024)),
        eps_margin=float(cfg.get("eps_margin", 0.02)),
        k_window=tuple(cfg.get("k_window", (0.25, 1.0))),
        mu_window=tuple(cfg.get("mu_window", (0.5, 1.0))),
    )
    return EmbeddingQuery(space_from_dict(d["source"], n), space_from_dict(d["target"], n), config)


def decide_from_dict(d: dict) -> EmbeddingDecision:
    """Evaluate a JSON-style query (embedding query or Bessel-potential form)."""
    if "bessel_potential" in d:
        b = d["bessel_potential"]
        return check_bessel_potential(int(b.get("n", 3)), float(b["s"]), _parse_num(b["p"]),
                                      _parse_num(b["q"]), float(b["c"]))
    return check_embedding(query_from_dict(d), d.get("method", "auto"))


def classify_ap(w: WeightSpec, p: float) -> bool:
    return in_ap_class(w, p)
