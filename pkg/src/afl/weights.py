"""Radial weights, annulus masses and A_p diagnostics.

Power and two-regime weights are represented internally as piecewise power
functions c r^e, for which every radial integral has a closed form. A
tabulated weight on a positive sampled grid is interpolated log-log (so that
power laws are reproduced exactly) and extrapolated as a power law beyond
the grid, which keeps it in the same closed-form class. Any other profile
falls back to adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .annuli import AnnulusTable, FrameIndex, annulus_bounds, annulus_measure
from .errors import InvalidParameters, NumericalFailure
from .profiles import RadialProfile, Sampled
from .transforms import sphere_area

LOG_TOL = 1e-12
QUAD_RTOL = 1e-8


# ---------------------------------------------------------------------------
# piecewise power functions
# ---------------------------------------------------------------------------

def _power_integral(c, e, a, b):
    """int_a^b c t^e dt for 0 <= a <= b <= inf (vectorized); +inf on divergence."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape)
    live = b > a
    if c == 0 or not np.any(live):
        return out
    e1 = e + 1.0
    if abs(e1) < LOG_TOL:
        bad = live & ((a == 0) | np.isinf(b))
        ok = live & ~bad
        out[ok] = c * np.log(b[ok] / a[ok])
        out[bad] = np.inf
        return out
    if e1 > 0:
        bad = live & np.isinf(b)
    else:
        bad = live & (a == 0)
    out[bad] = np.inf
    ok = live & ~bad
    if e == 0:
        out[ok] = c * (b[ok] - a[ok])
        return out
    lo, hi = a[ok], b[ok]
    if e1 > 0:
        # (b^e1 - a^e1)/e1 written to avoid cancellation when b ~ a
        zero = lo == 0
        safe = np.where(zero, 1.0, lo)
        val = np.where(zero, hi ** e1, safe ** e1 * np.expm1(e1 * np.log(hi / safe)))
        out[ok] = c * val / e1
    else:
        top = np.isinf(hi)
        safe = np.where(top, 1.0, hi)
        val = np.where(top, lo ** e1, safe ** e1 * np.expm1(e1 * np.log(lo / safe)))
        out[ok] = c * val / (-e1)
    return out


@dataclass(frozen=True)
class PiecewisePower:
    """w(t) = coefs[i] * t**exps[i] for edges[i] < t <= edges[i+1]."""

    edges: tuple
    coefs: tuple
    exps: tuple

    def __post_init__(self):
        if len(self.edges) != len(self.coefs) + 1 or len(self.coefs) != len(self.exps):
            raise InvalidParameters("piecewise power shape mismatch")
        if self.edges[0] != 0.0 or self.edges[-1] != math.inf:
            raise InvalidParameters("piecewise power must cover (0, inf)")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, t, side="left") - 1, 0, len(self.coefs) - 1)
        c = np.asarray(self.coefs)[idx]
        e = np.asarray(self.exps)[idx]
        with np.errstate(divide="ignore"):
            return c * np.power(t, e)

    def power(self, q):
        q = float(q)
        return PiecewisePower(self.edges, tuple(c ** q for c in self.coefs), tuple(e * q for e in self.exps))

    def __mul__(self, other: "PiecewisePower"):
        edges = np.union1d(self.edges, other.edges)
        mids = np.where(np.isinf(edges[1:]), edges[:-1] * 2 + 1, 0.5 * (edges[:-1] + edges[1:]))
        i1 = np.searchsorted(self.edges, mids) - 1
        i2 = np.searchsorted(other.edges, mids) - 1
        return PiecewisePower(
            tuple(float(x) for x in edges),
            tuple(self.coefs[a] * other.coefs[b] for a, b in zip(i1, i2)),
            tuple(self.exps[a] + other.exps[b] for a, b in zip(i1, i2)),
        )

    def substitute_root(self, n):
        """t -> w(t^{1/n}): edges raised to n, exponents divided by n."""
        return PiecewisePower(
            tuple(e ** n if math.isfinite(e) else math.inf for e in self.edges),
            self.coefs,
            tuple(e / n for e in self.exps),
        )

    def line_integral(self, a, b):
        """int_a^b w(t) dt, vectorized; +inf on divergence."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        total = np.zeros(np.broadcast(a, b).shape)
        for lo, hi, c, e in zip(self.edges[:-1], self.edges[1:], self.coefs, self.exps):
            total = total + _power_integral(c, e, np.clip(a, lo, hi), np.clip(b, lo, hi))
        return total

    def radial_integral(self, a, b, n):
        """int_{a < |x| <= b} w(|x|) dx in R^n."""
        shifted = PiecewisePower(self.edges, self.coefs, tuple(e + n - 1 for e in self.exps))
        return sphere_area(n) * shifted.line_integral(a, b)


# ---------------------------------------------------------------------------
# weight models
# ---------------------------------------------------------------------------

class WeightSpec:
    """Radial weight w(x) = w0(|x|) on R^n."""

    variant = "abstract"
    n: int

    def __call__(self, r):
        pw = self.piecewise()
        if pw is not None:
            return pw(r)
        raise NotImplementedError

    def piecewise(self):
        """Closed-form piecewise power representation, or ``None``."""
        return None

    def breakpoints(self):
        pw = self.piecewise()
        if pw is None:
            return np.empty(0)
        return np.asarray(pw.edges[1:-1], dtype=float)

    def is_unweighted(self) -> bool:
        pw = self.piecewise()
        return pw is not None and all(e == 0 for e in pw.exps) and all(c == 1 for c in pw.coefs)

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerWeight(WeightSpec):
    """|x|^gamma, admissible for gamma > -n."""

    gamma: float = 0.0
    n: int = 3
    variant = "power"

    def __post_init__(self):
        if not self.gamma > -self.n:
            raise InvalidParameters(f"power weight needs gamma > -n, got gamma={self.gamma}, n={self.n}")

    def piecewise(self):
        return PiecewisePower((0.0, math.inf), (1.0,), (float(self.gamma),))

    def to_dict(self):
        return {"variant": self.variant, "gamma": self.gamma, "n": self.n}


@dataclass(frozen=True)
class TwoRegimeWeight(WeightSpec):
    """|x|^alpha for |x| <= 1 and |x|^beta for |x| > 1."""

    alpha: float = 0.0
    beta: float = 0.0
    n: int = 3
    variant = "two_regime"

    def __post_init__(self):
        if not (self.alpha > -self.n and self.beta > -self.n):
            raise InvalidParameters("two-regime weight needs alpha, beta > -n")

    def piecewise(self):
        if self.alpha == self.beta:
            return PiecewisePower((0.0, math.inf), (1.0,), (float(self.alpha),))
        return PiecewisePower((0.0, 1.0, math.inf), (1.0, 1.0), (float(self.alpha), float(self.beta)))

    def to_dict(self):
        return {"variant": self.variant, "alpha": self.alpha, "beta": self.beta, "n": self.n}


def _loglog_piecewise(r, v):
    """Piecewise power through positive samples, power-law extrapolation at both ends."""
    lr, lv = np.log(r), np.log(v)
    slopes = np.diff(lv) / np.diff(lr)
    exps = np.concatenate(([slopes[0]], slopes, [slopes[-1]]))
    # c_i r_i^{e} = v_i at the left node of each cell (last extrapolation anchored at r_N)
    anchors_r = np.concatenate(([r[0]], r[:-1], [r[-1]]))
    anchors_v = np.concatenate(([v[0]], v[:-1], [v[-1]]))
    coefs = anchors_v / anchors_r ** exps
    edges = (0.0,) + tuple(float(x) for x in r) + (math.inf,)
    return PiecewisePower(edges, tuple(float(c) for c in coefs), tuple(float(e) for e in exps))


@dataclass(frozen=True, eq=False)
class TabulatedWeight(WeightSpec):
    """Weight given by a radial profile.

    A :class:`Sampled` profile with positive values is interpolated log-log
    with power-law extrapolation (closed-form integrals). Other profiles are
    evaluated directly and integrated adaptively.
    """

    profile: RadialProfile = None
    n: int = 3
    variant = "tabulated"

    def __post_init__(self):
        if self.profile is None:
            raise InvalidParameters("tabulated weight needs a profile")
        pw = None
        if isinstance(self.profile, Sampled):
            if np.any(self.profile.values < 0):
                raise InvalidParameters("weight values must be nonnegative")
            if np.all(self.profile.values > 0) and self.profile.r[0] > 0:
                pw = _loglog_piecewise(self.profile.r, self.profile.values)
                lo_e, hi_e = pw.exps[0], pw.exps[-1]
                if lo_e <= -self.n:
                    raise InvalidParameters("tabulated weight is not locally integrable at the origin")
        object.__setattr__(self, "_pw", pw)

    def piecewise(self):
        return self._pw

    def __call__(self, r):
        if self._pw is not None:
            return self._pw(r)
        return np.asarray(self.profile(r), dtype=float)

    def breakpoints(self):
        if self._pw is not None:
            return np.empty(0)  # smooth in log-log on each cell; edges handled by pieces
        return np.asarray(self.profile.breakpoints(), dtype=float)

    def to_dict(self):
        return {"variant": self.variant, "profile": self.profile.to_dict(), "n": self.n}


def weight_from_dict(data: dict) -> WeightSpec:
    variant = data.get("variant", "power")
    n = int(data.get("n", 3))
    if variant in ("power", "unweighted", "none"):
        return PowerWeight(float(data.get("gamma", 0.0)), n)
    if variant == "two_regime":
        return TwoRegimeWeight(float(data["alpha"]), float(data["beta"]), n)
    if variant == "tabulated":
        return TabulatedWeight(RadialProfile.from_dict(data["profile"]), n)
    raise InvalidParameters(f"unknown weight variant {variant!r}")


def weight_to_dict(w: WeightSpec) -> dict:
    return w.to_dict()


def with_dimension(w: WeightSpec, n: int) -> WeightSpec:
    """Same weight model declared for dimension n."""
    if w.n == n:
        return w
    if isinstance(w, PowerWeight):
        return PowerWeight(w.gamma, n)
    if isinstance(w, TwoRegimeWeight):
        return TwoRegimeWeight(w.alpha, w.beta, n)
    return TabulatedWeight(w.profile, n)


# ---------------------------------------------------------------------------
# integrals and masses
# ---------------------------------------------------------------------------

def _quad(func, a, b, points=()):
    pts = [p for p in points if a < p < b] or None
    if math.isinf(b):
        val, err = integrate.quad(func, a, b, epsrel=QUAD_RTOL, limit=400)
    else:
        val, err = integrate.quad(func, a, b, epsrel=QUAD_RTOL, limit=400, points=pts)
    if not math.isfinite(val) or err > max(QUAD_RTOL * abs(val), 1e-300) * 10:
        raise NumericalFailure("adaptive quadrature did not converge", achieved=err / abs(val) if val else err, interval=(a, b))
    return val


def radial_weight_integral(w: WeightSpec, a, b):
    """int_{a < |x| <= b} w dx (vectorized over a, b for closed-form weights)."""
    pw = w.piecewise()
    if pw is not None:
        return pw.radial_integral(a, b, w.n)
    n = w.n
    f = lambda r: float(w(r)) * r ** (n - 1)  # noqa: E731
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    out = np.array([_quad(f, x, y, w.breakpoints()) for x, y in zip(a_arr.ravel(), b_arr.ravel())])
    return sphere_area(n) * out.reshape(a_arr.shape)


def annulus_weight_integral(w: WeightSpec, idx: FrameIndex, table: AnnulusTable) -> float:
    """int over A_{mu,k} of w."""
    lo, hi = annulus_bounds(table, idx)
    return float(radial_weight_integral(w, lo, hi))


def _mass(measure, integral, p):
    if math.isinf(p):
        return measure ** -0.5
    return measure ** -0.5 * integral ** (1.0 / p)


def weighted_mass(w: WeightSpec, p: float, idx: FrameIndex, table: AnnulusTable) -> float:
    """|A|^{-1/2} (int_A w)^{1/p}, the weighted L^p norm of the normalized indicator."""
    if not p >= 1:
        raise InvalidParameters("p must be >= 1")
    measure = annulus_measure(table, idx)
    if math.isinf(p):
        return measure ** -0.5
    return float(_mass(measure, annulus_weight_integral(w, idx, table), p))


@dataclass(frozen=True, eq=False)
class WeightedMassTable:
    """Masses w_{mu,k} for mu = 0..mu_max, k = 1..k_max (array index [mu, k-1])."""

    weight: WeightSpec
    p: float
    table: AnnulusTable
    integrals: np.ndarray
    measures: np.ndarray
    masses: np.ndarray

    def __getitem__(self, idx: FrameIndex) -> float:
        self.table.check(idx)
        return float(self.masses[idx.mu, idx.k - 1])


def mass_table(w: WeightSpec, p: float, table: AnnulusTable) -> WeightedMassTable:
    """All masses of the truncated table, filled scale by scale."""
    if not p >= 1:
        raise InvalidParameters("p must be >= 1")
    mus = range(table.mu_max + 1)
    measures = np.array([table.measures(mu) for mu in mus])
    if math.isinf(p):
        integrals = np.full_like(measures, np.nan)
        masses = measures ** -0.5
    else:
        integrals = np.empty_like(measures)
        for mu in mus:
            edges = table.radii(mu)
            integrals[mu] = radial_weight_integral(w, edges[:-1], edges[1:])
        masses = _mass(measures, integrals, p)
    if not (np.all(np.isfinite(masses)) and np.all(masses > 0)):
        raise NumericalFailure("non-finite or non-positive annulus mass", weight=w.to_dict(), p=p)
    for arr in (integrals, measures, masses):
        arr.setflags(write=False)
    return WeightedMassTable(w, float(p), table, integrals, measures, masses)


# ---------------------------------------------------------------------------
# one-dimensional reduction and A_p
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DeltaProfile(RadialProfile):
    """t -> w0(t^{1/n}) on t > 0."""

    weight: WeightSpec = None
    kind = "delta_n"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(self.weight(t ** (1.0 / self.weight.n)), dtype=float)

    def piecewise(self):
        pw = self.weight.piecewise()
        return None if pw is None else pw.substitute_root(self.weight.n)

    def extent(self):
        return math.inf


def delta_n_transform(w: WeightSpec) -> DeltaProfile:
    """One-dimensional weight delta_n w0(t) = w0(t^{1/n})."""
    return DeltaProfile(w)


def ap_plan(j_min: int = -20, j_max: int = 20, refine: int = 1):
    """Intervals [0, 2^{i/m}] and [2^{i/m}, 2^{i/m+1}] for i/m in [j_min, j_max].

    Increasing ``refine`` (m) by integer factors yields supersets.
    """
    m = int(refine)
    exps = np.arange(j_min * m, j_max * m + 1) / m
    pts = 2.0 ** exps
    origin = [(0.0, float(b)) for b in pts]
    dyadic = [(float(a), float(2 * a)) for a in pts[:-m]]
    return origin + dyadic


def _interval_averages(pw, dual, a, b, generic):
    if pw is not None:
        iv = float(pw.line_integral(a, b))
        iu = float(pw.power(dual).line_integral(a, b))
        return iv / (b - a), iu / (b - a)
    f = lambda t: float(generic(t))  # noqa: E731
    g = lambda t: float(generic(t)) ** dual  # noqa: E731
    try:
        iv = _quad(f, a, b)
        iu = _quad(g, a, b)
    except NumericalFailure:
        return math.inf, math.inf
    return iv / (b - a), iu / (b - a)


def ap_constant_estimate(w: WeightSpec, p: float, intervals=None) -> float:
    """sup over the plan of (avg_I v)(avg_I v^{1-p'})^{p-1} with v = delta_n w0.

    Returns +inf when an average diverges on some interval.
    """
    if not p > 1:
        raise InvalidParameters("A_p estimate needs p > 1")
    if intervals is None:
        intervals = ap_plan()
    v = delta_n_transform(w)
    pw = v.piecewise()
    dual = -1.0 / (p - 1.0)
    best = 0.0
    for a, b in intervals:
        av, au = _interval_averages(pw, dual, a, b, v)
        if not (math.isfinite(av) and math.isfinite(au)):
            return math.inf
        best = max(best, av * au ** (p - 1.0))
    return best


def in_ap_class(w: WeightSpec, p: float) -> bool:
    """Analytic A_p membership for power and two-regime weights."""
    n = w.n
    if isinstance(w, PowerWeight):
        exps = (w.gamma,)
    elif isinstance(w, TwoRegimeWeight):
        exps = (w.alpha, w.beta)
    else:
        return math.isfinite(ap_constant_estimate(w, p))
    return all(-n < e < n * (p - 1) for e in exps)


def verify_product_lemma(w1: WeightSpec, w2: WeightSpec, eps: float, indices, table: AnnulusTable, eps_cap=None) -> float:
    """Worst ratio over the annuli of
    int_A w1^{-eps} w2^{1+eps} / ((int_A w1)^{-eps} (int_A w2)^{1+eps}).
    """
    if eps < 0 or (eps_cap is not None and eps > eps_cap):
        raise InvalidParameters(f"eps={eps} outside [0, {eps_cap}]")
    if w1.n != w2.n:
        raise InvalidParameters("weights must share the dimension")
    same = w1 == w2
    p1, p2 = w1.piecewise(), w2.piecewise()
    if same:
        integrand = w2
    elif p1 is not None and p2 is not None:
        integrand = _Piecewise(p1.power(-eps) * p2.power(1 + eps), w1.n)
    else:
        integrand = _Generic(lambda r: np.asarray(w1(r)) ** (-eps) * np.asarray(w2(r)) ** (1 + eps), w1.n,
                             np.union1d(w1.breakpoints(), w2.breakpoints()))
    worst = 0.0
    for idx in indices:
        lo, hi = annulus_bounds(table, idx)
        i1 = float(radial_weight_integral(w1, lo, hi))
        i2 = float(radial_weight_integral(w2, lo, hi))
        lhs = float(radial_weight_integral(integrand, lo, hi))
        if not all(math.isfinite(x) and x > 0 for x in (i1, i2, lhs)):
            raise NumericalFailure("divergent annulus integral in product lemma", mu=idx.mu, k=idx.k)
        ratio = (lhs / i2) * (i1 / i2) ** eps
        worst = max(worst, ratio)
    return worst


@dataclass(frozen=True, eq=False)
class _Piecewise(WeightSpec):
    pw: PiecewisePower = None
    n: int = 3
    variant = "piecewise"

    def piecewise(self):
        return self.pw


@dataclass(frozen=True, eq=False)
class _Generic(WeightSpec):
    func: object = None
    n: int = 3
    points: np.ndarray = None
    variant = "generic"

    def __call__(self, r):
        return self.func(r)

    def breakpoints(self):
        return self.points


def mass_ratio_asymptotic(n, gamma1, p1, gamma2, p2, mu, k, leading_constant=True):
    """Leading-order model of w2_{mu,k} / w1_{mu,k} for power weights.

    With |A_{mu,k}| ~ omega pi^n k^{n-1} 2^{-mu n} and w ~ (pi k 2^{-mu})^gamma
    on the annulus, the ratio behaves like

        C * 2^{mu((n+g1)/p1 - (n+g2)/p2)} * k^{g2/p2 - g1/p1 + (n-1)(1/p2 - 1/p1)},

    C = (omega pi^n)^{1/p2 - 1/p1} pi^{g2/p2 - g1/p1}. Set
    ``leading_constant=False`` for C = 1.
    """
    inv1 = 0.0 if math.isinf(p1) else 1.0 / p1
    inv2 = 0.0 if math.isinf(p2) else 1.0 / p2
    mu = np.asarray(mu, dtype=float)
    k = np.asarray(k, dtype=float)
    mu_exp = (n + gamma1) * inv1 - (n + gamma2) * inv2
    k_exp = gamma2 * inv2 - gamma1 * inv1 + (n - 1) * (inv2 - inv1)
    out = 2.0 ** (mu * mu_exp) * k ** k_exp
    if leading_constant:
        out = out * (sphere_area(n) * math.pi ** n) ** (inv2 - inv1) * math.pi ** (gamma2 * inv2 - gamma1 * inv1)
    return out
