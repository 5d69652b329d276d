"""Schatten-class series, signed trace bounds, weight-difference checks and
spectrum predictions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import build_truncation, product_values
from .measures import (CoshExpDensity, ExponentialDensity, ExpPowerDensity, LogDensity,
                       MeasureError, MeasureSpec, OscillatoryDensity, PointMass,
                       PowerDensity, ShiftedPowerDensity, asymptotic_class,
                       hahn_decompose, laplace_many, tail_integral, validate)
from .quadrature import QuadratureError, TailBound, integrate_halfline
from .spectral import eig_sym, lambda_max

__all__ = ["SeriesVerdict", "schatten_series", "trace_cond_terms", "SignedTraceBound",
           "signed_trace_bound", "Dominating", "default_dominating", "WeightDiffReport",
           "weight_diff_check", "DifferenceReport", "difference_operator",
           "difference_matrix", "SpectrumPrediction", "spectrum_predict",
           "is_nonnegative_measure", "KINDS"]

KINDS = ("trace-cond", "hs", "col-p", "diag-p", "entry-p")
LN2 = math.log(2.0)


def _tail_json(tail):
    return tail.to_json() if isinstance(tail, TailBound) else tail


@dataclass(frozen=True)
class SeriesVerdict:
    kind: str
    p: float | None
    length: int
    partial_sum: float
    tail: object  # TailBound | "diverges" | "unknown"
    verdict: str  # converges | diverges | inconclusive
    implication: str = ""

    def to_json(self):
        return {"kind": self.kind, "p": self.p, "length": self.length,
                "partial_sum": self.partial_sum, "tail": _tail_json(self.tail),
                "verdict": self.verdict, "implication": self.implication}


def is_nonnegative_measure(spec: MeasureSpec, T: float = 200.0) -> bool:
    """Positive by construction, or netted masses and combined density >= 0 on a grid."""
    if spec.is_positive():
        return True
    masses: dict = {}
    for c, a in spec.terms:
        if isinstance(a, PointMass):
            masses[a.c] = masses.get(a.c, 0.0) + c * a.w
    if any(w < 0 for w in masses.values()):
        return False
    t = np.unique(np.concatenate([np.geomspace(1e-9, 1.0, 400), np.linspace(1.0, T, 4000)]))
    eta = spec.density(t)
    scale = sum(abs(c) * float(np.max(np.abs(a.density(t)))) for c, a in spec.terms
                if not isinstance(a, PointMass))
    return bool(np.all(eta >= -1e-13 * max(scale, 1e-300)))


def trace_cond_terms(spec: MeasureSpec, length: int) -> np.ndarray:
    """``mu_hat(ln m^2) / m`` for ``m = 2..length+1``, computed exactly like the
    diagonal of :func:`build_truncation`."""
    m = np.arange(2, length + 2, dtype=np.int64)
    p = m * m
    vals, _ = product_values(spec, p)
    return vals / np.sqrt(p.astype(float))


def _class_rate(spec):
    """``(limit, exponent)`` with ``mu_hat(s) ~ limit * s^(exponent - 1)``, or None."""
    asym = asymptotic_class(spec)
    if asym.kind == "tends_to" and asym.limit and asym.limit > 0:
        return asym.limit, 0.0
    if asym.kind == "diverges":
        return asym.coefficient, asym.exponent
    return None


_SUBEXP = (PowerDensity, ExponentialDensity, ShiftedPowerDensity, CoshExpDensity,
           LogDensity, ExpPowerDensity)


def _decay(spec):
    """Large-``s`` decay of ``mu_hat`` for positive specs.

    ``("exp", c)`` for pure point masses (``mu_hat ~ w e^{-c s}``, smallest c);
    ``("sub", None)`` when a family density puts mass arbitrarily close to 0,
    so ``mu_hat`` decays slower than any exponential; ``None`` otherwise.
    """
    if not spec.is_positive() or spec.is_zero():
        return None
    atoms = [a for c, a in spec.terms if c > 0]
    if all(isinstance(a, PointMass) for a in atoms):
        return "exp", min(a.c for a in atoms)
    if any(isinstance(a, _SUBEXP) for a in atoms):
        return "sub", None
    return None


def _series_implication(kind, p, verdict):
    if kind == "trace-cond":
        return {"converges": "trace class", "diverges": "not trace class"}.get(verdict, "")
    if kind == "hs":
        return {"converges": "Hilbert-Schmidt", "diverges": "not Hilbert-Schmidt"}.get(verdict, "")
    if kind == "col-p":
        if p > 2:
            return "not Schatten-p" if verdict == "diverges" else "inconclusive (necessary condition only)"
        return "Schatten-p" if verdict == "converges" else "inconclusive (sufficient condition only)"
    if kind == "diag-p":
        return "not Schatten-p" if verdict == "diverges" else "inconclusive (necessary condition only)"
    if kind == "entry-p":
        return "Schatten-p" if verdict == "converges" else "inconclusive (sufficient condition only)"
    return ""


def _halfline(f, a, tol=1e-10):
    v, e = integrate_halfline(f, a, tol)
    return v, e


def _mu(spec, w):
    return laplace_many(spec, np.maximum(np.asarray(w, dtype=float), LN2))[0]


def schatten_series(spec: MeasureSpec, kind: str, p: float | None = None,
                    length: int | None = None) -> SeriesVerdict:
    """Partial sum of one of the series in the Schatten-class criteria plus a tail.

    ``trace-cond``  sum mu_hat(2 ln m)/m
    ``hs``          sum_{m,n} entry^2
    ``col-p``       sum_n (sum_m entry^2)^{p/2}
    ``diag-p``      sum_m (mu_hat(2 ln m)/m)^p
    ``entry-p``     sum_{m,n} entry^p

    Tails come from integral-test brackets, which need the summand to decrease;
    that is guaranteed for nonnegative measures, and anything else gets an
    ``unknown`` tail.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown series kind {kind!r}")
    if kind in ("col-p", "diag-p", "entry-p"):
        if p is None or not p > 0:
            raise ValueError(f"{kind} needs a positive p")
    elif kind == "hs":
        p = 2.0
    else:
        p = None
    if not validate(spec).ok:
        raise MeasureError("; ".join(validate(spec).reasons))
    if length is None:
        length = 4096 if kind in ("trace-cond", "diag-p") else 256
    M = length + 1  # last index
    monotone = is_nonnegative_measure(spec)
    rate = _class_rate(spec) if monotone else None

    if kind in ("trace-cond", "diag-p"):
        terms = trace_cond_terms(spec, length)
        if kind == "diag-p":
            terms = np.abs(terms) ** p
        partial = math.fsum(terms)
    else:
        H = build_truncation(spec, length).entries
        if kind == "col-p":
            cols = np.array([math.fsum(c) for c in (H * H).T])
            partial = math.fsum(cols ** (p / 2))
        else:
            partial = math.fsum((np.abs(H) ** p).ravel())

    if spec.is_zero():
        return SeriesVerdict(kind, p, length, 0.0, TailBound(0.0, 0.0), "converges",
                             _series_implication(kind, p, "converges"))
    if not monotone:
        return SeriesVerdict(kind, p, length, partial, "unknown", "inconclusive",
                             "summand monotonicity not certified")

    tail = _tail(spec, kind, p, M, rate, cols if kind == "col-p" else None)
    if tail == "diverges":
        verdict = "diverges"
    elif tail == "unknown":
        verdict = "inconclusive"
    else:
        verdict = "converges"
    return SeriesVerdict(kind, p, length, partial, tail, verdict,
                         _series_implication(kind, p, verdict))


def _diverges_by_class(kind, p, rate, decay=None):
    """Decide divergence of the tail integral from ``mu_hat(s) ~ c s^(q-1)``,
    or from the exponential decay class when ``s mu_hat(s) -> 0``."""
    if rate is None:
        if decay is None:
            return None
        form, c = decay
        # growth exponent of the tail integrand once mu_hat ~ e^{-c s}
        if kind in ("hs", "entry-p"):
            return p < 2 if form == "sub" else 1 - p / 2 - p * c >= 0
        if kind == "diag-p":
            return p < 1 if form == "sub" else 1 - p - 2 * p * c >= 0
        if kind == "col-p":
            return p < 2 if form == "sub" else 1 - p / 2 - p * c >= 0
        return None
    c, q = rate
    if kind == "trace-cond":
        return True  # mu_hat(y) ~ c y^(q-1), q >= 0, not integrable
    if kind in ("hs", "entry-p"):
        # integrand ~ w^(1 + p(q-1)) e^{w(1-p/2)}
        if p != 2:
            return p < 2
        return 1 + p * (q - 1) >= -1
    if kind == "diag-p":
        # integrand ~ v^(p(q-1)) e^{v(1-p)}
        if p != 1:
            return p < 1
        return p * (q - 1) >= -1
    if kind == "col-p":
        if 2 * (q - 1) >= -1:
            return True  # R itself infinite
        return p <= 2
    return None


def _tail(spec, kind, p, M, rate, cols):
    div = _diverges_by_class(kind, p, rate, _decay(spec))
    if div:
        return "diverges"
    try:
        if kind == "trace-cond":
            up = 0.5 * tail_integral(spec, 2 * math.log(M))
            lo = 0.5 * tail_integral(spec, 2 * math.log(M + 1))
            if math.isinf(up):
                return "diverges"
            return TailBound(lo, up)
        if kind in ("hs", "entry-p"):
            def g(w):
                return np.abs(_mu(spec, w)) ** p * np.exp(w * (1 - p / 2))
            a = math.log(M)
            up, e1 = _halfline(lambda w: (w - a) * g(w), a)
            b = math.log(M + 1) + LN2
            lo, e2 = _halfline(lambda w: (w - b) * g(w), b)
            return TailBound(max(lo - e2, 0.0), 2 * (up + e1))
        if kind == "diag-p":
            def h(v):
                return np.abs(_mu(spec, 2 * v)) ** p * np.exp(v * (1 - p))
            up, e1 = _halfline(h, math.log(M))
            lo, e2 = _halfline(h, math.log(M + 1))
            return TailBound(max(lo - e2, 0.0), up + e1)
        if kind == "col-p":
            def R(u):
                v, e = _halfline(lambda w: _mu(spec, w) ** 2, u)
                return v + e
            n = np.arange(2, M + 1)
            corr = np.array([R(math.log(M) + math.log(k)) / k for k in n])
            head_up = math.fsum((cols + corr) ** (p / 2)) - math.fsum(cols ** (p / 2))

            def outer(u):
                return np.array([R(x) ** (p / 2) for x in np.atleast_1d(u)]) \
                    * np.exp(np.atleast_1d(u) * (1 - p / 2))
            out, e = _halfline(outer, math.log(M), tol=1e-8)
            return TailBound(0.0, head_up + out + e)
    except QuadratureError:
        return "unknown"
    return "unknown"


# ---------------------------------------------------------------------------
# signed measures

@dataclass
class SignedTraceBound:
    bound: float  # inf when divergent
    verdict: str
    partial_sum: float
    tail: object
    length: int
    form_check: dict = field(default_factory=dict)
    reference_bound: float | None = None

    def to_json(self):
        return {"kind": "mod-mu-trace",
                "bound": self.bound if math.isfinite(self.bound) else "infinite",
                "verdict": self.verdict, "partial_sum": self.partial_sum,
                "tail": _tail_json(self.tail), "length": self.length,
                "form_check": self.form_check, "reference_bound": self.reference_bound}


def _osc_reference(spec, M):
    """``sum |c| Gamma(p+1)/2^{p+1} sum_m 1/(m (ln m)^{p+1})`` for oscillatory specs."""
    if not all(isinstance(a, OscillatoryDensity) for _, a in spec.terms):
        return None
    total = 0.0
    m = np.arange(2, M + 1, dtype=float)
    for c, a in spec.terms:
        q = a.p + 1
        head = math.fsum(1.0 / (m * np.log(m) ** q))
        tail = 1.0 / (a.p * math.log(M) ** a.p)  # int_M^inf dx/(x ln^q x)
        total += abs(c) * math.gamma(q) / 2 ** q * (head + tail)
    return total


def signed_trace_bound(spec: MeasureSpec, length: int = 4096, form_N: int = 256,
                       form_vectors: int = 100, seed: int = 0) -> SignedTraceBound:
    """``sum |mu|^(2 ln m)/m`` with tail, plus a check of ``H_mu <= H_|mu|``."""
    plus, minus, tv = hahn_decompose(spec)
    if not validate(tv).ok:
        raise MeasureError("total variation is inadmissible")
    sv = schatten_series(tv, "trace-cond", length=length)
    if sv.verdict == "converges":
        bound = sv.partial_sum + sv.tail.upper
    else:
        bound = math.inf
    check = {}
    if form_vectors:
        H = build_truncation(spec, form_N).entries
        Ht = build_truncation(tv, form_N).entries
        X = np.random.default_rng(seed).standard_normal((form_vectors, form_N))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        lhs = np.einsum("ij,jk,ik->i", X, H, X)
        rhs = np.einsum("ij,jk,ik->i", X, Ht, X)
        check = {"N": form_N, "vectors": form_vectors,
                 "max_violation": float(np.max(lhs - rhs)),
                 "holds": bool(np.all(lhs <= rhs + 1e-12))}
    return SignedTraceBound(bound, sv.verdict, sv.partial_sum, sv.tail, length, check,
                            _osc_reference(spec, length + 1))


# ---------------------------------------------------------------------------
# weighted Lebesgue checks

@dataclass(frozen=True)
class Dominating:
    """``D (y/x)^p g(y)`` with ``g(y) = sum c (y/ln2)^q (1 + y/ln2)^r exp(a (y/ln2)^k)``."""

    p: float
    D: float
    terms: tuple = ((1.0, 0.0, 0.0, 0.0, 1.0),)

    def g(self, y):
        y = np.asarray(y, dtype=float)
        u = y / LN2
        out = np.zeros_like(y)
        for c, q, r, a, k in self.terms:
            out = out + c * u ** q * (1 + u) ** r * np.exp(a * u ** k)
        return out

    def ineq2(self, x, y):
        return self.D * (y / x) ** self.p * self.g(y)

    def ineq1(self, y):
        """``g1(y) = D (y/ln2)^p g(y)``, which dominates ``ineq2`` for ``x >= ln 2``."""
        return self.D * (y / LN2) ** self.p * self.g(y)

    def to_json(self):
        return {"p": self.p, "D": self.D,
                "g_terms": [dict(zip(("c", "q", "r", "a", "k"), t)) for t in self.terms]}


def _atom_dominating(atom):
    if isinstance(atom, PowerDensity) and atom.p == 0:
        return Dominating(1.0, 0.0)
    if isinstance(atom, PowerDensity) and atom.p > 0:
        return Dominating(atom.p, 1.0)
    if isinstance(atom, ExponentialDensity):
        return Dominating(1.0, atom.a)
    if isinstance(atom, LogDensity):
        return Dominating(1.0, 1.0)
    if isinstance(atom, ExpPowerDensity):
        return Dominating(atom.p, atom.a, ((1.0, 0.0, 0.0, atom.a, atom.p),))
    if isinstance(atom, ShiftedPowerDensity):
        if atom.sign < 0:
            return Dominating(1.0, atom.alpha)
        return Dominating(1.0, atom.alpha, ((1.0, 0.0, max(atom.alpha - 1.0, 0.0), 0.0, 1.0),))
    if isinstance(atom, CoshExpDensity):
        return Dominating(1.0, atom.a + abs(atom.omega))
    return None


def default_dominating(spec: MeasureSpec):
    """Dominating function assembled from per-family bounds; None if unavailable.

    A mixture uses the smallest exponent ``p`` and absorbs
    ``(y/x)^{p_i - p} <= (y/ln2)^{p_i - p}`` into ``g``.
    """
    parts = []
    for c, a in spec.terms:
        if c == 0:
            continue
        d = _atom_dominating(a)
        if d is None:
            return None
        parts.append((abs(c), d))
    if not parts:
        return Dominating(1.0, 0.0)
    if len(parts) == 1 and parts[0][0] == 1.0:
        return parts[0][1]
    p = min(d.p for _, d in parts)
    terms = []
    for c, d in parts:
        for cc, q, r, a, k in d.terms:
            terms.append((c * d.D * cc, q + d.p - p, r, a, k))
    return Dominating(p, 1.0, tuple(terms))


@dataclass
class WeightDiffReport:
    eta_zero: float
    monotone: str | None
    positive_weight: bool
    dominating: dict | None
    ineq1: dict
    ineq2: dict
    decay: dict

    @property
    def ineq1_passed(self):
        return bool(self.ineq1.get("passed"))

    @property
    def ineq2_passed(self):
        return bool(self.ineq2.get("passed"))

    def to_json(self):
        return {"eta_zero_plus": self.eta_zero, "monotone": self.monotone,
                "positive_weight": self.positive_weight, "dominating": self.dominating,
                "eta_ineq_1": self.ineq1, "eta_ineq_2": self.ineq2, "decay": self.decay}


def weight_diff_check(spec: MeasureSpec, p: float | None = None, g: Dominating | None = None,
                      Y_max: float = 50.0, x_max: float = 1e3) -> WeightDiffReport:
    """Check both weight inequalities on an ``(x, y)`` grid.

    ``g`` defaults to the family bound; passing ``p`` overrides its exponent
    only when ``g`` is supplied too.  The decay check compares
    ``|x mu_hat(x) - eta(0+)|`` with ``D~ x^-p`` where
    ``D~ = D int y^p g(y) e^{-y} dy``.
    """
    if spec.has_point_masses():
        raise MeasureError("weight checks need an absolutely continuous measure")
    eta0 = spec.eta_zero()
    if not math.isfinite(eta0):
        raise MeasureError("eta(0+) is infinite")
    t = np.unique(np.concatenate([np.geomspace(1e-8, 1.0, 300), np.linspace(1.0, Y_max / LN2, 2000)]))
    eta = spec.density(t)
    d = np.diff(eta)
    scale = max(float(np.max(np.abs(eta))), 1e-300)
    if np.all(d >= -1e-13 * scale):
        monotone = "increasing"
    elif np.all(d <= 1e-13 * scale):
        monotone = "decreasing"
    else:
        monotone = None
    positive = bool(np.all(eta > 0))
    if g is None:
        g = default_dominating(spec)
    elif p is not None:
        g = Dominating(p, g.D, g.terms)

    xs = np.geomspace(LN2, x_max, 40)
    ys = np.geomspace(1e-6, Y_max, 240)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    lhs = np.abs(spec.density(Y / X) - eta0)

    def worst(rhs):
        gap = lhs - rhs * (1 + 1e-12) - 1e-15
        i = np.unravel_index(np.argmax(gap), gap.shape)
        ok = bool(gap[i] <= 0)
        return ok, None if ok else {"x": float(X[i]), "y": float(Y[i]),
                                    "lhs": float(lhs[i]), "rhs": float(rhs[i])}

    if g is None:
        none = {"passed": False, "reason": "no dominating function for this density"}
        ineq1, ineq2 = dict(none), dict(none)
        dt = None
    else:
        ok1, v1 = worst(g.ineq1(Y))
        ok2, v2 = worst(g.ineq2(X, Y))
        try:
            int1, _ = integrate_halfline(lambda y: g.ineq1(y) * np.exp(-y), 0.0, 1e-12)
            dt, _ = integrate_halfline(lambda y: y ** g.p * g.g(y) * np.exp(-y), 0.0, 1e-12)
            dt *= g.D
        except QuadratureError:
            int1, dt = math.inf, math.inf
        gate = monotone is not None and positive
        ineq1 = {"passed": ok1 and gate and math.isfinite(int1), "violation": v1,
                 "int_g_exp": int1, "norm_bound": (eta0 + int1) * math.pi}
        ineq2 = {"passed": ok2 and gate and math.isfinite(dt), "violation": v2,
                 "p": g.p, "D": g.D, "D_tilde": dt}
        if not gate:
            reason = "weight not monotone" if monotone is None else "weight not positive"
            ineq1["reason"] = ineq2["reason"] = reason

    s = np.geomspace(LN2, x_max, 60)
    vals, errs = laplace_many(spec, s)
    dev = s * vals - eta0
    decay = {"sup_abs": float(np.max(np.abs(dev))),
             "sign": "nonnegative" if np.all(dev >= -s * errs) else
             ("nonpositive" if np.all(dev <= s * errs) else "mixed")}
    if g is not None and dt is not None and math.isfinite(dt):
        decay["bound_ok"] = bool(np.all(np.abs(dev) <= dt * s ** -g.p * (1 + 1e-12) + s * errs))
    return WeightDiffReport(eta0, monotone, positive, None if g is None else g.to_json(),
                            ineq1, ineq2, decay)


# ---------------------------------------------------------------------------
# differences

def difference_matrix(spec1, spec2, gamma1=1.0, gamma2=1.0, N=256):
    H1 = build_truncation(spec1, N).entries
    H2 = build_truncation(spec2, N).entries
    return gamma1 * H1 - gamma2 * H2


@dataclass
class DifferenceReport:
    N: int
    min_eigenvalue: float
    max_eigenvalue: float
    trace: float
    trace_norm_lower: float
    positive_measure: bool
    termwise_trace: float | None
    series: dict | None
    matrix: np.ndarray | None = field(default=None, repr=False)

    def to_json(self):
        return {"N": self.N, "min_eigenvalue": self.min_eigenvalue,
                "max_eigenvalue": self.max_eigenvalue, "trace": self.trace,
                "trace_norm_lower": self.trace_norm_lower,
                "trace_norm_caveat": None if self.positive_measure else
                "difference is not a positive measure; sum |lambda| of the section is not a bound",
                "positive_measure": self.positive_measure,
                "termwise_trace": self.termwise_trace, "series": self.series}


def difference_operator(spec1: MeasureSpec, spec2: MeasureSpec, gamma1: float = 1.0,
                        gamma2: float = 1.0, N: int = 256, series_length: int = 4096
                        ) -> DifferenceReport:
    """Diagnostics for the section of ``gamma1 H_1 - gamma2 H_2``."""
    A = difference_matrix(spec1, spec2, gamma1, gamma2, N)
    rep = eig_sym(A)
    diff = spec1.scaled(gamma1) - spec2.scaled(gamma2)
    positive = is_nonnegative_measure(diff)
    termwise, series = None, None
    if positive:
        t1 = trace_cond_terms(spec1, N)
        t2 = trace_cond_terms(spec2, N)
        termwise = math.fsum(gamma1 * t1 - gamma2 * t2)
        series = schatten_series(diff, "trace-cond", length=series_length).to_json()
    return DifferenceReport(N, rep.eigenvalues[-1], rep.eigenvalues[0], rep.trace,
                            rep.trace_norm_lower, positive, termwise, series, A)


# ---------------------------------------------------------------------------
# spectra

@dataclass
class SpectrumPrediction:
    eta_zero_plus: float
    sigma_ess: list | None
    sigma_ac: list | str
    hypothesis_report: dict
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"eta_zero_plus": self.eta_zero_plus, "sigma_ess": self.sigma_ess,
                "sigma_ac": self.sigma_ac, "hypothesis_report": self.hypothesis_report,
                "evidence": self.evidence}


def spectrum_predict(spec: MeasureSpec, g: Dominating | None = None, N: int | None = 512,
                     tol: float = 1e-8) -> SpectrumPrediction:
    """``sigma_ess = [0, eta(0+) pi]`` under the first weight inequality and
    ``sigma_ac`` equal to it under the second when ``eta(0+) > 0``.

    With ``N`` set, a truncation supplies eigenvalue evidence; finite sections
    have pure point spectra, so this is labelled non-probative.
    """
    report = weight_diff_check(spec, g=g)
    eta0 = report.eta_zero
    top = eta0 * math.pi
    sigma_ess = [0.0, top] if report.ineq1_passed else None
    if report.ineq2_passed and eta0 > 0:
        sigma_ac = [0.0, top]
    elif not report.ineq2_passed:
        sigma_ac = "not predicted: " + report.ineq2.get("reason", "second weight inequality fails")
    else:
        sigma_ac = "not predicted: eta(0+) = 0"
    evidence = {}
    if N and spec.is_positive():
        H = build_truncation(spec, N)
        w = np.linalg.eigvalsh(H.entries)
        lm = lambda_max(H, tol)
        hist, edges = np.histogram(w, bins=10, range=(0.0, max(top, float(w[-1]), 1e-300)))
        evidence = {"N": N, "lambda_max": lm,
                    "lambda_max_within": bool(lm <= top * (1 + tol)) if top > 0 else None,
                    "fraction_in_interval": float(np.mean((w >= -tol) & (w <= top * (1 + tol)))),
                    "histogram": {"counts": hist.tolist(), "edges": edges.tolist()},
                    "note": "finite sections have pure point spectra; evidence is non-probative"}
    return SpectrumPrediction(eta0, sigma_ess, sigma_ac, report.to_json(), evidence)
