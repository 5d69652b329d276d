"""Norm bounds, probes and the boundedness / compactness classifier."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import build_truncation, product_values
from .measures import (CoshExpDensity, ExponentialDensity, MeasureError,
                       MeasureSpec, PointMass, PowerDensity, ShiftedPowerDensity,
                       asymptotic_class, laplace_many, validate)
from .quadrature import QuadratureError, integrate_halfline

__all__ = ["SchurBound", "EnvelopeConstants", "ClassificationVerdict", "Witness",
           "schur_bound", "envelope_constants", "a_eps_vector", "a_eps_probe",
           "a_eps_sweep", "unboundedness_witness", "witness_threshold", "classify",
           "e2_lower_bound", "default_shift", "DEFAULT_GRID"]

DEFAULT_GRID = tuple(2 ** k for k in range(1, 61))
VERDICTS = ("Unbounded", "BoundedNonCompact", "Compact", "TraceClass", "Inconclusive")


def _schur_grid(closed_form=True):
    if closed_form:
        return tuple(range(2, 257)) + tuple(2 ** k for k in range(9, 61))
    # quadrature-backed transforms cost ~100x more per value
    return tuple(range(2, 65)) + tuple(2 ** k for k in range(7, 61))


@dataclass(frozen=True)
class SchurBound:
    value: float
    argmax_n: int | None
    col_cap: int
    grid_size: int
    inconclusive: bool = False
    reason: str = ""

    def to_json(self):
        if self.inconclusive:
            return {"value": None, "inconclusive": True, "reason": self.reason}
        return {"value": self.value, "argmax_n": self.argmax_n, "col_cap": self.col_cap,
                "grid_size": self.grid_size, "note": "maximum over a sampled row grid"}


def schur_bound(spec: MeasureSpec, n_grid=None, col_cap: int | None = None,
                tol: float = 1e-10) -> SchurBound:
    """Weighted row-sum bound with weights ``(m ln m)^{-1/2}``.

    For each sampled row ``n`` the column sum is summed to ``col_cap`` and the
    rest is bounded by ``int_{ln cap}^inf mu_hat(y + ln n) / sqrt(y) dy``,
    valid because the summand decreases in ``m``.
    """
    if not spec.is_positive():
        raise MeasureError("schur_bound needs a positive measure")
    if spec.is_zero():
        return SchurBound(0.0, None, 0, 0)
    if asymptotic_class(spec).kind == "diverges":
        return SchurBound(math.inf, None, 0, 0, True, "s*mu_hat(s) diverges; column tails diverge")
    grid = _schur_grid(spec.closed_form) if n_grid is None else tuple(n_grid)
    if col_cap is None:
        col_cap = 200_000 if spec.closed_form else 5_000
    m = np.arange(2, col_cap + 1, dtype=float)
    lm = np.log(m)
    weight = 1.0 / (m * np.sqrt(lm))
    best, arg = -math.inf, None
    for n in grid:
        L = math.log(n)
        vals, errs = laplace_many(spec, lm + L)
        head = math.fsum(vals * weight) + math.fsum(errs * weight)
        a = math.log(col_cap)
        try:
            tail, terr = integrate_halfline(
                lambda y: laplace_many(spec, y + L)[0] / np.sqrt(y), a, tol)
        except QuadratureError as exc:
            return SchurBound(math.inf, n, col_cap, len(grid), True,
                              f"column tail failed at n={n}: {exc}")
        row = math.sqrt(L) * (head + tail + terr)
        if row > best:
            best, arg = row, n
    return SchurBound(best, arg, col_cap, len(grid))


# ---------------------------------------------------------------------------
# envelope constants

@dataclass(frozen=True)
class EnvelopeConstants:
    C: float | None
    D: float | None
    b: float
    grid: tuple
    exact: bool = False
    flags: tuple = ()

    def to_json(self):
        return {"C": self.C, "D": self.D, "b": self.b, "exact": self.exact,
                "grid": [int(n) for n in self.grid], "flags": list(self.flags)}


def default_shift(spec: MeasureSpec) -> float:
    """Shift ``b`` read off the atoms: ``a`` for exponentials, ``alpha`` for ``(1+t)^-alpha``."""
    b = 0.0
    for c, a in spec.terms:
        if c == 0:
            continue
        if isinstance(a, ExponentialDensity):
            b = max(b, a.a)
        elif isinstance(a, ShiftedPowerDensity) and a.sign < 0:
            b = max(b, a.alpha)
        elif isinstance(a, CoshExpDensity):
            b = max(b, a.a + abs(a.omega))
    return b


def _exact_constants(spec: MeasureSpec, b: float):
    """Family constants over all ``n >= 2`` for a single positive atom, else None."""
    if len(spec.terms) != 1:
        return None
    coef, atom = spec.terms[0]
    if coef <= 0:
        return None
    ln2 = math.log(2.0)
    if isinstance(atom, ExponentialDensity) and b >= atom.a:
        # (ln n) / (a + ln n) increases to 1; (b + ln n) / (a + ln n) decreases to 1
        return coef * 1.0, coef * 1.0
    if isinstance(atom, ShiftedPowerDensity) and atom.sign < 0 and b >= atom.alpha:
        # 1/(alpha + s) <= mu_hat(s) <= 1/s, both sharp as s -> inf
        return coef * 1.0, coef * 1.0
    if isinstance(atom, CoshExpDensity) and b >= atom.a + abs(atom.omega):
        return coef * 1.0, coef * 1.0
    if isinstance(atom, PowerDensity) and atom.p == 0:
        return coef * 1.0, coef * 1.0
    if isinstance(atom, PowerDensity) and atom.p > 0:
        # s * Gamma(p+1) s^{-p-1} is largest at s = ln 2 and tends to 0
        return 0.0, coef * math.gamma(atom.p + 1) / ln2 ** atom.p
    if isinstance(atom, PointMass):
        s_star = 1.0 / atom.c
        s = s_star if s_star >= ln2 else ln2
        return 0.0, coef * atom.w * s * math.exp(-atom.c * s)
    return None


def envelope_constants(spec: MeasureSpec, b: float | None = None, n_grid=DEFAULT_GRID,
                       ) -> EnvelopeConstants:
    """``D = max (ln n) mu_hat(ln n)`` and ``C = min (b + ln n) mu_hat(ln n)`` over the grid.

    Single atoms with known monotone behaviour get their exact constants
    (suprema and infima over all ``n >= 2``) instead of grid extrema.
    """
    if not spec.is_positive():
        raise MeasureError("envelope constants need a positive measure")
    if b is None:
        b = default_shift(spec)
    if b < 0:
        raise ValueError("shift b must be >= 0")
    grid = tuple(n_grid)
    exact = _exact_constants(spec, b)
    if exact is not None:
        return EnvelopeConstants(exact[0], exact[1], b, grid, True)
    s = np.log(np.array(grid, dtype=float))
    vals, _ = laplace_many(spec, s)
    D = float(np.max(s * vals))
    C = float(np.min((b + s) * vals))
    flags = ["grid extremum, not a proven supremum/infimum"]
    asym = asymptotic_class(spec)
    if asym.kind == "diverges":
        flags.append("s*mu_hat(s) diverges: no finite D exists beyond the grid")
        D = None
    elif asym.kind == "tends_to" and asym.limit is not None:
        if asym.limit > D:
            flags.append(f"limit {asym.limit:g} exceeds the grid maximum")
            D = asym.limit
        if asym.limit < C:
            C = asym.limit
    elif asym.kind == "unknown":
        flags.append("asymptotics unknown: constants describe the grid only")
    return EnvelopeConstants(C, D, b, grid, False, tuple(flags))


def e2_lower_bound(spec: MeasureSpec) -> float:
    """``<H e_2, e_2> = mu_hat(ln 4) / 2``, a lower bound for the norm."""
    v, _ = laplace_many(spec, np.array([math.log(4.0)]))
    return float(v[0]) / 2.0


# ---------------------------------------------------------------------------
# probes

def a_eps_vector(eps: float, N: int) -> np.ndarray:
    n = np.arange(2, N + 2, dtype=float)
    return n ** -0.5 * np.log(n) ** (-(1 + eps) / 2)


def a_eps_probe(spec: MeasureSpec, eps: float, N: int, H=None) -> float:
    """Rayleigh quotient of the section at ``a_eps(n) = n^{-1/2} (ln n)^{-(1+eps)/2}``."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if H is None:
        H = build_truncation(spec, N)
    x = a_eps_vector(eps, N)
    return float(x @ H.entries @ x) / float(x @ x)


def a_eps_sweep(spec: MeasureSpec, eps_values=(0.5, 0.2, 0.1, 0.05), N_values=None):
    """Quotients along decreasing ``eps`` with a doubling section size."""
    if N_values is None:
        N_values = [256 * 2 ** k for k in range(len(eps_values))]
    out = []
    cache = {}
    for eps, N in zip(eps_values, N_values):
        if N not in cache:
            cache[N] = build_truncation(spec, N)
        out.append({"eps": eps, "N": N, "quotient": a_eps_probe(spec, eps, N, cache[N])})
    return out


def witness_threshold(C_target: float) -> float:
    return 2.0 * C_target * math.atan(1.0 / 6.0)


@dataclass(frozen=True)
class Witness:
    quotient: float
    threshold: float
    passed: bool
    N: int
    method: str
    support: tuple

    def to_json(self):
        return {"quotient": self.quotient, "threshold": self.threshold, "pass": self.passed,
                "N": self.N, "method": self.method, "support": list(self.support)}


def _witness_precondition(spec, C_target, N):
    lo, hi = math.log(N), 4.0 * math.log(N)
    s = np.unique(np.concatenate([np.linspace(lo, hi, 257), np.geomspace(lo, hi, 257)]))
    vals, _ = laplace_many(spec, s)
    bad = np.nonzero(s * vals <= C_target)[0]
    return None if bad.size == 0 else float(np.exp(s[bad[0]]))


def _gl_square(f, lo, hi, n):
    x, w = np.polynomial.legendre.leggauss(n)
    # split into panels so the rule stays well resolved on long intervals
    panels = max(1, int(math.ceil((hi - lo) / 0.5)))
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * x).ravel()
    wt = (half[:, None] * w).ravel()
    total = 0.0
    for i in range(t.size):
        total += wt[i] * float(np.dot(wt, f(t[i], t)))
    return total


def unboundedness_witness(spec: MeasureSpec, C_target: float, N: int | None = None,
                          direct_limit: int = 4000) -> Witness:
    """Test vector ``x_m = (m ln m)^{-1/2}`` on ``[N, N^4]``.

    Passing means ``<Hx, x> / ||x||^2 >= 2 C atan(1/6)``.  Small supports are
    summed directly.  Large ones use the lower bound
    ``int int mu_hat(u+v) / sqrt(uv) du dv`` over ``[ln N, ln(N^4+1)]^2``
    (monotone summand) divided by ``ln 4 + 1/(N ln N)`` (an upper bound for
    ``||x||^2``).
    """
    if C_target <= 0:
        raise ValueError("C_target must be positive")
    if N is None:
        if asymptotic_class(spec).kind != "diverges":
            raise MeasureError("precondition cannot hold for large m: s*mu_hat(s) stays bounded")
        N = 2
        while _witness_precondition(spec, C_target, N) is not None:
            N *= 2
            if N > 2 ** 200:
                raise MeasureError("no N found satisfying the precondition")
    failing = _witness_precondition(spec, C_target, N)
    if failing is not None:
        raise MeasureError(f"precondition mu_hat(ln m) > C/ln m fails near m={failing:.6g}")
    threshold = witness_threshold(C_target)
    top = N ** 4
    if top - N + 1 <= direct_limit:
        m = np.arange(N, top + 1, dtype=np.int64)
        x = 1.0 / np.sqrt(m * np.log(m.astype(float)))
        vals, _ = product_values(spec, np.multiply.outer(m, m))
        root = np.sqrt(np.multiply.outer(m, m).astype(float))
        q = float(x @ (vals / root) @ x) / float(x @ x)
        method = "direct double sum"
    else:
        lo, hi = math.sqrt(math.log(N)), math.sqrt(math.log(top + 1.0))

        def f(u, v):
            return 4.0 * laplace_many(spec, u * u + v * v)[0]

        fine = _gl_square(f, lo, hi, 30)
        coarse = _gl_square(f, lo, hi, 20)
        integral = fine - abs(fine - coarse)
        q = integral / (math.log(4.0) + 1.0 / (N * math.log(N)))
        method = "integral lower bound"
    q = float(q)
    return Witness(q, threshold, bool(q >= threshold), int(N), method, (int(N), int(top)))


# ---------------------------------------------------------------------------
# classifier

@dataclass
class ClassificationVerdict:
    verdict: str
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"verdict": self.verdict, **self.evidence}


def classify(spec: MeasureSpec, series_length: int = 4096, with_schur: bool = True,
             b: float | None = None) -> ClassificationVerdict:
    """Family-exact verdict from the large-``s`` class of ``s * mu_hat(s)``."""
    from .schatten import schatten_series, signed_trace_bound

    report = validate(spec)
    if not report.ok:
        raise MeasureError("; ".join(report.reasons))
    asym = asymptotic_class(spec)
    evidence: dict = {"asymptotic": asym.to_json(), "flags": list(report.flags)}
    positive = spec.is_positive()
    if positive:
        env = envelope_constants(spec, b)
        evidence["envelope"] = {"C": env.C, "D": env.D, "b": env.b, "exact": env.exact}
    if asym.kind == "diverges":
        return ClassificationVerdict("Unbounded", evidence)
    if asym.kind in ("unknown", "bounded_oscillating"):
        return ClassificationVerdict("Inconclusive", evidence)
    if positive and with_schur:
        evidence["schur_bound"] = schur_bound(spec).to_json()
    if asym.limit > 0:
        return ClassificationVerdict("BoundedNonCompact", evidence)
    if positive:
        sv = schatten_series(spec, "trace-cond", length=series_length)
    else:
        sv = signed_trace_bound(spec, length=series_length)
    evidence["series"] = [sv.to_json()]
    verdict = "TraceClass" if sv.verdict == "converges" else "Compact"
    return ClassificationVerdict(verdict, evidence)
