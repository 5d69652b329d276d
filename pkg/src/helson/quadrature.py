"""Special functions and half-line integration with explicit error bounds.

Two integration engines live here:

* :func:`integrate_halfline` -- exp-sinh (double exponential) quadrature on
  ``(a, inf)`` with level doubling.  Handles algebraic endpoint singularities
  at ``a`` and algebraic decay at infinity.
* :func:`panel_laplace` -- composite Gauss-Legendre over panels for
  ``int_0^inf eta(t) exp(-s t) dt`` vectorised over many ``s``.  Used for
  every Laplace transform without a closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

__all__ = [
    "QuadratureError",
    "TailBound",
    "integrate_halfline",
    "integrate_interval",
    "gamma_fn",
    "upper_gamma",
    "zeta_minus_one",
    "k_epsilon",
    "integral_test_tail",
    "panel_laplace",
]

MAX_DOUBLINGS = 20


class QuadratureError(ArithmeticError):
    """Raised when a quadrature fails to reach the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class TailBound:
    """Bracket ``lower <= sum_{k >= alpha} f(k) <= upper``.

    A divergent tail is represented by ``lower = upper = inf``.
    """

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")

    @property
    def diverges(self) -> bool:
        return math.isinf(self.lower)

    def to_json(self):
        if self.diverges:
            return "diverges"
        return {"lower": self.lower, "upper": self.upper}


# ---------------------------------------------------------------------------
# exp-sinh quadrature on (a, inf)

_XMAX = 6.7  # exp(pi/2 sinh 6.7) ~ e^640, still finite in binary64


def _es_nodes(h: float, odd_only: bool):
    n = int(math.ceil(_XMAX / h))
    k = np.arange(-n, n + 1)
    if odd_only:
        k = k[k % 2 != 0]
    x = k * h
    u = 0.5 * math.pi * np.sinh(x)
    with np.errstate(over="ignore"):
        t = np.exp(u)
        w = 0.5 * math.pi * np.cosh(x) * t
    return t, w


def _weighted_sum(f, t, w, a):
    keep = np.isfinite(t) & np.isfinite(w)
    t, w = t[keep], w[keep]
    with np.errstate(all="ignore"):
        vals = np.asarray(f(a + t), dtype=float) * w
    vals = np.where(np.isfinite(vals), vals, 0.0)
    return vals.sum(axis=-1), np.abs(vals[..., [0, -1]]).max(axis=-1)


def integrate_halfline(f: Callable[[np.ndarray], np.ndarray], a: float = 0.0,
                       tol: float = 1e-12, max_doublings: int = MAX_DOUBLINGS):
    """Integrate ``f`` over ``(a, inf)``.

    ``f`` receives a 1-D array of abscissae and may return an array whose last
    axis matches it (so a family of integrands can be integrated at once).
    Returns ``(value, error)``; both have the shape of ``f``'s leading axes.

    The map ``t = a + exp(pi/2 sinh x)`` sends the real line onto ``(a, inf)``;
    the trapezoid rule in ``x`` is refined by halving ``h`` until two
    successive levels differ by less than ``tol / 2``.
    """
    h = 1.0
    t, w = _es_nodes(h, odd_only=False)
    total, ends = _weighted_sum(f, t, w, a)
    prev = total * h
    for level in range(1, max_doublings + 1):
        h *= 0.5
        t, w = _es_nodes(h, odd_only=True)
        s, e = _weighted_sum(f, t, w, a)
        total = total + s
        ends = np.maximum(ends, e)
        cur = total * h
        diff = np.abs(cur - prev)
        err = diff + ends * h
        if level >= 3 and np.all(diff < tol / 2):
            return _scalarise(cur), _scalarise(err)
        prev = cur
    raise QuadratureError(
        f"exp-sinh quadrature did not converge after {max_doublings} doublings",
        estimate=_scalarise(cur), error=_scalarise(err))


def _scalarise(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


_GL_CACHE: dict = {}


def _gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def integrate_interval(f, a: float, b: float, tol: float = 1e-12, depth: int = 40):
    """Adaptive Gauss-Legendre (20 vs 30 nodes) on a finite interval."""
    x20, w20 = _gauss_legendre(20)
    x30, w30 = _gauss_legendre(30)

    def rule(lo, hi):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        i20 = half * np.dot(w20, f(mid + half * x20))
        i30 = half * np.dot(w30, f(mid + half * x30))
        return i30, abs(i30 - i20)

    stack = [(a, b, tol, 0)]
    value = err = 0.0
    while stack:
        lo, hi, t, d = stack.pop()
        v, e = rule(lo, hi)
        if e <= t or d >= depth:
            if e > t:
                raise QuadratureError(f"interval quadrature stalled on [{lo}, {hi}]",
                                      estimate=value + v, error=err + e)
            value += v
            err += e
        else:
            m = 0.5 * (lo + hi)
            stack.append((lo, m, t / 2, d + 1))
            stack.append((m, hi, t / 2, d + 1))
    return value, err


# ---------------------------------------------------------------------------
# special functions

def gamma_fn(x: float) -> float:
    """Gamma function for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def upper_gamma(q, x):
    """Upper incomplete gamma ``Gamma(q, x)`` for ``q > 0`` (vectorised)."""
    return special.gammaincc(q, x) * special.gamma(q)


# Bernoulli numbers B_2, B_4, ... used by the Euler-Maclaurin tail.
_BERNOULLI = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6]


def zeta_minus_one(s: float, tol: float = 1e-15, start: int = 16):
    """``zeta(s) - 1 = sum_{n >= 2} n^-s`` for real ``s > 1``.

    Returns ``(value, error, bracket)`` where ``bracket`` is the integral-test
    :class:`TailBound` on the tail ``sum_{n >= N} n^-s``.  The point estimate
    adds an Euler-Maclaurin correction inside that bracket.
    """
    if not s > 1:
        raise ValueError(f"zeta_minus_one requires s > 1, got {s}")
    N = max(start, 3)
    while True:
        head = math.fsum(n ** -s for n in range(2, N))
        bracket = TailBound(N ** (1 - s) / (s - 1), (N - 1) ** (1 - s) / (s - 1))
        # Euler-Maclaurin: sum_{n>=N} f(n) = int_N^inf f + f(N)/2 - sum B_2k/(2k)! f^(2k-1)(N)
        tail = bracket.lower + 0.5 * N ** -s
        rising = s  # s (s+1) ... (s+2k-2)
        fact = 2.0
        last = 0.0
        for k, b in enumerate(_BERNOULLI, start=1):
            term = b / fact * rising * N ** (-s - 2 * k + 1)
            tail += term
            last = abs(term)
            rising *= (s + 2 * k - 1) * (s + 2 * k)
            fact *= (2 * k + 1) * (2 * k + 2)
        err = last + 4 * np.finfo(float).eps * (head + tail)
        if err <= tol or N > 1 << 20:
            return head + tail, float(err), bracket
        N *= 2


def k_epsilon(eps: float, tol: float = 1e-12):
    """``int_0^inf t^{-(1+eps)/2} / (1+t) dt`` in closed form and by quadrature."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    closed = math.pi / math.sin(math.pi * (1 - eps) / 2)
    q = -(1 + eps) / 2
    quad, _ = integrate_halfline(lambda t: t ** q / (1 + t), 0.0, tol)
    return closed, quad


def integral_test_tail(f: Callable, alpha: int, antiderivative: Optional[Callable] = None,
                       tol: float = 1e-12) -> TailBound:
    """Bracket ``sum_{k >= alpha} f(k)`` for nonincreasing nonnegative ``f``.

    With ``antiderivative`` ``F`` (``F(math.inf)`` may be ``inf`` to signal a
    divergent integral) the bracket is exact; otherwise both integrals are
    computed by :func:`integrate_halfline` and a failure to converge is read
    as divergence.
    """
    if alpha < 2:
        raise ValueError("alpha must be an integer >= 2")
    if antiderivative is not None:
        top = antiderivative(math.inf)
        if math.isinf(top):
            return TailBound(math.inf, math.inf)
        return TailBound(top - antiderivative(alpha), top - antiderivative(alpha - 1))
    try:
        lower, e1 = integrate_halfline(f, float(alpha), tol)
        upper, e2 = integrate_halfline(f, float(alpha - 1), tol)
    except QuadratureError:
        return TailBound(math.inf, math.inf)
    return TailBound(max(lower - e1, 0.0), upper + e2)


# ---------------------------------------------------------------------------
# composite Gauss-Legendre Laplace transforms

_LO_RULE, _HI_RULE = 20, 30
_BIN_SPLIT = 4  # s-bins are [2^(k/4), 2^((k+1)/4))
_ROW_BUDGET = 4_000_000


def _panel_edges(T: float, width: float, breaks: Sequence[float], grade: int):
    edges = [0.0]
    first = min(width, T)
    edges.extend(first * 2.0 ** -np.arange(grade, 0, -1))
    pts = sorted({b for b in breaks if first < b < T} | {first, T})
    for lo, hi in zip([first] + pts[:-1], pts):
        if hi <= lo:
            continue
        n = max(1, int(math.ceil((hi - lo) / width)))
        edges.extend(np.linspace(lo, hi, n + 1)[1:])
    return np.unique(np.asarray(edges))


def _panel_nodes(edges: np.ndarray, n: int):
    x, w = _gauss_legendre(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    return t, ww


def panel_laplace(density: Callable[[np.ndarray], np.ndarray], s: np.ndarray, *,
                  tail_bound: Callable[[float, float], float],
                  breaks: Callable[[float], Sequence[float]] = lambda T: (),
                  tol: float = 1e-13, max_level: int = 4, grade: int = 40):
    """``int_0^inf density(t) exp(-s t) dt`` for each entry of ``s``.

    ``tail_bound(s, T)`` must bound ``int_T^inf |density| e^{-st}`` and be
    nonincreasing in both arguments.  ``breaks(T)`` lists kinks of the density
    in ``(0, T)``.  The panel layout depends only on which dyadic bin ``s``
    falls in, so a given ``s`` always yields the same bits regardless of the
    batch it was evaluated with.

    Returns ``(values, errors)`` arrays shaped like ``s``.
    """
    s = np.asarray(s, dtype=float)
    flat = s.ravel()
    values = np.empty_like(flat)
    errors = np.empty_like(flat)
    if flat.size == 0:
        return values.reshape(s.shape), errors.reshape(s.shape)
    if np.any(flat <= 0):
        raise ValueError("panel_laplace requires s > 0")
    bins = np.floor(_BIN_SPLIT * np.log2(flat)).astype(int)
    for b in np.unique(bins):
        idx = np.nonzero(bins == b)[0]
        pending = idx
        for level in range(max_level + 1):
            v, e = _panel_bin(density, flat[pending], b, level, tail_bound, breaks, tol, grade)
            values[pending] = v
            errors[pending] = e
            bad = e > tol
            if not bad.any():
                break
            pending = pending[bad]
        else:
            worst = int(pending[np.argmax(errors[pending])])
            raise QuadratureError(
                f"panel quadrature missed tol={tol:g} at s={flat[worst]:.6g} "
                f"(achieved {errors[worst]:.3g})",
                estimate=float(values[worst]), error=float(errors[worst]))
    return values.reshape(s.shape), errors.reshape(s.shape)


def _horizon(tail_bound, s_lo: float, target: float) -> float:
    # e^{-st} lives on the 1/s scale; start there and make the target
    # relative to the local size of the transform, so huge s is neither
    # truncated too early nor covered by an absurd number of panels
    T = min(1.0, 1.0 / s_lo)
    scale = float(tail_bound(s_lo, T))
    if math.isfinite(scale) and scale > 0:
        target *= min(1.0, scale)
    while float(tail_bound(s_lo, T)) > target:
        T *= 1.25
        if T > 1e7:
            raise QuadratureError(f"tail bound never drops below {target:g} at s={s_lo:g}")
    return T


def _panel_bin(density, s, b, level, tail_bound, breaks, tol, grade):
    s_lo = 2.0 ** (b / _BIN_SPLIT)
    s_hi = 2.0 ** ((b + 1) / _BIN_SPLIT)
    T = _horizon(tail_bound, s_lo, tol / 8)
    width = min(1.0, 4.0 / s_hi) / 2 ** level
    edges = _panel_edges(T, width, breaks(T), grade=grade + 8 * level)
    npan = edges.size - 1
    t_lo, w_lo = _panel_nodes(edges, _LO_RULE)
    t_hi, w_hi = _panel_nodes(edges, _HI_RULE)
    with np.errstate(all="ignore"):
        g_lo = w_lo * density(t_lo)
        g_hi = w_hi * density(t_hi)
    out_v = np.empty_like(s)
    out_e = np.empty_like(s)
    rows = max(1, _ROW_BUDGET // t_hi.size)
    for start in range(0, s.size, rows):
        sl = s[start:start + rows, None]
        p_lo = (np.exp(-sl * t_lo) * g_lo).reshape(-1, npan, _LO_RULE).sum(-1)
        p_hi = (np.exp(-sl * t_hi) * g_hi).reshape(-1, npan, _HI_RULE).sum(-1)
        out_v[start:start + rows] = p_hi.sum(-1)
        out_e[start:start + rows] = np.abs(p_hi - p_lo).sum(-1)
    tb = np.asarray(tail_bound(s, T), dtype=float)
    return out_v, out_e + tb + 8 * np.finfo(float).eps * np.abs(out_v)
