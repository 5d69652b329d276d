"""Measures on (0, inf) and their Laplace transforms.

A :class:`MeasureSpec` is a finite linear combination of atoms drawn from a
small catalogue of families.  Each atom knows its Laplace transform (closed
form or via :func:`helson.quadrature.panel_laplace`), an envelope for tails,
its density near zero and the large-``s`` behaviour of ``s * mu_hat(s)``.

All objects are immutable.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from typing import ClassVar, Optional

import numpy as np
from scipy import optimize, special

from .quadrature import QuadratureError, panel_laplace, upper_gamma

LN2 = math.log(2.0)
LAPLACE_TOL = 1e-13

__all__ = [
    "LN2", "MeasureError", "Atom", "PointMass", "ExponentialDensity", "PowerDensity",
    "ShiftedPowerDensity", "CoshExpDensity", "LogDensity", "ExpPowerDensity",
    "OscillatoryDensity", "TabulatedDensity", "DensityPart", "MeasureSpec",
    "LaplaceValue", "Admissibility", "Asymptotic", "validate", "laplace", "laplace_many",
    "hahn_decompose", "combine", "asymptotic_class", "tail_integral", "zero_measure",
]


class MeasureError(ValueError):
    """Inadmissible measure or out-of-domain evaluation."""


def _f(x):
    return float(x)


@dataclass(frozen=True)
class Asymptotic:
    """Behaviour of ``s * mu_hat(s)`` as ``s -> inf``.

    ``kind`` is one of ``diverges``, ``tends_to``, ``bounded_oscillating``,
    ``unknown``.  A divergent class grows like ``coefficient * s**exponent``.
    """

    kind: str
    limit: Optional[float] = None
    coefficient: Optional[float] = None
    exponent: Optional[float] = None
    trend: tuple = ()

    def to_json(self):
        out = {"kind": self.kind}
        if self.limit is not None:
            out["limit"] = self.limit
        if self.kind == "diverges":
            out["rate"] = f"{self.coefficient:.12g} * s^{self.exponent:.12g}"
            out["coefficient"] = self.coefficient
            out["exponent"] = self.exponent
        if self.trend:
            out["trend"] = [list(p) for p in self.trend]
        return out


# ---------------------------------------------------------------------------
# atoms

class Atom:
    kind: ClassVar[str]
    closed_form: ClassVar[bool] = False
    sign: ClassVar[int] = 1  # +1 nonnegative measure, 0 signed

    # -- transform -----------------------------------------------------
    def transform(self, s: np.ndarray, tol: float = LAPLACE_TOL):
        """Vectorised ``(values, abs_errors)`` of the Laplace transform."""
        return panel_laplace(self.density, s, tail_bound=self.tail_bound,
                             breaks=self.breaks, tol=tol)

    def density(self, t):
        raise NotImplementedError

    def envelope(self, t):
        """Pointwise upper bound for ``|density|``."""
        return np.abs(self.density(t))

    def tail_bound(self, s, T):
        raise NotImplementedError

    def breaks(self, T):
        return ()

    def eta_zero(self) -> float:
        """Right limit of the density at 0."""
        raise NotImplementedError

    def asymptotic(self) -> Asymptotic:
        return Asymptotic("tends_to", limit=self.eta_zero())

    def problems(self) -> list:
        return []

    def flags(self) -> list:
        return []

    def tail_integral(self, Y: float) -> float:
        """``int_Y^inf mu_hat(y) dy = int e^{-Yt} density(t) / t dt``."""
        if self.eta_zero() != 0:
            return math.inf
        v, _ = panel_laplace(lambda t: self.density(t) / t, np.array([Y]),
                             tail_bound=lambda s, T: self.tail_bound(s, T) / T,
                             breaks=self.breaks, tol=1e-12, grade=100)
        return float(v[0])

    # -- json ----------------------------------------------------------
    def params(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params()}

    def label(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.kind}({args})"


@dataclass(frozen=True)
class PointMass(Atom):
    """``w * delta_c``."""

    c: float
    w: float = 1.0
    kind: ClassVar[str] = "point"
    closed_form: ClassVar[bool] = True

    def transform(self, s, tol=LAPLACE_TOL):
        s = np.asarray(s, dtype=float)
        return self.w * np.exp(-self.c * s), np.zeros_like(s)

    def density(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def tail_bound(self, s, T):
        return np.zeros_like(np.asarray(s, dtype=float))

    def eta_zero(self):
        return 0.0

    def problems(self):
        if self.c == 0:
            return ["c=0 point mass"]
        if not self.c > 0:
            return [f"point mass location c={self.c} must be positive"]
        if not self.w > 0:
            return [f"point mass weight w={self.w} must be positive"]
        return []

    def tail_integral(self, Y):
        return self.w * math.exp(-self.c * Y) / self.c


@dataclass(frozen=True)
class ExponentialDensity(Atom):
    """``e^{-a t} dt``."""

    a: float
    kind: ClassVar[str] = "exp"
    closed_form: ClassVar[bool] = True

    def transform(self, s, tol=LAPLACE_TOL):
        s = np.asarray(s, dtype=float)
        return 1.0 / (self.a + s), np.zeros_like(s)

    def density(self, t):
        return np.exp(-self.a * np.asarray(t, dtype=float))

    def tail_bound(self, s, T):
        r = self.a + np.asarray(s, dtype=float)
        return np.exp(-r * T) / r

    def eta_zero(self):
        return 1.0

    def problems(self):
        return [] if self.a >= 0 else [f"exponential rate a={self.a} must be >= 0"]


@dataclass(frozen=True)
class PowerDensity(Atom):
    """``t^p dt`` for ``p > -1``; ``p = 0`` is Lebesgue measure."""

    p: float
    kind: ClassVar[str] = "power"
    closed_form: ClassVar[bool] = True

    def transform(self, s, tol=LAPLACE_TOL):
        s = np.asarray(s, dtype=float)
        return special.gamma(self.p + 1) / s ** (self.p + 1), np.zeros_like(s)

    def density(self, t):
        return np.asarray(t, dtype=float) ** self.p

    def tail_bound(self, s, T):
        s = np.asarray(s, dtype=float)
        return upper_gamma(self.p + 1, s * T) / s ** (self.p + 1)

    def eta_zero(self):
        if self.p > 0:
            return 0.0
        return 1.0 if self.p == 0 else math.inf

    def asymptotic(self):
        if self.p < 0:
            return Asymptotic("diverges", coefficient=math.gamma(1 + self.p),
                              exponent=-self.p)
        return Asymptotic("tends_to", limit=self.eta_zero())

    def problems(self):
        if not self.p > -1:
            return [f"divergent at ln 2: power density p={self.p} <= -1"]
        return []

    def flags(self):
        return ["unbounded-family"] if -1 < self.p < 0 else []

    def tail_integral(self, Y):
        if self.p <= 0:
            return math.inf
        return math.gamma(self.p) / Y ** self.p


@dataclass(frozen=True)
class ShiftedPowerDensity(Atom):
    """``(1+t)^{sign * alpha} dt``."""

    alpha: float
    sign: int = -1
    kind: ClassVar[str] = "shifted_power"

    def density(self, t):
        return (1.0 + np.asarray(t, dtype=float)) ** (self.sign * self.alpha)

    def tail_bound(self, s, T):
        s = np.asarray(s, dtype=float)
        if self.sign < 0:
            return (1 + T) ** -self.alpha * np.exp(-s * T) / s
        rate = s - self.alpha / (1 + T)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (1 + T) ** self.alpha * np.exp(-s * T) / rate
        return np.where(rate > 0, out, np.inf)

    def eta_zero(self):
        return 1.0

    def problems(self):
        out = []
        if not self.alpha >= 0:
            out.append(f"shifted power alpha={self.alpha} must be >= 0")
        if self.sign not in (1, -1):
            out.append(f"shifted power sign={self.sign} must be +1 or -1")
        return out

    # -- field "sign" clashes with the class-level measure sign; keep the
    # -- measure sign positive explicitly.
    @property
    def measure_sign(self):
        return 1


@dataclass(frozen=True)
class CoshExpDensity(Atom):
    """``e^{-a t} cosh(omega t) dt`` with ``a >= |omega|``."""

    a: float
    omega: float
    kind: ClassVar[str] = "cosh_exp"
    closed_form: ClassVar[bool] = True

    def transform(self, s, tol=LAPLACE_TOL):
        s = np.asarray(s, dtype=float)
        return 0.5 * (1.0 / (self.a - self.omega + s) + 1.0 / (self.a + self.omega + s)), \
            np.zeros_like(s)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-self.a * t) * np.cosh(self.omega * t)

    def tail_bound(self, s, T):
        s = np.asarray(s, dtype=float)
        r1 = self.a - self.omega + s
        r2 = self.a + self.omega + s
        return 0.5 * (np.exp(-r1 * T) / r1 + np.exp(-r2 * T) / r2)

    def eta_zero(self):
        return 1.0

    def problems(self):
        if not (self.a >= 0 and self.a >= abs(self.omega)):
            return [f"cosh-exp requires a >= |omega| (a={self.a}, omega={self.omega})"]
        return []


@dataclass(frozen=True)
class LogDensity(Atom):
    """``ln(1+t) dt``."""

    kind: ClassVar[str] = "log"

    def density(self, t):
        return np.log1p(np.asarray(t, dtype=float))

    def tail_bound(self, s, T):
        s = np.asarray(s, dtype=float)
        return np.exp(-s * T) * (math.log1p(T) / s + 1.0 / ((1 + T) * s * s))

    def eta_zero(self):
        return 0.0


@dataclass(frozen=True)
class ExpPowerDensity(Atom):
    """``exp(a t^p) dt`` with ``a > 0`` and ``0 < p < 1``."""

    a: float
    p: float
    kind: ClassVar[str] = "exp_power"

    def density(self, t):
        return np.exp(self.a * np.asarray(t, dtype=float) ** self.p)

    def tail_bound(self, s, T):
        s = np.asarray(s, dtype=float)
        rate = s - self.a * self.p * T ** (self.p - 1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.exp(self.a * T ** self.p - s * T) / rate
        return np.where(rate > 0, out, np.inf)

    def eta_zero(self):
        return 1.0

    def problems(self):
        out = []
        if not self.a > 0:
            out.append(f"exp-power a={self.a} must be > 0")
        if not 0 < self.p < 1:
            out.append(f"exp-power p={self.p} must lie in (0, 1)")
        return out


@dataclass(frozen=True)
class OscillatoryDensity(Atom):
    """``t^p sin(t) dt`` or ``t^p cos(t) dt`` (signed)."""

    p: float
    trig: str = "sin"
    kind: ClassVar[str] = "osc"
    sign: ClassVar[int] = 0

    def _trig(self, t):
        return np.sin(t) if self.trig == "sin" else np.cos(t)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        return t ** self.p * self._trig(t)

    def envelope(self, t):
        return np.asarray(t, dtype=float) ** self.p

    def zeros(self, T):
        offset = 0.0 if self.trig == "sin" else 0.5 * math.pi
        k = np.arange(0, int(T / math.pi) + 2)
        z = offset + k * math.pi
        return z[(z > 0) & (z < T)]

    def breaks(self, T):
        return tuple(self.zeros(T))

    def tail_bound(self, s, T):
        s = np.asarray(s, dtype=float)
        return upper_gamma(self.p + 1, s * T) / s ** (self.p + 1)

    def eta_zero(self):
        return 0.0

    def problems(self):
        out = []
        if not self.p > 0:
            out.append(f"oscillatory density p={self.p} must be > 0")
        if self.trig not in ("sin", "cos"):
            out.append(f"oscillatory kind {self.trig!r} must be 'sin' or 'cos'")
        return out


@dataclass(frozen=True)
class TabulatedDensity(Atom):
    """Piecewise-linear density through ``samples`` with exponential tail.

    The density is zero below the first sample, linear between samples and
    ``A * exp(-lam * t)`` beyond the last one.
    """

    samples: tuple
    tail_A: Optional[float] = None
    tail_lambda: Optional[float] = None
    kind: ClassVar[str] = "tabulated"

    def __post_init__(self):
        object.__setattr__(self, "samples",
                           tuple((float(t), float(e)) for t, e in self.samples))

    @property
    def sign(self):  # type: ignore[override]
        positive = all(e >= 0 for _, e in self.samples) and (self.tail_A or 0) >= 0
        return 1 if positive else 0

    @property
    def _t(self):
        return np.array([t for t, _ in self.samples])

    @property
    def _e(self):
        return np.array([e for _, e in self.samples])

    def density(self, t):
        t = np.asarray(t, dtype=float)
        ts, es = self._t, self._e
        out = np.interp(t, ts, es)
        out = np.where(t < ts[0], 0.0, out)
        tail = (self.tail_A or 0.0) * np.exp(-(self.tail_lambda or 0.0) * t)
        return np.where(t > ts[-1], tail, out)

    def breaks(self, T):
        return tuple(t for t, _ in self.samples if 0 < t < T)

    def tail_bound(self, s, T):
        s = np.asarray(s, dtype=float)
        A = abs(self.tail_A or 0.0)
        lam = self.tail_lambda or 0.0
        tL = self.samples[-1][0]
        r = lam + s
        if T >= tL:
            return A * np.exp(-r * T) / r
        peak = float(np.max(np.abs(self._e)))
        return peak * np.exp(-s * T) / s + A * np.exp(-r * tL) / r

    def eta_zero(self):
        t0, e0 = self.samples[0]
        return e0 if t0 == 0 else 0.0

    def asymptotic(self):
        return Asymptotic("unknown")

    def problems(self):
        out = []
        if len(self.samples) < 2:
            out.append("tabulated density needs at least two samples")
            return out
        ts, es = self._t, self._e
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(es))):
            out.append("tabulated density has non-finite samples")
        if np.any(np.diff(ts) <= 0):
            out.append("tabulated sample abscissae must be strictly increasing")
        if ts[0] < 0:
            out.append("tabulated samples must start at t >= 0")
        if self.tail_A is None or self.tail_lambda is None:
            out.append("tabulated density lacks an exponential-decay tail descriptor")
        elif not self.tail_lambda + LN2 > 0:
            out.append(f"divergent at ln 2: tail rate {self.tail_lambda} <= -ln 2")
        return out

    def params(self):
        return {"samples": [list(p) for p in self.samples],
                "tail": None if self.tail_A is None else
                {"A": self.tail_A, "lambda": self.tail_lambda}}


@dataclass(frozen=True)
class DensityPart(Atom):
    """Positive part, negative part or modulus of a signed combined density.

    ``terms`` are ``(coef, atom)`` pairs of density atoms; ``part`` is one of
    ``plus`` (``max(eta, 0)``), ``minus`` (``max(-eta, 0)``) or ``abs``.
    """

    terms: tuple
    part: str
    kind: ClassVar[str] = "part"

    def _eta(self, t):
        t = np.asarray(t, dtype=float)
        return sum(c * a.density(t) for c, a in self.terms)

    def density(self, t):
        eta = self._eta(t)
        if self.part == "plus":
            return np.maximum(eta, 0.0)
        if self.part == "minus":
            return np.maximum(-eta, 0.0)
        return np.abs(eta)

    def envelope(self, t):
        return sum(abs(c) * a.envelope(t) for c, a in self.terms)

    def tail_bound(self, s, T):
        return sum(abs(c) * a.tail_bound(s, T) for c, a in self.terms)

    def sign_changes(self, T):
        atoms = [a for _, a in self.terms]
        if atoms and all(isinstance(a, OscillatoryDensity) for a in atoms) \
                and len({a.trig for a in atoms}) == 1:
            # common factor sin t (or cos t) times a positive combination of t^p
            probe = self._eta(np.array([1e-3, 1.0, 2.0]))
            return tuple(atoms[0].zeros(T)) if np.any(probe != 0) else ()
        grid = np.unique(np.concatenate([np.geomspace(1e-9, 1.0, 200),
                                         np.arange(1.0, T, 0.05), [T]]))
        vals = self._eta(grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        return tuple(optimize.brentq(lambda x: float(self._eta(np.array([x]))[0]),
                                     grid[i], grid[i + 1], xtol=1e-15)
                     for i in idx)

    def breaks(self, T):
        pts = set(self.sign_changes(T))
        for _, a in self.terms:
            pts.update(a.breaks(T))
        return tuple(sorted(pts))

    def eta_zero(self):
        eta0 = sum(c * a.eta_zero() for c, a in self.terms)
        if self.part == "plus":
            return max(eta0, 0.0)
        if self.part == "minus":
            return max(-eta0, 0.0)
        return abs(eta0)

    def params(self):
        return {"part": self.part,
                "terms": [{"coef": c, "atom": a.to_json()} for c, a in self.terms]}


_ATOMS = {cls.kind: cls for cls in (PointMass, ExponentialDensity, PowerDensity,
                                    ShiftedPowerDensity, CoshExpDensity, LogDensity,
                                    ExpPowerDensity, OscillatoryDensity,
                                    TabulatedDensity, DensityPart)}


def _measure_sign(atom: Atom) -> int:
    return 1 if isinstance(atom, ShiftedPowerDensity) else atom.sign


def atom_from_json(doc: dict) -> Atom:
    doc = dict(doc)
    kind = doc.pop("kind", None)
    if kind not in _ATOMS:
        raise MeasureError(f"unknown atom kind {kind!r}")
    if kind == "tabulated":
        tail = doc.get("tail")
        return TabulatedDensity(tuple(map(tuple, doc["samples"])),
                                None if tail is None else _f(tail["A"]),
                                None if tail is None else _f(tail["lambda"]))
    if kind == "part":
        return DensityPart(tuple((_f(t["coef"]), atom_from_json(t["atom"]))
                                 for t in doc["terms"]), doc["part"])
    if kind == "osc":
        return OscillatoryDensity(_f(doc["p"]), doc.get("trig", "sin"))
    if kind == "shifted_power":
        return ShiftedPowerDensity(_f(doc["alpha"]), int(doc.get("sign", -1)))
    try:
        return _ATOMS[kind](**{k: _f(v) for k, v in doc.items()})
    except TypeError as exc:
        raise MeasureError(f"bad parameters for {kind!r}: {exc}") from None


# ---------------------------------------------------------------------------
# specs

@dataclass(frozen=True)
class LaplaceValue:
    value: float
    abs_error_bound: float
    method: str  # "closed-form" | "quadrature"


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reasons: tuple = ()
    flags: tuple = ()

    def to_json(self):
        return {"ok": self.ok, "reasons": list(self.reasons), "flags": list(self.flags)}


@dataclass(frozen=True)
class MeasureSpec:
    """``sum coef_i * atom_i``; an empty spec is the zero measure."""

    terms: tuple = field(default_factory=tuple)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((float(c), a) for c, a in self.terms))

    @classmethod
    def of(cls, *atoms: Atom, name: str = "") -> "MeasureSpec":
        return cls(tuple((1.0, a) for a in atoms), name=name)

    def is_positive(self) -> bool:
        return all(c * _measure_sign(a) > 0 or c == 0 for c, a in self.terms)

    def is_zero(self) -> bool:
        return all(c == 0 for c, _ in self.terms)

    @property
    def closed_form(self) -> bool:
        return all(a.closed_form for _, a in self.terms)

    def scaled(self, factor: float) -> "MeasureSpec":
        return MeasureSpec(tuple((factor * c, a) for c, a in self.terms), name=self.name)

    def __add__(self, other: "MeasureSpec") -> "MeasureSpec":
        return MeasureSpec(self.terms + other.terms)

    def __sub__(self, other: "MeasureSpec") -> "MeasureSpec":
        return self + other.scaled(-1.0)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, a in self.terms:
            if not isinstance(a, PointMass):
                out = out + c * a.density(t)
        return out

    def eta_zero(self) -> float:
        return math.fsum(c * a.eta_zero() for c, a in self.terms
                         if not isinstance(a, PointMass))

    def has_point_masses(self) -> bool:
        return any(isinstance(a, PointMass) and c != 0 for c, a in self.terms)

    def to_json(self) -> dict:
        out = {"terms": [{"coef": c, "atom": a.to_json()} for c, a in self.terms]}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict, name: str = "") -> "MeasureSpec":
        if not isinstance(doc, dict) or "terms" not in doc:
            raise MeasureError("measure document must be an object with a 'terms' list")
        terms = []
        for t in doc["terms"]:
            if set(t) - {"coef", "atom"}:
                raise MeasureError(f"unknown term keys {sorted(set(t) - {'coef', 'atom'})}")
            terms.append((_f(t.get("coef", 1.0)), atom_from_json(t["atom"])))
        return cls(tuple(terms), name=name)

    @classmethod
    def load(cls, path) -> "MeasureSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh), name=str(path))


def zero_measure() -> MeasureSpec:
    return MeasureSpec(())


def validate(spec: MeasureSpec) -> Admissibility:
    """Admissibility: every atom finite at ``s = ln 2`` and no mass at 0."""
    reasons, flags = [], []
    for i, (c, a) in enumerate(spec.terms):
        if not math.isfinite(c):
            reasons.append(f"term {i}: non-finite coefficient {c}")
        for p in a.problems():
            reasons.append(f"term {i} ({a.kind}): {p}")
        for fl in a.flags():
            flags.append(f"term {i} ({a.kind}): {fl}")
        for k, v in a.params().items():
            if isinstance(v, float) and not math.isfinite(v):
                reasons.append(f"term {i} ({a.kind}): non-finite parameter {k}={v}")
    return Admissibility(not reasons, tuple(reasons), tuple(flags))


def _check_domain(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < LN2 * (1 - 1e-15)) or np.any(~np.isfinite(s)):
        raise MeasureError("Laplace transform is only evaluated for finite s >= ln 2")
    return s


def laplace_many(spec: MeasureSpec, s, tol: float = LAPLACE_TOL):
    """Vectorised Laplace transform: returns ``(values, abs_errors)``."""
    s = _check_domain(s)
    values = np.zeros_like(s)
    errors = np.zeros_like(s)
    for c, a in spec.terms:
        if c == 0:
            continue
        v, e = a.transform(s, tol)
        values = values + c * v
        errors = errors + abs(c) * e
    return values, errors


def laplace(spec: MeasureSpec, s: float, tol: float = LAPLACE_TOL) -> LaplaceValue:
    """``mu_hat(s)`` with an absolute error bound (0 for closed forms)."""
    v, e = laplace_many(spec, np.array([float(s)]), tol)
    method = "closed-form" if spec.closed_form else "quadrature"
    return LaplaceValue(float(v[0]), float(e[0]), method)


def combine(mu1: MeasureSpec, mu2: MeasureSpec, r: float) -> MeasureSpec:
    """Convex combination ``r mu1 + (1 - r) mu2``."""
    if not 0 <= r <= 1:
        raise MeasureError(f"r must lie in [0, 1], got {r}")
    if r == 1:
        return mu1
    if r == 0:
        return mu2
    return MeasureSpec(tuple((r * c, a) for c, a in mu1.terms)
                       + tuple(((1 - r) * c, a) for c, a in mu2.terms))


def hahn_decompose(spec: MeasureSpec):
    """Split a signed spec into ``(mu_plus, mu_minus, total_variation)``.

    Point masses are netted per location.  Densities are summed into one
    signed density whose positive and negative parts become
    :class:`DensityPart` atoms, split exactly at the sign changes.
    """
    if spec.is_positive():
        return spec, zero_measure(), spec
    masses: dict = {}
    dens = []
    for c, a in spec.terms:
        if c == 0:
            continue
        if isinstance(a, PointMass):
            masses[a.c] = masses.get(a.c, 0.0) + c * a.w
        else:
            dens.append((c, a))
    plus, minus = [], []
    for loc, w in sorted(masses.items()):
        if w > 0:
            plus.append((1.0, PointMass(loc, w)))
        elif w < 0:
            minus.append((1.0, PointMass(loc, -w)))
    total = plus + minus
    if dens:
        if all(c * _measure_sign(a) > 0 for c, a in dens):
            plus.extend(dens)
            total.extend(dens)
        elif all(c * _measure_sign(a) < 0 for c, a in dens):
            minus.extend((-c, a) for c, a in dens)
            total.extend((-c, a) for c, a in dens)
        else:
            t = tuple(dens)
            plus.append((1.0, DensityPart(t, "plus")))
            minus.append((1.0, DensityPart(t, "minus")))
            total.append((1.0, DensityPart(t, "abs")))
    return MeasureSpec(tuple(plus)), MeasureSpec(tuple(minus)), MeasureSpec(tuple(total))


def _trend(spec: MeasureSpec):
    grid = [2.0 ** k for k in range(0, 8)]
    vals, _ = laplace_many(spec, np.array(grid))
    return tuple((s, s * v) for s, v in zip(grid, vals))


def asymptotic_class(spec: MeasureSpec) -> Asymptotic:
    """Symbolic large-``s`` class of ``s * mu_hat(s)`` with mixture sum rules."""
    limit = 0.0
    divergent = {}
    unknown = False
    for c, a in spec.terms:
        if c == 0:
            continue
        cls = a.asymptotic()
        if cls.kind == "tends_to":
            limit += c * cls.limit
        elif cls.kind == "diverges":
            divergent[cls.exponent] = divergent.get(cls.exponent, 0.0) + c * cls.coefficient
        else:
            unknown = True
    if unknown:
        try:
            trend = _trend(spec)
        except (QuadratureError, MeasureError):
            trend = ()
        return Asymptotic("unknown", trend=trend)
    if divergent:
        top = max(divergent)
        coef = divergent[top]
        if coef > 0:
            return Asymptotic("diverges", coefficient=coef, exponent=top)
        return Asymptotic("unknown")
    return Asymptotic("tends_to", limit=limit)


def tail_integral(spec: MeasureSpec, Y: float) -> float:
    """``int_Y^inf mu_hat(y) dy`` (``inf`` when divergent).

    Atoms whose densities vanish at 0 are handled one by one; the rest must
    cancel at 0 and are integrated as a single combined density.
    """
    total = 0.0
    group = []
    for c, a in spec.terms:
        if c == 0:
            continue
        if a.eta_zero() == 0:
            total += c * a.tail_integral(Y)
        else:
            group.append((c, a))
    if group:
        eta0 = sum(c * a.eta_zero() for c, a in group)
        scale = sum(abs(c * a.eta_zero()) for c, a in group)
        if math.isnan(eta0) or abs(eta0) > 1e-12 * scale:
            return math.copysign(math.inf, eta0) if not math.isnan(eta0) else math.inf
        part = DensityPart(tuple(group), "plus")

        def signed(t):
            return part._eta(t) / t

        v, _ = panel_laplace(signed, np.array([Y]),
                             tail_bound=lambda s, T: part.tail_bound(s, T) / T,
                             breaks=lambda T: tuple(b for _, a in group for b in a.breaks(T)),
                             tol=1e-12, grade=100)
        total += float(v[0])
    return total
