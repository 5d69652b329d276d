"""Finite sections of Helson matrices.

Logical indices start at 2 everywhere in the public API: row ``i`` of a stored
array holds index ``m = i + 2``.
"""
from __future__ import annotations

import io
import math
import struct
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .measures import MeasureError, MeasureSpec, PointMass, laplace_many, validate
from .quadrature import panel_laplace, zeta_minus_one

OFFSET = 2
MAGIC = b"HELS1"

__all__ = ["HelsonTruncation", "RankOneGram", "build_truncation", "entry", "product_values",
           "rank_one_gram", "quadratic_form", "bilinear_form", "dual_kernel",
           "save_binary", "load_binary", "to_csv", "from_csv", "indices"]


def indices(N: int) -> np.ndarray:
    return np.arange(OFFSET, N + OFFSET, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class HelsonTruncation:
    """``N x N`` section over indices ``2..N+1``."""

    N: int
    entries: np.ndarray
    spec: MeasureSpec | None = None
    entry_error_bound: float = 0.0

    def __post_init__(self):
        self.entries.setflags(write=False)

    def __getitem__(self, mn):
        m, n = mn
        if not (OFFSET <= m < self.N + OFFSET and OFFSET <= n < self.N + OFFSET):
            raise IndexError(f"({m}, {n}) outside indices {OFFSET}..{self.N + OFFSET - 1}")
        return float(self.entries[m - OFFSET, n - OFFSET])

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries)

    def check(self):
        H = self.entries
        if not np.array_equal(H, H.T):
            raise AssertionError("truncation is not exactly symmetric")
        if not np.all(np.isfinite(H)):
            raise AssertionError("truncation has non-finite entries")
        if self.spec is not None and self.spec.is_positive() and np.any(H < 0):
            raise AssertionError("positive measure produced a negative entry")
        return self


def _require_admissible(spec: MeasureSpec):
    report = validate(spec)
    if not report.ok:
        raise MeasureError("; ".join(report.reasons))


def product_values(spec: MeasureSpec, products: np.ndarray, tol: float = 1e-13):
    """``mu_hat(ln p)`` for integer products ``p`` (each evaluated once)."""
    products = np.asarray(products, dtype=np.int64)
    uniq, inv = np.unique(products, return_inverse=True)
    vals, errs = laplace_many(spec, np.log(uniq.astype(float)), tol)
    return vals[inv].reshape(products.shape), errs[inv].reshape(products.shape)


def build_truncation(spec: MeasureSpec, N: int, tol: float = 1e-13) -> HelsonTruncation:
    """Dense section ``(mu_hat(ln mn) / sqrt(mn))`` for ``m, n = 2..N+1``.

    Every distinct product ``mn`` costs one Laplace evaluation; the fill is a
    gather from that cache, so ``H[m, n]`` and ``H[n, m]`` share their bits.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    _require_admissible(spec)
    m = indices(N)
    P = np.multiply.outer(m, m)
    if spec.is_zero():
        return HelsonTruncation(N, np.zeros((N, N)), spec, 0.0)
    vals, errs = product_values(spec, P, tol)
    root = np.sqrt(P.astype(float))
    H = vals / root
    bound = float(np.max(errs / root))
    return HelsonTruncation(N, H, spec, bound).check()


def entry(spec: MeasureSpec, m: int, n: int, tol: float = 1e-13) -> float:
    """Single entry ``mu_hat(ln mn) / sqrt(mn)``, bitwise equal to the built one."""
    if m < OFFSET or n < OFFSET:
        raise ValueError("indices start at 2")
    _require_admissible(spec)
    p = np.array([m * n], dtype=np.int64)
    if spec.is_zero():
        return 0.0
    v, _ = laplace_many(spec, np.log(p.astype(float)), tol)
    return float(v[0] / np.sqrt(p.astype(float))[0])


@dataclass(frozen=True)
class RankOneGram:
    """``sum_i w_i a_{c_i} a_{c_i}^T`` with ``a_c(m) = m^{-1/2-c}``."""

    N: int
    locations: tuple
    weights: tuple

    def vectors(self) -> np.ndarray:
        m = indices(self.N).astype(float)
        return np.array([m ** (-0.5 - c) for c in self.locations])

    def gram(self) -> np.ndarray:
        """``G_ij = sqrt(w_i w_j) sum_m m^{-1-c_i-c_j}``; same nonzero spectrum."""
        m = indices(self.N).astype(float)
        c = np.array(self.locations)
        w = np.sqrt(np.array(self.weights))
        k = len(c)
        G = np.empty((k, k))
        for i in range(k):
            for j in range(k):
                G[i, j] = w[i] * w[j] * math.fsum(m ** (-1.0 - c[i] - c[j]))
        return G

    def dense(self) -> np.ndarray:
        A = self.vectors()
        return (A.T * np.array(self.weights)) @ A

    def limit_eigenvalue(self):
        """Single-mass limit ``zeta(1 + 2c) - 1`` as ``N -> inf``."""
        if len(self.locations) != 1:
            raise ValueError("limit only defined for a single point mass")
        v, err, _ = zeta_minus_one(1 + 2 * self.locations[0])
        return self.weights[0] * v, err


def rank_one_gram(spec: MeasureSpec, N: int) -> RankOneGram:
    """Low-rank form of a positive point-mass mixture; equal locations merge."""
    merged: dict = {}
    for coef, atom in spec.terms:
        if not isinstance(atom, PointMass):
            raise MeasureError(f"rank_one_gram needs point masses only, got {atom.kind}")
        if coef == 0:
            continue
        merged[atom.c] = merged.get(atom.c, 0.0) + coef * atom.w
    if any(w < 0 for w in merged.values()):
        raise MeasureError("rank_one_gram needs a positive mixture")
    locs = tuple(sorted(merged))
    return RankOneGram(N, locs, tuple(merged[c] for c in locs))


def _as_sparse(x) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(x, Mapping):
        idx = np.array(sorted(x), dtype=np.int64)
        val = np.array([x[k] for k in idx], dtype=float)
    else:
        val = np.asarray(x, dtype=float)
        idx = indices(val.size)
    if idx.size and idx.min() < OFFSET:
        raise ValueError("indices start at 2")
    return idx, val


def bilinear_form(H: HelsonTruncation, x) -> float:
    """``x^T H x`` on the stored section."""
    idx, val = _as_sparse(x)
    if idx.size and idx.max() > H.N + 1:
        raise ValueError("vector support exceeds the truncation")
    v = np.zeros(H.N)
    v[idx - OFFSET] = val
    return float(v @ H.entries @ v)


def quadratic_form(spec: MeasureSpec, x, tol: float = 1e-12):
    """``<H x, x> = int |x~(t)|^2 mu(dt)`` with ``x~(t) = sum x_m m^{-1/2-t}``.

    ``x`` is an array over indices ``2, 3, ...`` or a ``{m: x_m}`` mapping.
    Returns ``(value, error_bound)``.  The integral is computed directly in
    ``t`` (never through matrix entries), which makes it an independent
    check of the matrix form.
    """
    idx, val = _as_sparse(x)
    coeff = val / np.sqrt(idx.astype(float))
    ratio = np.log(idx.astype(float) / 2.0)
    K = float(np.sum(np.abs(coeff)))
    # x~(t) = 2^{-t} y(t) with |y| <= K, so x~^2 = 4^{-t} y^2.

    def y_sq(t):
        t = np.asarray(t, dtype=float)
        y = np.zeros_like(t)
        for c, r in zip(coeff, ratio):
            y += c * np.exp(-r * t)
        return y * y

    s4 = np.array([math.log(4.0)])
    total, err = 0.0, 0.0
    for coef, atom in spec.terms:
        if coef == 0:
            continue
        if isinstance(atom, PointMass):
            xt = float(np.sum(coeff * np.exp(-(ratio + math.log(2.0)) * atom.c)))
            total += coef * atom.w * xt * xt
            continue
        v, e = panel_laplace(lambda t, a=atom: a.density(t) * y_sq(t), s4,
                             tail_bound=lambda s, T, a=atom: K * K * a.tail_bound(s, T),
                             breaks=atom.breaks, tol=tol * max(1.0, K * K))
        total += coef * float(v[0])
        err += abs(coef) * float(e[0])
    return total, err


def dual_kernel(s: float, t: float):
    """``zeta(s + t + 1) - 1``, the kernel of the Dirichlet-series realisation."""
    v, err, _ = zeta_minus_one(s + t + 1)
    return v, err


# ---------------------------------------------------------------------------
# persistence

def save_binary(H: HelsonTruncation | np.ndarray, path) -> None:
    """``HELS1`` magic, ``N`` as little-endian uint64, then ``N*N`` f64 LE row-major."""
    A = H.entries if isinstance(H, HelsonTruncation) else np.asarray(H)
    N = A.shape[0]
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", N))
        fh.write(np.ascontiguousarray(A, dtype="<f8").tobytes())


def load_binary(path) -> HelsonTruncation:
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
        if head != MAGIC:
            raise ValueError(f"{path}: not a HELS1 file")
        (N,) = struct.unpack("<Q", fh.read(8))
        data = fh.read()
    if len(data) != 8 * N * N:
        raise ValueError(f"{path}: expected {N * N} entries, found {len(data) // 8}")
    A = np.frombuffer(data, dtype="<f8").astype(float).reshape(N, N)
    return HelsonTruncation(int(N), A)


def to_csv(H: HelsonTruncation | np.ndarray) -> str:
    """Row-major CSV; header ``m\\n,2,3,...`` and each row led by its index."""
    A = H.entries if isinstance(H, HelsonTruncation) else np.asarray(H)
    idx = indices(A.shape[0])
    buf = io.StringIO()
    buf.write("m\\n," + ",".join(str(i) for i in idx) + "\n")
    for i, row in zip(idx, A):
        buf.write(f"{i}," + ",".join(repr(float(v)) for v in row) + "\n")
    return buf.getvalue()


def from_csv(text: str) -> HelsonTruncation:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    if header[0] != "m\\n":
        raise ValueError("CSV header must start with 'm\\n'")
    cols = [int(c) for c in header[1:]]
    if cols != list(range(OFFSET, OFFSET + len(cols))):
        raise ValueError("CSV columns must be consecutive indices from 2")
    rows = [[float(v) for v in ln.split(",")[1:]] for ln in lines[1:]]
    A = np.array(rows, dtype=float)
    if A.shape != (len(cols), len(cols)):
        raise ValueError("CSV matrix is not square")
    return HelsonTruncation(len(cols), A)


def fill_sequence(x: Sequence[float] | Mapping[int, float], N: int) -> np.ndarray:
    """Dense length-``N`` vector from an index-2-based sparse description."""
    idx, val = _as_sparse(x)
    v = np.zeros(N)
    v[idx - OFFSET] = val
    return v
