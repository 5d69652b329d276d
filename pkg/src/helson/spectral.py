"""Dense symmetric eigenproblems and the spectral functionals of a section."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .matrix import HelsonTruncation

__all__ = ["SpectralReport", "SpectralError", "eig_sym", "jacobi_eigh", "lambda_max",
           "matrix_functionals", "Functionals"]


class SpectralError(ArithmeticError):
    def __init__(self, message, estimate=None, residual=None):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual


@dataclass
class SpectralReport:
    eigenvalues: list
    trace: float
    hs_norm: float
    trace_norm_lower: float
    max_residual: float
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("eigenvectors")
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _matrix(H):
    return H.entries if isinstance(H, HelsonTruncation) else np.asarray(H, dtype=float)


def _check_symmetric(A):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if scale and float(np.max(np.abs(A - A.T))) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")


def eig_sym(H, want_vectors: bool = False) -> SpectralReport:
    """Full spectrum in descending order plus trace and norm functionals.

    Residuals ``||Hv - lambda v||`` are always measured (vectors are computed
    internally either way) and returned as ``max_residual``.
    """
    A = _matrix(H)
    _check_symmetric(A)
    w, V = np.linalg.eigh(A)
    w = w[::-1]
    V = np.ascontiguousarray(V[:, ::-1])
    R = A @ V - V * w
    resid = float(np.max(np.linalg.norm(R, axis=0))) if A.size else 0.0
    return SpectralReport(
        eigenvalues=[float(x) for x in w],
        trace=math.fsum(np.diag(A)),
        hs_norm=float(np.sqrt(math.fsum((A * A).ravel()))),
        trace_norm_lower=math.fsum(np.abs(w)),
        max_residual=resid,
        eigenvectors=V if want_vectors else None,
    )


def jacobi_eigh(A, tol: float = 1e-14, max_sweeps: int = 60):
    """Cyclic Jacobi eigensolver (small dense matrices).

    Returns ``(eigenvalues descending, eigenvectors as columns)``.
    """
    A = np.array(A, dtype=float)
    _check_symmetric(A)
    n = A.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= tol * max(float(np.linalg.norm(A)), 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300 * max(abs(A[p, p]), abs(A[q, q]), 1.0):
                    # below anything that can move an eigenvalue; drop it
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise SpectralError("Jacobi sweeps did not converge")
    w = np.diag(A).copy()
    order = np.argsort(w)[::-1]
    return w[order], V[:, order]


def lambda_max(H, tol: float = 1e-10, max_iter: int = 100_000, seed: int = 0) -> float:
    """Largest eigenvalue by power iteration.

    Intended for entrywise nonnegative matrices, where the Perron vector is
    positive and a positive start vector cannot be orthogonal to it.  Stops
    when the residual bound ``||Hv - rho v||`` drops below ``tol``.
    """
    A = _matrix(H)
    _check_symmetric(A)
    n = A.shape[0]
    if n == 0 or not np.any(A):
        return 0.0
    v = np.ones(n) + 1e-3 * np.random.default_rng(seed).random(n)
    v /= np.linalg.norm(v)
    w = A @ v
    rho, res = 0.0, math.inf
    for _ in range(max_iter):
        rho = float(v @ w)
        res = float(np.linalg.norm(w - rho * v))
        if res <= tol:
            return rho
        nrm = np.linalg.norm(w)
        v = w / nrm
        w = A @ v
    raise SpectralError(f"power iteration stalled (residual {res:.3g})", estimate=rho, residual=res)


@dataclass(frozen=True)
class Functionals:
    trace: float
    hs_norm: float
    trace_norm_lower: float

    def to_json(self):
        return asdict(self)


def matrix_functionals(H) -> Functionals:
    """Diagonal sum, Frobenius norm and ``sum |lambda_i|`` of a section."""
    A = _matrix(H)
    w = np.linalg.eigvalsh(A)
    return Functionals(math.fsum(np.diag(A)),
                       float(np.sqrt(math.fsum((A * A).ravel()))),
                       math.fsum(np.abs(w)))
