"""Dense linear-algebra helpers shared by every solver in the package.

Matrices are plain ``numpy.ndarray`` objects. The functions here wrap the
numpy/scipy primitives with the conventions the rest of the package relies
on: eigenvalue ordering, a conditioning-based diagonalizability flag,
relative nullspace thresholds and an adaptive Runge-Kutta integrator that
reports where it failed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.integrate import DOP853

# Default tolerances; callers may override per call.
DIAGONALIZABLE_COND = 1e12
NULLSPACE_TOL = 1e-10
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12


class DimensionError(ValueError):
    """Raised when matrix or vector shapes are incompatible."""


class IntegrationError(RuntimeError):
    """Raised when the ODE integrator cannot reach the requested time."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(f"{message} (reached t={t_reached:.17g})")
        self.t_reached = t_reached


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    diagonalizable: bool
    condition: float


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def matrix_exponential(a, t: float = 1.0) -> np.ndarray:
    """Return ``exp(a * t)``.

    Uses scipy's scaling-and-squaring Padé scheme, which stays accurate
    for defective matrices (e.g. the critically damped bath model).
    """
    m = _square(a)
    return scipy.linalg.expm(m * t)


def eigendecompose(a, cond_limit: float = DIAGONALIZABLE_COND) -> Spectrum:
    """Eigen-decomposition sorted by real part (descending), then imaginary part.

    ``diagonalizable`` is False when the eigenvector matrix has condition
    number above ``cond_limit``.
    """
    m = _square(a)
    w, v = np.linalg.eig(m)
    # Round the sort keys so that numerically equal real parts tie-break on imag.
    order = np.lexsort((-np.round(w.imag, 10), -np.round(w.real, 10)))
    w = w[order]
    v = v[:, order]
    with np.errstate(all="ignore"):
        cond = float(np.linalg.cond(v))
    ok = bool(np.isfinite(cond) and cond <= cond_limit)
    return Spectrum(eigenvalues=w, eigenvectors=v, diagonalizable=ok, condition=cond)


def nullspace(a, tol: float = NULLSPACE_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the right nullspace.

    Singular values below ``tol * sigma_max`` count as zero. Returns an
    empty list when none do.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = _square(a)
    _, s, vh = np.linalg.svd(m)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return [row.conj() for row in np.eye(m.shape[1])]
    rank = int(np.sum(s > tol * smax))
    return [vh[k].conj() for k in range(rank, m.shape[1])]


def polynomial_roots(coeffs: Sequence[float]) -> np.ndarray:
    """Roots of ``coeffs[0] x^n + ... + coeffs[n]`` from the companion matrix."""
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0 or not np.any(c != 0):
        raise ValueError("zero polynomial has no well-defined roots")
    if c[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    c = c / c[0]
    n = c.size - 1
    if n == 0:
        return np.empty(0, dtype=complex)
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -c[1:]
    companion[1:, :-1] = np.eye(n - 1)
    roots = np.linalg.eigvals(companion)
    # One Newton polish step per root tightens the residual for clustered roots.
    dp = np.polyder(c)
    for k, r in enumerate(roots):
        d = np.polyval(dp, r)
        if d != 0:
            roots[k] = r - np.polyval(c, r) / d
    return roots


def integrate_ivp(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0,
    t_grid: Sequence[float],
    rel_tol: float = ODE_RTOL,
    abs_tol: float = ODE_ATOL,
) -> np.ndarray:
    """Integrate ``y' = rhs(t, y)`` and sample the solution on ``t_grid``.

    An embedded 8(5,3) Dormand-Prince pair controls the local error.
    Returns an array of shape ``(len(t_grid), len(y0))``.

    Raises
    ------
    IntegrationError
        If the step size underflows; the message names the time reached.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or t[0] != 0.0:
        raise ValueError("t_grid must be a 1-D grid starting at 0")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    y0 = np.asarray(y0)
    out = np.empty((t.size, y0.size), dtype=np.result_type(y0, float))
    out[0] = y0
    if t.size == 1:
        return out
    # stepping by hand keeps the time of the last accepted step for error reports
    solver = DOP853(rhs, 0.0, y0, float(t[-1]), rtol=rel_tol, atol=abs_tol)
    k = 1
    while k < t.size:
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"integration failed: {message}", float(solver.t))
        interp = solver.dense_output()
        while k < t.size and t[k] <= solver.t:
            out[k] = interp(t[k])
            k += 1
    return out


def exp_cosh_sinhc(mu: float, omega_sq: float, t) -> tuple[np.ndarray, np.ndarray]:
    """Return ``exp(mu t) cosh(W t)`` and ``exp(mu t) sinh(W t) / W`` with ``W**2 = omega_sq``.

    ``omega_sq`` may have either sign: a negative value turns the pair into
    ``cos`` and ``sin(w t)/w``, and ``omega_sq = 0`` gives ``(exp(mu t), t exp(mu t))``.
    The exponentials are combined before evaluation so that large ``W t``
    does not overflow when ``mu + W <= 0``.
    """
    t = np.asarray(t, dtype=float)
    w = np.sqrt(complex(omega_sq))
    ep = np.exp((mu + w) * t)
    em = np.exp((mu - w) * t)
    ch = 0.5 * (ep + em)
    wt = w * t
    small = np.abs(wt) < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        sh = np.where(small, 0.0, (ep - em) / (2.0 * w if w != 0 else 1.0))
    series = np.exp(mu * t) * t * (1.0 + wt**2 / 6.0 + wt**4 / 120.0)
    sh = np.where(small, series, sh)
    return ch.real, sh.real
