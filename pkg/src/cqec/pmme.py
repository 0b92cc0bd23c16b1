"""Post-Markovian master equation with a rational memory kernel.

The equation is

    q'(t) = L0 q(t) + L1 int_0^t k(t') exp[(L0 + L1) t'] q(t - t') dt'

with ``L0`` the correction generator and ``L1`` the dissipator. When ``k``
has a rational Laplace transform it has a state-space realization
``k(t) = C^T exp(F t) b``. The convolution is then carried by auxiliary
variables ``Z(t) = int_0^t (e^{F u} b) kron (e^{L u} q(t - u)) du`` with
``Z' = (b kron I) q + (F kron I + I kron L) Z``, and the pair ``(q, Z)``
obeys a constant-coefficient linear system that is exponentiated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import (
    StabilizerCode,
    correction_generator,
    five_qubit_code,
    one_qubit_code,
    reduce_to_classes,
    three_qubit_code,
)
from .numerics import (
    DimensionError,
    exp_cosh_sinhc,
    matrix_exponential,
    polynomial_roots,
)
from .operators import pauli_basis

KERNEL_KINDS = ("delta", "exponential", "damped")


@dataclass(frozen=True)
class MemoryKernel:
    """Memory kernel with a rational Laplace transform.

    ``exponential``: ``k(t) = a e^{-ct}``, ``k~(s) = a/(s + c)``.
    ``damped``: ``k~(s) = (s + a)/(s^2 + b s + c)``.
    ``delta``: ``k(t) = delta(t)``, ``k~(s) = 1``.
    """

    kind: str
    a: float = 1.0
    b: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"kernel kind must be one of {KERNEL_KINDS}, got {self.kind!r}")
        if self.kind == "exponential" and self.c <= 0:
            raise ValueError("exponential kernel needs c > 0")
        if self.kind == "damped" and (self.b <= 0 or self.c <= 0):
            raise ValueError("damped kernel needs b > 0 and c > 0")

    @property
    def laplace(self) -> tuple[np.ndarray, np.ndarray]:
        """``(numerator, denominator)`` polynomial coefficients, highest power first."""
        if self.kind == "delta":
            return np.array([1.0]), np.array([1.0])
        if self.kind == "exponential":
            return np.array([self.a]), np.array([1.0, self.c])
        return np.array([1.0, self.a]), np.array([1.0, self.b, self.c])

    def transform(self, s):
        num, den = self.laplace
        return np.polyval(num, s) / np.polyval(den, s)

    def time_eval(self, t):
        """``k(t)``; the delta kernel has no pointwise value."""
        t = np.asarray(t, dtype=float)
        if self.kind == "delta":
            raise ValueError("delta kernel has no pointwise value")
        if self.kind == "exponential":
            return self.a * np.exp(-self.c * t)
        ch, sh = exp_cosh_sinhc(-self.b / 2, self.b**2 / 4 - self.c, t)
        return ch + (self.a - self.b / 2) * sh

    def realization(self) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
        """``(F, b, C)`` with ``k(t) = C @ expm(F t) @ b``; None for the delta kernel."""
        if self.kind == "delta":
            return None
        if self.kind == "exponential":
            return np.array([[-self.c]]), np.array([1.0]), np.array([self.a])
        f = np.array([[0.0, 1.0], [-self.c, -self.b]])
        return f, np.array([0.0, 1.0]), np.array([self.a, 1.0])


def delta_kernel() -> MemoryKernel:
    return MemoryKernel("delta")


def exponential_kernel(a: float, c: float) -> MemoryKernel:
    return MemoryKernel("exponential", a=a, c=c)


def damped_kernel(a: float, b: float, c: float) -> MemoryKernel:
    return MemoryKernel("damped", a=a, b=b, c=c)


@dataclass(frozen=True, eq=False)
class PMMEModel:
    L0: np.ndarray
    L1: np.ndarray
    kernel: MemoryKernel

    def __post_init__(self):
        l0 = np.asarray(self.L0, dtype=float)
        l1 = np.asarray(self.L1, dtype=float)
        if l0.ndim != 2 or l0.shape[0] != l0.shape[1] or l0.shape != l1.shape:
            raise DimensionError(f"L0 {l0.shape} and L1 {l1.shape} must be equal square matrices")
        object.__setattr__(self, "L0", l0)
        object.__setattr__(self, "L1", l1)

    @property
    def dim(self) -> int:
        return self.L0.shape[0]


def augmented_generator(model: PMMEModel) -> np.ndarray:
    """Generator of ``(q, Z)``; equals ``L0 + L1`` for the delta kernel."""
    l0, l1 = model.L0, model.L1
    real = model.kernel.realization()
    if real is None:
        return l0 + l1
    f, b, c = real
    d, m = model.dim, f.shape[0]
    eye = np.eye(d)
    big = np.zeros((d * (m + 1), d * (m + 1)))
    big[:d, :d] = l0
    big[:d, d:] = l1 @ np.kron(c[None, :], eye)
    big[d:, :d] = np.kron(b[:, None], eye)
    big[d:, d:] = np.kron(f, eye) + np.kron(np.eye(m), l0 + l1)
    return big


def _grid(t_grid) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t.ndim != 1 or np.any(t < 0):
        raise ValueError("t_grid must be a 1-D array of non-negative times")
    return t


def pmme_propagate(model: PMMEModel, q0, t_grid) -> np.ndarray:
    """States at each time of ``t_grid``, shape ``(len(t_grid), dim)``.

    The auxiliary variables start at zero, so the result depends only on
    ``q0``.
    """
    q0 = np.asarray(q0, dtype=float)
    if q0.shape != (model.dim,):
        raise DimensionError(f"initial vector of shape {q0.shape}, expected {(model.dim,)}")
    gen = augmented_generator(model)
    y0 = np.zeros(gen.shape[0])
    y0[: model.dim] = q0
    t = _grid(t_grid)
    return np.array([(matrix_exponential(gen, tk) @ y0)[: model.dim] for tk in t])


def pmme_volterra(model: PMMEModel, q0, t_max: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Direct time stepping of the integro-differential equation.

    The convolution is discretized with the composite trapezoid rule over
    the stored history and the derivative with the implicit trapezoid rule,
    so each step solves a ``dim x dim`` linear system. Cost is ``O(N^2)``
    in the number of steps and the error is second order in ``h``.

    Returns ``(times, states)``.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    q0 = np.asarray(q0, dtype=float)
    d = model.dim
    steps = int(round(t_max / h))
    times = h * np.arange(steps + 1)
    qs = np.zeros((steps + 1, d))
    qs[0] = q0
    if steps == 0:
        return times, qs
    if model.kernel.kind == "delta":
        raise ValueError("use pmme_propagate for the delta kernel")
    l0, l1 = model.L0, model.L1
    step_exp = matrix_exponential(l0 + l1, h)
    # g[j] = L1 k(t_j) e^{L t_j}
    g = np.empty((steps + 1, d, d))
    e = np.eye(d)
    kv = model.kernel.time_eval(times)
    for j in range(steps + 1):
        g[j] = l1 @ (kv[j] * e)
        e = step_exp @ e
    w = np.full(steps + 1, h)
    w[0] = 0.5 * h

    def memory(n: int, skip_first: bool) -> np.ndarray:
        # trapezoid sum_{j} w_j g_j q_{n-j}; the endpoint weight at j = n is h/2
        if n == 0:
            return np.zeros(d)
        js = np.arange(1 if skip_first else 0, n + 1)
        wts = np.full(js.size, h)
        if not skip_first:
            wts[0] = 0.5 * h
        wts[-1] = 0.5 * h
        return np.einsum("j,jab,jb->a", wts, g[js], qs[n - js])

    f_prev = l0 @ q0
    lhs = np.eye(d) - 0.5 * h * (l0 + 0.5 * h * g[0])
    lhs_inv = np.linalg.inv(lhs)
    for n in range(steps):
        rest = memory(n + 1, skip_first=True)
        qs[n + 1] = lhs_inv @ (qs[n] + 0.5 * h * (f_prev + rest))
        f_prev = l0 @ qs[n + 1] + 0.5 * h * g[0] @ qs[n + 1] + rest
    return times, qs


# ---------------------------------------------------------------------------
# Laplace-domain route for the one-qubit code


def _poly_shift(p: np.ndarray, shift: float) -> np.ndarray:
    """Coefficients of ``p(s + shift)``."""
    return np.poly1d(p)(np.poly1d([1.0, shift])).coeffs


def _inverse_rational(num: np.poly1d, den: np.poly1d, t: np.ndarray) -> np.ndarray:
    """Inverse Laplace transform of ``num/den`` with simple poles, ``deg num < deg den``."""
    if not np.any(num.coeffs):
        return np.zeros(t.shape)
    poles = polynomial_roots(den.coeffs)
    gaps = np.abs(poles[:, None] - poles[None, :])
    np.fill_diagonal(gaps, np.inf)
    if poles.size > 1 and gaps.min() < 1e-6 * max(1.0, np.abs(poles).max()):
        raise ArithmeticError("repeated pole in the inverse Laplace transform")
    dden = den.deriv()
    out = np.zeros(t.shape, dtype=complex)
    for p in poles:
        out += num(p) / dden(p) * np.exp(p * t)
    return out.real


def pmme_1q_laplace(kernel: MemoryKernel, gamma: float, eta: float, t) -> tuple[np.ndarray, np.ndarray]:
    """``xi(t)`` and ``chi(t)`` by partial fractions of their Laplace transforms.

    ``xi~ = 1/(s + eta + 2 gamma k~(s + lam))`` and
    ``chi~ = (eta/(2s)) [1 - 2 gamma (k~(s) - k~(s + lam))/lam] xi~`` with
    ``lam = 2 gamma + eta``. Poles are found numerically and assumed simple.
    """
    if kernel.kind == "delta":
        raise ValueError("delta kernel: use the Markovian closed form")
    t = np.asarray(t, dtype=float)
    lam = 2 * gamma + eta
    kn, kd = (np.poly1d(p) for p in kernel.laplace)
    kn_s = np.poly1d(_poly_shift(kn.coeffs, lam))
    kd_s = np.poly1d(_poly_shift(kd.coeffs, lam))
    s = np.poly1d([1.0, 0.0])
    # xi~ = kd_s / ((s + eta) kd_s + 2 gamma kn_s)
    xi_den = (s + eta) * kd_s + 2 * gamma * kn_s
    xi = _inverse_rational(kd_s, xi_den, t)
    # 1 - 2 gamma (kn/kd - kn_s/kd_s)/lam  =  [lam kd kd_s - 2 gamma (kn kd_s - kn_s kd)] / (lam kd kd_s)
    bracket = lam * kd * kd_s - 2 * gamma * (kn * kd_s - kn_s * kd)
    chi_num = 0.5 * eta * bracket * kd_s
    chi_den = s * lam * kd * kd_s * xi_den
    # cancel the common factor kd_s exactly
    chi_num = np.polydiv(chi_num, kd_s)[0]
    chi_den = np.polydiv(chi_den, kd_s)[0]
    chi = _inverse_rational(np.poly1d(chi_num), np.poly1d(chi_den), t)
    return xi, chi


# ---------------------------------------------------------------------------
# closed forms for the exponential kernel


def xi_chi_closed_form(a: float, c: float, gamma: float, eta: float, t) -> tuple[np.ndarray, np.ndarray]:
    """``xi(t)`` and ``chi(t)`` for the kernel ``a e^{-ct}`` on the bit-flip qubit.

    With ``beta = gamma + c/2``, ``W**2 = beta**2 - 2 gamma a`` and
    ``mu = -(eta + beta)``:

    ``xi = e^{mu t}[cosh Wt + beta sinh(Wt)/W]``.

    ``chi`` has a constant term ``R0``, a kernel mode ``Rc e^{-ct}`` and a
    pair on the roots of ``Q(s) = (s + eta)(s + eta + 2 gamma + c) + 2 gamma a``;
    the pair's amplitudes follow from ``chi(0) = 0`` and ``chi'(0) = eta/2``.
    Both are evaluated with the continued ``sinh(Wt)/W``, so ``W**2 < 0``
    is allowed. ``chi`` vanishes without correction.

    Raises
    ------
    ArithmeticError
        If ``-c`` is a root of ``Q`` (a double pole the form does not cover).
    """
    t = np.asarray(t, dtype=float)
    lam = 2 * gamma + eta
    beta = gamma + c / 2
    mu = -(eta + beta)
    ch, sh = exp_cosh_sinhc(mu, beta**2 - 2 * gamma * a, t)
    xi = ch + beta * sh
    if eta == 0:
        return xi, np.zeros_like(xi)
    q_at_0 = eta * (lam + c) + 2 * gamma * a
    q_at_mc = (eta - c) * lam + 2 * gamma * a
    r0 = 0.5 * eta * (c * (c + lam) - 2 * gamma * a) / (c * q_at_0)
    if abs(q_at_mc) <= 1e-12 * (lam * (eta + c) + 2 * gamma * a):
        raise ArithmeticError("kernel pole coincides with a pole of the corrected dynamics")
    rc = a * gamma * eta / (c * q_at_mc)
    p = -r0 - rc
    # chi'(0) = -c rc + p' where the pair contributes p cosh + v sinh/W with derivative mu p + v at 0
    v = 0.5 * eta + c * rc - mu * p
    chi = r0 + rc * np.exp(-c * t) + p * ch + v * sh
    return xi, chi


def fidelity_pmme_1q(kernel: MemoryKernel, gamma: float, eta: float, t):
    """``F = (1 + xi)/2 + chi`` for the qubit starting in ``|0>``.

    Uses the closed form for the exponential kernel and the augmented
    system otherwise, or where the closed form has coincident poles.
    :func:`pmme_1q_laplace` is kept as an independent route.
    """
    if kernel.kind == "delta":
        from .lindblad import fidelity_markov_1q

        return fidelity_markov_1q(gamma, eta, t)
    if kernel.kind == "exponential":
        try:
            xi, chi = xi_chi_closed_form(kernel.a, kernel.c, gamma, eta, t)
            return 0.5 * (1 + xi) + chi
        except ArithmeticError:
            pass
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    q = pmme_propagate(model_1q(kernel, gamma, eta), np.array([0.5, 0.0, 0.0, 0.5]), ts)
    f = q[:, 0] + q[:, 3]
    return f[0] if np.ndim(t) == 0 else f


def asymptotic_infidelity_pmme(a: float, c: float, gamma: float, eta: float) -> float:
    return a * gamma * (c + eta) / (c * (2 * a * gamma + eta * (2 * gamma + c + eta)))


def fidelity_pmme_3q_closed(c: float, gamma: float, eta: float, t):
    """Overlap fidelity of the three-qubit code for the kernel ``c e^{-ct}``.

    The prefactor ``1/(1 - (8 gamma + eta)/c + 12 (gamma/c)^2)`` has a
    removable singularity where ``-c`` meets a two-mode rate.

    Raises
    ------
    ArithmeticError
        At that singular point; use :func:`pmme_3q` there.
    """
    t = np.asarray(t, dtype=float)
    g = gamma / c
    den = 1 - (8 * gamma + eta) / c + 12 * g**2
    if abs(den) < 1e-12 * (1 + (8 * gamma + eta) / c + 12 * g**2):
        raise ArithmeticError("kernel rate coincides with a rate of the corrected dynamics")
    ch, sh = exp_cosh_sinhc(-(4 * gamma + eta / 2), (16 * gamma**2 + 16 * gamma * eta + eta**2) / 4, t)
    sin_coeff = 8 * gamma * (1 - 5 * g) + eta * (1 - 16 * g) - eta**2 / c
    inner = 12 * g**2 * np.exp(-c * t) + (1 - (8 * gamma + eta) / c) * ch + sin_coeff * sh / 2
    return 0.5 + 0.5 * inner / den


# ---------------------------------------------------------------------------
# model builders


def model_1q(kernel: MemoryKernel, gamma: float, eta: float) -> PMMEModel:
    """Bit-flip qubit in the Pauli basis ``(I, X, Y, Z)``."""
    code = one_qubit_code()
    basis = pauli_basis(1)
    l0 = eta * np.real(correction_generator(code, basis))
    l1 = np.diag([0.0, 0.0, -2 * gamma, -2 * gamma])
    return PMMEModel(l0, l1, kernel)


def model_classes(code: StabilizerCode, kernel: MemoryKernel, gamma: float, eta: float) -> PMMEModel:
    l0 = eta * reduce_to_classes(code, "correction")
    l1 = gamma * reduce_to_classes(code, "dissipator")
    return PMMEModel(l0, l1, kernel)


def class_fidelity(model: PMMEModel, t_grid, q0=None) -> np.ndarray:
    """``q0 + q1`` along ``t_grid`` from the error-free class."""
    if q0 is None:
        q0 = np.zeros(model.dim)
        q0[0] = 1.0
    q = pmme_propagate(model, q0, t_grid)
    return q[:, 0] + q[:, 1]


def pmme_3q(kernel: MemoryKernel, gamma: float, eta: float, t_grid) -> np.ndarray:
    return class_fidelity(model_classes(three_qubit_code(), kernel, gamma, eta), t_grid)


def pmme_5q(kernel: MemoryKernel, gamma: float, eta: float, t_grid) -> np.ndarray:
    """Overlap fidelity ``q0 + q1`` of the five-qubit code on the 16 error classes."""
    return class_fidelity(model_classes(five_qubit_code(), kernel, gamma, eta), t_grid)
