"""System qubits coupled to bath qubits through ``alpha X^S X^B``, with a cooled bath.

Each system qubit ``i`` couples to its own bath qubit; the bath qubits are
reset towards ``|0>`` by ``kappa D[sigma_-]`` and the system is
continuously corrected at rate ``eta``. Qubits ``0..n-1`` are the system and
``n..2n-1`` the bath, so the joint basis is ``sigma_i^S kron sigma_j^B``.

For one system qubit the reduced state has the closed form
``(I + x0 e^{-eta t} X + C(t)(y0 Y + z0 Z) + D(t) Z)/2``. ``C`` and ``D`` are
written once with ``mu = -(eta + kappa/4)`` and ``W**2 = (kappa**2 - 64 alpha**2)/16``,
which covers the oscillating, overdamped and critical regimes without branching.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq

from .codes import StabilizerCode, correction_kraus, get_code
from .numerics import (
    ODE_ATOL,
    ODE_RTOL,
    DimensionError,
    exp_cosh_sinhc,
    integrate_ivp,
    matrix_exponential,
)
from .operators import (
    SIGMA_MINUS,
    _letters_matrix,
    basis_state,
    embed,
    partial_trace,
    pauli_basis,
    superoperator_matrix,
    vectorize,
)

XX_RTOL = ODE_RTOL
XX_ATOL = ODE_ATOL


@dataclass(frozen=True)
class XXModel:
    alpha: float
    kappa: float
    eta: float
    n: int = 1
    code: StabilizerCode | None = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.kappa < 0 or self.eta < 0:
            raise ValueError("kappa and eta must be non-negative")
        if self.code is None:
            if self.n not in (1, 3):
                raise ValueError("n must be 1 or 3 unless a code is given")
            object.__setattr__(self, "code", get_code(f"q{self.n}"))
        if self.code.n != self.n:
            raise DimensionError(f"code acts on {self.code.n} qubits, model has n={self.n}")

    @property
    def regime(self) -> str:
        """``"non-markovian"`` when ``kappa**2 < 64 alpha**2``, else ``"markovian"``."""
        return "non-markovian" if self.kappa**2 < 64 * self.alpha**2 else "markovian"


def _hamiltonian(n: int) -> np.ndarray:
    return sum(embed(np.kron(_letters_matrix("X"), _letters_matrix("X")), [i, n + i], 2 * n)
               for i in range(n))


@lru_cache(maxsize=4)
def _joint_operators(code: StabilizerCode) -> tuple[np.ndarray, tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    n = code.n
    h = _hamiltonian(n)
    lows = tuple(embed(SIGMA_MINUS, [n + i], 2 * n) for i in range(n))
    bath_eye = np.eye(2**n)
    kraus = tuple(np.kron(k, bath_eye) for k in correction_kraus(code))
    return h, lows, kraus


def xx_rhs(model: XXModel):
    """Right-hand side ``rho -> d rho/dt`` acting on the joint density matrix."""
    h, lows, kraus = _joint_operators(model.code)
    a, kap, eta = model.alpha, model.kappa, model.eta
    ladders = [(l, l.conj().T, l.conj().T @ l) for l in lows]

    def apply(rho: np.ndarray) -> np.ndarray:
        out = -1j * a * (h @ rho - rho @ h)
        if kap:
            for l, ld, n_op in ladders:
                out = out + kap * (l @ rho @ ld - 0.5 * (n_op @ rho + rho @ n_op))
        if eta:
            corr = -rho
            for k in kraus:
                corr = corr + k @ rho @ k.conj().T
            out = out + eta * corr
        return out

    return apply


def build_xx_superoperator(model: XXModel, sparse: bool = False):
    """Generator of the joint system-bath dynamics.

    For ``n = 1`` the dense 16x16 matrix in the Pauli-product basis
    ``II, IX, ..., ZZ`` (system letter first). For larger ``n`` the
    computational outer-product basis, optionally as a sparse matrix.
    """
    n = model.n
    if n == 1 and not sparse:
        return superoperator_matrix(xx_rhs(model), pauli_basis(2))
    h, lows, kraus = _joint_operators(model.code)
    d = 4**n
    eye = sp.identity(d, dtype=complex, format="csr")
    hs = sp.csr_matrix(h)
    gen = -1j * model.alpha * (sp.kron(hs, eye) - sp.kron(eye, hs.T))
    for low in lows:
        ls = sp.csr_matrix(low)
        nop = ls.conj().T @ ls
        gen = gen + model.kappa * (
            sp.kron(ls, ls.conj()) - 0.5 * (sp.kron(nop, eye) + sp.kron(eye, nop.T))
        )
    corr = -sp.identity(d * d, dtype=complex, format="csr")
    for k in kraus:
        ks = sp.csr_matrix(k)
        corr = corr + sp.kron(ks, ks.conj())
    gen = (gen + model.eta * corr).tocsr()
    gen.eliminate_zeros()
    return gen if sparse else gen.toarray()


def reference_matrix_1q(alpha: float, kappa: float, eta: float) -> np.ndarray:
    """Reference 16x16 one-qubit generator, entered by hand.

    Kept as an independent transcription for comparison with
    :func:`build_xx_superoperator`.
    """
    a2, k2 = 2 * alpha, kappa / 2
    m = np.zeros((16, 16))
    entries = {
        (1, 1): -k2,
        (2, 2): -k2, (2, 7): -a2,
        (3, 0): kappa, (3, 3): -kappa, (3, 6): a2,
        (4, 4): -eta,
        (5, 5): -eta - k2,
        (6, 3): -a2, (6, 6): -eta - k2,
        (7, 2): a2, (7, 4): kappa, (7, 7): -eta - kappa,
        (8, 8): -eta, (8, 13): -a2,
        (9, 9): -eta - k2, (9, 12): -a2,
        (10, 10): -eta - k2,
        (11, 8): kappa, (11, 11): -eta - kappa,
        (12, 0): eta, (12, 9): a2, (12, 12): -eta,
        (13, 1): eta, (13, 8): a2, (13, 13): -eta - k2,
        (14, 2): eta, (14, 14): -eta - k2,
        (15, 3): eta, (15, 12): kappa, (15, 15): -eta - kappa,
    }
    for (i, j), v in entries.items():
        m[i, j] = v
    return m


def xx_coefficients(alpha: float, kappa: float, eta: float, t):
    """``C(t)`` and ``D(t)`` of the one-qubit reduced state.

    ``C = e^{mu t}[cosh Wt + (kappa/4) sinh(Wt)/W]`` and
    ``D = D_inf (1 + e^{mu t}[(8 alpha^2/(kappa + 2 eta) - kappa/4) sinh(Wt)/W - cosh Wt])``
    with ``D_inf = eta(kappa + 2 eta) / (eta(kappa + 2 eta) + 8 alpha^2)``.
    For real ``W`` this is the overdamped form; imaginary ``W`` gives
    ``cos`` and ``sin(wt)/w``, and ``W = 0`` the critical limit.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("time must be non-negative")
    mu = -(eta + kappa / 4)
    ch, sh = exp_cosh_sinhc(mu, (kappa**2 - 64 * alpha**2) / 16, t)
    c = ch + kappa / 4 * sh
    g = eta * (kappa + 2 * eta)
    if g == 0:
        d = np.zeros_like(c)
    else:
        d_inf = g / (g + 8 * alpha**2)
        d = d_inf * (1 + (8 * alpha**2 / (kappa + 2 * eta) - kappa / 4) * sh - ch)
    return c, d


def asymptotic_d(alpha: float, kappa: float, eta: float) -> float:
    g = eta * (kappa + 2 * eta)
    return g / (g + 8 * alpha**2)


def reduced_state_1q(model: XXModel, coeffs, t) -> np.ndarray:
    """Pauli coefficients ``(1, x, y, z)/2`` of the system qubit at time ``t``.

    ``coeffs`` are the initial Pauli coefficients ``(1, x0, y0, z0)/2``.
    A time grid puts the time axis first.
    """
    if model.n != 1:
        raise DimensionError("closed form exists for one system qubit only")
    c0 = np.asarray(coeffs, dtype=float)
    if c0.shape != (4,):
        raise DimensionError("expected 4 Pauli coefficients")
    x0, y0, z0 = 2 * c0[1:]
    ts = np.asarray(t, dtype=float)
    c, d = xx_coefficients(model.alpha, model.kappa, model.eta, ts)
    x = x0 * np.exp(-model.eta * ts)
    return 0.5 * np.stack([np.ones_like(c), x, c * y0, c * z0 + d], axis=-1)


def fidelity_xx_1q(alpha: float, kappa: float, eta: float, t):
    """Fidelity with ``|0><0|`` for a system starting in ``|0>``: ``(1 + C + D)/2``."""
    c, d = xx_coefficients(alpha, kappa, eta, t)
    return 0.5 * (1 + c + d)


def asymptotic_fidelity_xx(alpha: float, kappa: float, eta: float) -> float:
    g = eta * (kappa + 2 * eta)
    return (g + 4 * alpha**2) / (g + 8 * alpha**2)


def joint_initial_state(system_rho) -> np.ndarray:
    """``system_rho kron |0...0><0...0|`` on the bath."""
    system_rho = np.asarray(system_rho, dtype=complex)
    n = int(round(np.log2(system_rho.shape[0])))
    return np.kron(system_rho, basis_state("0" * n))


def propagate_joint_1q(model: XXModel, system_rho, t) -> np.ndarray:
    """Reduced system state from the dense 16x16 exponential (oracle path).

    Returns Pauli coefficients with the time axis first for a grid.
    """
    m = build_xx_superoperator(model)
    v0 = vectorize(joint_initial_state(system_rho), pauli_basis(2))
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = []
    for tk in ts:
        v = matrix_exponential(m, tk) @ v0
        # system coefficient of sigma_i is c_{i,I} summed with weight 2 over the bath trace
        out.append(2 * v.reshape(4, 4)[:, 0])
    out = np.array(out)
    return out[0] if np.ndim(t) == 0 else out


def integrate_joint(model: XXModel, rho0, t_grid, rel_tol: float = XX_RTOL,
                    abs_tol: float = XX_ATOL) -> np.ndarray:
    """Integrate the joint density matrix over ``t_grid`` by applying the right-hand side.

    Returns an array of shape ``(len(t_grid), d, d)``.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    d = 4**model.n
    if rho0.shape != (d, d):
        raise DimensionError(f"joint state must be {d}x{d}, got {rho0.shape}")
    apply = xx_rhs(model)

    def rhs(_t, y):
        return apply(y.reshape(d, d)).reshape(-1)

    ys = integrate_ivp(rhs, rho0.reshape(-1), t_grid, rel_tol, abs_tol)
    return ys.reshape(len(ys), d, d)


@dataclass(frozen=True)
class JointTrace:
    times: np.ndarray
    fidelity: np.ndarray
    trace: np.ndarray


def simulate_xx_code(model: XXModel, rho0=None, t_grid=None, rel_tol: float = XX_RTOL,
                     abs_tol: float = XX_ATOL) -> JointTrace:
    """Fidelity ``Tr{(rho_ref kron I_B) rho(t)}`` of the coded system coupled to its bath.

    ``rho0`` defaults to ``|0..0><0..0|`` on the system with the bath in
    ``|0..0>``; the reference is the initial system state.
    """
    n = model.n
    if t_grid is None:
        raise ValueError("t_grid is required")
    sys0 = basis_state("0" * n)
    if rho0 is None:
        rho0 = joint_initial_state(sys0)
    else:
        rho0 = np.asarray(rho0, dtype=complex)
        sys0 = partial_trace(rho0, range(n))
    rhos = integrate_joint(model, rho0, t_grid, rel_tol, abs_tol)
    ref = np.kron(sys0, np.eye(2**n))
    # Tr(A rho) = sum_ij A_ji rho_ij
    fid = np.einsum("ji,kij->k", ref, rhos).real
    tr = np.einsum("kii->k", rhos).real
    return JointTrace(times=np.asarray(t_grid, dtype=float), fidelity=fid, trace=tr)


def first_return_time(model: XXModel, t_lo: float, t_hi: float, samples: int = 41,
                      rel_tol: float = XX_RTOL, abs_tol: float = XX_ATOL) -> float:
    """First local maximum of the fidelity in ``[t_lo, t_hi]``, from ``|0..0>`` with the bath in ``|0..0>``.

    Located as the root of ``dF/dt = Tr{(rho_ref kron I) L(rho)}`` rather than
    from ``F`` itself, whose flat top would limit the accuracy to the square
    root of the integration error.
    """
    n = model.n
    sys0 = basis_state("0" * n)
    ref = np.kron(sys0, np.eye(2**n))
    apply = xx_rhs(model)
    grid = np.linspace(t_lo, t_hi, samples)
    times = grid if t_lo == 0 else np.concatenate([[0.0], grid])
    rhos = integrate_joint(model, joint_initial_state(sys0), times, rel_tol, abs_tol)[-samples:]

    def slope(rho):
        return float(np.real(np.einsum("ji,ij->", ref, apply(rho))))

    slopes = np.array([slope(r) for r in rhos])
    down = np.nonzero((slopes[:-1] > 0) & (slopes[1:] <= 0))[0]
    if down.size == 0:
        raise ValueError(f"no fidelity maximum in [{t_lo}, {t_hi}]")
    k = int(down[0])
    start = rhos[k]

    def slope_at(t):
        if t == grid[k]:
            return slopes[k]
        rho = integrate_joint(model, start, [0.0, t - grid[k]], rel_tol, abs_tol)[-1]
        return slope(rho)

    return float(brentq(slope_at, grid[k], grid[k + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps))


def three_qubit_xx_short_time(alpha: float, kappa: float, eta: float, t):
    """Leading terms ``1 - 3 alpha^2 t^2 + (1/2) alpha^2 (kappa + 4 eta) t^3``.

    The cubic coefficient is fixed by the full joint integration; ``kappa + 2 eta``
    does not reproduce it when ``eta > 0``.
    """
    t = np.asarray(t, dtype=float)
    return 1 - 3 * alpha**2 * t**2 + 0.5 * alpha**2 * (kappa + 4 * eta) * t**3
