"""Markovian noise plus continuous correction.

The generator is ``L(rho) = -i[H, rho] + gamma D(rho) + eta Gamma(rho)`` with
``D`` a Pauli-flip dissipator (bit-flip or depolarizing) and ``Gamma`` the
recovery generator of the code. It can be assembled in the Pauli or
computational basis of the full Hilbert space, or on the error-class
probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .codes import (
    StabilizerCode,
    correction_kraus,
    default_channel,
    reduce_to_classes,
)
from .numerics import DimensionError, exp_cosh_sinhc, matrix_exponential, nullspace
from .operators import (
    BasisConvention,
    PauliString,
    _letters_matrix,
    basis_change_matrix,
    computational_basis,
    devectorize,
    vectorize,
)

CHANNELS = ("bitflip", "depolarizing")
# Dense full-space generators are 4**n square; beyond this they stop being useful.
MAX_DENSE_QUBITS = 3


@dataclass(frozen=True, eq=False)
class MarkovModel:
    """Rates and channel of a continuously corrected code.

    ``channel`` defaults to bit-flip for codes that only correct X errors and
    to depolarizing otherwise.
    """

    code: StabilizerCode
    gamma: float
    eta: float
    channel: str | None = None
    hamiltonian: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.gamma < 0 or self.eta < 0:
            raise ValueError("gamma and eta must be non-negative")
        if self.channel is None:
            object.__setattr__(self, "channel", default_channel(self.code))
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if self.hamiltonian is not None:
            h = np.asarray(self.hamiltonian, dtype=complex)
            d = 2**self.code.n
            if h.shape != (d, d):
                raise DimensionError(f"hamiltonian must be {d}x{d}, got {h.shape}")
            if not np.allclose(h, h.conj().T, atol=1e-12):
                raise ValueError("hamiltonian must be Hermitian")
            object.__setattr__(self, "hamiltonian", h)


def _flip_words(code: StabilizerCode, channel: str) -> list[str]:
    letters = "X" if channel == "bitflip" else "XYZ"
    return [PauliString.single(code.n, q, a).letters for q in range(code.n) for a in letters]


def sparse_liouvillian(model: MarkovModel) -> sp.csr_matrix:
    """Generator in the row-major computational vectorization, as a sparse matrix.

    Uses ``vec(A rho B) = (A kron B^T) vec(rho)``.
    """
    n = model.code.n
    d = 2**n
    eye = sp.identity(d, dtype=complex, format="csr")
    out = sp.csr_matrix((d * d, d * d), dtype=complex)
    if model.gamma:
        words = _flip_words(model.code, model.channel)
        diss = -len(words) * sp.identity(d * d, dtype=complex, format="csr")
        for w in words:
            p = sp.csr_matrix(_letters_matrix(w))
            diss = diss + sp.kron(p, p.conj())
        out = out + model.gamma * diss
    if model.eta:
        corr = -sp.identity(d * d, dtype=complex, format="csr")
        for k in correction_kraus(model.code):
            ks = sp.csr_matrix(k)
            corr = corr + sp.kron(ks, ks.conj())
        out = out + model.eta * corr
    if model.hamiltonian is not None:
        h = sp.csr_matrix(model.hamiltonian)
        out = out - 1j * (sp.kron(h, eye) - sp.kron(eye, h.T))
    out.eliminate_zeros()
    return out.tocsr()


def build_liouvillian(model: MarkovModel, basis: BasisConvention | str) -> np.ndarray:
    """Dense generator matrix in ``basis``.

    ``basis`` is a :class:`BasisConvention` on the code's qubits or the
    string ``"class"``, which gives ``gamma L_1 + eta L_0`` on the error
    classes.

    Raises
    ------
    DimensionError
        If the basis does not match the code, or a full-space matrix is
        requested for more than ``MAX_DENSE_QUBITS`` qubits.
    ValueError
        If a Hamiltonian is combined with the class basis.
    """
    code = model.code
    if isinstance(basis, str):
        if basis != "class":
            raise ValueError(f"unknown basis {basis!r}")
        if model.hamiltonian is not None:
            raise ValueError("class-basis reduction does not support a Hamiltonian")
        l1 = reduce_to_classes(code, model.channel)
        l0 = reduce_to_classes(code, "correction")
        return model.gamma * l1 + model.eta * l0
    if basis.n != code.n:
        raise DimensionError(f"basis has {basis.n} qubits, code has {code.n}")
    if code.n > MAX_DENSE_QUBITS:
        raise DimensionError(
            f"dense {4**code.n}x{4**code.n} generator not built; use the class basis"
        )
    m = sparse_liouvillian(model).toarray()
    if basis.kind == "computational":
        return m
    comp = computational_basis(code.n)
    to_c = basis_change_matrix(basis, comp)
    to_p = basis_change_matrix(comp, basis)
    mp = to_p @ m @ to_c
    if np.allclose(mp.imag, 0.0, atol=1e-12):
        return mp.real.copy()
    return mp


def _times(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise ValueError("time must be non-negative")
    return np.atleast_1d(arr), arr.ndim == 0


def propagate(model: MarkovModel, state, t):
    """Evolve a class vector or a density matrix for time ``t``.

    A 1-D ``state`` is read as class probabilities, a 2-D one as a density
    matrix on the code's qubits. ``t`` may be a scalar or a 1-D grid; a grid
    stacks the results along a new leading axis.

    Raises
    ------
    ValueError
        If any time is negative.
    """
    ts, scalar = _times(t)
    state = np.asarray(state)
    if state.ndim == 1:
        gen = build_liouvillian(model, "class")
        if state.shape[0] != gen.shape[0]:
            raise DimensionError(f"class vector of length {state.shape[0]}, expected {gen.shape[0]}")
        out = np.array([matrix_exponential(gen, tk) @ state for tk in ts])
    elif state.ndim == 2:
        d = 2**model.code.n
        if state.shape != (d, d):
            raise DimensionError(f"density matrix of shape {state.shape}, expected {(d, d)}")
        gen = sparse_liouvillian(model)
        v0 = state.astype(complex).reshape(-1)
        # expm_multiply divides by the matrix norm; subnormal norms act as zero
        norm = abs(gen).sum(axis=0).max() if gen.nnz else 0.0
        out = np.array([expm_multiply(gen * tk, v0).reshape(d, d) if norm * tk >= np.finfo(float).tiny
                        else state.astype(complex) for tk in ts])
    else:
        raise DimensionError("state must be a class vector or a density matrix")
    return out[0] if scalar else out


def _trace_functional(basis, n: int, size: int) -> np.ndarray:
    if basis == "class":
        return np.ones(size)
    if basis.kind == "computational":
        return np.eye(2**n).reshape(-1)
    f = np.zeros(size)
    f[0] = 2**n
    return f


def stationary_state(model: MarkovModel, initial=None, basis: BasisConvention | str = "class",
                     tol: float = 1e-10):
    """Long-time limit of the dynamics.

    With a one-dimensional nullspace the unique stationary vector is
    returned, normalized to unit trace. Otherwise the limit depends on the
    starting point and ``initial`` must be supplied; the result is its
    image under the spectral projector onto the zero eigenspace.

    Returned in ``basis``: class probabilities, or a density matrix for a
    full-space basis. ``tol`` is the relative singular-value threshold of
    the nullspace; very disparate rates need a smaller one.
    """
    gen = build_liouvillian(model, basis)
    n = model.code.n
    right = nullspace(gen, tol)
    if not right:
        raise ArithmeticError("generator has no stationary state")
    if initial is not None:
        init = np.asarray(initial)
        if basis != "class" and init.ndim == 2:
            init = vectorize(init, basis)
        left = nullspace(gen.conj().T, tol)
        r = np.array(right).T
        w = np.array(left).T
        proj = r @ np.linalg.solve(w.conj().T @ r, w.conj().T)
        v = proj @ init
    elif len(right) == 1:
        v = right[0]
        v = v / (_trace_functional(basis, n, v.size) @ v)
    else:
        raise ValueError(
            f"stationary space has dimension {len(right)}; pass an initial state"
        )
    if basis == "class":
        return np.real_if_close(v, tol=1e6)
    rho = devectorize(v, basis)
    return 0.5 * (rho + rho.conj().T)


# ---------------------------------------------------------------------------
# closed forms


def closed_form_1q(x0: float, y0: float, z0: float, gamma: float, eta: float, t) -> np.ndarray:
    """Pauli coefficients ``(1, x, y, z)/2`` of the corrected bit-flip qubit.

    The returned array has the time axis first when ``t`` is a grid.
    """
    ts, scalar = _times(t)
    lam = 2 * gamma + eta
    decay = np.exp(-lam * ts)
    x = x0 * np.exp(-eta * ts)
    y = y0 * decay
    zinf = eta / lam if lam > 0 else 0.0
    z = z0 * decay + zinf * (1 - decay)
    out = 0.5 * np.stack([np.ones_like(ts), x, y, z], axis=-1)
    return out[0] if scalar else out


def fidelity_markov_1q(gamma: float, eta: float, t):
    """Fidelity with ``|0><0|`` of the corrected bit-flip qubit."""
    ts, scalar = _times(t)
    lam = 2 * gamma + eta
    if lam == 0:
        f = np.ones_like(ts)
    else:
        f = (gamma + eta) / lam + gamma / lam * np.exp(-lam * ts)
    return f[0] if scalar else f


def eigenvalues_3q(gamma: float, eta: float) -> np.ndarray:
    """Closed-form spectrum of the three-qubit class generator."""
    root = np.sqrt(16 * gamma**2 + 16 * gamma * eta + eta**2)
    return np.array([
        0.0,
        -4 * gamma - eta,
        0.5 * (-8 * gamma - eta + root),
        0.5 * (-8 * gamma - eta - root),
    ])


def closed_form_3q_coeffs(gamma: float, eta: float, t):
    """Class probabilities ``(q0, q1, q2, q3)`` starting from ``q0 = 1``.

    The pair ``q0 +- q3`` and ``q1 +- q2`` separate into a single decaying
    mode at ``eta + 4 gamma`` and a two-mode block with rates
    ``eta/2 + 4 gamma -+ R/2``, ``R**2 = eta**2 + 16 eta gamma + 16 gamma**2``.
    """
    ts, scalar = _times(t)
    s = eta + 4 * gamma
    if s == 0:
        q = np.stack([np.ones_like(ts), *(np.zeros_like(ts),) * 3], axis=-1)
        return q[0] if scalar else tuple(q.T)
    slow = np.exp(-s * ts)
    ch, sh = exp_cosh_sinhc(-(eta / 2 + 4 * gamma), (eta**2 + 16 * eta * gamma + 16 * gamma**2) / 4, ts)
    sym = (eta + gamma + 3 * gamma * slow) / (2 * s)
    anti = 0.5 * (ch + (eta + 2 * gamma) * sh / 2)
    mid = 1.5 * gamma * (1 - slow) / s
    mid_anti = 1.5 * gamma * sh
    q = np.stack([sym + anti, mid + mid_anti, mid - mid_anti, sym - anti], axis=-1)
    return tuple(q[0]) if scalar else tuple(q.T)


def fidelity_markov_3q(gamma: float, eta: float, t):
    """Overlap fidelity ``q0 + q1`` of the three-qubit bit-flip code."""
    ts, scalar = _times(t)
    ch, sh = exp_cosh_sinhc(-(eta / 2 + 4 * gamma), (eta**2 + 16 * eta * gamma + 16 * gamma**2) / 4, ts)
    f = 0.5 + 0.5 * (ch + (8 * gamma + eta) * sh / 2)
    return f[0] if scalar else f


def class_fidelity(model: MarkovModel, t, initial=None) -> np.ndarray:
    """Overlap fidelity ``q0 + q1`` from class-basis propagation.

    Starts from the error-free class unless ``initial`` is given.
    """
    gen = build_liouvillian(model, "class")
    if initial is None:
        initial = np.zeros(gen.shape[0])
        initial[0] = 1.0
    q = propagate(model, initial, np.atleast_1d(t))
    f = q[:, 0] + q[:, 1]
    return f[0] if np.ndim(t) == 0 else f
