"""Pauli algebra, vectorization conventions and superoperator assembly.

Qubit 0 is the leftmost tensor factor and the most significant bit of a
computational-basis index, so ``"XIX"`` is ``X (x) I (x) X``.

Two vectorizations of an ``n``-qubit operator are supported:

``pauli``
    Real coefficients ``c_P = Tr(P rho) / 2**n`` over the ``4**n`` Pauli
    words, ordered lexicographically in ``I, X, Y, Z`` with qubit 0 most
    significant. A one-qubit state ``(I + xX + yY + zZ)/2`` maps to
    ``(1, x, y, z)/2``.
``computational``
    Row-major flattening of the matrix: component ``|a><b|`` sits at index
    ``a * 2**n + b`` (ket bits, then bra bits).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Callable, Iterable, Sequence

import numpy as np

from .numerics import DimensionError

LETTERS = "IXYZ"
_PHASES = (1, 1j, -1, -1j)

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (a, b) -> (power of i, letter) with a*b = i**power * letter
_PRODUCT = {}
for _a in LETTERS:
    _PRODUCT[("I", _a)] = (0, _a)
    _PRODUCT[(_a, "I")] = (0, _a)
    _PRODUCT[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT[(_a, _b)] = (1, _c)
    _PRODUCT[(_b, _a)] = (3, _c)


@dataclass(frozen=True, order=True)
class PauliString:
    """An ``n``-qubit Pauli word with phase ``i**phase``.

    The phase is kept as an integer mod 4 so stabilizer arithmetic stays
    exact.
    """

    letters: str
    phase: int = 0

    def __post_init__(self):
        if not self.letters or any(ch not in LETTERS for ch in self.letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """Parse strings such as ``"XZZXI"``, ``"-IYYIX"`` or ``"+iY"``."""
        s = text.strip()
        phase = 0
        if s.startswith(("+", "-")):
            phase = 0 if s[0] == "+" else 2
            s = s[1:]
        if s.startswith("i"):
            phase += 1
            s = s[1:]
        return cls(s, phase)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls("I" * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """Weight-one word with ``letter`` on ``qubit`` (0-based)."""
        chars = ["I"] * n
        chars[qubit] = letter
        return cls("".join(chars))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(ch != "I" for ch in self.letters)

    @property
    def coefficient(self) -> complex:
        return _PHASES[self.phase]

    def unsigned(self) -> "PauliString":
        return PauliString(self.letters)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_multiply(self, other)

    def __str__(self) -> str:
        prefix = ("", "i", "-", "-i")[self.phase]
        return prefix + self.letters


def pauli_multiply(p: PauliString, q: PauliString) -> PauliString:
    """Product ``p q`` with the phase tracked exactly."""
    if p.n != q.n:
        raise DimensionError(f"length mismatch: {p.n} vs {q.n}")
    phase = p.phase + q.phase
    out = []
    for a, b in zip(p.letters, q.letters):
        k, c = _PRODUCT[(a, b)]
        phase += k
        out.append(c)
    return PauliString("".join(out), phase)


def commutes(p: PauliString, q: PauliString) -> bool:
    if p.n != q.n:
        raise DimensionError(f"length mismatch: {p.n} vs {q.n}")
    clashes = sum(a != "I" and b != "I" and a != b for a, b in zip(p.letters, q.letters))
    return clashes % 2 == 0


@lru_cache(maxsize=4096)
def _letters_matrix(letters: str) -> np.ndarray:
    m = reduce(np.kron, (_SINGLE[ch] for ch in letters))
    m.setflags(write=False)
    return m


def pauli_to_matrix(p: PauliString | str) -> np.ndarray:
    if isinstance(p, str):
        p = PauliString.parse(p)
    return p.coefficient * _letters_matrix(p.letters)


def all_pauli_words(n: int) -> list[str]:
    """All ``4**n`` words in pauli-basis order."""
    return ["".join(w) for w in itertools.product(LETTERS, repeat=n)]


# ---------------------------------------------------------------------------
# vectorization


@dataclass(frozen=True)
class BasisConvention:
    kind: str  # "pauli" or "computational"
    n: int

    def __post_init__(self):
        if self.kind not in ("pauli", "computational"):
            raise ValueError(f"unsupported basis kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("basis needs at least one qubit")

    @property
    def dim(self) -> int:
        return 4**self.n


def pauli_basis(n: int) -> BasisConvention:
    return BasisConvention("pauli", n)


def computational_basis(n: int) -> BasisConvention:
    return BasisConvention("computational", n)


@lru_cache(maxsize=8)
def _pauli_stack(n: int) -> np.ndarray:
    stack = np.array([_letters_matrix(w) for w in all_pauli_words(n)])
    stack.setflags(write=False)
    return stack


def _n_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def vectorize(rho, basis: BasisConvention) -> np.ndarray:
    """Coefficient vector of ``rho`` in ``basis``.

    Pauli coefficients are returned as real numbers when ``rho`` is
    Hermitian.
    """
    rho = np.asarray(rho)
    d = 2**basis.n
    if rho.shape != (d, d):
        raise DimensionError(f"operator of shape {rho.shape} does not match {basis}")
    if basis.kind == "computational":
        return rho.reshape(-1).astype(complex)
    stack = _pauli_stack(basis.n)
    # Tr(P rho) = sum_ij P_ji rho_ij
    coeffs = np.einsum("kji,ij->k", stack, rho) / d
    if np.allclose(rho, rho.conj().T, atol=1e-14):
        return coeffs.real.copy()
    return coeffs


def devectorize(v, basis: BasisConvention) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (basis.dim,):
        raise DimensionError(f"vector of shape {v.shape} does not match {basis}")
    d = 2**basis.n
    if basis.kind == "computational":
        return v.reshape(d, d).astype(complex)
    return np.tensordot(v, _pauli_stack(basis.n), axes=1)


def basis_change_matrix(source: BasisConvention, target: BasisConvention) -> np.ndarray:
    """Matrix ``T`` with ``vectorize(rho, target) = T @ vectorize(rho, source)``."""
    if source.n != target.n:
        raise DimensionError("bases describe different qubit counts")
    if source.kind == target.kind:
        return np.eye(source.dim, dtype=complex)
    stack = _pauli_stack(source.n)
    to_comp = stack.reshape(stack.shape[0], -1).T.astype(complex)
    if source.kind == "pauli" and target.kind == "computational":
        return to_comp
    if source.kind == "computational" and target.kind == "pauli":
        # columns of to_comp are orthogonal with norm^2 = 2**n
        return to_comp.conj().T / 2**source.n
    raise ValueError(f"unsupported basis pair {source.kind} -> {target.kind}")


def superoperator_matrix(
    action: Callable[[np.ndarray], np.ndarray], basis: BasisConvention
) -> np.ndarray:
    """Matrix of a linear map on operators, assembled column by column.

    Column ``j`` is ``vectorize(action(devectorize(e_j)))``.
    """
    cols = []
    for j in range(basis.dim):
        e = np.zeros(basis.dim)
        e[j] = 1.0
        out = action(devectorize(e, basis))
        cols.append(vectorize(np.asarray(out, dtype=complex), basis).astype(complex))
    m = np.array(cols).T
    if basis.kind == "pauli" and np.allclose(m.imag, 0.0, atol=1e-14):
        return m.real.copy()
    return m


def binary_index(ket_bits: Sequence[int], bra_bits: Sequence[int]) -> int:
    """Index of ``|ket><bra|`` in the computational vectorization.

    The bits form the string ``ket + bra`` read as a binary number, which
    for a system-then-bath qubit order gives ``a1 a2 a3 al1 al2 al3 b1 ...``.
    """
    if len(ket_bits) != len(bra_bits):
        raise DimensionError("ket and bra need the same number of bits")
    idx = 0
    for bit in itertools.chain(ket_bits, bra_bits):
        if bit not in (0, 1):
            raise ValueError(f"bit labels must be 0 or 1, got {bit!r}")
        idx = 2 * idx + bit
    return idx


# ---------------------------------------------------------------------------
# density matrices


def check_density_matrix(rho, herm_tol: float = 1e-12, trace_tol: float = 1e-10,
                         eig_tol: float = 1e-10) -> np.ndarray:
    """Validate and return ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    _n_qubits(rho.shape[0])
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.6g} != 1")
    if np.min(np.linalg.eigvalsh(rho)) < -eig_tol:
        raise ValueError("density matrix has negative eigenvalues")
    return rho


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def basis_state(bits: str) -> np.ndarray:
    """Projector ``|bits><bits|`` for a bit string like ``"000"``."""
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return pure_state(psi)


def bloch_state(x: float, y: float, z: float) -> np.ndarray:
    return 0.5 * (_SINGLE["I"] + x * _SINGLE["X"] + y * _SINGLE["Y"] + z * _SINGLE["Z"])


def partial_trace(rho, keep: Iterable[int]) -> np.ndarray:
    """Reduced operator on the qubits in ``keep`` (0-based, any order kept sorted)."""
    rho = np.asarray(rho)
    n = _n_qubits(rho.shape[0])
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"qubit indices {keep} out of range for {n} qubits")
    trace_out = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # trace the highest index first so earlier axis numbers stay valid
    for q in sorted(trace_out, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=q, axis2=q + m)
    d = 2 ** len(keep)
    return t.reshape(d, d)


def embed(op: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Lift an operator on ``qubits`` (in that order) to the full ``n``-qubit space."""
    qubits = list(qubits)
    k = len(qubits)
    others = [q for q in range(n) if q not in qubits]
    full = np.kron(np.asarray(op, dtype=complex), np.eye(2 ** (n - k)))
    inv = list(np.argsort(qubits + others))
    t = full.reshape([2] * (2 * n)).transpose(inv + [n + i for i in inv])
    return t.reshape(2**n, 2**n)


SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


def dissipator(op: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Lindblad dissipator ``A rho A^+ - {A^+ A, rho}/2`` as a callable."""
    op = np.asarray(op, dtype=complex)
    opd = op.conj().T
    ada = opd @ op

    def apply(rho: np.ndarray) -> np.ndarray:
        return op @ rho @ opd - 0.5 * (ada @ rho + rho @ ada)

    return apply


def pauli_flip_dissipator(words: Sequence[str]) -> Callable[[np.ndarray], np.ndarray]:
    """``rho -> sum_P (P rho P - rho)`` over the listed Pauli words."""
    mats = [_letters_matrix(w) for w in words]

    def apply(rho: np.ndarray) -> np.ndarray:
        out = -len(mats) * rho
        for m in mats:
            out = out + m @ rho @ m
        return out

    return apply
