"""Stabilizer codes, syndrome lookup correction and error-class reduction.

The class ("chain") representation tracks a state of the form

    rho(t) = sum_J q_J rho_J,    rho_J = mean_{E in J} E rho0 E,

where the classes J group Pauli errors by Hamming weight and letter
multiplicity pattern. Noise and correction then act as small jump
matrices on the probability vector ``q``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .numerics import DimensionError
from .operators import (
    PauliString,
    all_pauli_words,
    commutes,
    computational_basis,
    devectorize,
    pauli_basis,
    pauli_flip_dissipator,
    pauli_multiply,
    pauli_to_matrix,
    pure_state,
    superoperator_matrix,
    vectorize,
)


class ReductionError(ValueError):
    """The generator is not symmetric under the class partition."""


@dataclass(frozen=True)
class StabilizerCode:
    name: str
    n: int
    k: int
    generators: tuple[PauliString, ...]
    correction_table: Mapping[tuple[int, ...], PauliString] = field(compare=False)
    logicals: tuple[PauliString, ...] = ()
    # Pauli letters the noise model can produce; "X" for bit-flip codes.
    error_alphabet: str = "XYZ"
    class_labels: Mapping[tuple, str] = field(default_factory=dict, compare=False)

    def syndrome(self, error: PauliString) -> tuple[int, ...]:
        return syndrome(self, error)

    def describe(self) -> str:
        """Plain-text table of generators, logicals and the syndrome lookup."""
        lines = [f"# {self.name} [[{self.n},{self.k}]]"]
        for i, g in enumerate(self.generators, 1):
            lines.append(f"S{i}\t{g}")
        for p in self.logicals:
            lines.append(f"logical\t{p}")
        lines.append("syndrome\tcorrection")
        for s in sorted(self.correction_table):
            lines.append(f"{''.join(map(str, s))}\t{self.correction_table[s]}")
        return "\n".join(lines) + "\n"


def syndrome(code: StabilizerCode, error: PauliString) -> tuple[int, ...]:
    """Bit ``i`` is 1 iff ``error`` anticommutes with generator ``i``."""
    if error.n != code.n:
        raise DimensionError(f"error acts on {error.n} qubits, code has {code.n}")
    return tuple(0 if commutes(error, g) else 1 for g in code.generators)


def _p(s: str) -> PauliString:
    return PauliString.parse(s)


def one_qubit_code() -> StabilizerCode:
    return StabilizerCode(
        name="one-qubit",
        n=1,
        k=0,
        generators=(_p("Z"),),
        correction_table={(0,): _p("I"), (1,): _p("X")},
        logicals=(),
        error_alphabet="X",
    )


def three_qubit_code() -> StabilizerCode:
    return StabilizerCode(
        name="three-qubit bit-flip",
        n=3,
        k=1,
        generators=(_p("ZZI"), _p("IZZ")),
        correction_table={
            (0, 0): _p("III"),
            (1, 0): _p("XII"),
            (1, 1): _p("IXI"),
            (0, 1): _p("IIX"),
        },
        logicals=(_p("XXX"), _p("ZZZ")),
        error_alphabet="X",
    )


# Single-qubit error -> syndrome bits against (S1, S2, S3, S4).
FIVE_QUBIT_SYNDROMES = {
    "X1": "0001", "X2": "1000", "X3": "1100", "X4": "0110", "X5": "0011",
    "Z1": "1010", "Z2": "0101", "Z3": "0010", "Z4": "1001", "Z5": "0100",
    "Y1": "1011", "Y2": "1101", "Y3": "1110", "Y4": "1111", "Y5": "0111",
}

FIVE_QUBIT_LABELS = {
    (0, ()): "0",
    (1, (1,)): "1",
    (2, (2,)): "2A", (2, (1, 1)): "2B",
    (3, (3,)): "3A", (3, (2, 1)): "3B", (3, (1, 1, 1)): "3C",
    (4, (2, 2)): "4A", (4, (3, 1)): "4B", (4, (2, 1, 1)): "4C", (4, (4,)): "4D",
    (5, (4, 1)): "5A", (5, (3, 2)): "5B", (5, (2, 2, 1)): "5C",
    (5, (3, 1, 1)): "5D", (5, (5,)): "5E",
}


def five_qubit_code() -> StabilizerCode:
    table = {(0, 0, 0, 0): _p("IIIII")}
    for err, bits in FIVE_QUBIT_SYNDROMES.items():
        table[tuple(int(b) for b in bits)] = PauliString.single(5, int(err[1]) - 1, err[0])
    return StabilizerCode(
        name="five-qubit perfect",
        n=5,
        k=1,
        generators=(_p("XZZXI"), _p("IXZZX"), _p("XIXZZ"), _p("ZXIXZ")),
        correction_table=table,
        logicals=(_p("XXXXX"), _p("ZZZZZ")),
        error_alphabet="XYZ",
        class_labels=FIVE_QUBIT_LABELS,
    )


CODES = {"q1": one_qubit_code, "q3": three_qubit_code, "q5": five_qubit_code}


def get_code(key: str) -> StabilizerCode:
    try:
        return CODES[key]()
    except KeyError:
        raise ValueError(f"unknown code {key!r}; choose from {sorted(CODES)}") from None


# ---------------------------------------------------------------------------
# full-space objects


def syndrome_projector(code: StabilizerCode, s: tuple[int, ...]) -> np.ndarray:
    d = 2**code.n
    proj = np.eye(d, dtype=complex)
    for bit, g in zip(s, code.generators):
        proj = proj @ (np.eye(d) + (-1) ** bit * pauli_to_matrix(g)) / 2
    return proj


def code_projector(code: StabilizerCode) -> np.ndarray:
    return syndrome_projector(code, (0,) * len(code.generators))


@lru_cache(maxsize=8)
def _kraus(code: StabilizerCode) -> tuple[np.ndarray, ...]:
    ops = []
    for s, c in sorted(code.correction_table.items()):
        ops.append(pauli_to_matrix(c) @ syndrome_projector(code, s))
    return tuple(ops)


def correction_kraus(code: StabilizerCode) -> tuple[np.ndarray, ...]:
    """Kraus operators ``C_s P_s`` of the recovery map."""
    return _kraus(code)


def apply_correction_map(code: StabilizerCode, rho) -> np.ndarray:
    """``sum_s C_s P_s rho P_s C_s^+``."""
    rho = np.asarray(rho, dtype=complex)
    d = 2**code.n
    if rho.shape != (d, d):
        raise DimensionError(f"state of shape {rho.shape} does not match {code.n}-qubit code")
    out = np.zeros_like(rho)
    for k in _kraus(code):
        out += k @ rho @ k.conj().T
    return out


def correction_generator(code: StabilizerCode, basis=None):
    """Matrix of ``Gamma(rho) = Phi(rho) - rho``.

    ``basis`` is an :class:`~cqec.operators.BasisConvention` or the string
    ``"class"`` for the error-class jump matrix.
    """
    if basis == "class":
        return reduce_to_classes(code, "correction")
    return superoperator_matrix(lambda r: apply_correction_map(code, r) - r, basis)


def encode_three_qubit(a: complex, b: complex) -> np.ndarray:
    """Density matrix of ``a|000> + b|111>``."""
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-12:
        raise ValueError("amplitudes must satisfy |a|^2 + |b|^2 = 1")
    psi = np.zeros(8, dtype=complex)
    psi[0], psi[7] = a, b
    return pure_state(psi)


def logical_zero(code: StabilizerCode) -> np.ndarray:
    """Projector onto the logical zero state, i.e. the code state with Zbar = +1."""
    d = 2**code.n
    proj = code_projector(code)
    if code.k:
        zbar = pauli_to_matrix(code.logicals[-1])
        proj = proj @ (np.eye(d) + zbar) / 2
    return proj / np.trace(proj).real


# ---------------------------------------------------------------------------
# error classes


@dataclass(frozen=True)
class ErrorClass:
    label: str
    weight: int
    pattern: tuple[int, ...]
    members: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def representative(self) -> PauliString:
        return PauliString(self.members[0])


def _signature(word: str) -> tuple[int, tuple[int, ...]]:
    counts = Counter(ch for ch in word if ch != "I")
    return sum(counts.values()), tuple(sorted(counts.values(), reverse=True))


@lru_cache(maxsize=8)
def _classes(code: StabilizerCode) -> tuple[ErrorClass, ...]:
    alphabet = "I" + code.error_alphabet
    groups: dict[tuple, list[str]] = {}
    for letters in itertools.product(alphabet, repeat=code.n):
        word = "".join(letters)
        groups.setdefault(_signature(word), []).append(word)

    def sort_key(sig):
        label = code.class_labels.get(sig)
        order = list(code.class_labels).index(sig) if label else 0
        return (sig[0], order, tuple(-x for x in sig[1]))

    out = []
    for sig in sorted(groups, key=sort_key):
        label = code.class_labels.get(sig)
        if label is None:
            label = str(sig[0]) if len(code.error_alphabet) == 1 else f"{sig[0]}:{sig[1]}"
        out.append(ErrorClass(label, sig[0], sig[1], tuple(groups[sig])))
    return tuple(out)


def enumerate_error_classes(code: StabilizerCode) -> list[ErrorClass]:
    """Partition of the code's error words into weight/pattern classes.

    Bit-flip codes use X-only words (classes by Hamming weight); the
    five-qubit code uses all ``4**5`` Pauli words in sixteen classes.
    """
    return list(_classes(code))


@lru_cache(maxsize=8)
def _class_index(code: StabilizerCode) -> dict[str, int]:
    return {w: i for i, cls in enumerate(_classes(code)) for w in cls.members}


def classify(code: StabilizerCode, word: PauliString | str) -> int:
    """Index of the class containing ``word`` (phase ignored)."""
    letters = word.letters if isinstance(word, PauliString) else word
    try:
        return _class_index(code)[letters]
    except KeyError:
        raise ValueError(f"{letters} lies outside the error alphabet of {code.name}") from None


def class_labels(code: StabilizerCode) -> list[str]:
    return [c.label for c in _classes(code)]


def class_sizes(code: StabilizerCode) -> np.ndarray:
    return np.array([c.size for c in _classes(code)])


def _moves(code: StabilizerCode, kind: str) -> list[PauliString]:
    letters = {"bitflip": "X", "depolarizing": "XYZ"}[kind]
    return [PauliString.single(code.n, q, a) for q in range(code.n) for a in letters]


def default_channel(code: StabilizerCode) -> str:
    return "bitflip" if code.error_alphabet == "X" else "depolarizing"


@lru_cache(maxsize=32)
def _reduce(code: StabilizerCode, generator: str) -> np.ndarray:
    classes = _classes(code)
    index = _class_index(code)
    m = len(classes)
    out = np.zeros((m, m))
    if generator in ("bitflip", "depolarizing"):
        moves = _moves(code, generator)
        for j, cls in enumerate(classes):
            first = None
            for word in cls.members:
                col = np.zeros(m)
                e = PauliString(word)
                for mv in moves:
                    target = pauli_multiply(mv, e).letters
                    if target not in index:
                        raise ReductionError(
                            f"{generator} noise leaves the error alphabet of {code.name}"
                        )
                    col[index[target]] += 1.0
                col[j] -= len(moves)
                if first is None:
                    first = col
                elif not np.array_equal(col, first):
                    raise ReductionError(
                        f"{generator} is not lumpable on class {cls.label}: "
                        f"{cls.members[0]} and {word} give different columns"
                    )
            out[:, j] = first
    elif generator == "correction":
        for j, cls in enumerate(classes):
            for word in cls.members:
                e = PauliString(word)
                c = code.correction_table[syndrome(code, e)]
                out[index[pauli_multiply(c, e).letters], j] += 1.0
            out[:, j] /= cls.size
            out[j, j] -= 1.0
    else:
        raise ValueError(f"unknown generator {generator!r}")
    out.setflags(write=False)
    return out


def reduce_to_classes(code: StabilizerCode, generator: str) -> np.ndarray:
    """Unit-rate jump matrix of ``generator`` on the class probabilities.

    ``generator`` is ``"bitflip"``, ``"depolarizing"``, ``"dissipator"``
    (the code's natural channel) or ``"correction"``.

    Raises
    ------
    ReductionError
        If two members of a class give different dissipator columns.
    """
    if generator == "dissipator":
        generator = default_channel(code)
    return _reduce(code, generator).copy()


def correction_member_spread(code: StabilizerCode) -> float:
    """Largest difference between single-member correction columns within a class.

    Zero would mean the correction map is lumpable member by member; the
    class matrix is defined as the class average either way.
    """
    classes = _classes(code)
    index = _class_index(code)
    worst = 0.0
    for cls in classes:
        targets = set()
        for word in cls.members:
            e = PauliString(word)
            c = code.correction_table[syndrome(code, e)]
            targets.add(index[pauli_multiply(c, e).letters])
        if len(targets) > 1:
            worst = 1.0
    return worst


def unit_vector(code: StabilizerCode, label: str) -> np.ndarray:
    labels = class_labels(code)
    v = np.zeros(len(labels))
    v[labels.index(label)] = 1.0
    return v


# ---------------------------------------------------------------------------
# full-space oracles for the class matrices


def _symplectic(words: list[str]) -> tuple[np.ndarray, np.ndarray]:
    x = np.array([[ch in "XY" for ch in w] for w in words], dtype=np.int64)
    z = np.array([[ch in "ZY" for ch in w] for w in words], dtype=np.int64)
    return x, z


def _generic_state_coefficients(n: int) -> np.ndarray:
    """Pauli coefficients of a Hermitian reference operator with no vanishing component.

    Positivity is irrelevant for the linear re-expansion, so the
    coefficients are kept O(1) for conditioning.
    """
    u = (np.arange(4**n) * 0.6180339887498949) % 1.0
    return (0.5 + u) / 2**n


def full_space_class_matrix(code: StabilizerCode, channel: str | None = None) -> np.ndarray:
    """Class jump matrix of a Pauli dissipator computed in the full operator space.

    Each uniform class mixture of a generic reference state is pushed
    through the full ``4**n``-dimensional superoperator and re-expanded
    over the linearly independent family ``{E rho0 E}``.
    """
    channel = channel or default_channel(code)
    n = code.n
    words = all_pauli_words(n)
    x, z = _symplectic(words)
    chars = 1 - 2 * ((x @ z.T + z @ x.T) % 2)  # chars[E, P] = +1 iff E, P commute
    c0 = _generic_state_coefficients(n)
    noise_words = [m.letters for m in _moves(code, channel)]
    superop = superoperator_matrix(pauli_flip_dissipator(noise_words), computational_basis(n))
    pbasis = pauli_basis(n)
    cbasis = computational_basis(n)
    index = _class_index(code)
    classes = _classes(code)
    word_pos = {w: i for i, w in enumerate(words)}
    out = np.zeros((len(classes), len(classes)))
    for j, cls in enumerate(classes):
        rows = [word_pos[w] for w in cls.members]
        coeffs = (chars[rows] * c0).mean(axis=0)
        rho = devectorize(coeffs, pbasis)
        image = devectorize(superop @ vectorize(rho, cbasis), cbasis)
        r = vectorize(image, pbasis)
        weights = chars @ (np.real(r) / c0) / 4**n
        for w, wt in zip(words, weights):
            if abs(wt) > 1e-13:
                if w not in index:
                    raise ReductionError(f"image component {w} outside the error alphabet")
                out[index[w], j] += wt
    return out


def full_space_correction_matrix(code: StabilizerCode) -> np.ndarray:
    """Class correction matrix with each member routed through full-space matrices.

    The syndrome of ``E`` is read off as the projector ``P_s`` with
    ``Tr(P_s E rho0 E) = 1`` for a code state ``rho0``, and the corrected
    word is identified by decomposing the matrix ``C_s E``.
    """
    rho0 = logical_zero(code)
    n = code.n
    projectors = {s: syndrome_projector(code, s) for s in code.correction_table}
    index = _class_index(code)
    classes = _classes(code)
    words = all_pauli_words(n)
    pbasis = pauli_basis(n)
    out = np.zeros((len(classes), len(classes)))
    for j, cls in enumerate(classes):
        for word in cls.members:
            e = pauli_to_matrix(word)
            state = e @ rho0 @ e
            s = max(projectors, key=lambda key: np.einsum("ij,ji->", projectors[key], state).real)
            prod = pauli_to_matrix(code.correction_table[s]) @ e
            target = words[int(np.argmax(np.abs(vectorize(prod, pbasis))))]
            out[index[target], j] += 1.0 / cls.size
        out[j, j] -= 1.0
    return out
