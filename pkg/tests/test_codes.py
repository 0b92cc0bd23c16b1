import numpy as np
import pytest

from cqec import reference
from cqec.codes import (
    CODES,
    ReductionError,
    apply_correction_map,
    class_labels,
    class_sizes,
    classify,
    code_projector,
    correction_member_spread,
    enumerate_error_classes,
    five_qubit_code,
    full_space_class_matrix,
    full_space_correction_matrix,
    get_code,
    logical_zero,
    reduce_to_classes,
    syndrome,
    three_qubit_code,
)
from cqec.operators import PauliString, all_pauli_words, commutes, pauli_to_matrix


def random_code_state(code, seed):
    rng = np.random.default_rng(seed)
    proj = code_projector(code)
    psi = proj @ (rng.normal(size=2**code.n) + 1j * rng.normal(size=2**code.n))
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


@pytest.mark.parametrize("key", sorted(CODES))
def test_generators_commute_and_logicals_anticommute(key):
    code = get_code(key)
    gens = list(code.generators)
    for a in gens:
        assert all(commutes(a, b) for b in gens)
    if code.logicals:
        xl, zl = code.logicals
        assert not commutes(xl, zl)
        assert all(commutes(xl, g) and commutes(zl, g) for g in gens)


def test_five_qubit_syndromes_are_distinct():
    code = five_qubit_code()
    singles = [PauliString.single(5, q, a) for q in range(5) for a in "XYZ"]
    synd = {syndrome(code, e) for e in singles}
    assert len(synd) == 15 and (0, 0, 0, 0) not in synd


def test_five_qubit_class_sizes_match_table():
    code = five_qubit_code()
    assert dict(zip(class_labels(code), class_sizes(code).tolist())) == reference.FIVE_QUBIT_CLASS_SIZES
    assert sum(c.size for c in enumerate_error_classes(code)) == 1024


def test_classes_share_weight_and_pattern():
    code = five_qubit_code()
    for cls in enumerate_error_classes(code):
        sigs = {(sum(ch != "I" for ch in w), tuple(sorted(w.count(a) for a in "XYZ"))) for w in cls.members}
        assert len(sigs) == 1
        assert all(classify(code, w) == classify(code, cls.members[0]) for w in cls.members)


def test_dissipator_lumpable_exhaustively():
    # the reduction compares every member's column and raises on any mismatch
    for key in CODES:
        reduce_to_classes(get_code(key), "dissipator")


def test_bitflip_noise_leaves_three_qubit_alphabet_for_depolarizing():
    with pytest.raises(ReductionError):
        reduce_to_classes(three_qubit_code(), "depolarizing")


@pytest.mark.parametrize("key", sorted(CODES))
def test_column_sums_vanish(key):
    code = get_code(key)
    for gen in ("dissipator", "correction"):
        assert np.max(np.abs(reduce_to_classes(code, gen).sum(axis=0))) <= 1e-12


def test_full_space_oracle_matches_five_qubit_class_matrices():
    code = five_qubit_code()
    assert np.max(np.abs(full_space_class_matrix(code) - reduce_to_classes(code, "dissipator"))) <= 1e-12
    assert np.max(np.abs(full_space_correction_matrix(code) - reduce_to_classes(code, "correction"))) <= 1e-12


def test_full_space_oracle_matches_three_qubit_class_matrices():
    code = three_qubit_code()
    assert np.max(np.abs(full_space_class_matrix(code) - reduce_to_classes(code, "dissipator"))) <= 1e-12
    assert np.array_equal(reduce_to_classes(code, "dissipator"), reference.THREE_QUBIT_L1)
    assert np.array_equal(reduce_to_classes(code, "correction"), reference.THREE_QUBIT_L0)


def test_transcribed_jump_matrix_differs_only_in_one_cell():
    code = five_qubit_code()
    diff = reference.matrix_diff(reduce_to_classes(code, "dissipator"), reference.FIVE_QUBIT_L1, class_labels(code))
    assert diff == ["4C,5D: derived 3 vs transcribed 0"]
    # the tabulated column does not sum to zero, the derived one does
    assert reference.FIVE_QUBIT_L1[:, class_labels(code).index("5D")].sum() == -3


def test_transcribed_correction_matrix_agrees():
    code = five_qubit_code()
    assert reference.matrix_diff(reduce_to_classes(code, "correction"), reference.FIVE_QUBIT_L0,
                                 class_labels(code), 1e-12) == []


def test_correction_map_is_class_averaged():
    # members of some classes are corrected into different classes
    assert correction_member_spread(five_qubit_code()) == 1.0
    assert correction_member_spread(three_qubit_code()) == 0.0


def test_five_qubit_spectra():
    code = five_qubit_code()
    for gen, table in (("dissipator", reference.FIVE_QUBIT_L1_SPECTRUM),
                       ("correction", reference.FIVE_QUBIT_L0_SPECTRUM)):
        ev = np.sort(np.linalg.eigvals(reduce_to_classes(code, gen)).real)
        expected = np.sort(np.concatenate([np.full(m, v, dtype=float) for v, m in table.items()]))
        assert np.max(np.abs(ev - expected)) <= 1e-9


def test_five_qubit_jump_nullspace_is_multiplicity_vector():
    l1 = reduce_to_classes(five_qubit_code(), "dissipator")
    assert np.max(np.abs(l1 @ reference.FIVE_QUBIT_L1_NULL)) == 0


@pytest.mark.parametrize("key", ["q3", "q5"])
def test_single_errors_are_corrected(key):
    code = get_code(key)
    letters = code.error_alphabet
    for seed in range(3):
        rho = random_code_state(code, seed)
        for q in range(code.n):
            for a in letters:
                e = pauli_to_matrix(PauliString.single(code.n, q, a))
                assert np.allclose(apply_correction_map(code, e @ rho @ e), rho, atol=1e-12)


def test_logical_zero_is_a_code_state():
    for key in ("q3", "q5"):
        code = get_code(key)
        rho = logical_zero(code)
        assert np.allclose(code_projector(code) @ rho, rho)
        zl = pauli_to_matrix(code.logicals[1])
        assert np.isclose(np.trace(zl @ rho).real, 1.0)


def test_every_word_is_classified_for_five_qubits():
    code = five_qubit_code()
    seen = {classify(code, w) for w in all_pauli_words(5)}
    assert seen == set(range(16))


def test_unknown_code_key():
    with pytest.raises(ValueError):
        get_code("q7")
