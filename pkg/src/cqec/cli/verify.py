"""Self-checks of the closed forms and class matrices against independent routes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import analysis, codes, lindblad, pmme, reference, xxbath
from ..operators import basis_change_matrix, bloch_state, computational_basis, pauli_basis

SCOPES = ("all", "closed-forms", "class-matrices", "measure")
ETA_RATIOS = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
T_GRID = np.linspace(0.0, 4.0, 41)


@dataclass(frozen=True)
class Check:
    scope: str
    name: str
    deviation: float
    tolerance: float
    informational: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)


def _maxdev(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _reldev(a, b) -> float:
    return abs(a - b) / abs(b)


def closed_form_checks() -> list[Check]:
    out = []
    q1 = codes.one_qubit_code()
    rho0 = bloch_state(0.3, -0.4, 0.5)
    dev = 0.0
    for e in ETA_RATIOS:
        model = lindblad.MarkovModel(q1, 1.0, e)
        rho = lindblad.propagate(model, rho0, T_GRID)
        bloch = np.stack([2 * rho[:, 0, 1].real, -2 * rho[:, 0, 1].imag, (rho[:, 0, 0] - rho[:, 1, 1]).real], 1)
        closed = 2 * lindblad.closed_form_1q(0.3, -0.4, 0.5, 1.0, e, T_GRID)[:, 1:]
        dev = max(dev, _maxdev(bloch, closed))
    out.append(Check("closed-forms", "markov-1q Bloch vector vs sparse exponential", dev, 1e-9))

    dev = max(_maxdev(lindblad.fidelity_markov_1q(1.0, e, 200.0), (1 + e) / (2 + e)) for e in ETA_RATIOS)
    out.append(Check("closed-forms", "markov-1q long-time limit", dev, 1e-12))

    q3 = codes.three_qubit_code()
    dev = 0.0
    for e in ETA_RATIOS:
        model = lindblad.MarkovModel(q3, 1.0, e)
        q = lindblad.propagate(model, codes.unit_vector(q3, "0"), T_GRID)
        closed = np.stack(lindblad.closed_form_3q_coeffs(1.0, e, T_GRID), axis=1)
        dev = max(dev, _maxdev(q, closed), _maxdev(q[:, 0] + q[:, 1], lindblad.fidelity_markov_3q(1.0, e, T_GRID)))
    out.append(Check("closed-forms", "markov-3q class probabilities vs exponential", dev, 1e-9))

    dev = 0.0
    for e in ETA_RATIOS:
        gen = lindblad.build_liouvillian(lindblad.MarkovModel(q3, 1.0, e), "class")
        dev = max(dev, _maxdev(np.sort(np.linalg.eigvals(gen).real), np.sort(lindblad.eigenvalues_3q(1.0, e))))
    out.append(Check("closed-forms", "markov-3q eigenvalues", dev, 1e-10))

    dev = 0.0
    for kappa in (0.0, 1.0, 4.0, 8.0, 12.0):
        for eta in (0.0, 1.0, 4.0):
            model = xxbath.XXModel(1.0, kappa, eta)
            num = xxbath.propagate_joint_1q(model, bloch_state(0, 0, 1), T_GRID)
            c, d = xxbath.xx_coefficients(1.0, kappa, eta, T_GRID)
            dev = max(dev, _maxdev(2 * num[:, 3], c + d))
    out.append(Check("closed-forms", "xx-1q C + D vs joint exponential", dev, 1e-8))

    dev = max(_maxdev(xxbath.fidelity_xx_1q(1.0, k, e, 400.0), xxbath.asymptotic_fidelity_xx(1.0, k, e))
              for k in (1.0, 4.0, 12.0) for e in (0.5, 1.0, 4.0))
    out.append(Check("closed-forms", "xx-1q long-time limit", dev, 1e-10))

    dev = _maxdev(xxbath.build_xx_superoperator(xxbath.XXModel(1.3, 0.7, 0.4)),
                  xxbath.reference_matrix_1q(1.3, 0.7, 0.4))
    out.append(Check("closed-forms", "xx-1q generator vs transcribed matrix", dev, 1e-12))

    dev = 0.0
    for a, c in ((1.0, 1.0), (0.5, 2.0), (2.0, 0.3)):
        kernel = pmme.exponential_kernel(a, c)
        for e in ETA_RATIOS:
            model = pmme.model_1q(kernel, 1.0, e)
            q = pmme.pmme_propagate(model, np.array([0.5, 0.0, 0.0, 0.5]), T_GRID)
            f = q[:, 0] + q[:, 3]
            dev = max(dev, _maxdev(f, pmme.fidelity_pmme_1q(kernel, 1.0, e, T_GRID)),
                      _maxdev(f, 0.5 * (1 + sum(pmme.pmme_1q_laplace(kernel, 1.0, e, T_GRID)[:1]))
                              + pmme.pmme_1q_laplace(kernel, 1.0, e, T_GRID)[1]))
    out.append(Check("closed-forms", "pmme-1q closed form and Laplace route vs augmented system", dev, 1e-8))

    dev = 0.0
    for a, c in ((1.0, 1.0), (0.5, 2.0)):
        for e in (0.5, 1.0, 5.0):
            late = 1 - pmme.fidelity_pmme_1q(pmme.exponential_kernel(a, c), 1.0, e, 300.0)
            dev = max(dev, abs(late - pmme.asymptotic_infidelity_pmme(a, c, 1.0, e)))
    out.append(Check("closed-forms", "pmme-1q long-time infidelity", dev, 1e-10))

    dev, skipped = 0.0, 0
    for c in (0.5, 1.0, 5.0):
        for e in ETA_RATIOS:
            try:
                closed = pmme.fidelity_pmme_3q_closed(c, 1.0, e, T_GRID)
            except ArithmeticError:
                skipped += 1
                continue
            dev = max(dev, _maxdev(pmme.pmme_3q(pmme.exponential_kernel(c, c), 1.0, e, T_GRID), closed))
    out.append(Check("closed-forms", "pmme-3q closed form vs augmented system", dev, 1e-8,
                     note=f"{skipped} singular points skipped" if skipped else ""))
    return out


def class_matrix_checks() -> tuple[list[Check], list[str]]:
    out = []
    q5 = codes.five_qubit_code()
    labels = codes.class_labels(q5)
    sizes = dict(zip(labels, codes.class_sizes(q5)))
    bad = sum(sizes.get(k) != v for k, v in reference.FIVE_QUBIT_CLASS_SIZES.items())
    out.append(Check("class-matrices", "q5 class sizes vs table", float(bad), 0.0))

    l1 = codes.reduce_to_classes(q5, "dissipator")
    l0 = codes.reduce_to_classes(q5, "correction")
    out.append(Check("class-matrices", "q5 jump matrix column sums", float(np.max(np.abs(l1.sum(0)))), 1e-12))
    out.append(Check("class-matrices", "q5 correction matrix column sums", float(np.max(np.abs(l0.sum(0)))), 1e-12))
    out.append(Check("class-matrices", "q5 jump matrix vs full-space route",
                     _maxdev(l1, codes.full_space_class_matrix(q5)), 1e-10))
    out.append(Check("class-matrices", "q5 correction matrix vs full-space route",
                     _maxdev(l0, codes.full_space_correction_matrix(q5)), 1e-10))

    null = l1 @ reference.FIVE_QUBIT_L1_NULL
    out.append(Check("class-matrices", "q5 jump matrix annihilates class sizes", float(np.max(np.abs(null))), 1e-10))
    spec = np.sort(np.linalg.eigvals(l1).real)
    expected = np.sort(np.concatenate([np.full(m, v, dtype=float)
                                       for v, m in reference.FIVE_QUBIT_L1_SPECTRUM.items()]))
    out.append(Check("class-matrices", "q5 jump matrix spectrum", _maxdev(spec, expected), 1e-9))
    spec = np.sort(np.linalg.eigvals(l0).real)
    expected = np.sort(np.concatenate([np.full(m, v, dtype=float)
                                       for v, m in reference.FIVE_QUBIT_L0_SPECTRUM.items()]))
    out.append(Check("class-matrices", "q5 correction matrix spectrum", _maxdev(spec, expected), 1e-9))

    stat = lindblad.stationary_state(lindblad.MarkovModel(q5, 1.0, 1e6), tol=1e-13)
    mix = np.zeros(len(labels))
    for lab, w in (("0", 1), ("3B", 30), ("4A", 15), ("5C", 15), ("5E", 3)):
        mix[labels.index(lab)] = w / 64
    out.append(Check("class-matrices", "q5 strong-correction limit is uniform on zero-syndrome words",
                     _maxdev(stat, mix), 1e-5))

    q3 = codes.three_qubit_code()
    out.append(Check("class-matrices", "q3 class matrices vs transcribed",
                     max(_maxdev(codes.reduce_to_classes(q3, "correction"), reference.THREE_QUBIT_L0),
                         _maxdev(codes.reduce_to_classes(q3, "dissipator"), reference.THREE_QUBIT_L1)), 1e-12))
    out.append(Check("class-matrices", "q3 jump matrix vs full-space route",
                     _maxdev(codes.reduce_to_classes(q3, "dissipator"), codes.full_space_class_matrix(q3)), 1e-12))

    q1 = codes.one_qubit_code()
    m = lindblad.MarkovModel(q1, 0.7, 1.9)
    p = np.real(lindblad.build_liouvillian(m, pauli_basis(1)))
    # transcribed Pauli-basis matrix acts on (1, x, y, z) Bloch components
    c = np.real(lindblad.build_liouvillian(m, computational_basis(1)))
    t = basis_change_matrix(pauli_basis(1), computational_basis(1))
    dev = max(_maxdev(p, reference.one_qubit_markov_pauli(0.7, 1.9)),
              _maxdev(c, np.real(t @ reference.one_qubit_markov_pauli(0.7, 1.9) @ np.linalg.inv(t))))
    out.append(Check("class-matrices", "q1 generator in Pauli and computational bases", dev, 1e-12))

    diff = [f"jump: {line}" for line in reference.matrix_diff(l1, reference.FIVE_QUBIT_L1, labels)]
    diff += [f"correction: {line}" for line in reference.matrix_diff(l0, reference.FIVE_QUBIT_L0, labels, 1e-9)]
    transcribed_mix = reference.FIVE_QUBIT_STRONG_CORRECTION_MIX
    for lab, w in transcribed_mix.items():
        derived = mix[labels.index(lab)] * 64
        if abs(derived - w) > 1e-9:
            diff.append(f"strong-correction weight {lab}: derived {derived:g} vs transcribed {w:g}")
    return out, diff


MEASURE_POINTS = ((1.0, 1.0, 0.5), (1.0, 0.0, 1.0), (1.0, 4.0, 0.2))


def measure_checks() -> list[Check]:
    out = []
    for alpha, kappa, eta in MEASURE_POINTS + ((1.0, 1.0, 0.0),):
        model = xxbath.XXModel(alpha, kappa, eta)
        period = 8 * np.pi / np.sqrt(64 * alpha**2 - kappa**2)
        est = analysis.nonmarkovianity_numeric(model, 30 * period, period / 200)
        exact = analysis.nonmarkovianity_revival_sum(alpha, kappa, eta)
        closed = analysis.nonmarkovianity_closed(alpha, kappa, eta)
        tag = f"alpha={alpha:g} kappa={kappa:g} eta={eta:g}"
        out.append(Check("measure", f"numeric backflow vs exact revival sum, {tag}",
                         _reldev(est.value, exact), 1e-3))
        out.append(Check("measure", f"numeric backflow vs closed-form measure, {tag}",
                         _reldev(est.value, closed), 1e-2, informational=eta != 0,
                         note="closed form omits the correction shift of the revival maxima" if eta else ""))
        out.append(Check("measure", f"no random pair beats the y pair, {tag}",
                         max(est.pair_check["excess"], 0.0), 1e-2))
    for kappa in (8.0, 12.0):
        est = analysis.nonmarkovianity_numeric(xxbath.XXModel(1.0, kappa, 0.5), 40.0, 0.01)
        out.append(Check("measure", f"no backflow for kappa={kappa:g} alpha", est.value, 1e-9))
    est = analysis.nonmarkovianity_numeric(xxbath.XXModel(1.0, 0.0, 0.0), 20 * np.pi, np.pi / 200)
    out.append(Check("measure", "undamped, uncorrected case flagged unbounded", float(not est.unbounded), 0.0))
    return out


def run_verify(scope: str = "all") -> tuple[list[Check], list[str]]:
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {', '.join(SCOPES)}")
    checks, diff = [], []
    if scope in ("all", "closed-forms"):
        checks += closed_form_checks()
    if scope in ("all", "class-matrices"):
        cm, diff = class_matrix_checks()
        checks += cm
    if scope in ("all", "measure"):
        checks += measure_checks()
    return checks, diff


REPORT_COLUMNS = ["scope", "check", "deviation", "tolerance", "passed", "informational", "note"]


def report_rows(checks: list[Check], diff: list[str]) -> list[list]:
    rows = [[c.scope, c.name, c.deviation, c.tolerance, c.passed, c.informational, c.note] for c in checks]
    rows += [["class-matrices", f"diff {line}", "", "", "", True, "derived vs transcribed"] for line in diff]
    return rows


def failed(checks: list[Check]) -> list[Check]:
    return [c for c in checks if not c.passed and not c.informational]
