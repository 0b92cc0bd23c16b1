"""Figures of merit: fidelities, trace distance, backflow measure, short-time fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import DimensionError, matrix_exponential
from .operators import bloch_state, pauli_basis, vectorize
from .xxbath import XXModel, build_xx_superoperator, joint_initial_state, xx_coefficients

# increments of the trace distance below this count as rounding noise
BACKFLOW_NOISE = 1e-12
REVIVAL_CUTOFF = 1e-6
MIN_POINTS_PER_PERIOD = 50


class FitError(ValueError):
    """Short-time data cannot support a power-law fit."""


@dataclass(frozen=True)
class FidelityTrace:
    times: np.ndarray
    values: np.ndarray
    model: str = ""

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise DimensionError("times and values must be 1-D arrays of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    step: float
    family: str
    unbounded: bool = False
    warnings: tuple[str, ...] = ()
    revivals: int = 0
    pair_check: dict = field(default_factory=dict, compare=False)


def fidelity_overlap(rho, reference) -> float:
    """``Tr{(P kron I) rho}`` for a reference state or projector ``P`` on the leading qubits.

    A 1-D ``rho`` is taken as class probabilities and the overlap is
    ``q0 + q1``.
    """
    rho = np.asarray(rho)
    if rho.ndim == 1:
        return float(rho[0] + rho[1])
    ref = np.asarray(reference, dtype=complex)
    d, dr = rho.shape[0], ref.shape[0]
    if rho.shape != (d, d) or ref.shape != (dr, dr) or d % dr:
        raise DimensionError(f"cannot contract reference {ref.shape} with state {rho.shape}")
    full = np.kron(ref, np.eye(d // dr)) if d != dr else ref
    return float(np.real(np.einsum("ji,ij->", full, rho)))


def trace_distance(rho1, rho2) -> float:
    r1 = np.asarray(rho1, dtype=complex)
    r2 = np.asarray(rho2, dtype=complex)
    if r1.shape != r2.shape:
        raise DimensionError(f"shapes differ: {r1.shape} vs {r2.shape}")
    return 0.5 * float(np.sum(np.linalg.svd(r1 - r2, compute_uv=False)))


# ---------------------------------------------------------------------------
# backflow measure for the one-qubit X-X model


def nonmarkovianity_closed(alpha: float, kappa: float, eta: float) -> float:
    """Published closed form ``1/(exp((kappa + 4 eta) pi / sqrt(64 alpha^2 - kappa^2)) - 1)``.

    Exact for ``eta = 0``; with correction it places every revival maximum
    at ``omega t = n pi`` and so underestimates the backflow (see
    :func:`nonmarkovianity_revival_sum`).
    """
    disc = 64 * alpha**2 - kappa**2
    if disc <= 0:
        return 0.0
    x = (kappa + 4 * eta) * math.pi / math.sqrt(disc)
    if x == 0:
        return math.inf
    return 1.0 / math.expm1(x)


def nonmarkovianity_revival_sum(alpha: float, kappa: float, eta: float) -> float:
    """Exact backflow of the antipodal ``y`` pair, ``|C(t1)| / (1 - r)``.

    ``|C|`` has its extrema where ``cot(w t) = -(16 alpha^2 + eta kappa)/(eta sqrt(64 alpha^2 - kappa^2))``,
    spaced by ``pi/w``, and successive revival heights shrink by
    ``r = exp(-(kappa + 4 eta) pi / sqrt(64 alpha^2 - kappa^2))``. Each revival
    climbs from a zero of ``C`` to the next extremum.
    """
    disc = 64 * alpha**2 - kappa**2
    if disc <= 0:
        return 0.0
    root = math.sqrt(disc)
    w = root / 4
    r = math.exp(-(kappa + 4 * eta) * math.pi / root)
    if r >= 1:
        return math.inf
    if eta == 0:
        phase = math.pi
    else:
        phase = math.pi / 2 - math.atan(-(16 * alpha**2 + eta * kappa) / (eta * root))
    c1, _ = xx_coefficients(alpha, kappa, eta, phase / w)
    return float(abs(c1)) / (1 - r)


def _difference_propagators(model: XXModel, times: np.ndarray) -> np.ndarray:
    """Maps from an initial Bloch-vector difference to the system difference at each time.

    Built from the joint 16x16 generator; shape ``(len(times), 3, 3)``.
    """
    m = build_xx_superoperator(model)
    step = times[1] - times[0]
    e_step = matrix_exponential(m, step)
    basis = pauli_basis(2)
    # columns: joint difference vectors for unit Bloch differences along x, y, z
    cols = []
    for axis in range(3):
        r = np.zeros(3)
        r[axis] = 1.0
        plus = joint_initial_state(bloch_state(*r))
        minus = joint_initial_state(bloch_state(*(-r)))
        cols.append(vectorize(plus - minus, basis).real / 2)
    v = np.array(cols).T
    out = np.empty((times.size, 3, 3))
    for k in range(times.size):
        # system Bloch component sigma_i: 2 * c_{i,I} * 2 (coefficient to Bloch, bath trace)
        out[k] = 4 * v.reshape(4, 4, 3)[1:, 0, :]
        v = e_step @ v
    return out


def _backflow(d: np.ndarray) -> tuple[float, np.ndarray]:
    """Sum of positive increments and the per-revival totals, on the raw grid."""
    inc = np.diff(d)
    up = inc > BACKFLOW_NOISE
    if not up.any():
        return 0.0, np.zeros(0)
    starts = up & ~np.concatenate(([False], up[:-1]))
    labels = np.cumsum(starts) * up
    revivals = np.bincount(labels, weights=np.where(up, inc, 0.0))[1:]
    return float(revivals.sum()), revivals


_S = np.linspace(-1.0, 1.0, 4001)


def _refined_extremum(v: np.ndarray, k: int, kind: str) -> float:
    # quadratic through v[k-1], v[k], v[k+1]; the norm can have a kink at zero
    a, b, c = v[k - 1], v[k], v[k + 1]
    curve = b + 0.5 * (c - a) * _S[:, None] + 0.5 * (a - 2 * b + c) * _S[:, None] ** 2
    norms = 0.5 * np.linalg.norm(curve, axis=1)
    return float(norms.min() if kind == "min" else norms.max())


def _refined_backflow(v: np.ndarray) -> tuple[float, np.ndarray]:
    """Backflow of ``d = |v|/2`` with interior extrema refined between grid points."""
    d = 0.5 * np.linalg.norm(v, axis=1)
    _, raw = _backflow(d)
    if raw.size == 0:
        return 0.0, raw
    inc = np.diff(d)
    sign = np.where(inc > BACKFLOW_NOISE, 1, np.where(inc < -BACKFLOW_NOISE, -1, 0))
    # carry the last definite direction across flat steps
    for i in range(1, sign.size):
        if sign[i] == 0:
            sign[i] = sign[i - 1]
    turns = np.nonzero(sign[1:] != sign[:-1])[0] + 1
    points = [(0, d[0])]
    for k in turns:
        kind = "min" if sign[k - 1] < 0 else "max"
        points.append((k, _refined_extremum(v, k, kind)))
    points.append((d.size - 1, d[-1]))
    revivals = []
    for (_, lo), (_, hi) in zip(points[:-1], points[1:]):
        if hi - lo > BACKFLOW_NOISE:
            revivals.append(hi - lo)
    revivals = np.array(revivals)
    return float(revivals.sum()), revivals


def nonmarkovianity_numeric(model: XXModel, t_max: float, step: float,
                            random_pairs: int = 200, seed: int = 7) -> MeasureEstimate:
    """Backflow of trace distance on a uniform grid.

    The antipodal pair along ``y`` (no ``x`` difference) is evolved through
    the joint generator and all increases of its trace distance are summed.
    ``random_pairs`` random pairs of Bloch vectors are evolved as a check
    that none beats that family by more than 1%.

    The result is flagged ``unbounded`` when revivals do not decay over
    ``t_max``, as in the undamped coupling without cooling or correction.
    """
    if model.n != 1:
        raise DimensionError("backflow measure is defined for one system qubit")
    if step <= 0 or t_max <= step:
        raise ValueError("need 0 < step < t_max")
    warnings = []
    disc = 64 * model.alpha**2 - model.kappa**2
    if disc > 0:
        period = 8 * math.pi / math.sqrt(disc)
        if period / step < MIN_POINTS_PER_PERIOD:
            warnings.append(
                f"grid step {step:.3g} gives fewer than {MIN_POINTS_PER_PERIOD} points per period {period:.3g}"
            )
    times = step * np.arange(int(math.floor(t_max / step)) + 1)
    props = _difference_propagators(model, times)
    # antipodal pair along y: difference (0, 2, 0)
    value, revivals = _refined_backflow(props @ np.array([0.0, 2.0, 0.0]))

    unbounded = bool(revivals.size >= 4 and revivals[-3:-1].min() > 0.5 * revivals[0])
    # drop revivals once they stop mattering
    kept, running = 0, 0.0
    for r in revivals:
        if running and r < REVIVAL_CUTOFF * running and not unbounded:
            break
        running += r
        kept += 1
    value = running

    rng = np.random.default_rng(seed)
    worst = 0.0
    # pure states: mixing only shrinks the difference vector
    ends = rng.normal(size=(random_pairs, 2, 3))
    ends /= np.linalg.norm(ends, axis=2, keepdims=True)
    diffs = np.einsum("kij,pj->pki", props, ends[:, 0] - ends[:, 1])
    for p in range(random_pairs):
        n_pair, _ = _backflow(0.5 * np.linalg.norm(diffs[p], axis=1))
        worst = max(worst, n_pair)
    excess = (worst - value) / value if value > 0 else (math.inf if worst > 0 else 0.0)
    if excess > 0.01:
        warnings.append(f"a random pair exceeds the antipodal family by {100 * excess:.2f}%")
    return MeasureEstimate(
        value=float(value), step=step, family="antipodal y pair", unbounded=unbounded,
        warnings=tuple(warnings), revivals=kept,
        pair_check={"pairs": random_pairs, "best_pair": float(worst), "excess": float(excess)},
    )


# ---------------------------------------------------------------------------
# short-time behaviour


def short_time_fit(trace: FidelityTrace, max_order: int = 4) -> tuple[int, float]:
    """Dominant power ``p`` and coefficient ``k`` of ``1 - F(t) ~ k t^p``.

    ``p`` is the rounded log-log slope; ``k`` comes from a linear least
    squares fit of ``k t^p + k' t^(p+1)`` so that the next order does not
    bias it.

    Raises
    ------
    FitError
        If fewer than 20 usable points remain or ``1 - F`` is not
        increasing.
    """
    t = trace.times
    y = 1.0 - trace.values
    keep = t > 0
    t, y = t[keep], y[keep]
    if t.size < 20:
        raise FitError(f"need at least 20 points with t > 0, got {t.size}")
    scale = np.max(np.abs(y))
    if scale == 0 or np.any(np.diff(y) < -1e-12 * scale) or np.any(y <= 0):
        raise FitError("1 - F is not positive and increasing on the fit window")
    slope = np.polyfit(np.log(t), np.log(y), 1)[0]
    p = int(round(slope))
    if not 1 <= p <= max_order:
        raise FitError(f"log-log slope {slope:.3g} outside 1..{max_order}")
    design = np.vstack([t**p, t ** (p + 1)]).T
    coef = np.linalg.lstsq(design, y, rcond=None)[0]
    return p, float(coef[0])


def asymptotic_infidelity(model, **rates) -> float:
    """Long-time ``1 - F`` for the three one-qubit families.

    ``model`` is ``"markov"`` (``gamma``, ``eta``), ``"xx"`` (``alpha``,
    ``kappa``, ``eta``) or ``"pmme"`` (``a``, ``c``, ``gamma``, ``eta``),
    or a one-qubit :class:`~cqec.xxbath.XXModel` / :class:`~cqec.lindblad.MarkovModel`.
    """
    from .lindblad import MarkovModel

    if isinstance(model, XXModel):
        if model.n != 1:
            raise ValueError("asymptotic infidelity is available for one system qubit only")
        model, rates = "xx", dict(alpha=model.alpha, kappa=model.kappa, eta=model.eta)
    elif isinstance(model, MarkovModel):
        if model.code.n != 1:
            raise ValueError("asymptotic infidelity is available for one system qubit only")
        model, rates = "markov", dict(gamma=model.gamma, eta=model.eta)
    if model == "markov":
        g, e = rates["gamma"], rates["eta"]
        return g / (2 * g + e)
    if model == "xx":
        a, k, e = rates["alpha"], rates["kappa"], rates["eta"]
        return 4 * a**2 / (e * (k + 2 * e) + 8 * a**2)
    if model == "pmme":
        a, c, g, e = rates["a"], rates["c"], rates["gamma"], rates["eta"]
        return a * g * (c + e) / (c * (2 * a * g + e * (2 * g + c + e)))
    raise ValueError(f"unsupported model {model!r}")
