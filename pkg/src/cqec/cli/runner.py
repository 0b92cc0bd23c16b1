"""Turn an :class:`ExperimentConfig` into a table of time series."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import lindblad, pmme, xxbath
from ..codes import class_labels, get_code
from .config import ExperimentConfig

THREADS_ENV = "CQEC_THREADS"


@dataclass
class Table:
    columns: list[str]
    rows: np.ndarray
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def make_kernel(cfg: ExperimentConfig) -> pmme.MemoryKernel:
    k = cfg.kernel
    if k.kind == "delta":
        return pmme.delta_kernel()
    if k.kind == "exponential":
        return pmme.exponential_kernel(k.a, k.c)
    return pmme.damped_kernel(k.a, k.b, k.c)


def _class_table(t, q, labels):
    cols = ["t", "fidelity"] + [f"q_{lab}" for lab in labels]
    rows = np.column_stack([t, q[:, 0] + q[:, 1], q])
    return cols, rows


def run_experiment(cfg: ExperimentConfig) -> Table:
    """Fidelity trace of one configuration on its time grid.

    Raises :class:`cqec.numerics.IntegrationError` if the integrator stops early.
    """
    t = cfg.times()
    r = cfg.rates
    code = get_code(cfg.code)
    meta = {"model": cfg.model, "code": cfg.code, "rates": dict(sorted(r.items()))}
    if cfg.model == "xx":
        model = xxbath.XXModel(r["alpha"], r["kappa"], r["eta"], n=code.n, code=code)
        meta["regime"] = model.regime
        if cfg.code == "q1":
            c, d = xxbath.xx_coefficients(r["alpha"], r["kappa"], r["eta"], t)
            cols = ["t", "fidelity", "C", "D"]
            rows = np.column_stack([t, 0.5 * (1 + c + d), c, d])
        else:
            trace = xxbath.simulate_xx_code(model, t_grid=t)
            cols = ["t", "fidelity", "trace"]
            rows = np.column_stack([t, trace.fidelity, trace.trace])
        return Table(cols, rows, meta)

    if cfg.model == "pmme":
        kernel = make_kernel(cfg)
        meta["kernel"] = {"kind": kernel.kind, "a": kernel.a, "b": kernel.b, "c": kernel.c}
        if cfg.code == "q1":
            return Table(["t", "fidelity"],
                         np.column_stack([t, pmme.fidelity_pmme_1q(kernel, r["gamma"], r["eta"], t)]), meta)
        model = pmme.model_classes(code, kernel, r["gamma"], r["eta"])
        q0 = np.zeros(model.dim)
        q0[0] = 1.0
        cols, rows = _class_table(t, pmme.pmme_propagate(model, q0, t), class_labels(code))
        return Table(cols, rows, meta)

    model = lindblad.MarkovModel(code, r["gamma"], r["eta"])
    if cfg.code == "q1":
        return Table(["t", "fidelity"],
                     np.column_stack([t, lindblad.fidelity_markov_1q(r["gamma"], r["eta"], t)]), meta)
    q0 = np.zeros(len(class_labels(code)))
    q0[0] = 1.0
    cols, rows = _class_table(t, lindblad.propagate(model, q0, t), class_labels(code))
    return Table(cols, rows, meta)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def run_sweep(cfg: ExperimentConfig, threads: int | None = None) -> Table:
    """One run per value of ``cfg.sweep_rate``; rows sorted by that value then time."""
    if cfg.sweep_rate is None:
        raise ValueError("configuration has no sweep section")
    values = sorted(set(cfg.sweep_values))
    configs = [cfg.with_rate(cfg.sweep_rate, v) for v in values]
    threads = thread_count() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tables = list(pool.map(run_experiment, configs))
    else:
        tables = [run_experiment(c) for c in configs]
    cols = [cfg.sweep_rate] + tables[0].columns
    rows = np.vstack([np.column_stack([np.full(len(tb.rows), v), tb.rows]) for v, tb in zip(values, tables)])
    meta = dict(tables[0].meta)
    meta["sweep"] = {"rate": cfg.sweep_rate, "values": values}
    meta.pop("regime", None)
    return Table(cols, rows, meta)
