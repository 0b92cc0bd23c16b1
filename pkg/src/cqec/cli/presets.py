"""Parameter families for the fidelity figures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .. import pmme, xxbath
from .config import ExperimentConfig, KernelSpec


@dataclass(frozen=True)
class FigurePreset:
    id: str
    description: str
    base: ExperimentConfig
    parameter: str
    values: tuple[float, ...]
    xlabel: str
    asymptote: Callable[[ExperimentConfig], float] | None = None
    # oscillating families may dip below their limit before settling
    oscillating: bool = False
    # kernels of the form c e^{-ct} tie the amplitude to the rate
    tie_amplitude: bool = False

    def configs(self) -> list[ExperimentConfig]:
        out = []
        for v in self.values:
            cfg = self.base.with_rate(self.parameter, v)
            if self.tie_amplitude:
                cfg = cfg.with_rate("a", cfg.kernel.c)
            out.append(cfg)
        return out

    def curve_name(self, value: float) -> str:
        return f"{self.id}_{self.parameter}={value:g}"


def _markov_1q(cfg):
    r = cfg.rates
    return (r["gamma"] + r["eta"]) / (2 * r["gamma"] + r["eta"])


def _xx_1q(cfg):
    r = cfg.rates
    return xxbath.asymptotic_fidelity_xx(r["alpha"], r["kappa"], r["eta"])


def _pmme_1q(cfg):
    r = cfg.rates
    return 1.0 - pmme.asymptotic_infidelity_pmme(cfg.kernel.a, cfg.kernel.c, r["gamma"], r["eta"])


def _half(cfg):
    return 0.5


def _cfg(model, code, t_max, samples=401, kernel=KernelSpec(), **rates):
    return ExperimentConfig(model=model, code=code, rates=rates, kernel=kernel, t_max=t_max, samples=samples)


ETA_RATIOS = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
KAPPA_RATIOS = (1.0, 2.0, 4.0, 8.0, 12.0)
XX_ETAS = (0.0, 0.5, 1.0, 2.0, 4.0)
FIVE_QUBIT_ETAS = (0.0, 5.0, 10.0, 20.0, 50.0)
EXP_KERNEL = KernelSpec(kind="exponential", a=1.0, c=1.0)

PRESETS: dict[str, FigurePreset] = {p.id: p for p in (
    FigurePreset("markov-1q", "bit-flip qubit, Markovian noise, correction rate eta/gamma",
                 _cfg("markov", "q1", 5.0, gamma=1.0, eta=0.0), "eta", ETA_RATIOS,
                 "gamma t", _markov_1q),
    FigurePreset("xx-1q-eta", "qubit coupled to a damped bath qubit, kappa = alpha, varying eta",
                 _cfg("xx", "q1", 10.0, alpha=1.0, kappa=1.0, eta=0.0), "eta", XX_ETAS,
                 "alpha t", _xx_1q, oscillating=True),
    FigurePreset("xx-1q-kappa", "qubit coupled to a damped bath qubit, eta = alpha, varying kappa",
                 _cfg("xx", "q1", 10.0, alpha=1.0, kappa=1.0, eta=1.0), "kappa", KAPPA_RATIOS,
                 "alpha t", _xx_1q, oscillating=True),
    FigurePreset("pmme-1q-exponential", "bit-flip qubit, memory kernel exp(-t), varying eta",
                 _cfg("pmme", "q1", 10.0, kernel=EXP_KERNEL, gamma=1.0, eta=0.0), "eta", ETA_RATIOS,
                 "gamma t", _pmme_1q),
    FigurePreset("pmme-1q-damped", "bit-flip qubit, kernel (s+1)/(s^2+s+1), varying eta",
                 _cfg("pmme", "q1", 10.0, kernel=KernelSpec("damped", 1.0, 1.0, 1.0), gamma=1.0, eta=0.0),
                 "eta", ETA_RATIOS, "gamma t", None, oscillating=True),
    FigurePreset("markov-3q", "three-qubit bit-flip code, Markovian noise, varying eta",
                 _cfg("markov", "q3", 3.0, gamma=1.0, eta=0.0), "eta", ETA_RATIOS, "gamma t", _half),
    FigurePreset("pmme-3q", "three-qubit code, memory kernel exp(-t), varying eta",
                 _cfg("pmme", "q3", 5.0, kernel=EXP_KERNEL, gamma=1.0, eta=0.0), "eta", ETA_RATIOS,
                 "gamma t", _half),
    FigurePreset("pmme-3q-c", "three-qubit code, kernel c exp(-ct), eta = gamma, varying c",
                 _cfg("pmme", "q3", 5.0, kernel=EXP_KERNEL, gamma=1.0, eta=1.0), "c",
                 (0.5, 1.0, 2.0, 5.0, 10.0), "gamma t", _half, tie_amplitude=True),
    FigurePreset("xx-3q-cooled", "three-qubit code with bath qubits, kappa = alpha, varying eta",
                 _cfg("xx", "q3", 5.0, samples=201, alpha=1.0, kappa=1.0, eta=0.0), "eta",
                 (0.0, 1.0, 2.0, 4.0), "alpha t", None, oscillating=True),
    FigurePreset("xx-3q-uncooled", "three-qubit code with undamped bath qubits, varying eta",
                 _cfg("xx", "q3", 5.0, samples=201, alpha=1.0, kappa=0.0, eta=0.0), "eta",
                 (0.0, 1.0, 2.0, 4.0), "alpha t", None, oscillating=True),
    FigurePreset("xx-3q-kappa", "three-qubit code with bath qubits, eta = alpha, varying kappa",
                 _cfg("xx", "q3", 5.0, samples=201, alpha=1.0, kappa=1.0, eta=1.0), "kappa",
                 KAPPA_RATIOS, "alpha t", None, oscillating=True),
    FigurePreset("markov-5q", "five-qubit code, depolarizing noise, varying eta",
                 _cfg("markov", "q5", 0.5, gamma=1.0, eta=0.0), "eta", FIVE_QUBIT_ETAS,
                 "gamma t", None),
    FigurePreset("pmme-5q", "five-qubit code, memory kernel exp(-t), varying eta",
                 _cfg("pmme", "q5", 0.5, kernel=EXP_KERNEL, gamma=1.0, eta=0.0), "eta",
                 FIVE_QUBIT_ETAS, "gamma t", None),
)}


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown figure {name!r}; choose from {', '.join(PRESETS)}") from None
