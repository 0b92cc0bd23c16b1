"""Continuous quantum error correction under Markovian and non-Markovian noise.

Modules
-------
numerics   matrix exponentials, spectra, ODE integration
operators  Pauli algebra, bases, superoperators
codes      stabilizer codes, error classes, class-reduced generators
lindblad   Markovian corrected dynamics and closed forms
xxbath     system qubits coupled to damped bath qubits
pmme       post-Markovian master equation with a memory kernel
analysis   fidelity diagnostics and the backflow measure
cli        ``cqec`` command-line tool
"""

__version__ = "0.1.0"
