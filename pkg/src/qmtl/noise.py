"""Depolarizing gate noise via Pauli-twirl trajectory sampling.

Each trajectory inserts, after every single-qubit gate with probability p1,
one of {X, Y, Z} uniformly on that qubit, and after every two-qubit gate with
probability p2 one of the 15 non-identity two-qubit Paulis uniformly.
Memory stays at one statevector per trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import statevector as sv
from .circuit import Circuit, _run
from .statevector import PauliString


@dataclass(frozen=True)
class NoiseSpec:
    p1: float
    p2: float
    num_trajectories: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p1 <= 1.0 or not 0.0 <= self.p2 <= 1.0:
            raise ValueError("depolarizing probabilities must be in [0, 1]")
        if self.num_trajectories < 1:
            raise ValueError("num_trajectories must be >= 1")


_PAULI_1Q = ("X", "Y", "Z")
# non-identity pairs over {I, X, Y, Z} x {I, X, Y, Z}
_PAULI_2Q = [
    (a, b)
    for a in (None, "X", "Y", "Z")
    for b in (None, "X", "Y", "Z")
    if not (a is None and b is None)
]


def noisy_expectations(
    circuit: Circuit,
    theta: Sequence[float],
    features: Sequence[float],
    observables: Sequence[PauliString],
    noise: NoiseSpec,
) -> np.ndarray:
    """Monte-Carlo average of observable expectations over noisy trajectories.

    With p1 = p2 = 0 this returns the exact noiseless expectations
    bit-for-bit (trajectories are degenerate).
    """
    from .circuit import evaluate_expectations

    if noise.p1 == 0.0 and noise.p2 == 0.0:
        return evaluate_expectations(circuit, theta, features, observables)

    theta = np.asarray(theta, dtype=float)
    features = np.asarray(features, dtype=float)
    nq = circuit.num_qubits
    rng = np.random.default_rng(noise.seed)

    def hook(amps, op):
        if op.kind == "cnot":
            if noise.p2 > 0.0 and rng.random() < noise.p2:
                pa, pb = _PAULI_2Q[rng.integers(len(_PAULI_2Q))]
                if pa is not None:
                    amps = sv.apply_matrix(amps, sv.PAULI_MATRICES[pa], op.qubits[0], nq)
                if pb is not None:
                    amps = sv.apply_matrix(amps, sv.PAULI_MATRICES[pb], op.qubits[1], nq)
        else:
            if noise.p1 > 0.0 and rng.random() < noise.p1:
                axis = _PAULI_1Q[rng.integers(3)]
                amps = sv.apply_matrix(amps, sv.PAULI_MATRICES[axis], op.qubits[0], nq)
        return amps

    total = np.zeros(len(observables))
    for _ in range(noise.num_trajectories):
        amps = np.zeros(1 << nq, dtype=complex)
        amps[0] = 1.0
        amps = _run(amps, circuit, theta, features, noise_hook=hook)
        for i, obs in enumerate(observables):
            total[i] += sv.expectation_array(amps, obs.as_dict(), nq)
    return total / noise.num_trajectories
