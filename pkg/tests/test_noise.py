import numpy as np
import pytest

from qmtl.circuit import Circuit, GateOp, evaluate_expectations, random_circuit, trainable
from qmtl.noise import NoiseSpec, noisy_expectations
from qmtl.statevector import pauli


def _ry_circuit():
    return Circuit(1, [GateOp("ry", (0,), (trainable(0),))], 1, 0)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(p1=-0.1, p2=0.0)
    with pytest.raises(ValueError):
        NoiseSpec(p1=0.0, p2=1.5)
    with pytest.raises(ValueError):
        NoiseSpec(p1=0.1, p2=0.1, num_trajectories=0)


def test_zero_noise_is_bitwise_exact():
    rng = np.random.default_rng(1)
    circuit = random_circuit(3, 15, rng)
    theta = rng.uniform(0, 2 * np.pi, circuit.num_trainable)
    observables = [pauli("Z0"), pauli("X1*Z2")]
    exact = evaluate_expectations(circuit, theta, (), observables)
    noisy = noisy_expectations(circuit, theta, (), observables,
                               NoiseSpec(p1=0.0, p2=0.0, num_trajectories=7))
    assert np.array_equal(np.asarray(exact), np.asarray(noisy))


@pytest.mark.parametrize("p", [0.05, 0.2])
def test_depolarizing_attenuation_closed_form(p):
    # single Ry(theta) with 1q depolarizing: E[<Z>] = (1 - 4p/3) cos(theta)
    theta = 0.8
    n = 4000
    noise = NoiseSpec(p1=p, p2=0.0, num_trajectories=n, seed=42)
    (value,) = noisy_expectations(_ry_circuit(), [theta], (), [pauli("Z0")], noise)
    expected = (1 - 4 * p / 3) * np.cos(theta)
    # each trajectory yields +-cos(theta); allow 4 binomial standard errors
    se = np.sqrt((1 - (1 - 4 * p / 3) ** 2) / n) * abs(np.cos(theta))
    assert abs(value - expected) <= 4 * se


def test_noise_deterministic_given_seed():
    noise = NoiseSpec(p1=0.1, p2=0.0, num_trajectories=50, seed=3)
    a = noisy_expectations(_ry_circuit(), [0.5], (), [pauli("Z0")], noise)
    b = noisy_expectations(_ry_circuit(), [0.5], (), [pauli("Z0")], noise)
    assert np.array_equal(a, b)


def test_two_qubit_noise_attenuates_entangled_expectation():
    circuit = Circuit(
        2, [GateOp("h", (0,)), GateOp("cnot", (0, 1))], 0, 0
    )
    obs = [pauli("Z0*Z1")]
    exact = evaluate_expectations(circuit, (), (), obs)
    assert exact[0] == pytest.approx(1.0)
    noise = NoiseSpec(p1=0.0, p2=0.3, num_trajectories=3000, seed=0)
    (noisy,) = noisy_expectations(circuit, (), (), obs, noise)
    # Pauli insertion after the CNOT flips ZZ for 8 of 15 choices:
    # E = 1 - p2 * 16/15... empirically just require clear attenuation
    assert 0.5 < noisy < 0.95
