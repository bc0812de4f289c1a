"""Exact gradients of observable expectations via the parameter-shift rule,
plus a central finite-difference oracle and the batch loss chain rule.

A trainable index referenced by m gate occurrences is differentiated by
shifting one occurrence at a time by +-pi/2 and summing (product rule);
parameter reuse in the shared encoder makes this the general case.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .circuit import (
    Circuit,
    ROTATION_KINDS,
    evaluate_expectations,
    evaluate_expectations_batch,
)
from .errors import DegenerateBatchError, UnsupportedGateError
from .statevector import PauliString

SHIFT = np.pi / 2.0


def _occurrences(circuit: Circuit, kind: str) -> list:
    """Per parameter index, the list of (op_index, slot) gate occurrences."""
    size = circuit.num_trainable if kind == "theta" else circuit.num_inputs
    occ = [[] for _ in range(size)]
    for op_idx, op in enumerate(circuit.ops):
        for slot, ref in enumerate(op.params):
            if ref.kind == kind:
                if op.kind not in ROTATION_KINDS:
                    raise UnsupportedGateError(
                        f"{kind} slot {ref.index} bound to non-rotation gate {op.kind!r}"
                    )
                occ[ref.index].append((op_idx, slot))
    return occ


def _shift_jacobian(circuit, theta, features, observables, kind, shift, batched):
    occ = _occurrences(circuit, kind)
    if batched:
        evalf = lambda ov: evaluate_expectations_batch(circuit, theta, features, observables, ov)
        shape = (features.shape[0], len(observables), len(occ))
    else:
        evalf = lambda ov: evaluate_expectations(circuit, theta, features, observables, ov)
        shape = (len(observables), len(occ))
    jac = np.zeros(shape)
    for index, places in enumerate(occ):
        for place in places:
            plus = evalf({place: shift})
            minus = evalf({place: -shift})
            jac[..., index] += (plus - minus) / 2.0
    return jac


def param_shift_jacobian(
    circuit: Circuit,
    theta: Sequence[float],
    features: Sequence[float],
    observables: Sequence[PauliString],
    shift: float = SHIFT,
) -> np.ndarray:
    """d<O_i>/d theta_j, exact for Pauli-generated rotations.

    ``shift`` exists as a verification hook; anything other than pi/2
    deliberately breaks exactness.
    """
    theta = np.asarray(theta, dtype=float)
    features = np.asarray(features, dtype=float)
    return _shift_jacobian(circuit, theta, features, observables, "theta", shift, batched=False)


def param_shift_jacobian_batch(
    circuit: Circuit,
    theta: Sequence[float],
    features: np.ndarray,
    observables: Sequence[PauliString],
    shift: float = SHIFT,
) -> np.ndarray:
    """(B, n_obs, n_theta) Jacobian over a batch of feature rows."""
    theta = np.asarray(theta, dtype=float)
    features = np.asarray(features, dtype=float)
    return _shift_jacobian(circuit, theta, features, observables, "theta", shift, batched=True)


def input_shift_jacobian_batch(
    circuit: Circuit,
    theta: Sequence[float],
    features: np.ndarray,
    observables: Sequence[PauliString],
    shift: float = SHIFT,
) -> np.ndarray:
    """(B, n_obs, n_inputs) Jacobian wrt input-bound rotation angles."""
    theta = np.asarray(theta, dtype=float)
    features = np.asarray(features, dtype=float)
    return _shift_jacobian(circuit, theta, features, observables, "input", shift, batched=True)


def finite_diff_jacobian(
    circuit: Circuit,
    theta: Sequence[float],
    features: Sequence[float],
    observables: Sequence[PauliString],
    eps: float = 1e-6,
) -> np.ndarray:
    """Central-difference oracle, independent of the parameter-shift path."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    theta = np.asarray(theta, dtype=float)
    features = np.asarray(features, dtype=float)
    jac = np.zeros((len(observables), circuit.num_trainable))
    for j in range(circuit.num_trainable):
        up = theta.copy()
        up[j] += eps
        down = theta.copy()
        down[j] -= eps
        plus = evaluate_expectations(circuit, up, features, observables)
        minus = evaluate_expectations(circuit, down, features, observables)
        jac[:, j] = (plus - minus) / (2.0 * eps)
    return jac


def loss_gradient(head_model, params: np.ndarray, features: np.ndarray,
                  labels: dict, task_specs: Sequence) -> tuple:
    """Total multi-task loss and its gradient over the model's parameters.

    ``labels[name]`` is a length-B array with the MISSING sentinel marking
    unlabeled entries.  Per task the loss is lambda_t times the mean over
    labeled entries; missing entries contribute exactly zero gradient.
    """
    from .losses import task_loss_and_grad

    features = np.asarray(features, dtype=float)
    logits = head_model.forward_batch(params, features)
    total = 0.0
    dlogits = {}
    contributed = 0
    for spec in task_specs:
        value, dlogit, n_labeled = task_loss_and_grad(
            spec, logits[spec.name], np.asarray(labels[spec.name])
        )
        total += spec.lambda_weight * value
        dlogits[spec.name] = spec.lambda_weight * dlogit
        contributed += n_labeled
    if contributed == 0:
        raise DegenerateBatchError("no labeled entries in batch for any task")
    grad = head_model.backward_batch(params, features, dlogits)
    return total, grad
