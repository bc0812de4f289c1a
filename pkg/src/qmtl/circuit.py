"""Backend-independent circuit representation with symbolic parameter slots.

Ops are applied left-to-right: ops[0] acts first on |0...0>.  A trainable
index may be referenced by several gates (shared parameters).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import statevector as sv
from .statevector import PauliString, Statevector

GATE_ARITY = {
    # kind: (num_qubits, num_params)
    "h": (1, 0),
    "x": (1, 0),
    "y": (1, 0),
    "z": (1, 0),
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "rot": (1, 3),
    "cnot": (2, 0),
}

ROTATION_KINDS = ("rx", "ry", "rz", "rot")


@dataclass(frozen=True)
class ParamRef:
    """Symbolic angle source: trainable slot, input feature, or constant."""

    kind: str  # "theta" | "input" | "const"
    index: int = 0
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("theta", "input", "const"):
            raise ValueError(f"invalid ParamRef kind {self.kind!r}")


def trainable(index: int) -> ParamRef:
    return ParamRef("theta", index)


def feature(index: int) -> ParamRef:
    return ParamRef("input", index)


def const(value: float) -> ParamRef:
    return ParamRef("const", value=float(value))


@dataclass(frozen=True)
class GateOp:
    kind: str
    qubits: tuple
    params: tuple = ()

    def __init__(self, kind: str, qubits: Sequence[int], params: Sequence[ParamRef] = ()):
        if kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {kind!r}")
        nq, npar = GATE_ARITY[kind]
        qubits = tuple(qubits)
        params = tuple(params)
        if len(qubits) != nq:
            raise ValueError(f"{kind} takes {nq} qubit(s), got {qubits}")
        if len(params) != npar:
            raise ValueError(f"{kind} takes {npar} parameter(s), got {len(params)}")
        if nq == 2 and qubits[0] == qubits[1]:
            raise ValueError("two-qubit gate needs distinct qubits")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", params)


@dataclass
class Circuit:
    num_qubits: int
    ops: list = field(default_factory=list)
    num_trainable: int = 0
    num_inputs: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for op in self.ops:
            for q in op.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"qubit {q} out of range in {op}")
            for ref in op.params:
                if ref.kind == "theta" and not 0 <= ref.index < self.num_trainable:
                    raise ValueError(f"trainable index {ref.index} out of range")
                if ref.kind == "input" and not 0 <= ref.index < self.num_inputs:
                    raise ValueError(f"input index {ref.index} out of range")


def _resolve(ref: ParamRef, theta: np.ndarray, features: np.ndarray):
    """Angle value for one ParamRef; features may be (d,) or (B, d)."""
    if ref.kind == "theta":
        return theta[ref.index]
    if ref.kind == "input":
        return features[..., ref.index]
    return ref.value


def _run(
    amps: np.ndarray,
    circuit: Circuit,
    theta: np.ndarray,
    features: np.ndarray,
    override: Optional[dict] = None,
    noise_hook=None,
) -> np.ndarray:
    """Apply all ops to ``amps`` (shape (..., 2**Q)).

    ``override`` maps (op_index, slot) -> additive angle shift for a single
    gate occurrence.  ``noise_hook(amps, op) -> amps`` runs after every gate.
    """
    nq = circuit.num_qubits
    for op_idx, op in enumerate(circuit.ops):
        if op.kind == "cnot":
            amps = sv.apply_cnot_array(amps, op.qubits[0], op.qubits[1], nq)
        else:
            angles = [_resolve(ref, theta, features) for ref in op.params]
            if override:
                for slot in range(len(angles)):
                    delta = override.get((op_idx, slot))
                    if delta is not None:
                        angles[slot] = angles[slot] + delta
            mat = sv.gate_matrix(op.kind, angles)
            amps = sv.apply_matrix(amps, mat, op.qubits[0], nq)
        if noise_hook is not None:
            amps = noise_hook(amps, op)
    return amps


def _check_bindings(circuit: Circuit, theta: Sequence[float], features: Sequence[float]) -> tuple:
    theta = np.asarray(theta, dtype=float)
    features = np.asarray(features, dtype=float)
    if theta.shape != (circuit.num_trainable,):
        raise ValueError(
            f"expected {circuit.num_trainable} trainable values, got shape {theta.shape}"
        )
    if features.shape != (circuit.num_inputs,):
        raise ValueError(
            f"expected {circuit.num_inputs} input features, got shape {features.shape}"
        )
    return theta, features


def evaluate(circuit: Circuit, theta: Sequence[float], features: Sequence[float]) -> Statevector:
    """Run the circuit from |0...0> with concrete parameter bindings."""
    theta, features = _check_bindings(circuit, theta, features)
    state = sv.init_zero(circuit.num_qubits)
    state.amplitudes = _run(state.amplitudes, circuit, theta, features)
    return state


def evaluate_expectations(
    circuit: Circuit,
    theta: Sequence[float],
    features: Sequence[float],
    observables: Sequence[PauliString],
    override: Optional[dict] = None,
) -> np.ndarray:
    """Exact expectation of each observable, in the given order."""
    theta, features = _check_bindings(circuit, theta, features)
    state = sv.init_zero(circuit.num_qubits)
    amps = _run(state.amplitudes, circuit, theta, features, override=override)
    out = np.empty(len(observables))
    for i, obs in enumerate(observables):
        if obs.max_qubit() >= circuit.num_qubits:
            raise IndexError(f"observable {obs} out of range for Q={circuit.num_qubits}")
        out[i] = expectation_of_amps(amps, obs, circuit.num_qubits)
    return out


def expectation_of_amps(amps: np.ndarray, obs: PauliString, num_qubits: int):
    return sv.expectation_array(amps, obs.as_dict(), num_qubits)


def evaluate_expectations_batch(
    circuit: Circuit,
    theta: Sequence[float],
    features: np.ndarray,
    observables: Sequence[PauliString],
    override: Optional[dict] = None,
) -> np.ndarray:
    """Expectations for a batch of feature rows; returns (B, n_observables)."""
    theta = np.asarray(theta, dtype=float)
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != circuit.num_inputs:
        raise ValueError(
            f"expected feature matrix (B, {circuit.num_inputs}), got {features.shape}"
        )
    if theta.shape != (circuit.num_trainable,):
        raise ValueError(
            f"expected {circuit.num_trainable} trainable values, got shape {theta.shape}"
        )
    bsize = features.shape[0]
    amps = np.zeros((bsize, 1 << circuit.num_qubits), dtype=complex)
    amps[:, 0] = 1.0
    amps = _run(amps, circuit, theta, features, override=override)
    out = np.empty((bsize, len(observables)))
    for i, obs in enumerate(observables):
        out[:, i] = expectation_of_amps(amps, obs, circuit.num_qubits)
    return out


def group_commuting(observables: Sequence[PauliString]) -> list:
    """Greedy, order-stable grouping into qubit-wise-commuting sets."""
    groups: list = []
    for obs in observables:
        for group in groups:
            if all(obs.qubit_wise_commutes(member) for member in group):
                group.append(obs)
                break
        else:
            groups.append([obs])
    return groups


# ---------------------------------------------------------------------------
# portable text format


def _ref_text(ref: ParamRef) -> str:
    if ref.kind == "theta":
        return f"th[{ref.index}]"
    if ref.kind == "input":
        return f"in[{ref.index}]"
    return repr(ref.value)


def export_text(circuit: Circuit) -> str:
    """One gate per line; a header carries register and parameter counts."""
    lines = [
        f"circuit q={circuit.num_qubits} th={circuit.num_trainable} in={circuit.num_inputs}"
    ]
    for op in circuit.ops:
        qubits = ",".join(f"q[{q}]" for q in op.qubits)
        if op.params:
            args = ",".join(_ref_text(ref) for ref in op.params)
            lines.append(f"{op.kind}({args}) {qubits}")
        else:
            lines.append(f"{op.kind} {qubits}")
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"^circuit q=(\d+) th=(\d+) in=(\d+)$")
_GATE_RE = re.compile(r"^([a-z]+)(?:\((.*)\))? (q\[\d+\](?:,q\[\d+\])*)$")
_REF_RE = re.compile(r"^(th|in)\[(\d+)\]$")


def _parse_ref(text: str) -> ParamRef:
    m = _REF_RE.match(text)
    if m:
        kind = "theta" if m.group(1) == "th" else "input"
        return ParamRef(kind, int(m.group(2)))
    return const(float(text))


def parse_text(text: str) -> Circuit:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty circuit text")
    header = _HEADER_RE.match(lines[0].strip())
    if not header:
        raise ValueError(f"bad header line: {lines[0]!r}")
    num_qubits, num_trainable, num_inputs = (int(g) for g in header.groups())
    ops = []
    for line in lines[1:]:
        m = _GATE_RE.match(line.strip())
        if not m:
            raise ValueError(f"bad gate line: {line!r}")
        kind, args, qubits_text = m.groups()
        qubits = [int(q) for q in re.findall(r"q\[(\d+)\]", qubits_text)]
        params = [_parse_ref(a) for a in args.split(",")] if args else []
        ops.append(GateOp(kind, qubits, params))
    return Circuit(num_qubits, ops, num_trainable, num_inputs)


def random_circuit(num_qubits: int, depth: int, rng,
                   num_trainable: Optional[int] = None,
                   num_inputs: int = 0) -> Circuit:
    """Random test circuit mixing fixed gates, rotations, and CNOTs.

    Rotation angles draw their trainable indices with replacement, so deep
    circuits naturally exercise the shared-parameter (reused-angle) path.
    """
    if num_trainable is None:
        num_trainable = max(1, depth // 2)
    ops = []
    for _ in range(depth):
        roll = rng.random()
        qubit = int(rng.integers(num_qubits))
        if roll < 0.15:
            ops.append(GateOp(str(rng.choice(["h", "x", "y", "z"])), (qubit,), ()))
        elif roll < 0.35 and num_qubits >= 2:
            target = int(rng.integers(num_qubits - 1))
            target += target >= qubit
            ops.append(GateOp("cnot", (qubit, target), ()))
        else:
            kind = str(rng.choice(["rx", "ry", "rz", "rot"]))
            arity = 3 if kind == "rot" else 1
            refs = []
            for _ in range(arity):
                sub = rng.random()
                if num_inputs and sub < 0.2:
                    refs.append(feature(int(rng.integers(num_inputs))))
                elif sub < 0.85:
                    refs.append(trainable(int(rng.integers(num_trainable))))
                else:
                    refs.append(const(float(rng.uniform(0.0, 2 * np.pi))))
            ops.append(GateOp(kind, (qubit,), refs))
    return Circuit(num_qubits, ops, num_trainable, num_inputs)
