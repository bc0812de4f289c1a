"""Adam/AdamW with global-norm clipping and a reduce-on-plateau scheduler."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, num_params: int) -> "AdamState":
        return cls(m=np.zeros(num_params), v=np.zeros(num_params))


def clip_global_norm(grads: np.ndarray, clip_norm: float) -> np.ndarray:
    """Scale the gradient so its global L2 norm is at most clip_norm."""
    if clip_norm <= 0:
        raise ValueError("clip_norm must be positive")
    norm = float(np.linalg.norm(grads))
    if norm > clip_norm:
        return grads * (clip_norm / norm)
    return grads


def adam_step(
    params: np.ndarray,
    grads: np.ndarray,
    state: AdamState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
    weight_decay: float = 0.0,
    decay_mask: np.ndarray | None = None,
) -> np.ndarray:
    """Bias-corrected adaptive-moment update; decoupled decay where masked."""
    if not np.all(np.isfinite(grads)):
        raise FloatingPointError("non-finite gradient encountered")
    state.step += 1
    state.m = beta1 * state.m + (1 - beta1) * grads
    state.v = beta2 * state.v + (1 - beta2) * grads**2
    m_hat = state.m / (1 - beta1**state.step)
    v_hat = state.v / (1 - beta2**state.step)
    new = params - lr * m_hat / (np.sqrt(v_hat) + eps)
    if weight_decay > 0.0:
        mask = np.ones_like(params, dtype=bool) if decay_mask is None else decay_mask
        new = new - lr * weight_decay * np.where(mask, params, 0.0)
    return new


@dataclass
class PlateauScheduler:
    """Reduce the learning rate when the monitored value stops improving."""

    lr: float
    factor: float = 0.2
    patience: int = 5
    min_lr: float = 1e-7
    mode: str = "max"
    best: float = field(default=None, init=False)  # type: ignore[assignment]
    stale: int = field(default=0, init=False)

    def _improved(self, value: float) -> bool:
        if self.best is None:
            return True
        return value > self.best if self.mode == "max" else value < self.best

    def step(self, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("monitored value must be finite")
        if self._improved(value):
            self.best = value
            self.stale = 0
        else:
            self.stale += 1
            if self.stale > self.patience:
                self.lr = max(self.lr * self.factor, self.min_lr)
                self.stale = 0
        return self.lr
