"""AdamW: Adam with bias correction and decoupled weight decay."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass
class AdamWConfig:
    learning_rate: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.01

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValidationError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if not 0 <= self.beta1 < 1 or not 0 <= self.beta2 < 1:
            raise ValidationError("betas must be in [0, 1)")
        if self.eps <= 0 or self.weight_decay < 0:
            raise ValidationError("eps must be > 0 and weight_decay >= 0")


@dataclass
class OptimState:
    """First/second moment accumulators mirroring the parameter tensors."""

    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0

    @classmethod
    def for_tensors(cls, tensors: dict[str, np.ndarray]) -> "OptimState":
        return cls(
            m={k: np.zeros_like(t) for k, t in tensors.items()},
            v={k: np.zeros_like(t) for k, t in tensors.items()},
            step=0,
        )


def adamw_step(
    tensors: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: OptimState,
    cfg: AdamWConfig,
) -> tuple[dict[str, np.ndarray], OptimState]:
    """One decoupled-weight-decay Adam update; returns new tensors and state.

    theta <- theta - lr * ( m_hat / (sqrt(v_hat) + eps) + wd * theta )
    """
    if set(tensors) != set(grads):
        raise ValidationError(f"tensor/grad keys differ: {sorted(tensors)} vs {sorted(grads)}")
    if state.step == 0 and not state.m:
        state = OptimState.for_tensors(tensors)
    new_tensors: dict[str, np.ndarray] = {}
    new_m: dict[str, np.ndarray] = {}
    new_v: dict[str, np.ndarray] = {}
    t = state.step + 1
    for name, theta in tensors.items():
        g = grads[name]
        if g.shape != theta.shape:
            raise ValidationError(f"gradient shape {g.shape} != parameter shape {theta.shape} for {name}")
        m = cfg.beta1 * state.m[name] + (1 - cfg.beta1) * g
        v = cfg.beta2 * state.v[name] + (1 - cfg.beta2) * g * g
        m_hat = m / (1 - cfg.beta1**t)
        v_hat = v / (1 - cfg.beta2**t)
        new_tensors[name] = theta - cfg.learning_rate * (
            m_hat / (np.sqrt(v_hat) + cfg.eps) + cfg.weight_decay * theta
        )
        new_m[name] = m
        new_v[name] = v
    return new_tensors, OptimState(new_m, new_v, t)
