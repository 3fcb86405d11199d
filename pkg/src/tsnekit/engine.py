"""Momentum gradient descent on KL(P || Q) over an N x 2 embedding.

Low-dimensional affinities use the Student-t distribution with one degree of
freedom, q_ij proportional to (1 + ||y_i - y_j||^2)^-1, whose heavy tail
spreads moderately dissimilar points apart. The gradient is the standard

    dC/dy_i = 4 * sum_j (p_ij - q_ij) * (y_i - y_j) / (1 + ||y_i - y_j||^2)

and the update rule is velocity momentum: V <- m*V - eta*grad; Y <- Y + V,
with Y re-centered to zero mean after every step. Optional early
exaggeration multiplies P for the first few iterations (off by default:
factor 1). The run is fully deterministic for fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DivergenceError
from .initialization import Embedding
from .kernels import Q_FLOOR, validate_joint


@dataclass
class OptimizerParams:
    learning_rate: float = 200.0
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    momentum_switch_iter: int = 250
    max_iters: int = 2000
    checkpoint_every: int = 100
    early_exaggeration_factor: float = 1.0
    early_exaggeration_iters: int = 250

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        for name in ("momentum_early", "momentum_late"):
            m = getattr(self, name)
            if not 0.0 <= m < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {m}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.checkpoint_every < 1:
            raise ValueError("checkpoint_every must be >= 1")
        if self.early_exaggeration_factor < 1.0:
            raise ValueError("early_exaggeration_factor must be >= 1")
        if self.early_exaggeration_iters < 0:
            raise ValueError("early_exaggeration_iters must be >= 0")
        if self.momentum_switch_iter < 0:
            raise ValueError("momentum_switch_iter must be >= 0")


class Checkpoint(NamedTuple):
    iteration: int
    embedding: Embedding
    kl: float


@dataclass
class Trajectory:
    """Ordered optimizer snapshots: (iteration, embedding, KL) triples."""

    checkpoints: list[Checkpoint] = field(default_factory=list)

    @property
    def final(self) -> Checkpoint:
        if not self.checkpoints:
            raise ValueError("trajectory has no checkpoints")
        return self.checkpoints[-1]

    def iterations(self) -> list[int]:
        return [c.iteration for c in self.checkpoints]


def low_dim_affinities(Y: np.ndarray) -> np.ndarray:
    """Student-t joint distribution Q of the embedding.

    Returned unfloored; the 1e-12 floor is applied only inside the KL and
    gradient evaluations.
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[0] < 2:
        raise ValueError("need at least 2 embedding rows")
    W = _student_t_weights(Y)
    return W / W.sum()


def _student_t_weights(Y: np.ndarray) -> np.ndarray:
    # overflow here surfaces as a DivergenceError from the caller's
    # finiteness check, so the intermediate warnings are just noise
    with np.errstate(over="ignore", invalid="ignore"):
        sq = np.sum(Y * Y, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (Y @ Y.T)
        np.maximum(d2, 0.0, out=d2)
        W = 1.0 / (1.0 + d2)
    np.fill_diagonal(W, 0.0)
    return W


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    """sum_{i != j} p_ij * ln(p_ij / max(q_ij, 1e-12)); zero-p terms vanish."""
    P = np.asarray(P, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    if P.shape != Q.shape:
        raise ValueError(f"shape mismatch: {P.shape} vs {Q.shape}")
    mask = P > 0.0
    p = P[mask]
    q = np.maximum(Q[mask], Q_FLOOR)
    return float(np.sum(p * np.log(p / q)))


def gradient(P: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Analytic KL gradient with Q recomputed from Y internally."""
    P = np.asarray(P, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if P.shape[0] != Y.shape[0]:
        raise ValueError("P and Y row counts differ")
    W = _student_t_weights(Y)
    # M = (P - max(Q, floor)) * W, built in place: N x N temporaries dominate
    # the iteration cost at desk scale
    M = W / W.sum()
    np.maximum(M, Q_FLOOR, out=M)
    np.fill_diagonal(M, 0.0)
    np.subtract(P, M, out=M)
    M *= W
    return 4.0 * (M.sum(axis=1)[:, None] * Y - M @ Y)


def run_tsne(
    P: np.ndarray,
    init: Embedding,
    params: OptimizerParams,
    seed: int = 0,
) -> Trajectory:
    """Descend KL(P || Q) from ``init`` and record periodic checkpoints.

    Momentum is ``momentum_early`` while the iteration is below
    ``momentum_switch_iter`` and ``momentum_late`` from then on. Checkpoints
    are recorded at every multiple of ``checkpoint_every`` and at
    ``max_iters``; their KL is always measured against the unexaggerated P.
    ``seed`` is accepted for interface symmetry; the descent itself is
    deterministic.
    """
    del seed
    P = np.asarray(P, dtype=np.float64)
    validate_joint(P)
    n = P.shape[0]
    if init.n != n:
        raise ValueError(f"init has {init.n} rows but P is {n} x {n}")

    exaggerating = params.early_exaggeration_factor > 1.0
    P_run = P * params.early_exaggeration_factor if exaggerating else P
    Y = init.coords.copy()
    V = np.zeros_like(Y)
    checkpoints: list[Checkpoint] = []

    for it in range(1, params.max_iters + 1):
        if exaggerating and it > params.early_exaggeration_iters:
            P_run = P
            exaggerating = False
        grad = gradient(P_run, Y)
        if not np.all(np.isfinite(grad)):
            raise DivergenceError(it)
        momentum = (
            params.momentum_early
            if it < params.momentum_switch_iter
            else params.momentum_late
        )
        V = momentum * V - params.learning_rate * grad
        Y = Y + V
        Y -= Y.mean(axis=0)
        if not np.all(np.isfinite(Y)):
            raise DivergenceError(it)
        if it % params.checkpoint_every == 0 or it == params.max_iters:
            kl = kl_divergence(P, low_dim_affinities(Y))
            checkpoints.append(
                Checkpoint(it, Embedding(Y.copy(), "optimizer"), kl)
            )
    return Trajectory(checkpoints)


def write_checkpoint_csv(
    embedding: Embedding, ids: list[str], labels: list[str]
) -> str:
    """Render one trajectory checkpoint as ``id,x,y,label`` CSV text."""
    if len(ids) != embedding.n or len(labels) != embedding.n:
        raise ValueError("ids/labels must match embedding rows")
    lines = ["id,x,y,label"]
    for i in range(embedding.n):
        x = repr(float(embedding.coords[i, 0]))
        y = repr(float(embedding.coords[i, 1]))
        lines.append(f"{ids[i]},{x},{y},{labels[i]}")
    return "\n".join(lines) + "\n"


def read_checkpoint_csv(text: str):
    """Parse embedding CSV text into (ids, coords, labels).

    Accepts both the checkpoint form ``id,x,y,label`` and the bare
    initial-embedding form ``id,x,y`` (labels default to empty strings).
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].strip() if lines else ""
    if header not in ("id,x,y,label", "id,x,y"):
        raise ValueError("expected header 'id,x,y,label' or 'id,x,y'")
    width = 4 if header == "id,x,y,label" else 3
    ids, rows, labels = [], [], []
    for raw in lines[1:]:
        fields = raw.split(",")
        if len(fields) != width:
            raise ValueError(f"expected {width} fields, got {len(fields)}: {raw!r}")
        ids.append(fields[0])
        rows.append([float(fields[1]), float(fields[2])])
        labels.append(fields[3] if width == 4 else "")
    return ids, np.array(rows, dtype=np.float64), labels
