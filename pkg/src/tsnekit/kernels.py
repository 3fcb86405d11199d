"""Pairwise similarity matrices and their conversion to joint probabilities.

Four similarity constructions are supported:

* Gaussian -- per-point bandwidths calibrated by binary search so each
  conditional distribution hits a target perplexity, then symmetrized into
  the joint matrix P directly (the classic t-SNE input path).
* Isolation -- data-dependent similarity: the fraction of random psi-point
  Voronoi partitions in which two points share a cell.
* Laplacian -- exp(-||x - y||_1 / (2 sigma^2)) on Manhattan distance.
* Approximate -- cosine-normalized dot product of k-mer spectra (the exact
  match, zero-mismatch spectrum case).

Non-Gaussian kernels become a joint distribution via ``kernel_to_joint``:
row-normalize to conditionals and symmetrize, mirroring the Gaussian path.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateInputError
from .featurize import Alphabet, build_feature_matrix
from .ingest import SequenceRecord

KERNEL_KINDS = ("gaussian", "isolation", "laplacian", "approximate")

PERPLEXITY_TOL = 1e-5
PERPLEXITY_MAX_STEPS = 200
Q_FLOOR = 1e-12


@dataclass
class KernelMatrix:
    """N x N symmetric similarity matrix tagged with its construction kind."""

    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError("kernel matrix must be square")
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def validate_joint(P: np.ndarray, sym_tol: float = 1e-12, sum_tol: float = 1e-9) -> None:
    """Raise ValueError unless P is a valid joint distribution matrix.

    Required: square, symmetric within sym_tol, zero diagonal, nonnegative,
    total sum within sum_tol of 1.
    """
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError("joint distribution must be a square matrix")
    asym = np.max(np.abs(P - P.T)) if P.size else 0.0
    if asym > sym_tol:
        raise ValueError(f"joint distribution asymmetry {asym:.3e} > {sym_tol:.0e}")
    if np.any(np.diag(P) != 0.0):
        raise ValueError("joint distribution must have a zero diagonal")
    if np.any(P < 0.0):
        raise ValueError("joint distribution must be nonnegative")
    total = float(P.sum())
    if abs(total - 1.0) > sum_tol:
        raise ValueError(f"joint distribution sums to {total!r}, not 1")


def squared_euclidean_distances(X: np.ndarray) -> np.ndarray:
    """Dense N x N squared Euclidean distances (Gram-product formulation)."""
    X = np.asarray(X, dtype=np.float64)
    sq = np.sum(X * X, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def _row_entropy_calibration(distances_to_others: np.ndarray, perplexity: float):
    """Binary-search the precision beta so exp(H) of the row hits perplexity.

    Returns (conditional probabilities over the others, beta). H is the
    Shannon entropy in nats, so exp(H) equals 2**H_bits, the perplexity.
    """
    d = distances_to_others
    d_shift = d - d.min()
    beta, lo, hi = 1.0, 0.0, np.inf
    p = None
    for _ in range(PERPLEXITY_MAX_STEPS):
        w = np.exp(-beta * d_shift)
        z = w.sum()
        p = w / z
        # H = ln(z) + beta * E[d_shift]  (stable form, no log(0) terms)
        entropy = np.log(z) + beta * float(p @ d_shift)
        achieved = np.exp(entropy)
        if abs(achieved - perplexity) < PERPLEXITY_TOL:
            break
        if achieved > perplexity:
            lo = beta
            beta = beta * 2.0 if np.isinf(hi) else 0.5 * (beta + hi)
        else:
            hi = beta
            beta = beta / 2.0 if lo == 0.0 else 0.5 * (beta + lo)
    return p, beta


def gaussian_conditionals(X: np.ndarray, perplexity: float):
    """Per-row perplexity-calibrated conditionals p_{j|i}.

    Returns (P_cond, betas) where P_cond has zero diagonal and each row sums
    to 1, and betas[i] = 1 / (2 sigma_i^2). The row loop stays serial: the
    per-step vector ops are too small for threads to pay off.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")
    if not 1.0 < perplexity < n - 1:
        raise ValueError(
            f"perplexity must lie in (1, N-1) = (1, {n - 1}), got {perplexity}"
        )
    d2 = squared_euclidean_distances(X)
    cond = np.zeros((n, n), dtype=np.float64)
    betas = np.empty(n, dtype=np.float64)
    others = ~np.eye(n, dtype=bool)
    for i in range(n):
        di = d2[i][others[i]]
        if di.max() == 0.0:
            raise DegenerateInputError(
                f"row {i}: all pairwise distances are zero (duplicated dataset)"
            )
        p, beta = _row_entropy_calibration(di, perplexity)
        cond[i][others[i]] = p
        betas[i] = beta
    return cond, betas


def gaussian_joint(X: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized perplexity-calibrated joint distribution P."""
    cond, _ = gaussian_conditionals(X, perplexity)
    P = (cond + cond.T) / (2.0 * cond.shape[0])
    validate_joint(P)
    return P


def isolation_kernel(
    X: np.ndarray, psi: int = 16, t: int = 200, seed: int = 0, jobs: int = 1
) -> KernelMatrix:
    """Voronoi-partition sharing frequency over t random psi-point samples.

    Round r draws psi distinct rows with generator seed ``seed + r`` and
    assigns every point to its nearest sampled point; K[i, j] is the fraction
    of rounds in which i and j land in the same cell. Per-round seeds make
    the result independent of execution order, so ``jobs`` only changes
    wall-clock time.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= psi <= n:
        raise ValueError(f"psi must lie in [1, N] = [1, {n}], got {psi}")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")

    sq = np.sum(X * X, axis=1)

    def run_rounds(r0: int, r1: int) -> np.ndarray:
        counts = np.zeros((n, n), dtype=np.int64)
        for r in range(r0, r1):
            rng = np.random.default_rng(seed + r)
            centers = rng.choice(n, size=psi, replace=False)
            C = X[centers]
            d2 = sq[:, None] + sq[centers][None, :] - 2.0 * (X @ C.T)
            cells = np.argmin(d2, axis=1)
            counts += cells[:, None] == cells[None, :]
        return counts

    if jobs <= 1 or t == 1:
        counts = run_rounds(0, t)
    else:
        jobs = min(jobs, t)
        bounds = np.linspace(0, t, jobs + 1).astype(int)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(lambda b: run_rounds(b[0], b[1]), zip(bounds[:-1], bounds[1:]))
            )
        counts = parts[0]
        for part in parts[1:]:
            counts += part

    return KernelMatrix(values=counts / float(t), kind="isolation")


def default_laplacian_sigma(X: np.ndarray) -> float:
    """Data-adaptive bandwidth: half the mean pairwise Manhattan distance."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 points")
    mean_l1 = float(pdist(X, metric="cityblock").mean())
    if mean_l1 == 0.0:
        raise DegenerateInputError("all points identical: mean L1 distance is zero")
    return mean_l1 / 2.0


def laplacian_kernel(X: np.ndarray, sigma: float | None = None) -> KernelMatrix:
    """K[i, j] = exp(-||x_i - x_j||_1 / (2 sigma^2)).

    Each pair is computed once (condensed distances) and mirrored, so the
    matrix is exactly symmetric with a unit diagonal.
    """
    X = np.asarray(X, dtype=np.float64)
    if sigma is None:
        sigma = default_laplacian_sigma(X)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    d1 = squareform(pdist(X, metric="cityblock"))
    K = np.exp(-d1 / (2.0 * sigma * sigma))
    return KernelMatrix(values=K, kind="laplacian")


def approximate_kernel(
    records: list[SequenceRecord],
    k: int = 3,
    m: int = 0,
    alphabet: Alphabet | None = None,
    normalize: bool = True,
) -> KernelMatrix:
    """Spectrum-similarity kernel: normalized dot product of k-mer counts.

    Only the exact-match case m = 0 is supported; the kernel is then the
    cosine similarity of the two spectra (or the raw dot product when
    ``normalize`` is off).
    """
    if m != 0:
        raise ValueError(
            f"mismatch tolerance m = {m} is unsupported; only m = 0 is implemented"
        )
    S = build_feature_matrix(records, k, alphabet)
    G = S @ S.T
    if normalize:
        norms = np.sqrt(np.diag(G))
        K = G / np.outer(norms, norms)
    else:
        K = G
    K = (K + K.T) / 2.0
    if normalize:
        np.fill_diagonal(K, 1.0)
    return KernelMatrix(values=K, kind="approximate")


JOINT_MODES = ("row-normalize", "global-normalize")


def kernel_to_joint(K, mode: str = "row-normalize") -> np.ndarray:
    """Turn a symmetric nonnegative kernel into a joint distribution P.

    row-normalize (default): zero the diagonal, normalize each row into
    conditionals, then symmetrize P = (C + C^T) / (2N), mirroring the
    Gaussian path. global-normalize: zero the diagonal and divide by the
    total sum.
    """
    values = K.values if isinstance(K, KernelMatrix) else np.asarray(K, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("kernel must be a square matrix")
    n = values.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points")
    if np.max(np.abs(values - values.T)) > 1e-12:
        raise ValueError("kernel must be symmetric")
    if np.any(values < 0):
        raise ValueError("kernel must be nonnegative")
    if mode not in JOINT_MODES:
        raise ValueError(f"unknown joint mode {mode!r}; expected one of {JOINT_MODES}")

    A = values.copy()
    np.fill_diagonal(A, 0.0)
    row_sums = A.sum(axis=1)
    dead = np.flatnonzero(row_sums == 0.0)
    if dead.size:
        raise DegenerateInputError(
            f"row {dead[0]}: no positive off-diagonal similarity"
        )
    if mode == "row-normalize":
        cond = A / row_sums[:, None]
        P = (cond + cond.T) / (2.0 * n)
    else:
        P = A / A.sum()
    validate_joint(P)
    return P


MATRIX_MAGIC_LEN = 8  # little-endian uint64 row count, then row-major float64


def dump_matrix(path, M: np.ndarray) -> None:
    """Write a square float64 matrix in the binary cache format."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("only square matrices are supported")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", M.shape[0]))
        fh.write(np.ascontiguousarray(M, dtype="<f8").tobytes())


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by dump_matrix."""
    with open(path, "rb") as fh:
        header = fh.read(MATRIX_MAGIC_LEN)
        if len(header) != MATRIX_MAGIC_LEN:
            raise ValueError(f"{path}: truncated matrix header")
        (n,) = struct.unpack("<Q", header)
        data = np.frombuffer(fh.read(8 * n * n), dtype="<f8")
    if data.size != n * n:
        raise ValueError(f"{path}: expected {n * n} values, found {data.size}")
    return data.reshape(n, n).astype(np.float64)
