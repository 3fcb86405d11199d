"""Initial N x 2 embeddings for the optimizer.

Four strategies: seeded Gaussian noise, the top-2 principal-component
projection, a two-component FastICA, and the PCA/ICA ensemble average.
ICA components come back in arbitrary order, sign, and scale, so the
ensemble first aligns each ICA column to its best-matching PCA column
(by absolute Pearson correlation), flips it positive, and rescales it to
the PCA column's spread; only then does averaging make sense.

Every strategy is deterministic given (data, seed). Before optimization,
embeddings are rescaled to a small common spread (1e-4 per column) so all
strategies start the descent at a comparable scale.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceWarning, DegenerateInputError

INIT_KINDS = ("random", "pca", "ica", "ensemble")
DEFAULT_INIT_STD = 1e-4

ICA_TOL = 1e-6
ICA_MAX_ITER = 500


@dataclass
class Embedding:
    """N x 2 coordinates plus the strategy that produced them."""

    coords: np.ndarray
    provenance: str

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=np.float64)
        if self.coords.ndim != 2 or self.coords.shape[1] != 2:
            raise ValueError("embedding must be an N x 2 matrix")
        if not np.all(np.isfinite(self.coords)):
            raise ValueError("embedding contains non-finite values")

    @property
    def n(self) -> int:
        return self.coords.shape[0]


def random_init(n: int, seed: int) -> Embedding:
    """IID Normal(0, 1e-4^2) coordinates from a seeded generator."""
    if n < 1:
        raise ValueError(f"need at least 1 point, got {n}")
    rng = np.random.default_rng(seed)
    return Embedding(rng.normal(0.0, DEFAULT_INIT_STD, size=(n, 2)), "random")


def _top2_svd(X: np.ndarray):
    """Centered economy SVD with a rank-2 check. Returns (U, s, Vt, Xc)."""
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    Xc = X - X.mean(axis=0)
    U, s, Vt = np.linalg.svd(Xc, full_matrices=False)
    tol = max(n, d) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    if s.size < 2 or s[1] <= tol:
        raise DegenerateInputError("data has rank < 2 after centering")
    return U, s, Vt, Xc


def pca_init(X: np.ndarray) -> Embedding:
    """Projection onto the top-2 right singular directions.

    Columns are ordered by decreasing singular value. Sign convention: each
    direction is flipped so its largest-magnitude loading is positive, which
    removes the SVD's inherent sign ambiguity.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 2:
        raise ValueError("need an N x D matrix with N >= 2 and D >= 2")
    U, s, Vt, _ = _top2_svd(X)
    coords = U[:, :2] * s[:2]
    for c in range(2):
        lead = np.argmax(np.abs(Vt[c]))
        if Vt[c, lead] < 0:
            coords[:, c] = -coords[:, c]
    return Embedding(coords, "pca")


def _sym_decorrelation(W: np.ndarray) -> np.ndarray:
    """W <- (W W^T)^(-1/2) W, the symmetric orthogonalization step."""
    vals, vecs = np.linalg.eigh(W @ W.T)
    if vals[0] <= 0:
        raise DegenerateInputError("unmixing matrix collapsed to rank < 2")
    return (vecs * (1.0 / np.sqrt(vals))) @ vecs.T @ W


def ica_init(
    X: np.ndarray,
    seed: int,
    tol: float = ICA_TOL,
    max_iter: int = ICA_MAX_ITER,
) -> Embedding:
    """Two-component FastICA: whiten to 2 dims, then fixed-point iteration.

    Uses the log-cosh contrast (g = tanh) with symmetric decorrelation and a
    seeded random orthogonal start. Emits a ConvergenceWarning (and still
    returns the current estimate) if the unmixing rows have not stabilized
    within ``max_iter`` sweeps.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 3 or X.shape[1] < 2:
        raise ValueError("need an N x D matrix with N >= 3 and D >= 2")
    n = X.shape[0]
    U, _, _, _ = _top2_svd(X)
    Z = np.sqrt(n) * U[:, :2]  # whitened: Z^T Z / n = I

    rng = np.random.default_rng(seed)
    W = _sym_decorrelation(rng.normal(size=(2, 2)))
    converged = False
    for _ in range(max_iter):
        Y = Z @ W.T
        G = np.tanh(Y)
        g_prime_mean = (1.0 - G * G).mean(axis=0)
        W_new = _sym_decorrelation((G.T @ Z) / n - g_prime_mean[:, None] * W)
        drift = np.max(np.abs(np.abs(np.diag(W_new @ W.T)) - 1.0))
        W = W_new
        if drift < tol:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"FastICA did not converge within {max_iter} iterations "
            f"(tolerance {tol:g})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return Embedding(Z @ W.T, "ica")


def _align_columns(reference: np.ndarray, other: np.ndarray) -> np.ndarray:
    """Match, sign-flip, and rescale ``other``'s columns to ``reference``'s.

    For each reference column in order, claim the not-yet-claimed other
    column with the largest absolute Pearson correlation, orient it so the
    correlation is positive, and scale it to the reference column's standard
    deviation.
    """
    aligned = np.empty_like(reference)
    available = [0, 1]
    for c in range(2):
        ref = reference[:, c]
        ref_sd = ref.std()
        best_j, best_r = None, -1.0
        for j in available:
            col = other[:, j]
            if col.std() == 0.0:
                raise DegenerateInputError(f"constant column {j} cannot be aligned")
            r = np.corrcoef(ref, col)[0, 1]
            if abs(r) > best_r:
                best_j, best_r = j, abs(r)
                best_sign = 1.0 if r >= 0 else -1.0
        available.remove(best_j)
        col = other[:, best_j] * best_sign
        col = col - col.mean()
        aligned[:, c] = col * (ref_sd / col.std())
    return aligned


def ensemble_init(X: np.ndarray, seed: int, mode: str = "aligned") -> Embedding:
    """Elementwise average of the PCA and (aligned) ICA embeddings.

    ``mode="aligned"`` (default) aligns ICA columns to the PCA columns
    before averaging; ``mode="raw"`` averages the matrices as produced.
    """
    if mode not in ("aligned", "raw"):
        raise ValueError(f"unknown ensemble mode {mode!r}")
    pca = pca_init(X)
    ica = ica_init(X, seed)
    if mode == "aligned":
        ica_coords = _align_columns(pca.coords, ica.coords)
    else:
        ica_coords = ica.coords
    return Embedding((pca.coords + ica_coords) / 2.0, "ensemble")


def rescale_init(e: Embedding, target_std: float = DEFAULT_INIT_STD) -> Embedding:
    """Center each column and scale it to the target standard deviation."""
    if target_std <= 0:
        raise ValueError("target_std must be positive")
    coords = e.coords - e.coords.mean(axis=0)
    sds = coords.std(axis=0)
    if np.any(sds == 0.0):
        dead = int(np.flatnonzero(sds == 0.0)[0])
        raise DegenerateInputError(f"column {dead} has zero variance")
    return Embedding(coords * (target_std / sds), e.provenance)


def make_initial_embedding(
    X: np.ndarray,
    kind: str,
    seed: int,
    target_std: float = DEFAULT_INIT_STD,
    ensemble_mode: str = "aligned",
) -> Embedding:
    """Dispatch on strategy name and rescale to the common starting spread."""
    if kind == "random":
        raw = random_init(np.asarray(X).shape[0], seed)
    elif kind == "pca":
        raw = pca_init(X)
    elif kind == "ica":
        raw = ica_init(X, seed)
    elif kind == "ensemble":
        raw = ensemble_init(X, seed, mode=ensemble_mode)
    else:
        raise ValueError(f"unknown init kind {kind!r}; expected one of {INIT_KINDS}")
    return rescale_init(raw, target_std)


def write_embedding_csv(e: Embedding, ids: list[str]) -> str:
    """Render an embedding as ``id,x,y`` CSV text."""
    if len(ids) != e.n:
        raise ValueError("id count does not match embedding rows")
    lines = ["id,x,y"]
    for i in range(e.n):
        lines.append(f"{ids[i]},{float(e.coords[i, 0])!r},{float(e.coords[i, 1])!r}")
    return "\n".join(lines) + "\n"
