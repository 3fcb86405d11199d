"""Neighborhood-preservation metrics between HD data and a 2-D embedding.

Q(k) is the mean fractional overlap of the k-nearest-neighbor sets computed
in the two spaces; R(k) rescales it so a random embedding scores 0 and
perfect preservation scores 1:

    Q(k) = sum_i |kNN_hd(i) & kNN_ld(i)| / (n k)
    R(k) = ((n - 1) Q(k) - k) / (n - 1 - k)

The scalar summary weights R(k) by 1/k, emphasizing small neighborhoods:

    AUC = sum_k R(k)/k / sum_k 1/k

Neighbor tables are exact brute force with deterministic tie-breaking
(ascending index), so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .initialization import Embedding
from .kernels import squared_euclidean_distances


@dataclass
class NeighborTable:
    """Row i holds the k_max nearest neighbors of point i, nearest first."""

    indices: np.ndarray

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        if self.indices.ndim != 2:
            raise ValueError("neighbor table must be 2-D")

    @property
    def n(self) -> int:
        return self.indices.shape[0]

    @property
    def k_max(self) -> int:
        return self.indices.shape[1]


@dataclass
class QualityCurve:
    ks: np.ndarray
    r_values: np.ndarray
    auc_rnx: float


def _coords(M) -> np.ndarray:
    if isinstance(M, Embedding):
        return M.coords
    return np.asarray(M, dtype=np.float64)


def knn_table_from_distances(D: np.ndarray, k_max: int) -> NeighborTable:
    """Neighbor table from a full pairwise-distance matrix.

    Rows are sorted by increasing distance with ties broken by ascending
    index (stable sort); a point is never its own neighbor.
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if D.ndim != 2 or D.shape[1] != n:
        raise ValueError("distance matrix must be square")
    if not 1 <= k_max <= n - 1:
        raise ValueError(f"k_max must lie in [1, N-1] = [1, {n - 1}], got {k_max}")
    work = D.copy()
    np.fill_diagonal(work, np.inf)
    order = np.argsort(work, axis=1, kind="stable")
    return NeighborTable(order[:, :k_max])


def knn_table(M, k_max: int) -> NeighborTable:
    """Exact brute-force Euclidean k-nearest-neighbor table."""
    X = _coords(M)
    return knn_table_from_distances(squared_euclidean_distances(X), k_max)


def neighborhood_agreement(hd: NeighborTable, ld: NeighborTable, k: int) -> float:
    """Q(k): mean fractional overlap of the two k-neighbor sets."""
    if hd.n != ld.n:
        raise ValueError("tables cover different numbers of points")
    if not 1 <= k <= min(hd.k_max, ld.k_max):
        raise ValueError(
            f"k must lie in [1, {min(hd.k_max, ld.k_max)}], got {k}"
        )
    total = 0
    for i in range(hd.n):
        total += len(set(hd.indices[i, :k]) & set(ld.indices[i, :k]))
    return total / (hd.n * k)


def r_of_k(q: float, n: int, k: int) -> float:
    """Rescaled agreement: 0 at the random-embedding expectation, 1 when perfect."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k >= n - 1:
        raise ValueError(f"k must be < n - 1 = {n - 1}, got {k}")
    return ((n - 1) * q - k) / (n - 1 - k)


def auc_rnx(curve) -> float:
    """1/k-weighted mean of R(k) over the supplied (k, R(k)) pairs."""
    pairs = list(curve)
    if not pairs:
        raise ValueError("cannot compute the AUC of an empty curve")
    ks = [k for k, _ in pairs]
    if len(set(ks)) != len(ks) or min(ks) < 1:
        raise ValueError("ks must be distinct and >= 1")
    num = sum(r / k for k, r in pairs)
    den = sum(1.0 / k for k in ks)
    return num / den


def _all_agreements(hd: NeighborTable, ld: NeighborTable, k_max: int) -> np.ndarray:
    """Q(k) for k = 1..k_max in one pass over LD ranks of the HD neighbors."""
    n = hd.n
    rows = np.arange(n)[:, None]
    ld_rank = np.full((n, n), k_max, dtype=np.int32)
    ld_rank[rows, ld.indices[:, :k_max]] = np.arange(k_max, dtype=np.int32)[None, :]
    hd_rank_of = ld_rank[rows, hd.indices[:, :k_max]]
    q = np.empty(k_max, dtype=np.float64)
    for k in range(1, k_max + 1):
        q[k - 1] = np.count_nonzero(hd_rank_of[:, :k] < k) / (n * k)
    return q


def quality_curve_from_tables(
    hd: NeighborTable, ld: NeighborTable, k_max: int
) -> QualityCurve:
    """R(k) for k = 1..k_max plus the 1/k-weighted AUC, from prebuilt tables."""
    if hd.n != ld.n:
        raise ValueError("tables cover different numbers of points")
    n = hd.n
    if k_max > min(hd.k_max, ld.k_max):
        raise ValueError("k_max exceeds the table depth")
    if n < k_max + 2:
        raise ValueError(f"need at least k_max + 2 = {k_max + 2} points, got {n}")
    ks = np.arange(1, k_max + 1)
    q = _all_agreements(hd, ld, k_max)
    r = ((n - 1) * q - ks) / (n - 1 - ks)
    auc = float(np.sum(r / ks) / np.sum(1.0 / ks))
    return QualityCurve(ks=ks, r_values=r, auc_rnx=auc)


def quality_curve(X_hd, Y_ld, k_max: int = 99) -> QualityCurve:
    """End-to-end quality curve between HD points and their LD embedding."""
    X = _coords(X_hd)
    Y = _coords(Y_ld)
    if X.shape[0] != Y.shape[0]:
        raise ValueError("HD and LD row counts differ")
    if X.shape[0] < k_max + 2:
        raise ValueError(
            f"need at least k_max + 2 = {k_max + 2} points, got {X.shape[0]}"
        )
    return quality_curve_from_tables(
        knn_table(X, k_max), knn_table(Y, k_max), k_max
    )


def write_quality_csv(curve: QualityCurve) -> str:
    """CSV text: ``k,R`` rows followed by the one-line ``auc_rnx`` summary."""
    lines = ["k,R"]
    for k, r in zip(curve.ks, curve.r_values):
        lines.append(f"{int(k)},{float(r)!r}")
    lines.append(f"auc_rnx,{float(curve.auc_rnx)!r}")
    return "\n".join(lines) + "\n"


def write_auc_series_csv(iterations, aucs) -> str:
    """CSV text ``iteration,auc_rnx`` for a trajectory's checkpoint AUCs."""
    lines = ["iteration,auc_rnx"]
    for it, auc in zip(iterations, aucs):
        lines.append(f"{int(it)},{float(auc)!r}")
    return "\n".join(lines) + "\n"
