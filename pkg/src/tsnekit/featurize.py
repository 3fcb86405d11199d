"""Fixed-length k-mer count vectors for sequence records.

A sequence over an alphabet of S symbols maps to a dense vector of length
S**k holding the count of every length-k substring seen in its sliding
windows. Slot order is the base-S big-endian encoding of the k-mer, so two
sequences over the same alphabet are directly comparable slot by slot.
"""

from __future__ import annotations

import numpy as np

from .errors import FeaturizationError
from .ingest import SequenceRecord

# Dense spectra get unwieldy fast; |alphabet|**k beyond this is almost
# certainly a parameter mistake.
MAX_FEATURE_DIM = 5_000_000


class Alphabet:
    """Ordered set of residue characters with a char -> position index."""

    def __init__(self, symbols):
        syms = list(symbols)
        if not syms:
            raise ValueError("alphabet must contain at least one symbol")
        if any(len(s) != 1 for s in syms):
            raise ValueError("alphabet symbols must be single characters")
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be distinct")
        self.symbols: tuple[str, ...] = tuple(syms)
        self.index: dict[str, int] = {c: i for i, c in enumerate(syms)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, char: str) -> bool:
        return char in self.index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.symbols)!r})"


def infer_alphabet(records: list[SequenceRecord]) -> Alphabet:
    """Sorted set of all characters occurring in any record's sequence."""
    if not records:
        raise ValueError("cannot infer an alphabet from zero records")
    chars = set()
    for rec in records:
        chars.update(rec.sequence)
    return Alphabet(sorted(chars))


def spectrum_dim(alphabet: Alphabet, k: int) -> int:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    dim = len(alphabet) ** k
    if dim > MAX_FEATURE_DIM:
        raise ValueError(
            f"spectrum dimension {len(alphabet)}**{k} = {dim} exceeds the "
            f"supported maximum {MAX_FEATURE_DIM}"
        )
    return dim


def kmer_spectrum(sequence: str, k: int, alphabet: Alphabet) -> np.ndarray:
    """Count vector of all length-k windows of ``sequence``.

    The slot of k-mer (c_1..c_k) is sum_j index(c_j) * S**(k-j); the vector
    sums to len(sequence) - k + 1.
    """
    dim = spectrum_dim(alphabet, k)
    if len(sequence) < k:
        raise ValueError(
            f"sequence of length {len(sequence)} is shorter than k = {k}"
        )
    codes = np.empty(len(sequence), dtype=np.int64)
    for pos, char in enumerate(sequence):
        code = alphabet.index.get(char)
        if code is None:
            raise FeaturizationError(
                f"character {char!r} at position {pos} is not in the alphabet"
            )
        codes[pos] = code
    size = len(alphabet)
    n_windows = len(sequence) - k + 1
    slots = np.zeros(n_windows, dtype=np.int64)
    for j in range(k):
        slots = slots * size + codes[j : j + n_windows]
    spectrum = np.zeros(dim, dtype=np.float64)
    np.add.at(spectrum, slots, 1.0)
    return spectrum


def build_feature_matrix(
    records: list[SequenceRecord], k: int, alphabet: Alphabet | None = None
) -> np.ndarray:
    """Stack per-record spectra into an N x S**k matrix (row i = record i)."""
    if not records:
        raise ValueError("cannot featurize zero records")
    if alphabet is None:
        alphabet = infer_alphabet(records)
    dim = spectrum_dim(alphabet, k)
    matrix = np.zeros((len(records), dim), dtype=np.float64)
    for i, rec in enumerate(records):
        try:
            matrix[i] = kmer_spectrum(rec.sequence, k, alphabet)
        except (FeaturizationError, ValueError) as exc:
            raise FeaturizationError(f"record {rec.id!r}: {exc}") from exc
    return matrix
