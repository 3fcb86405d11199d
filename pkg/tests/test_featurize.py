import numpy as np
import pytest

from tsnekit.errors import FeaturizationError
from tsnekit.featurize import (
    Alphabet,
    build_feature_matrix,
    infer_alphabet,
    kmer_spectrum,
)
from tsnekit.ingest import SequenceRecord


def brute_force_counts(sequence: str, k: int) -> dict:
    """Independent oracle: dictionary of substring counts."""
    counts = {}
    for i in range(len(sequence) - k + 1):
        mer = sequence[i : i + k]
        counts[mer] = counts.get(mer, 0) + 1
    return counts


def slot_of(mer: str, alphabet: Alphabet) -> int:
    idx = 0
    for c in mer:
        idx = idx * len(alphabet) + alphabet.index[c]
    return idx


AMINO_20 = Alphabet("ACDEFGHIKLMNPQRSTVWY")


class TestAlphabet:
    def test_infer_sorts_union(self):
        records = [
            SequenceRecord("a", "BA", "x"),
            SequenceRecord("b", "AC", "y"),
        ]
        assert infer_alphabet(records).symbols == ("A", "B", "C")

    def test_duplicate_symbols_rejected(self):
        with pytest.raises(ValueError):
            Alphabet("AAB")

    def test_empty_records_rejected(self):
        with pytest.raises(ValueError):
            infer_alphabet([])

    def test_index_inverts_symbols(self):
        alpha = Alphabet("CAB")
        assert [alpha.symbols[alpha.index[c]] for c in "CAB"] == ["C", "A", "B"]


class TestKmerSpectrum:
    def test_two_distinct_windows(self):
        spectrum = kmer_spectrum("MFVF", 3, AMINO_20)
        assert spectrum.shape == (8000,)
        nonzero = np.flatnonzero(spectrum)
        assert len(nonzero) == 2
        assert spectrum[slot_of("MFV", AMINO_20)] == 1
        assert spectrum[slot_of("FVF", AMINO_20)] == 1

    def test_repeated_kmer_accumulates(self):
        spectrum = kmer_spectrum("AAAA", 2, Alphabet("A"))
        assert spectrum.tolist() == [3.0]

    def test_host_alphabet_dimension(self):
        alpha24 = Alphabet("ABCDEFGHIJKLMNOPQRSTUVWX")
        spectrum = kmer_spectrum("ACD", 3, alpha24)
        assert spectrum.shape == (13824,)
        assert np.count_nonzero(spectrum) == 1

    def test_window_sum_identity(self):
        rng = np.random.default_rng(0)
        symbols = "ACDEF"
        for _ in range(20):
            n = int(rng.integers(5, 40))
            seq = "".join(rng.choice(list(symbols), size=n))
            for k in (1, 2, 3):
                spectrum = kmer_spectrum(seq, k, Alphabet(symbols))
                assert spectrum.sum() == len(seq) - k + 1

    def test_matches_dictionary_oracle(self):
        rng = np.random.default_rng(42)
        for trial in range(100):
            size = int(rng.integers(2, 7))
            symbols = "ABCDEF"[:size]
            alpha = Alphabet(symbols)
            k = int(rng.integers(1, 4))
            length = int(rng.integers(k, 51))
            seq = "".join(rng.choice(list(symbols), size=length))
            spectrum = kmer_spectrum(seq, k, alpha)
            expected = np.zeros(size**k)
            for mer, count in brute_force_counts(seq, k).items():
                expected[slot_of(mer, alpha)] = count
            assert np.array_equal(spectrum, expected), f"trial {trial}: {seq} k={k}"

    def test_unknown_character_names_position(self):
        with pytest.raises(FeaturizationError, match="'Z'.*position 2"):
            kmer_spectrum("ACZD", 2, Alphabet("ACD"))

    def test_sequence_shorter_than_k(self):
        with pytest.raises(ValueError):
            kmer_spectrum("AC", 3, Alphabet("AC"))


class TestBuildFeatureMatrix:
    def test_rows_sum_to_window_counts(self):
        records = [
            SequenceRecord("a", "MFVF", "x"),
            SequenceRecord("b", "FVFM", "y"),
        ]
        X = build_feature_matrix(records, 3, AMINO_20)
        assert X.shape == (2, 8000)
        assert np.array_equal(X.sum(axis=1), [2.0, 2.0])
        # hand-enumerated windows: MFV,FVF and FVF,VFM
        assert X[0, slot_of("MFV", AMINO_20)] == 1
        assert X[0, slot_of("FVF", AMINO_20)] == 1
        assert X[1, slot_of("FVF", AMINO_20)] == 1
        assert X[1, slot_of("VFM", AMINO_20)] == 1

    def test_full_length_kmer_is_one_hot(self):
        records = [SequenceRecord("a", "ACDA", "x")]
        X = build_feature_matrix(records, 4)
        assert X.sum() == 1.0
        assert np.count_nonzero(X) == 1

    def test_empty_record_list(self):
        with pytest.raises(ValueError):
            build_feature_matrix([], 3)

    def test_error_names_offending_record(self):
        records = [
            SequenceRecord("ok", "ACDC", "x"),
            SequenceRecord("bad", "AC", "y"),
        ]
        with pytest.raises(FeaturizationError, match="'bad'"):
            build_feature_matrix(records, 3, Alphabet("ACD"))

    def test_row_permutation_equivariance(self):
        rng = np.random.default_rng(7)
        records = [
            SequenceRecord(f"r{i}", "".join(rng.choice(list("ACDE"), size=12)), "x")
            for i in range(6)
        ]
        X = build_feature_matrix(records, 2, Alphabet("ACDE"))
        perm = rng.permutation(6)
        X_perm = build_feature_matrix([records[p] for p in perm], 2, Alphabet("ACDE"))
        assert np.array_equal(X_perm, X[perm])
