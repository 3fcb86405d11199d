import numpy as np
import pytest

from tsnekit.errors import FormatError, ParseError, ValidationError
from tsnekit.ingest import (
    PointDataset,
    SequenceRecord,
    generate_circle,
    parse_fasta,
    parse_labeled_csv,
    read_points_csv,
    write_fasta,
    write_labeled_csv,
    write_points_csv,
)


class TestParseFasta:
    def test_single_record(self):
        records = parse_fasta(">s1|Alpha\nMFVF\n")
        assert records == [SequenceRecord(id="s1", sequence="MFVF", label="Alpha")]

    def test_multiline_bodies_are_concatenated(self):
        records = parse_fasta(">a|X\nMF\nVF\n>b|Y\nACD\n")
        assert len(records) == 2
        assert records[0].sequence == "MFVF"
        assert records[1] == SequenceRecord(id="b", sequence="ACD", label="Y")

    def test_empty_body_names_the_record(self):
        with pytest.raises(ParseError, match="'a'"):
            parse_fasta(">a|X\n\n>b|Y\nACD")

    def test_bytes_input(self):
        records = parse_fasta(b">s1|Alpha\nMFVF\n")
        assert records[0].id == "s1"

    def test_data_before_first_header_reports_line(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_fasta("MFVF\n>a|X\nACD\n")

    def test_header_without_pipe_uses_full_header(self):
        records = parse_fasta(">seq7\nMFVF\n")
        assert records[0].id == "seq7"
        assert records[0].label == "seq7"

    def test_sequences_uppercased_and_whitespace_stripped(self):
        records = parse_fasta(">a|X\n mf vf \n")
        assert records[0].sequence == "MFVF"

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValidationError, match="'a'"):
            parse_fasta(">a|X\nMF\n>a|Y\nVF\n")

    def test_round_trip(self):
        records = [
            SequenceRecord("s1", "MFVF", "Alpha"),
            SequenceRecord("s2", "ACDEF", "Beta"),
            SequenceRecord("plain", "MM", "plain"),
        ]
        assert parse_fasta(write_fasta(records)) == records


class TestParseLabeledCsv:
    def test_single_record(self):
        records = parse_labeled_csv("id,sequence,label\ns1,MFVF,Alpha\n")
        assert records == [SequenceRecord("s1", "MFVF", "Alpha")]

    def test_duplicate_id_is_validation_error(self):
        with pytest.raises(ValidationError, match="'s1'"):
            parse_labeled_csv("id,sequence,label\ns1,MFVF,A\ns1,ACD,B\n")

    def test_empty_file_is_format_error(self):
        with pytest.raises(FormatError, match="header"):
            parse_labeled_csv("")

    def test_wrong_header_is_format_error(self):
        with pytest.raises(FormatError):
            parse_labeled_csv("name,seq,class\ns1,MFVF,A\n")

    def test_crlf_accepted(self):
        records = parse_labeled_csv("id,sequence,label\r\ns1,MFVF,Alpha\r\n")
        assert records[0].sequence == "MFVF"

    def test_round_trip(self):
        records = parse_labeled_csv("id,sequence,label\ns1,MFVF,Alpha\ns2,ACD,Beta\n")
        assert parse_labeled_csv(write_labeled_csv(records)) == records


class TestGenerateCircle:
    def test_four_points_zero_noise(self):
        ds = generate_circle(4, 1.0, 0.0, seed=0)
        expected = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
        np.testing.assert_allclose(ds.points, expected, atol=1e-12)
        assert ds.labels == ["0", "1", "2", "3"]

    def test_zero_noise_points_lie_on_circle(self):
        ds = generate_circle(257, 2.5, 0.0, seed=3)
        radii = np.linalg.norm(ds.points, axis=1)
        assert np.max(np.abs(radii - 2.5)) < 1e-12

    def test_noisy_points_stay_near_circle(self):
        # large draw: all radii should stay within a few sigma of the circle
        ds = generate_circle(7000, 1.0, 0.05, seed=1)
        assert len(ds) == 7000
        radii = np.linalg.norm(ds.points, axis=1)
        assert np.all(np.abs(radii - 1.0) < 5 * 0.05 * 1.6)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            generate_circle(2, 1.0, 0.0, 0)

    def test_same_seed_bitwise_identical(self):
        a = generate_circle(50, 1.0, 0.05, seed=9)
        b = generate_circle(50, 1.0, 0.05, seed=9)
        assert np.array_equal(a.points, b.points)
        assert a.labels == b.labels

    def test_quadrant_labels_match_angle(self):
        ds = generate_circle(12, 1.0, 0.0, seed=0)
        angles = 2 * np.pi * np.arange(12) / 12
        expected = [str(int(a // (np.pi / 2))) for a in angles]
        assert ds.labels == expected


class TestPointsCsv:
    def test_round_trip(self):
        ds = PointDataset(
            points=np.array([[1.5, -2.25], [0.1, 3.75]]),
            labels=["a", "b"],
            ids=["p0", "p1"],
        )
        back = read_points_csv(write_points_csv(ds))
        assert np.array_equal(back.points, ds.points)
        assert back.labels == ds.labels
        assert back.ids == ds.ids

    def test_header_validation(self):
        with pytest.raises(FormatError):
            read_points_csv("id,a,b,label\np0,1,2,x\n")

    def test_row_width_validation(self):
        with pytest.raises(ParseError, match="line 2"):
            read_points_csv("id,x1,x2,label\np0,1,x\n")

    def test_mismatched_labels_rejected(self):
        with pytest.raises(ValueError):
            PointDataset(points=np.zeros((3, 2)), labels=["a"])
