"""Dataset loading and generation.

Supports labeled sequence files (FASTA and a three-column CSV), numeric
point-set CSVs, and a synthetic noisy-circle generator used as the toy
benchmark. All parsers work on in-memory text/bytes and are side-effect free.

FASTA headers follow the common ``>id|label`` export convention: the token
before the first ``|`` is the record id, the token after it the class label.
Headers without a ``|`` use the full header text as both id and label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ParseError, ValidationError


@dataclass(frozen=True)
class SequenceRecord:
    """One labeled biological sequence."""

    id: str
    sequence: str
    label: str


@dataclass
class PointDataset:
    """N x D points row-aligned with class labels (and stable string ids)."""

    points: np.ndarray
    labels: list[str]
    ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.ndim != 2 or self.points.shape[1] < 1:
            raise ValueError("points must be a 2-D array with at least one column")
        if len(self.labels) != self.points.shape[0]:
            raise ValueError(
                f"label count {len(self.labels)} != point count {self.points.shape[0]}"
            )
        if not self.ids:
            self.ids = [f"p{i}" for i in range(self.points.shape[0])]
        elif len(self.ids) != self.points.shape[0]:
            raise ValueError("ids must match the number of points")

    def __len__(self) -> int:
        return self.points.shape[0]


def _as_text(source) -> str:
    """Accept bytes, str, or a file-like object and return decoded text."""
    if isinstance(source, str):
        return source
    if isinstance(source, bytes):
        return source.decode("utf-8")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _check_unique_ids(ids) -> None:
    seen = set()
    for rec_id in ids:
        if rec_id in seen:
            raise ValidationError(f"duplicate record id {rec_id!r}")
        seen.add(rec_id)


def parse_fasta(source) -> list[SequenceRecord]:
    """Parse FASTA text into sequence records.

    Sequence lines are concatenated, whitespace-stripped, and uppercased.
    Raises ParseError for content before the first header or an empty record
    body, and ValidationError for duplicate ids.
    """
    text = _as_text(source)
    records: list[SequenceRecord] = []
    header: tuple[str, str] | None = None
    chunks: list[str] = []

    def flush():
        if header is None:
            return
        seq = "".join(chunks)
        if not seq:
            raise ParseError(f"record {header[0]!r} has an empty sequence body")
        records.append(SequenceRecord(id=header[0], sequence=seq, label=header[1]))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            head = line[1:].strip()
            if not head:
                raise ParseError("empty FASTA header", line=lineno)
            if "|" in head:
                rec_id, label = head.split("|", 2)[:2]
                rec_id, label = rec_id.strip(), label.strip()
            else:
                rec_id = label = head
            if not rec_id:
                raise ParseError("FASTA header has an empty id", line=lineno)
            header = (rec_id, label)
            chunks = []
        else:
            if header is None:
                raise ParseError(
                    "sequence data before the first '>' header", line=lineno
                )
            chunks.append("".join(line.split()).upper())
    flush()
    _check_unique_ids(r.id for r in records)
    return records


def write_fasta(records: list[SequenceRecord]) -> str:
    """Render records as ``>id|label`` FASTA text (inverse of parse_fasta)."""
    lines = []
    for rec in records:
        lines.append(f">{rec.id}|{rec.label}")
        lines.append(rec.sequence)
    return "\n".join(lines) + "\n" if lines else ""


SEQUENCE_CSV_HEADER = "id,sequence,label"


def parse_labeled_csv(source) -> list[SequenceRecord]:
    """Parse ``id,sequence,label`` CSV text (no embedded commas) into records."""
    text = _as_text(source)
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise FormatError(f"missing header; expected {SEQUENCE_CSV_HEADER!r}")
    if lines[0].strip() != SEQUENCE_CSV_HEADER:
        raise FormatError(
            f"bad header {lines[0].strip()!r}; expected {SEQUENCE_CSV_HEADER!r}"
        )
    records: list[SequenceRecord] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise ParseError(
                f"expected 3 comma-separated fields, got {len(fields)}", line=lineno
            )
        rec_id, seq, label = (f.strip() for f in fields)
        if not rec_id:
            raise ParseError("empty id field", line=lineno)
        seq = "".join(seq.split()).upper()
        if not seq:
            raise ParseError(f"record {rec_id!r} has an empty sequence body")
        records.append(SequenceRecord(id=rec_id, sequence=seq, label=label))
    _check_unique_ids(r.id for r in records)
    return records


def write_labeled_csv(records: list[SequenceRecord]) -> str:
    lines = [SEQUENCE_CSV_HEADER]
    lines.extend(f"{r.id},{r.sequence},{r.label}" for r in records)
    return "\n".join(lines) + "\n"


def generate_circle(
    n: int, radius: float = 1.0, noise_std: float | None = None, seed: int = 0
) -> PointDataset:
    """Sample n evenly spaced points on a circle with additive Gaussian noise.

    Point i sits at angle 2*pi*i/n, jittered per coordinate by
    Normal(0, noise_std^2) from a generator seeded with ``seed``. Labels are
    the quadrant index ("0".."3") of the noise-free angle, which gives plots a
    4-class coloring. noise_std defaults to 0.05 * radius.
    """
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if noise_std is None:
        noise_std = 0.05 * radius
    if noise_std < 0:
        raise ValueError("noise_std must be nonnegative")
    rng = np.random.default_rng(seed)
    idx = np.arange(n)
    theta = 2.0 * np.pi * idx / n
    base = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    points = base + rng.normal(0.0, noise_std, size=(n, 2))
    # integer quadrant of the noise-free angle: floor(theta / (pi/2)) == 4i // n
    labels = [str((4 * i) // n) for i in idx]
    return PointDataset(points=points, labels=labels, ids=[f"p{i}" for i in idx])


def _fmt(x: float) -> str:
    """Shortest round-trip decimal form of a float (plain Python repr)."""
    return repr(float(x))


def write_points_csv(dataset: PointDataset) -> str:
    """Render a point set as ``id,x1,...,xD,label`` CSV text."""
    dim = dataset.points.shape[1]
    header = "id," + ",".join(f"x{j + 1}" for j in range(dim)) + ",label"
    lines = [header]
    for i in range(len(dataset)):
        coords = ",".join(_fmt(v) for v in dataset.points[i])
        lines.append(f"{dataset.ids[i]},{coords},{dataset.labels[i]}")
    return "\n".join(lines) + "\n"


def read_points_csv(source) -> PointDataset:
    """Parse ``id,x1,...,xD,label`` CSV text into a PointDataset."""
    text = _as_text(source)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("missing header; expected 'id,x1,...,xD,label'")
    cols = [c.strip() for c in lines[0].split(",")]
    if len(cols) < 3 or cols[0] != "id" or cols[-1] != "label":
        raise FormatError(
            f"bad header {lines[0]!r}; expected 'id,x1,...,xD,label'"
        )
    expected = [f"x{j + 1}" for j in range(len(cols) - 2)]
    if cols[1:-1] != expected:
        raise FormatError("coordinate columns must be named x1..xD in order")
    dim = len(expected)
    ids: list[str] = []
    rows: list[list[float]] = []
    labels: list[str] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        fields = raw.split(",")
        if len(fields) != dim + 2:
            raise ParseError(
                f"expected {dim + 2} fields, got {len(fields)}", line=lineno
            )
        ids.append(fields[0].strip())
        try:
            rows.append([float(v) for v in fields[1:-1]])
        except ValueError as exc:
            raise ParseError(f"bad numeric value ({exc})", line=lineno) from exc
        labels.append(fields[-1].strip())
    if not rows:
        raise FormatError("point-set CSV has no data rows")
    _check_unique_ids(ids)
    return PointDataset(points=np.array(rows), labels=labels, ids=ids)
