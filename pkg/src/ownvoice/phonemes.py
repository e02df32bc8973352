"""Frame-wise phoneme sequences: alignment-file ingestion and random generation.

Alignment files are plain text, one interval per line:
``start_seconds<TAB>end_seconds<TAB>label`` (UTF-8, intervals half-open,
non-overlapping, non-decreasing). An inventory file lists the P class
labels in id order, one per line; ids run 1..P and 0 means UNKNOWN.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .wola import MODEL_FRAME_SPEC, FrameSpec

UNKNOWN_ID = 0


@dataclass(frozen=True)
class PhonemeInventory:
    """Ordered set of P distinct phoneme labels, ids 1..P."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise DataError("inventory must contain at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise DataError("inventory labels must be unique")

    @property
    def size(self) -> int:
        return len(self.labels)

    def id_of(self, label: str) -> int:
        try:
            return self.labels.index(label) + 1
        except ValueError:
            raise DataError(f"label {label!r} not in inventory") from None

    def label_of(self, phoneme_id: int) -> str:
        if not 1 <= phoneme_id <= self.size:
            raise DataError(f"phoneme id {phoneme_id} out of range 1..{self.size}")
        return self.labels[phoneme_id - 1]

    @classmethod
    def from_file(cls, path) -> "PhonemeInventory":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls(tuple(line.strip() for line in lines if line.strip()))


@dataclass
class PhonemeSequence:
    """Per-frame phoneme class ids on an STFT grid; 0 marks UNKNOWN frames."""

    ids: np.ndarray
    frame_spec: FrameSpec
    inventory: PhonemeInventory

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)
        if self.ids.ndim != 1:
            raise DataError("phoneme ids must be a 1-D sequence")
        if self.ids.size and (
            self.ids.min() < UNKNOWN_ID or self.ids.max() > self.inventory.size
        ):
            raise DataError(
                f"phoneme ids must lie in [0, {self.inventory.size}]"
            )

    def __len__(self) -> int:
        return self.ids.size


def _parse_alignment(path) -> list[tuple[float, float, str]]:
    intervals = []
    prev_end = 0.0
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DataError(f"{path}:{lineno}: expected 'start<TAB>end<TAB>label'")
        try:
            start, end = float(parts[0]), float(parts[1])
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-numeric interval times") from None
        if start < 0 or end < 0:
            raise DataError(f"{path}:{lineno}: negative interval times")
        if end < start:
            raise DataError(f"{path}:{lineno}: interval end before start")
        if start < prev_end:
            raise DataError(f"{path}:{lineno}: intervals overlap or decrease")
        intervals.append((start, end, parts[2].strip()))
        prev_end = end
    return intervals


def load_alignment(
    path,
    inventory: PhonemeInventory,
    spec: FrameSpec,
    signal_len: int,
) -> PhonemeSequence:
    """Label every STFT frame of a ``signal_len``-sample signal from an alignment file.

    Frame ``l`` takes the phoneme of the interval containing its center time
    ``(l*hop + frame_len/2) / sample_rate``; intervals are half-open, so a
    center on a boundary belongs to the later interval. Uncovered frames
    get UNKNOWN.
    """
    intervals = _parse_alignment(path)
    label_ids = np.array([inventory.id_of(lab) for _, _, lab in intervals], dtype=np.int64)
    starts = np.array([iv[0] for iv in intervals])
    ends = np.array([iv[1] for iv in intervals])

    num_frames = spec.num_frames(signal_len)
    centers = np.array([spec.frame_center_seconds(l) for l in range(num_frames)])
    ids = np.full(num_frames, UNKNOWN_ID, dtype=np.int64)
    if len(intervals):
        # first interval whose end lies strictly beyond the center
        idx = np.searchsorted(ends, centers, side="right")
        covered = (idx < len(intervals)) & (starts[np.minimum(idx, len(intervals) - 1)] <= centers)
        ids[covered] = label_ids[idx[covered]]
    return PhonemeSequence(ids, spec, inventory)


def random_sequence(
    num_frames: int,
    inventory: PhonemeInventory,
    seed: int,
    spec: FrameSpec | None = None,
) -> PhonemeSequence:
    """Frame-wise ids drawn i.i.d. uniform over {1..P}, reproducible per seed."""
    if num_frames < 0:
        raise DataError("num_frames must be non-negative")
    rng = np.random.default_rng(seed)
    ids = rng.integers(1, inventory.size + 1, size=num_frames, dtype=np.int64)
    return PhonemeSequence(ids, spec or MODEL_FRAME_SPEC, inventory)
