"""STFT analysis and weighted overlap-add (WOLA) synthesis.

Square-root Hann windows at 50 % overlap are used for both analysis and
synthesis, so the squared window values of overlapping frames sum to one
and the analysis/synthesis round trip is exact. Input signals are padded
with ``frame_len - hop`` zeros on both sides (plus tail zeros up to a
whole frame) so that every input sample receives full overlap-add weight.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DataError

SQRT_HANN = "sqrt-hann"


@dataclass(frozen=True)
class FrameSpec:
    """Framing grid of an STFT: frame length, hop and sample rate."""

    frame_len: int
    hop: int
    sample_rate: int
    window: str = SQRT_HANN

    def __post_init__(self):
        if self.frame_len <= 0 or self.frame_len & (self.frame_len - 1):
            raise DataError(f"frame_len must be a power of two, got {self.frame_len}")
        if self.hop * 2 != self.frame_len:
            raise DataError(
                f"hop must be frame_len/2 (50 % overlap), got hop={self.hop} "
                f"for frame_len={self.frame_len}"
            )
        if self.sample_rate <= 0:
            raise DataError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.window != SQRT_HANN:
            raise DataError(f"unsupported window kind: {self.window!r}")

    @property
    def num_bins(self) -> int:
        return self.frame_len // 2 + 1

    @property
    def pad(self) -> int:
        """Zeros prepended/appended so edge samples get full COLA weight."""
        return self.frame_len - self.hop

    def window_values(self) -> np.ndarray:
        return _sqrt_hann(self.frame_len)

    def num_frames(self, signal_len: int) -> int:
        """Frame count produced by :func:`analyze` for a signal of this length."""
        if signal_len <= 0:
            raise DataError("signal_len must be positive")
        return -(-signal_len // self.hop) + 1

    def frame_center_seconds(self, frame: int) -> float:
        """Center time of frame ``frame`` used for phoneme labeling."""
        return (frame * self.hop + self.frame_len / 2) / self.sample_rate


@lru_cache(maxsize=8)
def _sqrt_hann(frame_len: int) -> np.ndarray:
    # periodic sqrt-Hann == sine window; w[n]^2 + w[n+hop]^2 == 1 at 50 % overlap
    return np.sin(np.pi * np.arange(frame_len) / frame_len)


@dataclass
class Waveform:
    """Mono audio samples with their sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise DataError(f"waveform must be 1-D, got shape {self.samples.shape}")
        if self.sample_rate <= 0:
            raise DataError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.samples.size and not np.all(np.isfinite(self.samples)):
            raise DataError("waveform contains non-finite samples")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def rms(self) -> float:
        return float(np.sqrt(np.mean(np.square(self.samples)))) if len(self) else 0.0


@dataclass
class Spectrogram:
    """One-sided complex STFT, shape [num_bins x num_frames]."""

    data: np.ndarray
    spec: FrameSpec = field(repr=False)

    def __post_init__(self):
        self.data = np.asarray(self.data)
        if self.data.ndim != 2:
            raise DataError(f"spectrogram must be 2-D, got shape {self.data.shape}")
        if self.data.shape[0] != self.spec.num_bins:
            raise DataError(
                f"spectrogram has {self.data.shape[0]} bins, "
                f"expected {self.spec.num_bins} for frame_len={self.spec.frame_len}"
            )
        if not np.iscomplexobj(self.data):
            self.data = self.data.astype(np.complex128)

    @property
    def num_frames(self) -> int:
        return self.data.shape[1]


# standard grids: the 16 kHz pipeline rate (32 ms frames) and the 5 kHz
# band-limited rate transfer-characteristic models operate at (25.6 ms frames)
PIPELINE_FRAME_SPEC = FrameSpec(frame_len=512, hop=256, sample_rate=16000)
MODEL_FRAME_SPEC = FrameSpec(frame_len=128, hop=64, sample_rate=5000)


def analyze(x: Waveform, spec: FrameSpec) -> Spectrogram:
    """Windowed one-sided STFT of ``x`` on the grid given by ``spec``.

    The signal is zero-padded by ``spec.pad`` samples on both sides and at
    the tail up to a whole frame, so frame ``l`` covers input samples
    ``[l*hop - pad, l*hop - pad + frame_len)``.
    """
    if x.sample_rate != spec.sample_rate:
        raise DataError(
            f"sample rate mismatch: waveform {x.sample_rate} Hz vs spec {spec.sample_rate} Hz"
        )
    if len(x) == 0:
        raise DataError("cannot analyze an empty waveform")
    num_frames = spec.num_frames(len(x))
    total = (num_frames - 1) * spec.hop + spec.frame_len
    buf = np.zeros(total)
    buf[spec.pad : spec.pad + len(x)] = x.samples
    frames = np.lib.stride_tricks.sliding_window_view(buf, spec.frame_len)[:: spec.hop]
    frames = frames[:num_frames] * spec.window_values()
    return Spectrogram(np.fft.rfft(frames, axis=1).T, spec)


def synthesize(S: Spectrogram, num_samples: int | None = None) -> Waveform:
    """Weighted overlap-add synthesis, inverse of :func:`analyze`.

    Returns the full overlap-add buffer of length
    ``(num_frames - 1)*hop + frame_len``. When ``num_samples`` is given,
    the analysis padding is stripped and the result is cut (or zero-padded)
    to exactly that many samples.
    """
    spec = S.spec
    if S.num_frames == 0:
        raise DataError("cannot synthesize a spectrogram with zero frames")
    frames = np.fft.irfft(S.data.T, n=spec.frame_len, axis=1)
    frames *= spec.window_values()
    total = (S.num_frames - 1) * spec.hop + spec.frame_len
    out = np.zeros(total)
    for l in range(S.num_frames):
        out[l * spec.hop : l * spec.hop + spec.frame_len] += frames[l]
    if num_samples is not None:
        trimmed = out[spec.pad : spec.pad + num_samples]
        if trimmed.size < num_samples:
            trimmed = np.pad(trimmed, (0, num_samples - trimmed.size))
        out = trimmed
    return Waveform(out, spec.sample_rate)
