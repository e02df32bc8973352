"""Simulate in-ear own-voice signals from single-channel speech.

The speech signal stands in for the outer-microphone own voice: it is
downsampled to the 5 kHz model rate, transformed to the STFT domain,
multiplied frame by frame with an RTF drawn from a transfer characteristic
model, transformed back and upsampled to the original rate. Three
techniques choose the RTF sequence: a single speech-independent RTF, the
phoneme-matched RTF per frame (speech-dependent), or a uniformly random
phoneme per frame. Phoneme-driven sequences are recursively smoothed to
avoid discontinuities at phoneme transitions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .phonemes import PhonemeSequence, random_sequence
from .resample import resample
from .rtf import SPEECH_DEPENDENT, SPEECH_INDEPENDENT, RtfModel
from .wola import Spectrogram, Waveform, analyze, synthesize

TECHNIQUES = (SPEECH_INDEPENDENT, SPEECH_DEPENDENT, "random-phoneme")
RANDOM_PHONEME = "random-phoneme"

DEFAULT_ALPHA = 0.5


@dataclass
class AugmentConfig:
    """Technique, smoothing constant and seed for one augmentation run."""

    model: RtfModel
    technique: str = SPEECH_DEPENDENT
    alpha: float = DEFAULT_ALPHA
    seed: int = 0

    def __post_init__(self):
        if self.technique not in TECHNIQUES:
            raise DataError(f"unknown augmentation technique: {self.technique!r}")
        if not 0.0 <= self.alpha < 1.0:
            raise DataError(f"alpha must lie in [0, 1), got {self.alpha}")
        needs_dependent = self.technique in (SPEECH_DEPENDENT, RANDOM_PHONEME)
        if needs_dependent and self.model.mode != SPEECH_DEPENDENT:
            raise DataError(
                f"{self.technique} augmentation requires a speech-dependent model"
            )
        if self.technique == SPEECH_INDEPENDENT and self.model.mode != SPEECH_INDEPENDENT:
            raise DataError(
                "speech-independent augmentation requires a speech-independent model"
            )


def select_rtf_sequence(model: RtfModel, phonemes: PhonemeSequence) -> np.ndarray:
    """Per-frame RTF lookup: phoneme slot if available, else the fallback RTF.

    UNKNOWN frames and phonemes without an estimate both get the fallback.
    Returns a complex matrix [num_bins x num_frames].
    """
    if model.mode != SPEECH_DEPENDENT:
        raise DataError("RTF selection by phoneme requires a speech-dependent model")
    ids = phonemes.ids
    # column 0 of the lookup table is the fallback, columns 1..P the slots
    table = np.concatenate([model.fallback[:, None], model.rtfs], axis=1)
    cols = np.zeros(ids.size, dtype=np.intp)
    in_range = (ids >= 1) & (ids <= model.num_slots)
    idx = np.flatnonzero(in_range)
    served = idx[model.availability[ids[idx] - 1]]
    cols[served] = ids[served]
    return table[:, cols]


def smooth_rtf_sequence(H_seq: np.ndarray, alpha: float) -> np.ndarray:
    """First-order recursive smoothing along frames.

    Frame 0 passes through unchanged; afterwards each frame moves a
    (1 - alpha) fraction from the previous smoothed value toward the
    current one. Written in incremental form so a constant sequence is an
    exact fixed point for any alpha.
    """
    if not 0.0 <= alpha < 1.0:
        raise DataError(f"alpha must lie in [0, 1), got {alpha}")
    if alpha == 0.0 or H_seq.shape[1] == 0:
        return H_seq.copy()
    out = np.empty_like(H_seq)
    out[:, 0] = H_seq[:, 0]
    one_minus = 1.0 - alpha
    for l in range(1, H_seq.shape[1]):
        out[:, l] = out[:, l - 1] + one_minus * (H_seq[:, l] - out[:, l - 1])
    return out


def _rtf_sequence(
    cfg: AugmentConfig, num_frames: int, phonemes: PhonemeSequence | None
) -> np.ndarray:
    model = cfg.model
    if cfg.technique == SPEECH_INDEPENDENT:
        H_seq = np.repeat(model.rtfs[:, :1], num_frames, axis=1)
    elif cfg.technique == SPEECH_DEPENDENT:
        if phonemes is None:
            raise DataError("speech-dependent augmentation requires a phoneme sequence")
        if len(phonemes) != num_frames:
            raise DataError(
                f"phoneme sequence has {len(phonemes)} frames, expected {num_frames}"
            )
        H_seq = select_rtf_sequence(model, phonemes)
    else:  # random-phoneme
        seq = random_sequence(num_frames, model.inventory, cfg.seed, spec=model.spec)
        H_seq = select_rtf_sequence(model, seq)
    return smooth_rtf_sequence(H_seq, cfg.alpha)


def augment(
    speech: Waveform,
    cfg: AugmentConfig,
    phonemes: PhonemeSequence | None = None,
) -> Waveform:
    """Simulate the in-ear own-voice signal for ``speech``.

    The output is at the input sample rate, trimmed to the input length,
    and band-limited to half the model rate by the resampling chain.
    Identical inputs and config produce bit-identical output.
    """
    model_rate = cfg.model.spec.sample_rate
    low = resample(speech, model_rate)
    S_outer = analyze(low, cfg.model.spec)
    H_seq = _rtf_sequence(cfg, S_outer.num_frames, phonemes)
    S_inear = Spectrogram(H_seq * S_outer.data, cfg.model.spec)
    low_out = synthesize(S_inear, num_samples=len(low))
    out = resample(low_out, speech.sample_rate)
    samples = out.samples[: len(speech)]
    if samples.size < len(speech):
        samples = np.pad(samples, (0, len(speech) - samples.size))
    return Waveform(samples, speech.sample_rate)
