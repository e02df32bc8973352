"""Own-voice transfer characteristic models between hearable microphones.

A model holds one complex relative transfer function (RTF) per phoneme
class (speech-dependent) or a single RTF (speech-independent), estimated
by least squares from paired outer/in-ear spectrograms: per frequency bin
the cross-spectral sum of in-ear times conjugated outer is divided by the
outer power sum. Accumulators keep those sums so that per-utterance and
per-talker contributions can be pooled; merging accumulators and then
finalizing is arithmetically identical to accumulating all frames jointly,
which is how talker-averaged models are produced. Slots that never
received enough frames are marked unavailable and are served by a fallback
RTF, the mean over the available ones.

Models are estimated and stored only on the 5 kHz / 128-sample / 50 %
grid; in-ear own voice is band-limited, so nothing above 2.5 kHz is
modeled.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .phonemes import UNKNOWN_ID, PhonemeInventory, PhonemeSequence
from .wola import MODEL_FRAME_SPEC, FrameSpec, Spectrogram

SPEECH_INDEPENDENT = "speech-independent"
SPEECH_DEPENDENT = "speech-dependent"
INDIVIDUAL = "individual"
TALKER_AVERAGED = "talker-averaged"

# den entries below LOW_CONFIDENCE_FACTOR * eps mark bins with too little
# excitation to trust the estimate
LOW_CONFIDENCE_FACTOR = 1e3
EPS_SCALE = 1e-10


def _check_model_grid(spec: FrameSpec):
    if spec != MODEL_FRAME_SPEC:
        raise DataError(
            "transfer characteristic models are only supported on the "
            f"{MODEL_FRAME_SPEC.sample_rate} Hz / {MODEL_FRAME_SPEC.frame_len}-sample grid"
        )


@dataclass
class RtfAccumulator:
    """Running cross-spectral and power sums for least-squares RTF estimation."""

    spec: FrameSpec
    mode: str
    inventory: PhonemeInventory | None = None
    num: np.ndarray = field(init=False)
    den: np.ndarray = field(init=False)
    frame_counts: np.ndarray = field(init=False)
    num_utterances: int = field(init=False, default=0)
    talkers: set = field(init=False, default_factory=set)

    def __post_init__(self):
        _check_model_grid(self.spec)
        if self.mode == SPEECH_INDEPENDENT:
            slots = 1
        elif self.mode == SPEECH_DEPENDENT:
            if self.inventory is None:
                raise DataError("speech-dependent accumulation requires an inventory")
            slots = self.inventory.size
        else:
            raise DataError(f"unknown model mode: {self.mode!r}")
        self.num = np.zeros((self.spec.num_bins, slots), dtype=np.complex128)
        self.den = np.zeros((self.spec.num_bins, slots))
        self.frame_counts = np.zeros(slots, dtype=np.int64)

    @property
    def num_slots(self) -> int:
        return self.num.shape[1]

    def compatible_with(self, other: "RtfAccumulator") -> bool:
        return (
            self.spec == other.spec
            and self.mode == other.mode
            and self.num_slots == other.num_slots
        )


def accumulate(
    acc: RtfAccumulator,
    outer: Spectrogram,
    inear: Spectrogram,
    phonemes: PhonemeSequence | None = None,
) -> RtfAccumulator:
    """Add one utterance's frames to the accumulator (in place).

    In speech-independent mode all frames feed the single slot; in
    speech-dependent mode frame ``l`` feeds slot ``p(l)`` and UNKNOWN
    frames are skipped.
    """
    if outer.spec != acc.spec or inear.spec != acc.spec:
        raise DataError("spectrogram grid does not match accumulator grid")
    if outer.data.shape != inear.data.shape:
        raise DataError(
            f"outer/in-ear shapes differ: {outer.data.shape} vs {inear.data.shape}"
        )
    cross = inear.data * np.conj(outer.data)
    power = np.abs(outer.data) ** 2
    if acc.mode == SPEECH_INDEPENDENT:
        acc.num[:, 0] += cross.sum(axis=1)
        acc.den[:, 0] += power.sum(axis=1)
        acc.frame_counts[0] += outer.num_frames
    else:
        if phonemes is None:
            raise DataError("speech-dependent accumulation requires a phoneme sequence")
        if len(phonemes) != outer.num_frames:
            raise DataError(
                f"phoneme sequence has {len(phonemes)} frames, "
                f"spectrogram has {outer.num_frames}"
            )
        for pid in np.unique(phonemes.ids):
            if pid == UNKNOWN_ID:
                continue
            cols = phonemes.ids == pid
            acc.num[:, pid - 1] += cross[:, cols].sum(axis=1)
            acc.den[:, pid - 1] += power[:, cols].sum(axis=1)
            acc.frame_counts[pid - 1] += int(cols.sum())
    acc.num_utterances += 1
    return acc


def merge(accs: list[RtfAccumulator]) -> RtfAccumulator:
    """Elementwise sum of accumulators: pooling talkers or parallel workers."""
    if not accs:
        raise DataError("cannot merge an empty list of accumulators")
    first = accs[0]
    out = RtfAccumulator(first.spec, first.mode, first.inventory)
    for acc in accs:
        if not first.compatible_with(acc):
            raise DataError("accumulators differ in grid, mode or slot count")
        out.num += acc.num
        out.den += acc.den
        out.frame_counts += acc.frame_counts
        out.num_utterances += acc.num_utterances
        out.talkers |= acc.talkers
    return out


@dataclass
class RtfModel:
    """Finalized bank of complex RTFs plus fallback and availability flags."""

    mode: str
    scope: str
    rtfs: np.ndarray  # [num_bins x num_slots]
    fallback: np.ndarray  # [num_bins]
    availability: np.ndarray  # [num_slots] bool
    spec: FrameSpec
    inventory: PhonemeInventory | None = None
    frame_counts: np.ndarray | None = None
    low_confidence: np.ndarray | None = None  # [num_bins x num_slots] bool
    talkers: tuple[str, ...] = ()
    num_utterances: int = 0

    def __post_init__(self):
        _check_model_grid(self.spec)
        if self.scope not in (INDIVIDUAL, TALKER_AVERAGED):
            raise DataError(f"unknown model scope: {self.scope!r}")
        if self.mode not in (SPEECH_INDEPENDENT, SPEECH_DEPENDENT):
            raise DataError(f"unknown model mode: {self.mode!r}")
        if self.rtfs.shape[0] != self.spec.num_bins:
            raise DataError("rtf matrix bin count does not match frame spec")
        if self.availability.shape != (self.num_slots,):
            raise DataError("availability flags do not match slot count")
        if not self.availability.any():
            raise DataError("model has no available slot")
        if not np.all(np.isfinite(self.rtfs[:, self.availability])):
            raise DataError("available slots contain non-finite values")

    @property
    def num_slots(self) -> int:
        return self.rtfs.shape[1]

    def rtf_for(self, phoneme_id: int) -> np.ndarray:
        """RTF vector serving ``phoneme_id``: the slot if available, else fallback."""
        if phoneme_id != UNKNOWN_ID and 1 <= phoneme_id <= self.num_slots:
            if self.availability[phoneme_id - 1]:
                return self.rtfs[:, phoneme_id - 1]
        return self.fallback


def finalize(
    acc: RtfAccumulator,
    min_frames: int = 1,
    eps: float | None = None,
    scope: str = INDIVIDUAL,
) -> RtfModel:
    """Turn accumulated sums into an :class:`RtfModel`.

    Each slot's RTF is ``num / (den + eps)``; slots with fewer than
    ``min_frames`` frames are unavailable. ``eps`` defaults to
    ``1e-10 * mean(den)`` so the division is total even on empty bins;
    bins with ``den`` below ``1e3 * eps`` are flagged low-confidence.
    The fallback RTF is the mean over available slots.
    """
    if eps is None:
        eps = EPS_SCALE * float(acc.den.mean())
    if eps <= 0.0:
        eps = np.finfo(np.float64).tiny
    availability = acc.frame_counts >= max(min_frames, 1)
    if not availability.any():
        raise DataError("no phoneme slot reached the minimum frame count")
    rtfs = acc.num / (acc.den + eps)
    fallback = rtfs[:, availability].mean(axis=1)
    return RtfModel(
        mode=acc.mode,
        scope=scope,
        rtfs=rtfs,
        fallback=fallback,
        availability=availability,
        spec=acc.spec,
        inventory=acc.inventory,
        frame_counts=acc.frame_counts.copy(),
        low_confidence=acc.den < LOW_CONFIDENCE_FACTOR * eps,
        talkers=tuple(sorted(acc.talkers)),
        num_utterances=acc.num_utterances,
    )
