"""Own-voice transfer characteristic models and data augmentation for hearables."""

__version__ = "0.1.0"

from .augment import AugmentConfig, augment, select_rtf_sequence, smooth_rtf_sequence
from .errors import DataError, FileFormatError, OwnVoiceError, UnsupportedVersionError
from .mixing import MixResult, draw_snr, mix_at_snr, normalize
from .phonemes import (
    UNKNOWN_ID,
    PhonemeInventory,
    PhonemeSequence,
    load_alignment,
    random_sequence,
)
from .reconstruct import apply_masks
from .resample import resample
from .rtf import (
    INDIVIDUAL,
    SPEECH_DEPENDENT,
    SPEECH_INDEPENDENT,
    TALKER_AVERAGED,
    RtfAccumulator,
    RtfModel,
    accumulate,
    finalize,
    merge,
)
from .serialization import load_masks, load_model, save_masks, save_model
from .spatialize import (
    HrirSet,
    SpatializeConfig,
    add_incoherent_floor,
    load_hrir_set,
    spatialize,
    spatialize_diffuse,
    spatialize_point,
)
from .wola import (
    MODEL_FRAME_SPEC,
    PIPELINE_FRAME_SPEC,
    FrameSpec,
    Spectrogram,
    Waveform,
    analyze,
    synthesize,
)

__all__ = [
    "AugmentConfig",
    "DataError",
    "FileFormatError",
    "FrameSpec",
    "HrirSet",
    "INDIVIDUAL",
    "MODEL_FRAME_SPEC",
    "MixResult",
    "OwnVoiceError",
    "PIPELINE_FRAME_SPEC",
    "PhonemeInventory",
    "PhonemeSequence",
    "RtfAccumulator",
    "RtfModel",
    "SPEECH_DEPENDENT",
    "SPEECH_INDEPENDENT",
    "SpatializeConfig",
    "Spectrogram",
    "TALKER_AVERAGED",
    "UNKNOWN_ID",
    "UnsupportedVersionError",
    "Waveform",
    "accumulate",
    "add_incoherent_floor",
    "analyze",
    "apply_masks",
    "augment",
    "draw_snr",
    "finalize",
    "load_alignment",
    "load_hrir_set",
    "load_masks",
    "load_model",
    "merge",
    "mix_at_snr",
    "normalize",
    "random_sequence",
    "resample",
    "save_masks",
    "save_model",
    "select_rtf_sequence",
    "smooth_rtf_sequence",
    "spatialize",
    "spatialize_diffuse",
    "spatialize_point",
    "synthesize",
]
