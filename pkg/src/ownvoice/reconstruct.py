"""Own-voice reconstruction from noisy spectrograms via complex masks.

The enhancement model (external to this package) produces one complex
mask per microphone; the estimated own-voice spectrum is the elementwise
masked sum of both noisy spectrograms, synthesized back to a waveform.
"""

import numpy as np

from .errors import DataError
from .wola import Spectrogram, Waveform, synthesize


def apply_masks(
    noisy_outer: Spectrogram,
    noisy_inear: Spectrogram,
    mask_outer: np.ndarray,
    mask_inear: np.ndarray,
    num_samples: int | None = None,
) -> Waveform:
    """Masked sum of the two noisy spectrograms, synthesized to a waveform."""
    mask_outer = np.asarray(mask_outer)
    mask_inear = np.asarray(mask_inear)
    shapes = {noisy_outer.data.shape, noisy_inear.data.shape, mask_outer.shape, mask_inear.shape}
    if len(shapes) != 1:
        raise DataError(f"spectrogram/mask shapes differ: {sorted(shapes)}")
    if noisy_outer.spec != noisy_inear.spec:
        raise DataError("noisy spectrograms are on different grids")
    if not (np.all(np.isfinite(mask_outer)) and np.all(np.isfinite(mask_inear))):
        raise DataError("masks contain non-finite values")
    estimate = mask_outer * noisy_outer.data + mask_inear * noisy_inear.data
    return synthesize(Spectrogram(estimate, noisy_outer.spec), num_samples=num_samples)
