"""Band-limited rational sample-rate conversion.

Polyphase resampling with a Kaiser-windowed sinc anti-aliasing filter.
The filter is designed for 80 dB stopband attenuation with the transition
band placed at [0.45, 0.5] of the lower of the two Nyquist frequencies,
so content below 0.45x the lower rate survives a round trip within
0.1 dB and aliased content stays well below -60 dB. Linear-phase group
delay is compensated, keeping resampled signals time-aligned.
"""

from functools import lru_cache
from math import gcd

import numpy as np
from scipy import signal as sps

from .errors import DataError
from .wola import Waveform

STOPBAND_DB = 80.0
PASSBAND_EDGE = 0.45  # of the lower sample rate
STOPBAND_EDGE = 0.50


@lru_cache(maxsize=32)
def _design_filter(up: int, down: int, min_rate: int, filt_rate: int) -> np.ndarray:
    width = (STOPBAND_EDGE - PASSBAND_EDGE) * min_rate
    cutoff = 0.5 * (PASSBAND_EDGE + STOPBAND_EDGE) * min_rate
    numtaps, beta = sps.kaiserord(STOPBAND_DB, width / (filt_rate / 2))
    numtaps |= 1  # odd length -> integer group delay
    return sps.firwin(numtaps, cutoff / (filt_rate / 2), window=("kaiser", beta))


def resample(x: Waveform, target_rate: int) -> Waveform:
    """Resample ``x`` to ``target_rate`` Hz.

    Output duration matches the input within one output sample; an
    identical rate returns a copy unchanged.
    """
    if target_rate <= 0:
        raise DataError(f"target_rate must be positive, got {target_rate}")
    if target_rate == x.sample_rate:
        return Waveform(x.samples.copy(), x.sample_rate)
    g = gcd(x.sample_rate, target_rate)
    up, down = target_rate // g, x.sample_rate // g
    h = _design_filter(up, down, min(x.sample_rate, target_rate), x.sample_rate * up)
    return Waveform(sps.resample_poly(x.samples, up, down, window=h), target_rate)
