"""RIFF/WAV reading and writing.

Pipeline outputs are written as 32-bit float WAV; inputs may be 16-bit or
32-bit integer PCM or float, mono or stereo. The sample rate declared in
the header is authoritative.
"""

import numpy as np
from scipy.io import wavfile

from .errors import DataError
from .wola import Waveform

_INT_SCALES = {np.dtype(np.int16): 32768.0, np.dtype(np.int32): 2147483648.0}


def read_wav(path) -> tuple[np.ndarray, int]:
    """Read a WAV file into float64 in [-1, 1]; shape [N] or [N, C]."""
    rate, data = wavfile.read(path)
    if data.dtype in _INT_SCALES:
        data = data.astype(np.float64) / _INT_SCALES[data.dtype]
    elif data.dtype == np.uint8:
        data = (data.astype(np.float64) - 128.0) / 128.0
    else:
        data = data.astype(np.float64)
    return data, int(rate)


def read_waveform(path) -> Waveform:
    data, rate = read_wav(path)
    if data.ndim != 1:
        raise DataError(f"{path}: expected a mono file, got {data.shape[1]} channels")
    return Waveform(data, rate)


def read_stereo(path) -> tuple[Waveform, Waveform]:
    data, rate = read_wav(path)
    if data.ndim != 2 or data.shape[1] != 2:
        raise DataError(f"{path}: expected a stereo file")
    return Waveform(data[:, 0], rate), Waveform(data[:, 1], rate)


def write_waveform(path, wave: Waveform) -> None:
    wavfile.write(path, wave.sample_rate, wave.samples.astype(np.float32))


def write_stereo(path, left: Waveform, right: Waveform) -> None:
    if left.sample_rate != right.sample_rate or len(left) != len(right):
        raise DataError("stereo channels must share rate and length")
    data = np.column_stack([left.samples, right.samples]).astype(np.float32)
    wavfile.write(path, left.sample_rate, data)
