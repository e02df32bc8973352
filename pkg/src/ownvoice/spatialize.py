"""Render single-channel noise to coherent outer/in-ear microphone pairs.

Point-source rendering convolves the noise with the measured impulse
response pair of one direction. Pseudo-diffuse rendering sums circularly
time-shifted copies of the noise rendered from every measured direction,
scaled by 1/sqrt(D) to keep the expected power comparable. A low-level
white-noise floor can be added to the in-ear channel to mimic the reduced
inter-microphone coherence caused by body-produced noise.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import signal as sps

from .errors import DataError
from .seeds import derive_seed
from .wola import Waveform

POINT = "point"
DIFFUSE = "diffuse"
RANDOM = "random"

WHITE_NOISE_HIGH_DB = -60.0
DEFAULT_WHITE_NOISE_LOW_DB = -120.0


@dataclass
class HrirSet:
    """Measured impulse responses from D directions to both microphones."""

    azimuths_deg: tuple[float, ...]
    outer: list  # list of 1-D float arrays, one per direction
    inear: list
    sample_rate: int
    device_id: str = ""

    def __post_init__(self):
        if not self.azimuths_deg:
            raise DataError("HRIR set must contain at least one direction")
        if not (len(self.azimuths_deg) == len(self.outer) == len(self.inear)):
            raise DataError("HRIR set direction/IR counts are inconsistent")
        self.outer = [np.asarray(ir, dtype=np.float64) for ir in self.outer]
        self.inear = [np.asarray(ir, dtype=np.float64) for ir in self.inear]
        for ir in (*self.outer, *self.inear):
            if ir.ndim != 1 or not np.all(np.isfinite(ir)):
                raise DataError("impulse responses must be finite 1-D arrays")

    @property
    def num_directions(self) -> int:
        return len(self.azimuths_deg)


def load_hrir_set(directory) -> HrirSet:
    """Load one device/talker HRIR set from its directory.

    The directory holds ``directions.txt`` (one azimuth in degrees per
    line, in slot order) and one stereo WAV per direction named
    ``az<degrees:03d>.wav``, channel 0 being the outer and channel 1 the
    in-ear microphone.
    """
    from .audio_io import read_stereo

    directory = Path(directory)
    listing = directory / "directions.txt"
    if not listing.is_file():
        raise DataError(f"{directory}: missing directions.txt")
    azimuths = []
    for line in listing.read_text(encoding="utf-8").splitlines():
        if line.strip():
            azimuths.append(float(line.strip()))
    outer, inear, rate = [], [], None
    for az in azimuths:
        ir_path = directory / f"az{int(round(az)):03d}.wav"
        if not ir_path.is_file():
            raise DataError(f"{directory}: missing impulse response file {ir_path.name}")
        o, i = read_stereo(ir_path)
        if rate is None:
            rate = o.sample_rate
        elif o.sample_rate != rate:
            raise DataError(f"{directory}: impulse responses mix sample rates")
        outer.append(o.samples)
        inear.append(i.samples)
    return HrirSet(tuple(azimuths), outer, inear, rate, device_id=directory.name)


@dataclass
class SpatializeConfig:
    """Rendering mode, direction, white-noise floor and seed."""

    mode: str = RANDOM
    direction: int | None = None  # point mode; None draws uniformly
    diffuse_probability: float = 0.5
    white_noise_low_db: float | None = DEFAULT_WHITE_NOISE_LOW_DB  # None switches off
    seed: int = 0

    def __post_init__(self):
        if self.mode not in (POINT, DIFFUSE, RANDOM):
            raise DataError(f"unknown spatialization mode: {self.mode!r}")
        if not 0.0 <= self.diffuse_probability <= 1.0:
            raise DataError("diffuse_probability must lie in [0, 1]")
        if self.white_noise_low_db is not None and self.white_noise_low_db > WHITE_NOISE_HIGH_DB:
            raise DataError(
                f"white_noise_low_db must not exceed {WHITE_NOISE_HIGH_DB} dB (or be None)"
            )


def _convolve_pair(
    noise: Waveform, hrirs: HrirSet, direction: int
) -> tuple[np.ndarray, np.ndarray]:
    x = noise.samples
    outer = sps.fftconvolve(x, hrirs.outer[direction])[: x.size]
    inear = sps.fftconvolve(x, hrirs.inear[direction])[: x.size]
    return outer, inear


def _check_inputs(noise: Waveform, hrirs: HrirSet):
    if noise.sample_rate != hrirs.sample_rate:
        raise DataError(
            f"noise rate {noise.sample_rate} Hz does not match HRIR rate {hrirs.sample_rate} Hz"
        )
    if len(noise) == 0:
        raise DataError("cannot spatialize an empty waveform")


def spatialize_point(
    noise: Waveform, hrirs: HrirSet, direction: int
) -> tuple[Waveform, Waveform]:
    """Render ``noise`` from one direction: convolution with that direction's IR pair."""
    _check_inputs(noise, hrirs)
    if not 0 <= direction < hrirs.num_directions:
        raise DataError(
            f"direction {direction} out of range 0..{hrirs.num_directions - 1}"
        )
    outer, inear = _convolve_pair(noise, hrirs, direction)
    return Waveform(outer, noise.sample_rate), Waveform(inear, noise.sample_rate)


def spatialize_diffuse(
    noise: Waveform, hrirs: HrirSet, seed: int
) -> tuple[Waveform, Waveform]:
    """Pseudo-diffuse rendering: sum of shifted copies over all directions.

    Each direction gets an independent circular time shift drawn uniformly
    from [0, len), then its IR pair; contributions are summed and scaled
    by 1/sqrt(D). Deterministic per seed.
    """
    _check_inputs(noise, hrirs)
    rng = np.random.default_rng(seed)
    shifts = rng.integers(0, len(noise), size=hrirs.num_directions)
    outer = np.zeros(len(noise))
    inear = np.zeros(len(noise))
    for d, shift in enumerate(shifts):
        shifted = Waveform(np.roll(noise.samples, int(shift)), noise.sample_rate)
        o, i = _convolve_pair(shifted, hrirs, d)
        outer += o
        inear += i
    scale = 1.0 / np.sqrt(hrirs.num_directions)
    return (
        Waveform(outer * scale, noise.sample_rate),
        Waveform(inear * scale, noise.sample_rate),
    )


def add_incoherent_floor(
    inear: Waveform, low_db: float | None, seed: int
) -> tuple[Waveform, float | None]:
    """Add gaussian white noise to the in-ear channel at a random low level.

    The level is drawn uniformly from [low_db, -60] dB relative to the
    in-ear RMS; ``low_db=None`` means off and returns the input unchanged.
    Returns the waveform and the drawn level in dB (None when off).
    """
    if low_db is None:
        return inear, None
    if low_db > WHITE_NOISE_HIGH_DB:
        raise DataError(f"low_db must not exceed {WHITE_NOISE_HIGH_DB} dB")
    rng = np.random.default_rng(seed)
    level_db = float(rng.uniform(low_db, WHITE_NOISE_HIGH_DB))
    sigma = inear.rms() * 10.0 ** (level_db / 20.0)
    noisy = inear.samples + sigma * rng.standard_normal(len(inear))
    return Waveform(noisy, inear.sample_rate), level_db


@dataclass
class SpatializeResult:
    outer: Waveform
    inear: Waveform
    mode: str
    direction: int | None
    white_level_db: float | None


def spatialize(noise: Waveform, hrirs: HrirSet, cfg: SpatializeConfig) -> SpatializeResult:
    """Full rendering step: mode draw, direction draw, IRs, white-noise floor."""
    _check_inputs(noise, hrirs)
    rng = np.random.default_rng(derive_seed(cfg.seed, "spatialize-mode"))
    mode = cfg.mode
    if mode == RANDOM:
        mode = DIFFUSE if rng.random() < cfg.diffuse_probability else POINT
    if mode == POINT:
        direction = cfg.direction
        if direction is None:
            direction = int(rng.integers(0, hrirs.num_directions))
        outer, inear = spatialize_point(noise, hrirs, direction)
    else:
        direction = None
        outer, inear = spatialize_diffuse(noise, hrirs, derive_seed(cfg.seed, "shifts"))
    inear, level_db = add_incoherent_floor(
        inear, cfg.white_noise_low_db, derive_seed(cfg.seed, "floor")
    )
    return SpatializeResult(outer, inear, mode, direction, level_db)
