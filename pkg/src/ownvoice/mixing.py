"""SNR-controlled mixing of own-voice and noise pairs plus normalization.

The noise gain is chosen so the outer-microphone own-voice-to-noise power
ratio hits the requested SNR exactly; the in-ear noise channel is scaled
by the same gain, preserving the SNR difference between microphones.
After mixing, each noisy channel is mean-variance normalized with its own
statistics and the clean outer own voice used as training target is
scaled by the same 1/sigma as the own-voice component in the noisy outer
channel (gain only, no mean shift).
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError
from .wola import Waveform


@dataclass
class MixResult:
    """A mixed example with its components and the applied gains/statistics."""

    noisy_outer: Waveform
    noisy_inear: Waveform
    target_outer: Waveform
    achieved_snr_db: float
    noise_gain: float
    # components embedded in the noisy channels, kept for verification
    own_outer: Waveform
    own_inear: Waveform
    noise_outer: Waveform
    noise_inear: Waveform
    outer_mean: float = 0.0
    outer_std: float = 1.0
    inear_mean: float = 0.0
    inear_std: float = 1.0
    target_gain: float = 1.0
    normalized: bool = False


def _power(x: Waveform) -> float:
    return float(np.mean(np.square(x.samples)))


def mix_at_snr(
    own: tuple[Waveform, Waveform],
    noise: tuple[Waveform, Waveform],
    snr_db: float,
) -> MixResult:
    """Mix two-channel own voice and noise at ``snr_db`` on the outer microphone."""
    own_outer, own_inear = own
    noise_outer, noise_inear = noise
    lengths = {len(own_outer), len(own_inear), len(noise_outer), len(noise_inear)}
    rates = {w.sample_rate for w in (*own, *noise)}
    if len(lengths) != 1 or len(rates) != 1:
        raise DataError("own/noise channels must share length and sample rate")
    p_own = _power(own_outer)
    p_noise = _power(noise_outer)
    if p_own <= 0.0:
        raise DataError("own voice is silent on the outer microphone, SNR undefined")
    if p_noise <= 0.0:
        raise DataError("noise is silent on the outer microphone, SNR undefined")
    gain = float(np.sqrt(p_own / p_noise) * 10.0 ** (-snr_db / 20.0))
    scaled_outer = Waveform(gain * noise_outer.samples, noise_outer.sample_rate)
    scaled_inear = Waveform(gain * noise_inear.samples, noise_inear.sample_rate)
    achieved = 10.0 * np.log10(p_own / _power(scaled_outer))
    return MixResult(
        noisy_outer=Waveform(own_outer.samples + scaled_outer.samples, own_outer.sample_rate),
        noisy_inear=Waveform(own_inear.samples + scaled_inear.samples, own_inear.sample_rate),
        target_outer=Waveform(own_outer.samples.copy(), own_outer.sample_rate),
        achieved_snr_db=float(achieved),
        noise_gain=gain,
        own_outer=own_outer,
        own_inear=own_inear,
        noise_outer=scaled_outer,
        noise_inear=scaled_inear,
    )


def normalize(mix: MixResult) -> MixResult:
    """Mean-variance normalize the noisy channels; gain-scale the target.

    Each noisy channel uses its own statistics. The target gets the outer
    channel's 1/sigma only, so target and embedded own-voice component
    stay in a fixed ratio. Components are rescaled consistently.
    """
    stats = {}
    for name, wave in (("outer", mix.noisy_outer), ("inear", mix.noisy_inear)):
        mu = float(np.mean(wave.samples))
        sigma = float(np.std(wave.samples))
        if sigma <= 0.0:
            raise DataError(f"noisy {name} channel has zero variance")
        stats[name] = (mu, sigma)
    (mu_o, sig_o), (mu_i, sig_i) = stats["outer"], stats["inear"]
    rate = mix.noisy_outer.sample_rate
    return replace(
        mix,
        noisy_outer=Waveform((mix.noisy_outer.samples - mu_o) / sig_o, rate),
        noisy_inear=Waveform((mix.noisy_inear.samples - mu_i) / sig_i, rate),
        target_outer=Waveform(mix.target_outer.samples / sig_o, rate),
        own_outer=Waveform(mix.own_outer.samples / sig_o, rate),
        own_inear=Waveform(mix.own_inear.samples / sig_i, rate),
        noise_outer=Waveform(mix.noise_outer.samples / sig_o, rate),
        noise_inear=Waveform(mix.noise_inear.samples / sig_i, rate),
        outer_mean=mu_o,
        outer_std=sig_o,
        inear_mean=mu_i,
        inear_std=sig_i,
        target_gain=1.0 / sig_o,
        normalized=True,
    )


def draw_snr(range_db: tuple[float, float], seed: int) -> float:
    """Seeded uniform SNR draw from ``[low, high]`` dB."""
    low, high = range_db
    if low > high:
        raise DataError(f"invalid SNR range [{low}, {high}]")
    return float(np.random.default_rng(seed).uniform(low, high))
