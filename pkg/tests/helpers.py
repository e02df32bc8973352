"""Shared fixture builders and independent oracles used across the test suite."""

import numpy as np

from ownvoice import (
    MODEL_FRAME_SPEC,
    FrameSpec,
    PhonemeInventory,
    RtfAccumulator,
    RtfModel,
    Spectrogram,
    Waveform,
    accumulate,
    analyze,
    finalize,
)


def rel_rms_interior(reference: np.ndarray, candidate: np.ndarray, margin: int) -> float:
    """Relative RMS error on the interior region (``margin`` samples trimmed per side)."""
    n = min(reference.size, candidate.size)
    sl = slice(margin, n - margin)
    err = reference[sl] - candidate[sl]
    return float(np.sqrt(np.mean(err**2)) / np.sqrt(np.mean(reference[sl] ** 2)))


def naive_dft(frame: np.ndarray) -> np.ndarray:
    """O(N^2) one-sided DFT used as an oracle for the FFT-based analysis."""
    n = frame.size
    bins = n // 2 + 1
    out = np.zeros(bins, dtype=np.complex128)
    for k in range(bins):
        for t in range(n):
            out[k] += frame[t] * np.exp(-2j * np.pi * k * t / n)
    return out


def naive_convolve(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Direct-form linear convolution oracle, truncated to len(x)."""
    out = np.zeros(x.size)
    for m, coeff in enumerate(h):
        out[m:] += coeff * x[: x.size - m]
    return out


def decaying_fir(num_taps: int = 32) -> np.ndarray:
    """Smooth 32-tap test filter with magnitudes decaying over the taps."""
    m = np.arange(num_taps)
    return 0.4**m + 0.3 * (-0.35) ** m


def fir_bank(num_filters: int, num_taps: int = 32, seed: int = 7) -> list[np.ndarray]:
    """Bank of distinct decaying FIR filters for speech-dependent fixtures."""
    rng = np.random.default_rng(seed)
    bank = []
    for _ in range(num_filters):
        base = rng.uniform(0.3, 0.5)
        alt = rng.uniform(0.2, 0.4)
        gain = rng.uniform(0.5, 1.5)
        m = np.arange(num_taps)
        bank.append(gain * (base**m + 0.3 * (-alt) ** m))
    return bank


def model_from_rtfs(
    rtfs: np.ndarray,
    mode: str,
    availability: np.ndarray | None = None,
    labels: tuple[str, ...] | None = None,
) -> RtfModel:
    """Build a model directly from an RTF matrix (columns are slots)."""
    slots = rtfs.shape[1]
    if availability is None:
        availability = np.ones(slots, dtype=bool)
    inventory = None
    if mode == "speech-dependent":
        inventory = PhonemeInventory(labels or tuple(f"ph{i}" for i in range(slots)))
    return RtfModel(
        mode=mode,
        scope="individual",
        rtfs=rtfs.astype(np.complex128),
        fallback=rtfs[:, availability].mean(axis=1),
        availability=availability,
        spec=MODEL_FRAME_SPEC,
        inventory=inventory,
        frame_counts=np.where(availability, 100, 0),
    )


def unity_model(mode: str = "speech-independent", slots: int = 1) -> RtfModel:
    rtfs = np.ones((MODEL_FRAME_SPEC.num_bins, slots), dtype=np.complex128)
    return model_from_rtfs(rtfs, mode)


def estimate_from_pair(
    outer: np.ndarray, inear: np.ndarray, sample_rate: int = 5000
) -> RtfModel:
    """Speech-independent model estimated from one synthetic time-domain pair."""
    spec = MODEL_FRAME_SPEC
    acc = RtfAccumulator(spec, "speech-independent")
    accumulate(
        acc,
        analyze(Waveform(outer, sample_rate), spec),
        analyze(Waveform(inear, sample_rate), spec),
    )
    return finalize(acc)


def sine(freq_hz: float, duration_s: float, rate: int, amp: float = 1.0) -> Waveform:
    t = np.arange(int(duration_s * rate)) / rate
    return Waveform(amp * np.sin(2 * np.pi * freq_hz * t), rate)


def white_noise(duration_s: float, rate: int, seed: int, amp: float = 0.3) -> Waveform:
    rng = np.random.default_rng(seed)
    return Waveform(amp * rng.standard_normal(int(duration_s * rate)), rate)


# ---------------------------------------------------------------------------
# on-disk corpus builders for pipeline/service/CLI tests

PIPELINE_RATE = 16000
CORPUS_LABELS = ("sil", "aa", "ee", "oo")


def _write_random_alignment(path, duration_s: float, labels, rng) -> None:
    rows, t = [], 0.0
    while t < duration_s:
        length = float(rng.uniform(0.05, 0.3))
        end = min(t + length, duration_s)
        rows.append(f"{t:.6f}\t{end:.6f}\t{labels[rng.integers(len(labels))]}")
        t = end
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def build_inventory(root, labels=CORPUS_LABELS):
    path = root / "inventory.txt"
    path.write_text("\n".join(labels) + "\n", encoding="utf-8")
    return path


def build_pairs_corpus(root, num_talkers=2, utts_per_talker=3, duration_s=0.8, seed=100):
    """Synthetic recorded-pairs corpus: in-ear is a per-talker FIR of the outer."""
    from scipy.signal import lfilter

    from ownvoice.audio_io import write_waveform
    from ownvoice.manifest import ROLE_PAIRS, write_manifest

    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    for t in range(num_talkers):
        talker = f"t{t:02d}"
        h = decaying_fir() * rng.uniform(0.5, 1.5)
        for u in range(utts_per_talker):
            uid = f"{talker}_u{u:03d}"
            outer = 0.2 * rng.standard_normal(int(duration_s * PIPELINE_RATE))
            inear = lfilter(h, [1.0], outer)
            write_waveform(root / f"{uid}_outer.wav", Waveform(outer, PIPELINE_RATE))
            write_waveform(root / f"{uid}_inear.wav", Waveform(inear, PIPELINE_RATE))
            _write_random_alignment(root / f"{uid}.align", duration_s, CORPUS_LABELS, rng)
            entries.append(
                {
                    "id": uid,
                    "talker": talker,
                    "outer": f"{uid}_outer.wav",
                    "inear": f"{uid}_inear.wav",
                    "alignment": f"{uid}.align",
                    "duration": duration_s,
                }
            )
    manifest_path = root / "pairs.jsonl"
    write_manifest(manifest_path, ROLE_PAIRS, entries)
    return manifest_path


def build_speech_corpus(root, num_utts=6, duration_s=0.8, seed=200):
    from ownvoice.audio_io import write_waveform
    from ownvoice.manifest import ROLE_SPEECH, write_manifest

    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    for u in range(num_utts):
        uid = f"utt{u:03d}"
        talker = f"s{u % 3:02d}"
        samples = 0.2 * rng.standard_normal(int(duration_s * PIPELINE_RATE))
        write_waveform(root / f"{uid}.wav", Waveform(samples, PIPELINE_RATE))
        _write_random_alignment(root / f"{uid}.align", duration_s, CORPUS_LABELS, rng)
        entries.append(
            {
                "id": uid,
                "talker": talker,
                "audio": f"{uid}.wav",
                "alignment": f"{uid}.align",
                "duration": duration_s,
            }
        )
    manifest_path = root / "speech.jsonl"
    write_manifest(manifest_path, ROLE_SPEECH, entries)
    return manifest_path


def build_noise_corpus(root, num=2, duration_s=4.0, seed=300):
    from ownvoice.audio_io import write_waveform
    from ownvoice.manifest import ROLE_NOISE, write_manifest

    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    for n in range(num):
        nid = f"noise{n:03d}"
        samples = 0.1 * rng.standard_normal(int(duration_s * PIPELINE_RATE))
        write_waveform(root / f"{nid}.wav", Waveform(samples, PIPELINE_RATE))
        entries.append({"id": nid, "audio": f"{nid}.wav", "duration": duration_s})
    manifest_path = root / "noise.jsonl"
    write_manifest(manifest_path, ROLE_NOISE, entries)
    return manifest_path


def build_hrir_sets(root, talkers=("t00", "t01"), num_directions=4, ir_len=64, seed=400):
    from ownvoice.audio_io import write_stereo
    from ownvoice.manifest import ROLE_HRIR, write_manifest

    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    for talker in talkers:
        set_dir = root / talker
        set_dir.mkdir(exist_ok=True)
        azimuths = [int(360 * d / num_directions) for d in range(num_directions)]
        (set_dir / "directions.txt").write_text(
            "\n".join(str(a) for a in azimuths) + "\n", encoding="utf-8"
        )
        for az in azimuths:
            outer = np.zeros(ir_len)
            outer[0] = 1.0
            outer[1:] = 0.05 * rng.standard_normal(ir_len - 1)
            inear = np.zeros(ir_len)
            inear[2] = 0.7
            inear[3:] = 0.03 * rng.standard_normal(ir_len - 3)
            write_stereo(
                set_dir / f"az{az:03d}.wav",
                Waveform(outer, PIPELINE_RATE),
                Waveform(inear, PIPELINE_RATE),
            )
        entries.append({"talker": talker, "path": talker})
    manifest_path = root / "hrir.jsonl"
    write_manifest(manifest_path, ROLE_HRIR, entries)
    return manifest_path
