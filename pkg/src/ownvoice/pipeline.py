"""Manifest-driven batch jobs: estimate, augment, spatialize, mix, reconstruct, validate.

Every job is a pure function of its request and the referenced input
files: per-utterance seeds are derived from the global seed, the stage
name and the utterance id, outputs are written per utterance and manifest
records are serialized in utterance-id order, so serial and parallel runs
produce byte-identical corpora. The FastAPI service and the CLI both
dispatch into the ``run_*`` functions below.
"""

from concurrent.futures import ProcessPoolExecutor
from multiprocessing import get_context
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from . import audio_io
from .augment import AugmentConfig, augment
from .config import PipelineConfig, load_config
from .errors import DataError, FileFormatError, UnsupportedVersionError
from .manifest import (
    PATH_KEYS,
    ROLE_HRIR,
    ROLE_NOISE,
    ROLE_PAIRS,
    ROLE_SPEECH,
    Manifest,
    read_manifest,
    write_manifest,
)
from .mixing import draw_snr, mix_at_snr, normalize
from .phonemes import PhonemeInventory, load_alignment
from .reconstruct import apply_masks
from .resample import resample
from .rtf import (
    INDIVIDUAL,
    SPEECH_DEPENDENT,
    SPEECH_INDEPENDENT,
    TALKER_AVERAGED,
    RtfAccumulator,
    accumulate,
    finalize,
    merge,
)
from .seeds import derive_seed
from .serialization import load_masks, load_model, save_model
from .spatialize import SpatializeConfig, load_hrir_set, spatialize
from .wola import Waveform, analyze


# ---------------------------------------------------------------------------
# requests and reports


class JobRequest(BaseModel):
    config: PipelineConfig | None = None
    config_path: str | None = None
    seed: int | None = None
    jobs: int | None = None
    subset_talkers: int | None = None
    subset_utterances: int | None = None

    def resolve_config(self) -> PipelineConfig:
        if self.config is not None:
            cfg = self.config.model_copy(deep=True)
        elif self.config_path is not None:
            cfg = load_config(self.config_path)
        else:
            cfg = PipelineConfig()
        for name in ("seed", "jobs", "subset_talkers", "subset_utterances"):
            value = getattr(self, name)
            if value is not None:
                setattr(cfg, name, value)
        return cfg


class EstimateRequest(JobRequest):
    pairs_manifest: str
    out_dir: str


class AugmentRequest(JobRequest):
    speech_manifest: str
    model_path: str
    out_dir: str


class SpatializeRequest(JobRequest):
    noise_manifest: str
    hrir_manifest: str
    out_dir: str


class MixRequest(JobRequest):
    pairs_manifest: str
    noise_manifest: str
    hrir_manifest: str
    out_dir: str


class ReconstructRequest(BaseModel):
    noisy_outer: str
    noisy_inear: str
    mask_path: str
    out_path: str


class ValidateRequest(BaseModel):
    paths: list[str]


class ModelInfo(BaseModel):
    path: str
    mode: str
    scope: str
    talkers: list[str]
    num_utterances: int


class EstimateReport(BaseModel):
    models: list[ModelInfo]


class CorpusReport(BaseModel):
    manifest_path: str
    num_entries: int


class ReconstructReport(BaseModel):
    out_path: str
    num_samples: int


class FileReport(BaseModel):
    path: str
    kind: str
    ok: bool
    violations: list[str]


class ValidateReport(BaseModel):
    ok: bool
    files: list[FileReport]


# ---------------------------------------------------------------------------
# execution helpers

_MODEL_CACHE: dict = {}
_HRIR_CACHE: dict = {}


def _cached_model(path: str):
    if path not in _MODEL_CACHE:
        _MODEL_CACHE[path] = load_model(path)
    return _MODEL_CACHE[path]


def _cached_hrirs(path: str):
    if path not in _HRIR_CACHE:
        _HRIR_CACHE[path] = load_hrir_set(path)
    return _HRIR_CACHE[path]


def _run_tasks(fn, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(
        max_workers=min(jobs, len(tasks)), mp_context=get_context("spawn")
    ) as ex:
        return list(ex.map(fn, tasks))


def _subset(items: list, count: int | None, seed: int, stage: str) -> list:
    """Seeded uniform subset without replacement, order-preserving."""
    if count is None or count >= len(items):
        return list(items)
    if count < 1:
        raise DataError("subset size must be at least 1")
    rng = np.random.default_rng(derive_seed(seed, stage))
    keep = sorted(rng.choice(len(items), size=count, replace=False))
    return [items[i] for i in keep]


def _entry_path(manifest: Manifest, entry: dict, key: str) -> str:
    if key not in entry:
        raise DataError(f"manifest entry {entry.get('id')!r} is missing {key!r}")
    return str(manifest.resolve(entry[key]))


def _cut_segment(wave: Waveform, num_samples: int) -> Waveform:
    """First-window segment cut; short signals are zero-padded."""
    samples = wave.samples[:num_samples]
    if samples.size < num_samples:
        samples = np.pad(samples, (0, num_samples - samples.size))
    return Waveform(samples, wave.sample_rate)


# ---------------------------------------------------------------------------
# estimate


def _estimate_task(task: dict) -> RtfAccumulator:
    cfg: PipelineConfig = task["cfg"]
    model_spec = cfg.model_frame.to_frame_spec()
    inventory = PhonemeInventory(tuple(task["labels"])) if task["labels"] else None
    mode = SPEECH_DEPENDENT if inventory else SPEECH_INDEPENDENT
    acc = RtfAccumulator(model_spec, mode, inventory)
    outer = resample(audio_io.read_waveform(task["outer"]), model_spec.sample_rate)
    inear = resample(audio_io.read_waveform(task["inear"]), model_spec.sample_rate)
    if len(outer) != len(inear):
        raise DataError(f"utterance {task['id']!r}: outer/in-ear lengths differ")
    phonemes = None
    if mode == SPEECH_DEPENDENT:
        phonemes = load_alignment(task["alignment"], inventory, model_spec, len(outer))
    accumulate(acc, analyze(outer, model_spec), analyze(inear, model_spec), phonemes)
    acc.talkers = {task["talker"]}
    return acc


def run_estimate(req: EstimateRequest) -> EstimateReport:
    cfg = req.resolve_config()
    manifest = read_manifest(req.pairs_manifest, ROLE_PAIRS)
    out_dir = Path(req.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    labels: list[str] = []
    if cfg.estimate.mode == SPEECH_DEPENDENT:
        if cfg.estimate.inventory is None:
            raise DataError("speech-dependent estimation requires estimate.inventory")
        labels = list(PhonemeInventory.from_file(cfg.estimate.inventory).labels)

    by_talker: dict[str, list[dict]] = {}
    for entry in sorted(manifest.entries, key=lambda e: str(e.get("id"))):
        by_talker.setdefault(str(entry["talker"]), []).append(entry)
    talkers = _subset(sorted(by_talker), cfg.subset_talkers, cfg.seed, "subset-talkers")
    if not talkers:
        raise DataError("no talkers selected for estimation")

    tasks = []
    for talker in talkers:
        entries = _subset(
            by_talker[talker], cfg.subset_utterances, cfg.seed, f"subset-utts:{talker}"
        )
        for entry in entries:
            task = {
                "cfg": cfg,
                "labels": labels,
                "id": str(entry["id"]),
                "talker": talker,
                "outer": _entry_path(manifest, entry, "outer"),
                "inear": _entry_path(manifest, entry, "inear"),
            }
            if cfg.estimate.mode == SPEECH_DEPENDENT:
                if "alignment" not in entry:
                    raise DataError(
                        f"entry {entry['id']!r} has no alignment; required for "
                        "speech-dependent estimation"
                    )
                task["alignment"] = _entry_path(manifest, entry, "alignment")
            tasks.append(task)

    accs = _run_tasks(_estimate_task, tasks, cfg.jobs)
    by_talker_accs: dict[str, list[RtfAccumulator]] = {}
    for task, acc in zip(tasks, accs):
        by_talker_accs.setdefault(task["talker"], []).append(acc)

    models = []
    if INDIVIDUAL in cfg.estimate.scopes:
        for talker in talkers:
            model = finalize(
                merge(by_talker_accs[talker]),
                min_frames=cfg.estimate.min_frames,
                scope=INDIVIDUAL,
            )
            path = out_dir / f"individual_{talker}.ovrtf"
            save_model(model, path)
            models.append(
                ModelInfo(
                    path=str(path),
                    mode=model.mode,
                    scope=model.scope,
                    talkers=list(model.talkers),
                    num_utterances=model.num_utterances,
                )
            )
    if TALKER_AVERAGED in cfg.estimate.scopes:
        pooled = merge([acc for talker in talkers for acc in by_talker_accs[talker]])
        model = finalize(pooled, min_frames=cfg.estimate.min_frames, scope=TALKER_AVERAGED)
        path = out_dir / "talker_averaged.ovrtf"
        save_model(model, path)
        models.append(
            ModelInfo(
                path=str(path),
                mode=model.mode,
                scope=model.scope,
                talkers=list(model.talkers),
                num_utterances=model.num_utterances,
            )
        )
    return EstimateReport(models=models)


# ---------------------------------------------------------------------------
# augment


def _augment_task(task: dict) -> dict:
    cfg: PipelineConfig = task["cfg"]
    model = _cached_model(task["model_path"])
    speech = audio_io.read_waveform(task["audio"])
    aug_cfg = AugmentConfig(
        model=model,
        technique=cfg.augment.technique,
        alpha=cfg.augment.alpha,
        seed=task["seed"],
    )
    phonemes = None
    if cfg.augment.technique == SPEECH_DEPENDENT:
        low_len = len(resample(speech, model.spec.sample_rate))
        phonemes = load_alignment(task["alignment"], model.inventory, model.spec, low_len)
    simulated = augment(speech, aug_cfg, phonemes)
    out_path = Path(task["out_dir"]) / "audio" / f"{task['id']}.wav"
    audio_io.write_waveform(out_path, simulated)
    entry = {
        "id": task["id"],
        "talker": task["talker"],
        "outer": task["audio"],
        "inear": f"audio/{task['id']}.wav",
        "model": task["model_path"],
        "technique": cfg.augment.technique,
        "alpha": cfg.augment.alpha,
        "seed": task["seed"],
    }
    if task.get("alignment"):
        entry["alignment"] = task["alignment"]
    return entry


def run_augment(req: AugmentRequest) -> CorpusReport:
    cfg = req.resolve_config()
    manifest = read_manifest(req.speech_manifest, ROLE_SPEECH)
    model = load_model(req.model_path)  # fail fast on bad model files
    # constructing the config validates technique/model compatibility
    AugmentConfig(model=model, technique=cfg.augment.technique, alpha=cfg.augment.alpha)
    out_dir = Path(req.out_dir)
    (out_dir / "audio").mkdir(parents=True, exist_ok=True)

    entries = _subset_corpus(manifest, cfg)
    tasks = []
    for entry in entries:
        task = {
            "cfg": cfg,
            "model_path": str(req.model_path),
            "id": str(entry["id"]),
            "talker": str(entry.get("talker", "")),
            "audio": _entry_path(manifest, entry, "audio"),
            "out_dir": str(out_dir),
            "seed": derive_seed(cfg.seed, "augment", entry["id"]),
        }
        if cfg.augment.technique == SPEECH_DEPENDENT:
            if "alignment" not in entry:
                raise DataError(
                    f"entry {entry['id']!r} has no alignment; required for "
                    "speech-dependent augmentation"
                )
            task["alignment"] = _entry_path(manifest, entry, "alignment")
        tasks.append(task)

    results = _run_tasks(_augment_task, tasks, cfg.jobs)
    results.sort(key=lambda e: e["id"])
    manifest_path = out_dir / "augmented.jsonl"
    write_manifest(manifest_path, ROLE_PAIRS, results)
    return CorpusReport(manifest_path=str(manifest_path), num_entries=len(results))


def _subset_corpus(manifest: Manifest, cfg: PipelineConfig) -> list[dict]:
    """Apply talker/utterance subset selectors to a corpus manifest."""
    entries = sorted(manifest.entries, key=lambda e: str(e.get("id")))
    if cfg.subset_talkers is None and cfg.subset_utterances is None:
        return entries
    by_talker: dict[str, list[dict]] = {}
    for entry in entries:
        by_talker.setdefault(str(entry.get("talker", "")), []).append(entry)
    talkers = _subset(sorted(by_talker), cfg.subset_talkers, cfg.seed, "subset-talkers")
    out = []
    for talker in talkers:
        out += _subset(
            by_talker[talker], cfg.subset_utterances, cfg.seed, f"subset-utts:{talker}"
        )
    return sorted(out, key=lambda e: str(e.get("id")))


# ---------------------------------------------------------------------------
# spatialize


def _spatialize_task(task: dict) -> dict:
    cfg: PipelineConfig = task["cfg"]
    noise = audio_io.read_waveform(task["audio"])
    hrirs = _cached_hrirs(task["hrir_dir"])
    sp_cfg = SpatializeConfig(
        mode=cfg.spatialize.mode,
        direction=cfg.spatialize.direction,
        diffuse_probability=cfg.spatialize.diffuse_probability,
        white_noise_low_db=cfg.spatialize.white_noise_low_db,
        seed=task["seed"],
    )
    result = spatialize(noise, hrirs, sp_cfg)
    out_dir = Path(task["out_dir"])
    audio_io.write_waveform(out_dir / "outer" / f"{task['id']}.wav", result.outer)
    audio_io.write_waveform(out_dir / "inear" / f"{task['id']}.wav", result.inear)
    return {
        "id": task["id"],
        "talker": task["hrir_talker"],
        "outer": f"outer/{task['id']}.wav",
        "inear": f"inear/{task['id']}.wav",
        "source": task["audio"],
        "hrir": task["hrir_dir"],
        "mode": result.mode,
        "direction": result.direction,
        "white_level_db": result.white_level_db,
        "seed": task["seed"],
    }


def _hrir_entries(hrir_manifest: Manifest) -> list[tuple[str, str]]:
    out = []
    for entry in sorted(hrir_manifest.entries, key=lambda e: str(e.get("talker"))):
        out.append((str(entry["talker"]), _entry_path(hrir_manifest, entry, "path")))
    if not out:
        raise DataError("HRIR manifest contains no entries")
    return out


def run_spatialize(req: SpatializeRequest) -> CorpusReport:
    cfg = req.resolve_config()
    noise_manifest = read_manifest(req.noise_manifest, ROLE_NOISE)
    hrirs = _hrir_entries(read_manifest(req.hrir_manifest, ROLE_HRIR))
    out_dir = Path(req.out_dir)
    (out_dir / "outer").mkdir(parents=True, exist_ok=True)
    (out_dir / "inear").mkdir(parents=True, exist_ok=True)

    tasks = []
    for entry in sorted(noise_manifest.entries, key=lambda e: str(e.get("id"))):
        seed = derive_seed(cfg.seed, "spatialize", entry["id"])
        pick = int(np.random.default_rng(derive_seed(seed, "hrir-pick")).integers(len(hrirs)))
        talker, hrir_dir = hrirs[pick]
        tasks.append(
            {
                "cfg": cfg,
                "id": str(entry["id"]),
                "audio": _entry_path(noise_manifest, entry, "audio"),
                "hrir_dir": hrir_dir,
                "hrir_talker": talker,
                "out_dir": str(out_dir),
                "seed": seed,
            }
        )
    results = _run_tasks(_spatialize_task, tasks, cfg.jobs)
    results.sort(key=lambda e: e["id"])
    manifest_path = out_dir / "spatialized.jsonl"
    write_manifest(manifest_path, ROLE_PAIRS, results)
    return CorpusReport(manifest_path=str(manifest_path), num_entries=len(results))


# ---------------------------------------------------------------------------
# mix


def _mix_task(task: dict) -> dict:
    cfg: PipelineConfig = task["cfg"]
    rate = cfg.pipeline_frame.sample_rate
    seg_len = int(round(cfg.mix.segment_seconds * rate))
    own_outer = audio_io.read_waveform(task["outer"])
    own_inear = audio_io.read_waveform(task["inear"])
    if own_outer.sample_rate != rate or own_inear.sample_rate != rate:
        raise DataError(f"utterance {task['id']!r} is not at the pipeline rate {rate} Hz")
    own_pair = (_cut_segment(own_outer, seg_len), _cut_segment(own_inear, seg_len))

    noise = audio_io.read_waveform(task["noise_audio"])
    if len(noise) < seg_len:
        raise DataError(
            f"noise {task['noise_id']!r} is shorter than the {cfg.mix.segment_seconds} s segment"
        )
    rng = np.random.default_rng(derive_seed(task["seed"], "noise-offset"))
    offset = int(rng.integers(0, len(noise) - seg_len + 1))
    noise_seg = Waveform(noise.samples[offset : offset + seg_len], noise.sample_rate)

    hrirs = _cached_hrirs(task["hrir_dir"])
    sp_cfg = SpatializeConfig(
        mode=cfg.spatialize.mode,
        direction=cfg.spatialize.direction,
        diffuse_probability=cfg.spatialize.diffuse_probability,
        white_noise_low_db=cfg.spatialize.white_noise_low_db,
        seed=derive_seed(task["seed"], "spatialize"),
    )
    rendered = spatialize(noise_seg, hrirs, sp_cfg)

    snr_db = draw_snr(tuple(cfg.mix.snr_range_db), derive_seed(task["seed"], "snr"))
    mix = normalize(mix_at_snr(own_pair, (rendered.outer, rendered.inear), snr_db))

    out_dir = Path(task["out_dir"])
    uid = task["id"]
    audio_io.write_waveform(out_dir / "noisy_outer" / f"{uid}.wav", mix.noisy_outer)
    audio_io.write_waveform(out_dir / "noisy_inear" / f"{uid}.wav", mix.noisy_inear)
    audio_io.write_waveform(out_dir / "target" / f"{uid}.wav", mix.target_outer)
    return {
        "id": uid,
        "talker": task["talker"],
        "outer": f"noisy_outer/{uid}.wav",
        "inear": f"noisy_inear/{uid}.wav",
        "target": f"target/{uid}.wav",
        "own_outer": task["outer"],
        "own_inear": task["inear"],
        "noise_id": task["noise_id"],
        "noise_offset": offset,
        "hrir": task["hrir_dir"],
        "seed": task["seed"],
        "snr_db": snr_db,
        "achieved_snr_db": mix.achieved_snr_db,
        "mode": rendered.mode,
        "direction": rendered.direction,
        "white_level_db": rendered.white_level_db,
        "noise_gain": mix.noise_gain,
        "outer_mean": mix.outer_mean,
        "outer_std": mix.outer_std,
        "inear_mean": mix.inear_mean,
        "inear_std": mix.inear_std,
        "target_gain": mix.target_gain,
    }


def run_mix(req: MixRequest) -> CorpusReport:
    cfg = req.resolve_config()
    pairs = read_manifest(req.pairs_manifest, ROLE_PAIRS)
    noise_manifest = read_manifest(req.noise_manifest, ROLE_NOISE)
    hrirs = dict(_hrir_entries(read_manifest(req.hrir_manifest, ROLE_HRIR)))
    noise_entries = sorted(noise_manifest.entries, key=lambda e: str(e.get("id")))
    if not noise_entries:
        raise DataError("noise manifest contains no entries")
    out_dir = Path(req.out_dir)
    for sub in ("noisy_outer", "noisy_inear", "target"):
        (out_dir / sub).mkdir(parents=True, exist_ok=True)

    tasks = []
    for entry in _subset_corpus(pairs, cfg):
        talker = str(entry.get("talker", ""))
        if talker in hrirs:
            hrir_dir = hrirs[talker]
        elif len(hrirs) == 1:
            hrir_dir = next(iter(hrirs.values()))
        else:
            raise DataError(
                f"no HRIR set for talker {talker!r} and the HRIR manifest is ambiguous"
            )
        seed = derive_seed(cfg.seed, "mix", entry["id"])
        rng = np.random.default_rng(derive_seed(seed, "noise-pick"))
        noise_entry = noise_entries[int(rng.integers(len(noise_entries)))]
        tasks.append(
            {
                "cfg": cfg,
                "id": str(entry["id"]),
                "talker": talker,
                "outer": _entry_path(pairs, entry, "outer"),
                "inear": _entry_path(pairs, entry, "inear"),
                "noise_id": str(noise_entry["id"]),
                "noise_audio": _entry_path(noise_manifest, noise_entry, "audio"),
                "hrir_dir": hrir_dir,
                "out_dir": str(out_dir),
                "seed": seed,
            }
        )
    results = _run_tasks(_mix_task, tasks, cfg.jobs)
    results.sort(key=lambda e: e["id"])
    manifest_path = out_dir / "mixtures.jsonl"
    write_manifest(manifest_path, ROLE_PAIRS, results)
    return CorpusReport(manifest_path=str(manifest_path), num_entries=len(results))


# ---------------------------------------------------------------------------
# reconstruct


def run_reconstruct(req: ReconstructRequest) -> ReconstructReport:
    mask_outer, mask_inear, spec = load_masks(req.mask_path)
    noisy_outer = audio_io.read_waveform(req.noisy_outer)
    noisy_inear = audio_io.read_waveform(req.noisy_inear)
    if len(noisy_outer) != len(noisy_inear):
        raise DataError("noisy outer/in-ear files differ in length")
    S_outer = analyze(noisy_outer, spec)
    S_inear = analyze(noisy_inear, spec)
    if S_outer.num_frames != mask_outer.shape[1]:
        raise DataError(
            f"mask has {mask_outer.shape[1]} frames but the noisy signals "
            f"produce {S_outer.num_frames}"
        )
    estimate = apply_masks(S_outer, S_inear, mask_outer, mask_inear, num_samples=len(noisy_outer))
    out_path = Path(req.out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    audio_io.write_waveform(out_path, estimate)
    return ReconstructReport(out_path=str(out_path), num_samples=len(estimate))


# ---------------------------------------------------------------------------
# validate


_REQUIRED_KEYS = {
    ROLE_SPEECH: ("id", "talker", "audio"),
    ROLE_PAIRS: ("id", "talker", "outer", "inear"),
    ROLE_NOISE: ("id", "audio"),
    ROLE_HRIR: ("talker", "path"),
}


def _detect_kind(path: Path) -> str:
    with open(path, "rb") as fh:
        head = fh.read(5)
    if head == b"OVRTF":
        return "model"
    if head == b"OVMSK":
        return "mask"
    return "manifest"


def _validate_model(path: Path) -> list[str]:
    violations = []
    try:
        model = load_model(path)
    except (FileFormatError, UnsupportedVersionError) as e:
        return [str(e)]
    w = model.spec.window_values()
    hop = model.spec.hop
    if not np.allclose(w[:hop] ** 2 + w[hop:] ** 2, 1.0, atol=1e-12):
        violations.append("window does not satisfy the overlap-add identity")
    if not np.all(np.isfinite(model.fallback)):
        violations.append("fallback RTF contains non-finite values")
    expected_fallback = model.rtfs[:, model.availability].mean(axis=1)
    scale = max(float(np.abs(expected_fallback).max()), 1.0)
    if not np.allclose(model.fallback, expected_fallback, atol=1e-9 * scale):
        violations.append("fallback RTF is not the mean of the available slots")
    if model.mode == SPEECH_DEPENDENT:
        if model.inventory is None:
            violations.append("speech-dependent model lacks an inventory")
        elif model.inventory.size != model.num_slots:
            violations.append("inventory size does not match slot count")
    if model.frame_counts is not None and np.any(
        model.availability & (model.frame_counts <= 0)
    ):
        violations.append("available slots with zero accumulated frames")
    return violations


def _validate_mask(path: Path) -> list[str]:
    try:
        mask_outer, mask_inear, spec = load_masks(path)
    except (FileFormatError, UnsupportedVersionError) as e:
        return [str(e)]
    violations = []
    if not (np.all(np.isfinite(mask_outer)) and np.all(np.isfinite(mask_inear))):
        violations.append("masks contain non-finite values")
    if mask_outer.shape[0] != spec.num_bins:
        violations.append("mask bin count does not match frame spec")
    return violations


def _validate_manifest(path: Path) -> list[str]:
    try:
        manifest = read_manifest(path)
    except (FileFormatError, DataError) as e:
        return [str(e)]
    violations = []
    required = _REQUIRED_KEYS[manifest.role]
    for entry in manifest.entries:
        label = entry.get("id", entry.get("talker", "?"))
        for key in required:
            if key not in entry:
                violations.append(f"entry {label!r}: missing required key {key!r}")
        for key in PATH_KEYS:
            if key in entry:
                target = manifest.resolve(entry[key])
                if not target.exists():
                    violations.append(f"entry {label!r}: {key} file not found: {target}")
    return violations


def run_validate(req: ValidateRequest) -> ValidateReport:
    reports = []
    for raw in req.paths:
        path = Path(raw)
        if not path.exists():
            raise FileNotFoundError(f"no such file: {path}")
        kind = _detect_kind(path)
        violations = {
            "model": _validate_model,
            "mask": _validate_mask,
            "manifest": _validate_manifest,
        }[kind](path)
        reports.append(
            FileReport(path=str(path), kind=kind, ok=not violations, violations=violations)
        )
    return ValidateReport(ok=all(r.ok for r in reports), files=reports)
