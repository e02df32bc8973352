import json
from pathlib import Path

import numpy as np
import pytest

from ownvoice import DataError, load_model, resample
from ownvoice.audio_io import read_waveform
from ownvoice.manifest import ROLE_SPEECH, read_manifest, write_manifest
from ownvoice.pipeline import (
    AugmentRequest,
    EstimateRequest,
    MixRequest,
    ReconstructRequest,
    SpatializeRequest,
    ValidateRequest,
    run_augment,
    run_estimate,
    run_mix,
    run_reconstruct,
    run_spatialize,
    run_validate,
)
from ownvoice.serialization import save_masks
from ownvoice.wola import MODEL_FRAME_SPEC, PIPELINE_FRAME_SPEC

from helpers import (
    build_hrir_sets,
    build_inventory,
    build_noise_corpus,
    build_pairs_corpus,
    build_speech_corpus,
)


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    pairs = build_pairs_corpus(root / "pairs")
    inventory = build_inventory(root / "pairs")
    speech = build_speech_corpus(root / "speech")
    noise = build_noise_corpus(root / "noise")
    hrir = build_hrir_sets(root / "hrir", talkers=("s00", "s01", "s02"))
    config = root / "config.yaml"
    config.write_text(
        "seed: 7\n"
        "estimate:\n"
        "  mode: speech-dependent\n"
        "  scopes: [individual, talker-averaged]\n"
        f"  inventory: {inventory}\n"
        "augment:\n"
        "  technique: speech-dependent\n"
        "  alpha: 0.5\n",
        encoding="utf-8",
    )
    return {
        "root": root,
        "pairs": pairs,
        "speech": speech,
        "noise": noise,
        "hrir": hrir,
        "config": config,
    }


@pytest.fixture(scope="module")
def models_dir(corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("models")
    report = run_estimate(
        EstimateRequest(
            pairs_manifest=str(corpus["pairs"]),
            out_dir=str(out),
            config_path=str(corpus["config"]),
        )
    )
    assert len(report.models) == 3  # two individual + one talker-averaged
    return out


class TestEstimate:
    def test_model_files_and_provenance(self, corpus, models_dir):
        individual = load_model(models_dir / "individual_t00.ovrtf")
        assert individual.scope == "individual"
        assert individual.talkers == ("t00",)
        assert individual.num_utterances == 3
        averaged = load_model(models_dir / "talker_averaged.ovrtf")
        assert averaged.scope == "talker-averaged"
        assert averaged.talkers == ("t00", "t01")
        assert averaged.num_utterances == 6
        assert averaged.inventory.labels == ("sil", "aa", "ee", "oo")

    def test_single_talker_average_equals_individual(self, corpus, tmp_path):
        report = run_estimate(
            EstimateRequest(
                pairs_manifest=str(corpus["pairs"]),
                out_dir=str(tmp_path),
                config_path=str(corpus["config"]),
                subset_talkers=1,
            )
        )
        individual = next(m for m in report.models if m.scope == "individual")
        averaged = next(m for m in report.models if m.scope == "talker-averaged")
        assert averaged.talkers == individual.talkers
        m_ind = load_model(individual.path)
        m_avg = load_model(averaged.path)
        np.testing.assert_array_equal(m_ind.rtfs, m_avg.rtfs)
        np.testing.assert_array_equal(m_ind.availability, m_avg.availability)

    def test_frame_counts_match_alignment_recount(self, corpus, models_dir):
        # oracle: recount labeled frames straight from the alignment files
        model = load_model(models_dir / "individual_t01.ovrtf")
        manifest = read_manifest(corpus["pairs"])
        expected = 0
        for entry in manifest.entries:
            if entry["talker"] != "t01":
                continue
            wave = read_waveform(manifest.resolve(entry["outer"]))
            low_len = len(resample(wave, 5000))
            num_frames = MODEL_FRAME_SPEC.num_frames(low_len)
            intervals = []
            for line in manifest.resolve(entry["alignment"]).read_text().splitlines():
                s, e, _ = line.split("\t")
                intervals.append((float(s), float(e)))
            for l in range(num_frames):
                center = (l * 64 + 64) / 5000.0
                if any(s <= center < e for s, e in intervals):
                    expected += 1
        assert int(model.frame_counts.sum()) == expected

    def test_missing_alignment_rejected(self, corpus, tmp_path):
        manifest = read_manifest(corpus["pairs"])
        entries = [dict(e) for e in manifest.entries]
        for e in entries:
            e.pop("alignment", None)
            e["outer"] = str(manifest.resolve(e["outer"]))
            e["inear"] = str(manifest.resolve(e["inear"]))
        bad = tmp_path / "bad_pairs.jsonl"
        write_manifest(bad, "recorded-pairs", entries)
        with pytest.raises(DataError):
            run_estimate(
                EstimateRequest(
                    pairs_manifest=str(bad),
                    out_dir=str(tmp_path / "out"),
                    config_path=str(corpus["config"]),
                )
            )

    def test_empty_subset_rejected(self, corpus, tmp_path):
        with pytest.raises(Exception):
            run_estimate(
                EstimateRequest(
                    pairs_manifest=str(corpus["pairs"]),
                    out_dir=str(tmp_path),
                    config_path=str(corpus["config"]),
                    subset_talkers=0,
                )
            )


class TestAugment:
    def _request(self, corpus, models_dir, out_dir, **kw):
        return AugmentRequest(
            speech_manifest=str(corpus["speech"]),
            model_path=str(models_dir / "talker_averaged.ovrtf"),
            out_dir=str(out_dir),
            config_path=str(corpus["config"]),
            **kw,
        )

    def test_empty_manifest_succeeds(self, corpus, models_dir, tmp_path):
        empty = tmp_path / "empty.jsonl"
        write_manifest(empty, ROLE_SPEECH, [])
        report = run_augment(
            AugmentRequest(
                speech_manifest=str(empty),
                model_path=str(models_dir / "talker_averaged.ovrtf"),
                out_dir=str(tmp_path / "out"),
                config_path=str(corpus["config"]),
            )
        )
        assert report.num_entries == 0
        assert Path(report.manifest_path).exists()

    def test_outputs_and_provenance(self, corpus, models_dir, tmp_path):
        report = run_augment(self._request(corpus, models_dir, tmp_path / "aug"))
        assert report.num_entries == 6
        manifest = read_manifest(report.manifest_path)
        for entry in manifest.entries:
            out = manifest.resolve(entry["inear"])
            assert out.exists()
            src = read_waveform(Path(entry["outer"]))
            sim = read_waveform(out)
            assert len(src) == len(sim)
            assert entry["model"].endswith("talker_averaged.ovrtf")
            assert entry["technique"] == "speech-dependent"
            assert isinstance(entry["seed"], int)

    def test_rerun_and_parallel_byte_identical(self, corpus, models_dir, tmp_path):
        outs = [tmp_path / name for name in ("serial", "rerun", "parallel")]
        for out, jobs in zip(outs, (1, 1, 2)):
            run_augment(self._request(corpus, models_dir, out, jobs=jobs))
        reference = sorted((outs[0]).rglob("*"))
        for other in outs[1:]:
            for ref_file in reference:
                if ref_file.is_file():
                    twin = other / ref_file.relative_to(outs[0])
                    assert twin.read_bytes() == ref_file.read_bytes(), twin

    def test_subset_utterances(self, corpus, models_dir, tmp_path):
        report = run_augment(
            self._request(corpus, models_dir, tmp_path / "sub", subset_utterances=1)
        )
        # speech corpus has three talkers with two utterances each
        assert report.num_entries == 3

    def test_subset_reproduces_full_run_bytes(self, corpus, models_dir, tmp_path):
        # per-utterance seeds depend only on (global seed, stage, id), so a
        # subset run writes byte-identical files for the utterances it shares
        # with the full run
        full = run_augment(self._request(corpus, models_dir, tmp_path / "full"))
        sub = run_augment(
            self._request(corpus, models_dir, tmp_path / "part", subset_utterances=1)
        )
        full_dir = Path(full.manifest_path).parent
        sub_manifest = read_manifest(sub.manifest_path)
        assert len(sub_manifest.entries) > 0
        for entry in sub_manifest.entries:
            sub_file = sub_manifest.resolve(entry["inear"])
            full_file = full_dir / "audio" / f"{entry['id']}.wav"
            assert sub_file.read_bytes() == full_file.read_bytes()


@pytest.fixture(scope="module")
def augmented(corpus, models_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("augmented")
    report = run_augment(
        AugmentRequest(
            speech_manifest=str(corpus["speech"]),
            model_path=str(models_dir / "talker_averaged.ovrtf"),
            out_dir=str(out),
            config_path=str(corpus["config"]),
        )
    )
    return Path(report.manifest_path)


class TestSpatialize:
    def test_outputs_deterministic(self, corpus, tmp_path):
        reqs = [
            SpatializeRequest(
                noise_manifest=str(corpus["noise"]),
                hrir_manifest=str(corpus["hrir"]),
                out_dir=str(tmp_path / name),
                seed=3,
            )
            for name in ("a", "b")
        ]
        reports = [run_spatialize(r) for r in reqs]
        assert reports[0].num_entries == 2
        m = read_manifest(reports[0].manifest_path)
        for entry in m.entries:
            assert m.resolve(entry["outer"]).exists()
            assert m.resolve(entry["inear"]).exists()
            assert entry["mode"] in ("point", "diffuse")
        bytes_a = Path(reports[0].manifest_path).read_bytes()
        bytes_b = Path(reports[1].manifest_path).read_bytes()
        assert bytes_a == bytes_b


class TestMix:
    def _forced_config(self, corpus, tmp_path):
        path = tmp_path / "mix_config.yaml"
        path.write_text(
            "seed: 11\n"
            "mix:\n"
            "  snr_range_db: [0, 0]\n"
            "spatialize:\n"
            "  mode: point\n"
            "  direction: 0\n"
            "  white_noise_low_db: null\n",
            encoding="utf-8",
        )
        return path

    def test_forced_metadata_and_normalization(self, corpus, augmented, tmp_path):
        out = tmp_path / "mixed"
        report = run_mix(
            MixRequest(
                pairs_manifest=str(augmented),
                noise_manifest=str(corpus["noise"]),
                hrir_manifest=str(corpus["hrir"]),
                out_dir=str(out),
                config_path=str(self._forced_config(corpus, tmp_path)),
            )
        )
        assert report.num_entries == 6
        manifest = read_manifest(report.manifest_path)
        for entry in manifest.entries:
            assert entry["snr_db"] == 0.0
            assert abs(entry["achieved_snr_db"]) < 0.01
            assert entry["mode"] == "point"
            assert entry["direction"] == 0
            assert entry["white_level_db"] is None
            noisy = read_waveform(manifest.resolve(entry["outer"]))
            assert len(noisy) == 3 * 16000
            # float32 wav quantization loosens the exact 1e-9 statistics
            assert abs(np.mean(noisy.samples)) < 1e-6
            assert abs(np.var(noisy.samples) - 1.0) < 1e-5
            target = read_waveform(manifest.resolve(entry["target"]))
            assert len(target) == 3 * 16000

    def test_insufficient_noise_rejected(self, corpus, augmented, tmp_path):
        short = build_noise_corpus(tmp_path / "short_noise", num=1, duration_s=1.0)
        with pytest.raises(DataError):
            run_mix(
                MixRequest(
                    pairs_manifest=str(augmented),
                    noise_manifest=str(short),
                    hrir_manifest=str(corpus["hrir"]),
                    out_dir=str(tmp_path / "out"),
                )
            )

    def test_rerun_byte_identical(self, corpus, augmented, tmp_path):
        outs = [tmp_path / name for name in ("m1", "m2")]
        for out in outs:
            run_mix(
                MixRequest(
                    pairs_manifest=str(augmented),
                    noise_manifest=str(corpus["noise"]),
                    hrir_manifest=str(corpus["hrir"]),
                    out_dir=str(out),
                    seed=5,
                )
            )
        for ref_file in sorted(outs[0].rglob("*")):
            if ref_file.is_file():
                twin = outs[1] / ref_file.relative_to(outs[0])
                assert twin.read_bytes() == ref_file.read_bytes()


class TestMixStatistics:
    def test_thousand_examples_uniform_snr_and_balanced_modes(self, corpus, tmp_path):
        # pipeline-level distribution check: requested SNRs uniform on the
        # training range, point/diffuse split consistent with p = 0.5
        from scipy import stats

        manifest = read_manifest(corpus["pairs"])
        base = []
        for e in manifest.entries:
            if e["talker"] != "t00":
                continue
            base.append(
                {
                    "id": e["id"],
                    "talker": e["talker"],
                    "outer": str(manifest.resolve(e["outer"])),
                    "inear": str(manifest.resolve(e["inear"])),
                }
            )
        entries = [
            {**base[i % len(base)], "id": f"ex{i:04d}"} for i in range(1000)
        ]
        big = tmp_path / "big_pairs.jsonl"
        write_manifest(big, "recorded-pairs", entries)
        hrir = build_hrir_sets(tmp_path / "hrir", talkers=("t00",))
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text(
            "seed: 3\n"
            "mix:\n  segment_seconds: 0.25\n"
            "spatialize:\n  white_noise_low_db: null\n",
            encoding="utf-8",
        )
        report = run_mix(
            MixRequest(
                pairs_manifest=str(big),
                noise_manifest=str(corpus["noise"]),
                hrir_manifest=str(hrir),
                out_dir=str(tmp_path / "out"),
                config_path=str(cfg),
            )
        )
        records = read_manifest(report.manifest_path).entries
        assert len(records) == 1000
        snrs = np.array([e["snr_db"] for e in records])
        achieved = np.array([e["achieved_snr_db"] for e in records])
        assert np.abs(achieved - snrs).max() < 0.01
        assert stats.kstest(snrs, "uniform", args=(-10.0, 35.0)).pvalue > 0.01
        diffuse = sum(e["mode"] == "diffuse" for e in records)
        assert stats.binomtest(diffuse, 1000, 0.5).pvalue > 0.01


class TestSpeechIndependentPipeline:
    def test_estimate_and_augment_speech_independent(self, corpus, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text(
            "estimate:\n  mode: speech-independent\n"
            "augment:\n  technique: speech-independent\n",
            encoding="utf-8",
        )
        report = run_estimate(
            EstimateRequest(
                pairs_manifest=str(corpus["pairs"]),
                out_dir=str(tmp_path / "models"),
                config_path=str(cfg),
            )
        )
        averaged = next(m for m in report.models if m.scope == "talker-averaged")
        model = load_model(averaged.path)
        assert model.mode == "speech-independent"
        assert model.num_slots == 1
        aug = run_augment(
            AugmentRequest(
                speech_manifest=str(corpus["speech"]),
                model_path=averaged.path,
                out_dir=str(tmp_path / "aug"),
                config_path=str(cfg),
            )
        )
        assert aug.num_entries == 6

    def test_random_phoneme_augment(self, corpus, models_dir, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("augment:\n  technique: random-phoneme\n", encoding="utf-8")
        report = run_augment(
            AugmentRequest(
                speech_manifest=str(corpus["speech"]),
                model_path=str(models_dir / "talker_averaged.ovrtf"),
                out_dir=str(tmp_path / "aug"),
                config_path=str(cfg),
            )
        )
        assert report.num_entries == 6
        manifest = read_manifest(report.manifest_path)
        assert all(e["technique"] == "random-phoneme" for e in manifest.entries)

    def test_twelve_talker_metadata(self, tmp_path):
        pairs = build_pairs_corpus(
            tmp_path / "pairs12", num_talkers=12, utts_per_talker=1, duration_s=0.3
        )
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text(
            "estimate:\n  mode: speech-independent\n  scopes: [talker-averaged]\n",
            encoding="utf-8",
        )
        report = run_estimate(
            EstimateRequest(
                pairs_manifest=str(pairs),
                out_dir=str(tmp_path / "models"),
                config_path=str(cfg),
            )
        )
        model = load_model(report.models[0].path)
        assert len(model.talkers) == 12
        assert model.num_utterances == 12


class TestReconstruct:
    def test_unity_outer_mask_round_trip(self, corpus, augmented, tmp_path):
        manifest = read_manifest(augmented)
        entry = manifest.entries[0]
        noisy_outer = str(Path(entry["outer"]))
        noisy_inear = str(manifest.resolve(entry["inear"]))
        wave = read_waveform(noisy_outer)
        frames = PIPELINE_FRAME_SPEC.num_frames(len(wave))
        shape = (PIPELINE_FRAME_SPEC.num_bins, frames)
        mask_path = tmp_path / "unity.ovmsk"
        save_masks(np.ones(shape, complex), np.zeros(shape, complex), PIPELINE_FRAME_SPEC, mask_path)
        out_path = tmp_path / "estimate.wav"
        report = run_reconstruct(
            ReconstructRequest(
                noisy_outer=noisy_outer,
                noisy_inear=noisy_inear,
                mask_path=str(mask_path),
                out_path=str(out_path),
            )
        )
        assert report.num_samples == len(wave)
        estimate = read_waveform(out_path)
        # unity outer mask reduces to analysis/synthesis round trip
        np.testing.assert_allclose(estimate.samples, wave.samples, atol=1e-6)

    def test_frame_mismatch_rejected(self, corpus, augmented, tmp_path):
        manifest = read_manifest(augmented)
        entry = manifest.entries[0]
        shape = (PIPELINE_FRAME_SPEC.num_bins, 3)
        mask_path = tmp_path / "short.ovmsk"
        save_masks(np.ones(shape, complex), np.ones(shape, complex), PIPELINE_FRAME_SPEC, mask_path)
        with pytest.raises(DataError):
            run_reconstruct(
                ReconstructRequest(
                    noisy_outer=str(Path(entry["outer"])),
                    noisy_inear=str(manifest.resolve(entry["inear"])),
                    mask_path=str(mask_path),
                    out_path=str(tmp_path / "out.wav"),
                )
            )


class TestValidate:
    def test_all_fixtures_validate_clean(self, corpus, models_dir):
        report = run_validate(
            ValidateRequest(
                paths=[
                    str(corpus["pairs"]),
                    str(corpus["speech"]),
                    str(corpus["noise"]),
                    str(corpus["hrir"]),
                    str(models_dir / "talker_averaged.ovrtf"),
                ]
            )
        )
        assert report.ok, [f.violations for f in report.files if not f.ok]

    def test_manifest_with_missing_file_flagged(self, tmp_path):
        write_manifest(
            tmp_path / "broken.jsonl",
            ROLE_SPEECH,
            [{"id": "x", "talker": "t", "audio": "missing.wav"}],
        )
        report = run_validate(ValidateRequest(paths=[str(tmp_path / "broken.jsonl")]))
        assert not report.ok
        assert "not found" in report.files[0].violations[0]

    def test_corrupted_model_flagged(self, models_dir, tmp_path):
        blob = (models_dir / "individual_t00.ovrtf").read_bytes()
        bad = tmp_path / "truncated.ovrtf"
        bad.write_bytes(blob[: len(blob) // 2])
        report = run_validate(ValidateRequest(paths=[str(bad)]))
        assert not report.ok
        assert report.files[0].kind == "model"

    def test_corrupted_availability_bitmap_flagged(self, models_dir, tmp_path):
        # flipping availability bits breaks the fallback == mean(available) identity
        blob = bytearray((models_dir / "individual_t00.ovrtf").read_bytes())
        model = load_model(models_dir / "individual_t00.ovrtf")
        bitmap_offset = 5 + 2 + 2 + 8 + 16 * model.num_slots * model.spec.num_bins + 16 * model.spec.num_bins
        blob[bitmap_offset] ^= 0b1111
        bad = tmp_path / "bitmap.ovrtf"
        bad.write_bytes(bytes(blob))
        report = run_validate(ValidateRequest(paths=[str(bad)]))
        assert not report.ok

    def test_missing_target_raises_io(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            run_validate(ValidateRequest(paths=[str(tmp_path / "nope.jsonl")]))
