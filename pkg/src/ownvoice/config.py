"""Pipeline configuration: one model validated from YAML/JSON files or requests."""

from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, Field, model_validator

from .errors import DataError
from .wola import MODEL_FRAME_SPEC, PIPELINE_FRAME_SPEC, FrameSpec

# discrete SNRs used for test-set mixing
TEST_SNRS_DB = (-10.0, -5.0, 0.0, 5.0, 10.0)
# recording-effort sweep points supported by the subset selectors
TALKER_COUNT_SWEEP = (1, 2, 3, 4, 6, 8, 10, 12)
UTTERANCE_COUNT_SWEEP = (1, 3, 6, 12, 25, 75, 150, 306)


class FrameSpecConfig(BaseModel):
    frame_len: int
    hop: int
    sample_rate: int

    def to_frame_spec(self) -> FrameSpec:
        return FrameSpec(self.frame_len, self.hop, self.sample_rate)


class EstimateOptions(BaseModel):
    mode: Literal["speech-independent", "speech-dependent"] = "speech-dependent"
    scopes: list[Literal["individual", "talker-averaged"]] = Field(
        default_factory=lambda: ["individual", "talker-averaged"]
    )
    min_frames: int = Field(default=1, ge=1)
    inventory: str | None = None  # label file, required for speech-dependent mode


class AugmentOptions(BaseModel):
    technique: Literal["speech-independent", "speech-dependent", "random-phoneme"] = (
        "speech-dependent"
    )
    alpha: float = Field(default=0.5, ge=0.0, lt=1.0)


class SpatializeOptions(BaseModel):
    mode: Literal["point", "diffuse", "random"] = "random"
    direction: int | None = None
    diffuse_probability: float = Field(default=0.5, ge=0.0, le=1.0)
    white_noise_low_db: float | None = -120.0  # null switches the floor off

    @model_validator(mode="after")
    def _check_floor(self):
        if self.white_noise_low_db is not None and self.white_noise_low_db > -60.0:
            raise ValueError("white_noise_low_db must be <= -60 dB or null")
        return self


class MixOptions(BaseModel):
    snr_range_db: tuple[float, float] = (-10.0, 25.0)
    segment_seconds: float = Field(default=3.0, gt=0.0)

    @model_validator(mode="after")
    def _check_range(self):
        if self.snr_range_db[0] > self.snr_range_db[1]:
            raise ValueError("snr_range_db low bound exceeds high bound")
        return self


class PipelineConfig(BaseModel):
    seed: int = 0
    jobs: int = Field(default=1, ge=1)
    pipeline_frame: FrameSpecConfig = FrameSpecConfig(
        frame_len=PIPELINE_FRAME_SPEC.frame_len,
        hop=PIPELINE_FRAME_SPEC.hop,
        sample_rate=PIPELINE_FRAME_SPEC.sample_rate,
    )
    model_frame: FrameSpecConfig = FrameSpecConfig(
        frame_len=MODEL_FRAME_SPEC.frame_len,
        hop=MODEL_FRAME_SPEC.hop,
        sample_rate=MODEL_FRAME_SPEC.sample_rate,
    )
    subset_talkers: int | None = Field(default=None, ge=1)
    subset_utterances: int | None = Field(default=None, ge=1)
    estimate: EstimateOptions = EstimateOptions()
    augment: AugmentOptions = AugmentOptions()
    spatialize: SpatializeOptions = SpatializeOptions()
    mix: MixOptions = MixOptions()


def load_config(path) -> PipelineConfig:
    """Load a YAML or JSON config file; paths inside stay relative to its directory."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise DataError(f"{path}: cannot parse config: {e}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise DataError(f"{path}: config must be a mapping")
    cfg = PipelineConfig.model_validate(raw)
    if cfg.estimate.inventory is not None:
        inv = Path(cfg.estimate.inventory)
        if not inv.is_absolute():
            cfg.estimate.inventory = str(path.parent / inv)
    return cfg
