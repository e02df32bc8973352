"""Versioned little-endian binary containers for model and mask files.

Model files (magic ``OVRTF``): version, mode/scope bytes, slot count,
bin count, per-slot interleaved (re, im) float64 RTF vectors, the fallback
vector, an availability bitmap (LSB first) and a UTF-8 JSON metadata
block carrying the frame spec, inventory labels, provenance and the
low-confidence bitmap. Mask files (magic ``OVMSK``) share the container
style: two complex matrices plus the frame spec. Round trips are bit
exact; unknown versions and truncated files are refused.
"""

import base64
import json
import struct
from pathlib import Path

import numpy as np

from .errors import DataError, FileFormatError, UnsupportedVersionError
from .phonemes import PhonemeInventory
from .rtf import SPEECH_DEPENDENT, SPEECH_INDEPENDENT, INDIVIDUAL, TALKER_AVERAGED, RtfModel
from .wola import FrameSpec

MODEL_MAGIC = b"OVRTF"
MASK_MAGIC = b"OVMSK"
VERSION = 1

_MODES = {SPEECH_INDEPENDENT: 0, SPEECH_DEPENDENT: 1}
_SCOPES = {INDIVIDUAL: 0, TALKER_AVERAGED: 1}


class _Reader:
    def __init__(self, blob: bytes, path):
        self.blob = blob
        self.path = path
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.blob):
            raise FileFormatError(f"{self.path}: truncated or corrupt file")
        out = self.blob[self.pos : self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack("<" + fmt, self.take(struct.calcsize("<" + fmt)))

    def finish(self):
        if self.pos != len(self.blob):
            raise FileFormatError(f"{self.path}: trailing bytes after payload")


def _check_header(r: _Reader, magic: bytes):
    if r.take(len(magic)) != magic:
        raise FileFormatError(f"{r.path}: bad magic, not a {magic.decode()} file")
    (version,) = r.unpack("H")
    if version != VERSION:
        raise UnsupportedVersionError(
            f"{r.path}: file version {version}, this build reads version {VERSION}"
        )


def _frame_spec_meta(spec: FrameSpec) -> dict:
    return {
        "frame_len": spec.frame_len,
        "hop": spec.hop,
        "sample_rate": spec.sample_rate,
        "window": spec.window,
    }


def _frame_spec_from_meta(meta: dict) -> FrameSpec:
    return FrameSpec(
        frame_len=meta["frame_len"],
        hop=meta["hop"],
        sample_rate=meta["sample_rate"],
        window=meta.get("window", "sqrt-hann"),
    )


def _pack_bits(bits: np.ndarray) -> bytes:
    return np.packbits(bits.astype(np.uint8), bitorder="little").tobytes()


def _unpack_bits(raw: bytes, count: int) -> np.ndarray:
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[
        :count
    ].astype(bool)


def _complex_bytes(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype="<c16").tobytes()


def save_model(model: RtfModel, path) -> None:
    meta = {
        "frame_spec": _frame_spec_meta(model.spec),
        "labels": list(model.inventory.labels) if model.inventory else None,
        "talkers": list(model.talkers),
        "num_utterances": model.num_utterances,
        "frame_counts": (
            [int(c) for c in model.frame_counts] if model.frame_counts is not None else None
        ),
        "low_confidence": (
            base64.b64encode(_pack_bits(model.low_confidence.ravel())).decode("ascii")
            if model.low_confidence is not None
            else None
        ),
    }
    meta_blob = json.dumps(meta, sort_keys=True).encode("utf-8")
    parts = [
        MODEL_MAGIC,
        struct.pack("<H", VERSION),
        struct.pack("<BB", _MODES[model.mode], _SCOPES[model.scope]),
        struct.pack("<II", model.num_slots, model.spec.num_bins),
        _complex_bytes(model.rtfs.T),  # slot-major: interleaved (re, im) per slot
        _complex_bytes(model.fallback),
        _pack_bits(model.availability),
        struct.pack("<I", len(meta_blob)),
        meta_blob,
    ]
    Path(path).write_bytes(b"".join(parts))


def load_model(path) -> RtfModel:
    r = _Reader(Path(path).read_bytes(), path)
    _check_header(r, MODEL_MAGIC)
    mode_b, scope_b = r.unpack("BB")
    slots, num_bins = r.unpack("II")
    try:
        mode = {v: k for k, v in _MODES.items()}[mode_b]
        scope = {v: k for k, v in _SCOPES.items()}[scope_b]
    except KeyError:
        raise FileFormatError(f"{path}: unknown mode/scope byte") from None
    rtfs = (
        np.frombuffer(r.take(16 * slots * num_bins), dtype="<c16")
        .reshape(slots, num_bins)
        .T.copy()
    )
    fallback = np.frombuffer(r.take(16 * num_bins), dtype="<c16").copy()
    availability = _unpack_bits(r.take((slots + 7) // 8), slots)
    (meta_len,) = r.unpack("I")
    try:
        meta = json.loads(r.take(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise FileFormatError(f"{path}: metadata block is not valid JSON") from None
    r.finish()

    spec = _frame_spec_from_meta(meta["frame_spec"])
    inventory = PhonemeInventory(tuple(meta["labels"])) if meta.get("labels") else None
    low_conf = None
    if meta.get("low_confidence") is not None:
        low_conf = _unpack_bits(
            base64.b64decode(meta["low_confidence"]), num_bins * slots
        ).reshape(num_bins, slots)
    frame_counts = (
        np.asarray(meta["frame_counts"], dtype=np.int64)
        if meta.get("frame_counts") is not None
        else None
    )
    try:
        return RtfModel(
            mode=mode,
            scope=scope,
            rtfs=rtfs,
            fallback=fallback,
            availability=availability,
            spec=spec,
            inventory=inventory,
            frame_counts=frame_counts,
            low_confidence=low_conf,
            talkers=tuple(meta.get("talkers", ())),
            num_utterances=meta.get("num_utterances", 0),
        )
    except DataError as e:
        raise FileFormatError(f"{path}: inconsistent model contents: {e}") from None


def save_masks(
    mask_outer: np.ndarray, mask_inear: np.ndarray, spec: FrameSpec, path
) -> None:
    mask_outer = np.asarray(mask_outer)
    mask_inear = np.asarray(mask_inear)
    if mask_outer.shape != mask_inear.shape or mask_outer.ndim != 2:
        raise DataError("masks must be two equally shaped 2-D matrices")
    if mask_outer.shape[0] != spec.num_bins:
        raise DataError("mask bin count does not match frame spec")
    meta_blob = json.dumps(
        {"frame_spec": _frame_spec_meta(spec)}, sort_keys=True
    ).encode("utf-8")
    parts = [
        MASK_MAGIC,
        struct.pack("<H", VERSION),
        struct.pack("<II", mask_outer.shape[0], mask_outer.shape[1]),
        _complex_bytes(mask_outer),
        _complex_bytes(mask_inear),
        struct.pack("<I", len(meta_blob)),
        meta_blob,
    ]
    Path(path).write_bytes(b"".join(parts))


def load_masks(path) -> tuple[np.ndarray, np.ndarray, FrameSpec]:
    r = _Reader(Path(path).read_bytes(), path)
    _check_header(r, MASK_MAGIC)
    num_bins, num_frames = r.unpack("II")
    size = 16 * num_bins * num_frames
    mask_outer = np.frombuffer(r.take(size), dtype="<c16").reshape(num_bins, num_frames).copy()
    mask_inear = np.frombuffer(r.take(size), dtype="<c16").reshape(num_bins, num_frames).copy()
    (meta_len,) = r.unpack("I")
    try:
        meta = json.loads(r.take(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise FileFormatError(f"{path}: metadata block is not valid JSON") from None
    r.finish()
    return mask_outer, mask_inear, _frame_spec_from_meta(meta["frame_spec"])
