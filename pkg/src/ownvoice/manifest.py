"""Line-delimited corpus manifests with stable key order.

A manifest is UTF-8 JSON lines: a header record followed by one entry per
line. The header carries the schema version and the corpus role; entries
reference audio (and alignment) files by path, resolved relative to the
manifest's directory unless absolute. Stable key order keeps manifests
diff-able and re-runs byte-identical.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError, FileFormatError

MANIFEST_TYPE = "ownvoice-manifest"
MANIFEST_VERSION = 1

ROLE_SPEECH = "speech-corpus"
ROLE_PAIRS = "recorded-pairs"
ROLE_NOISE = "noise"
ROLE_HRIR = "hrir"
ROLES = (ROLE_SPEECH, ROLE_PAIRS, ROLE_NOISE, ROLE_HRIR)

# path-valued entry keys, used for resolution and existence checks
PATH_KEYS = (
    "audio",
    "outer",
    "inear",
    "alignment",
    "path",
    "target",
    "own_outer",
    "own_inear",
    "source",
)


@dataclass
class Manifest:
    role: str
    entries: list[dict]
    base_dir: Path = field(default_factory=Path)

    def __post_init__(self):
        if self.role not in ROLES:
            raise DataError(f"unknown manifest role: {self.role!r}")
        seen = set()
        for entry in self.entries:
            ident = entry.get("id", entry.get("talker"))
            if ident is None:
                continue
            if ident in seen:
                raise DataError(f"manifest entry id {ident!r} is not unique")
            seen.add(ident)

    def __len__(self) -> int:
        return len(self.entries)

    def resolve(self, path_value: str) -> Path:
        p = Path(path_value)
        return p if p.is_absolute() else self.base_dir / p


def read_manifest(path, expected_role: str | None = None) -> Manifest:
    path = Path(path).resolve()
    lines = path.read_text(encoding="utf-8").splitlines()
    records = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            raise FileFormatError(f"{path}:{lineno}: invalid JSON record") from None
    if not records:
        raise FileFormatError(f"{path}: empty manifest, header record missing")
    header, entries = records[0], records[1:]
    if header.get("type") != MANIFEST_TYPE:
        raise FileFormatError(f"{path}: missing manifest header record")
    if header.get("version") != MANIFEST_VERSION:
        raise FileFormatError(f"{path}: unsupported manifest version {header.get('version')}")
    role = header.get("role")
    if role not in ROLES:
        raise FileFormatError(f"{path}: unknown manifest role {role!r}")
    if expected_role is not None and role != expected_role:
        raise DataError(f"{path}: manifest role is {role!r}, expected {expected_role!r}")
    return Manifest(role=role, entries=entries, base_dir=path.parent)


def write_manifest(path, role: str, entries: list[dict]) -> None:
    if role not in ROLES:
        raise DataError(f"unknown manifest role: {role!r}")
    path = Path(path)
    header = {"type": MANIFEST_TYPE, "version": MANIFEST_VERSION, "role": role}
    lines = [json.dumps(header, sort_keys=True)]
    lines += [json.dumps(e, sort_keys=True) for e in entries]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
