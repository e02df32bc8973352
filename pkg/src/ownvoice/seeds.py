"""Stable 64-bit seed derivation for reproducible stochastic stages.

Seeds are derived by hashing the global seed together with stage names
and utterance ids, so any subset of a corpus reproduces identically and
parallel execution cannot change results.
"""

import hashlib


def derive_seed(*parts) -> int:
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(str(part).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")
