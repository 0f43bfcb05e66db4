"""Stable derivation of per-module seeds from one master seed.

Hashing f"{seed}:{name}" with SHA-256 gives every named consumer its own
reproducible stream, independent of call order and of Python's per-process
hash randomization.
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, name: str) -> int:
    """A 64-bit seed unique to (seed, name), stable across runs."""
    digest = hashlib.sha256(f"{seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
