"""Seeded, counter-based random streams.

Every random draw in the package goes through :func:`make_rng`, which keys a
Philox generator with the 64-bit user seed and a hash of a purpose label.
Two streams with different labels are independent; the same (seed, label)
always replays the same stream.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def label_key(label: str) -> int:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def make_rng(seed: int, label: str = "") -> np.random.Generator:
    """Return a Philox generator for ``(seed, label)``."""
    key = np.array([seed & MASK64, label_key(label)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def parse_seed(text: str) -> int:
    """Parse a seed given as hex (``0x1f`` or bare ``1f``)."""
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    value = int(text, 16)
    if not 0 <= value <= MASK64:
        raise ValueError(f"seed out of 64-bit range: {text}")
    return value
