"""Text file formats for challenges, secrets and samples.

Bit strings are ASCII with character ``j`` holding bit ``j``.
"""

from __future__ import annotations

import re
from typing import Optional

from .f2la import BitMatrix, bitstring, parse_bitstring
from .protocol import Challenge, Secret

_HEADER = re.compile(r"IQP1 q=(\d+) theta=pi/8 rows=(\d+) cols=(\d+)")
_SECRET = re.compile(r"s=([01]*) q=(\d+) seed=([0-9a-f]+) causal=([0-9,]*)")


class FormatError(ValueError):
    pass


def dump_challenge(ch: Challenge) -> str:
    m = ch.public_matrix
    lines = [f"IQP1 q={ch.q} theta=pi/8 rows={m.nrows} cols={m.ncols}"] + m.to_strings()
    return "\n".join(lines) + "\n"


def load_challenge(text: str) -> Challenge:
    lines = text.split("\n")
    if not lines or lines[-1] != "":
        raise FormatError("challenge file must end with a newline")
    lines = lines[:-1]
    head = _HEADER.fullmatch(lines[0]) if lines else None
    if head is None:
        raise FormatError("bad challenge header")
    q, k, n = (int(v) for v in head.groups())
    rows = lines[1:]
    if len(rows) != k:
        raise FormatError(f"header says {k} rows, found {len(rows)}")
    for r in rows:
        if len(r) != n or not set(r) <= {"0", "1"}:
            raise FormatError(f"bad row {r!r}")
    return Challenge(BitMatrix.from_strings(rows, n), q)


def dump_secret(sec: Secret) -> str:
    causal = ",".join(str(i) for i in sec.causal_rows)
    return f"s={bitstring(sec.s, sec.n)} q={sec.q} seed={sec.seed:016x} causal={causal}\n"


def load_secret(text: str) -> Secret:
    m = _SECRET.fullmatch(text.rstrip("\n"))
    if m is None or not text.endswith("\n"):
        raise FormatError("bad secret line")
    bits, q, seed, causal = m.groups()
    idx = tuple(int(v) for v in causal.split(",")) if causal else ()
    return Secret(parse_bitstring(bits), len(bits), idx, int(seed, 16), int(q))


def dump_samples(samples: list[int], n: int) -> str:
    return "".join(bitstring(x, n) + "\n" for x in samples)


def load_samples(text: str, n: Optional[int] = None) -> list[int]:
    if text and not text.endswith("\n"):
        raise FormatError("sample file must end with a newline")
    out = []
    for line in text.split("\n")[:-1] if text else []:
        if n is not None and len(line) != n:
            raise FormatError(f"sample of length {len(line)}, expected {n}")
        if not set(line) <= {"0", "1"}:
            raise FormatError(f"bad sample {line!r}")
        out.append(parse_bitstring(line))
    return out
