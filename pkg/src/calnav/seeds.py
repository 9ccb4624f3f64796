"""Deterministic seed derivation.

Every random draw in the package flows from one master seed through
sha256(master, *tags), so any component can be re-derived in isolation and
results are independent of scheduling or worker count.
"""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *tags: object) -> int:
    """64-bit child seed from a master seed and a sequence of purpose tags."""
    text = ":".join([str(int(master))] + [str(t) for t in tags])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
