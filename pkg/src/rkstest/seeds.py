"""Deterministic seed derivation.

Every source of randomness in the package flows from one master seed
through derive_seed, so any sub-computation (a restart, a permutation,
a replicate) can be reproduced in isolation from the master seed and
its tag path alone.  Hashing uses blake2b, which is stable across
processes and platforms (unlike the builtin hash).
"""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *tags: int | str) -> int:
    """Derive a child seed from a master seed and a tag path.

    Args:
        master: user-visible master seed (any Python int).
        tags: sequence of strings/ints naming the sub-computation,
            e.g. ("restart", 2) or ("rep", 17, "null").

    Returns:
        A nonnegative int below 2**63, suitable for numpy Generators.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for tag in tags:
        h.update(b"/")
        h.update(str(tag).encode())
    return int.from_bytes(h.digest(), "big") >> 1
