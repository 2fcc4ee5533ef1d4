"""Deterministic random streams.

All randomness is derived from a single master seed. A stream is addressed by
a key such as ``("replication", 17)``; the same key always yields the same
numbers, no matter which worker thread asks for it or in what order.
"""

from __future__ import annotations

import zlib
from typing import Tuple, Union

import numpy as np

KeyPart = Union[int, str]


def _key_to_ints(key: Tuple[KeyPart, ...]) -> Tuple[int, ...]:
    # stringi -> stabilny crc32 (hash() jest losowany per proces)
    return tuple(
        part if isinstance(part, int) else zlib.crc32(part.encode("utf-8"))
        for part in key
    )


def seed_sequence(master_seed: int, *key: KeyPart) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=_key_to_ints(key))


def stream(master_seed: int, *key: KeyPart) -> np.random.Generator:
    """Counter-based (Philox) generator for ``key`` under ``master_seed``."""
    return np.random.Generator(np.random.Philox(seed_sequence(master_seed, *key)))


def child_seed(master_seed: int, *key: KeyPart) -> int:
    """31-bit integer seed for APIs that want a plain int (networkx)."""
    return int(seed_sequence(master_seed, *key).generate_state(1, dtype=np.uint32)[0] >> 1)


def as_generator(seed: Union[int, np.random.Generator, None]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return stream(0 if seed is None else seed)
