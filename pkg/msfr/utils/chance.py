import zlib
from typing import *

import numpy as np


def stream_key(key: Union[int, str]) -> int:
    """
    Maps a stream name to a non-negative integer usable as a SeedSequence spawn key.
    :param key: An integer or a string naming the stream.
    :return: The integer key. Strings go through CRC-32 so the mapping is stable across processes.
    """
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError('stream keys must be non-negative, got %d' % key)
        return int(key)
    return zlib.crc32(str(key).encode('utf-8'))


def make_rng(seed: int, *keys: Union[int, str]) -> np.random.Generator:
    """
    Builds an independent random generator for the named stream of a user seed.
    The same (seed, keys) always gives the same stream, whatever else runs in the process.
    :param seed: The user seed.
    :param keys: Names of the stream, e.g. ("truth",) or ("folds", "study1").
    :return: A numpy Generator.
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(stream_key(k) for k in keys))
    return np.random.default_rng(sequence)


def stream_seed(seed: int, *keys: Union[int, str]) -> int:
    """
    Derives a 32-bit integer seed for libraries that only take integer random states.
    :param seed: The user seed.
    :param keys: Names of the stream.
    :return: An integer in [0, 2**32).
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(stream_key(k) for k in keys))
    return int(sequence.generate_state(1)[0])


def replication_seed(seed: int, replication: int) -> int:
    """
    Seed of one benchmark replication; fixed by index so scheduling order does not matter.
    """
    return int(seed) + int(replication)
