"""
Seed plumbing.

Every random stream is addressed by a path of integers below one master
seed, e.g. ``(setup, stream, draw)``. A stream depends only on its path, so
results do not change with evaluation order or the number of workers.
"""

import numpy as np

# stream ids below a setup
GEOMETRY, SHADOWING, CHANNELS, STAT_CHANNELS = range(4)


def seed_sequence(seed, *path):
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key + tuple(path))
    return np.random.SeedSequence(seed, spawn_key=tuple(path))


def generator(seed, *path):
    if isinstance(seed, np.random.Generator):
        if path:
            raise ValueError("cannot derive a sub-stream from a Generator")
        return seed
    return np.random.default_rng(seed_sequence(seed, *path))
