"""Contains helpers for deriving independent, reproducible random streams."""
import numpy as np


def master_entropy(seed):
    """
    Resolves an optional seed to fixed entropy, so that an unseeded run
    still derives all of its child streams from one value.
    :param seed: Integer seed or None.
    :return: Integer entropy.
    """
    return np.random.SeedSequence(seed).entropy


def child_stream(seed, *key):
    """
    Derives the random stream identified by key from a master seed.
    The same (seed, key) always yields the same stream, regardless of how
    many other streams were drawn before.
    :param seed: Master seed or entropy.
    :param key: Non-negative integers naming the stream, e.g. (tree index,).
    :return: numpy Generator.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))
