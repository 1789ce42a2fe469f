"""Counter-based random streams.

Every stochastic component draws from a Philox generator keyed by
(master_seed, *key).  Philox is counter-based and splittable, so streams
derived from distinct keys are independent and the set of streams does not
depend on the order in which they are created.  This is what makes replicated
experiments order-insensitive and safe to parallelize.
"""

import numpy as np


def stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the given master seed and key path."""
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(seq))
