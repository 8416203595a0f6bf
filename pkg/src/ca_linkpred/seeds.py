import numpy as np


def derive_seed(seed: int, *counter: int) -> int:
    """Counter-based child seed: independent streams for (seed, counter...)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(counter))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
