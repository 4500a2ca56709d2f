"""Counter-based random streams keyed by (seed, realization index, purpose).

Every realization owns independent Philox streams, so results do not depend on
how realizations are split across workers.
"""

import numpy as np

GEOMETRY = 0
TAGS = 1
FADING = 2


def stream(seed, index, purpose):
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index), int(purpose)))
    return np.random.Generator(np.random.Philox(ss))
