import warnings
from functools import lru_cache
from itertools import combinations

from msrlite.construction import make_params
from msrlite.mds import sample_code

# every (n, k, t) with n <= 12, r in {2, 3, 4}, r | n, 1 <= t <= n / r
GRID = sorted((n, n - r, t) for r in (2, 3, 4) for n in range(2 * r, 13, r)
              for t in range(1, n // r + 1))


@lru_cache(maxsize=None)
def sampled(n: int, k: int, t: int, w: int = 16, seed: int = 0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # small fields warn by design
        return sample_code(make_params(n, k, t, w=w), seed=seed)


def block_subsets(n: int, size: int):
    return [tuple(c) for c in combinations(range(1, n + 1), size)]
