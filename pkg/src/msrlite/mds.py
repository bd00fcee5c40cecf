"""MDS verification by exhaustive block-submatrix ranks, and seeded rho sampling."""
from __future__ import annotations

import itertools
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .construction import CodeParams, ParityCheckMatrix, build_parity_matrix
from .errors import RetriesExhausted
from .linalg import FieldMatrix, batch_full_rank

log = logging.getLogger(__name__)

# warn when the per-draw failure bound exceeds this
FAILURE_BOUND_WARN = 0.01


@dataclass(frozen=True)
class MdsReport:
    is_mds: bool
    subsets_checked: int
    failing_subset: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.is_mds != (self.failing_subset is None):
            raise ValueError("failing_subset must be present exactly when is_mds is false")


def submatrix(P: ParityCheckMatrix, S) -> FieldMatrix:
    """Column blocks of P for the 1-based blocks in S, in the given order."""
    ell = P.ell
    cols = np.concatenate([np.arange((i - 1) * ell, i * ell) for i in S]) if len(S) else np.array([], dtype=int)
    return FieldMatrix(P.spec, P.data[:, cols])


# cap on int64 entries per batched elimination
_BATCH_ELEMENTS = 1 << 21


def verify_mds(P: ParityCheckMatrix) -> MdsReport:
    """Check every r-block submatrix for full rank, stopping at the first failure.

    Subsets are visited in lexicographic order; ranks are computed in batches.
    """
    r = P.r
    size = r * P.ell
    subsets = itertools.combinations(range(1, P.n + 1), r)
    per_batch = max(1, _BATCH_ELEMENTS // (size * size))
    checked = 0
    while True:
        batch = list(itertools.islice(subsets, per_batch))
        if not batch:
            return MdsReport(True, checked)
        stack = np.stack([submatrix(P, S).data for S in batch])
        ok = batch_full_rank(P.spec, stack)
        if not ok.all():
            first = int(np.argmin(ok))
            return MdsReport(False, checked + first + 1, batch[first])
        checked += len(batch)


def failure_bound(n: int, k: int, t: int, w: int) -> float:
    """Schwartz-Zippel bound on P(a uniform nonzero rho breaks MDS): C(n,r)*r*ell/(q-1)."""
    r = n - k
    return math.comb(n, r) * r * r ** t / ((1 << w) - 1)


def field_size_warning(n: int, k: int, t: int, w: int) -> str | None:
    r = n - k
    budget = math.comb(n, r) * r * r ** t
    q1 = (1 << w) - 1
    if q1 <= budget:
        return (f"q-1 = {q1} does not exceed C(n,r)*r*ell = {budget}; "
                "the random-rho guarantee is vacuous, relying on verification")
    if budget / q1 > FAILURE_BOUND_WARN:
        return (f"q-1 = {q1} barely exceeds C(n,r)*r*ell = {budget}; "
                f"per-draw failure bound {budget / q1:.3g}")
    return None


def sample_code(base: CodeParams, seed: int = 0, max_retries: int = 32) -> CodeParams:
    """Return ``base`` with a rho for which P passes verify_mds.

    A rho already present in ``base`` is checked first. Otherwise up to
    ``max_retries`` candidates are drawn uniformly from the nonzero field
    elements with a generator seeded by ``seed``.
    """
    base.validate(require_rho=False)
    if base.rho:
        if verify_mds(build_parity_matrix(base)).is_mds:
            return base
    msg = field_size_warning(base.n, base.k, base.t, base.spec.w)
    if msg:
        warnings.warn(msg, stacklevel=2)
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_retries + 1):
        rho = int(rng.integers(1, base.spec.order))
        candidate = base.with_rho(rho)
        report = verify_mds(build_parity_matrix(candidate))
        if report.is_mds:
            log.debug("rho=%#x accepted on attempt %d", rho, attempt)
            return candidate
        log.debug("rho=%#x rejected, subset %s is rank deficient", rho, report.failing_subset)
    raise RetriesExhausted(f"no MDS rho found in {max_retries} draws (seed {seed})")
