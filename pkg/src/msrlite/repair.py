"""Two-stage repair-by-transfer of a single failed block, with bandwidth accounting.

Stage 1 rebuilds the r^(t-1) symbols of the failed block whose anchor
coordinate a = wrap(v*, t) equals u*, from Type I constraints. Stage 2 gets
every other symbol from one Type II constraint each, dividing out rho. Every
helper ships raw stored symbols; nothing is combined before transfer.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np

from .codec import Codeword
from .construction import (BlockId, CodeParams, SymbolId, modify_vector, type1_terms,
                           type2_terms, wrap)
from .errors import InvalidBlock, PlanMismatch

Request = tuple[int, int]  # (block 1..n, symbol 0..ell-1)


@dataclass(frozen=True)
class Stage2Step:
    p: int
    profile: SymbolId  # the constraint's x, anchor coordinate equal to u*
    target: SymbolId   # failed-block symbol this step recovers
    fetch: tuple[Request, ...]  # (b-II-1) symbols, downloaded
    known: tuple[Request, ...]  # (b-II-2) symbols, already held after stage 1


@dataclass(frozen=True)
class RepairPlan:
    params: CodeParams
    failed: BlockId
    anchor: int
    anchored: tuple[int, ...]  # failed-block symbols rebuilt in stage 1
    stage1: dict[int, tuple[int, ...]]
    stage2: tuple[Stage2Step, ...]

    @property
    def stage1_requests(self) -> list[Request]:
        return [(b, s) for b, syms in self.stage1.items() for s in syms]

    @property
    def stage2_requests(self) -> list[Request]:
        return [req for step in self.stage2 for req in step.fetch]

    def requests(self) -> list[Request]:
        return self.stage1_requests + self.stage2_requests

    def helper_loads(self) -> Counter:
        return Counter(b for b, _ in self.requests())


@dataclass(frozen=True)
class RepairReport:
    n: int
    k: int
    t: int
    ell: int
    failed: int
    stage1_count: int
    stage2_count: int
    cutset: Fraction
    helper_loads: dict[int, int] = field(default_factory=dict)

    @property
    def downloaded_symbols(self) -> int:
        return self.stage1_count + self.stage2_count

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.downloaded_symbols) / self.cutset

    @property
    def bound(self) -> Fraction:
        return 1 + Fraction(1, self.t)

    @property
    def bound_ok(self) -> bool:
        return self.ratio <= self.bound

    def to_text(self) -> str:
        pairs = [
            ("n", self.n), ("k", self.k), ("t", self.t), ("ell", self.ell),
            ("failed", self.failed),
            ("stage1", self.stage1_count), ("stage2", self.stage2_count),
            ("downloaded", self.downloaded_symbols),
            ("cutset", _fmt(self.cutset)), ("ratio", _fmt(self.ratio)),
            ("bound", _fmt(self.bound)), ("bound_ok", str(self.bound_ok).lower()),
        ]
        return "\n".join(f"{k}={v}" for k, v in pairs) + "\n"


def _fmt(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{float(x):.6g}"


def cutset_bound(n: int, k: int, d: int, ell: int) -> Fraction:
    """d * ell / (d - k + 1), exact."""
    if not k <= d <= n - 1:
        raise ValueError(f"need k <= d <= n-1, got n={n}, k={k}, d={d}")
    return Fraction(d * ell, d - k + 1)


def plan_repair(params: CodeParams, failed: BlockId | int) -> RepairPlan:
    if isinstance(failed, BlockId):
        failed = failed.flat
    if not isinstance(failed, (int, np.integer)) or not 1 <= failed <= params.n:
        raise InvalidBlock(f"failed block {failed!r} outside 1..{params.n}")
    fb = params.block(int(failed))
    n, r, s, t = params.n, params.r, params.s, params.t
    a = wrap(fb.v, t)

    anchored = [x for x in params.symbols if x.x[a - 1] == fb.u]
    anchored_flat = tuple(x.flat for x in anchored)
    stage1 = {i: anchored_flat for i in range(1, n + 1) if i != fb.flat}

    # blocks (u*, v) sharing the anchor coordinate with the failed block
    twins = [params.block_at(fb.u, v).flat for v in range(1, s + 1)
             if v != fb.v and wrap(v, t) == a]
    seen = {(i, sym) for i in stage1 for sym in anchored_flat}
    steps = []
    for y in anchored:
        for p in range(1, r):
            target = params.symbol_at(modify_vector(y.x, fb.v, p, r))
            fetch = []
            for i in twins:
                req = (i, target.flat)
                if req not in seen:
                    seen.add(req)
                    fetch.append(req)
            known = []
            for v in range(1, s + 1):
                b = wrap(v, t)
                if b == a:
                    continue
                sym = params.symbol_at(modify_vector(y.x, v, p, r))
                known.append((params.block_at(y.x[b - 1], v).flat, sym.flat))
            steps.append(Stage2Step(p, y, target, tuple(fetch), tuple(known)))
    return RepairPlan(params, fb, a, anchored_flat, stage1, tuple(steps))


def repair_report(plan: RepairPlan) -> RepairReport:
    params = plan.params
    return RepairReport(
        n=params.n, k=params.k, t=params.t, ell=params.ell,
        failed=plan.failed.flat,
        stage1_count=len(plan.stage1_requests),
        stage2_count=len(plan.stage2_requests),
        cutset=cutset_bound(params.n, params.k, params.n - 1, params.ell),
        helper_loads=dict(sorted(plan.helper_loads().items())),
    )


def execute_repair(params: CodeParams, survivors, plan: RepairPlan) -> np.ndarray:
    """Rebuild the failed block, reading only the symbols named in ``plan``.

    ``survivors`` maps block index to an indexable block (or is a Codeword,
    in which case the failed block's contents are never touched).
    """
    if plan.params != params:
        raise PlanMismatch("plan was made for different parameters")
    failed = plan.failed.flat
    if isinstance(survivors, Codeword):
        survivors = {i: survivors.blocks[i - 1] for i in range(1, params.n + 1) if i != failed}
    spec = params.spec

    known: dict[Request, int] = {}
    for b, sym in plan.requests():
        if b == failed or b not in survivors:
            raise PlanMismatch(f"block {b} is not available as a helper")
        try:
            known[(b, sym)] = int(survivors[b][sym])
        except (IndexError, KeyError) as exc:
            raise PlanMismatch(f"symbol {sym} of block {b} is unavailable") from exc

    def lookup(req: Request) -> int:
        try:
            return known[req]
        except KeyError:
            raise PlanMismatch(f"plan does not provide symbol {req[1]} of block {req[0]}") from None

    out = np.zeros(params.ell, dtype=np.int64)
    for sym in plan.anchored:
        acc = 0
        for b, s_, _ in type1_terms(params, params.symbol(sym)):
            if b != failed:
                acc ^= lookup((b, s_))
        known[(failed, sym)] = acc
        out[sym] = acc

    for step in plan.stage2:
        acc = 0
        coef = 0
        for b, s_, c in type2_terms(params, step.p, step.profile):
            if (b, s_) == (failed, step.target.flat):
                coef ^= c
            else:
                acc ^= spec.mul(c, lookup((b, s_)))
        value = spec.mul(acc, spec.inv(coef))
        known[(failed, step.target.flat)] = value
        out[step.target.flat] = value

    missing = params.ell - len({s for b, s in known if b == failed})
    if missing:
        raise PlanMismatch(f"plan leaves {missing} symbols of block {failed} unrecovered")
    return out


@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    t: int
    ell: int
    measured: int
    cutset: Fraction
    ratio: Fraction
    min_ell_for_ratio: Fraction   # (n-k)/ratio, necessary for any code at this ratio
    min_ell_ok: bool
    gtc_holds: bool | None        # k <= 2 log2(ell) (floor(log_{r/(r-1)} ell) + 1)
    twb_holds: bool               # ell >= r^(k/r)

    def to_text(self) -> str:
        pairs = [
            ("cutset", _fmt(self.cutset)), ("measured", self.measured),
            ("ratio", _fmt(self.ratio)),
            ("min_ell_for_ratio", _fmt(self.min_ell_for_ratio)),
            ("min_ell_ok", str(self.min_ell_ok).lower()),
            ("gtc_bound_holds", "n/a" if self.gtc_holds is None else str(self.gtc_holds).lower()),
            ("twb_bound_holds", str(self.twb_holds).lower()),
        ]
        return "\n".join(f"{k}={v}" for k, v in pairs) + "\n"


def _floor_log(base: Fraction, x: int) -> int:
    """Largest m with base**m <= x, for base > 1."""
    m = 0
    while base ** (m + 1) <= x:
        m += 1
    return m


def bounds_report(n: int, k: int, t: int, measured: RepairReport | int) -> BoundsReport:
    r = n - k
    ell = r ** t
    if isinstance(measured, RepairReport):
        measured = measured.downloaded_symbols
    cut = cutset_bound(n, k, n - 1, ell)
    ratio = Fraction(measured) / cut
    min_ell = Fraction(r) / ratio
    if r >= 2:
        m = _floor_log(Fraction(r, r - 1), ell)
        gtc = k <= 2 * math.log2(ell) * (m + 1)
    else:
        gtc = None
    return BoundsReport(
        n=n, k=k, t=t, ell=ell, measured=measured, cutset=cut, ratio=ratio,
        min_ell_for_ratio=min_ell, min_ell_ok=ell >= min_ell,
        gtc_holds=gtc, twb_holds=ell ** r >= r ** k,
    )
