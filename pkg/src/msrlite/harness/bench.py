"""Bandwidth sweep over a grid of (n, k, t).

Each grid point gets a code (rho drawn from the seed, not MDS-verified:
bandwidth depends only on the position of nonzeros), a random codeword, and
an actual repair of every block through a symbol-counting store. Rows are
grouped by the failed block's anchor class a = wrap(v*, t).
"""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..codec import encode
from ..construction import make_params, wrap
from ..errors import CodeError
from ..repair import bounds_report, cutset_bound, execute_repair, plan_repair

log = logging.getLogger(__name__)

COLUMNS = [
    "n", "k", "t", "r", "s", "ell", "block_class", "blocks",
    "stage1", "stage2", "downloaded_min", "downloaded_max", "cutset",
    "ratio", "ratio_bound", "bound_ok", "repair_ok",
    "gtc_bound_holds", "twb_bound_holds", "min_ell_for_ratio",
]


def default_grid(max_n: int = 12, rs=(2, 3, 4)) -> list[tuple[int, int, int]]:
    grid = []
    for r in rs:
        for n in range(2 * r, max_n + 1, r):
            for t in range(1, n // r + 1):
                grid.append((n, n - r, t))
    return sorted(grid)


def parse_grid(text: str) -> list[tuple[int, int, int]]:
    """Parse "6,3,1;9,6,2" into [(6, 3, 1), (9, 6, 2)]."""
    out = []
    for item in text.replace(" ", "").split(";"):
        if item:
            n, k, t = (int(x) for x in item.split(","))
            out.append((n, k, t))
    return out


class _CountingBlock:
    def __init__(self, block, counter: dict, index: int):
        self._block = block
        self._counter = counter
        self._index = index

    def __getitem__(self, sym):
        self._counter[self._index] = self._counter.get(self._index, 0) + 1
        return self._block[sym]


@dataclass
class Skipped:
    point: tuple[int, int, int]
    reason: str


def bench_point(n: int, k: int, t: int, w: int = 16, seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    base = make_params(n, k, t, w=w)
    for _ in range(8):
        params = base.with_rho(int(rng.integers(1, base.spec.order)))
        try:
            cw = encode(params, params.spec.random_array(rng, params.k * params.ell))
            break
        except CodeError:
            continue
    else:
        raise CodeError("could not draw a rho with an invertible parity section")

    per_block = {}
    for i in range(1, n + 1):
        plan = plan_repair(params, i)
        served: dict[int, int] = {}
        helpers = {j: _CountingBlock(cw.blocks[j - 1], served, j) for j in range(1, n + 1) if j != i}
        block = execute_repair(params, helpers, plan)
        per_block[i] = (
            sum(served.values()),
            len(plan.stage1_requests),
            len(plan.stage2_requests),
            bool(np.array_equal(block, cw.blocks[i - 1])),
        )

    cut = cutset_bound(n, k, n - 1, params.ell)
    rows = []
    for a in range(1, min(t, params.s) + 1):
        members = [i for i in range(1, n + 1) if wrap(params.block(i).v, t) == a]
        if not members:
            continue
        down = [per_block[i][0] for i in members]
        stage2 = {per_block[i][2] for i in members}
        worst = max(down)
        bounds = bounds_report(n, k, t, worst)
        limit = 1 + Fraction(1, t)
        rows.append({
            "n": n, "k": k, "t": t, "r": params.r, "s": params.s, "ell": params.ell,
            "block_class": a, "blocks": len(members),
            "stage1": per_block[members[0]][1],
            "stage2": max(stage2),
            "downloaded_min": min(down), "downloaded_max": worst,
            "cutset": _num(cut), "ratio": _num(bounds.ratio),
            "ratio_bound": _num(limit),
            "bound_ok": 1 <= bounds.ratio <= limit,
            "repair_ok": all(per_block[i][3] for i in members),
            "gtc_bound_holds": bounds.gtc_holds,
            "twb_bound_holds": bounds.twb_holds,
            "min_ell_for_ratio": _num(bounds.min_ell_for_ratio),
        })
    return rows


def _num(x) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else f"{x:.6g}"


def run_bench(grid, w: int = 16, seed: int = 0) -> tuple[list[dict], list[Skipped]]:
    rows, skipped = [], []
    for point in grid:
        try:
            rows.extend(bench_point(*point, w=w, seed=seed))
        except CodeError as exc:
            log.debug("skipping %s: %s", point, exc)
            skipped.append(Skipped(point, str(exc)))
    return rows, skipped


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})
    return buf.getvalue()


def _cell(v):
    if v is None:
        return "n/a"
    if isinstance(v, bool):
        return str(v).lower()
    return v
