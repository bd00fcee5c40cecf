from fractions import Fraction

import numpy as np
import pytest

from msrlite.codec import encode
from msrlite.construction import BlockId, make_params, wrap
from msrlite.errors import InvalidBlock, PlanMismatch
from msrlite.repair import (bounds_report, cutset_bound, execute_repair, plan_repair,
                            repair_report)

from helpers import GRID, sampled

# (n, k, t) -> downloads for each block 1..n, counted by hand from the constraint layout
EXPECTED_DOWNLOADS = {
    (6, 3, 1): [7] * 6,
    (6, 3, 2): [15] * 6,
    (9, 6, 2): [30, 24, 30] * 3,
    (8, 4, 1): [10] * 8,
    (8, 4, 2): [28] * 8,
    (4, 3, 2): [3] * 4,
}


def test_cutset_bound():
    assert cutset_bound(6, 3, 5, 3) == 5
    assert cutset_bound(9, 6, 8, 9) == 24
    assert cutset_bound(5, 1, 4, 7) == 7
    assert cutset_bound(9, 6, 8, 9) == Fraction(8 * 9, 3)
    with pytest.raises(ValueError):
        cutset_bound(6, 3, 2, 3)


@pytest.mark.parametrize("point", sorted(EXPECTED_DOWNLOADS))
def test_download_counts(point):
    params = make_params(*point, rho=1)
    got = [repair_report(plan_repair(params, i)).downloaded_symbols for i in range(1, point[0] + 1)]
    assert got == EXPECTED_DOWNLOADS[point]


def test_report_6_3_1():
    report = repair_report(plan_repair(make_params(6, 3, 1, rho=1), 3))
    assert (report.stage1_count, report.stage2_count) == (5, 2)
    assert report.cutset == 5 and report.ratio == Fraction(7, 5)
    assert report.bound == 2 and report.bound_ok
    text = report.to_text()
    for line in ("downloaded=7", "cutset=5", "ratio=1.4"):
        assert line in text.splitlines()


def test_bounds_report_6_3_1():
    b = bounds_report(6, 3, 1, 7)
    assert b.cutset == 5 and b.ratio == Fraction(7, 5)
    assert b.min_ell_for_ratio == Fraction(15, 7)  # 3 / 1.4
    assert b.min_ell_ok and b.ell == 3
    assert "min_ell_for_ratio=2.14286" in b.to_text()


def test_bounds_report_flags():
    # ell = 2^6 = 64 with k = 10: 64^2 >= 2^10
    assert bounds_report(12, 10, 6, 64 * 11 // 2).twb_holds
    # t = 1 with many blocks: ell = r is tiny against r^(k/r)
    b = bounds_report(12, 10, 1, 20)
    assert not b.twb_holds
    assert b.gtc_holds is False
    assert bounds_report(4, 3, 1, 3).gtc_holds is None  # r = 1


@pytest.mark.parametrize("n,k,t", GRID)
def test_plan_structure(n, k, t):
    params = make_params(n, k, t, rho=1)
    r, ell = params.r, params.ell
    for i in range(1, n + 1):
        plan = plan_repair(params, i)
        report = repair_report(plan)
        # stage 1: r^(t-1) symbols from every helper
        assert report.stage1_count == (n - 1) * r ** (t - 1)
        assert all(len(syms) == r ** (t - 1) for syms in plan.stage1.values())
        assert sorted(plan.stage1) == [j for j in range(1, n + 1) if j != i]
        reqs = plan.requests()
        assert len(set(reqs)) == len(reqs)
        assert all(j != i and 0 <= s < ell for j, s in reqs)
        assert report.downloaded_symbols <= (1 + Fraction(1, t)) * (n - 1) * r ** (t - 1)
        assert 1 <= report.ratio <= 1 + Fraction(1, t)
        # stage 2 recovers each non-anchored symbol once
        targets = [step.target.flat for step in plan.stage2]
        assert sorted(targets + list(plan.anchored)) == list(range(ell))
        a = wrap(params.block(i).v, t)
        assert all(params.symbol(s).x[a - 1] == params.block(i).u for s in plan.anchored)
        if t == params.s:
            assert report.stage2_count == 0
            assert report.downloaded_symbols == report.cutset


@pytest.mark.parametrize("n,k,t", [(6, 3, 1), (6, 3, 2), (9, 6, 2), (8, 4, 1), (8, 4, 2), (12, 9, 2)])
def test_repair_reproduces_every_block(n, k, t):
    params = sampled(n, k, t)
    rng = np.random.default_rng(n * 10 + t)
    for _ in range(5):
        cw = encode(params, params.spec.random_array(rng, params.k * params.ell))
        for i in range(1, n + 1):
            plan = plan_repair(params, i)
            assert np.array_equal(execute_repair(params, cw.erase([i]), plan), cw.block(i))


def test_zero_codeword_repairs_to_zero():
    params = sampled(6, 3, 1)
    cw = encode(params, np.zeros(params.k * params.ell, dtype=np.int64))
    for i in range(1, 7):
        assert not execute_repair(params, cw, plan_repair(params, i)).any()


class Recorder:
    def __init__(self, block, log, index):
        self.block, self.log, self.index = block, log, index

    def __getitem__(self, sym):
        self.log.append((self.index, sym))
        return self.block[sym]


def test_execute_reads_exactly_the_plan():
    params = sampled(9, 6, 2)
    cw = encode(params, params.spec.random_array(np.random.default_rng(0), params.k * params.ell))
    plan = plan_repair(params, 4)
    log = []
    helpers = {j: Recorder(cw.block(j), log, j) for j in range(1, 10) if j != 4}
    execute_repair(params, helpers, plan)
    assert sorted(log) == sorted(plan.requests())


def test_plan_errors():
    params = sampled(6, 3, 1)
    with pytest.raises(InvalidBlock):
        plan_repair(params, 0)
    with pytest.raises(InvalidBlock):
        plan_repair(params, 7)
    assert plan_repair(params, BlockId(2, 1, 3)) == plan_repair(params, 3)
    cw = encode(params, np.zeros(9, dtype=np.int64))
    plan = plan_repair(params, 1)
    with pytest.raises(PlanMismatch):
        execute_repair(sampled(6, 3, 2), cw, plan)
    survivors = {j: cw.block(j) for j in range(3, 7)}  # block 2 missing
    with pytest.raises(PlanMismatch):
        execute_repair(params, survivors, plan)
    short = {j: cw.block(j)[:1] for j in range(2, 7)}
    with pytest.raises(PlanMismatch):
        execute_repair(params, short, plan)
