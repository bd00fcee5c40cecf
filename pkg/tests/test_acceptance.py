"""Acceptance criteria, one test each. Every test records a PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import contextlib
import math
import sys
import time
from fractions import Fraction

import numpy as np

from msrlite.codec import ErasurePattern, decode_erasures, encode
from msrlite.construction import build_parity_matrix, build_parity_matrix_t1, make_params
from msrlite.errors import RetriesExhausted
from msrlite.field import get_field
from msrlite.mds import sample_code, verify_mds
from msrlite.repair import execute_repair, plan_repair, repair_report

from helpers import GRID, block_subsets, sampled

RESULTS: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str, limit_s: float):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit_s, f"took {elapsed:.2f}s, limit {limit_s}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        RESULTS.append(f"FAIL criterion {number}: {title} ({elapsed:.2f}s) -- {exc}")
        print(RESULTS[-1])
        raise
    RESULTS.append(f"PASS criterion {number}: {title} ({elapsed:.2f}s)")
    print(RESULTS[-1])


# 9 x 18 layout for n=6, k=3, t=1. "1" is a Type I entry, "Li" is lambda_i,
# "Si" is lambda_i squared, "R" is rho, "." is zero.
GOLDEN_6_3_1 = """
1 . . 1 . . 1 . . 1 . . 1 . . 1 . .
. 1 . . 1 . . 1 . . 1 . . 1 . . 1 .
. . 1 . . 1 . . 1 . . 1 . . 1 . . 1
L1 R . L2 R . L3 . . L4 . . L5 . . L6 . .
. L1 . . L2 . . L3 R . L4 R . L5 . . L6 .
. . L1 . . L2 . . L3 . . L4 R . L5 R . L6
S1 . R S2 . R S3 . . S4 . . S5 . . S6 . .
. S1 . . S2 . R S3 . R S4 . . S5 . . S6 .
. . S1 . . S2 . . S3 . . S4 . R S5 . R S6
"""


def test_criterion_1_golden_matrix():
    with criterion(1, "n=6,k=3,t=1 parity-check layout matches the golden table", 1.0):
        spec = get_field(16)
        g = spec.generator
        # odd exponents for lambda, so squares (even exponents) never collide with them
        lambdas = [spec.pow(g, 16 * i + 1) for i in range(1, 7)]
        rho = spec.pow(g, 1001)
        tokens = {1: "1", rho: "R"}
        for i, lam in enumerate(lambdas, start=1):
            tokens[lam] = f"L{i}"
            tokens[spec.mul(lam, lam)] = f"S{i}"
        assert len(tokens) == 14, "coefficient classes must be distinguishable"
        P = build_parity_matrix(make_params(6, 3, 1, rho=rho, lambdas=lambdas))
        got = [" ".join("." if v == 0 else tokens.get(int(v), "?") for v in row) for row in P.data]
        want = GOLDEN_6_3_1.strip().splitlines()
        assert P.shape == (9, 18)
        assert got == want
        assert sum(row.split().count("R") for row in want) == 12


def test_criterion_2_mds_sampling():
    with criterion(2, "(6,3,1) w=16: verify_mds on 20 subsets; >=999/1000 seeds within 5 draws", 10.0):
        base = make_params(6, 3, 1, w=16)
        params = sample_code(base, seed=0)
        report = verify_mds(build_parity_matrix(params))
        assert report.is_mds and report.subsets_checked == 20
        ok = 0
        for seed in range(1000):
            try:
                sample_code(base, seed=seed, max_retries=5)
                ok += 1
            except RetriesExhausted:
                pass
        assert ok >= 999, f"{ok}/1000"
        assert 20 * 9 / 65535 < 0.003


def test_criterion_3_repair_correctness():
    points = [(6, 3, 1), (6, 3, 2), (9, 6, 2), (8, 4, 1), (8, 4, 2)]
    with criterion(3, "repair of every block equals the original and decode_erasures, 100 messages x 5 codes", 60.0):
        for n, k, t in points:
            params = sampled(n, k, t)
            plans = [plan_repair(params, i) for i in range(1, n + 1)]
            rng = np.random.default_rng(1000 + n * 10 + t)
            for _ in range(100):
                cw = encode(params, params.spec.random_array(rng, k * params.ell))
                for i, plan in enumerate(plans, start=1):
                    erased = cw.erase([i])
                    repaired = execute_repair(params, erased, plan)
                    decoded = decode_erasures(params, erased, ErasurePattern([i])).block(i)
                    assert np.array_equal(repaired, cw.block(i)), (n, k, t, i)
                    assert np.array_equal(repaired, decoded), (n, k, t, i)


def test_criterion_4_bandwidth_numbers():
    with criterion(4, "downloads (6,3,1)=7/5, (9,6,2)=30/24, (6,3,2)=15/15", 5.0):
        expected = {(6, 3, 1): (7, 5), (9, 6, 2): (30, 24), (6, 3, 2): (15, 15)}
        for (n, k, t), (bw, cut) in expected.items():
            params = make_params(n, k, t, rho=1)
            reports = [repair_report(plan_repair(params, i)) for i in range(1, n + 1)]
            worst = max(r.downloaded_symbols for r in reports)
            assert worst == bw, (n, k, t, worst)
            assert all(r.cutset == cut for r in reports)
            assert max(r.ratio for r in reports) == Fraction(bw, cut)
            assert max(r.ratio for r in reports) <= 1 + Fraction(1, t)
        r631 = repair_report(plan_repair(make_params(6, 3, 1, rho=1), 1))
        assert r631.stage2_count == (3 - 1) * (2 - 1)


def _sweep():
    for n, k, t in GRID:
        params = make_params(n, k, t, rho=1)
        for i in range(1, n + 1):
            yield params, i, plan_repair(params, i)


def test_criterion_5_ratio_sweep():
    with criterion(5, "1 <= ratio <= 1+1/t for every block over the n<=12 grid", 300.0):
        count = 0
        for params, i, plan in _sweep():
            ratio = repair_report(plan).ratio
            assert 1 <= ratio <= 1 + Fraction(1, params.t), (params.n, params.k, params.t, i, ratio)
            count += 1
        assert count == sum(n for n, _, _ in GRID)


def test_criterion_6_maximal_erasures():
    with criterion(6, "all C(n,r) maximal erasure patterns decode for (6,3,1) and (8,4,1)", 60.0):
        for n, k in ((6, 3), (8, 4)):
            params = sampled(n, k, 1)
            cw = encode(params, params.spec.random_array(np.random.default_rng(n), k * params.ell))
            patterns = block_subsets(n, n - k)
            assert len(patterns) == math.comb(n, n - k)
            for erased in patterns:
                assert decode_erasures(params, cw.erase(erased), ErasurePattern(erased)) == cw


class _RawStore:
    """Helper block that only hands out single stored symbols and logs each read."""

    def __init__(self, block, index, log):
        self.block, self.index, self.log = block, index, log

    def __getitem__(self, sym):
        assert isinstance(sym, int) and 0 <= sym < len(self.block)
        self.log.append((self.index, sym))
        return self.block[sym]


def test_criterion_7_repair_by_transfer():
    with criterion(7, "every transferred item is a verbatim stored symbol, full sweep", 300.0):
        rng = np.random.default_rng(7)
        for params, i, plan in _sweep():
            ell = params.ell
            for req in plan.requests():
                assert type(req) is tuple and len(req) == 2
                block, sym = req
                assert isinstance(block, int) and isinstance(sym, int)
                assert block != i and 1 <= block <= params.n and 0 <= sym < ell
            for step in plan.stage2:
                assert all(len(req) == 2 for req in step.fetch + step.known)
            blocks = params.spec.random_array(rng, (params.n, ell))
            log = []
            helpers = {j: _RawStore(blocks[j - 1], j, log) for j in range(1, params.n + 1) if j != i}
            execute_repair(params, helpers, plan)
            assert sorted(log) == sorted(plan.requests())


def test_criterion_8_t1_builders_agree():
    with criterion(8, "t=1 direct builder and general builder are byte-identical over the grid", 60.0):
        points = [(n, k) for n, k, t in GRID if t == 1]
        assert points
        for n, k in points:
            params = make_params(n, k, 1, rho=0x9E37)
            assert build_parity_matrix(params).data.tobytes() == build_parity_matrix_t1(params).data.tobytes()


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
