"""Command line entry point: gen, verify, encode, decode, repair, bench, sim.

Exit codes: 0 success, 2 validation failure, 3 verification failure, 4 I/O error.
Block indices on the command line are 1-based.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from ..codec import Codeword, ErasurePattern, decode_erasures, encode
from ..construction import build_parity_matrix, make_params
from ..errors import (CodeError, InconsistentInput, NotMds, PlanMismatch, RetriesExhausted,
                      SingularMatrix, ValidationError)
from ..mds import failure_bound, field_size_warning, sample_code, verify_mds
from ..repair import bounds_report, execute_repair, plan_repair, repair_report
from . import bench, formats, specfile
from .sim import random_scenario, sim_run

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFY = 3
EXIT_IO = 4


def _load(args):
    return specfile.read_spec(args.spec, verify=not args.skip_verify)


def cmd_gen(args) -> int:
    w = args.w if args.w is not None else args.field_bits
    base = make_params(args.n, args.k, args.t, w=w)
    bound = failure_bound(args.n, args.k, args.t, w)
    print(f"per-draw failure bound C(n,r)*r*ell/(q-1) = {bound:.6g}")
    msg = field_size_warning(args.n, args.k, args.t, w)
    if msg:
        print(f"warning: {msg}", file=sys.stderr)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = sample_code(base, seed=args.seed, max_retries=args.max_retries)
    specfile.write_spec(args.out, params, seed=args.seed)
    print(f"wrote {args.out}: n={params.n} k={params.k} t={params.t} "
          f"ell={params.ell} rho={params.rho:x}")
    return EXIT_OK


def cmd_verify(args) -> int:
    params, _ = specfile.read_spec(args.spec, verify=False)
    report = verify_mds(build_parity_matrix(params))
    print(f"is_mds={str(report.is_mds).lower()}")
    print(f"subsets_checked={report.subsets_checked}")
    if not report.is_mds:
        print("failing_subset=" + ",".join(map(str, report.failing_subset)))
        return EXIT_VERIFY
    return EXIT_OK


def cmd_encode(args) -> int:
    params, _ = _load(args)
    message = formats.message_from_bytes(Path(args.input).read_bytes(), params)
    cw = encode(params, message)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    formats.write_codeword(out / "codeword.epmd", cw)
    for i in range(1, params.n + 1):
        formats.write_block(formats.block_path(out, i), params, cw.blocks[i - 1])
    print(f"wrote {params.n} blocks of {params.ell} symbols to {out}")
    return EXIT_OK


def _read_blocks(params, directory, skip=()):
    blocks = np.zeros((params.n, params.ell), dtype=np.int64)
    missing = []
    for i in range(1, params.n + 1):
        path = formats.block_path(directory, i)
        if i in skip or not path.exists():
            missing.append(i)
        else:
            blocks[i - 1] = formats.read_block(path, params)
    return blocks, missing


def cmd_decode(args) -> int:
    params, _ = _load(args)
    blocks, missing = _read_blocks(params, args.dir)
    if len(missing) > params.r:
        print(f"error: {len(missing)} blocks missing, at most {params.r} can be rebuilt",
              file=sys.stderr)
        return EXIT_VALIDATION
    cw = decode_erasures(params, Codeword(params, blocks), ErasurePattern(missing))
    for i in missing:
        formats.write_block(formats.block_path(args.dir, i), params, cw.blocks[i - 1])
    if args.out:
        Path(args.out).write_bytes(params.spec.to_bytes(cw.message()))
    print("restored=" + ",".join(map(str, missing)))
    return EXIT_OK


def cmd_repair(args) -> int:
    params, _ = _load(args)
    failed = args.failed
    plan = plan_repair(params, failed)
    blocks, missing = _read_blocks(params, args.dir, skip={failed})
    helpers = {i: blocks[i - 1] for i in range(1, params.n + 1) if i not in missing}
    block = execute_repair(params, helpers, plan)
    target = Path(args.out) if args.out else formats.block_path(args.dir, failed)
    formats.write_block(target, params, block)
    report = repair_report(plan)
    sys.stdout.write(report.to_text())
    seen = {line.split("=")[0] for line in report.to_text().splitlines()}
    for line in bounds_report(params.n, params.k, params.t, report).to_text().splitlines():
        if line.split("=")[0] not in seen:
            print(line)
    return EXIT_OK


def cmd_bench(args) -> int:
    grid = bench.parse_grid(args.grid) if args.grid else bench.default_grid()
    rows, skipped = bench.run_bench(grid, w=args.field_bits, seed=args.seed)
    text = bench.to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for s in skipped:
        print(f"note: skipped {s.point}: {s.reason}", file=sys.stderr)
    return EXIT_OK if all(r["bound_ok"] and r["repair_ok"] for r in rows) else EXIT_VERIFY


def cmd_sim(args) -> int:
    params, _ = _load(args)
    if args.scenario:
        scenario = [int(x) for x in args.scenario.split(",") if x]
    elif args.rounds:
        scenario = random_scenario(params.n, args.rounds, args.seed)
    else:
        scenario = None
    summary = sim_run(params, scenario, seed=args.seed)
    sys.stdout.write(summary.to_text())
    return EXIT_OK if summary.final_ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msrlite", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_spec(p):
        p.add_argument("--spec", required=True, help="code spec JSON file")
        p.add_argument("--skip-verify", action="store_true",
                       help="don't re-run MDS verification when loading the spec file")
        return p

    p = sub.add_parser("gen", help="sample rho and write a verified code spec")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("t", type=int)
    p.add_argument("w", type=int, nargs="?", choices=(8, 16, 32),
                   help="field bits, same as --field-bits")
    p.add_argument("--field-bits", type=int, default=16, choices=(8, 16, 32))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-retries", type=int, default=32)
    p.add_argument("--out", default="code.json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check every r-block submatrix for full rank")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_verify)

    p = with_spec(sub.add_parser("encode", help="encode exactly k*ell symbols of input"))
    p.add_argument("input")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_encode)

    p = with_spec(sub.add_parser("decode", help="rebuild missing block files"))
    p.add_argument("dir", help="directory with block_NNN.bin files")
    p.add_argument("--out", help="also write the recovered message here")
    p.set_defaults(func=cmd_decode)

    p = with_spec(sub.add_parser("repair", help="repair one block by transfer"))
    p.add_argument("dir", help="directory with block_NNN.bin files")
    p.add_argument("--failed", type=int, required=True, help="block index, 1-based")
    p.add_argument("--out", help="write the repaired block here instead of into dir")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("bench", help="bandwidth sweep, CSV output")
    p.add_argument("--grid", help='points as "n,k,t;n,k,t"; default n<=12, r in {2,3,4}')
    p.add_argument("--field-bits", type=int, default=16, choices=(8, 16, 32))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = with_spec(sub.add_parser("sim", help="fail and repair nodes in a simulated cluster"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scenario", help="comma-separated node indices, failed one at a time")
    p.add_argument("--rounds", type=int, help="random scenario of this many failures")
    p.set_defaults(func=cmd_sim)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (NotMds, RetriesExhausted, SingularMatrix, InconsistentInput) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValidationError, PlanMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
