"""Compare the compiled and pure-Python step kernels on the same programs.

    python3 benchmarks/bench_kernel.py [--steps N] [--contracts K]

Each program runs the same random trace on both kernels; verdicts are
checked equal before timings are reported.
"""

from __future__ import annotations

import argparse
import random
import time
from pathlib import Path

from c2o.codegen import TypeConfig
from c2o.frontend import parse
from c2o.fuzz import random_contract
from c2o.harness.diff import random_steps
from c2o.interp import KERNEL, Machine
from c2o.pipeline import compile_contract

ROOT = Path(__file__).resolve().parents[1]


def programs(k: int):
    yield "bscu COM", parse((ROOT / "corpus/bscu/com.agc").read_text())
    for i in range(k):
        yield f"fuzz {i}", random_contract(i)


def timed(machine: Machine, steps, repeat: int) -> tuple[float, list]:
    best = float("inf")
    for _ in range(repeat):
        machine.reset()
        t = time.perf_counter()
        res = machine.execute(steps)
        best = min(best, time.perf_counter() - t)
    return best, res.verdicts


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--contracts", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if KERNEL != "cython":
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    cfg = TypeConfig()
    print(f"{'program':<12} {'instrs':>7} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    total_py = total_cy = 0.0
    for name, contract in programs(args.contracts):
        prog = compile_contract(contract, cfg).program
        steps = random_steps(contract, random.Random(name), args.steps, {}, cfg)
        py, vp = timed(Machine(prog, kernel="python"), steps, args.repeat)
        cy, vc = timed(Machine(prog, kernel="cython"), steps, args.repeat)
        assert vp == vc, f"kernels disagree on {name}"
        total_py += py
        total_cy += cy
        n = len(Machine(prog).code.instrs)
        print(f"{name:<12} {n:>7} {py:>10.3f} {cy:>10.3f} {py / cy:>7.1f}x")
    print(f"{'total':<12} {'':>7} {total_py:>10.3f} {total_cy:>10.3f} "
          f"{total_py / total_cy:>7.1f}x")


if __name__ == "__main__":
    main()
