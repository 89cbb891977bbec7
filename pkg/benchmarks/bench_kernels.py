"""Compare the compiled and pure-Python kernels.

Times batch objective evaluation (decode plus evaluate) and one generation
of each island on a full-scale instance, then prints a table and writes
bench_kernels.csv next to this script.

    python3 benchmarks/bench_kernels.py [--jobs 300] [--population 512] [--repeat 3]
"""

import argparse
import csv
import time
from pathlib import Path

import numpy as np

from ffsga import _pykernels, kernels
from ffsga.cellular import CellularIsland
from ffsga.genome import random_int_chromosome
from ffsga.instance_gen import GenParams, generate
from ffsga.model import sample_emax
from ffsga.pseudo import PseudoIsland
from ffsga.rng import SplitMix64


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(backend, inst, population, repeat):
    pb = kernels.make_problem(inst, backend)
    genes = np.stack([random_int_chromosome(inst, SplitMix64(i)) for i in range(population)])
    out = np.empty(population)
    emax = sample_emax(inst)
    cell = CellularIsland(inst, population, 1, emax, backend=backend)
    pseudo = PseudoIsland(inst, population, 2, emax, backend=backend)
    return {
        "objective_batch": best_of(lambda: backend.batch_objective(pb, genes, out), repeat),
        "cellular_generation": best_of(cell.step, repeat),
        "pseudo_generation": best_of(pseudo.step, repeat),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=300)
    ap.add_argument("--population", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    inst = generate(GenParams(args.jobs, 4, seed=1))
    compiled = kernels.compiled()
    if compiled is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    fast = bench(compiled, inst, args.population, args.repeat)
    slow = bench(_pykernels, inst, args.population, 1)

    rows = []
    print(f"{'kernel':<22}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for name in fast:
        speedup = slow[name] / fast[name]
        rows.append([name, f"{fast[name]:.6f}", f"{slow[name]:.6f}", f"{speedup:.1f}"])
        print(f"{name:<22}{fast[name]:>12.4f}{slow[name]:>12.4f}{speedup:>10.1f}")
    per_eval = fast["objective_batch"] / args.population
    print(f"compiled decode+evaluate: {1 / per_eval:,.0f} chromosomes/s")

    path = Path(__file__).with_name("bench_kernels.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kernel", "compiled_seconds", "python_seconds", "speedup"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
