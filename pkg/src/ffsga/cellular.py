"""Cellular GA island on a 2-D torus.

Each cell mates only inside its von Neumann neighbourhood (the centre is not
a candidate parent): two binary tournaments pick distinct parents, two-point
crossover yields one child, per-gene mutation resamples the machine, and the
child replaces the cell only if its fitness is strictly higher. Generations
are synchronous: every cell reads the previous generation and writes its own
slot of the next one, so chunks of cells can run on any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import Executor

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError
from .genome import random_int_chromosome
from .model import Instance
from .rng import SplitMix64, derive_seed


def grid_shape(n: int) -> tuple[int, int]:
    """Most square ``(width, height)`` with ``width * height == n``, ``width >= height``."""
    h = int(math.isqrt(n))
    while n % h:
        h -= 1
    return n // h, h


def neighborhood(pos: tuple[int, int], width: int, height: int, radius: int = 1) -> list[tuple[int, int]]:
    """Toroidal NEWS neighbours of ``(x, y)``; ``radius`` extends each arm."""
    x, y = pos
    if not (0 <= x < width and 0 <= y < height):
        raise ContractError(f"{pos} is off the {width}x{height} grid")
    out = []
    for r in range(1, radius + 1):
        out += [((x - r) % width, y), ((x + r) % width, y), (x, (y - r) % height), (x, (y + r) % height)]
    return out


def sort_island(fitness) -> np.ndarray:
    """Indices by fitness, best first; equal fitness keeps index order."""
    f = np.asarray(fitness, dtype=np.float64)
    return np.lexsort((np.arange(f.size), -f))


def chunks(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    edges = [n * i // parts for i in range(parts + 1)]
    return [(a, b) for a, b in zip(edges, edges[1:]) if b > a]


class CellularIsland:
    def __init__(
        self,
        inst: Instance,
        size: int,
        seed: int,
        emax: float,
        crossover_rate: float = 1.0,
        mutation_rate: float = 0.05,
        radius: int = 1,
        shape: tuple[int, int] | None = None,
        backend=None,
    ) -> None:
        self.width, self.height = shape or grid_shape(size)
        if self.width * self.height != size:
            raise ConfigError(f"grid {self.width}x{self.height} does not hold {size} cells")
        if min(self.width, self.height) < 2 * radius + 1:
            raise ConfigError(
                f"cellular island of {size} has no usable near-square grid "
                f"({self.width}x{self.height}) for neighbourhood radius {radius}"
            )
        if not (0.0 <= crossover_rate <= 1.0 and 0.0 <= mutation_rate <= 1.0):
            raise ConfigError("rates must lie in [0, 1]")
        self.inst = inst
        self.size = size
        self.seed = seed
        self.emax = emax
        self.crossover_rate = crossover_rate
        self.mutation_rate = mutation_rate
        self.radius = radius
        self.k = backend or kernels.backend
        self.problem = kernels.make_problem(inst, self.k)
        self.generation = 0

        pop = np.empty((size, inst.num_genes), dtype=np.int64)
        for c in range(size):
            pop[c] = random_int_chromosome(inst, SplitMix64(derive_seed(seed, 0, c)))
        self.pop = pop
        self.obj = np.empty(size)
        self.k.batch_objective(self.problem, pop, self.obj)
        self.fit = np.maximum(emax - self.obj, 0.0)

    # -- evolution ----------------------------------------------------------

    def _run_cells(self, gen, new_pop, new_fit, new_obj, lo, hi):
        self.k.cellular_generation(
            self.problem, self.emax, self.width, self.height, self.radius,
            self.seed, gen, self.crossover_rate, self.mutation_rate,
            self.pop, self.fit, self.obj, new_pop, new_fit, new_obj, lo, hi,
        )

    def step(self, pool: Executor | None = None, workers: int = 1) -> None:
        """Advance one synchronous generation."""
        gen = self.generation + 1
        new_pop = np.empty_like(self.pop)
        new_fit = np.empty_like(self.fit)
        new_obj = np.empty_like(self.obj)
        spans = chunks(self.size, workers)
        if pool is None or len(spans) == 1:
            for lo, hi in spans:
                self._run_cells(gen, new_pop, new_fit, new_obj, lo, hi)
        else:
            futs = [pool.submit(self._run_cells, gen, new_pop, new_fit, new_obj, lo, hi) for lo, hi in spans]
            for f in futs:
                f.result()  # generation barrier
        self.pop, self.fit, self.obj = new_pop, new_fit, new_obj
        self.generation = gen

    def cell_step(self, pos: tuple[int, int]) -> tuple[np.ndarray, float]:
        """Chromosome and fitness the cell at ``pos`` would hold next generation."""
        x, y = pos
        c = y * self.width + x
        new_pop = self.pop.copy()
        new_fit = self.fit.copy()
        new_obj = self.obj.copy()
        self._run_cells(self.generation + 1, new_pop, new_fit, new_obj, c, c + 1)
        return new_pop[c], float(new_fit[c])

    # -- inspection and migration ------------------------------------------

    def ranking(self) -> np.ndarray:
        return sort_island(self.fit)

    def best_fitness(self) -> float:
        return float(self.fit.max())

    def best(self) -> tuple[np.ndarray, float]:
        i = int(np.argmin(self.obj))
        return self.pop[i].copy(), float(self.obj[i])

    def export_genes(self, slots) -> np.ndarray:
        return self.pop[np.asarray(slots, dtype=np.int64)].copy()

    def import_genes(self, slots, genes: np.ndarray) -> None:
        slots = np.asarray(slots, dtype=np.int64)
        if slots.size == 0:
            return
        genes = np.ascontiguousarray(genes, dtype=np.int64)
        obj = np.empty(len(slots))
        self.k.batch_objective(self.problem, genes, obj)
        self.pop[slots] = genes
        self.obj[slots] = obj
        self.fit[slots] = np.maximum(self.emax - obj, 0.0)
