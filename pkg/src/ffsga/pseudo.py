"""Pseudo GA island over complementary parent pairs.

Pairs start as ``(x, ~x)``. Each generation a pair is, with probability
``crossover_rate``, recombined by a uniform random bit mask and replaced by
its two children; there is no selection and no mutation. Mask crossover of a
complementary pair yields a complementary pair, so every allele stays
present in every pair until an immigrant breaks the symmetry.

Unconditional replacement can drop the best individual, so the island keeps
a one-slot best-so-far archive for reporting.
"""

from __future__ import annotations

from concurrent.futures import Executor

import numpy as np

from . import kernels
from .cellular import chunks, sort_island
from .errors import ConfigError, ContractError
from .genome import BitLayout, bits_to_int, complement, int_to_bits, random_int_chromosome
from .model import Instance
from .rng import SplitMix64, derive_seed


def mask_crossover(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(a & m | b & ~m, b & m | a & ~m)`` on 0/1 arrays."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape or a.shape != np.shape(mask):
        raise ContractError("parents and mask must share one layout")
    m = np.asarray(mask, dtype=bool)
    return np.where(m, a, b).astype(np.uint8), np.where(m, b, a).astype(np.uint8)


def draw_mask(rng: SplitMix64, length: int) -> np.ndarray:
    """Mask bit ``k`` is bit ``63 - k % 64`` of the ``k // 64``-th draw."""
    out = np.empty(length, dtype=np.uint8)
    word = 0
    for k in range(length):
        if k & 63 == 0:
            word = rng.next_u64()
        out[k] = (word >> (63 - (k & 63))) & 1
    return out


def pair_step(a, b, rng: SplitMix64, crossover_rate: float) -> tuple[np.ndarray, np.ndarray]:
    if np.shape(a) != np.shape(b):
        raise ContractError("pair members have different layouts")
    if rng.uniform() < crossover_rate:
        return mask_crossover(a, b, draw_mask(rng, len(a)))
    return np.array(a, dtype=np.uint8), np.array(b, dtype=np.uint8)


class PseudoIsland:
    def __init__(
        self,
        inst: Instance,
        size: int,
        seed: int,
        emax: float,
        crossover_rate: float = 0.75,
        backend=None,
    ) -> None:
        if size < 2 or size % 2:
            raise ConfigError(f"pseudo island size must be even and >= 2, got {size}")
        if not 0.0 <= crossover_rate <= 1.0:
            raise ConfigError("crossover rate must lie in [0, 1]")
        self.inst = inst
        self.size = size
        self.seed = seed
        self.emax = emax
        self.crossover_rate = crossover_rate
        self.layout = BitLayout.for_instance(inst)
        self.widths = np.asarray(self.layout.bits_per_stage, dtype=np.int64)
        self.k = backend or kernels.backend
        self.problem = kernels.make_problem(inst, self.k)
        self.generation = 0

        pop = np.empty((size, self.layout.length), dtype=np.uint8)
        for p in range(size // 2):
            a = int_to_bits(random_int_chromosome(inst, SplitMix64(derive_seed(seed, 0, p))), self.layout)
            pop[2 * p] = a
            pop[2 * p + 1] = complement(a)
        self.pop = pop
        self.obj = np.empty(size)
        self.k.batch_objective(self.problem, self._genes(pop), self.obj)
        self.fit = np.maximum(emax - self.obj, 0.0)
        self.archive_bits = pop[0].copy()
        self.archive_fitness = -1.0
        self.archive_objective = float("inf")
        self._update_archive()

    @property
    def num_pairs(self) -> int:
        return self.size // 2

    def _genes(self, bits: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(np.stack([bits_to_int(b, self.layout) for b in bits]))

    def _update_archive(self, rows=None) -> None:
        idx = np.arange(self.size) if rows is None else np.asarray(rows, dtype=np.int64)
        if idx.size == 0:
            return
        i = int(idx[np.argmin(self.obj[idx])])
        if self.obj[i] < self.archive_objective:
            self.archive_objective = float(self.obj[i])
            self.archive_fitness = float(self.fit[i])
            self.archive_bits = self.pop[i].copy()

    def _run_pairs(self, gen, new_pop, new_fit, new_obj, lo, hi):
        self.k.pseudo_generation(
            self.problem, self.emax, self.widths, self.seed, gen, self.crossover_rate,
            self.pop, self.fit, self.obj, new_pop, new_fit, new_obj, lo, hi,
        )

    def step(self, pool: Executor | None = None, workers: int = 1) -> None:
        gen = self.generation + 1
        new_pop = np.empty_like(self.pop)
        new_fit = np.empty_like(self.fit)
        new_obj = np.empty_like(self.obj)
        spans = chunks(self.num_pairs, workers)
        if pool is None or len(spans) == 1:
            for lo, hi in spans:
                self._run_pairs(gen, new_pop, new_fit, new_obj, lo, hi)
        else:
            futs = [pool.submit(self._run_pairs, gen, new_pop, new_fit, new_obj, lo, hi) for lo, hi in spans]
            for f in futs:
                f.result()
        self.pop, self.fit, self.obj = new_pop, new_fit, new_obj
        self.generation = gen
        self._update_archive()

    def pair_rng(self, pair: int, generation: int | None = None) -> SplitMix64:
        gen = self.generation + 1 if generation is None else generation
        return SplitMix64(derive_seed(self.seed, gen, pair))

    # -- inspection and migration ------------------------------------------

    def ranking(self) -> np.ndarray:
        return sort_island(self.fit)

    def best_fitness(self, source: str = "current") -> float:
        if source == "archive":
            return self.archive_fitness
        return float(self.fit.max())

    def best(self) -> tuple[np.ndarray, float]:
        return bits_to_int(self.archive_bits, self.layout), self.archive_objective

    def export_genes(self, slots) -> np.ndarray:
        return self._genes(self.pop[np.asarray(slots, dtype=np.int64)])

    def import_genes(self, slots, genes: np.ndarray) -> None:
        slots = np.asarray(slots, dtype=np.int64)
        if slots.size == 0:
            return
        genes = np.ascontiguousarray(genes, dtype=np.int64)
        obj = np.empty(len(slots))
        self.k.batch_objective(self.problem, genes, obj)
        self.pop[slots] = np.stack([int_to_bits(g, self.layout) for g in genes])
        self.obj[slots] = obj
        self.fit[slots] = np.maximum(self.emax - obj, 0.0)
        self._update_archive(slots)
