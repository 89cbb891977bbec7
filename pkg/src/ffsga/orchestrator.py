"""End-to-end runs of the dual island GA and its single-island baselines.

Between migration rendezvous the two islands share nothing mutable, so each
evolves a whole segment of generations on its own thread; the compiled
kernels release the GIL, which lets the islands overlap. At each rendezvous
(every ``gap`` generations, never at the final one) both threads have joined
and migration runs alone with exclusive access to both islands.

Island seeds are ``derive_seed(seed, 0)`` (cellular) and
``derive_seed(seed, 1)`` (pseudo) in every mode, so a baseline uses the same
stream as the matching island of a dual run.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels, migration
from .cellular import CellularIsland, grid_shape
from .errors import ConfigError
from .model import Instance, estimate_emax, sample_emax
from .pseudo import PseudoIsland
from .rng import derive_seed

MODES = ("dual", "cellular", "pseudo")


@dataclass(frozen=True)
class RunConfig:
    population: int = 512
    generations: int = 2000
    gap: int = 500
    theta: float = 1.0
    cell_crossover: float = 1.0
    cell_mutation: float = 0.05
    pseudo_crossover: float = 0.75
    mode: str = "dual"
    seed: int = 1
    radius: int = 1
    fit_b_source: str = "current"
    emax: str = "sample"
    workers: int = 1

    def island_sizes(self) -> tuple[int, int]:
        if self.mode == "dual":
            return self.population // 2, self.population // 2
        if self.mode == "cellular":
            return self.population, 0
        return 0, self.population

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.generations < 1:
            raise ConfigError("generations must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.radius < 1:
            raise ConfigError("radius must be >= 1")
        if self.emax not in ("sample", "bound"):
            raise ConfigError("emax must be 'sample' or 'bound'")
        if self.fit_b_source not in ("current", "archive"):
            raise ConfigError("fit_b_source must be 'current' or 'archive'")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        migration.MigrationPolicy(self.theta, self.gap)
        if self.mode == "dual" and self.population % 4:
            raise ConfigError("dual mode needs a population divisible by 4 (two islands of pairs)")
        a, b = self.island_sizes()
        if b and b % 2:
            raise ConfigError("pseudo island size must be even")
        if a:
            w, h = grid_shape(a)
            if h < 2 * self.radius + 1:
                raise ConfigError(f"cellular island of {a} has no near-square grid (best is {w}x{h})")
        for name in ("cell_crossover", "cell_mutation", "pseudo_crossover"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")

    def deterministic_dict(self) -> dict:
        """Fields that influence results (``workers`` does not)."""
        d = asdict(self)
        d.pop("workers")
        return d


@dataclass
class RunResult:
    best_objective: float
    best_fitness: float
    best_chromosome: list[int]
    emax: float
    trace_a: np.ndarray
    trace_b: np.ndarray
    trace: np.ndarray
    migrations: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def migration_generations(self) -> set[int]:
        return {m["generation"] for m in self.migrations}


def rendezvous_points(generations: int, gap: int) -> list[int]:
    """Generations after which the migration policy runs."""
    return list(range(gap, generations, gap))


def _evolve(island, start: int, stop: int, trace: np.ndarray, pool, workers: int) -> None:
    for g in range(start, stop):
        island.step(pool, workers)
        trace[g] = island.best()[1]


class _Run:
    def __init__(self, config: RunConfig, inst: Instance, backend=None) -> None:
        config.validate()
        self.config = config
        self.inst = inst
        self.emax = sample_emax(inst) if config.emax == "sample" else estimate_emax(inst)
        size_a, size_b = config.island_sizes()
        k = backend or kernels.backend
        self.a = self.b = None
        if size_a:
            self.a = CellularIsland(
                inst, size_a, derive_seed(config.seed, 0), self.emax,
                config.cell_crossover, config.cell_mutation, config.radius, backend=k,
            )
        if size_b:
            self.b = PseudoIsland(inst, size_b, derive_seed(config.seed, 1), self.emax, config.pseudo_crossover, backend=k)
        n = config.generations
        self.trace_a = np.full(n, np.nan)
        self.trace_b = np.full(n, np.nan)
        self.migrations: list[dict] = []
        self.policy = migration.MigrationPolicy(config.theta, config.gap)

    def islands(self):
        return [(isl, tr) for isl, tr in ((self.a, self.trace_a), (self.b, self.trace_b)) if isl is not None]

    def migrate(self, generation: int) -> None:
        a, b = self.a, self.b
        fit_a = a.best_fitness()
        fit_b = b.best_fitness(self.config.fit_b_source)
        d = migration.decide(fit_a, fit_b, self.policy, a.size)
        if d.direction == migration.NONE:
            return
        if d.direction == migration.A_TO_B:
            migration.execute(a, b, d.k)
        else:
            migration.execute(b, a, d.k)
        self.migrations.append({"generation": generation, **d.as_dict()})

    def segments(self) -> list[tuple[int, int]]:
        pts = [0] + (rendezvous_points(self.config.generations, self.config.gap) if self.a and self.b else [])
        pts.append(self.config.generations)
        return list(zip(pts, pts[1:]))

    def result(self, timings: dict[str, float]) -> RunResult:
        best = None
        for isl, _ in self.islands():
            genes, obj = isl.best()
            if best is None or obj < best[1]:
                best = (genes, obj)
        traces = [tr for _, tr in self.islands()]
        combined = np.minimum.accumulate(np.minimum.reduce(traces))
        return RunResult(
            best_objective=float(best[1]),
            best_fitness=max(self.emax - float(best[1]), 0.0),
            best_chromosome=[int(g) for g in best[0]],
            emax=self.emax,
            trace_a=self.trace_a,
            trace_b=self.trace_b,
            trace=combined,
            migrations=self.migrations,
            timings=timings,
        )


def run(config: RunConfig, inst: Instance, backend=None) -> RunResult:
    """Run with the islands on concurrent threads and ``config.workers``
    inner workers per island."""
    t0 = time.perf_counter()
    r = _Run(config, inst, backend)
    t1 = time.perf_counter()
    evolve_t = migrate_t = 0.0
    inner = config.workers
    pools = [ThreadPoolExecutor(inner) if inner > 1 else None for _ in r.islands()]
    try:
        with ThreadPoolExecutor(max_workers=2) as outer:
            for start, stop in r.segments():
                ts = time.perf_counter()
                futs = [
                    outer.submit(_evolve, isl, start, stop, tr, pool, inner)
                    for (isl, tr), pool in zip(r.islands(), pools)
                ]
                for f in futs:
                    f.result()
                tm = time.perf_counter()
                evolve_t += tm - ts
                if stop < config.generations:
                    r.migrate(stop)
                migrate_t += time.perf_counter() - tm
    finally:
        for p in pools:
            if p is not None:
                p.shutdown()
    t2 = time.perf_counter()
    return r.result({"init": t1 - t0, "evolve": evolve_t, "migrate": migrate_t, "total": t2 - t0})


def run_serialized(config: RunConfig, inst: Instance, backend=None) -> RunResult:
    """Same semantics as :func:`run`, islands advanced one after the other
    on the calling thread."""
    t0 = time.perf_counter()
    r = _Run(config, inst, backend)
    t1 = time.perf_counter()
    evolve_t = migrate_t = 0.0
    for start, stop in r.segments():
        ts = time.perf_counter()
        for isl, tr in r.islands():
            _evolve(isl, start, stop, tr, None, 1)
        tm = time.perf_counter()
        evolve_t += tm - ts
        if stop < config.generations:
            r.migrate(stop)
        migrate_t += time.perf_counter() - tm
    t2 = time.perf_counter()
    return r.result({"init": t1 - t0, "evolve": evolve_t, "migrate": migrate_t, "total": t2 - t0})
