"""Seeded random FFS instances.

Draw order (fixed, so instances reproduce across implementations):

1. ``P[j][s][m] ~ U[1, 5)`` with ``j`` outermost and ``m`` innermost;
2. ``Pbar_j = sum_s mean_m P[j][s][m]`` and ``Pbar = sum_j Pbar_j``;
3. ``R_j ~ U[0, Pbar)`` for each job in order;
4. ``sigma_j ~ U[0, 2)`` for each job in order, ``D_j = R_j + Pbar_j * (1 + sigma_j)``.

All draws come from one SplitMix64 stream seeded with ``seed``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .model import Instance
from .rng import SplitMix64

PROC_LO, PROC_HI = 1.0, 5.0
SIGMA_LO, SIGMA_HI = 0.0, 2.0


@dataclass(frozen=True)
class GenParams:
    num_jobs: int
    num_stages: int
    machines_per_stage: tuple[int, ...] = field(default=())
    weight: float = 100.0
    seed: int = 1
    integer_times: bool = False

    def __post_init__(self) -> None:
        if not self.machines_per_stage:
            object.__setattr__(self, "machines_per_stage", (2,) * self.num_stages)
        else:
            object.__setattr__(self, "machines_per_stage", tuple(int(m) for m in self.machines_per_stage))
        if self.num_jobs < 1:
            raise ContractError("num_jobs must be >= 1")
        if self.num_stages < 2:
            raise ContractError("num_stages must be >= 2")
        if len(self.machines_per_stage) != self.num_stages:
            raise ContractError("machines_per_stage needs one entry per stage")
        if min(self.machines_per_stage) < 1 or max(self.machines_per_stage) < 2:
            raise ContractError("every stage needs a machine and one stage needs two or more")
        if self.weight < 0:
            raise ContractError("weight must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ContractError("seed must fit in 64 bits")


def mean_work(proc: list[list[list[float]]]) -> tuple[list[float], float]:
    """Per-job mean work ``Pbar_j`` and the total ``Pbar``."""
    per_job = []
    for row in proc:
        w = 0.0
        for times in row:
            w += sum(times) / len(times)
        per_job.append(w)
    total = 0.0
    for w in per_job:
        total += w
    return per_job, total


def generate(params: GenParams) -> Instance:
    rng = SplitMix64(params.seed)
    ms = params.machines_per_stage

    def draw(lo: float, hi: float) -> float:
        x = rng.uniform_range(lo, hi)
        # rounding keeps the draw order; only the stored value changes
        return float(round(x)) if params.integer_times else x

    proc = [
        [[draw(PROC_LO, PROC_HI) for _ in range(ms[s])] for s in range(params.num_stages)]
        for _ in range(params.num_jobs)
    ]
    per_job, total = mean_work(proc)
    release = [draw(0.0, total) for _ in range(params.num_jobs)]
    due = []
    for j in range(params.num_jobs):
        sigma = rng.uniform_range(SIGMA_LO, SIGMA_HI)
        due.append(release[j] + per_job[j] * (1.0 + sigma))
    return Instance.from_lists(ms, proc, release, due, params.weight)


def summary(inst: Instance) -> dict[str, float]:
    per_job, total = mean_work(inst.proc_lists())
    return {
        "num_jobs": inst.num_jobs,
        "num_stages": inst.num_stages,
        "mean_work_total": total,
        "mean_work_per_job": total / inst.num_jobs,
        "proc_min": float(min(min(min(t) for t in row) for row in inst.proc_lists())),
        "proc_max": float(max(max(max(t) for t in row) for row in inst.proc_lists())),
        "release_max": float(np.max(inst.release)),
        "due_max": float(np.max(inst.due)),
    }
