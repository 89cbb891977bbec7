"""Flexible flow shop instances, the schedule decoder and objective evaluation.

A chromosome only fixes which machine serves each (job, stage) operation.
The decoder turns that into a timetable with a stage-wise list-scheduling
rule: at the first stage jobs are dispatched in release order, at every later
stage in order of their completion at the previous stage (ties go to the
lower job index), and each operation starts as soon as both the job and its
machine are free.

Gene ``i`` addresses job ``i // S`` at stage ``i % S`` (0-based, job-major).
Some write-ups of this encoding print the stage coordinate as ``i // S`` too;
that cannot be right since both coordinates would coincide.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import ContractError, InstanceFormatError


@dataclass(frozen=True, eq=False)
class Instance:
    """FFS problem data.

    ``proc`` is padded to ``(J, S, max(M_s))``; entries beyond ``M_s`` are
    zero and never read.
    """

    machines: np.ndarray  # (S,) int64
    proc: np.ndarray  # (J, S, Mmax) float64
    release: np.ndarray  # (J,) float64
    due: np.ndarray  # (J,) float64
    weight: float = 100.0

    @property
    def num_jobs(self) -> int:
        return int(self.proc.shape[0])

    @property
    def num_stages(self) -> int:
        return int(self.proc.shape[1])

    @property
    def num_genes(self) -> int:
        return self.num_jobs * self.num_stages

    @classmethod
    def from_lists(
        cls,
        machines_per_stage: Sequence[int],
        proc_time: Sequence[Sequence[Sequence[float]]],
        release: Sequence[float],
        due: Sequence[float],
        weight: float = 100.0,
    ) -> "Instance":
        machines = np.asarray(machines_per_stage, dtype=np.int64)
        J, S = len(proc_time), len(machines)
        if J < 1:
            raise ContractError("num_jobs must be >= 1")
        if S < 1:
            raise ContractError("num_stages must be >= 1")
        mmax = int(machines.max())
        proc = np.zeros((J, S, mmax), dtype=np.float64)
        for j, row in enumerate(proc_time):
            if len(row) != S:
                raise ContractError(f"proc_time[{j}] has {len(row)} stages, expected {S}")
            for s, times in enumerate(row):
                if len(times) != machines[s]:
                    raise ContractError(
                        f"proc_time[{j}][{s}] has {len(times)} machines, expected {machines[s]}"
                    )
                proc[j, s, : machines[s]] = times
        inst = cls(
            machines=machines,
            proc=proc,
            release=np.asarray(release, dtype=np.float64),
            due=np.asarray(due, dtype=np.float64),
            weight=float(weight),
        )
        inst.validate()
        return inst

    def validate(self) -> None:
        J, S = self.num_jobs, self.num_stages
        m = self.machines
        if J < 1:
            raise ContractError("num_jobs must be >= 1")
        if S < 2:
            raise ContractError("num_stages must be >= 2")
        if m.shape != (S,) or (m < 1).any():
            raise ContractError("every stage needs at least one machine")
        if not (m >= 2).any():
            raise ContractError("at least one stage must have two or more machines")
        if self.release.shape != (J,) or self.due.shape != (J,):
            raise ContractError("release and due must have one entry per job")
        for s in range(S):
            if not (self.proc[:, s, : m[s]] > 0).all():
                raise ContractError(f"processing times at stage {s} must be > 0")
        if (self.release < 0).any():
            raise ContractError("release times must be >= 0")
        if (self.due < self.release).any():
            raise ContractError("due dates must be >= release times")
        if not self.weight >= 0:
            raise ContractError("weight must be >= 0")

    def proc_lists(self) -> list[list[list[float]]]:
        return [
            [self.proc[j, s, : self.machines[s]].tolist() for s in range(self.num_stages)]
            for j in range(self.num_jobs)
        ]

    def stage_of_gene(self) -> np.ndarray:
        return np.tile(np.arange(self.num_stages, dtype=np.int64), self.num_jobs)

    def machines_of_gene(self) -> np.ndarray:
        """M_s for the stage of every gene, in gene order."""
        return np.tile(self.machines, self.num_jobs)


@dataclass(frozen=True, eq=False)
class Schedule:
    machine: np.ndarray  # (J, S) int64
    start: np.ndarray  # (J, S) float64
    completion: np.ndarray  # (J, S) float64


@dataclass(frozen=True)
class ObjectiveReport:
    makespan: float
    total_tardiness: float
    objective: float
    fitness: float
    emax_used: float


def gene_index_map(i: int, num_stages: int, num_jobs: int | None = None) -> tuple[int, int]:
    """Return ``(job, stage)`` addressed by gene ``i``."""
    if i < 0 or (num_jobs is not None and i >= num_jobs * num_stages):
        raise ContractError(f"gene index {i} out of range")
    return i // num_stages, i % num_stages


def _as_assignment(inst: Instance, assignment: Any) -> np.ndarray:
    a = np.asarray(assignment, dtype=np.int64)
    if a.ndim == 1:
        if a.size != inst.num_genes:
            raise ContractError(f"expected {inst.num_genes} genes, got {a.size}")
        a = a.reshape(inst.num_jobs, inst.num_stages)
    if a.shape != (inst.num_jobs, inst.num_stages):
        raise ContractError(f"assignment shape {a.shape} does not match instance")
    if (a < 0).any() or (a >= inst.machines[None, :]).any():
        raise ContractError("machine index out of range for its stage")
    return a


def decode(inst: Instance, assignment: Any) -> Schedule:
    """Build the list-scheduled timetable for a machine assignment.

    ``assignment`` is either a flat gene array of length ``J*S`` or a
    ``(J, S)`` array of machine indices.
    """
    a = _as_assignment(inst, assignment)
    J, S = inst.num_jobs, inst.num_stages
    start = np.zeros((J, S))
    done = np.zeros((J, S))
    ready = [float(r) for r in inst.release]
    for s in range(S):
        avail = [0.0] * int(inst.machines[s])
        for j in sorted(range(J), key=lambda k: (ready[k], k)):
            m = int(a[j, s])
            t0 = max(ready[j], avail[m])
            t1 = t0 + float(inst.proc[j, s, m])
            start[j, s] = t0
            done[j, s] = t1
            avail[m] = t1
            ready[j] = t1
    return Schedule(machine=a.copy(), start=start, completion=done)


def evaluate(inst: Instance, sched: Schedule, emax: float) -> ObjectiveReport:
    if emax < 0:
        raise ContractError("emax must be >= 0")
    last = sched.completion[:, -1]
    cmax = float(last.max())
    tardiness = 0.0
    for c, d in zip(last.tolist(), inst.due.tolist()):
        if c > d:
            tardiness += c - d
    objective = inst.weight * tardiness + cmax
    return ObjectiveReport(
        makespan=cmax,
        total_tardiness=tardiness,
        objective=objective,
        fitness=max(emax - objective, 0.0),
        emax_used=emax,
    )


def estimate_emax(inst: Instance) -> float:
    """Objective upper bound over every schedule the decoder can emit.

    ``H = max(R) + sum of the slowest machine time of every operation``
    bounds all completion times, so ``WT * sum(max(0, H - D_j)) + H`` bounds
    the objective and every decodable chromosome gets positive fitness.
    """
    horizon_work = 0.0
    for j in range(inst.num_jobs):
        for s in range(inst.num_stages):
            horizon_work += float(inst.proc[j, s, : inst.machines[s]].max())
    h = float(inst.release.max()) + horizon_work
    late = 0.0
    for d in inst.due.tolist():
        if h > d:
            late += h - d
    return inst.weight * late + h


def sample_emax(inst: Instance, samples: int = 512, seed: int = 0) -> float:
    """Worst objective over ``samples`` uniformly random assignments.

    An estimate rather than a bound: later individuals that are worse than
    every sampled one get fitness 0. Its scale tracks real objective values,
    unlike :func:`estimate_emax`, whose bound can exceed typical objectives
    by orders of magnitude and flatten fitness ratios to 1.
    """
    from . import kernels
    from .genome import random_int_chromosome
    from .rng import SplitMix64, derive_seed

    genes = np.stack(
        [random_int_chromosome(inst, SplitMix64(derive_seed(seed, k))) for k in range(samples)]
    )
    obj = np.empty(samples)
    kernels.backend.batch_objective(kernels.make_problem(inst), genes, obj)
    return float(obj.max())


# -- JSON ---------------------------------------------------------------------

_KEYS = ("num_jobs", "num_stages", "machines_per_stage", "proc_time", "release", "due", "weight")


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    return {
        "num_jobs": inst.num_jobs,
        "num_stages": inst.num_stages,
        "machines_per_stage": inst.machines.tolist(),
        "proc_time": inst.proc_lists(),
        "release": inst.release.tolist(),
        "due": inst.due.tolist(),
        "weight": inst.weight,
    }


def _number_list(doc: dict, key: str, n: int) -> list[float]:
    v = doc[key]
    if not isinstance(v, list) or len(v) != n:
        raise InstanceFormatError(key, f"expected a list of {n} numbers")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        raise InstanceFormatError(key, "entries must be numbers")
    if not all(math.isfinite(x) for x in v):
        raise InstanceFormatError(key, "entries must be finite")
    return [float(x) for x in v]


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("<root>", "expected a JSON object")
    for key in _KEYS:
        if key not in doc:
            raise InstanceFormatError(key, "missing")
    J, S = doc["num_jobs"], doc["num_stages"]
    for key in ("num_jobs", "num_stages"):
        if not isinstance(doc[key], int) or isinstance(doc[key], bool) or doc[key] < 1:
            raise InstanceFormatError(key, "expected a positive integer")
    machines = doc["machines_per_stage"]
    if not isinstance(machines, list) or len(machines) != S:
        raise InstanceFormatError("machines_per_stage", f"expected {S} integers")
    if not all(isinstance(m, int) and not isinstance(m, bool) and m >= 1 for m in machines):
        raise InstanceFormatError("machines_per_stage", "entries must be positive integers")
    proc = doc["proc_time"]
    if not isinstance(proc, list) or len(proc) != J:
        raise InstanceFormatError("proc_time", f"expected {J} job rows")
    for j, row in enumerate(proc):
        if not isinstance(row, list) or len(row) != S:
            raise InstanceFormatError("proc_time", f"row {j} must list {S} stages")
        for s, times in enumerate(row):
            if not isinstance(times, list) or len(times) != machines[s]:
                raise InstanceFormatError("proc_time", f"[{j}][{s}] must list {machines[s]} times")
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in times):
                raise InstanceFormatError("proc_time", f"[{j}][{s}] entries must be numbers")
    release = _number_list(doc, "release", J)
    due = _number_list(doc, "due", J)
    weight = doc["weight"]
    if not isinstance(weight, (int, float)) or isinstance(weight, bool):
        raise InstanceFormatError("weight", "expected a number")
    try:
        return Instance.from_lists(machines, proc, release, due, weight)
    except ContractError as exc:
        raise InstanceFormatError("<instance>", str(exc)) from None


def save_instance(inst: Instance, path: str | Path) -> None:
    text = json.dumps(instance_to_dict(inst), indent=1)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def load_instance(path: str | Path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("<json>", f"{path}: {exc}") from None
    return instance_from_dict(doc)
