"""Brute-force reference simulator, written apart from the package decoder.

Event-driven: each stage pops jobs from a heap keyed by (ready time, job)
and appends the operation to its machine's timeline.
"""

import heapq
import itertools


def simulate(machines, proc, release, due, weight, assignment):
    """Objective of a (J, S) nested-list ``assignment``; plain Python only."""
    n_jobs = len(release)
    ready = {j: release[j] for j in range(n_jobs)}
    for s in range(len(machines)):
        timeline = {m: [] for m in range(machines[s])}
        heap = [(ready[j], j) for j in range(n_jobs)]
        heapq.heapify(heap)
        while heap:
            t, j = heapq.heappop(heap)
            m = assignment[j][s]
            lane = timeline[m]
            begin = t if not lane or lane[-1][1] <= t else lane[-1][1]
            end = begin + proc[j][s][m]
            lane.append((begin, end))
            ready[j] = end
    makespan = max(ready.values())
    late = 0.0
    for j in range(n_jobs):
        if ready[j] > due[j]:
            late += ready[j] - due[j]
    return weight * late + makespan


def all_assignments(machines, n_jobs):
    per_op = [range(machines[s]) for _ in range(n_jobs) for s in range(len(machines))]
    S = len(machines)
    for flat in itertools.product(*per_op):
        yield [list(flat[j * S:(j + 1) * S]) for j in range(n_jobs)]


def instance_args(inst):
    return (inst.machines.tolist(), inst.proc_lists(), inst.release.tolist(), inst.due.tolist(), inst.weight)
