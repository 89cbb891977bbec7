"""Pure-Python hot kernels.

Reference semantics for ``_ckernels.pyx``; both must produce bit-identical
arrays for the same inputs. Every draw goes through SplitMix64 substreams
keyed by ``(island_seed, generation, slot)``.
"""

from __future__ import annotations

import numpy as np

from .rng import SplitMix64, derive_seed

BACKEND = "python"


class Problem:
    """Flat, read-only view of an instance consumed by the kernels."""

    def __init__(self, machines, proc, release, due, weight, order0):
        self.machines = np.ascontiguousarray(machines, dtype=np.int64)
        self.proc = np.ascontiguousarray(proc, dtype=np.float64)
        self.release = np.ascontiguousarray(release, dtype=np.float64)
        self.due = np.ascontiguousarray(due, dtype=np.float64)
        self.weight = float(weight)
        self.order0 = np.ascontiguousarray(order0, dtype=np.int64)
        # list copies for the Python loops
        self._ms = self.machines.tolist()
        self._p = self.proc.tolist()
        self._r = self.release.tolist()
        self._d = self.due.tolist()
        self._o = self.order0.tolist()


def _objective(pb: Problem, genes) -> float:
    J, S = len(pb._r), len(pb._ms)
    ready = list(pb._r)
    order = pb._o
    p = pb._p
    for s in range(S):
        if s:
            order = sorted(order, key=lambda k: (ready[k], k))
        avail = [0.0] * pb._ms[s]
        for j in order:
            m = genes[j * S + s]
            t = ready[j]
            if avail[m] > t:
                t = avail[m]
            t += p[j][s][m]
            avail[m] = t
            ready[j] = t
    cmax = 0.0
    tard = 0.0
    for j in range(J):
        c = ready[j]
        if c > cmax:
            cmax = c
        if c > pb._d[j]:
            tard += c - pb._d[j]
    return pb.weight * tard + cmax


def _fitness(obj: float, emax: float) -> float:
    f = emax - obj
    return f if f > 0.0 else 0.0


def batch_objective(pb: Problem, genes: np.ndarray, out: np.ndarray) -> None:
    for i in range(genes.shape[0]):
        out[i] = _objective(pb, genes[i].tolist())


def neighbors(c: int, width: int, height: int, radius: int) -> list[int]:
    x, y = c % width, c // width
    out = []
    for r in range(1, radius + 1):
        out.append(y * width + (x - r) % width)
        out.append(y * width + (x + r) % width)
        out.append(((y - r) % height) * width + x)
        out.append(((y + r) % height) * width + x)
    return out


def cellular_generation(
    pb, emax, width, height, radius, seed, gen, xrate, mrate,
    pop, fit, obj, new_pop, new_fit, new_obj, lo, hi,
):
    """Update cells ``lo..hi-1`` of a synchronous generation.

    Reads only ``pop/fit/obj`` (the frozen snapshot) and writes only rows
    ``lo..hi-1`` of ``new_*``.
    """
    L = pop.shape[1]
    S = len(pb._ms)
    ms = pb._ms
    fit_l = fit  # indexed per neighbor only
    for c in range(lo, hi):
        rng = SplitMix64(derive_seed(seed, gen, c))
        nb = neighbors(c, width, height, radius)
        k = len(nb)

        def tournament():
            a = nb[rng.below(k)]
            b = nb[rng.below(k)]
            return a if fit_l[a] >= fit_l[b] else b

        p1 = tournament()
        p2 = tournament()
        tries = 1
        while p2 == p1 and tries < 8:
            p2 = tournament()
            tries += 1
        if p2 == p1:
            for n in nb:
                if n != p1:
                    p2 = n
                    break
        child = pop[p1].tolist()
        if rng.uniform() < xrate:
            a = rng.below(L)
            b = rng.below(L - 1)
            if b >= a:
                b += 1
            c1, c2 = (a, b) if a < b else (b, a)
            child[c1:c2] = pop[p2, c1:c2].tolist()
        for i in range(L):
            if rng.uniform() < mrate:
                child[i] = rng.below(ms[i % S])
        o = _objective(pb, child)
        f = _fitness(o, emax)
        if f > fit[c]:
            new_pop[c] = child
            new_fit[c] = f
            new_obj[c] = o
        else:
            new_pop[c] = pop[c]
            new_fit[c] = fit[c]
            new_obj[c] = obj[c]


def bits_to_genes(bits, widths, ms, num_jobs) -> list[int]:
    S = len(ms)
    out = []
    pos = 0
    for _ in range(num_jobs):
        for s in range(S):
            v = 0
            for _b in range(widths[s]):
                v = (v << 1) | bits[pos]
                pos += 1
            out.append(v % ms[s])
    return out


def pseudo_generation(
    pb, emax, widths, seed, gen, xrate,
    pop, fit, obj, new_pop, new_fit, new_obj, lo, hi,
):
    """Mask crossover on pairs ``lo..hi-1``; rows ``2p`` and ``2p+1`` form pair ``p``."""
    L = pop.shape[1]
    widths = list(widths)
    J = len(pb._r)
    for p in range(lo, hi):
        ia, ib = 2 * p, 2 * p + 1
        rng = SplitMix64(derive_seed(seed, gen, p))
        if rng.uniform() < xrate:
            a = pop[ia].tolist()
            b = pop[ib].tolist()
            c1 = [0] * L
            c2 = [0] * L
            word = 0
            for k in range(L):
                if k & 63 == 0:
                    word = rng.next_u64()
                if (word >> (63 - (k & 63))) & 1:
                    c1[k], c2[k] = a[k], b[k]
                else:
                    c1[k], c2[k] = b[k], a[k]
            for row, child in ((ia, c1), (ib, c2)):
                o = _objective(pb, bits_to_genes(child, widths, pb._ms, J))
                new_pop[row] = child
                new_obj[row] = o
                new_fit[row] = _fitness(o, emax)
        else:
            for row in (ia, ib):
                new_pop[row] = pop[row]
                new_fit[row] = fit[row]
                new_obj[row] = obj[row]
