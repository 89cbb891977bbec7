# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; same contract as ``_pykernels``, GIL released."""

from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, free

import numpy as np

BACKEND = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t derive3(uint64_t seed, uint64_t a, uint64_t b) noexcept nogil:
    cdef uint64_t h = seed
    h = mix64(h ^ mix64(a + GOLDEN))
    h = mix64(h ^ mix64(b + GOLDEN))
    return h


cdef inline uint64_t next_u64(uint64_t* st) noexcept nogil:
    st[0] = st[0] + GOLDEN
    return mix64(st[0])


cdef inline double uniform(uint64_t* st) noexcept nogil:
    return <double>(next_u64(st) >> 11) * INV_2_53


cdef inline int64_t below(uint64_t* st, int64_t n) noexcept nogil:
    return <int64_t>(uniform(st) * n)


class Problem:
    """Flat, read-only view of an instance consumed by the kernels."""

    def __init__(self, machines, proc, release, due, weight, order0):
        self.machines = np.ascontiguousarray(machines, dtype=np.int64)
        self.proc = np.ascontiguousarray(proc, dtype=np.float64)
        self.release = np.ascontiguousarray(release, dtype=np.float64)
        self.due = np.ascontiguousarray(due, dtype=np.float64)
        self.weight = float(weight)
        self.order0 = np.ascontiguousarray(order0, dtype=np.int64)


cdef struct Prob:
    int64_t J
    int64_t S
    int64_t M
    const int64_t* ms
    const double* proc
    const double* rel
    const double* due
    const int64_t* order0
    double weight


cdef struct Scratch:
    double* ready
    int64_t* order
    double* avail
    int64_t* genes
    int64_t* child


cdef int scratch_alloc(Scratch* w, Prob* p, int64_t L) noexcept nogil:
    w.ready = <double*>malloc(p.J * sizeof(double))
    w.order = <int64_t*>malloc(p.J * sizeof(int64_t))
    w.avail = <double*>malloc(p.M * sizeof(double))
    w.genes = <int64_t*>malloc(p.J * p.S * sizeof(int64_t))
    w.child = <int64_t*>malloc((L if L > 0 else 1) * sizeof(int64_t))
    if w.ready == NULL or w.order == NULL or w.avail == NULL or w.genes == NULL or w.child == NULL:
        return -1
    return 0


cdef void scratch_free(Scratch* w) noexcept nogil:
    free(w.ready)
    free(w.order)
    free(w.avail)
    free(w.genes)
    free(w.child)


cdef double objective(Prob* p, const int64_t* genes, Scratch* w) noexcept nogil:
    cdef int64_t J = p.J, S = p.S, M = p.M
    cdef int64_t s, j, k, m, i, key_j
    cdef double t, key_t, c, cmax, tard
    for j in range(J):
        w.ready[j] = p.rel[j]
        w.order[j] = p.order0[j]
    for s in range(S):
        if s > 0:
            # insertion sort by (ready, job); previous stage order is nearly sorted
            for i in range(1, J):
                key_j = w.order[i]
                key_t = w.ready[key_j]
                k = i - 1
                while k >= 0 and (w.ready[w.order[k]] > key_t or
                                  (w.ready[w.order[k]] == key_t and w.order[k] > key_j)):
                    w.order[k + 1] = w.order[k]
                    k -= 1
                w.order[k + 1] = key_j
        for m in range(p.ms[s]):
            w.avail[m] = 0.0
        for i in range(J):
            j = w.order[i]
            m = genes[j * S + s]
            t = w.ready[j]
            if w.avail[m] > t:
                t = w.avail[m]
            t = t + p.proc[(j * S + s) * M + m]
            w.avail[m] = t
            w.ready[j] = t
    cmax = 0.0
    tard = 0.0
    for j in range(J):
        c = w.ready[j]
        if c > cmax:
            cmax = c
        if c > p.due[j]:
            tard = tard + (c - p.due[j])
    return p.weight * tard + cmax


cdef inline double fitness_of(double obj, double emax) noexcept nogil:
    cdef double f = emax - obj
    return f if f > 0.0 else 0.0


cdef object _fill(Prob* p, pb):
    cdef const int64_t[::1] ms = pb.machines
    cdef const double[:, :, ::1] proc = pb.proc
    cdef const double[::1] rel = pb.release
    cdef const double[::1] due = pb.due
    cdef const int64_t[::1] o0 = pb.order0
    p.J = proc.shape[0]
    p.S = proc.shape[1]
    p.M = proc.shape[2]
    p.ms = &ms[0]
    p.proc = &proc[0, 0, 0]
    p.rel = &rel[0]
    p.due = &due[0]
    p.order0 = &o0[0]
    p.weight = pb.weight
    # memoryviews must outlive the raw pointers
    return (ms, proc, rel, due, o0)


def batch_objective(pb, const int64_t[:, ::1] genes, double[::1] out):
    cdef Prob p
    cdef Scratch w
    cdef Py_ssize_t i
    keep = _fill(&p, pb)
    if scratch_alloc(&w, &p, 1) != 0:
        scratch_free(&w)
        raise MemoryError()
    with nogil:
        for i in range(genes.shape[0]):
            out[i] = objective(&p, &genes[i, 0], &w)
        scratch_free(&w)


cdef inline int64_t pmod(int64_t a, int64_t n) noexcept nogil:
    cdef int64_t r = a % n
    return r + n if r < 0 else r


def neighbors(int64_t c, int64_t width, int64_t height, int64_t radius):
    cdef int64_t x = c % width, y = c // width, r
    out = []
    for r in range(1, radius + 1):
        out.append(y * width + pmod(x - r, width))
        out.append(y * width + pmod(x + r, width))
        out.append(pmod(y - r, height) * width + x)
        out.append(pmod(y + r, height) * width + x)
    return out


def cellular_generation(
    pb, double emax, int64_t width, int64_t height, int64_t radius,
    uint64_t seed, uint64_t gen, double xrate, double mrate,
    const int64_t[:, ::1] pop, const double[::1] fit, const double[::1] obj,
    int64_t[:, ::1] new_pop, double[::1] new_fit, double[::1] new_obj,
    int64_t lo, int64_t hi,
):
    cdef Prob p
    cdef Scratch w
    cdef int64_t L = pop.shape[1]
    cdef int64_t K = 4 * radius
    cdef int64_t c, x, y, r, k, i, p1, p2, a, b, tries, c1, c2
    cdef uint64_t st
    cdef double o, f
    cdef int64_t* nb
    keep = _fill(&p, pb)
    if L < 2:
        raise ValueError("chromosome needs at least two genes")
    nb = <int64_t*>malloc(K * sizeof(int64_t))
    if nb == NULL:
        raise MemoryError()
    if scratch_alloc(&w, &p, L) != 0:
        free(nb)
        scratch_free(&w)
        raise MemoryError()
    with nogil:
        for c in range(lo, hi):
            st = derive3(seed, gen, <uint64_t>c)
            x = c % width
            y = c // width
            for r in range(1, radius + 1):
                k = 4 * (r - 1)
                nb[k] = y * width + pmod(x - r, width)
                nb[k + 1] = y * width + pmod(x + r, width)
                nb[k + 2] = pmod(y - r, height) * width + x
                nb[k + 3] = pmod(y + r, height) * width + x
            a = nb[below(&st, K)]
            b = nb[below(&st, K)]
            p1 = a if fit[a] >= fit[b] else b
            a = nb[below(&st, K)]
            b = nb[below(&st, K)]
            p2 = a if fit[a] >= fit[b] else b
            tries = 1
            while p2 == p1 and tries < 8:
                a = nb[below(&st, K)]
                b = nb[below(&st, K)]
                p2 = a if fit[a] >= fit[b] else b
                tries += 1
            if p2 == p1:
                for k in range(K):
                    if nb[k] != p1:
                        p2 = nb[k]
                        break
            for i in range(L):
                w.child[i] = pop[p1, i]
            if uniform(&st) < xrate:
                a = below(&st, L)
                b = below(&st, L - 1)
                if b >= a:
                    b += 1
                if a < b:
                    c1 = a
                    c2 = b
                else:
                    c1 = b
                    c2 = a
                for i in range(c1, c2):
                    w.child[i] = pop[p2, i]
            for i in range(L):
                if uniform(&st) < mrate:
                    w.child[i] = below(&st, p.ms[i % p.S])
            o = objective(&p, w.child, &w)
            f = fitness_of(o, emax)
            if f > fit[c]:
                for i in range(L):
                    new_pop[c, i] = w.child[i]
                new_fit[c] = f
                new_obj[c] = o
            else:
                for i in range(L):
                    new_pop[c, i] = pop[c, i]
                new_fit[c] = fit[c]
                new_obj[c] = obj[c]
        free(nb)
        scratch_free(&w)


cdef void bits_to_genes_c(const uint8_t* bits, const int64_t* widths, Prob* p, int64_t* out) noexcept nogil:
    cdef int64_t pos = 0, j, s, b, v, g = 0
    for j in range(p.J):
        for s in range(p.S):
            v = 0
            for b in range(widths[s]):
                v = (v << 1) | bits[pos]
                pos += 1
            out[g] = v % p.ms[s]
            g += 1


def pseudo_generation(
    pb, double emax, widths_in, uint64_t seed, uint64_t gen, double xrate,
    const uint8_t[:, ::1] pop, const double[::1] fit, const double[::1] obj,
    uint8_t[:, ::1] new_pop, double[::1] new_fit, double[::1] new_obj,
    int64_t lo, int64_t hi,
):
    cdef Prob p
    cdef Scratch w
    cdef int64_t L = pop.shape[1]
    cdef int64_t q, k, ia, ib, row
    cdef uint64_t st, word = 0
    cdef double o
    cdef const int64_t[::1] widths = np.ascontiguousarray(widths_in, dtype=np.int64)
    keep = _fill(&p, pb)
    if scratch_alloc(&w, &p, 1) != 0:
        scratch_free(&w)
        raise MemoryError()
    with nogil:
        for q in range(lo, hi):
            ia = 2 * q
            ib = ia + 1
            st = derive3(seed, gen, <uint64_t>q)
            if uniform(&st) < xrate:
                for k in range(L):
                    if (k & 63) == 0:
                        word = next_u64(&st)
                    if (word >> (63 - (k & 63))) & 1:
                        new_pop[ia, k] = pop[ia, k]
                        new_pop[ib, k] = pop[ib, k]
                    else:
                        new_pop[ia, k] = pop[ib, k]
                        new_pop[ib, k] = pop[ia, k]
                for row in range(ia, ib + 1):
                    bits_to_genes_c(&new_pop[row, 0], &widths[0], &p, w.genes)
                    o = objective(&p, w.genes, &w)
                    new_obj[row] = o
                    new_fit[row] = fitness_of(o, emax)
            else:
                for row in range(ia, ib + 1):
                    for k in range(L):
                        new_pop[row, k] = pop[row, k]
                    new_fit[row] = fit[row]
                    new_obj[row] = obj[row]
        scratch_free(&w)
