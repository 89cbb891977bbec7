"""Two views of a machine-assignment chromosome.

The integer view holds one machine index per gene. The bit view stores each
gene as an unsigned binary number, most significant bit first, in a slot of
``max(1, ceil(log2 M_s))`` bits; slots are concatenated in gene order. Bit
slots are read back modulo ``M_s`` so every bit pattern, and in particular
every complement, is a feasible assignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .model import Instance
from .rng import SplitMix64


def slot_width(m: int) -> int:
    return max(1, (int(m) - 1).bit_length())


@dataclass(frozen=True, eq=False)
class BitLayout:
    """Where each gene lives inside a bit chromosome."""

    bits_per_stage: tuple[int, ...]
    machines: tuple[int, ...]
    num_jobs: int

    @classmethod
    def for_instance(cls, inst: Instance) -> "BitLayout":
        ms = tuple(int(m) for m in inst.machines)
        return cls(tuple(slot_width(m) for m in ms), ms, inst.num_jobs)

    @property
    def num_genes(self) -> int:
        return self.num_jobs * len(self.machines)

    @property
    def length(self) -> int:
        return self.num_jobs * sum(self.bits_per_stage)

    @property
    def is_unit(self) -> bool:
        """True when every slot is one bit, so bits and genes coincide."""
        return all(w == 1 for w in self.bits_per_stage)


def int_to_bits(genes: np.ndarray, layout: BitLayout) -> np.ndarray:
    genes = np.asarray(genes, dtype=np.int64)
    if layout.is_unit:
        return genes.astype(np.uint8)
    out = np.empty(layout.length, dtype=np.uint8)
    S = len(layout.machines)
    pos = 0
    for i, g in enumerate(genes.tolist()):
        w = layout.bits_per_stage[i % S]
        for b in range(w):
            out[pos + b] = (g >> (w - 1 - b)) & 1
        pos += w
    return out


def bits_to_int(bits: np.ndarray, layout: BitLayout) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape != (layout.length,):
        raise ContractError(f"bit chromosome length {bits.shape} != {layout.length}")
    S = len(layout.machines)
    if layout.is_unit:
        # width-1 slots hold 0/1, which is only out of range when M_s == 1
        genes = bits.astype(np.int64)
        return genes % np.tile(np.asarray(layout.machines, dtype=np.int64), layout.num_jobs)
    out = np.empty(layout.num_genes, dtype=np.int64)
    pos = 0
    for i in range(layout.num_genes):
        s = i % S
        w = layout.bits_per_stage[s]
        v = 0
        for b in range(w):
            v = (v << 1) | int(bits[pos + b])
        out[i] = v % layout.machines[s]
        pos += w
    return out


def complement(bits: np.ndarray) -> np.ndarray:
    return np.asarray(bits, dtype=np.uint8) ^ 1


def random_int_chromosome(inst: Instance, rng: SplitMix64) -> np.ndarray:
    """One uniform machine draw per gene, in gene order."""
    ms = inst.machines.tolist()
    S = len(ms)
    return np.array([rng.below(ms[i % S]) for i in range(inst.num_genes)], dtype=np.int64)


def is_feasible(genes: np.ndarray, inst: Instance) -> bool:
    genes = np.asarray(genes)
    if genes.shape != (inst.num_genes,):
        return False
    return bool(((genes >= 0) & (genes < inst.machines_of_gene())).all())
