from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffsga.errors import ConfigError, ContractError
from ffsga.genome import bits_to_int, is_feasible
from ffsga.model import decode, estimate_emax, evaluate
from ffsga.pseudo import PseudoIsland, draw_mask, mask_crossover, pair_step
from ffsga.rng import SplitMix64


def make(inst, size=32, seed=9, backend=None, **kw):
    return PseudoIsland(inst, size, seed, estimate_emax(inst), backend=backend, **kw)


def bits(s):
    return np.array([int(c) for c in s], dtype=np.uint8)


class TestMaskCrossover:
    def test_example(self):
        c1, c2 = mask_crossover(bits("1010"), bits("0101"), bits("1100"))
        assert c1.tolist() == bits("1001").tolist()
        assert c2.tolist() == bits("0110").tolist()

    def test_shape_mismatch(self):
        with pytest.raises(ContractError):
            mask_crossover(bits("10"), bits("101"), bits("11"))

    @settings(max_examples=200)
    @given(st.lists(st.integers(0, 1), min_size=1, max_size=200), st.integers(0, 2**64 - 1))
    def test_children_of_complements_are_complements(self, a, seed):
        a = np.array(a, dtype=np.uint8)
        c1, c2 = mask_crossover(a, 1 - a, draw_mask(SplitMix64(seed), a.size))
        assert ((c1 ^ c2) == 1).all()

    def test_complementarity_under_many_masks(self):
        rng = SplitMix64(3)
        a = draw_mask(rng, 97)
        b = 1 - a
        for _ in range(10_000):
            a, b = mask_crossover(a, b, draw_mask(rng, 97))
            assert ((a ^ b) == 1).all()

    def test_mask_bit_order(self):
        word = SplitMix64(5).next_u64()
        m = draw_mask(SplitMix64(5), 64)
        assert int("".join(map(str, m)), 2) == word


class TestPairStep:
    def test_rate_zero_is_identity(self):
        a, b = bits("1100"), bits("0011")
        c1, c2 = pair_step(a, b, SplitMix64(1), 0.0)
        assert c1.tolist() == a.tolist() and c2.tolist() == b.tolist()

    def test_matches_island_generation(self, small_instance, backend):
        isl = make(small_instance, backend=backend)
        expected = [pair_step(isl.pop[2 * p], isl.pop[2 * p + 1], isl.pair_rng(p), 0.75)
                    for p in range(isl.num_pairs)]
        isl.step()
        for p, (c1, c2) in enumerate(expected):
            assert isl.pop[2 * p].tolist() == c1.tolist()
            assert isl.pop[2 * p + 1].tolist() == c2.tolist()


class TestIsland:
    def test_odd_size_rejected(self, small_instance):
        with pytest.raises(ConfigError):
            make(small_instance, size=7)

    def test_initial_pairs_complementary(self, medium_instance):
        isl = make(medium_instance)
        for p in range(isl.num_pairs):
            assert ((isl.pop[2 * p] ^ isl.pop[2 * p + 1]) == 1).all()

    def test_pairs_stay_complementary_and_feasible(self, medium_instance):
        isl = make(medium_instance)
        for _ in range(40):
            isl.step()
        for p in range(isl.num_pairs):
            assert ((isl.pop[2 * p] ^ isl.pop[2 * p + 1]) == 1).all()
        assert all(is_feasible(bits_to_int(b, isl.layout), medium_instance) for b in isl.pop)

    def test_no_crossover_keeps_population(self, medium_instance):
        isl = make(medium_instance, crossover_rate=0.0)
        pop, fit = isl.pop.copy(), isl.fit.copy()
        for _ in range(5):
            isl.step()
        assert np.array_equal(pop, isl.pop) and np.array_equal(fit, isl.fit)

    def test_archive_tracks_best_ever(self, medium_instance):
        isl = make(medium_instance)
        shadow = isl.obj.min()
        for _ in range(60):
            isl.step()
            shadow = min(shadow, isl.obj.min())
            assert isl.archive_objective == shadow
            genes, obj = isl.best()
            assert evaluate(medium_instance, decode(medium_instance, genes), 0.0).objective == obj
        assert isl.best_fitness("archive") >= isl.best_fitness("current")

    def test_fitness_cache_is_valid(self, medium_instance):
        isl = make(medium_instance)
        for _ in range(5):
            isl.step()
        objs = [evaluate(medium_instance, decode(medium_instance, bits_to_int(b, isl.layout)), 0.0).objective
                for b in isl.pop]
        assert isl.obj.tolist() == objs

    @pytest.mark.parametrize("workers", [2, 5])
    def test_worker_count_does_not_change_results(self, medium_instance, workers):
        ref, par = make(medium_instance), make(medium_instance)
        with ThreadPoolExecutor(workers) as pool:
            for _ in range(10):
                ref.step()
                par.step(pool, workers)
        assert np.array_equal(ref.pop, par.pop) and ref.archive_objective == par.archive_objective

    def test_import_round_trip(self, medium_instance):
        isl = make(medium_instance)
        genes = isl.export_genes([0, 1])
        isl.import_genes([4, 5], genes)
        assert np.array_equal(isl.pop[4], isl.pop[0]) and isl.fit[5] == isl.fit[1]
        isl.import_genes([], genes[:0])
