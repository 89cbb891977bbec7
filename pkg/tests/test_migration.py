import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffsga import migration
from ffsga.cellular import CellularIsland
from ffsga.errors import ConfigError, ContractError
from ffsga.migration import MigrationPolicy, compute_alpha, compute_beta, decide, execute
from ffsga.model import sample_emax
from ffsga.pseudo import PseudoIsland

fitness = st.floats(0, 1e9, allow_nan=False)


class TestDecision:
    def test_example(self):
        d = decide(400, 500, MigrationPolicy(1.0, 500), 256)
        assert d.beta == pytest.approx(0.8)
        assert d.alpha == pytest.approx(0.2)
        assert d.direction == migration.B_TO_A and d.k == 51

    def test_mirror(self):
        d = decide(500, 400, MigrationPolicy(), 256)
        assert d.beta == pytest.approx(0.8) and d.direction == migration.A_TO_B and d.k == 51

    @pytest.mark.parametrize("f", [0.0, 1.0, 123.5])
    def test_equal_fitness_never_migrates(self, f):
        d = decide(f, f, MigrationPolicy(), 100)
        assert d.beta == 1.0 and d.alpha == 0.0 and d.direction == migration.NONE and d.k == 0

    def test_theta_zero_disables(self):
        d = decide(1, 100, MigrationPolicy(0.0), 100)
        assert d.alpha == 0.0 and d.direction == migration.NONE

    def test_threshold_is_strict(self):
        assert compute_alpha(0.5, 0.5) == 0.0
        assert compute_alpha(0.5, 0.6) == 0.5

    def test_beta_zero(self):
        d = decide(0.0, 10.0, MigrationPolicy(1.0), 64)
        assert d.beta == 0.0 and d.alpha == 0.0 and d.direction == migration.NONE

    def test_small_alpha_rounds_to_nothing(self):
        d = decide(99.9, 100, MigrationPolicy(), 10)
        assert d.k == 0 and d.direction == migration.NONE

    @given(fitness, fitness)
    def test_beta_symmetric_and_bounded(self, a, b):
        beta = compute_beta(a, b)
        assert beta == compute_beta(b, a) and 0.0 <= beta <= 1.0

    @given(fitness, fitness, st.floats(0, 1), st.integers(1, 5000))
    def test_k_bounds(self, a, b, theta, n):
        d = decide(a, b, MigrationPolicy(theta), n)
        assert 0 <= d.k <= n
        assert (d.k == 0) == (d.direction == migration.NONE)

    def test_bad_inputs(self):
        with pytest.raises(ContractError):
            compute_beta(-1, 2)
        with pytest.raises(ContractError):
            compute_beta(float("nan"), 2)
        with pytest.raises(ConfigError):
            MigrationPolicy(theta=1.5)
        with pytest.raises(ConfigError):
            MigrationPolicy(gap=0)


@pytest.fixture
def islands(medium_instance):
    emax = sample_emax(medium_instance)
    a = CellularIsland(medium_instance, 36, 1, emax)
    b = PseudoIsland(medium_instance, 36, 2, emax)
    for _ in range(3):
        a.step()
        b.step()
    return a, b


class TestExecute:
    def test_k_zero_is_noop(self, islands):
        a, b = islands
        pa, pb = a.pop.copy(), b.pop.copy()
        execute(a, b, 0)
        assert np.array_equal(pa, a.pop) and np.array_equal(pb, b.pop)

    @pytest.mark.parametrize("direction", ["ab", "ba"])
    def test_copies_best_over_worst(self, islands, direction):
        src, dst = islands if direction == "ab" else islands[::-1]
        k = 7
        src_pop, src_fit = src.pop.copy(), src.fit.copy()
        dst_best = dst.fit.max()
        donors = src.export_genes(src.ranking()[:k])
        worst = dst.ranking()[::-1][:k]
        keep = np.setdiff1d(np.arange(dst.size), worst)
        kept = dst.pop[keep].copy()
        size = dst.size
        execute(src, dst, k)
        assert np.array_equal(src.pop, src_pop) and np.array_equal(src.fit, src_fit)
        assert np.array_equal(dst.export_genes(worst), donors)
        assert np.array_equal(dst.pop[keep], kept)
        assert dst.fit.max() >= dst_best and dst.size == size == len(dst.pop)

    def test_too_many(self, islands):
        with pytest.raises(ContractError):
            execute(*islands, 37)
