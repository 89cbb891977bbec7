import numpy as np
import pytest

from ffsga.errors import ContractError
from ffsga.instance_gen import GenParams, generate, mean_work
from ffsga.model import instance_to_dict
from ffsga.rng import SplitMix64, derive_seed, rng_next_uniform


class TestRng:
    def test_reference_stream(self):
        # published SplitMix64 outputs for seed 1234567
        g = SplitMix64(1234567)
        assert [g.next_u64() for _ in range(3)] == [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
        ]

    def test_deterministic(self):
        a, b = SplitMix64(99), SplitMix64(99)
        assert [a.uniform_range(1, 5) for _ in range(50)] == [b.uniform_range(1, 5) for _ in range(50)]

    def test_functional_form_threads_state(self):
        x1, s1 = rng_next_uniform(7, 0.0, 1.0)
        x2, _ = rng_next_uniform(s1, 0.0, 1.0)
        g = SplitMix64(7)
        assert (x1, x2) == (g.uniform(), g.uniform())

    def test_range(self):
        g = SplitMix64(3)
        xs = [g.uniform_range(1.0, 5.0) for _ in range(20000)]
        assert min(xs) >= 1.0 and max(xs) < 5.0

    def test_top_of_range_is_clamped(self):
        class Top(SplitMix64):
            def uniform(self):
                return 1.0 - 2.0**-53  # largest possible draw

        # 1 + 4 * (1 - 2**-53) rounds to 5.0 without the clamp
        assert Top(0).uniform_range(1.0, 5.0) < 5.0

    def test_mean(self):
        g = SplitMix64(2024)
        xs = np.array([g.uniform_range(1.0, 5.0) for _ in range(100_000)])
        assert abs(xs.mean() - 3.0) < 0.05

    def test_empty_range(self):
        with pytest.raises(ValueError):
            SplitMix64(0).uniform_range(2.0, 2.0)
        with pytest.raises(ValueError):
            rng_next_uniform(0, 3.0, 1.0)

    def test_derive_seed_separates_keys(self):
        seeds = {derive_seed(1, g, c) for g in range(20) for c in range(20)}
        assert len(seeds) == 400
        assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)


class TestGenerate:
    def test_mean_work_hand_example(self):
        per_job, total = mean_work([[[2, 3], [4]], [[2, 3], [1]]])
        assert per_job == [6.5, 3.5]
        assert total == 10.0

    def test_draw_order(self):
        p = GenParams(3, 2, (2, 1), weight=50, seed=17)
        inst = generate(p)
        g = SplitMix64(17)
        proc = [[[g.uniform_range(1, 5) for _ in range(m)] for m in (2, 1)] for _ in range(3)]
        per_job, total = mean_work(proc)
        rel = [g.uniform_range(0, total) for _ in range(3)]
        due = [rel[j] + per_job[j] * (1 + g.uniform_range(0, 2)) for j in range(3)]
        assert inst.proc_lists() == proc
        assert inst.release.tolist() == rel
        assert inst.due.tolist() == due
        assert inst.weight == 50

    def test_full_scale_shape(self):
        inst = generate(GenParams(300, 4, seed=1))
        assert inst.proc.shape == (300, 4, 2)
        assert inst.proc.size == 2400
        assert inst.proc.min() >= 1 and inst.proc.max() < 5
        assert inst.weight == 100

    def test_invariants_and_reproducibility(self):
        for seed in range(20):
            p = GenParams(15, 3, (1, 3, 2), seed=seed)
            a, b = generate(p), generate(p)
            assert instance_to_dict(a) == instance_to_dict(b)
            assert (a.due >= a.release).all()
            per_job, total = mean_work(a.proc_lists())
            assert (a.release < total).all()
            slack = (a.due - a.release) / np.array(per_job)
            assert ((slack >= 1) & (slack < 3 + 1e-12)).all()

    def test_integer_mode(self):
        inst = generate(GenParams(10, 2, seed=3, integer_times=True))
        assert (inst.proc == np.round(inst.proc)).all()
        assert (inst.proc >= 1).all()

    @pytest.mark.parametrize(
        "kw",
        [
            dict(num_jobs=0, num_stages=2),
            dict(num_jobs=3, num_stages=1),
            dict(num_jobs=3, num_stages=2, machines_per_stage=(1, 1)),
            dict(num_jobs=3, num_stages=2, machines_per_stage=(2,)),
            dict(num_jobs=3, num_stages=2, weight=-1),
        ],
    )
    def test_rejects_bad_params(self, kw):
        with pytest.raises(ContractError):
            GenParams(**kw)
