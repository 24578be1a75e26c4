import itertools
from fractions import Fraction

import numpy as np
import pytest

from qal import commcx
from qal.commcx import (DetProtocol, Mod4Instance, classical_opt_broadcast,
                        classical_opt_sequential, conjecture_check,
                        evaluate_broadcast, evaluate_sequential,
                        ghz_outcome_distribution, published_witness,
                        promise_instances, quantum_ghz_protocol,
                        quantum_qubit_protocol, teleport_chain,
                        teleport_chain_all_branches)


class TestInstances:
    def test_promise_enforced(self):
        with pytest.raises(ValueError):
            Mod4Instance((1, 0, 0))
        with pytest.raises(ValueError):
            Mod4Instance((4, 0))

    def test_answer(self):
        assert Mod4Instance((0, 0, 0)).answer == 0
        assert Mod4Instance((1, 1, 2)).answer == 0
        assert Mod4Instance((3, 3, 3, 3, 2)).answer == 1


class TestClassicalSequential:
    def test_table_values(self):
        want = {3: Fraction(3, 4), 4: Fraction(3, 4),
                5: Fraction(5, 8), 6: Fraction(5, 8)}
        for n, value in want.items():
            assert classical_opt_sequential(n)["p_c"] == value

    def test_dp_equals_raw_enumeration_n3(self):
        best = Fraction(0)
        for p1 in itertools.product((0, 1), repeat=4):
            for pj in itertools.product((0, 1), repeat=8):
                val = evaluate_sequential(DetProtocol(p1, (pj,)))
                if val > best:
                    best = val
        assert best == classical_opt_sequential(3)["p_c"]

    def test_witness_protocol_matches_optimum(self):
        for n in (3, 4, 5, 6):
            res = classical_opt_sequential(n)
            assert evaluate_sequential(res["witness"]) == res["p_c"]

    def test_published_witness_words(self):
        for n in (3, 4, 5, 6):
            achieved = evaluate_sequential(published_witness(n))
            assert achieved == classical_opt_sequential(n)["p_c"]

    def test_n7_n8_resolve_the_lower_bound(self):
        # the published table stops at lower bounds >= 9/16 here; the DP
        # closes them as exact optima
        for n in (7, 8):
            res = classical_opt_sequential(n)
            assert res["p_c"] == Fraction(9, 16)
            assert res["beyond_table"]
            assert evaluate_sequential(published_witness(n)) == Fraction(9, 16)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            classical_opt_sequential(2)


class TestClassicalBroadcast:
    def test_table_values(self):
        want = {3: Fraction(3, 4), 4: Fraction(3, 4), 5: Fraction(5, 8),
                6: Fraction(5, 8), 7: Fraction(9, 16)}
        for n, value in want.items():
            assert classical_opt_broadcast(n)["p_c"] == value

    def test_reduction_equals_raw_enumeration_n3(self):
        best = Fraction(0)
        for pa in itertools.product((0, 1), repeat=4):
            for pb in itertools.product((0, 1), repeat=4):
                val = evaluate_broadcast([pa, pb])
                if val > best:
                    best = val
        assert best == classical_opt_broadcast(3)["p_c"]

    def test_witness_achieves_optimum(self):
        for n in (3, 5, 7):
            res = classical_opt_broadcast(n)
            assert evaluate_broadcast(list(res["witness"])) == res["p_c"]


class TestConjecture:
    def test_odd_n(self):
        for n in (3, 5, 7):
            assert conjecture_check(n, classical_opt_broadcast(n)["p_c"])

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            conjecture_check(4, Fraction(3, 4))


class TestQuantumProtocols:
    def test_ghz_examples(self):
        assert quantum_ghz_protocol(Mod4Instance((0, 0, 0))) == 0
        assert quantum_ghz_protocol(Mod4Instance((1, 1, 2))) == 0
        assert quantum_ghz_protocol(Mod4Instance((3, 3, 3, 3, 2))) == 1

    def test_ghz_exact_support_small_n(self):
        # full distribution lands on the answer's parity class exactly
        for n in (3, 4, 5):
            for xs in promise_instances(n):
                inst = Mod4Instance(xs)
                dist = ghz_outcome_distribution(inst)
                parity = np.array([bin(i).count("1") % 2
                                   for i in range(dist.size)])
                assert dist[parity != inst.answer].sum() < 1e-12

    def test_ghz_sampled_large_n(self):
        rng = np.random.default_rng(41)
        for n in (6, 7):
            all_inputs = list(promise_instances(n))
            picks = rng.choice(len(all_inputs), size=200, replace=False)
            for i in picks:
                inst = Mod4Instance(all_inputs[i])
                assert quantum_ghz_protocol(inst, rng=rng) == inst.answer

    def test_qubit_protocol_exhaustive(self):
        for n in (3, 4, 5):
            for xs in promise_instances(n):
                inst = Mod4Instance(xs)
                assert quantum_qubit_protocol(inst) == inst.answer

    def test_qubit_protocol_random_n7(self):
        rng = np.random.default_rng(42)
        all_inputs = list(promise_instances(7))
        picks = rng.choice(len(all_inputs), size=1000, replace=True)
        for i in picks:
            inst = Mod4Instance(all_inputs[i])
            assert quantum_qubit_protocol(inst) == inst.answer


class TestTeleportChain:
    def test_all_branches_n3_example(self):
        inst = Mod4Instance((1, 1, 2))
        answers = teleport_chain_all_branches(inst)
        assert len(answers) == 16
        assert set(answers) == {0}

    def test_zero_inputs(self):
        assert teleport_chain(Mod4Instance((0, 0, 0)))["answer"] == 0

    def test_two_bits_per_hop(self):
        for n in (3, 4, 5):
            xs = (2,) * n if (2 * n) % 2 == 0 else None
            res = teleport_chain(Mod4Instance(xs))
            assert res["bits_used"] == 2 * (n - 1)

    def test_branch_invariance_n3_all_inputs(self):
        for xs in promise_instances(3):
            inst = Mod4Instance(xs)
            assert set(teleport_chain_all_branches(inst)) == {inst.answer}

    def test_branch_invariance_n4_sample(self):
        rng = np.random.default_rng(43)
        all_inputs = list(promise_instances(4))
        for i in rng.choice(len(all_inputs), size=12, replace=False):
            inst = Mod4Instance(all_inputs[i])
            assert set(teleport_chain_all_branches(inst)) == {inst.answer}

    def test_sampled_outcomes_n5(self):
        rng = np.random.default_rng(44)
        for xs in promise_instances(5):
            inst = Mod4Instance(xs)
            assert teleport_chain(inst, rng=rng)["answer"] == inst.answer
