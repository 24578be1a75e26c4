import math
from fractions import Fraction

import numpy as np
import pytest

from qal import cloning
from qal.cloning import (CloneSpec, chapter6_pipeline, estimation_fidelity,
                         f0_states, fidelity_balance, no_cloning_witness,
                         prob_clone_feasible, prob_clone_min_eig,
                         prob_clone_search, task_scores, unambig_disc_max,
                         unambig_min_eig, uqcm_fidelity, PRINTED_GAMMAS)
from qal.qmath import Ket, normalized_ket
from qal.states import bloch


class TestUqcmFidelity:
    def test_one_to_two_qubits(self):
        assert uqcm_fidelity(1, 2, 2) == Fraction(5, 6)

    def test_large_m_limit(self):
        for n in (1, 2, 5):
            limit = estimation_fidelity(n, 2)
            assert limit == Fraction(n + 1, n + 2)
            assert abs(float(uqcm_fidelity(n, 10 ** 6, 2)) - float(limit)) < 1e-5

    def test_qutrit_case(self):
        assert uqcm_fidelity(2, 3, 3) == Fraction(13, 15)

    def test_monotonicity_sweep(self):
        for d in (2, 3, 7, 16):
            for n in (1, 2, 5, 20):
                vals = [uqcm_fidelity(n, m, d) for m in range(n + 1, 65)]
                assert all(a > b for a, b in zip(vals, vals[1:]))
        for d in (2, 3, 16):
            for m in (10, 64):
                vals = [uqcm_fidelity(n, m, d) for n in range(1, m)]
                assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            uqcm_fidelity(2, 2, 2)


class TestFidelityBalance:
    def test_one_to_two_qubits(self):
        bal = fidelity_balance(1, 2, 2)
        assert bal["iq_before"] == Fraction(1, 3)
        assert bal["iq_after"] == Fraction(1, 3)

    def test_one_to_three(self):
        bal = fidelity_balance(1, 3, 2)
        assert bal["iq_before"] == bal["iq_after"] == Fraction(1, 3)

    def test_algebraic_value(self):
        # both sides equal N (d-1)/(N+d)
        bal = fidelity_balance(2, 5, 3)
        assert bal["iq_before"] == Fraction(2 * 2, 5)
        assert bal["iq_after"] == Fraction(2 * 2, 5)

    def test_identity_over_full_sweep(self):
        for d in range(2, 17):
            for n in range(1, 64):
                for m in range(n + 1, 65):
                    bal = fidelity_balance(n, m, d)
                    assert bal["iq_before"] == bal["iq_after"]
                    assert abs(float(bal["iq_before"]) -
                               float(bal["iq_after"])) <= 1e-12


class TestTaskScores:
    def test_two_branches_qubit(self):
        s = task_scores(2, 2)
        assert s["f_cloning"] == Fraction(5, 6)
        assert s["f_estimate"] == Fraction(2, 3)
        assert s["f_single"] == Fraction(3, 4)

    def test_large_m_limit_meets_estimation(self):
        s = task_scores(10 ** 6, 2)
        assert abs(float(s["f_cloning"]) - 2 / 3) < 1e-5

    def test_cloning_always_wins(self):
        for d in range(2, 17):
            for m in range(2, 65):
                s = task_scores(m, d)
                assert s["f_cloning"] > s["f_estimate"]
                assert s["f_cloning"] > s["f_single"]


class TestProbCloneFeasibility:
    def test_zero_efficiencies(self):
        spec = CloneSpec(f0_states(), (0.0, 0.0, 0.0))
        assert prob_clone_feasible(spec)

    def test_orthogonal_states_perfectly_clonable(self):
        states = (Ket([1, 0]), Ket([0, 1]))
        assert prob_clone_feasible(CloneSpec(states, (1.0, 1.0)))

    def test_printed_gammas_feasible(self):
        spec = CloneSpec(f0_states(), PRINTED_GAMMAS)
        assert prob_clone_feasible(spec)
        assert prob_clone_min_eig(spec.states, spec.gammas) >= -1e-9

    def test_probe_freedom_is_needed_for_printed_gammas(self):
        # without the probe phases the same matrix tests far from PSD
        bare = prob_clone_min_eig(f0_states(), PRINTED_GAMMAS,
                                  optimize_phases=False)
        assert bare < -0.1

    def test_linear_dependence_rejected(self):
        plus = normalized_ket([1, 1])
        with pytest.raises(ValueError):
            CloneSpec((Ket([1, 0]), Ket([0, 1]), plus), (0.1, 0.1, 0.1))


class TestGammaSearches:
    def test_guaranteed_fraction_optimum(self):
        res = prob_clone_search(f0_states(), "guaranteed-fraction")
        assert abs(res["value"] - 0.467) < 1e-3
        assert res["gammas"][1] == res["gammas"][2]

    def test_task_p2_optimum(self):
        res = prob_clone_search(f0_states(), "task-p2")
        assert abs(res["value"] - 0.7320) < 1e-3

    def test_returned_gamma_feasible(self):
        for objective in ("avg", "task-p2"):
            res = prob_clone_search(f0_states(), objective)
            assert prob_clone_min_eig(f0_states(), res["gammas"]) >= -1e-9

    def test_avg_monotone_in_overlap(self):
        # raising the pairwise overlap along a one-parameter family can only
        # reduce the achievable average efficiency
        vals = []
        for c in (0.0, 0.3, 0.6, 0.9):
            states = (Ket([1, 0]), normalized_ket([c, math.sqrt(1 - c * c)]))
            res = prob_clone_search(states, "avg", symmetric=False)
            vals.append(res["value"])
        assert all(a >= b - 1e-6 for a, b in zip(vals, vals[1:]))

    def test_unknown_objective(self):
        with pytest.raises(ValueError):
            prob_clone_search(f0_states(), "nope")


class TestUnambiguousDiscrimination:
    def test_orthogonal_pair(self):
        res = unambig_disc_max((Ket([1, 0]), Ket([0, 1])))
        assert abs(res["avg"] - 1.0) < 1e-9

    def test_f0_triple_limit(self):
        res = unambig_disc_max(f0_states())
        assert res["avg"] <= 1 / 3 + 1e-4
        assert abs(res["avg"] - 1 / 3) < 2e-3

    def test_two_state_overlap_oracle(self):
        # 2x2 PSD boundary: (1 - g1)(1 - g2) >= c^2, max average at 1 - |c|
        for c in (0.2, 0.5, 0.8):
            states = (Ket([1, 0]), normalized_ket([c, math.sqrt(1 - c * c)]))
            res = unambig_disc_max(states)
            assert abs(res["avg"] - (1 - c)) < 1e-4

    def test_identification_harder_than_cloning(self):
        clone = prob_clone_search(f0_states(), "avg")
        disc = unambig_disc_max(f0_states())
        assert disc["avg"] <= clone["value"] + 1e-9
        for c in (0.3, 0.7):
            states = (Ket([1, 0]), normalized_ket([c, math.sqrt(1 - c * c)]))
            assert (unambig_disc_max(states)["avg"]
                    <= prob_clone_search(states, "avg", symmetric=False)["value"] + 1e-9)


class TestNoCloningWitness:
    def test_equal_states(self):
        psi = bloch(0.3, 0.4)
        assert not no_cloning_witness(psi, psi)["contradiction"]

    def test_orthogonal_states(self):
        assert not no_cloning_witness(Ket([1, 0]), Ket([0, 1]))["contradiction"]

    def test_intermediate_overlap(self):
        res = no_cloning_witness(Ket([1, 0]), normalized_ket([1, 1]))
        assert abs(res["overlap"] - 1 / math.sqrt(2)) < 1e-12
        assert res["contradiction"]


class TestChapter6Pipeline:
    def test_structure_checks(self):
        pipe = chapter6_pipeline()
        assert pipe["h_basis_orthonormal"]
        assert pipe["s1_outputs_orthogonal"]
        assert pipe["s2_outputs_orthogonal"]

    def test_scores(self):
        pipe = chapter6_pipeline()
        assert pipe["p1"] == Fraction(11, 16)
        assert abs(pipe["p_success"] - 0.42803) < 1e-5
        assert abs(pipe["p_0010"] - 0.5002) < 1e-4
        assert abs(pipe["p2"] - 0.7320) < 1e-4

    def test_printed_gammas_certified(self):
        pipe = chapter6_pipeline()
        assert pipe["printed_gamma_min_eig"] >= -1e-9
