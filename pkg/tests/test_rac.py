import math
from fractions import Fraction

import numpy as np
import pytest

from qal import rac
from qal.qmath import DensityOp, normalized_ket
from qal.rac import (classical_rac_optimal, invariant_info,
                     mub_equipartition_bound, qrac_success, qubit_code_2to1,
                     qubit_code_3to1, qutrit_base_state, qutrit_code_build,
                     shannon_total_info)
from qal.states import mub, bloch

P_CUBE = 0.5 + math.sqrt(3) / 6


def random_qubit_density(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = z @ z.conj().T
    return DensityOp(m / np.trace(m), (2,))


def haar_unitary(rng, d=2):
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q @ np.diag(np.diag(r) / np.abs(np.diag(r)))


class TestQuantumCodes:
    def test_2to1_average(self):
        res = qrac_success(qubit_code_2to1())
        assert abs(res["average"] - math.cos(math.pi / 8) ** 2) < 1e-9

    def test_3to1_average(self):
        res = qrac_success(qubit_code_3to1())
        assert abs(res["average"] - P_CUBE) < 1e-9

    def test_qutrit_average(self):
        res = qrac_success(qutrit_code_build())
        assert abs(res["average"] - P_CUBE) < 1e-9

    def test_per_query_equals_average_for_qubit_codes(self):
        for code in (qubit_code_2to1(), qubit_code_3to1()):
            res = qrac_success(code)
            assert abs(res["per_query_worst"] - res["average"]) < 1e-9

    def test_quantum_beats_classical(self):
        p2 = classical_rac_optimal(2)["p_c"]
        p3 = classical_rac_optimal(3)["p_c"]
        assert qrac_success(qubit_code_2to1())["average"] > float(p2)
        assert qrac_success(qubit_code_3to1())["average"] > float(p3)
        assert qrac_success(qutrit_code_build())["average"] > 0.75


class TestQutritConstruction:
    def test_base_state_overlap_oracle(self):
        # scan over all real-coefficient states a|0> + b(|1> + |2>): the
        # largest common overlap with both designated vectors is
        # 1/2 + sqrt(3)/6, achieved at a^2 = 1/2 - sqrt(3)/6 (a, b of
        # opposite sign)
        basis = mub(3)
        alpha1, alpha2 = basis.bases[0][0], basis.bases[1][0]

        def common_overlap(a):
            b = math.sqrt((1 - a * a) / 2)
            psi = normalized_ket([a, b, b], (3,))
            o1 = abs(alpha1.overlap(psi)) ** 2
            o2 = abs(alpha2.overlap(psi)) ** 2
            assert abs(o1 - o2) < 1e-12
            return o1

        grid = np.linspace(-0.999999, 0.999999, 200001)
        vals = np.array([common_overlap(a) for a in grid])
        best = vals.max()
        assert abs(best - P_CUBE) < 1e-9
        a_best = grid[vals.argmax()]
        assert abs(a_best ** 2 - (0.5 - math.sqrt(3) / 6)) < 1e-4
        got = common_overlap(qutrit_base_state().amps[0].real)
        assert abs(got - P_CUBE) < 1e-12

    def test_v_produces_designation_11(self):
        code = qutrit_code_build()
        base = qutrit_base_state()
        v_applied = rac.V_TRIT @ base.amps
        assert np.allclose(code.encoding["11"].amps, v_applied)

    def test_all_nine_states_hit_designated_overlap(self):
        code = qutrit_code_build()
        assert len(code.encoding) == 9
        for word, ket in code.encoding.items():
            for q, (basis, _) in enumerate(code.decodings):
                designated = basis[int(word[q])]
                assert abs(abs(designated.overlap(ket)) ** 2 - P_CUBE) <= 1e-9


class TestClassicalRac:
    def test_send_the_bit(self):
        assert classical_rac_optimal(1)["p_c"] == 1

    def test_two_and_three_bits(self):
        assert classical_rac_optimal(2)["p_c"] == Fraction(3, 4)
        assert classical_rac_optimal(3)["p_c"] == Fraction(3, 4)

    def test_four_bits(self):
        # frozen from this exhaustive search: the optimum drops below 3/4
        res = classical_rac_optimal(4)
        assert res["p_c"] == Fraction(11, 16)

    def test_witness_achieves_optimum(self):
        import itertools
        res = classical_rac_optimal(2)
        enc = res["witness"]
        inputs = list(itertools.product((0, 1), repeat=2))
        good = 0
        for q in range(2):
            for msg in (0, 1):
                consistent = [x for x, b in zip(inputs, enc) if b == msg]
                ones = sum(x[q] for x in consistent)
                good += max(ones, len(consistent) - ones)
        assert Fraction(good, 8) == res["p_c"]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            classical_rac_optimal(5)


class TestInvariantInformation:
    def test_pure_qubit_maximal(self):
        rho = bloch(0.3, 1.1).density()
        assert abs(invariant_info(rho, mub(2)) - 0.5) < 1e-12

    def test_maximally_mixed_zero(self):
        rho = DensityOp(np.eye(2) / 2, (2,))
        assert invariant_info(rho, mub(2)) < 1e-12

    def test_unitary_invariance(self):
        rng = np.random.default_rng(31)
        bases = mub(2)
        rho = bloch(0.7, 0.2).density()
        base_val = invariant_info(rho, bases)
        for _ in range(20):
            u = haar_unitary(rng)
            rotated = DensityOp(u @ rho.matrix @ u.conj().T, (2,))
            assert abs(invariant_info(rotated, bases) - base_val) <= 1e-10

    def test_purity_identity_on_random_states(self):
        rng = np.random.default_rng(32)
        bases = mub(2)
        for _ in range(1000):
            rho = random_qubit_density(rng)
            assert abs(invariant_info(rho, bases)
                       - (rho.purity() - 0.5)) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            invariant_info(DensityOp(np.eye(3) / 3, (3,)), mub(2))


class TestShannonTotal:
    def test_z_eigenstate(self):
        assert abs(shannon_total_info(bloch(0, 0)) - 1.0) < 1e-12

    def test_x_eigenstate(self):
        assert abs(shannon_total_info(bloch(math.pi / 2, 0)) - 1.0) < 1e-12

    def test_tilted_state_differs(self):
        assert abs(shannon_total_info(bloch(math.pi / 4, 0)) - 1.0) > 1e-3

    def test_not_invariant_on_unitary_orbit(self):
        # counterexample: |0> and its pi/4 rotation have equal invariant
        # information but different Shannon totals
        psi0, psi1 = bloch(0, 0), bloch(math.pi / 4, 0)
        bases = mub(2)
        assert abs(invariant_info(psi0.density(), bases)
                   - invariant_info(psi1.density(), bases)) < 1e-12
        assert abs(shannon_total_info(psi0) - shannon_total_info(psi1)) > 1e-3


class TestEquipartitionBound:
    def test_published_values(self):
        assert abs(mub_equipartition_bound(2, 2)
                   - (0.5 + math.sqrt(2) / 4)) < 1e-9
        assert abs(mub_equipartition_bound(2, 3)
                   - (0.5 + math.sqrt(3) / 6)) < 1e-9
        assert abs(mub_equipartition_bound(3, 2)
                   - (1 / 3 + math.sqrt(2) / 3)) < 1e-9

    def test_solves_the_information_equation(self):
        # one dominant outcome p, the rest uniform, information
        # (d-1)/d divided over n measurements
        for d, n in ((2, 2), (2, 3), (3, 2)):
            p = mub_equipartition_bound(d, n)
            rest = (1 - p) / (d - 1)
            info = (p - 1 / d) ** 2 + (d - 1) * (rest - 1 / d) ** 2
            assert abs(info - ((d - 1) / d) / n) < 1e-12

    def test_unsupported(self):
        with pytest.raises(ValueError):
            mub_equipartition_bound(3, 3)
