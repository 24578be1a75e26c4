import math

import numpy as np
import pytest

from qal import qmath
from qal.qmath import Ket, DensityOp, normalized_ket
from qal.states import named_state, PAULI_X


def ket(*amps):
    return normalized_ket(list(amps), (2,) * int(math.log2(len(amps))))


def random_density(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = z @ z.conj().T
    return m / np.trace(m)


class TestConstructors:
    def test_ket_norm_enforced(self):
        with pytest.raises(ValueError):
            Ket([1, 1], (2,))
        with pytest.raises(ValueError):
            Ket([1, 0, 0], (2,))

    def test_density_invariants(self):
        with pytest.raises(ValueError):
            DensityOp(np.array([[0.5, 0.5j], [0.5j, 0.5]]), (2,))
        with pytest.raises(ValueError):
            DensityOp(np.eye(2), (2,))
        with pytest.raises(ValueError):
            DensityOp(np.diag([1.5, -0.5]), (2,))


class TestTensor:
    def test_computational_basis(self):
        k = qmath.tensor(Ket([1, 0]), Ket([0, 1]))
        assert np.allclose(k.amps, [0, 1, 0, 0])
        assert k.dims == (2, 2)

    def test_plus_plus_uniform(self):
        plus = normalized_ket([1, 1])
        k = qmath.tensor(plus, plus)
        assert np.allclose(k.amps, [0.5] * 4)

    def test_identity_case(self):
        half = DensityOp(np.eye(2) / 2, (2,))
        r = qmath.tensor(half, half)
        assert np.allclose(r.matrix, np.eye(4) / 4)
        assert r.dims == (2, 2)

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            qmath.tensor(Ket([1, 0]), DensityOp(np.eye(2) / 2, (2,)))


class TestPartialTrace:
    def test_bell_reduction(self):
        rho = named_state("bell-psi-plus").density()
        red = qmath.partial_trace(rho, [0])
        assert np.allclose(red.matrix, np.eye(2) / 2, atol=1e-12)

    def test_w_class_reduction_matches_block_form(self):
        e2, f2 = 2 / 3, 1 / 6
        psi = named_state("w-class", f2=f2)
        red = qmath.partial_trace(psi.density(), [0, 1])
        ef = math.sqrt(e2 * f2)
        want = np.array([[e2, 0, 0, ef],
                         [0, 0, 0, 0],
                         [0, 0, f2, 0],
                         [ef, 0, 0, f2]])
        assert np.allclose(red.matrix, want, atol=1e-12)

    def test_ghz_single_party(self):
        rho = named_state("ghz").density()
        red = qmath.partial_trace(rho, [0])
        assert np.allclose(red.matrix, np.diag([0.5, 0.5]), atol=1e-12)

    def test_sequential_trace_order_independent(self):
        # tracing out one subsystem at a time, in any order, preserves trace 1
        rng = np.random.default_rng(5)
        rho3 = DensityOp(random_density(rng, 8), (2, 2, 2))
        import itertools
        for order in itertools.permutations(range(3)):
            r = rho3
            remaining = list(range(3))
            for drop in order[:-1]:
                pos = remaining.index(drop)
                keep = [i for i in range(len(remaining)) if i != pos]
                r = qmath.partial_trace(r, keep)
                remaining.pop(pos)
                assert abs(np.trace(r.matrix) - 1) < 1e-12
            assert r.dims == (2,)

    def test_invalid_index(self):
        rho = named_state("bell-psi-plus").density()
        with pytest.raises(ValueError):
            qmath.partial_trace(rho, [2])
        with pytest.raises(ValueError):
            qmath.partial_trace(rho, [])


class TestPartialTranspose:
    def test_product_state_stays_psd(self):
        rho = qmath.tensor(Ket([1, 0]), normalized_ket([1, 1])).density()
        pt = qmath.partial_transpose(rho, 0)
        assert np.linalg.eigvalsh(pt).min() > -1e-12

    def test_bell_min_eig(self):
        # oracle: swap indices by hand on the 4x4 and diagonalize
        rho = named_state("bell-psi-plus").density()
        m = rho.matrix.reshape(2, 2, 2, 2)
        manual = m.transpose(2, 1, 0, 3).reshape(4, 4)
        oracle = np.linalg.eigvalsh(manual).min()
        pt = qmath.partial_transpose(rho, 0)
        assert abs(oracle - (-0.5)) < 1e-12
        assert abs(np.linalg.eigvalsh(pt).min() - oracle) < 1e-12

    def test_identity(self):
        rho = DensityOp(np.eye(4) / 4, (2, 2))
        assert np.allclose(qmath.partial_transpose(rho, 1), np.eye(4) / 4)

    def test_hermitian_unit_trace(self):
        rng = np.random.default_rng(6)
        rho = DensityOp(random_density(rng, 4), (2, 2))
        pt = qmath.partial_transpose(rho, 0)
        assert np.abs(pt - pt.conj().T).max() < 1e-12
        assert abs(np.trace(pt) - 1) < 1e-12


class TestHermEig:
    def test_diag(self):
        evals, _ = qmath.herm_eig(np.diag([1.0, 0.0]))
        assert np.allclose(evals, [1, 0])

    def test_pauli_spectrum(self):
        evals, _ = qmath.herm_eig(PAULI_X)
        assert np.allclose(evals, [1, -1])

    def test_w_block_closed_form(self):
        # sigma_BC block of the W form: eigenvalues {e^2, 2 f^2, 0, 0}
        e2, f2 = 2 / 3, 1 / 6
        m = np.array([[e2, 0, 0, 0], [0, f2, f2, 0],
                      [0, f2, f2, 0], [0, 0, 0, 0]])
        evals, _ = qmath.herm_eig(m)
        assert np.allclose(evals, [2 / 3, 1 / 3, 0, 0], atol=1e-12)

    def test_reconstruction_on_random_hermitian(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            m = (z + z.conj().T) / 2
            evals, evecs = qmath.herm_eig(m)
            recon = evecs @ np.diag(evals) @ evecs.conj().T
            assert np.abs(recon - m).max() <= 1e-9
            assert all(evals[i] >= evals[i + 1] for i in range(3))

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            qmath.herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestEntropies:
    def test_pure_state_zero(self):
        assert qmath.vn_entropy(Ket([1, 0]).density()) == 0.0

    def test_maximally_mixed(self):
        assert abs(qmath.vn_entropy(DensityOp(np.eye(2) / 2, (2,))) - 1) < 1e-12

    def test_w_reduced_entropy(self):
        psi = named_state("w-class", f2=1 / 6)
        red = qmath.partial_trace(psi.density(), [0])
        want = -(2 / 3) * math.log2(2 / 3) - (1 / 3) * math.log2(1 / 3)
        assert abs(qmath.vn_entropy(red) - want) < 1e-12

    def test_additive_on_products(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            a = DensityOp(random_density(rng, 2), (2,))
            b = DensityOp(random_density(rng, 4), (4,))
            lhs = qmath.vn_entropy(qmath.tensor(a, b))
            assert abs(lhs - qmath.vn_entropy(a) - qmath.vn_entropy(b)) < 1e-9


class TestRelativeEntropy:
    def test_self_is_zero(self):
        rng = np.random.default_rng(9)
        rho = DensityOp(random_density(rng, 4), (2, 2))
        assert qmath.relative_entropy(rho, rho) < 1e-10

    def test_pure_vs_mixed_oracle(self):
        # two-term spectral formula: D = sum_i p_i log(p_i / q_i) = log 2
        pure = Ket([1, 0]).density()
        mixed = DensityOp(np.eye(2) / 2, (2,))
        assert abs(qmath.relative_entropy(pure, mixed) - 1.0) < 1e-12

    def test_disjoint_support_infinite(self):
        a = Ket([1, 0]).density()
        b = Ket([0, 1]).density()
        assert qmath.relative_entropy(a, b) == math.inf

    def test_klein_inequality(self):
        rng = np.random.default_rng(10)
        for _ in range(1000):
            sig = DensityOp(random_density(rng, 2), (2,))
            rho = DensityOp(random_density(rng, 2), (2,))
            assert qmath.relative_entropy(sig, rho) >= 0.0

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            qmath.relative_entropy(Ket([1, 0]).density(),
                                   DensityOp(np.eye(4) / 4, (2, 2)))


class TestFidelity:
    def test_self_fidelity(self):
        psi = normalized_ket([1, 1j])
        assert abs(qmath.fidelity_pure(psi, psi.density()) - 1) < 1e-12

    def test_against_mixed(self):
        assert abs(qmath.fidelity_pure(Ket([1, 0]),
                                       DensityOp(np.eye(2) / 2, (2,))) - 0.5) < 1e-12

    def test_depolarized_clone_form(self):
        rng = np.random.default_rng(11)
        for eta in (0.0, 0.3, 0.9, 1.0):
            theta, phi = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
            from qal.states import bloch
            psi = bloch(theta, phi)
            m = eta * psi.density().matrix + (1 - eta) * np.eye(2) / 2
            rho = DensityOp(m, (2,))
            assert abs(qmath.fidelity_pure(psi, rho) - (0.5 + eta / 2)) < 1e-12
