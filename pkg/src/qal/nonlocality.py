"""CHSH inequality, Hardy's logical non-locality argument, and the Peres and
Mermin contextuality constructions evaluated on concrete states."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .qmath import Ket, DensityOp
from .states import PAULI_X, PAULI_Y, PAULI_Z, ID2, named_state, hardy_state
from . import qmath


@dataclass(frozen=True)
class ChshSettings:
    """Four Bloch directions (theta, phi), two per party."""

    a1: tuple
    a2: tuple
    b1: tuple
    b2: tuple


#: coplanar settings spaced by pi/4: a1, b1, a2, b2 at theta = 0, pi/4, pi/2, 3pi/4
OPTIMAL_SETTINGS = ChshSettings(
    a1=(0.0, 0.0), a2=(math.pi / 2, 0.0),
    b1=(math.pi / 4, 0.0), b2=(3 * math.pi / 4, 0.0))


def _direction_observable(theta, phi):
    """The +/-1-valued observable n.sigma for the Bloch direction (theta, phi)."""
    nx = math.sin(theta) * math.cos(phi)
    ny = math.sin(theta) * math.sin(phi)
    nz = math.cos(theta)
    return nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z


def _two_qubit_matrix(state):
    if isinstance(state, Ket):
        state = state.density()
    if not isinstance(state, DensityOp) or state.dims != (2, 2):
        raise ValueError("expected a two-qubit state")
    return state.matrix


def _correlators(state, settings: ChshSettings):
    rho = _two_qubit_matrix(state)
    obs = {k: _direction_observable(*getattr(settings, k))
           for k in ("a1", "a2", "b1", "b2")}

    def corr(a, b):
        return float(np.real(np.trace(rho @ np.kron(obs[a], obs[b]))))

    return corr


def chsh_signed(state, settings: ChshSettings = OPTIMAL_SETTINGS) -> float:
    """Signed combination <A1B1> + <A2B1> + <A2B2> - <A1B2>."""
    corr = _correlators(state, settings)
    return corr("a1", "b1") + corr("a2", "b1") + corr("a2", "b2") - corr("a1", "b2")


def chsh_value(state, settings: ChshSettings = OPTIMAL_SETTINGS) -> float:
    """|<A1B1> + <A2B1> + <A2B2> - <A1B2>| with +/-1 observables n.sigma."""
    return abs(chsh_signed(state, settings))


def chsh_prob_form(state, settings: ChshSettings = OPTIMAL_SETTINGS) -> float:
    """p_d(a1,b1) + p_d(a2,b1) + p_d(a2,b2) + p_e(a1,b2); local bound 3.

    p_d (p_e) is the probability of different (equal) +/-1 outcomes, computed
    from the four joint outcome distributions. Algebraically this equals
    2 - S/2 for the signed correlator combination S.
    """
    rho = _two_qubit_matrix(state)

    def outcome_probs(a_setting, b_setting):
        oa = _direction_observable(*a_setting)
        ob = _direction_observable(*b_setting)
        pa = {s: (ID2 + s * oa) / 2 for s in (1, -1)}
        pb = {s: (ID2 + s * ob) / 2 for s in (1, -1)}
        return {(sa, sb): float(np.real(np.trace(rho @ np.kron(pa[sa], pb[sb]))))
                for sa in (1, -1) for sb in (1, -1)}

    def p_diff(a, b):
        p = outcome_probs(a, b)
        return p[(1, -1)] + p[(-1, 1)]

    def p_equal(a, b):
        p = outcome_probs(a, b)
        return p[(1, 1)] + p[(-1, -1)]

    return (p_diff(settings.a1, settings.b1) + p_diff(settings.a2, settings.b1)
            + p_diff(settings.a2, settings.b2) + p_equal(settings.a1, settings.b2))


# ---------------------------------------------------------------------------
# Hardy
# ---------------------------------------------------------------------------

def hardy_probs(alpha_a, alpha_b, beta_a, beta_b) -> dict:
    """Joint outcome probabilities of the four Hardy observations.

    H-basis outcomes are a (alive) / d (dead); T-basis outcomes are h (hot) /
    c (cold). Returns p_aa (both H give a), p_cd (T on A gives c, H on B gives
    d), p_dc (mirror image) and p_cc (both T give c).
    """
    psi = hardy_state(alpha_a, alpha_b, beta_a, beta_b).amps

    def local_vec(kind, alpha, beta):
        if kind == "a":
            return np.array([1, 0], dtype=complex)
        if kind == "d":
            return np.array([0, 1], dtype=complex)
        if kind == "h":
            return np.array([alpha, beta], dtype=complex)
        # |c> = beta* |a> - alpha* |d>
        return np.array([np.conj(beta), -np.conj(alpha)], dtype=complex)

    def joint(kind_a, kind_b):
        va = local_vec(kind_a, alpha_a, beta_a)
        vb = local_vec(kind_b, alpha_b, beta_b)
        return abs(np.vdot(np.kron(va, vb), psi)) ** 2

    return {"p_aa": joint("a", "a"), "p_cd": joint("c", "d"),
            "p_dc": joint("d", "c"), "p_cc": joint("c", "c")}


def hardy_pcc(t_a, t_b) -> float:
    """p_cc for real parameters alpha_i = cos(t_i), beta_i = sin(t_i)."""
    aa, ba = math.cos(t_a), math.sin(t_a)
    ab, bb = math.cos(t_b), math.sin(t_b)
    norm2 = (aa * bb) ** 2 + (ba * ab) ** 2 + (ba * bb) ** 2
    if norm2 < 1e-300:
        return 0.0
    return (aa * ab * ba * bb) ** 2 / norm2


def hardy_maximize(restarts: int = 20, seed: int = 42) -> dict:
    """Maximize p_cc over the two real symmetric parameters.

    Multistart coordinate descent on (t_a, t_b) with per-coordinate step
    refinement down to 1e-10. The maximum equals 1/tau^5 with tau the golden
    ratio, attained at a less than maximally entangled state.
    """
    rng = np.random.default_rng(seed)
    best_val, best_t = -1.0, None
    for r in range(restarts):
        t = rng.uniform(0.1, math.pi / 2 - 0.1, 2)
        val = hardy_pcc(*t)
        step = 0.3
        while step > 1e-10:
            moved = False
            for i in (0, 1):
                for sgn in (1.0, -1.0):
                    cand = t.copy()
                    cand[i] += sgn * step
                    v = hardy_pcc(*cand)
                    if v > val:
                        t, val = cand, v
                        moved = True
            if not moved:
                step /= 2
        if val > best_val:
            best_val, best_t = val, t
    alpha = math.cos(best_t[0])
    beta = math.sin(best_t[0])
    state = hardy_state(math.cos(best_t[0]), math.cos(best_t[1]),
                        math.sin(best_t[0]), math.sin(best_t[1]))
    reduced = qmath.partial_trace(state.density(), [0])
    return {"alpha": alpha, "beta": beta, "t": tuple(best_t), "p_cc": best_val,
            "state": state, "reduced_entropy": qmath.vn_entropy(reduced)}


# ---------------------------------------------------------------------------
# contextuality
# ---------------------------------------------------------------------------

def peres_contradiction() -> dict:
    """Peres' two-qubit contextuality record for the singlet state.

    Verifies the singlet is a -1 eigenvector of sigma_i x sigma_i for
    i = x, y, z, measures AB = sigma_z x sigma_z directly (-1), and reports
    the non-contextual factored prediction (x1 y2)(y1 x2) = (+1).
    """
    psi = named_state("bell-phi-minus").amps
    eigen = []
    for s in (PAULI_X, PAULI_Y, PAULI_Z):
        op = np.kron(s, s)
        val = float(np.real(np.vdot(psi, op @ psi)))
        if np.linalg.norm(op @ psi - val * psi) > 1e-10:
            raise AssertionError("singlet is not an eigenvector")
        eigen.append(round(val))
    direct = eigen[2]
    factored = eigen[0] * eigen[1]
    return {"eigen_constraints": tuple(eigen), "direct_AB": direct,
            "factored_AB": factored}


MERMIN_ARRAY = (
    (np.kron(ID2, PAULI_Z), np.kron(PAULI_Z, ID2), np.kron(PAULI_Z, PAULI_Z)),
    (np.kron(PAULI_X, ID2), np.kron(ID2, PAULI_X), np.kron(PAULI_X, PAULI_X)),
    (np.kron(PAULI_X, PAULI_Z), np.kron(PAULI_Z, PAULI_X), np.kron(PAULI_Y, PAULI_Y)),
)


def mermin_square() -> dict:
    """Mermin's 3x3 operator array and the exhaustive 512-assignment check.

    Every row and the first two columns multiply to +identity while the third
    column multiplies to -identity, so no +/-1 value assignment satisfies all
    six product constraints.
    """
    def sign_of_identity(m):
        if np.abs(m - np.eye(4)).max() < 1e-10:
            return 1
        if np.abs(m + np.eye(4)).max() < 1e-10:
            return -1
        raise AssertionError("product is not +/- identity")

    rows = tuple(sign_of_identity(r[0] @ r[1] @ r[2]) for r in MERMIN_ARRAY)
    cols = tuple(sign_of_identity(MERMIN_ARRAY[0][c] @ MERMIN_ARRAY[1][c]
                                  @ MERMIN_ARRAY[2][c]) for c in range(3))

    assignment_exists = False
    for v in itertools.product((1, -1), repeat=9):
        if (v[0] * v[1] * v[2] == rows[0] and v[3] * v[4] * v[5] == rows[1]
                and v[6] * v[7] * v[8] == rows[2]
                and v[0] * v[3] * v[6] == cols[0]
                and v[1] * v[4] * v[7] == cols[1]
                and v[2] * v[5] * v[8] == cols[2]):
            assignment_exists = True
            break
    return {"row_products": rows, "col_products": cols,
            "assignment_exists": assignment_exists}
