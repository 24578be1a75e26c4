"""Quantum and classical random access codes plus invariant-information bounds."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .qmath import Ket, DensityOp, normalized_ket
from .states import MubSet, mub, bloch_vector_ket, bloch


@dataclass(frozen=True)
class RacCode:
    """Encoding map plus per-query decoding bases.

    encoding: dict from input string (e.g. "01") to Ket.
    decodings: one entry per queried index, each a tuple
    (basis kets, outcome symbols) where symbol k is returned when the
    measurement projects onto basis vector k.
    """

    encoding: dict
    decodings: tuple

    def __post_init__(self):
        for basis, symbols in self.decodings:
            if len(basis) != len(symbols):
                raise ValueError("decoding basis and symbol list differ in length")
            for i, u in enumerate(basis):
                for j, v in enumerate(basis):
                    want = 1.0 if i == j else 0.0
                    if abs(abs(u.overlap(v)) ** 2 - want) > 1e-10:
                        raise ValueError("decoding basis is not orthonormal")


def qrac_success(code: RacCode) -> dict:
    """Exact Born-rule success probabilities of a random access code.

    Averages uniformly over inputs and over the queried index; also reports
    the worst single (input, query) case.
    """
    probs = []
    for word, ket in code.encoding.items():
        for q, (basis, symbols) in enumerate(code.decodings):
            ok = 0.0
            for vec, sym in zip(basis, symbols):
                if str(sym) == word[q]:
                    ok += abs(vec.overlap(ket)) ** 2
            probs.append(ok)
    return {"average": float(np.mean(probs)), "per_query_worst": float(min(probs))}


def qubit_code_2to1() -> RacCode:
    """Two bits in one qubit: equatorial states, x/y-axis readout."""
    enc = {
        "00": bloch(math.pi / 2, math.pi / 4),
        "01": bloch(math.pi / 2, 7 * math.pi / 4),
        "10": bloch(math.pi / 2, 3 * math.pi / 4),
        "11": bloch(math.pi / 2, 5 * math.pi / 4),
    }
    x_basis = (normalized_ket([1, 1]), normalized_ket([1, -1]))
    y_basis = (normalized_ket([1, 1j]), normalized_ket([1, -1j]))
    return RacCode(enc, ((x_basis, ("0", "1")), (y_basis, ("0", "1"))))


def qubit_code_3to1() -> RacCode:
    """Three bits in one qubit: cube vertices, x/y/z-axis readout."""
    enc = {}
    for bits in itertools.product("01", repeat=3):
        word = "".join(bits)
        vec = [1.0 if b == "0" else -1.0 for b in bits]
        enc[word] = bloch_vector_ket(vec)
    x_basis = (normalized_ket([1, 1]), normalized_ket([1, -1]))
    y_basis = (normalized_ket([1, 1j]), normalized_ket([1, -1j]))
    z_basis = (Ket([1, 0]), Ket([0, 1]))
    return RacCode(enc, ((x_basis, ("0", "1")), (y_basis, ("0", "1")),
                         (z_basis, ("0", "1"))))


# ---------------------------------------------------------------------------
# 2 -> 1 qutrit code
# ---------------------------------------------------------------------------

OMEGA = np.exp(2j * np.pi / 3)

#: cyclic shift |0>->|1>->|2>->|0>
V_TRIT = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
#: phase gate diag(1, w, w*)
U_TRIT = np.diag([1, OMEGA, OMEGA.conjugate()])


def qutrit_base_state() -> Ket:
    """Real-coefficient state maximizing the summed overlap with the first
    vectors of both qutrit MUBs.

    Uses a^2 = 1/2 - sqrt(3)/6 with a < 0 < b, which an independent scan
    confirms attains overlap^2 = 1/2 + sqrt(3)/6 with both designated
    vectors.
    """
    a2 = 0.5 - math.sqrt(3) / 6
    a = -math.sqrt(a2)
    b = math.sqrt((1 - a2) / 2)
    return Ket([a, b, b], (3,))


def qutrit_code_build() -> RacCode:
    """The nine-state 2 -> 1 qutrit code.

    The encoding states are {1, V, V^2, U, VU, V^2U, U^2, VU^2, V^2U^2}
    applied to the base state. The unitaries permute the two MUBs' vectors
    (V cycles both bases forward; U cycles basis 1 backward and basis 2
    forward), which fixes each state's designated vector pair and hence the
    trit pair it encodes.
    """
    basis = mub(3)
    words = {}
    # label permutations induced on (basis-1 index, basis-2 index)
    def v_act(pair):
        return ((pair[0] + 1) % 3, (pair[1] + 1) % 3)

    def u_act(pair):
        return ((pair[0] - 1) % 3, (pair[1] + 1) % 3)

    base = qutrit_base_state()
    for pv in range(3):
        for pu in range(3):
            mat = np.linalg.matrix_power(V_TRIT, pv) @ np.linalg.matrix_power(U_TRIT, pu)
            pair = (0, 0)
            for _ in range(pu):
                pair = u_act(pair)
            for _ in range(pv):
                pair = v_act(pair)
            word = f"{pair[0]}{pair[1]}"
            words[word] = Ket(mat @ base.amps, (3,))
    dec1 = (basis.bases[0], ("0", "1", "2"))
    dec2 = (basis.bases[1], ("0", "1", "2"))
    return RacCode(words, (dec1, dec2))


# ---------------------------------------------------------------------------
# classical random access codes
# ---------------------------------------------------------------------------

def classical_rac_optimal(m: int) -> dict:
    """Optimal deterministic m -> 1 classical random access code.

    Searches all 2^(2^m) one-bit encodings; decoding is the majority vote
    over inputs consistent with the received bit (optimal for uniform
    priors). Probabilistic protocols are convex mixtures of deterministic
    ones, so they cannot do better.
    """
    if m not in (1, 2, 3, 4):
        raise ValueError("classical_rac_optimal supports m in 1..4")
    inputs = list(itertools.product((0, 1), repeat=m))
    best = Fraction(0)
    witness = None
    for enc_bits in itertools.product((0, 1), repeat=len(inputs)):
        good = 0
        for q in range(m):
            for msg in (0, 1):
                consistent = [x for x, b in zip(inputs, enc_bits) if b == msg]
                ones = sum(x[q] for x in consistent)
                good += max(ones, len(consistent) - ones)
        p = Fraction(good, len(inputs) * m)
        if p > best:
            best = p
            witness = enc_bits
    return {"p_c": best, "witness": witness}


# ---------------------------------------------------------------------------
# invariant information
# ---------------------------------------------------------------------------

def _outcome_probs(rho: DensityOp, basis):
    return [float(np.real(np.vdot(v.amps, rho.matrix @ v.amps))) for v in basis]


def invariant_info(rho: DensityOp, bases: MubSet) -> float:
    """Sum over bases of sum_i (p_i - 1/d)^2.

    For a complete set of d+1 MUBs this equals Tr(rho^2) - 1/d, which is
    unitarily invariant.
    """
    d = bases.dimension
    if rho.dim != d:
        raise ValueError(f"state dimension {rho.dim} != basis dimension {d}")
    total = 0.0
    for basis in bases.bases:
        for p in _outcome_probs(rho, basis):
            total += (p - 1.0 / d) ** 2
    return total


def shannon_total_info(psi: Ket, bases: MubSet = None) -> float:
    """Shannon-based total 3 - H(P_x) - H(P_y) - H(P_z) for a qubit.

    Exists to demonstrate that the Shannon form is not unitarily invariant.
    """
    if bases is None:
        bases = mub(2)
    if bases.dimension != 2 or len(bases) != 3:
        raise ValueError("shannon_total_info needs the three qubit MUBs")
    rho = psi.density()
    total = 3.0
    for basis in bases.bases:
        for p in _outcome_probs(rho, basis):
            if p > 1e-15:
                total += p * math.log2(p)
    return total


def mub_equipartition_bound(d: int, n_bases: int) -> float:
    """Largest single-outcome probability compatible with equally splitting
    the invariant information (d-1)/d over n mutually unbiased measurements.

    With one dominant outcome p and the rest uniform, the information of one
    measurement is (p - 1/d)^2 * d/(d-1); setting it to ((d-1)/d)/n gives
    p = 1/d + (d-1)/(d*sqrt(n)).
    """
    if (d, n_bases) not in ((2, 2), (2, 3), (3, 2)):
        raise ValueError("supported (d, n_bases): (2,2), (2,3), (3,2)")
    return 1.0 / d + (d - 1) / (d * math.sqrt(n_bases))
