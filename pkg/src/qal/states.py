"""Named states, mutually unbiased bases and the separable-mixture ansatz."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmath import Ket, DensityOp, normalized_ket

SQ2 = math.sqrt(2.0)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


def bloch(theta: float, phi: float) -> Ket:
    """Qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return Ket([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)], (2,))


def bloch_vector_ket(n) -> Ket:
    """Qubit pointing along the (unnormalized) Bloch vector n = (x, y, z)."""
    x, y, z = np.asarray(n, dtype=float) / np.linalg.norm(n)
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x)
    return bloch(theta, phi)


def _check(cond, message):
    if not cond:
        raise ValueError(message)


def named_state(name: str, **params) -> Ket:
    """Construct one of the named states used throughout the toolkit.

    Accepted names: bell-phi-minus, bell-psi-plus, ghz, w3, w-class,
    lambda, hardy, bloch. Parameter constraints are enforced to 1e-9 and the
    violated constraint is named in the error.
    """
    name = name.lower()
    if name == "bell-phi-minus":
        # (|01> - |10>)/sqrt(2), the singlet
        return Ket(np.array([0, 1, -1, 0]) / SQ2, (2, 2))
    if name == "bell-psi-plus":
        return Ket(np.array([1, 0, 0, 1]) / SQ2, (2, 2))
    if name == "ghz":
        n = int(params.get("n", 3))
        phase = float(params.get("phase", 0.0))
        _check(n >= 2, "ghz needs n >= 2 parties")
        amps = np.zeros(2 ** n, dtype=complex)
        amps[0] = 1 / SQ2
        amps[-1] = np.exp(1j * phase) / SQ2
        return Ket(amps, (2,) * n)
    if name == "w3":
        amps = np.zeros(8, dtype=complex)
        amps[[1, 2, 4]] = 1 / math.sqrt(3)
        return Ket(amps, (2, 2, 2))
    if name == "w-class":
        # e|000> + f|101> + f|110>, constraint e^2 + 2 f^2 = 1
        if "f2" in params:
            f2 = float(params["f2"])
            _check(0 <= f2 <= 0.5, "w-class needs 0 <= f^2 <= 1/2")
            e, f = math.sqrt(1 - 2 * f2), math.sqrt(f2)
        else:
            e, f = float(params["e"]), float(params["f"])
        _check(abs(e * e + 2 * f * f - 1) <= 1e-9,
               "w-class constraint e^2 + 2 f^2 = 1 violated")
        amps = np.zeros(8, dtype=complex)
        amps[0] = e
        amps[5] = f
        amps[6] = f
        return Ket(amps, (2, 2, 2))
    if name == "lambda":
        # a|000> + b(|100> + |101> + |110> + |111>), constraint a^2 + 4 b^2 = 1
        a, b = float(params["a"]), float(params["b"])
        _check(abs(a * a + 4 * b * b - 1) <= 1e-9,
               "lambda constraint a^2 + 4 b^2 = 1 violated")
        amps = np.zeros(8, dtype=complex)
        amps[0] = a
        amps[4:8] = b
        return Ket(amps, (2, 2, 2))
    if name == "hardy":
        return hardy_state(params["alpha_a"], params["alpha_b"],
                           params["beta_a"], params["beta_b"])
    if name == "bloch":
        return bloch(float(params["theta"]), float(params.get("phi", 0.0)))
    raise ValueError(f"unknown state name {name!r}")


def hardy_state(alpha_a, alpha_b, beta_a, beta_b) -> Ket:
    """Two-qubit state N(|hh> - aA aB |aa>) written in the a/d basis.

    The local frames are |h> = alpha|a> + beta|d> and |c> = beta*|a> - alpha*|d>;
    per party |alpha|^2 + |beta|^2 = 1 must hold. The normalization constant
    is computed numerically.
    """
    for label, (al, be) in (("A", (alpha_a, beta_a)), ("B", (alpha_b, beta_b))):
        _check(abs(abs(al) ** 2 + abs(be) ** 2 - 1) <= 1e-9,
               f"hardy party {label} constraint |alpha|^2 + |beta|^2 = 1 violated")
    # expanding cancels the |aa> component exactly
    amps = np.array([0.0,
                     alpha_a * beta_b,
                     beta_a * alpha_b,
                     beta_a * beta_b], dtype=complex)
    return normalized_ket(amps, (2, 2))


@dataclass(frozen=True)
class MubSet:
    """A list of pairwise mutually unbiased orthonormal bases."""

    dimension: int
    bases: tuple

    def __post_init__(self):
        d = self.dimension
        for basis in self.bases:
            if len(basis) != d:
                raise ValueError("each basis must have d vectors")
            for i, u in enumerate(basis):
                for j, v in enumerate(basis):
                    ov = abs(u.overlap(v)) ** 2
                    want = 1.0 if i == j else 0.0
                    if abs(ov - want) > 1e-10:
                        raise ValueError("basis is not orthonormal")
        for b1 in range(len(self.bases)):
            for b2 in range(b1 + 1, len(self.bases)):
                for u in self.bases[b1]:
                    for v in self.bases[b2]:
                        if abs(abs(u.overlap(v)) ** 2 - 1.0 / d) > 1e-10:
                            raise ValueError("bases are not mutually unbiased")

    def __len__(self):
        return len(self.bases)


def mub(d: int) -> MubSet:
    """MUBs used by the random access codes.

    d=2 gives the x, y, z eigenbases (in that order); d=3 gives the two
    explicit qutrit bases built from omega = exp(2 pi i / 3).
    """
    if d == 2:
        x = (normalized_ket([1, 1]), normalized_ket([1, -1]))
        y = (normalized_ket([1, 1j]), normalized_ket([1, -1j]))
        z = (Ket([1, 0]), Ket([0, 1]))
        return MubSet(2, (x, y, z))
    if d == 3:
        w = np.exp(2j * np.pi / 3)
        first = tuple(normalized_ket(v, (3,)) for v in
                      ([w, 1, 1], [1, w, 1], [1, 1, w]))
        second = tuple(normalized_ket(v, (3,)) for v in
                       ([w.conjugate(), 1, 1], [1, w.conjugate(), 1],
                        [1, 1, w.conjugate()]))
        return MubSet(3, (first, second))
    raise ValueError(f"mub(d) supports d in {{2, 3}}, got {d}")


# ---------------------------------------------------------------------------
# separable ansatz
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparableAnsatz:
    """Convex mixture of K product pure states over `parties` qubits.

    Weights are stored as raw reals w_i and induce probabilities
    p_i = w_i^2 / sum w_j^2, which keeps the simplex constraint implicit and
    the map to density operators smooth. ``angles`` has shape (K, parties, 2)
    holding Bloch (theta, phi) per term and party.
    """

    weights: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        ang = np.asarray(self.angles, dtype=float)
        if ang.ndim != 3 or ang.shape[0] != w.size or ang.shape[2] != 2:
            raise ValueError("angles must have shape (K, parties, 2)")
        if np.sum(w * w) < 1e-300:
            raise ValueError("weights must not all vanish")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "angles", ang)
        w.flags.writeable = False
        ang.flags.writeable = False

    @property
    def num_terms(self):
        return self.weights.size

    @property
    def parties(self):
        return self.angles.shape[1]

    @property
    def parameter_count(self):
        """Independent real parameters: (K - 1) weights + 2 angles/party/term."""
        k, p = self.num_terms, self.parties
        return (k - 1) + 2 * k * p

    def probabilities(self):
        p = self.weights ** 2
        return p / p.sum()

    def as_vector(self):
        return np.concatenate([self.weights, self.angles.reshape(-1)])

    @classmethod
    def from_vector(cls, vec, num_terms, parties):
        vec = np.asarray(vec, dtype=float)
        k = num_terms
        return cls(vec[:k], vec[k:].reshape(k, parties, 2))


def product_kets_batch(angles):
    """Batched product-state amplitudes.

    angles: array (..., P, 2) of Bloch (theta, phi) angles for P qubits.
    Returns amplitudes of shape (..., 2**P).
    """
    angles = np.asarray(angles, dtype=float)
    th = angles[..., 0]
    ph = angles[..., 1]
    single = np.stack([np.cos(th / 2) + 0j,
                       np.exp(1j * ph) * np.sin(th / 2)], axis=-1)
    out = single[..., 0, :]
    for p in range(1, single.shape[-2]):
        out = np.einsum("...i,...j->...ij", out, single[..., p, :])
        out = out.reshape(*out.shape[:-2], -1)
    return out


def ansatz_density_matrix(vec, num_terms, parties):
    """Density matrices for a batch of ansatz parameter vectors.

    vec: (..., K + 2*K*parties) raw parameter vectors (weights then angles).
    Returns (..., d, d) with d = 2**parties. Smooth in every parameter.
    """
    vec = np.asarray(vec, dtype=float)
    k = num_terms
    w = vec[..., :k]
    ang = vec[..., k:].reshape(*vec.shape[:-1], k, parties, 2)
    p = w * w
    p = p / p.sum(axis=-1, keepdims=True)
    kets = product_kets_batch(ang)
    return np.einsum("...k,...ki,...kj->...ij", p, kets, kets.conj())


def ansatz_to_density(a: SeparableAnsatz) -> DensityOp:
    """Separable DensityOp induced by the ansatz."""
    m = ansatz_density_matrix(a.as_vector(), a.num_terms, a.parties)
    return DensityOp(m, (2,) * a.parties)


def random_ansatz(rng, num_terms, parties) -> SeparableAnsatz:
    """Random ansatz with uniform weights in (0.2, 1) and angles on the sphere."""
    w = rng.uniform(0.2, 1.0, num_terms)
    ang = np.stack([rng.uniform(0, np.pi, (num_terms, parties)),
                    rng.uniform(0, 2 * np.pi, (num_terms, parties))], axis=-1)
    return SeparableAnsatz(w, ang)
