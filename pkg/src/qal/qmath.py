"""Dense complex linear algebra for small Hilbert spaces (dim <= 32).

Kets and density operators carry an explicit list of subsystem dimensions so
that tensor products, partial traces and partial transposes can be expressed
in terms of subsystem indices. Everything is immutable after construction and
all operations are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-10
HERM_TOL = 1e-10
PSD_TOL = -1e-9
#: eigenvalues below this are treated as exact zeros inside logarithms
EIG_CLIP = 1e-12

LOG2 = math.log(2.0)


def _as_complex(a):
    return np.asarray(a, dtype=complex)


@dataclass(frozen=True)
class Ket:
    """Normalized pure state over a composite Hilbert space."""

    amps: np.ndarray
    dims: tuple = (2,)

    def __post_init__(self):
        amps = _as_complex(self.amps).reshape(-1)
        dims = tuple(int(d) for d in np.atleast_1d(self.dims))
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "dims", dims)
        if any(d <= 0 for d in dims):
            raise ValueError("subsystem dimensions must be positive")
        if math.prod(dims) != amps.size:
            raise ValueError(
                f"product of dims {dims} != amplitude count {amps.size}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"ket not normalized: |psi| = {norm!r}")
        amps.flags.writeable = False

    @property
    def dim(self):
        return self.amps.size

    def density(self) -> "DensityOp":
        return DensityOp(np.outer(self.amps, self.amps.conj()), self.dims)

    def overlap(self, other: "Ket") -> complex:
        return complex(np.vdot(self.amps, other.amps))


def normalized_ket(amps, dims=None) -> Ket:
    """Build a Ket from an unnormalized amplitude vector."""
    amps = _as_complex(amps).reshape(-1)
    norm = np.linalg.norm(amps)
    if norm < 1e-300:
        raise ValueError("cannot normalize the zero vector")
    if dims is None:
        dims = (amps.size,)
    return Ket(amps / norm, dims)


@dataclass(frozen=True)
class DensityOp:
    """Hermitian, unit-trace, positive-semidefinite operator."""

    matrix: np.ndarray
    dims: tuple = (2,)

    def __post_init__(self):
        m = _as_complex(self.matrix)
        dims = tuple(int(d) for d in np.atleast_1d(self.dims))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        d = math.prod(dims)
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
        if np.abs(m - m.conj().T).max() > HERM_TOL:
            raise ValueError("matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"trace is {tr!r}, expected 1")
        min_eig = float(np.linalg.eigvalsh(m).min())
        if min_eig < PSD_TOL:
            raise ValueError(f"matrix is not PSD: min eigenvalue {min_eig!r}")
        m.flags.writeable = False

    @property
    def dim(self):
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def _same_kind(a, b):
    return (isinstance(a, Ket) and isinstance(b, Ket)) or (
        isinstance(a, DensityOp) and isinstance(b, DensityOp))


def tensor(a, b):
    """Kronecker product of two Kets or two DensityOps; dims concatenate."""
    if not _same_kind(a, b):
        raise TypeError("tensor requires two Kets or two DensityOps")
    if isinstance(a, Ket):
        return Ket(np.kron(a.amps, b.amps), a.dims + b.dims)
    return DensityOp(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def partial_trace(rho: DensityOp, keep) -> DensityOp:
    """Reduced state on the subsystems listed in `keep` (0-indexed)."""
    keep = sorted(set(int(k) for k in np.atleast_1d(keep)))
    n = len(rho.dims)
    if not keep:
        raise ValueError("keep must be non-empty")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    dims = list(rho.dims)
    r = rho.matrix.reshape(dims + dims)
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        r = np.trace(r, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    d = math.prod(dims)
    return DensityOp(r.reshape(d, d), tuple(dims))


def partial_transpose(rho: DensityOp, subsystem: int) -> np.ndarray:
    """Transpose one subsystem's indices; result need not be PSD."""
    n = len(rho.dims)
    if not 0 <= subsystem < n:
        raise ValueError(f"subsystem {subsystem} out of range")
    dims = list(rho.dims)
    r = rho.matrix.reshape(dims + dims)
    perm = list(range(2 * n))
    perm[subsystem], perm[subsystem + n] = perm[subsystem + n], perm[subsystem]
    d = rho.dim
    return r.transpose(perm).reshape(d, d)


def herm_eig(m):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with real eigenvalues sorted in
    descending order and eigenvectors as matching columns.
    """
    m = _as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if np.abs(m - m.conj().T).max() > 1e-8:
        raise ValueError("matrix is not Hermitian")
    evals, evecs = np.linalg.eigh(m)
    order = np.argsort(evals)[::-1]
    return evals[order].astype(float), evecs[:, order]


def vn_entropy(rho: DensityOp) -> float:
    """Von Neumann entropy in bits; eigenvalues below EIG_CLIP count as zero."""
    evals = np.linalg.eigvalsh(rho.matrix)
    evals = evals[evals > EIG_CLIP]
    return float(-(evals * np.log(evals)).sum() / LOG2)


def relative_entropy(sigma: DensityOp, rho: DensityOp) -> float:
    """Quantum relative entropy D(sigma||rho) in bits.

    Returns math.inf when the support of sigma is not contained in the
    support of rho (support detected at the EIG_CLIP eigenvalue threshold).
    """
    if sigma.dims != rho.dims:
        raise ValueError(f"dimension mismatch: {sigma.dims} vs {rho.dims}")
    ev_s = np.linalg.eigvalsh(sigma.matrix)
    ev_s = np.clip(ev_s, 0.0, None)
    nz = ev_s > EIG_CLIP
    tr_s_log_s = float((ev_s[nz] * np.log(ev_s[nz])).sum())

    ev_r, vec_r = np.linalg.eigh(rho.matrix)
    weights = np.einsum("ij,jk,ki->i", vec_r.conj().T, sigma.matrix, vec_r).real
    weights = np.clip(weights, 0.0, None)
    dead = ev_r <= EIG_CLIP
    if np.any(weights[dead] > EIG_CLIP):
        return math.inf
    live = ~dead
    tr_s_log_r = float((weights[live] * np.log(ev_r[live])).sum())
    val = (tr_s_log_s - tr_s_log_r) / LOG2
    # Klein inequality guarantees val >= 0; only float noise can dip below
    return 0.0 if -1e-9 < val < 0.0 else val


def fidelity_pure(psi: Ket, rho: DensityOp) -> float:
    """F = <psi|rho|psi> in [0, 1]."""
    if psi.dims != rho.dims:
        raise ValueError(f"dimension mismatch: {psi.dims} vs {rho.dims}")
    val = float(np.real(np.vdot(psi.amps, rho.matrix @ psi.amps)))
    return min(1.0, max(0.0, val))
