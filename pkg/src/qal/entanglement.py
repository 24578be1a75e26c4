"""PPT test, Nielsen majorization, and the numerical relative entropy of
entanglement with the tripartite consistency relations built on it."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import qmath
from .qmath import Ket, DensityOp, EIG_CLIP
from .states import ansatz_density_matrix, SeparableAnsatz

LOG2 = math.log(2.0)


def ppt_min_eig(rho: DensityOp, cut=0) -> float:
    """Minimum eigenvalue of the partial transpose across the given cut.

    `cut` is the subsystem index (or indices) to transpose. A value below
    -1e-9 certifies entanglement across the cut.
    """
    indices = sorted(set(int(c) for c in np.atleast_1d(cut)))
    n = len(rho.dims)
    if any(i < 0 or i >= n for i in indices) or not indices:
        raise ValueError("invalid bipartition")
    dims = list(rho.dims)
    t = rho.matrix.reshape(dims + dims)
    perm = list(range(2 * n))
    for i in indices:
        perm[i], perm[i + n] = perm[i + n], perm[i]
    mat = t.transpose(perm).reshape(rho.dim, rho.dim)
    return float(np.linalg.eigvalsh(mat).min())


def nielsen_convertible(psi: Ket, phi: Ket) -> bool:
    """Can psi be turned into phi by LOCC? True iff the reduced spectrum
    of psi is majorized by that of phi."""
    if psi.dims != phi.dims:
        raise ValueError("states must share dimensions")
    if len(psi.dims) != 2:
        raise ValueError("majorization test needs bipartite states")

    def spectrum(ket):
        red = qmath.partial_trace(ket.density(), [0])
        ev = np.sort(np.linalg.eigvalsh(red.matrix))[::-1]
        return np.clip(ev, 0.0, None)

    lam_psi, lam_phi = spectrum(psi), spectrum(phi)
    partial_psi = np.cumsum(lam_psi)
    partial_phi = np.cumsum(lam_phi)
    if abs(partial_psi[-1] - partial_phi[-1]) > 1e-9:
        return False
    return bool(np.all(partial_psi <= partial_phi + 1e-12))


# ---------------------------------------------------------------------------
# relative entropy of entanglement
# ---------------------------------------------------------------------------

@dataclass
class ReeResult:
    """Outcome of the separable-state search."""

    value: float
    closest: DensityOp
    iterations: int
    converged: bool
    restarts_used: int
    restart_values: tuple = ()


def _primes(count):
    out = []
    x = 2
    while len(out) < count:
        if all(x % p for p in out):
            out.append(x)
        x += 1
    return out


def _kronecker_start(index, num_terms, parties):
    """Deterministic low-discrepancy start for restart `index`."""
    npar = num_terms + 2 * num_terms * parties
    alphas = np.sqrt(_primes(npar))
    u = np.mod(0.5 + (index + 1) * alphas, 1.0)
    vec = np.empty(npar)
    vec[:num_terms] = 0.25 + 0.75 * u[:num_terms]
    ang = u[num_terms:].reshape(num_terms, parties, 2)
    vec[num_terms:] = np.stack(
        [ang[..., 0] * np.pi, ang[..., 1] * 2 * np.pi], axis=-1).reshape(-1)
    return vec


def _smoothed_relent(sigma_mat, tr_s_log_s, rho_batch):
    """D(sigma||rho) in bits with eigenvalues clipped at EIG_CLIP inside the
    log; the clip keeps the search objective finite near the PSD boundary."""
    w, v = np.linalg.eigh(rho_batch)
    w = np.clip(w, EIG_CLIP, None)
    vh = np.swapaxes(v.conj(), -1, -2)
    sv = np.einsum("...ij,jk,...ki->...i", vh, sigma_mat, v).real
    return (tr_s_log_s - np.sum(sv * np.log(w), axis=-1)) / LOG2


def _ree_single_restart(args):
    (sigma_mat, num_terms, parties, start_index, max_iter, tol,
     stop_below) = args
    x = _kronecker_start(start_index, num_terms, parties)
    npar = x.size
    ev = np.clip(np.linalg.eigvalsh(sigma_mat), 0.0, None)
    nz = ev > EIG_CLIP
    tr_s_log_s = float((ev[nz] * np.log(ev[nz])).sum())

    def vals(batch):
        return _smoothed_relent(sigma_mat, tr_s_log_s,
                                ansatz_density_matrix(batch, num_terms, parties))

    f = float(vals(x))
    eye = np.eye(npar)
    h = 1e-6
    step = 0.1
    scales = np.array([2.0, 1.0, 0.5, 0.25, 0.0625])
    iterations = 0
    converged = False
    while iterations < max_iter:
        if stop_below and f < stop_below:
            converged = True
            break
        iterations += 1
        batch = np.concatenate([x + h * eye, x - h * eye], axis=0)
        fs = vals(batch)
        grad = (fs[:npar] - fs[npar:]) / (2 * h)
        if np.linalg.norm(grad) < 1e-12:
            converged = True
            break
        # backtracking line search, a few trial steps per batch
        improved = False
        while step > 1e-14:
            trial = x[None, :] - (step * scales)[:, None] * grad[None, :]
            f_trial = vals(trial)
            k = int(np.argmin(f_trial))
            if f_trial[k] < f:
                f_cand = float(f_trial[k])
                cand = trial[k]
                step = step * scales[k]
                improved = True
                break
            step /= 16
        if not improved:
            converged = True
            break
        # the floor keeps the relative criterion meaningful as f approaches
        # zero on separable inputs
        rel = (f - f_cand) / max(abs(f), 1e-12)
        x, f = cand, f_cand
        if rel < tol:
            converged = True
            break
    return f, x, iterations, converged


def _worker_count():
    raw = os.environ.get("QAL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ree(sigma: DensityOp, num_terms=None, restarts=None, tol=1e-9,
        max_iter=100000, threads=None, stop_below=0.0) -> ReeResult:
    """Relative entropy of entanglement by gradient search.

    Minimizes D(sigma||rho) over the squared-weight product-state ansatz
    (K = 4 terms for two qubits, K = 64 for three) with numerical
    central-difference gradients and a backtracking line search. Restarts
    start from a deterministic low-discrepancy sequence and the best value
    wins (ties toward the first restart). The final value is recomputed
    without the search-time eigenvalue smoothing.

    The returned value is an upper bound on the true minimum by
    construction; `stop_below` optionally ends a restart early once the
    bound is already that small.
    """
    if sigma.dims == (2, 2):
        num_terms = num_terms or 4
        restarts = restarts or 8
    elif sigma.dims == (2, 2, 2):
        num_terms = num_terms or 64
        restarts = restarts or 4
    else:
        raise ValueError("ree supports 2-qubit and 3-qubit states")
    parties = len(sigma.dims)
    jobs = [(sigma.matrix, num_terms, parties, r, max_iter, tol,
             stop_below) for r in range(restarts)]
    threads = _worker_count() if threads is None else max(1, threads)
    if threads > 1 and restarts > 1:
        with ProcessPoolExecutor(max_workers=min(threads, restarts)) as pool:
            results = list(pool.map(_ree_single_restart, jobs))
    else:
        results = [_ree_single_restart(j) for j in jobs]
    best_idx = min(range(len(results)), key=lambda i: results[i][0])
    f, x, iterations, converged = results[best_idx]
    ansatz = SeparableAnsatz.from_vector(x, num_terms, parties)
    closest = DensityOp(ansatz_density_matrix(x, num_terms, parties),
                        (2,) * parties)
    final = qmath.relative_entropy(sigma, closest)
    if not math.isfinite(final):
        final = f
        converged = False
    return ReeResult(value=float(final), closest=closest,
                     iterations=iterations, converged=converged,
                     restarts_used=restarts,
                     restart_values=tuple(r[0] for r in results))


def ree_w3(restarts=4, **kwargs) -> ReeResult:
    """REE of the three-qubit W state via the 447-parameter search."""
    from .states import named_state
    return ree(named_state("w3").density(), restarts=restarts, **kwargs)


# ---------------------------------------------------------------------------
# tripartite consistency relations
# ---------------------------------------------------------------------------

def wclass_prediction(f2: float) -> float:
    """Closed-form E(sigma_AB) required by the consistency relations:
    (f^2 - 1) log2(1 - f^2) - 2 f^2 log2(2 f^2) + f^2 log2(f^2)."""
    if not 0.0 < f2 < 0.5:
        raise ValueError("f^2 must lie in (0, 1/2)")
    return ((f2 - 1) * math.log2(1 - f2) - 2 * f2 * math.log2(2 * f2)
            + f2 * math.log2(f2))


def wclass_bc_closed(f2: float) -> float:
    """Known closed form for E(sigma_BC) of the W class:
    2 (f^2 - 1) log2(1 - f^2) + (1 - 2 f^2) log2(1 - 2 f^2)."""
    if not 0.0 < f2 < 0.5:
        raise ValueError("f^2 must lie in (0, 1/2)")
    return 2 * (f2 - 1) * math.log2(1 - f2) + (1 - 2 * f2) * math.log2(1 - 2 * f2)


def corcond_residuals(psi: Ket, restarts=8, **kwargs) -> dict:
    """Residuals of the entropy/entanglement consistency relations.

    Computes s_ij = E(sigma_ij) for the three two-party reductions of the
    pure three-qubit state, solves g from the party-A relation
    S(sigma_A) = g + s_AB + s_AC, and reports the residuals of all three
    relations (the A residual vanishes by construction). Nonzero residuals
    flag states whose single-copy entanglement pattern cannot match any
    tensor-product decomposition into pair and GHZ entanglement, assuming
    additivity.
    """
    if psi.dims != (2, 2, 2):
        raise ValueError("corcond_residuals needs a pure three-qubit state")
    rho = psi.density()
    pairs = {"ab": (0, 1), "ac": (0, 2), "bc": (1, 2)}
    s = {}
    for name, keep in pairs.items():
        reduced = qmath.partial_trace(rho, list(keep))
        s[name] = ree(reduced, restarts=restarts, **kwargs).value
    ent = {p: qmath.vn_entropy(qmath.partial_trace(rho, [i]))
           for p, i in zip("abc", range(3))}
    g = ent["a"] - s["ab"] - s["ac"]
    residuals = (
        ent["a"] - (g + s["ab"] + s["ac"]),
        ent["b"] - (g + s["ab"] + s["bc"]),
        ent["c"] - (g + s["ac"] + s["bc"]),
    )
    return {"s_ab": s["ab"], "s_ac": s["ac"], "s_bc": s["bc"], "g": g,
            "entropies": ent, "residuals": residuals}
