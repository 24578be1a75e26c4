"""Detector-efficiency / background regions where each quantum protocol
beats its optimal classical counterpart."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import commcx

P_Q_QRAC = math.cos(math.pi / 8) ** 2   # 2->1 qubit QRAC success
P_C_QRAC = 0.75                          # optimal classical 2->1 RAC


@dataclass(frozen=True)
class NoiseModel:
    """Detection efficiency eta, signal fraction mu (background 1 - mu),
    optional transmissivity t and aligned-success rate s."""

    eta: float
    mu: float = 1.0
    t: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        for name in ("eta", "mu", "t", "s"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@lru_cache(maxsize=None)
def broadcast_pc(n: int) -> Fraction:
    return commcx.classical_opt_broadcast(n)["p_c"]


@lru_cache(maxsize=None)
def sequential_pc(n: int) -> Fraction:
    return commcx.classical_opt_sequential(n)["p_c"]


def qrac_qubitcomm_beats(nm: NoiseModel) -> dict:
    """Qubit-communication QRAC: eta*mu*p_q + (1 - eta*mu)/2 > 3/4."""
    lhs = nm.eta * nm.mu * P_Q_QRAC + (1 - nm.eta * nm.mu) / 2
    margin = lhs - P_C_QRAC
    return {"beats": margin > 0, "margin": margin}


def qrac_entanglement_beats(nm: NoiseModel) -> dict:
    """Entanglement-based QRAC with N = 2 detections.

    eta^2 mu^2 p_q + (1-eta)^2 p_c + (1 - eta^2 mu^2 - (1-eta)^2)/2 > p_c.
    """
    e2m2 = (nm.eta * nm.mu) ** 2
    miss2 = (1 - nm.eta) ** 2
    lhs = e2m2 * P_Q_QRAC + miss2 * P_C_QRAC + (1 - e2m2 - miss2) / 2
    margin = lhs - P_C_QRAC
    return {"beats": margin > 0, "margin": margin}


def multiparty_ent_beats(n: int, nm: NoiseModel) -> dict:
    """GHZ protocol with N detections against the broadcast optimum.

    eta^N mu^N p_q + (1-eta)^N p_c + (1 - eta^N mu^N - (1-eta)^N)/2 > p_c,
    with p_q = 1.
    """
    if not 3 <= n <= 7:
        raise ValueError("multiparty_ent_beats supports n in 3..7")
    p_c = float(broadcast_pc(n))
    hit = (nm.eta * nm.mu) ** n
    miss = (1 - nm.eta) ** n
    lhs = hit * 1.0 + miss * p_c + (1 - hit - miss) / 2
    margin = lhs - p_c
    return {"beats": margin > 0, "margin": margin}


def qubitcomm_multiparty_beats(n: int, nm: NoiseModel) -> dict:
    """Flying-qubit protocol with optics parameters t and s.

    mu*eta*t*s + (1 - mu*eta*t)/2 > p_c (sequential optimum). Also returns
    the detection-efficiency threshold solving the equality, infinite when
    s <= 1/2 makes the protocol unable to beat the classical optimum.
    """
    if not 3 <= n <= 8:
        raise ValueError("qubitcomm_multiparty_beats supports n in 3..8")
    p_c = float(sequential_pc(n))
    lhs = nm.mu * nm.eta * nm.t * nm.s + (1 - nm.mu * nm.eta * nm.t) / 2
    margin = lhs - p_c
    denom = nm.mu * nm.t * (nm.s - 0.5)
    threshold = (p_c - 0.5) / denom if denom > 0 else math.inf
    return {"beats": margin > 0, "margin": margin, "eta_threshold": threshold}


def werner_threshold(n: int) -> dict:
    """Mixedness threshold epsilon > 2 p_c - 1 for the GHZ protocol.

    The conjectured closed form 2^(-(N-1)/2) is reported alongside for odd N
    and never asserted.
    """
    p_c = broadcast_pc(n)
    out = {"epsilon": 2 * p_c - 1}
    if n % 2 == 1:
        out["conjecture"] = Fraction(1, 2 ** ((n - 1) // 2))
    return out


# ---------------------------------------------------------------------------
# boundaries and region scans
# ---------------------------------------------------------------------------

def _bisect_root(fn, lo, hi, tol=1e-12):
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        return math.nan
    for _ in range(200):
        mid = (lo + hi) / 2
        fm = fn(mid)
        if fm == 0 or (hi - lo) < tol:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return (lo + hi) / 2


def multiparty_mu_min(n: int) -> float:
    """mu at eta = 1: closed form (2 p_c - 1)^(1/N)."""
    return float(2 * broadcast_pc(n) - 1) ** (1.0 / n)


def multiparty_eta_min(n: int) -> float:
    """eta at mu = 1, by bisection of the margin."""
    return _bisect_root(
        lambda e: multiparty_ent_beats(n, NoiseModel(eta=e, mu=1.0))["margin"],
        1e-9, 1.0)


def multiparty_mu_boundary(n: int, eta: float) -> float:
    """Closed-form boundary mu(eta) of the N-party GHZ region."""
    p_c = float(broadcast_pc(n))
    rhs = (p_c - 0.5) * (1 - (1 - eta) ** n) * 2
    if rhs <= 0:
        return 0.0
    mu = rhs ** (1.0 / n) / eta
    return mu


def qrac_ent_mu_boundary(eta: float) -> float:
    """mu(eta) boundary of the entanglement QRAC region: the printed form
    (1/2)^(1/4) * sqrt(2/eta - 1)."""
    if eta <= 0:
        return math.inf
    return (0.5 ** 0.25) * math.sqrt(2 / eta - 1)


def qrac_ent_eta_min() -> float:
    """eta at mu = 1: 2(sqrt(2) - 1)."""
    return _bisect_root(
        lambda e: qrac_entanglement_beats(NoiseModel(eta=e, mu=1.0))["margin"],
        1e-9, 1.0)


_PROTOCOLS = {
    "qrac-qubit": lambda nm, n: qrac_qubitcomm_beats(nm),
    "qrac-ent": lambda nm, n: qrac_entanglement_beats(nm),
    "multi-ent": lambda nm, n: multiparty_ent_beats(n, nm),
    "multi-qubit": lambda nm, n: qubitcomm_multiparty_beats(n, nm),
}


def region_scan(which: str, grid: int = 401, n: int = 5) -> dict:
    """Boolean eta x mu grid plus the mu(eta) boundary polyline.

    Rows are ordered by (eta ascending, mu ascending). `grid` points per
    axis, at most 2001.
    """
    if which not in _PROTOCOLS:
        raise ValueError(f"unknown protocol {which!r}")
    if not 2 <= grid <= 2001:
        raise ValueError("grid resolution must lie in 2..2001")
    fn = _PROTOCOLS[which]
    rows = []
    boundary = []
    for i in range(grid):
        eta = i / (grid - 1)
        for j in range(grid):
            mu = j / (grid - 1)
            try:
                beats = fn(NoiseModel(eta=eta, mu=mu), n)["beats"]
            except ZeroDivisionError:
                beats = False
            rows.append((eta, mu, 1 if beats else 0))
        margin_at = lambda m: fn(NoiseModel(eta=eta, mu=m), n)["margin"]
        if margin_at(1.0) > 0 >= margin_at(0.0):
            boundary.append((eta, _bisect_root(margin_at, 0.0, 1.0)))
    return {"rows": rows, "boundary": boundary, "protocol": which, "n": n}
