"""Fast invariant suite behind `qal selfcheck`.

Each check re-derives a handful of the library's contracts from scratch and
compares against stored constants; the whole run (excluding the three-qubit
entanglement searches) stays under a minute.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import (cloning, commcx, entanglement, feasibility, fieldtask,
               nonlocality, qmath, rac, reference, states)


def _close(a, b, tol):
    return abs(float(a) - float(b)) <= tol


def run_selfcheck(include_3q=False, fault=None):
    """Run the invariant suite; returns (passed, failed, details).

    `fault` optionally names a stored constant table to perturb by 1e-3, a
    harness hook demonstrating that mismatches are caught.
    """
    seq_table = dict(reference.SEQ_TABLE)
    if fault == "table-8.1":
        seq_table[3] = float(seq_table[3]) + 1e-3

    checks = []

    def check(name, fn):
        checks.append((name, fn))

    check("chsh singlet value 2*sqrt(2)", lambda: _close(
        nonlocality.chsh_value(states.named_state("bell-phi-minus")),
        reference.CHSH_MAX, 1e-9))
    check("chsh probability form 4 cos^2(pi/8)", lambda: _close(
        nonlocality.chsh_prob_form(states.named_state("bell-phi-minus")),
        reference.CHSH_PROB_MAX, 1e-9))
    check("hardy maximum 1/tau^5", lambda: _close(
        nonlocality.hardy_maximize(restarts=6)["p_cc"],
        reference.HARDY_MAX, 1e-6))
    check("mermin square has no assignment", lambda:
          nonlocality.mermin_square()["assignment_exists"] is False)
    check("peres record", lambda:
          nonlocality.peres_contradiction() == {
              "eigen_constraints": (-1, -1, -1),
              "direct_AB": -1, "factored_AB": 1})

    check("2->1 qubit code", lambda: _close(
        rac.qrac_success(rac.qubit_code_2to1())["average"],
        reference.P_2TO1_QUBIT, 1e-9))
    check("3->1 qubit code", lambda: _close(
        rac.qrac_success(rac.qubit_code_3to1())["average"],
        reference.P_3TO1_QUBIT, 1e-9))
    check("2->1 qutrit code", lambda: _close(
        rac.qrac_success(rac.qutrit_code_build())["average"],
        reference.P_2TO1_QUTRIT, 1e-9))
    check("classical RAC optima", lambda:
          rac.classical_rac_optimal(2)["p_c"] == Fraction(3, 4)
          and rac.classical_rac_optimal(3)["p_c"] == Fraction(3, 4))

    def invariant_info_identity():
        rng = np.random.default_rng(11)
        bases = states.mub(2)
        for _ in range(50):
            z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = z @ z.conj().T
            m = m / np.trace(m)
            rho = qmath.DensityOp(m, (2,))
            if not _close(rac.invariant_info(rho, bases),
                          rho.purity() - 0.5, 1e-10):
                return False
        return True

    check("invariant information = purity - 1/d", invariant_info_identity)
    check("equipartition bounds", lambda: all(
        _close(rac.mub_equipartition_bound(d, n), v, 1e-9)
        for (d, n), v in reference.EQUIPARTITION.items()))

    def classical_tables():
        for n, want in seq_table.items():
            if commcx.classical_opt_sequential(n)["p_c"] != want:
                return False
        for n, want in reference.BROADCAST_TABLE.items():
            if commcx.classical_opt_broadcast(n)["p_c"] != want:
                return False
        return True

    check("classical communication tables", classical_tables)

    def quantum_protocols():
        for xs in commcx.promise_instances(4):
            inst = commcx.Mod4Instance(xs)
            dist = commcx.ghz_outcome_distribution(inst)
            parity = np.array([bin(i).count("1") % 2 for i in range(dist.size)])
            if dist[parity != inst.answer].sum() > 1e-12:
                return False
            if commcx.quantum_qubit_protocol(inst) != inst.answer:
                return False
        return True

    check("quantum protocols exact on n=4 promise inputs", quantum_protocols)

    def teleport_branches():
        inst = commcx.Mod4Instance((1, 1, 2))
        return set(commcx.teleport_chain_all_branches(inst)) == {inst.answer}

    check("teleport chain branch-independent", teleport_branches)

    def field_task():
        for ks in ((1, 1), (3, 2, 3), (7, 7, 7, 3)):
            kk = 2 if len(ks) == 2 else 4
            inst = fieldtask.FieldTaskInstance(ks, kk)
            if fieldtask.field_task_quantum(inst) != inst.parity:
                return False
        proto = fieldtask.counting_protocol(3, 4)
        return fieldtask.protocol_is_perfect(proto)

    check("field task quantum protocol and counting protocol", field_task)

    check("feasibility boundaries", lambda: all((
        _close(feasibility.multiparty_mu_min(n),
               reference.MULTIPARTY_BOUNDS[n]["mu_min"], 1e-9)
        and _close(feasibility.multiparty_eta_min(n),
                   reference.MULTIPARTY_BOUNDS[n]["eta_min"], 1e-3))
        for n in range(3, 8)))
    check("qrac feasibility boundaries", lambda:
          _close(feasibility.qrac_ent_mu_boundary(1.0), reference.QRAC_MU_MIN, 1e-9)
          and _close(feasibility.qrac_ent_eta_min(), reference.QRAC_ETA_MIN, 1e-9))

    def cloning_checks():
        if cloning.uqcm_fidelity(1, 2, 2) != Fraction(5, 6):
            return False
        scores = cloning.task_scores(2, 2)
        if (scores["f_cloning"], scores["f_estimate"], scores["f_single"]) != \
                (Fraction(5, 6), Fraction(2, 3), Fraction(3, 4)):
            return False
        for n_in in (1, 2, 5):
            for m_out in (n_in + 1, n_in + 7):
                for d in (2, 3, 16):
                    bal = cloning.fidelity_balance(n_in, m_out, d)
                    if bal["iq_before"] != bal["iq_after"]:
                        return False
        pipe = cloning.chapter6_pipeline()
        return (pipe["h_basis_orthonormal"]
                and pipe["printed_gamma_min_eig"] >= -1e-9
                and pipe["p1"] == reference.P1_NO_CLONING
                and _close(pipe["p2"], reference.P2_CLONING, 1e-3))

    check("cloning formulas and pipeline", cloning_checks)

    def entanglement_quick():
        bell = states.named_state("bell-psi-plus").density()
        if not _close(entanglement.ppt_min_eig(bell, 0), -0.5, 1e-9):
            return False
        res = entanglement.ree(bell, restarts=2)
        return _close(res.value, 1.0, 2e-3)

    check("ppt and 2-qubit relative entropy of entanglement", entanglement_quick)

    if include_3q:
        check("3-qubit relative entropy of entanglement", lambda: _close(
            entanglement.ree_w3(restarts=2).value, reference.E_W3, 5e-3))

    passed, failed, details = 0, 0, []
    for name, fn in checks:
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash counts as a failure, with context
            ok = False
            name = f"{name} ({exc})"
        if ok:
            passed += 1
        else:
            failed += 1
        details.append({"check": name, "ok": ok})
    return passed, failed, details
