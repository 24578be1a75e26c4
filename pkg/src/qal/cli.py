"""Command-line entry point.

Every subcommand prints JSON (or CSV for grid scans) built with fixed
formatting: floats at 12 significant digits, exact rationals as "num/den"
strings, keys sorted. Runs with the same configuration are byte-identical.

Exit codes: 0 success, 2 usage error, 3 numerical mismatch beyond tolerance,
4 resource error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import (cloning, commcx, entanglement, feasibility, fieldtask,
               nonlocality, qmath, rac, reference, selfcheck, states)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_RESOURCE = 4


def _fmt(value):
    """Recursively convert a result into JSON-ready deterministic form."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if math.isinf(f):
            return "inf"
        return float(f"{f:.12g}")
    if isinstance(value, complex):
        return [_fmt(value.real), _fmt(value.imag)]
    if isinstance(value, dict):
        return {str(k): _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_fmt(v) for v in value]
    if isinstance(value, qmath.Ket):
        return {"amps": [[_fmt(a.real), _fmt(a.imag)] for a in value.amps],
                "dims": list(value.dims)}
    if isinstance(value, (commcx.DetProtocol,)):
        return {"prot1": "".join(map(str, value.prot1)),
                "middle": ["".join(map(str, w)) for w in value.middle]}
    if isinstance(value, fieldtask.SequentialProtocol):
        return {"n": value.n, "K": value.big_k, "L": value.alphabet,
                "first": list(value.first),
                "middle": [{f"{l},{k}": m for (l, k), m in sorted(t.items())}
                           for t in value.middle]}
    if hasattr(value, "__dict__"):
        return {k: _fmt(v) for k, v in vars(value).items()
                if not isinstance(v, qmath.DensityOp)}
    return value


def _emit(payload, args):
    text = json.dumps(_fmt(payload), indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header, rows, args):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            f"{v:.12g}" if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_state(spec: str) -> qmath.Ket:
    """State given as a name, name:params, or a JSON file path."""
    if spec.endswith(".json"):
        with open(spec) as fh:
            data = json.load(fh)
        amps = [complex(re, im) for re, im in data["amps"]]
        return qmath.Ket(amps, tuple(data["dims"]))
    name, _, params = spec.partition(":")
    name = {"wclass": "w-class"}.get(name, name)
    vals = [float(x) for x in params.split(",")] if params else []
    if name == "lambda":
        return states.named_state("lambda", a=vals[0], b=vals[1])
    if name == "w-class":
        if len(vals) == 1:
            return states.named_state("w-class", f2=vals[0])
        return states.named_state("w-class", e=vals[0], f=vals[1])
    if name == "ghz":
        return states.named_state("ghz", n=int(vals[0]) if vals else 3)
    if name == "bloch":
        return states.bloch(vals[0], vals[1] if len(vals) > 1 else 0.0)
    if name == "hardy":
        return states.named_state("hardy", alpha_a=vals[0], alpha_b=vals[1],
                                  beta_a=vals[2], beta_b=vals[3])
    return states.named_state(name)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_chsh(args):
    state = _parse_state(args.state)
    if args.settings == "optimal":
        settings = nonlocality.OPTIMAL_SETTINGS
    else:
        v = [float(x) for x in args.angles.split(",")]
        settings = nonlocality.ChshSettings(
            a1=(v[0], v[1]), a2=(v[2], v[3]), b1=(v[4], v[5]), b2=(v[6], v[7]))
    _emit({"state": args.state,
           "chsh_value": nonlocality.chsh_value(state, settings),
           "prob_form": nonlocality.chsh_prob_form(state, settings),
           "local_bound": 2.0, "quantum_max": reference.CHSH_MAX}, args)
    return EXIT_OK


def _cmd_hardy(args):
    if args.maximize:
        res = nonlocality.hardy_maximize(seed=args.seed)
        _emit({"p_cc": res["p_cc"], "alpha": res["alpha"], "beta": res["beta"],
               "reduced_entropy_bits": res["reduced_entropy"],
               "expected_max": reference.HARDY_MAX}, args)
    else:
        v = [float(x) for x in args.params.split(",")]
        _emit(nonlocality.hardy_probs(*v), args)
    return EXIT_OK


def _cmd_contextuality(args):
    out = {}
    if args.peres or not args.mermin:
        out["peres"] = nonlocality.peres_contradiction()
    if args.mermin or not args.peres:
        out["mermin"] = nonlocality.mermin_square()
    _emit(out, args)
    return EXIT_OK


def _cmd_rac(args):
    if args.mode == "quantum":
        code = {"2x1": rac.qubit_code_2to1, "3x1": rac.qubit_code_3to1,
                "qutrit": rac.qutrit_code_build}[args.code]()
        _emit({"code": args.code, **rac.qrac_success(code)}, args)
    elif args.mode == "classical":
        res = rac.classical_rac_optimal(args.m)
        _emit({"m": args.m, "p_c": res["p_c"],
               "witness_encoding": list(res["witness"])}, args)
    else:
        _emit({"d": args.d, "bases": args.bases,
               "bound": rac.mub_equipartition_bound(args.d, args.bases)}, args)
    return EXIT_OK


def _cmd_commcx(args):
    if args.mode == "classical":
        fn = (commcx.classical_opt_sequential if args.model == "seq"
              else commcx.classical_opt_broadcast)
        res = fn(args.n)
        _emit({"model": args.model, "n": args.n, "p_c": res["p_c"],
               "witness": res["witness"], "beyond_table": res["beyond_table"]},
              args)
    else:
        seed = args.seed if getattr(args, "sub_seed", None) is None \
            else args.sub_seed
        rng = np.random.default_rng(seed)
        if args.inputs:
            xs = tuple(int(x) for x in args.inputs.split(","))
        else:
            choices = [xs for xs in commcx.promise_instances(args.n)]
            xs = choices[rng.integers(len(choices))]
        inst = commcx.Mod4Instance(xs)
        if args.protocol == "ghz":
            answer = commcx.quantum_ghz_protocol(inst, rng=rng)
            extra = {}
        elif args.protocol == "qubit":
            answer = commcx.quantum_qubit_protocol(inst)
            extra = {}
        else:
            res = commcx.teleport_chain(inst, rng=rng)
            answer = res["answer"]
            extra = {"bits_used": res["bits_used"]}
        _emit({"protocol": args.protocol, "inputs": list(xs),
               "answer": answer, "expected": inst.answer, **extra}, args)
    return EXIT_OK


def _cmd_fieldtask(args):
    if args.search_min_l:
        try:
            res = fieldtask.field_task_classical_min_l(args.n, args.k)
        except ValueError as exc:
            print(f"resource error: {exc}", file=sys.stderr)
            return EXIT_RESOURCE
        _emit({"n": args.n, "K": args.k, "min_l": res["min_l"],
               "witness": res["witness"], "counting_alphabet": 2 * args.k},
              args)
    else:
        if args.inputs:
            ks = tuple(int(x) for x in args.inputs.split(","))
        else:
            rng = np.random.default_rng(args.seed)
            while True:
                ks = tuple(int(x) for x in
                           rng.integers(0, 2 * args.k, size=args.n))
                if sum(ks) % args.k == 0:
                    break
        inst = fieldtask.FieldTaskInstance(ks, args.k)
        _emit({"n": args.n, "K": args.k, "inputs": list(ks),
               "m": inst.m, "parity": fieldtask.field_task_quantum(inst)},
              args)
    return EXIT_OK


def _cmd_feasibility(args):
    scan = feasibility.region_scan(args.protocol, grid=args.grid, n=args.n)
    if args.boundary_out:
        _emit_csv(("eta", "mu_boundary"),
                  [(f"{e:.12g}", f"{m:.12g}") for e, m in scan["boundary"]],
                  argparse.Namespace(out=args.boundary_out))
    _emit_csv(("eta", "mu", "beats_classical"),
              [(f"{e:.12g}", f"{m:.12g}", flag) for e, m, flag in scan["rows"]],
              args)
    return EXIT_OK


def _cmd_clone(args):
    if args.mode == "fidelity":
        _emit({"n": args.n, "m": args.m, "d": args.d,
               "fidelity": cloning.uqcm_fidelity(args.n, args.m, args.d)}, args)
    elif args.mode == "balance":
        rows = []
        for n_in in range(1, 8):
            for m_out in (n_in + 1, n_in + 5, 64):
                if m_out <= n_in or m_out > 64:
                    continue
                for d in (2, 3, 16):
                    bal = cloning.fidelity_balance(n_in, m_out, d)
                    rows.append({"n": n_in, "m": m_out, "d": d,
                                 "iq_before": bal["iq_before"],
                                 "iq_after": bal["iq_after"]})
        _emit({"sweep": rows}, args)
    elif args.mode == "prob":
        objective = {"avg": "avg", "fraction": "guaranteed-fraction",
                     "p2": "task-p2"}[args.objective]
        res = cloning.prob_clone_search(cloning.f0_states(), objective,
                                        seed=args.seed)
        _emit({"objective": args.objective, **res}, args)
    else:
        _emit(cloning.chapter6_pipeline(), args)
    return EXIT_OK


def _cmd_ree(args):
    state = _parse_state(args.state)
    want = {"2q": (2, 2), "3q": (2, 2, 2)}.get(args.system)
    if want is not None and state.dims != want:
        raise ValueError(f"state has dims {state.dims}, not a {args.system} system")
    rho = state.density()
    res = entanglement.ree(rho, restarts=args.restarts, tol=args.tol,
                           threads=args.threads)
    _emit({"state": args.state, "value_bits": res.value,
           "iterations": res.iterations, "converged": res.converged,
           "restarts": res.restarts_used}, args)
    return EXIT_OK


def _cmd_corcond(args):
    state = _parse_state(args.state)
    res = entanglement.corcond_residuals(state, restarts=args.restarts)
    _emit({"state": args.state, **res}, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------

def _match(computed, published, tol):
    return abs(float(computed) - float(published)) <= tol


def _reproduce_table81():
    rows = []
    ok = True
    for n, want in reference.SEQ_TABLE.items():
        got = commcx.classical_opt_sequential(n)["p_c"]
        rows.append({"n": n, "computed": got, "published": want,
                     "match": got == want})
        ok &= got == want
    for n, bound in reference.SEQ_LOWER_BOUNDS.items():
        got = commcx.classical_opt_sequential(n)["p_c"]
        rows.append({"n": n, "computed": got, "published_lower_bound": bound,
                     "match": got >= bound, "new_data": True})
        ok &= got >= bound
    return {"target": "table-8.1", "rows": rows}, ok


def _reproduce_table82():
    rows = []
    ok = True
    for n, want in reference.BROADCAST_TABLE.items():
        got = commcx.classical_opt_broadcast(n)["p_c"]
        rows.append({"n": n, "computed": got, "published": want,
                     "match": got == want})
        ok &= got == want
    return {"target": "table-8.2", "rows": rows}, ok


def _reproduce_table83():
    rows = []
    ok = True
    for n, bounds in reference.MULTIPARTY_BOUNDS.items():
        mu = feasibility.multiparty_mu_min(n)
        eta = feasibility.multiparty_eta_min(n)
        row = {"n": n, "mu_min": mu, "mu_published": bounds["mu_min"],
               "mu_match": _match(mu, bounds["mu_min"], 1e-9),
               "eta_min": eta, "eta_published": bounds["eta_min"],
               "eta_match": _match(eta, bounds["eta_min"], 1e-3)}
        rows.append(row)
        ok &= row["mu_match"] and row["eta_match"]
    return {"target": "table-8.3", "rows": rows}, ok


def _reproduce_table71():
    code = rac.qutrit_code_build()
    res = rac.qrac_success(code)
    rows = []
    ok = True
    for word, ket in sorted(code.encoding.items()):
        overlaps = []
        for q, (basis, _) in enumerate(code.decodings):
            overlaps.append(abs(basis[int(word[q])].overlap(ket)) ** 2)
        match = all(_match(o, reference.P_2TO1_QUTRIT, 1e-9) for o in overlaps)
        rows.append({"word": word, "overlap_sq": overlaps, "match": match})
        ok &= match
    avg_ok = _match(res["average"], reference.P_2TO1_QUTRIT, 1e-9)
    return {"target": "table-7.1", "rows": rows,
            "average": res["average"], "average_match": avg_ok}, ok and avg_ok


def _reproduce_fig73(grid=401):
    scan = feasibility.region_scan("qrac-ent", grid=grid)
    spot = feasibility.qrac_entanglement_beats(
        feasibility.NoiseModel(eta=1.0, mu=0.85))["beats"]
    return {"target": "fig-7.3", "rows": scan["rows"],
            "boundary": scan["boundary"], "spot_eta1_mu085_inside": spot}, spot


def _reproduce_fig81(grid=201):
    out = {"target": "fig-8.1"}
    ok = True
    nested = []
    for n in (3, 5, 7):
        scan = feasibility.region_scan("multi-ent", grid=grid, n=n)
        out[f"boundary_n{n}"] = scan["boundary"]
        nested.append({(e, m): f for e, m, f in scan["rows"]})
    for a, b in ((0, 1), (1, 2)):
        ok &= all(nested[a][key] <= nested[b][key] for key in nested[a])
    out["regions_nested"] = ok
    return out, ok


def _reproduce_chapter5(restarts_2q=8, restarts_3q=4):
    rows = []

    def add(name, computed, published, tol):
        rows.append({"quantity": name, "computed": computed,
                     "published": published, "match":
                         _match(computed, published, tol)})

    bell = states.named_state("bell-psi-plus").density()
    add("E(bell)", entanglement.ree(bell, restarts=restarts_2q).value,
        reference.E_BELL, 2e-3)
    lam = states.named_state("lambda", a=1 / math.sqrt(5), b=1 / math.sqrt(5))
    rho = lam.density()
    s_a = qmath.vn_entropy(qmath.partial_trace(rho, [0]))
    s_b = qmath.vn_entropy(qmath.partial_trace(rho, [1]))
    add("lambda S(A)-S(B)", s_a - s_b, reference.LAMBDA_PREDICTION, 2e-3)
    sig_ac = qmath.partial_trace(rho, [0, 2])
    add("lambda E(sigma_AC)",
        entanglement.ree(sig_ac, restarts=restarts_2q).value,
        reference.LAMBDA_E_AC, 2e-3)
    w = states.named_state("w-class", f2=1 / 6)
    sig_ab = qmath.partial_trace(w.density(), [0, 1])
    add("w-class E(sigma_AB)",
        entanglement.ree(sig_ab, restarts=restarts_2q).value,
        reference.WCLASS_E_AB, 2e-3)
    sig_bc = qmath.partial_trace(w.density(), [1, 2])
    add("w-class E(sigma_BC)",
        entanglement.ree(sig_bc, restarts=restarts_2q).value,
        entanglement.wclass_bc_closed(1 / 6), 2e-3)
    add("w-class prediction", entanglement.wclass_prediction(1 / 6),
        reference.WCLASS_PREDICTION, 1e-4)
    add("E(W3)", entanglement.ree_w3(restarts=restarts_3q).value,
        reference.E_W3, 5e-3)
    ghz = states.named_state("ghz").density()
    add("E(GHZ3)", entanglement.ree(ghz, restarts=restarts_3q).value,
        reference.E_GHZ3, 5e-3)
    ok = all(r["match"] for r in rows)
    return {"target": "chapter5-numbers", "rows": rows}, ok


def _reproduce_chapter6(seed=42):
    pipe = cloning.chapter6_pipeline()
    frac = cloning.prob_clone_search(cloning.f0_states(),
                                     "guaranteed-fraction", seed=seed)
    rows = [
        {"quantity": "p1", "computed": pipe["p1"],
         "published": reference.P1_NO_CLONING,
         "match": pipe["p1"] == reference.P1_NO_CLONING},
        {"quantity": "p_success", "computed": pipe["p_success"],
         "published": reference.P_SUCCESS,
         "match": _match(pipe["p_success"], reference.P_SUCCESS, 1e-4)},
        {"quantity": "p_0010", "computed": pipe["p_0010"],
         "published": reference.P_0010,
         "match": _match(pipe["p_0010"], reference.P_0010, 1e-4)},
        {"quantity": "p2", "computed": pipe["p2"],
         "published": reference.P2_CLONING,
         "match": _match(pipe["p2"], reference.P2_CLONING, 1e-4)},
        {"quantity": "printed_gamma_feasible",
         "computed": pipe["printed_gamma_min_eig"],
         "published": 0.0, "match": pipe["printed_gamma_min_eig"] >= -1e-9},
        {"quantity": "guaranteed_fraction", "computed": frac["value"],
         "published": reference.GUARANTEED_FRACTION,
         "match": _match(frac["value"], reference.GUARANTEED_FRACTION, 1e-3)},
    ]
    ok = all(r["match"] for r in rows)
    return {"target": "chapter6-numbers", "rows": rows}, ok


_REPRODUCE = {
    "table-8.1": _reproduce_table81,
    "table-8.2": _reproduce_table82,
    "table-8.3": _reproduce_table83,
    "table-7.1": _reproduce_table71,
    "fig-7.3": _reproduce_fig73,
    "fig-8.1": _reproduce_fig81,
    "chapter5-numbers": _reproduce_chapter5,
    "chapter6-numbers": _reproduce_chapter6,
}


def _cmd_reproduce(args):
    payload, ok = _REPRODUCE[args.target]()
    _emit(payload, args)
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_selfcheck(args):
    passed, failed, details = selfcheck.run_selfcheck(
        include_3q=args.full, fault=args.inject_fault)
    _emit({"passed": passed, "failed": failed, "checks": details}, args)
    print(f"selfcheck: {passed} passed, {failed} failed", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="qal",
        description="Quantum-vs-classical separations: nonlocality tests, "
                    "random access codes, communication complexity, cloning "
                    "feasibility, and relative entropy of entanglement.")
    p.add_argument("--seed", type=int, default=42,
                   help="seed for every sampled path (default 42)")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--config", help="JSON file with defaults mirroring flags")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("chsh", help="CHSH inequality value on a state")
    q.add_argument("--state", default="bell-phi-minus")
    q.add_argument("--settings", default="optimal",
                   choices=("optimal", "custom"))
    q.add_argument("--angles",
                   help="custom settings: 8 comma-separated angles "
                        "(theta,phi for a1,a2,b1,b2)")
    q.set_defaults(fn=_cmd_chsh)

    q = sub.add_parser("hardy", help="Hardy non-locality probabilities")
    q.add_argument("--maximize", action="store_true")
    q.add_argument("--params",
                   help="alpha_a,alpha_b,beta_a,beta_b for a single evaluation")
    q.set_defaults(fn=_cmd_hardy)

    q = sub.add_parser("contextuality", help="Peres and Mermin constructions")
    q.add_argument("--peres", action="store_true")
    q.add_argument("--mermin", action="store_true")
    q.set_defaults(fn=_cmd_contextuality)

    q = sub.add_parser("rac", help="random access codes")
    rs = q.add_subparsers(dest="mode", required=True)
    r1 = rs.add_parser("quantum")
    r1.add_argument("--code", choices=("2x1", "3x1", "qutrit"), default="2x1")
    r2 = rs.add_parser("classical")
    r2.add_argument("--m", type=int, default=2)
    r3 = rs.add_parser("bound")
    r3.add_argument("--d", type=int, default=2)
    r3.add_argument("--bases", type=int, default=3)
    q.set_defaults(fn=_cmd_rac)

    q = sub.add_parser("commcx", help="Modulo-4 Sum protocols")
    cs = q.add_subparsers(dest="mode", required=True)
    c1 = cs.add_parser("classical")
    c1.add_argument("--model", choices=("seq", "broadcast"), default="seq")
    c1.add_argument("--n", type=int, required=True)
    c2 = cs.add_parser("quantum")
    c2.add_argument("--protocol", choices=("ghz", "qubit", "teleport"),
                    default="ghz")
    c2.add_argument("--n", type=int, default=3)
    c2.add_argument("--inputs", help="comma-separated inputs in {0,1,2,3}")
    c2.add_argument("--seed", type=int, dest="sub_seed", default=None)
    q.set_defaults(fn=_cmd_commcx)

    q = sub.add_parser("fieldtask", help="discretized single-qubit task")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--search-min-l", action="store_true")
    q.add_argument("--inputs", help="comma-separated k_n values")
    q.set_defaults(fn=_cmd_fieldtask)

    q = sub.add_parser("feasibility", help="eta x mu region scans")
    q.add_argument("--protocol", required=True,
                   choices=("qrac-qubit", "qrac-ent", "multi-ent",
                            "multi-qubit"))
    q.add_argument("--n", type=int, default=5)
    q.add_argument("--grid", type=int, default=401)
    q.add_argument("--boundary-out", help="also write the boundary CSV here")
    q.set_defaults(fn=_cmd_feasibility)

    q = sub.add_parser("clone", help="cloning fidelities and feasibility")
    ks = q.add_subparsers(dest="mode", required=True)
    k1 = ks.add_parser("fidelity")
    k1.add_argument("--n", type=int, required=True)
    k1.add_argument("--m", type=int, required=True)
    k1.add_argument("--d", type=int, default=2)
    ks.add_parser("balance")
    k3 = ks.add_parser("prob")
    k3.add_argument("--objective", choices=("avg", "fraction", "p2"),
                    default="fraction")
    ks.add_parser("chapter6")
    q.set_defaults(fn=_cmd_clone)

    q = sub.add_parser("ree", help="relative entropy of entanglement")
    q.add_argument("--state", required=True,
                   help="name, name:params, or a JSON state file")
    q.add_argument("--system", choices=("2q", "3q"), default=None)
    q.add_argument("--restarts", type=int, default=None)
    q.add_argument("--tol", type=float, default=1e-9)
    q.add_argument("--threads", type=int, default=None)
    q.set_defaults(fn=_cmd_ree)

    q = sub.add_parser("corcond", help="tripartite consistency residuals")
    q.add_argument("--state", required=True)
    q.add_argument("--restarts", type=int, default=8)
    q.set_defaults(fn=_cmd_corcond)

    q = sub.add_parser("reproduce", help="regenerate a published table/figure")
    q.add_argument("target", choices=sorted(_REPRODUCE))
    q.set_defaults(fn=_cmd_reproduce)

    q = sub.add_parser("selfcheck", help="run the invariant suite")
    q.add_argument("--full", action="store_true",
                   help="include the three-qubit entanglement searches")
    q.add_argument("--inject-fault", choices=("table-8.1",),
                   help="test mode: perturb a stored constant by 1e-3")
    q.set_defaults(fn=_cmd_selfcheck)
    return p


def _walk_parsers(parser):
    yield parser
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                yield from _walk_parsers(sub)


def main(argv=None):
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        with open(known.config) as fh:
            defaults = json.load(fh)
        fixed = {k.replace("-", "_"): v for k, v in defaults.items()}
        # subcommand parsers re-apply their own defaults over the namespace,
        # so the config defaults must be installed on every parser
        for q in _walk_parsers(parser):
            q.set_defaults(**{k: v for k, v in fixed.items()
                              if any(a.dest == k for a in q._actions)})
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
