"""Discretized single-qubit field task: N parties hold k_n in {0..2K-1} with
sum k_n = m*K promised, and the last party must announce m mod 2.

The quantum protocol phases a single qubit through the chain. Classically,
messages come from an L-letter alphabet, and this module decides by
exhaustive search whether a perfect deterministic sequential protocol exists
for given (N, K, L).

Search representation
---------------------
A message is useless exactly when the set of partial sums consistent with it
contains two values differing by K (mod 2K): the last party then errs for
some k_N. Safe sets pick at most one element from each pair {r, r+K}, so
they are partial maps {0..K-1} -> {lo, hi}, encoded as K-trit integers.
Once two K-separated sums share a message they stay together (every later
shift moves the whole class), so a perfect protocol must keep every message
class safe at every stage. Party n+1 assigns each (class, k) shift to one of
L messages whose unions must stay safe; this is searched by backtracking
with memoized reachable states. The final intermediate party only needs the
shifts to be coverable by L totally-defined assignments, which is checked
by exact set cover. Found protocols are re-verified by simulating every
promise input.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def is_power_of_two(k):
    return k >= 1 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class FieldTaskInstance:
    """Inputs k_n in {0..2K-1} with sum k_n = m*K for an integer m."""

    ks: tuple
    big_k: int

    def __post_init__(self):
        ks = tuple(int(k) for k in self.ks)
        kk = int(self.big_k)
        if not is_power_of_two(kk):
            raise ValueError("K must be a power of two")
        if any(not 0 <= k < 2 * kk for k in ks):
            raise ValueError("each k_n must lie in {0..2K-1}")
        if sum(ks) % kk:
            raise ValueError("promise violated: sum k_n is not a multiple of K")
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "big_k", kk)

    @property
    def m(self):
        return sum(self.ks) // self.big_k

    @property
    def parity(self):
        return self.m % 2


def field_task_quantum(inst: FieldTaskInstance) -> int:
    """Phase protocol: |x+> accumulates pi*k_n/K per party; the final +/-
    measurement reveals m mod 2 with certainty."""
    amps = np.array([1, 1], dtype=complex) / np.sqrt(2)
    for k in inst.ks:
        amps[1] *= np.exp(1j * np.pi * k / inst.big_k)
    plus = np.array([1, 1]) / np.sqrt(2)
    p_plus = abs(np.vdot(plus, amps)) ** 2
    if min(p_plus, 1 - p_plus) > 1e-12:
        raise AssertionError("final state is not a +/- basis state")
    return 0 if p_plus > 0.5 else 1


def accuracy_budget(n: int, delta: float) -> float:
    """Per-party unitary error budget for overall error delta: delta/(2N)."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be positive")
    return delta / (2 * n)


# ---------------------------------------------------------------------------
# classical protocols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequentialProtocol:
    """Concrete L-ary sequential protocol.

    first: tuple mapping k_1 -> message (0-based).
    middle: one dict per party 2..N-1 mapping (message, k) -> message.
    The last party answers by the unique parity consistent with the message.
    """

    n: int
    big_k: int
    alphabet: int
    first: tuple
    middle: tuple

    def run(self, ks):
        msg = self.first[ks[0]]
        for j in range(1, self.n - 1):
            msg = self.middle[j - 1][(msg, ks[j])]
        return msg


def protocol_is_perfect(proto: SequentialProtocol) -> bool:
    """Simulates every promise input and checks the final message determines
    the answer."""
    kk, n = proto.big_k, proto.n
    seen = {}
    for ks in itertools.product(range(2 * kk), repeat=n):
        if sum(ks) % kk:
            continue
        inst = FieldTaskInstance(ks, kk)
        key = (proto.run(ks), ks[-1])
        if seen.setdefault(key, inst.parity) != inst.parity:
            return False
    return True


def counting_protocol(n: int, big_k: int) -> SequentialProtocol:
    """Perfect protocol with L = 2K: pass the partial sum mod 2K along."""
    m = 2 * big_k
    first = tuple(k % m for k in range(m))
    middle = tuple({(l, k): (l + k) % m for l in range(m) for k in range(m)}
                   for _ in range(n - 2))
    return SequentialProtocol(n, big_k, m, first, middle)


# -- search over L-ary protocols --------------------------------------------

class _PairCtx:
    """Trit-coded safe subsets of Z_{2K} and their shift/join algebra."""

    def __init__(self, big_k):
        self.k = big_k
        self.m = 2 * big_k
        self.pows = [3 ** r for r in range(big_k)]

    def set_to_code(self, s):
        code = 0
        for x in s:
            r, hi = x % self.k, x >= self.k
            want = 2 if hi else 1
            t = (code // self.pows[r]) % 3
            if t == 0:
                code += want * self.pows[r]
            elif t != want:
                return None
        return code

    def code_to_set(self, code):
        out = set()
        for r in range(self.k):
            t = (code // self.pows[r]) % 3
            if t == 1:
                out.add(r)
            elif t == 2:
                out.add(r + self.k)
        return out

    def shift(self, code, by):
        return self.set_to_code({(x + by) % self.m for x in self.code_to_set(code)})

    def join(self, a, b):
        """Union if safe, else None."""
        out = 0
        for p in self.pows:
            ta, tb = (a // p) % 3, (b // p) % 3
            if ta and tb and ta != tb:
                return None
            out += max(ta, tb) * p
        return out

    def extends(self, small, big):
        for p in self.pows:
            ts, tb = (small // p) % 3, (big // p) % 3
            if ts and ts != tb:
                return False
        return True

    def totals(self):
        out = []
        for bits in range(2 ** self.k):
            code = 0
            for r in range(self.k):
                code += (2 if (bits >> r) & 1 else 1) * self.pows[r]
            out.append(code)
        return out


def _search_perfect(n, big_k, alphabet):
    """Returns a witness SequentialProtocol or None.

    Exhaustive over party-1 partitions (deduped under shift/reflection
    symmetry of Z_{2K}) and over later parties' message assignments.
    """
    ctx = _PairCtx(big_k)
    m = ctx.m
    totals = ctx.totals()

    @lru_cache(maxsize=None)
    def shifts_of(code):
        return tuple(ctx.shift(code, k) for k in range(m))

    def cover(items, limit):
        """A set of <= limit totals covering all items, or None."""
        for r in range(1, limit + 1):
            for combo in itertools.combinations(totals, r):
                if all(any(ctx.extends(i, t) for t in combo) for i in items):
                    return combo
        return None

    fail = set()

    def rec(classes, parties_left):
        """classes: sorted tuple of class codes. Returns a plan or None.

        A plan for parties_left >= 2 is (assignment, subplan) where
        assignment maps (class code, k) -> bin index; for parties_left == 1
        it is ('cover', assignment) built from a total cover.
        """
        items = sorted({s for c in classes for s in shifts_of(c)})
        if parties_left == 1:
            combo = cover(items, alphabet)
            if combo is None:
                return None
            assignment = {}
            for c in classes:
                for k in range(m):
                    code = ctx.shift(c, k)
                    assignment[(c, k)] = next(
                        b for b, t in enumerate(combo) if ctx.extends(code, t))
            return ("leaf", assignment)
        key = (classes, parties_left)
        if key in fail:
            return None
        if cover(items, alphabet) is None:
            fail.add(key)
            return None
        items_desc = sorted(items, key=lambda c: -len(ctx.code_to_set(c)))
        tried_states = set()

        def backtrack(idx, bins):
            if idx == len(items_desc):
                state = tuple(sorted(bins))
                if state in tried_states:
                    return None
                tried_states.add(state)
                sub = rec(state, parties_left - 1)
                if sub is None:
                    return None
                return list(bins), sub
            it = items_desc[idx]
            tried_joins = set()
            for b in range(len(bins)):
                j = ctx.join(bins[b], it)
                if j is None or (b, j) in tried_joins:
                    continue
                tried_joins.add((b, j))
                old = bins[b]
                bins[b] = j
                result = backtrack(idx + 1, bins)
                if result is not None:
                    return result
                bins[b] = old
            if len(bins) < alphabet:
                bins.append(it)
                result = backtrack(idx + 1, bins)
                if result is not None:
                    return result
                bins.pop()
            return None

        result = backtrack(0, [])
        if result is None:
            fail.add(key)
            return None
        final_bins, sub = result
        assignment = {}
        for c in classes:
            for k in range(m):
                code = ctx.shift(c, k)
                assignment[(c, k)] = next(
                    b for b, u in enumerate(final_bins) if ctx.extends(code, u))
        # bins in `sub` refer to the sorted state tuple; remap
        state = tuple(sorted(final_bins))
        remap = {}
        used = set()
        for b, u in enumerate(final_bins):
            for pos, v in enumerate(state):
                if v == u and pos not in used:
                    remap[b] = pos
                    used.add(pos)
                    break
        assignment = {kk_: remap[vv] for kk_, vv in assignment.items()}
        return ("node", assignment, state, sub)

    def plan_to_protocol(blocks, plan):
        """Convert the search plan into a concrete SequentialProtocol.

        Message label l at every stage denotes position l in the sorted
        tuple of class codes for that stage; positions sharing a code get
        identical rows.
        """
        block_codes = [ctx.set_to_code(frozenset(b)) for b in blocks]
        order = sorted(range(len(blocks)), key=lambda i: block_codes[i])
        label_of = {i: pos for pos, i in enumerate(order)}
        first = [None] * m
        for i, block in enumerate(blocks):
            for x in block:
                first[x] = label_of[i]
        classes = tuple(sorted(block_codes))
        middles = []
        node = plan
        while node is not None:
            assignment = node[1]
            table = {(pos, k): assignment[(c, k)]
                     for pos, c in enumerate(classes) for k in range(m)}
            middles.append(table)
            if node[0] == "leaf":
                break
            classes = node[2]
            node = node[3]
        n_here = len(middles) + 2
        return SequentialProtocol(n_here, big_k, alphabet, tuple(first),
                                  tuple(middles))

    # party 1: enumerate partitions of Z_M into <= alphabet safe blocks,
    # deduped under the dihedral symmetry of Z_M
    group = []
    for k in range(m):
        group.append(lambda s, k=k: frozenset((x + k) % m for x in s))
        group.append(lambda s, k=k: frozenset((k - x) % m for x in s))

    def canon(blocks):
        best = None
        for g in group:
            img = tuple(sorted(tuple(sorted(g(frozenset(b)))) for b in blocks))
            if best is None or img < best:
                best = img
        return best

    seen_init = set()

    def build_partitions(x, blocks):
        if x == m:
            sig = canon(blocks)
            if sig in seen_init:
                return None
            seen_init.add(sig)
            classes = tuple(sorted(ctx.set_to_code(frozenset(b)) for b in blocks))
            if n == 2:
                # the last party answers directly; safety of each block is enough
                plan = None
            else:
                plan = rec(classes, n - 2)
                if plan is None:
                    return None
            proto = plan_to_protocol([sorted(b) for b in blocks], plan) \
                if plan is not None else _two_party_protocol(blocks)
            return proto
        for i in range(len(blocks)):
            b2 = blocks[i] | {x}
            if ctx.set_to_code(frozenset(b2)) is None:
                continue
            old = blocks[i]
            blocks[i] = b2
            result = build_partitions(x + 1, blocks)
            if result is not None:
                return result
            blocks[i] = old
        if len(blocks) < alphabet:
            blocks.append({x})
            result = build_partitions(x + 1, blocks)
            if result is not None:
                return result
            blocks.pop()
        return None

    def _two_party_protocol(blocks):
        first = [None] * m
        for b, block in enumerate(blocks):
            for x in block:
                first[x] = b
        return SequentialProtocol(2, big_k, alphabet, tuple(first), ())

    return build_partitions(0, [])


def perfect_protocol_search(n: int, big_k: int, alphabet: int):
    """Witness SequentialProtocol for (N, K, L), or None when impossible.

    The witness is verified against every promise input before it is
    returned.
    """
    if not is_power_of_two(big_k):
        raise ValueError("K must be a power of two")
    if n < 2:
        raise ValueError("need at least two parties")
    if n > 4 or big_k > 4:
        raise ValueError("exhaustive search supported for N <= 4, K in {2, 4}")
    proto = _search_perfect(n, big_k, alphabet)
    if proto is None:
        return None
    if not protocol_is_perfect(proto):
        raise AssertionError("search produced a non-perfect witness")
    return proto


def field_task_classical_min_l(n: int, big_k: int) -> dict:
    """Smallest alphabet admitting a perfect sequential protocol.

    Returns the minimum L, a verified witness protocol at that L, and a
    verified witness for the always-sufficient counting alphabet L = 2K.
    """
    witness = None
    min_l = None
    for alphabet in range(1, 2 * big_k + 1):
        proto = perfect_protocol_search(n, big_k, alphabet)
        if proto is not None:
            min_l, witness = alphabet, proto
            break
    counting = counting_protocol(n, big_k)
    if not protocol_is_perfect(counting):
        raise AssertionError("counting protocol failed verification")
    return {"min_l": min_l, "witness": witness, "counting": counting,
            "bound_2n_minus_1": 2 * n - 1}
