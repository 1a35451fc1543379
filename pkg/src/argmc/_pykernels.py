"""Pure-Python search kernels over int bitsets.

These are the reference implementations; ``_ckernels`` mirrors them in
Cython with identical signatures and results.  Every search returns
``(results, nodes_used)``; ``nodes_used > budget`` means it was abandoned.
"""

from __future__ import annotations

COMPLETE, STABLE, PREFERRED = 0, 1, 2


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _union(sets: list[int], members: int) -> int:
    acc = 0
    for i in _bits(members):
        acc |= sets[i]
    return acc


class _Search:
    def __init__(self, n, attackers, attackees, budget):
        self.n = n
        self.attackers = attackers
        self.attackees = attackees
        self.budget = budget
        self.used = 0
        self.everything = (1 << n) - 1
        self.selfatk = 0
        for x in range(n):
            if attackers[x] >> x & 1:
                self.selfatk |= 1 << x

    def propagate(self, IN, OUT, UND, stable):
        attackers, attackees = self.attackers, self.attackees
        while True:
            hit = _union(attackees, IN)
            back = _union(attackers, IN)
            if IN & (hit | back):
                return None
            moved = UND & (hit | back)
            UND &= ~moved
            OUT |= moved
            possible = IN | UND
            for x in _bits(OUT):
                a = attackers[x]
                # a defended node must be IN; a stable OUT node must be attacked
                if a & ~hit == 0 or (stable and a & possible == 0):
                    return None
            force = 0
            for y in _bits(back & ~hit):
                cand = attackers[y] & UND
                if cand == 0:
                    return None
                if cand & (cand - 1) == 0:
                    force |= cand
            for x in _bits(UND):
                if attackers[x] & ~hit == 0:
                    force |= 1 << x
            if not force:
                return IN, OUT, UND
            IN |= force
            UND &= ~force

    def is_solution(self, IN, stable):
        hit = _union(self.attackees, IN)
        if IN & hit:
            return False
        for x in range(self.n):
            if (self.attackers[x] & ~hit == 0) != bool(IN >> x & 1):
                return False
        return not stable or (IN | hit) == self.everything

    def run(self, mode, fixed_in, fixed_out, limit):
        stable = mode == STABLE
        results = []
        if fixed_in & self.selfatk:
            return results
        out0 = (fixed_out | self.selfatk) & ~fixed_in
        stack = [(fixed_in, out0, self.everything & ~(fixed_in | out0))]
        while stack:
            self.used += 1
            if self.used > self.budget:
                return results
            state = self.propagate(*stack.pop(), stable)
            if state is None:
                continue
            IN, OUT, UND = state
            if mode == PREFERRED:
                # nothing below can escape an already found preferred extension
                reach = IN | UND
                if any(reach & ~p == 0 for p in results):
                    continue
            if UND == 0:
                if not self.is_solution(IN, stable):
                    continue
                if mode == PREFERRED:
                    bigger = self.run(COMPLETE, IN, 0, 2)
                    if self.used > self.budget:
                        return results
                    if len(bigger) > 1:
                        continue
                results.append(IN)
                if limit and len(results) >= limit:
                    return results
                continue
            hit = _union(self.attackees, IN)
            back = _union(self.attackers, IN)
            pick = -1
            for y in _bits(back & ~hit):
                cand = self.attackers[y] & UND
                pick = (cand & -cand).bit_length() - 1
                break
            if pick < 0:
                pick = (UND & -UND).bit_length() - 1
            b = 1 << pick
            stack.append((IN, OUT | b, UND & ~b))
            stack.append((IN | b, OUT, UND & ~b))
        return results


def complete_search(n: int, attackers: list[int], attackees: list[int], mode: int, budget: int,
                    fixed_in: int = 0, fixed_out: int = 0, limit: int = 0):
    """Complete (``mode=0``), stable (1) or preferred (2) extensions as IN-bitsets.

    Only extensions containing ``fixed_in`` and avoiding ``fixed_out`` are
    produced; ``limit > 0`` stops after that many.
    """
    s = _Search(n, attackers, attackees, budget)
    found = s.run(mode, fixed_in, fixed_out, limit)
    return found, s.used


def grounded(n: int, attackers: list[int], attackees: list[int]) -> int:
    """Least fixpoint of the characteristic function."""
    IN = 0
    while True:
        hit = _union(attackees, IN)
        nxt = 0
        for x in range(n):
            if attackers[x] & ~hit == 0:
                nxt |= 1 << x
        if nxt == IN:
            return IN
        IN = nxt


def maximal_conflict_free(n: int, attackers: list[int], attackees: list[int], budget: int,
                          candidates: int = -1, blockers: int = 0, limit: int = 0):
    """Subset-maximal conflict-free sets drawn from ``candidates``.

    Bron-Kerbosch with pivoting over the compatibility graph (no attack either
    way).  ``blockers`` stay out of the set but must conflict with it, so a
    reported set is maximal in the whole framework when ``candidates |
    blockers`` covers every node that does not attack itself.
    """
    ok = 0
    for x in range(n):
        if not attackers[x] >> x & 1:
            ok |= 1 << x
    compat = [ok & ~(attackers[x] | attackees[x]) & ~(1 << x) for x in range(n)]
    P0 = ok if candidates < 0 else ok & candidates
    results: list[int] = []
    used = 0
    stack = [(0, P0, blockers & ok & ~P0)]
    while stack:
        used += 1
        if used > budget:
            return results, used
        R, P, X = stack.pop()
        if P == 0:
            if X == 0:
                results.append(R)
                if limit and len(results) >= limit:
                    return results, used
            continue
        # an excluded node compatible with every candidate can never be blocked
        if any(P & ~compat[u] == 0 for u in _bits(X)):
            continue
        best, pivot = -1, 0
        for u in _bits(P | X):
            c = (P & compat[u]).bit_count()
            if c > best:
                best, pivot = c, u
        for v in _bits(P & ~compat[pivot]):
            stack.append((R | 1 << v, P & compat[v], X & compat[v]))
            P &= ~(1 << v)
            X |= 1 << v
    return results, used


def disjoint_rows(akeys: list[int], bkeys: list[int]) -> list[int]:
    """Row ``j`` has bit ``i`` set iff ``akeys[i] & bkeys[j] == 0``."""
    rows = []
    for b in bkeys:
        row = 0
        for i, a in enumerate(akeys):
            if a & b == 0:
                row |= 1 << i
        rows.append(row)
    return rows
