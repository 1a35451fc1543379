# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of ``_pykernels`` over fixed-width uint64 word arrays.

Control flow, branching order and node accounting follow the Python code
step for step, so both backends return identical ``(results, used)``.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy, memset

cdef enum:
    DEF_COMPLETE = 0
    DEF_STABLE = 1
    DEF_PREFERRED = 2


cdef inline int popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef void to_words(object value, uint64_t* out, int W):
    cdef bytes raw = int(value).to_bytes(W * 8, "little")
    memcpy(out, <const char*>raw, W * 8)


cdef object from_words(const uint64_t* src, int W):
    return int.from_bytes((<const char*>src)[:W * 8], "little")


cdef inline bint is_zero(const uint64_t* a, int W) nogil:
    cdef int i
    for i in range(W):
        if a[i]:
            return False
    return True


cdef inline int lowest(const uint64_t* a, int W) nogil:
    cdef int i
    for i in range(W):
        if a[i]:
            return i * 64 + ctz(a[i])
    return -1


cdef inline void union_rows(const uint64_t* rows, const uint64_t* members, uint64_t* out, int W) nogil:
    """out = OR of rows[i] over the bits i of members."""
    cdef int i, j, x
    cdef uint64_t w
    memset(out, 0, W * 8)
    for i in range(W):
        w = members[i]
        while w:
            x = i * 64 + ctz(w)
            w &= w - 1
            for j in range(W):
                out[j] |= rows[x * W + j]


cdef struct Ctx:
    int n
    int W
    uint64_t* atk      # attackers, n rows of W words
    uint64_t* ate      # attackees
    uint64_t* every
    uint64_t* selfatk
    long long budget
    long long used
    uint64_t* scratch  # 4 W words: hit, back, possible, tmp


cdef int propagate(Ctx* c, uint64_t* IN, uint64_t* OUT, uint64_t* UND, bint stable) nogil:
    """Returns 1 on a consistent fixpoint, 0 on failure; updates the state in place."""
    cdef int W = c.W
    cdef uint64_t* hit = c.scratch
    cdef uint64_t* back = c.scratch + W
    cdef uint64_t* force = c.scratch + 2 * W
    cdef uint64_t* cand = c.scratch + 3 * W
    cdef int i, j, x, y, k
    cdef uint64_t w, m, any_force, nonzero
    cdef const uint64_t* a
    while True:
        union_rows(c.ate, IN, hit, W)
        union_rows(c.atk, IN, back, W)
        for i in range(W):
            if IN[i] & (hit[i] | back[i]):
                return 0
        for i in range(W):
            m = UND[i] & (hit[i] | back[i])
            UND[i] &= ~m
            OUT[i] |= m
        for i in range(W):
            w = OUT[i]
            while w:
                x = i * 64 + ctz(w)
                w &= w - 1
                a = c.atk + x * W
                nonzero = 0
                for j in range(W):
                    nonzero |= a[j] & ~hit[j]
                if nonzero == 0:
                    return 0
                if stable:
                    nonzero = 0
                    for j in range(W):
                        nonzero |= a[j] & (IN[j] | UND[j])
                    if nonzero == 0:
                        return 0
        memset(force, 0, W * 8)
        for i in range(W):
            w = back[i] & ~hit[i]
            while w:
                y = i * 64 + ctz(w)
                w &= w - 1
                k = 0
                for j in range(W):
                    cand[j] = c.atk[y * W + j] & UND[j]
                    k += popcount(cand[j])
                if k == 0:
                    return 0
                if k == 1:
                    for j in range(W):
                        force[j] |= cand[j]
        for i in range(W):
            w = UND[i]
            while w:
                x = i * 64 + ctz(w)
                w &= w - 1
                nonzero = 0
                for j in range(W):
                    nonzero |= c.atk[x * W + j] & ~hit[j]
                if nonzero == 0:
                    force[i] |= (<uint64_t>1) << (x - i * 64)
        any_force = 0
        for i in range(W):
            any_force |= force[i]
        if not any_force:
            return 1
        for i in range(W):
            IN[i] |= force[i]
            UND[i] &= ~force[i]


cdef bint is_solution(Ctx* c, const uint64_t* IN, bint stable) nogil:
    cdef int W = c.W
    cdef uint64_t* hit = c.scratch
    cdef int i, j, x
    cdef uint64_t nonzero
    cdef bint defended, member
    union_rows(c.ate, IN, hit, W)
    for i in range(W):
        if IN[i] & hit[i]:
            return False
    for x in range(c.n):
        nonzero = 0
        for j in range(W):
            nonzero |= c.atk[x * W + j] & ~hit[j]
        defended = nonzero == 0
        member = (IN[x >> 6] >> (x & 63)) & 1
        if defended != member:
            return False
    if stable:
        for i in range(W):
            if (IN[i] | hit[i]) != c.every[i]:
                return False
    return True


cdef class _Found:
    """Growable array of W-word bitsets."""
    cdef uint64_t* data
    cdef int count
    cdef int cap
    cdef int W

    def __cinit__(self, int W):
        self.W = W
        self.count = 0
        self.cap = 8
        self.data = <uint64_t*>malloc(self.cap * W * 8)
        if self.data == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.data)

    cdef void push(self, const uint64_t* e):
        if self.count == self.cap:
            self.cap *= 2
            self.data = <uint64_t*>realloc(self.data, self.cap * self.W * 8)
        memcpy(self.data + self.count * self.W, e, self.W * 8)
        self.count += 1

    cdef list to_list(self):
        return [from_words(self.data + i * self.W, self.W) for i in range(self.count)]


cdef _Found run(Ctx* c, int mode, const uint64_t* fixed_in, const uint64_t* fixed_out, int limit):
    cdef int W = c.W
    cdef bint stable = mode == DEF_STABLE
    cdef _Found results = _Found(W)
    cdef _Found bigger
    cdef int i, j, x, pick, sp, cap
    cdef uint64_t w, bad, cw
    cdef uint64_t* stack
    cdef uint64_t* state
    cdef uint64_t* IN
    cdef uint64_t* OUT
    cdef uint64_t* UND
    cdef uint64_t* hit
    cdef uint64_t* back
    cdef uint64_t* top
    cdef uint64_t* p
    cdef bint covered
    for i in range(W):
        if fixed_in[i] & c.selfatk[i]:
            return results
    cap = 64
    stack = <uint64_t*>malloc(cap * 3 * W * 8)
    state = <uint64_t*>malloc(3 * W * 8)
    hit = <uint64_t*>malloc(2 * W * 8)
    if stack == NULL or state == NULL or hit == NULL:
        free(stack); free(state); free(hit)
        raise MemoryError()
    back = hit + W
    IN = state
    OUT = state + W
    UND = state + 2 * W
    for i in range(W):
        stack[i] = fixed_in[i]
        stack[W + i] = (fixed_out[i] | c.selfatk[i]) & ~fixed_in[i]
        stack[2 * W + i] = c.every[i] & ~(fixed_in[i] | stack[W + i])
    sp = 1
    try:
        while sp:
            c.used += 1
            if c.used > c.budget:
                return results
            sp -= 1
            memcpy(state, stack + sp * 3 * W, 3 * W * 8)
            if not propagate(c, IN, OUT, UND, stable):
                continue
            if mode == DEF_PREFERRED:
                covered = False
                for j in range(results.count):
                    p = results.data + j * W
                    bad = 0
                    for i in range(W):
                        bad |= (IN[i] | UND[i]) & ~p[i]
                    if bad == 0:
                        covered = True
                        break
                if covered:
                    continue
            if is_zero(UND, W):
                if not is_solution(c, IN, stable):
                    continue
                if mode == DEF_PREFERRED:
                    memset(hit, 0, W * 8)
                    bigger = run(c, DEF_COMPLETE, IN, hit, 2)
                    if c.used > c.budget:
                        return results
                    if bigger.count > 1:
                        continue
                results.push(IN)
                if limit and results.count >= limit:
                    return results
                continue
            union_rows(c.ate, IN, hit, W)
            union_rows(c.atk, IN, back, W)
            pick = -1
            for i in range(W):
                w = back[i] & ~hit[i]
                if w:
                    x = i * 64 + ctz(w)
                    for j in range(W):
                        cw = c.atk[x * W + j] & UND[j]
                        if cw:
                            pick = j * 64 + ctz(cw)
                            break
                    break
            if pick < 0:
                pick = lowest(UND, W)
            if sp + 2 > cap:
                cap *= 2
                stack = <uint64_t*>realloc(stack, cap * 3 * W * 8)
                if stack == NULL:
                    raise MemoryError()
            top = stack + sp * 3 * W
            memcpy(top, state, 3 * W * 8)
            top[W + (pick >> 6)] |= (<uint64_t>1) << (pick & 63)
            top[2 * W + (pick >> 6)] &= ~((<uint64_t>1) << (pick & 63))
            top = stack + (sp + 1) * 3 * W
            memcpy(top, state, 3 * W * 8)
            top[pick >> 6] |= (<uint64_t>1) << (pick & 63)
            top[2 * W + (pick >> 6)] &= ~((<uint64_t>1) << (pick & 63))
            sp += 2
        return results
    finally:
        free(stack)
        free(state)
        free(hit)


cdef uint64_t* load_rows(list rows, int n, int W) except NULL:
    cdef uint64_t* out = <uint64_t*>malloc(max(n, 1) * W * 8)
    cdef int x
    if out == NULL:
        raise MemoryError()
    for x in range(n):
        to_words(rows[x], out + x * W, W)
    return out


def complete_search(int n, list attackers, list attackees, int mode, long long budget,
                    fixed_in=0, fixed_out=0, int limit=0):
    cdef int W = max(1, (n + 63) // 64)
    cdef Ctx c
    cdef int x
    cdef _Found found
    c.n = n
    c.W = W
    c.budget = budget
    c.used = 0
    c.atk = load_rows(attackers, n, W)
    c.ate = NULL
    c.every = NULL
    c.selfatk = NULL
    c.scratch = NULL
    fin = <uint64_t*>malloc(2 * W * 8)
    try:
        c.ate = load_rows(attackees, n, W)
        c.every = <uint64_t*>malloc(2 * W * 8)
        c.scratch = <uint64_t*>malloc(4 * W * 8)
        if c.every == NULL or c.scratch == NULL or fin == NULL:
            raise MemoryError()
        c.selfatk = c.every + W
        to_words((1 << int(n)) - 1, c.every, W)
        memset(c.selfatk, 0, W * 8)
        for x in range(n):
            if (c.atk[x * W + (x >> 6)] >> (x & 63)) & 1:
                c.selfatk[x >> 6] |= (<uint64_t>1) << (x & 63)
        to_words(fixed_in, fin, W)
        to_words(fixed_out, fin + W, W)
        found = run(&c, mode, fin, fin + W, limit)
        return found.to_list(), c.used
    finally:
        free(c.atk)
        free(c.ate)
        free(c.every)
        free(c.scratch)
        free(fin)


def grounded(int n, list attackers, list attackees):
    cdef int W = max(1, (n + 63) // 64)
    cdef uint64_t* atk = load_rows(attackers, n, W)
    cdef uint64_t* ate = NULL
    cdef uint64_t* buf = <uint64_t*>malloc(3 * W * 8)
    cdef uint64_t* IN = buf
    cdef uint64_t* nxt = buf + W
    cdef uint64_t* hit = buf + 2 * W
    cdef int x, j
    cdef uint64_t nonzero
    cdef bint same
    if buf == NULL:
        free(atk)
        raise MemoryError()
    try:
        ate = load_rows(attackees, n, W)
        memset(IN, 0, W * 8)
        while True:
            union_rows(ate, IN, hit, W)
            memset(nxt, 0, W * 8)
            for x in range(n):
                nonzero = 0
                for j in range(W):
                    nonzero |= atk[x * W + j] & ~hit[j]
                if nonzero == 0:
                    nxt[x >> 6] |= (<uint64_t>1) << (x & 63)
            same = True
            for j in range(W):
                if nxt[j] != IN[j]:
                    same = False
            if same:
                return from_words(IN, W)
            memcpy(IN, nxt, W * 8)
    finally:
        free(atk)
        free(ate)
        free(buf)


def maximal_conflict_free(int n, list attackers, list attackees, long long budget,
                          candidates=-1, blockers=0, int limit=0):
    cdef int W = max(1, (n + 63) // 64)
    cdef uint64_t* atk = load_rows(attackers, n, W)
    cdef uint64_t* ate = NULL
    cdef uint64_t* compat = NULL
    cdef uint64_t* stack = NULL
    cdef uint64_t* cur = NULL
    cdef uint64_t* ok
    cdef uint64_t* R
    cdef uint64_t* P
    cdef uint64_t* X
    cdef uint64_t* top
    cdef uint64_t* cv
    cdef int x, i, j, u, v, best, cnt, pivot, sp, cap
    cdef uint64_t w, bad
    cdef long long used = 0
    cdef bint pruned
    results = []
    try:
        ate = load_rows(attackees, n, W)
        compat = <uint64_t*>malloc((n + 1) * W * 8)
        cur = <uint64_t*>malloc(4 * W * 8)
        cap = 64
        stack = <uint64_t*>malloc(cap * 3 * W * 8)
        if compat == NULL or cur == NULL or stack == NULL:
            raise MemoryError()
        ok = compat + n * W
        memset(ok, 0, W * 8)
        for x in range(n):
            if not (atk[x * W + (x >> 6)] >> (x & 63)) & 1:
                ok[x >> 6] |= (<uint64_t>1) << (x & 63)
        for x in range(n):
            for j in range(W):
                compat[x * W + j] = ok[j] & ~(atk[x * W + j] | ate[x * W + j])
            compat[x * W + (x >> 6)] &= ~((<uint64_t>1) << (x & 63))
        R = cur
        P = cur + W
        X = cur + 2 * W
        cv = cur + 3 * W
        memset(stack, 0, 3 * W * 8)
        if candidates < 0:
            memcpy(stack + W, ok, W * 8)
        else:
            to_words(candidates, stack + W, W)
            for j in range(W):
                stack[W + j] &= ok[j]
        to_words(blockers, stack + 2 * W, W)
        for j in range(W):
            stack[2 * W + j] &= ok[j] & ~stack[W + j]
        sp = 1
        while sp:
            used += 1
            if used > budget:
                return results, used
            sp -= 1
            memcpy(cur, stack + sp * 3 * W, 3 * W * 8)
            if is_zero(P, W):
                if is_zero(X, W):
                    results.append(from_words(R, W))
                    if limit and len(results) >= limit:
                        return results, used
                continue
            pruned = False
            for i in range(W):
                w = X[i]
                while w and not pruned:
                    u = i * 64 + ctz(w)
                    w &= w - 1
                    bad = 0
                    for j in range(W):
                        bad |= P[j] & ~compat[u * W + j]
                    if bad == 0:
                        pruned = True
                if pruned:
                    break
            if pruned:
                continue
            best = -1
            pivot = 0
            for i in range(W):
                w = P[i] | X[i]
                while w:
                    u = i * 64 + ctz(w)
                    w &= w - 1
                    cnt = 0
                    for j in range(W):
                        cnt += popcount(P[j] & compat[u * W + j])
                    if cnt > best:
                        best = cnt
                        pivot = u
            for j in range(W):
                cv[j] = P[j] & ~compat[pivot * W + j]
            for i in range(W):
                w = cv[i]
                while w:
                    v = i * 64 + ctz(w)
                    w &= w - 1
                    if sp + 1 > cap:
                        cap *= 2
                        stack = <uint64_t*>realloc(stack, cap * 3 * W * 8)
                        if stack == NULL:
                            raise MemoryError()
                    top = stack + sp * 3 * W
                    for j in range(W):
                        top[j] = R[j]
                        top[W + j] = P[j] & compat[v * W + j]
                        top[2 * W + j] = X[j] & compat[v * W + j]
                    top[v >> 6] |= (<uint64_t>1) << (v & 63)
                    sp += 1
                    P[v >> 6] &= ~((<uint64_t>1) << (v & 63))
                    X[v >> 6] |= (<uint64_t>1) << (v & 63)
        return results, used
    finally:
        free(atk)
        free(ate)
        free(compat)
        free(stack)
        free(cur)


def disjoint_rows(list akeys, list bkeys):
    cdef int na = len(akeys)
    cdef int W = max(1, (na + 63) // 64)
    cdef int i, j
    cdef uint64_t b
    cdef uint64_t* a
    cdef uint64_t* row
    for k in akeys:
        if k >> 64:
            return _py_disjoint_rows(akeys, bkeys)
    for k in bkeys:
        if k >> 64:
            return _py_disjoint_rows(akeys, bkeys)
    a = <uint64_t*>malloc(max(na, 1) * 8)
    row = <uint64_t*>malloc(W * 8)
    if a == NULL or row == NULL:
        free(a); free(row)
        raise MemoryError()
    try:
        for i in range(na):
            a[i] = <uint64_t>akeys[i]
        rows = []
        for kb in bkeys:
            b = <uint64_t>kb
            memset(row, 0, W * 8)
            for i in range(na):
                if a[i] & b == 0:
                    row[i >> 6] |= (<uint64_t>1) << (i & 63)
            rows.append(from_words(row, W))
        return rows
    finally:
        free(a)
        free(row)


def _py_disjoint_rows(akeys, bkeys):
    from ._pykernels import disjoint_rows as impl
    return impl(akeys, bkeys)
