# cython: boundscheck=False, wraparound=False, cdivision=True
"""Exhaustive search kernel, compiled twin of ``_search``.

Same traversal order, same pruning, same node accounting as the pure Python
module; only the arithmetic runs in C. Callers are responsible for keeping
magnitudes within int64 range (``oracle`` dispatches accordingly).
"""

from libc.stdlib cimport free, malloc

STATUS_INFEASIBLE = 0
STATUS_FEASIBLE = 1
STATUS_BUDGET = 2

KERNEL_NAME = "compiled"

cdef int S_INFEASIBLE = 0
cdef int S_FEASIBLE = 1
cdef int S_BUDGET = 2


cdef class _Search:
    cdef int m, n, k
    cdef long long d, budget, nodes
    cdef long long *values
    cdef long long *residual
    cdef long long *caps
    cdef long long *cap_prefix
    cdef long long *picks
    cdef set memo_dead
    cdef dict memo_best
    cdef dict chosen

    def __cinit__(self, values, supply, caps, long long d, int k, long long budget):
        cdef int i
        self.m = len(values)
        self.n = len(caps)
        self.d = d
        self.k = k
        self.budget = budget
        self.nodes = 0
        self.values = <long long *> malloc(self.m * sizeof(long long))
        self.residual = <long long *> malloc(self.m * sizeof(long long))
        self.caps = <long long *> malloc(self.n * sizeof(long long))
        self.cap_prefix = <long long *> malloc((self.n + 1) * sizeof(long long))
        self.picks = <long long *> malloc(self.n * self.m * sizeof(long long))
        if (self.values == NULL or self.residual == NULL or self.caps == NULL
                or self.cap_prefix == NULL or self.picks == NULL):
            raise MemoryError
        for i in range(self.m):
            self.values[i] = values[i]
            self.residual[i] = supply[i]
        self.cap_prefix[0] = 0
        for i in range(self.n):
            self.caps[i] = caps[i]
            self.cap_prefix[i + 1] = self.cap_prefix[i] + self.caps[i]
        for i in range(self.n * self.m):
            self.picks[i] = 0
        self.memo_dead = set()
        self.memo_best = {}
        self.chosen = {}

    def __dealloc__(self):
        free(self.values)
        free(self.residual)
        free(self.caps)
        free(self.cap_prefix)
        free(self.picks)

    cdef tuple residual_key(self):
        cdef int c
        return tuple([self.residual[c] for c in range(self.m)])

    cdef bint lightest_ok(self, int j, int k):
        cdef long long need_balls = 0, light_weight = 0, need, take, avail
        cdef int c = self.m - 1
        cdef int length
        avail = self.residual[c]
        for length in range(1, j - k + 2):
            need = self.d * length
            while need_balls < need:
                if avail == 0:
                    if c == 0:
                        return False
                    c -= 1
                    avail = self.residual[c]
                    continue
                take = avail if avail <= need - need_balls else need - need_balls
                light_weight += take * self.values[c]
                need_balls += take
                avail -= take
            if self.cap_prefix[j + 1] - self.cap_prefix[j - length + 1] < light_weight:
                return False
        return True

    cdef long long min_completion(self, int c, long long q):
        cdef long long total = 0, take
        cdef int cc = self.m - 1
        while q > 0 and cc >= c:
            take = self.residual[cc] if self.residual[cc] <= q else q
            total += take * self.values[cc]
            q -= take
            cc -= 1
        return total

    # --- feasibility search -------------------------------------------------

    cdef int fill_from(self, int j):
        self.nodes += 1
        if self.nodes > self.budget:
            return S_BUDGET
        if j < self.k:
            return S_FEASIBLE
        key = (j, self.residual_key())
        if key in self.memo_dead:
            return S_INFEASIBLE
        if self.caps[j] < 0 or not self.lightest_ok(j, self.k):
            self.memo_dead.add(key)
            return S_INFEASIBLE
        cdef int status = self.choose(j, 0, self.d, self.caps[j])
        if status == S_INFEASIBLE:
            self.memo_dead.add(key)
        return status

    cdef int choose(self, int j, int c, long long d_left, long long cap_left):
        cdef long long rest, lo, hi, by_cap, x, new_cap, v
        cdef int cc, status
        self.nodes += 1
        if self.nodes > self.budget:
            return S_BUDGET
        if d_left == 0:
            self.chosen[j] = tuple(
                [self.picks[j * self.m + cc] for cc in range(c)]
            ) + (0,) * (self.m - c)
            return self.fill_from(j - 1)
        if c == self.m:
            return S_INFEASIBLE
        rest = 0
        for cc in range(c + 1, self.m):
            rest += self.residual[cc]
        lo = d_left - rest
        if lo < 0:
            lo = 0
        v = self.values[c]
        hi = self.residual[c] if self.residual[c] <= d_left else d_left
        if v > 0:
            by_cap = cap_left // v
            if by_cap < hi:
                hi = by_cap
        x = hi
        while x >= lo:
            new_cap = cap_left - x * v
            if self.min_completion(c + 1, d_left - x) <= new_cap:
                self.picks[j * self.m + c] = x
                self.residual[c] -= x
                status = self.choose(j, c + 1, d_left - x, new_cap)
                self.residual[c] += x
                if status == S_FEASIBLE:
                    return status
                if status == S_BUDGET:
                    return status
            x -= 1
        return S_INFEASIBLE

    # --- max packed weight (bins 1..n-1) ------------------------------------

    cdef int best_from(self, int j, long long *out):
        cdef long long best
        cdef int status
        self.nodes += 1
        if self.nodes > self.budget:
            return S_BUDGET
        if j == 0:
            out[0] = 0
            return S_FEASIBLE
        key = (j, self.residual_key())
        val = self.memo_best.get(key)
        if val is not None:
            if val == -1:
                return S_INFEASIBLE
            out[0] = val
            return S_FEASIBLE
        if self.caps[j] < 0 or not self.lightest_ok(j, 1):
            self.memo_best[key] = -1
            return S_INFEASIBLE
        best = -1
        status = self.choose_best(j, 0, self.d, self.caps[j], 0, &best)
        if status == S_BUDGET:
            return S_BUDGET
        self.memo_best[key] = best
        if best == -1:
            return S_INFEASIBLE
        out[0] = best
        return S_FEASIBLE

    cdef int choose_best(self, int j, int c, long long d_left, long long cap_left,
                         long long packed, long long *best):
        cdef long long rest, lo, hi, by_cap, x, new_cap, v, below
        cdef int cc, status
        self.nodes += 1
        if self.nodes > self.budget:
            return S_BUDGET
        if d_left == 0:
            below = 0
            status = self.best_from(j - 1, &below)
            if status == S_BUDGET:
                return S_BUDGET
            if status == S_FEASIBLE:
                if packed + below > best[0]:
                    best[0] = packed + below
            return S_INFEASIBLE  # value ignored; best[] carries the result
        if c == self.m:
            return S_INFEASIBLE
        rest = 0
        for cc in range(c + 1, self.m):
            rest += self.residual[cc]
        lo = d_left - rest
        if lo < 0:
            lo = 0
        v = self.values[c]
        hi = self.residual[c] if self.residual[c] <= d_left else d_left
        if v > 0:
            by_cap = cap_left // v
            if by_cap < hi:
                hi = by_cap
        x = hi
        while x >= lo:
            new_cap = cap_left - x * v
            if self.min_completion(c + 1, d_left - x) <= new_cap:
                self.residual[c] -= x
                status = self.choose_best(j, c + 1, d_left - x, new_cap,
                                          packed + x * v, best)
                self.residual[c] += x
                if status == S_BUDGET:
                    return S_BUDGET
            x -= 1
        return S_INFEASIBLE


def search_feasible(values, supply, caps, d, k, budget):
    """Compiled counterpart of ``_search.search_feasible``."""
    cdef _Search search
    if k >= len(caps):
        return STATUS_FEASIBLE, {}, 0
    search = _Search(values, supply, caps, d, k, budget)
    cdef int status = search.fill_from(len(caps) - 1)
    if status == S_BUDGET:
        return STATUS_BUDGET, None, search.nodes
    if status == S_FEASIBLE:
        return STATUS_FEASIBLE, search.chosen, search.nodes
    return STATUS_INFEASIBLE, None, search.nodes


def search_max_packed(values, supply, caps, d, budget):
    """Compiled counterpart of ``_search.search_max_packed``."""
    cdef _Search search
    cdef long long best = 0
    if len(caps) == 1:
        return STATUS_FEASIBLE, 0, 0
    search = _Search(values, supply, caps, d, 1, budget)
    cdef int status = search.best_from(len(caps) - 1, &best)
    if status == S_BUDGET:
        return STATUS_BUDGET, None, search.nodes
    if status == S_FEASIBLE:
        return STATUS_FEASIBLE, best, search.nodes
    return STATUS_INFEASIBLE, None, search.nodes
