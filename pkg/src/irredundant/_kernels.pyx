# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: branch-and-bound search, random-family sampling and
orbit minimisation for canonical forms.

Each function has a pure-Python twin in ``_kernels_py`` with the same
signature and the same traversal order; ``irredundant._backend`` picks one
at import time.
"""

import numpy as np

from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, free, qsort
from libc.string cimport memset

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND = "cython"


cdef inline int _popcount(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef struct Search:
    int N
    int W
    uint64_t *masks      # N * W, vertex set of every candidate
    uint64_t *region     # W, vertices allowed to serve as private vertices
    int *fam             # current family (candidate indices)
    int fam_size
    uint64_t *once       # (N + 2) * W, vertices covered exactly once, per level
    uint64_t *twice      # (N + 2) * W, vertices covered at least twice, per level
    uint64_t *privs      # (N + 2) * N * W, private sets of members, per level
    int *cands           # (N + 2) * N, surviving candidates, per level
    int *ncands          # N + 2
    int best
    int upper
    bint enumerate
    int64_t nodes
    int64_t budget
    bint exhausted
    bint capped


cdef class _Recorder:
    cdef public list families

    def __cinit__(self):
        self.families = []


cdef void _record(Search *s, _Recorder rec, bint reset):
    cdef int i
    if reset:
        rec.families.clear()
    rec.families.append([s.fam[i] for i in range(s.fam_size)])


cdef bint _push(Search *s, int level, int c):
    """Add candidate ``c`` on top of ``level``; fill ``level + 1`` state.

    Returns False when the enlarged family is not irredundant.
    """
    cdef int W = s.W
    cdef int w, j, size
    cdef uint64_t m, o, t, acc
    cdef uint64_t *once0 = s.once + level * W
    cdef uint64_t *twice0 = s.twice + level * W
    cdef uint64_t *once1 = s.once + (level + 1) * W
    cdef uint64_t *twice1 = s.twice + (level + 1) * W
    cdef uint64_t *mc = s.masks + c * W
    cdef uint64_t *pv
    for w in range(W):
        m = mc[w]
        t = twice0[w] | (once0[w] & m)
        twice1[w] = t
        once1[w] = (once0[w] ^ m) & ~t
    s.fam[s.fam_size] = c
    size = s.fam_size + 1
    pv = s.privs + (level + 1) * s.N * W
    for j in range(size):
        acc = 0
        for w in range(W):
            o = s.masks[s.fam[j] * W + w] & once1[w] & s.region[w]
            pv[j * W + w] = o
            acc |= o
        if acc == 0:
            return False
    s.fam_size = size
    return True


cdef void _filter(Search *s, int level, int *src, int nsrc):
    """Keep the candidates of ``src`` that can still join the family at ``level``."""
    cdef int W = s.W
    cdef int i, j, w, c, out = 0
    cdef uint64_t acc, free_bits
    cdef uint64_t *once1 = s.once + level * W
    cdef uint64_t *twice1 = s.twice + level * W
    cdef uint64_t *pv = s.privs + level * s.N * W
    cdef uint64_t *mc
    cdef int *dst = s.cands + level * s.N
    cdef bint ok
    for i in range(nsrc):
        c = src[i]
        mc = s.masks + c * W
        free_bits = 0
        for w in range(W):
            free_bits |= mc[w] & s.region[w] & ~(once1[w] | twice1[w])
        if free_bits == 0:
            continue
        ok = True
        for j in range(s.fam_size):
            acc = 0
            for w in range(W):
                acc |= pv[j * W + w] & ~mc[w]
            if acc == 0:
                ok = False
                break
        if ok:
            dst[out] = c
            out += 1
    s.ncands[level] = out


cdef void _recurse(Search *s, int level, _Recorder rec):
    cdef int W = s.W
    cdef int size = s.fam_size
    cdef int idx, r, c, rem, ub, uc, w
    cdef int *cl
    if s.exhausted or s.capped:
        return
    s.nodes += 1
    if s.nodes > s.budget:
        s.exhausted = True
        return
    if size > s.best:
        s.best = size
        _record(s, rec, True)
    elif s.enumerate and size == s.best:
        _record(s, rec, False)
    if not s.enumerate and s.best >= s.upper:
        s.capped = True
        return
    uc = 0
    for w in range(W):
        uc += _popcount(s.region[w] & ~(s.once[level * W + w] | s.twice[level * W + w]))
    r = s.ncands[level]
    cl = s.cands + level * s.N
    for idx in range(r):
        rem = r - idx
        ub = size + (rem if rem < uc else uc)
        if ub < s.best or (ub == s.best and not s.enumerate):
            return
        c = cl[idx]
        if _push(s, level, c):
            _filter(s, level + 1, cl + idx + 1, r - idx - 1)
            _recurse(s, level + 1, rec)
        s.fam_size = size
        if s.exhausted or s.capped:
            return


def branch_and_bound(masks, region, fixed, cands, int best, bint enumerate,
                     int upper, long long budget):
    """Depth-first search for large irredundant families.

    ``masks`` is an (N, W) uint64 array: candidate ``i`` covers vertex ``x``
    iff bit ``x % 64`` of ``masks[i, x // 64]`` is set.  Only vertices in
    ``region`` count as private.  The family always contains ``fixed``; the
    remaining members are drawn from ``cands`` in order.

    Returns ``(best, families, nodes, exhausted)`` where ``families`` holds the
    best family found (or, when ``enumerate`` is set, every family of size
    ``best`` met during the search).  ``best`` on entry is an incumbent size:
    families strictly smaller than it are never reported.
    """
    cdef uint64_t[:, ::1] M = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef uint64_t[::1] R = np.ascontiguousarray(region, dtype=np.uint64)
    cdef int N = M.shape[0]
    cdef int W = M.shape[1]
    cdef int L = N + 2
    cdef Search s
    cdef _Recorder rec = _Recorder()
    cdef int i, nc, level, c
    cdef int *init
    cdef bint ok = True

    s.N = N if N > 0 else 1
    s.W = W
    s.masks = &M[0, 0] if N > 0 else NULL
    s.region = &R[0]
    s.fam = <int *> malloc(L * sizeof(int))
    s.once = <uint64_t *> malloc(L * W * sizeof(uint64_t))
    s.twice = <uint64_t *> malloc(L * W * sizeof(uint64_t))
    s.privs = <uint64_t *> malloc(L * s.N * W * sizeof(uint64_t))
    s.cands = <int *> malloc(L * s.N * sizeof(int))
    s.ncands = <int *> malloc(L * sizeof(int))
    init = <int *> malloc(s.N * sizeof(int))
    s.fam_size = 0
    s.best = best
    s.upper = upper
    s.enumerate = enumerate
    s.nodes = 0
    s.budget = budget
    s.exhausted = False
    s.capped = False
    try:
        memset(s.once, 0, W * sizeof(uint64_t))
        memset(s.twice, 0, W * sizeof(uint64_t))
        level = 0
        for c in fixed:
            if not _push(&s, level, c):
                ok = False
                break
            level += 1
        if not ok:
            return best, [], 0, False
        nc = 0
        for c in cands:
            init[nc] = c
            nc += 1
        _filter(&s, level, init, nc)
        _recurse(&s, level, rec)
        return s.best, rec.families, s.nodes, s.exhausted
    finally:
        free(s.fam)
        free(s.once)
        free(s.twice)
        free(s.privs)
        free(s.cands)
        free(s.ncands)
        free(init)


def random_family_core(int n, int k, member, long long[::1] k_masks):
    """Build the distance-``k`` family from a sampled vertex set.

    ``member`` is a length ``2**n`` boolean array marking the sample.  For
    every vertex ``w`` at distance exactly ``k`` from the sample, the
    numerically smallest sample vertex ``x`` with ``|w ^ x| == k`` is chosen
    (``k_masks`` lists every ``n``-bit mask of weight ``k``).  Returns the
    arrays ``(w, x)`` in increasing order of ``w``.
    """
    cdef uint8_t[::1] S = np.ascontiguousarray(member, dtype=np.uint8)
    cdef int size = 1 << n
    cdef int[::1] dist = np.empty(size, dtype=np.int32)
    cdef int i, x, y, d, bit, count = 0, j
    cdef long long best, cand
    cdef int nm = k_masks.shape[0]
    for x in range(size):
        dist[x] = 0 if S[x] else n + 1
    for i in range(n):
        bit = 1 << i
        for x in range(size):
            y = x ^ bit
            d = dist[y] + 1
            if d < dist[x]:
                dist[x] = d
    for x in range(size):
        if dist[x] == k:
            count += 1
    ws = np.empty(count, dtype=np.int64)
    xs = np.empty(count, dtype=np.int64)
    cdef long long[::1] W = ws
    cdef long long[::1] X = xs
    i = 0
    for x in range(size):
        if dist[x] != k:
            continue
        best = size
        for j in range(nm):
            cand = x ^ k_masks[j]
            if S[cand] and cand < best:
                best = cand
        W[i] = x
        X[i] = best
        i += 1
    return ws, xs


cdef int _cmp_u64(const void *a, const void *b) noexcept nogil:
    cdef uint64_t x = (<uint64_t *> a)[0]
    cdef uint64_t y = (<uint64_t *> b)[0]
    return (x > y) - (x < y)


def min_orbit_keys(int n, long long[::1] moving, long long[::1] values,
                   long long[:, ::1] perms, long long[::1] pow3):
    """Lexicographically smallest sorted key tuple over the orbit of a family.

    The group is every translation followed by every coordinate permutation
    in ``perms`` (row ``p`` sends coordinate ``i`` to ``perms[p, i]``).  A
    subcube's key is ``sum(code[i] * pow3[i])`` with code 0 for a moving
    coordinate, 1 for a fixed 0 and 2 for a fixed 1, so key order matches the
    order of the ``{*,0,1}`` words.
    """
    cdef int m = moving.shape[0]
    cdef int P = perms.shape[0]
    cdef int size = 1 << n
    cdef int p, t, j, i, better
    cdef long long mv, vl, key
    cdef uint64_t *cur = <uint64_t *> malloc((m + 1) * sizeof(uint64_t))
    cdef uint64_t *bestk = <uint64_t *> malloc((m + 1) * sizeof(uint64_t))
    cdef bint have = False
    try:
        for t in range(size):
            for p in range(P):
                for j in range(m):
                    mv = moving[j]
                    vl = (values[j] ^ t) & ~mv
                    key = 0
                    for i in range(n):
                        if (mv >> i) & 1:
                            pass
                        elif (vl >> i) & 1:
                            key += 2 * pow3[perms[p, i]]
                        else:
                            key += pow3[perms[p, i]]
                    cur[j] = <uint64_t> key
                qsort(cur, m, sizeof(uint64_t), _cmp_u64)
                if not have:
                    better = 1
                else:
                    better = 0
                    for j in range(m):
                        if cur[j] != bestk[j]:
                            better = 1 if cur[j] < bestk[j] else 0
                            break
                if better:
                    for j in range(m):
                        bestk[j] = cur[j]
                    have = True
        return [int(bestk[j]) for j in range(m)]
    finally:
        free(cur)
        free(bestk)
