"""Pure-Python versions of the compiled kernels.

Same signatures, same traversal order and the same node counts as the
compiled module; vertex sets are Python integers used as bitsets.
"""
from __future__ import annotations

import sys

import numpy as np

BACKEND = "python"


def _rows_to_ints(masks) -> list[int]:
    arr = np.ascontiguousarray(masks, dtype=np.uint64)
    if arr.ndim == 1:
        return [int.from_bytes(arr.astype("<u8").tobytes(), "little")]
    return [int.from_bytes(row.astype("<u8").tobytes(), "little") for row in arr]


class _Search:
    def __init__(self, masks, region, best, enumerate, upper, budget):
        self.masks = masks
        self.region = region
        self.best = best
        self.enumerate = enumerate
        self.upper = upper
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        self.capped = False
        self.fam: list[int] = []
        self.families: list[list[int]] = []

    def push(self, once, twice, c):
        """State after adding ``c``, or None when some member loses its last private vertex."""
        m = self.masks[c]
        t = twice | (once & m)
        o = (once ^ m) & ~t
        fam = self.fam + [c]
        privs = []
        for j in fam:
            p = self.masks[j] & o & self.region
            if not p:
                return None
            privs.append(p)
        return o, t, privs

    def filter(self, once, twice, privs, src):
        free = self.region & ~(once | twice)
        out = []
        for c in src:
            m = self.masks[c]
            if not m & free:
                continue
            if all(p & ~m for p in privs):
                out.append(c)
        return out

    def recurse(self, once, twice, cands):
        if self.exhausted or self.capped:
            return
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        size = len(self.fam)
        if size > self.best:
            self.best = size
            self.families = [list(self.fam)]
        elif self.enumerate and size == self.best:
            self.families.append(list(self.fam))
        if not self.enumerate and self.best >= self.upper:
            self.capped = True
            return
        uc = bin(self.region & ~(once | twice)).count("1")
        r = len(cands)
        for idx, c in enumerate(cands):
            ub = size + min(r - idx, uc)
            if ub < self.best or (ub == self.best and not self.enumerate):
                return
            state = self.push(once, twice, c)
            if state is not None:
                o, t, privs = state
                nxt = self.filter(o, t, privs, cands[idx + 1:])
                self.fam.append(c)
                self.recurse(o, t, nxt)
                self.fam.pop()
            if self.exhausted or self.capped:
                return


def branch_and_bound(masks, region, fixed, cands, best, enumerate, upper, budget):
    """See the compiled ``branch_and_bound``; identical contract."""
    s = _Search(_rows_to_ints(masks), _rows_to_ints(region)[0], best, bool(enumerate),
                upper, budget)
    once = twice = 0
    privs: list[int] = []
    for c in fixed:
        state = s.push(once, twice, c)
        if state is None:
            return best, [], 0, False
        once, twice, privs = state
        s.fam.append(c)
    start = s.filter(once, twice, privs, list(cands))
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(start) + len(s.fam) + 200))
    try:
        s.recurse(once, twice, start)
    finally:
        sys.setrecursionlimit(limit)
    return s.best, s.families, s.nodes, s.exhausted


def random_family_core(n, k, member, k_masks):
    """See the compiled ``random_family_core``; identical contract."""
    size = 1 << n
    S = np.ascontiguousarray(member, dtype=bool)
    dist = np.where(S, 0, n + 1).astype(np.int32)
    idx = np.arange(size, dtype=np.int64)
    for i in range(n):
        dist = np.minimum(dist, dist[idx ^ (1 << i)] + 1)
    ws = np.flatnonzero(dist == k).astype(np.int64)
    k_masks = np.asarray(k_masks, dtype=np.int64)
    if ws.size == 0:
        return ws, np.empty(0, dtype=np.int64)
    cand = ws[:, None] ^ k_masks[None, :]
    cand = np.where(S[cand], cand, size)
    return ws, cand.min(axis=1).astype(np.int64)


def min_orbit_keys(n, moving, values, perms, pow3):
    """See the compiled ``min_orbit_keys``; identical contract."""
    moving = [int(x) for x in moving]
    values = [int(x) for x in values]
    pow3 = [int(x) for x in pow3]
    weights = [[pow3[int(j)] for j in row] for row in perms]
    best = None
    for t in range(1 << n):
        fixed = [((v ^ t) & ~mv, mv) for mv, v in zip(moving, values)]
        for w in weights:
            keys = []
            for vl, mv in fixed:
                key = 0
                for i in range(n):
                    if mv >> i & 1:
                        continue
                    key += (2 if vl >> i & 1 else 1) * w[i]
                keys.append(key)
            keys.sort()
            if best is None or keys < best:
                best = keys
    return best if best is not None else []
