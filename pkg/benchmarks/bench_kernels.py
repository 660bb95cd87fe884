"""Time the compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from irredundant import _kernels_py
from irredundant.constructions import _masks_of_weight
from irredundant.cube import Family, all_subcubes
from irredundant.search import _all_perms, _pow3, _to_words, _vertex_bitset

try:
    from irredundant import _kernels as compiled
except ImportError:
    compiled = None


def _search_case(n: int, k: int):
    pool = all_subcubes(n, k)
    masks = _to_words([_vertex_bitset(c) for c in pool], n)
    region = _to_words([(1 << (1 << n)) - 1], n)[0]
    return (masks, region, [0], list(range(1, len(pool))), 0, True, 10 ** 9, 10 ** 12)


def _random_case(n: int, k: int, p: float):
    member = (np.random.default_rng(0).random(1 << n) < p).astype(np.uint8)
    return (n, k, member, np.fromiter(_masks_of_weight(n, k), dtype=np.int64))


def _orbit_case(words):
    fam = Family.from_words(words)
    n = fam.n
    moving = np.array([c.moving for c in fam], dtype=np.int64)
    values = np.array([c.values for c in fam], dtype=np.int64)
    return (n, moving, values, _all_perms(n), _pow3(n))


CASES = [
    ("branch_and_bound (4,2) enumerate", "branch_and_bound", lambda: _search_case(4, 2)),
    ("branch_and_bound (5,3) enumerate", "branch_and_bound", lambda: _search_case(5, 3)),
    ("random_family_core n=16 k=3", "random_family_core", lambda: _random_case(16, 3, 0.002)),
    ("min_orbit_keys n=5, 10 members", "min_orbit_keys",
     lambda: _orbit_case(["***00", "0***0", "00***", "*00**", "**00*",
                          "***11", "1***1", "11***", "*11**", "**11*"])),
]


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return a == b


def _time(fn, args, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if compiled is None:
        print("compiled extension not built; timing the pure-Python kernels only")
    print(f"{'case':<36} {'compiled':>10} {'python':>10} {'speedup':>8}  same")
    for label, name, make in CASES:
        case = make()
        t_py, out_py = _time(getattr(_kernels_py, name), case, args.repeat)
        if compiled is None:
            print(f"{label:<36} {'-':>10} {t_py:10.4f}")
            continue
        t_c, out_c = _time(getattr(compiled, name), case, args.repeat)
        same = _same(out_c, out_py)
        print(f"{label:<36} {t_c:10.4f} {t_py:10.4f} {t_py / t_c:7.1f}x  {same}")


if __name__ == "__main__":
    main()
