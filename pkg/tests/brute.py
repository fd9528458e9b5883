"""Definitional brute-force constructions used as test oracles.

Everything here is rebuilt from the definitions on plain nested tuples
(0=false, 1=undef, 2=true) without touching the package's enumeration
or order machinery.
"""
from functools import lru_cache
from itertools import product

from holwfs.typeexpr import Iota, Omicron

F, U, T = 0, 1, 2


def truth_le(a, b):
    if isinstance(a, tuple):
        return all(truth_le(x, y) for x, y in zip(a, b))
    return a <= b


def info_le(a, b):
    if isinstance(a, tuple):
        return all(info_le(x, y) for x, y in zip(a, b))
    return a == b or a == U


def pair_info_le(p, q):
    return truth_le(p[0], q[0]) and truth_le(q[1], p[1])


def pair_truth_le(p, q):
    return truth_le(p[0], q[0]) and truth_le(p[1], q[1])


def join(a, b):
    if isinstance(a, tuple):
        return tuple(join(x, y) for x, y in zip(a, b))
    return max(a, b)


def meet(a, b):
    if isinstance(a, tuple):
        return tuple(meet(x, y) for x, y in zip(a, b))
    return min(a, b)


@lru_cache(maxsize=None)
def three(t, n):
    """Fitting-monotone functions, keys in sorted order of the argument domain."""
    if isinstance(t, Omicron):
        return (F, U, T)
    if isinstance(t, Iota):
        return tuple(range(n))
    keys = three(t.arg, n)
    vals = three(t.result, n)
    rel = [] if isinstance(t.arg, Iota) else [
        (i, j) for i in range(len(keys)) for j in range(len(keys)) if i != j and info_le(keys[i], keys[j])
    ]
    out = [f for f in product(vals, repeat=len(keys)) if all(info_le(f[i], f[j]) for i, j in rel)]
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def two(t, n, flavor):
    """ma (monotone) or am (antitone) functions from consistent pairs into (L, <=)."""
    if isinstance(t, Omicron):
        return (F, T)
    keys = tuple(range(n)) if isinstance(t.arg, Iota) else pairs(t.arg, n)
    vals = two(t.result, n, flavor)
    rel = [] if isinstance(t.arg, Iota) else [
        (i, j) for i in range(len(keys)) for j in range(len(keys)) if i != j and pair_info_le(keys[i], keys[j])
    ]
    if flavor == "ma":
        ok = lambda f: all(truth_le(f[i], f[j]) for i, j in rel)  # noqa: E731
    else:
        ok = lambda f: all(truth_le(f[j], f[i]) for i, j in rel)  # noqa: E731
    return tuple(sorted(f for f in product(vals, repeat=len(keys)) if ok(f)))


@lru_cache(maxsize=None)
def pairs(t, n):
    return tuple(sorted((x, y) for x in two(t, n, "ma") for y in two(t, n, "am") if truth_le(x, y)))


def tau(t, v, n):
    if isinstance(t, Omicron):
        return {F: (F, F), U: (F, T), T: (T, T)}[v]
    if isinstance(t.arg, Iota):
        parts = [tau(t.result, x, n) for x in v]
    else:
        keys3 = three(t.arg, n)
        parts = [tau(t.result, v[keys3.index(tau_inv(t.arg, kp, n))], n) for kp in pairs(t.arg, n)]
    return tuple(p[0] for p in parts), tuple(p[1] for p in parts)


def tau_inv(t, p, n):
    if isinstance(t, Omicron):
        return {(F, F): F, (F, T): U, (T, T): T}[tuple(p)]
    f, g = p
    if isinstance(t.arg, Iota):
        return tuple(tau_inv(t.result, (a, b), n) for a, b in zip(f, g))
    keys_p = pairs(t.arg, n)
    out = []
    for k in three(t.arg, n):
        j = keys_p.index(tau(t.arg, k, n))
        out.append(tau_inv(t.result, (f[j], g[j]), n))
    return tuple(out)


def am_floor(t, x, n):
    above = [y for y in two(t, n, "am") if truth_le(x, y)]
    acc = above[0]
    for y in above[1:]:
        acc = meet(acc, y)
    return acc


def ma_ceiling(t, y, n):
    below = [x for x in two(t, n, "ma") if truth_le(x, y)]
    acc = below[0]
    for x in below[1:]:
        acc = join(acc, x)
    return acc
