"""Consistent approximation fixpoint theory over a pair of interlattices.

The kernel is generic: a :class:`LatticePairSpace` supplies the order,
bounds, lubs/glbs and the floor/ceiling maps between the two lattices,
and an approximator is any callable ``A(a, b) -> (a', b')`` on
consistent pairs.  Pairs are plain 2-tuples.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import CapExceeded, ContractViolation, NotReliable

Approximator = Callable[[object, object], tuple]


class LatticePairSpace:
    """Interface for ``L1`` (lower, ma side) and ``L2`` (upper, am side) in a lattice ``L``.

    Subclasses implement the abstract hooks.  ``am_floor``/``ma_ceiling``
    default to the definitional filtering over the enumerated lattices.
    """

    cap: int = 20_000

    def leq(self, x, y) -> bool:
        raise NotImplementedError

    def bottom(self):
        raise NotImplementedError

    def top(self):
        raise NotImplementedError

    def lub1(self, xs: Iterable):
        raise NotImplementedError

    def glb2(self, ys: Iterable):
        raise NotImplementedError

    def elements1(self) -> list:
        raise NotImplementedError

    def elements2(self) -> list:
        raise NotImplementedError

    def height(self) -> int:
        """Upper bound on the length of strictly ascending chains in ``L1`` or ``L2``."""
        return max(len(self.elements1()), len(self.elements2()))

    def am_floor(self, a):
        return am_floor_reference(self, a)

    def ma_ceiling(self, b):
        return ma_ceiling_reference(self, b)

    # derived
    def preceq(self, p, q) -> bool:
        return self.leq(p[0], q[0]) and self.leq(q[1], p[1])

    def pair_leq(self, p, q) -> bool:
        return self.leq(p[0], q[0]) and self.leq(p[1], q[1])

    def consistent(self, p) -> bool:
        return self.leq(p[0], p[1])

    def pairs(self) -> list:
        l1, l2 = self.elements1(), self.elements2()
        if len(l1) * len(l2) > self.cap:
            count = sum(1 for a in l1 for b in l2 if self.leq(a, b))
            if count > self.cap:
                raise CapExceeded("L1 x L2", "pair", count, self.cap)
        return [(a, b) for a in l1 for b in l2 if self.leq(a, b)]


def am_floor_reference(space: LatticePairSpace, a):
    above = [y for y in space.elements2() if space.leq(a, y)]
    return space.glb2(above)


def ma_ceiling_reference(space: LatticePairSpace, b):
    below = [x for x in space.elements1() if space.leq(x, b)]
    return space.lub1(below)


def am_floor(space: LatticePairSpace, a):
    return space.am_floor(a)


def ma_ceiling(space: LatticePairSpace, b):
    return space.ma_ceiling(b)


def is_reliable(space: LatticePairSpace, A: Approximator, pair) -> bool:
    return space.preceq(pair, A(*pair))


def is_prudent(space: LatticePairSpace, A: Approximator, pair) -> bool:
    return is_reliable(space, A, pair) and space.leq(pair[0], lfp_lower(space, A, pair[1]))


def _kleene(space, step, start, what):
    x = start
    budget = space.height() + 1
    for n in range(budget + 1):
        nxt = step(x)
        if nxt == x:
            return x, n
        if not space.leq(x, nxt):
            raise ContractViolation(f"{what}: iteration is not ascending")
        x = nxt
    raise ContractViolation(f"{what}: no fixpoint within {budget} steps, the operator is not monotone")


def lfp_lower(space: LatticePairSpace, A: Approximator, b, with_steps: bool = False):
    """``b`` down-arrow: least fixpoint of ``x -> A(x, b)[0]`` iterated from bottom."""
    x, n = _kleene(space, lambda x: A(x, b)[0], space.bottom(), "lower slice")
    return (x, n) if with_steps else x


def lfp_upper(space: LatticePairSpace, A: Approximator, a, with_steps: bool = False):
    """``a`` up-arrow: least fixpoint of ``y -> A(a, y)[1]`` iterated from the floor of ``a``."""
    y, n = _kleene(space, lambda y: A(a, y)[1], space.am_floor(a), "upper slice")
    return (y, n) if with_steps else y


def stable_revision(space: LatticePairSpace, A: Approximator, pair, check: bool = True):
    a, b = pair
    if check and not is_reliable(space, A, pair):
        raise NotReliable("stable revision applied to a pair that is not reliable")
    return lfp_lower(space, A, b), lfp_upper(space, A, a)


@dataclass
class RevisionStep:
    index: int
    before: tuple
    after: tuple
    lower_steps: int
    upper_steps: int


@dataclass
class WfRun:
    pair: tuple
    revisions: int
    trace: list
    lower_steps: int = 0
    upper_steps: int = 0
    checks: dict = field(default_factory=dict)


def _check_revision(space, A, pair, new):
    a, b = pair
    b_down, a_up = new
    failed = []
    if not space.preceq(pair, A(a, b)):
        failed.append("reliable")
    if not space.leq(a, b_down):
        failed.append("prudent")
    if not space.leq(b_down, b):
        failed.append("lower bound below upper")
    if not (space.leq(a, a_up) and space.leq(a_up, b)):
        failed.append("upper slice inside [a, b]")
    if not space.leq(b_down, a_up):
        failed.append("consistent")
    if not space.preceq(pair, new):
        failed.append("ascending")
    if failed:
        raise ContractViolation("stable revision broke: " + ", ".join(failed))


def wf_fixpoint(space: LatticePairSpace, A: Approximator, trace_limit: Optional[int] = 1000,
                check: bool = True) -> WfRun:
    """Iterate stable revision from ``(bottom, top)`` until it is stationary."""
    pair = (space.bottom(), space.top())
    trace = deque(maxlen=trace_limit) if trace_limit is not None else []
    total_lower = total_upper = 0
    n = 0
    checked = 0
    while True:
        b_down, nl = lfp_lower(space, A, pair[1], with_steps=True)
        a_up, nu = lfp_upper(space, A, pair[0], with_steps=True)
        new = (b_down, a_up)
        if check:
            _check_revision(space, A, pair, new)
            checked += 1
        total_lower += nl
        total_upper += nu
        if new == pair:
            break
        n += 1
        trace.append(RevisionStep(n, pair, new, nl, nu))
        pair = new
        if n > 2 * space.height() + 2:
            raise ContractViolation("well-founded iteration does not stabilize")
    return WfRun(pair, n, list(trace), total_lower, total_upper, {"revisions_checked": checked})


def chain_lub(space: LatticePairSpace, chain: Iterable[tuple]):
    """Lub of a precision chain of pairs: lub of lower bounds, glb of upper bounds."""
    chain = list(chain)
    for i, p in enumerate(chain):
        for q in chain[i + 1:]:
            if not (space.preceq(p, q) or space.preceq(q, p)):
                raise ValueError("pairs do not form a chain")
    return space.lub1(p[0] for p in chain), space.glb2(p[1] for p in chain)


def kk_fixpoint(space: LatticePairSpace, A: Approximator):
    """Precision-least fixpoint of ``A`` by iteration from ``(bottom, top)``."""
    pair = (space.bottom(), space.top())
    budget = 2 * space.height() + 2
    for _ in range(budget + 1):
        nxt = A(*pair)
        if nxt == pair:
            return pair
        if not space.preceq(pair, nxt):
            raise ContractViolation("approximator is not precision-monotone")
        pair = nxt
    raise ContractViolation(f"no fixpoint within {budget} steps")


def is_prefixpoint(space: LatticePairSpace, A: Approximator, pair) -> bool:
    return space.pair_leq(A(*pair), pair)


def is_minimal_prefixpoint(space: LatticePairSpace, A: Approximator, pair, candidates=None) -> bool:
    if not is_prefixpoint(space, A, pair):
        return False
    for q in candidates if candidates is not None else space.pairs():
        if q != pair and space.pair_leq(q, pair) and is_prefixpoint(space, A, q):
            return False
    return True


def stable_fixpoints(space: LatticePairSpace, A: Approximator) -> list:
    """All reliable pairs that stable revision leaves unchanged (exhaustive)."""
    candidates = space.pairs()
    out = []
    for pair in candidates:
        if not is_reliable(space, A, pair):
            continue
        if stable_revision(space, A, pair, check=False) == pair:
            out.append(pair)
    for pair in out:
        if A(*pair) != pair:
            raise ContractViolation("stable fixpoint is not a fixpoint of the approximator")
        if not is_minimal_prefixpoint(space, A, pair, candidates):
            raise ContractViolation("stable fixpoint is not a minimal pre-fixpoint")
    return out


class FiniteLatticePairSpace(LatticePairSpace):
    """Explicit finite instance: elements of ``L`` with an order; ``L1``/``L2`` as subsets."""

    def __init__(self, elements, leq, l1=None, l2=None, height=None, cap=20_000):
        self.elements = list(elements)
        self._leq = leq
        self.l1 = list(l1) if l1 is not None else self.elements
        self.l2 = list(l2) if l2 is not None else self.elements
        self._height = height
        self.cap = cap

    def leq(self, x, y):
        return self._leq(x, y)

    def _least(self, xs):
        for x in xs:
            if all(self.leq(x, y) for y in xs):
                return x
        raise ValueError("no least element")

    def _greatest(self, xs):
        for x in xs:
            if all(self.leq(y, x) for y in xs):
                return x
        raise ValueError("no greatest element")

    def bottom(self):
        return self._least(self.elements)

    def top(self):
        return self._greatest(self.elements)

    def lub1(self, xs):
        xs = list(xs)
        return self._least([u for u in self.l1 if all(self.leq(x, u) for x in xs)])

    def glb2(self, ys):
        ys = list(ys)
        return self._greatest([l for l in self.l2 if all(self.leq(l, y) for y in ys)])

    def elements1(self):
        return self.l1

    def elements2(self):
        return self.l2

    def height(self):
        return self._height if self._height is not None else len(self.elements)
