"""Finite semantic domains of predicate types and their two orders.

Every predicate type has four exactly-enumerable domains over a finite
universe of individuals:

``three``
    Fitting-monotonic three-valued functions (the standard meaning).
``ma`` / ``am``
    Two-valued-result functions on consistent pairs, monotone-antimonotone
    and antimonotone-monotone respectively.
``pair``
    Consistent pairs ``(x, y)`` with ``x`` from ``ma``, ``y`` from ``am``
    and ``x <= y``.

Values are plain data: a truth value at ``o``, an individual index at
``i``, and at an arrow type a tuple indexed by the canonical position of
the argument in its own domain.  Three-valued tables are keyed by the
``three`` domain of the argument type; ``ma``/``am`` tables are keyed by
its ``pair`` domain (or by individuals when the argument is ``i``).

Elements of each domain are listed in lexicographic order of their
representation, which makes the numbering independent of how the
enumeration was carried out.  Order relations are stored as bitmasks:
``handle.up(order)[i]`` has bit ``j`` set when element ``i`` is below
element ``j``.
"""
from __future__ import annotations

import os
import threading
from enum import Enum, IntEnum
from functools import reduce
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import CapExceeded, NotChain
from .typeexpr import FunArrow, Iota, Omicron, PredArrow, TypeExpr

DEFAULT_CAP = 20_000


def default_cap() -> int:
    """Domain-size cap, overridable through ``HOLWFS_MAX_DOMAIN``."""
    raw = os.environ.get("HOLWFS_MAX_DOMAIN")
    return int(raw) if raw else DEFAULT_CAP


class Truth(IntEnum):
    FALSE = 0
    UNDEF = 1
    TRUE = 2

    def __str__(self):
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "Truth":
        return cls[text.upper()]


FALSE, UNDEF, TRUE = Truth.FALSE, Truth.UNDEF, Truth.TRUE
NEG = (TRUE, UNDEF, FALSE)  # NEG[v] is v^-1


class Flavor(str, Enum):
    THREE = "three"
    MA = "ma"
    AM = "am"
    PAIR = "pair"

    def __str__(self):
        return self.value


class ValuePair(NamedTuple):
    first: object
    second: object


SemValue = Union[Truth, int, tuple]


# --- raw pointwise operations -------------------------------------------------
# These work on any two values of the same type and flavor structure.

def leq_values(a, b) -> bool:
    if type(a) is tuple:
        return all(leq_values(x, y) for x, y in zip(a, b))
    return a <= b


def preceq_values(a, b) -> bool:
    """Information order on three-valued values."""
    if type(a) is tuple:
        return all(preceq_values(x, y) for x, y in zip(a, b))
    return a == b or a == UNDEF


def join_values(a, b):
    if type(a) is tuple:
        return tuple(join_values(x, y) for x, y in zip(a, b))
    return a if a >= b else b


def meet_values(a, b):
    if type(a) is tuple:
        return tuple(meet_values(x, y) for x, y in zip(a, b))
    return a if a <= b else b


def _info_join(a, b):
    if type(a) is tuple:
        return tuple(_info_join(x, y) for x, y in zip(a, b))
    if a == UNDEF:
        return b
    if b == UNDEF or a == b:
        return a
    raise NotChain(f"{a} and {b} have no upper bound in the information order")


def pair_leq(p, q) -> bool:
    return leq_values(p[0], q[0]) and leq_values(p[1], q[1])


def pair_preceq(p, q) -> bool:
    return leq_values(p[0], q[0]) and leq_values(q[1], p[1])


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _transpose(up: Sequence[int]) -> list[int]:
    down = [0] * len(up)
    for i, m in enumerate(up):
        bit = 1 << i
        for j in bits(m):
            down[j] |= bit
    return down


def _lift(src_codes, dst_codes, value_up) -> list[int]:
    """Pointwise lifting of a value relation to tables.

    ``value_up[u]`` is the mask of destination values related to source
    value ``u``; the result relates table ``a`` to table ``b`` when every
    entry is related.
    """
    if not src_codes:
        return []
    n_keys = len(src_codes[0])
    full = (1 << len(dst_codes)) - 1
    if n_keys == 0:
        return [full] * len(src_codes)
    per_key = []
    for k in range(n_keys):
        eq = {}
        for j, code in enumerate(dst_codes):
            eq[code[k]] = eq.get(code[k], 0) | (1 << j)
        cache = {}
        for code in src_codes:
            u = code[k]
            if u not in cache:
                m = 0
                for v in bits(value_up[u]):
                    m |= eq.get(v, 0)
                cache[u] = m
        per_key.append(cache)
    out = []
    for code in src_codes:
        m = full
        for k, u in enumerate(code):
            m &= per_key[k][u]
            if not m:
                break
        out.append(m)
    return out


class DomainHandle:
    """The enumerated domain of one (type, flavor) over a fixed universe."""

    def __init__(self, space, type_, flavor, elements, codes=None, keys=None, values=None, components=None):
        self.space = space
        self.type = type_
        self.flavor = flavor
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        self.codes = codes  # per element: value index at each key
        self.keys = keys  # handle of the argument (key) domain
        self.values = values  # handle of the result domain
        self.components = components  # (ma, am) index per element of a pair domain
        self._up = {}
        self._down = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __repr__(self):
        return f"<DomainHandle {self.type} {self.flavor} n={len(self)}>"

    def up(self, order: str = "leq") -> list[int]:
        with self._lock:
            if order not in self._up:
                self._up[order] = self._compute_up(order)
            return self._up[order]

    def down(self, order: str = "leq") -> list[int]:
        up = self.up(order)
        with self._lock:
            if order not in self._down:
                self._down[order] = _transpose(up)
            return self._down[order]

    def _compute_up(self, order):
        n = len(self.elements)
        t, fl = self.type, self.flavor
        if order not in ("leq", "preceq"):
            raise ValueError(f"unknown order {order!r}")
        if order == "preceq" and fl in (Flavor.MA, Flavor.AM):
            raise ValueError("the information order is not defined on ma/am values")
        if isinstance(t, Iota):
            return [1 << i for i in range(n)]
        if fl == Flavor.PAIR:
            ma, am = self.space.handle(t, Flavor.MA), self.space.handle(t, Flavor.AM)
            by_first, by_second = {}, {}
            for j, (ia, ib) in enumerate(self.components):
                by_first[ia] = by_first.get(ia, 0) | (1 << j)
                by_second[ib] = by_second.get(ib, 0) | (1 << j)
            first_up = ma.up("leq")
            second_rel = am.up("leq") if order == "leq" else am.down("leq")
            out = []
            for ia, ib in self.components:
                m1 = 0
                for a in bits(first_up[ia]):
                    m1 |= by_first.get(a, 0)
                m2 = 0
                for b in bits(second_rel[ib]):
                    m2 |= by_second.get(b, 0)
                out.append(m1 & m2)
            return out
        if isinstance(t, Omicron):
            if order == "preceq":  # undef below false and true
                rel = {FALSE: {FALSE}, UNDEF: {FALSE, UNDEF, TRUE}, TRUE: {TRUE}}
            else:
                rel = {v: {w for w in self.elements if w >= v} for v in self.elements}
            return [sum(1 << self.index[w] for w in rel[v]) for v in self.elements]
        return _lift(self.codes, self.codes, self.values.up(order))

    def dump(self) -> str:
        lines = [f"# domain {self.type} flavor={self.flavor} count={len(self)}"]
        for i, e in enumerate(self.elements):
            lines.append(f"{i}: {dump_value(e)}")
        return "\n".join(lines) + "\n"


def dump_value(v) -> str:
    if isinstance(v, ValuePair):
        return f"({dump_value(v.first)}, {dump_value(v.second)})"
    if type(v) is tuple:
        return "{" + ", ".join(f"{i}: {dump_value(x)}" for i, x in enumerate(v)) + "}"
    if isinstance(v, Truth):
        return str(v)
    return str(v)


class DomainSpace:
    """Memoized domains for every (type, flavor) over one universe."""

    def __init__(self, universe: Sequence[str], cap: int = DEFAULT_CAP):
        if not universe:
            raise ValueError("the universe of individuals must be nonempty")
        self.universe = tuple(universe)
        self.cap = cap
        self._handles: dict = {}
        self._cross: dict = {}
        self._lock = threading.RLock()

    # --- enumeration -------------------------------------------------------

    def handle(self, type_: TypeExpr, flavor: Flavor = Flavor.THREE) -> DomainHandle:
        flavor = Flavor(flavor)
        key = (type_, flavor)
        with self._lock:
            h = self._handles.get(key)
            if h is None:
                h = self._build(type_, flavor)
                self._handles[key] = h
            return h

    def enumerate(self, type_, flavor=Flavor.THREE) -> DomainHandle:
        return self.handle(type_, flavor)

    def key_handle(self, t: PredArrow, flavor: Flavor) -> DomainHandle:
        """Domain that indexes tables of arrow type ``t`` in ``flavor``."""
        if isinstance(t.arg, Iota) or flavor == Flavor.THREE:
            return self.handle(t.arg, Flavor.THREE)
        return self.handle(t.arg, Flavor.PAIR)

    def _check_cap(self, type_, flavor, estimate):
        if estimate > self.cap:
            raise CapExceeded(type_, flavor, estimate, self.cap)

    def _build(self, t, flavor) -> DomainHandle:
        if isinstance(t, FunArrow):
            raise ValueError(f"functional type {t} has no enumerable domain")
        if isinstance(t, Iota):
            if flavor == Flavor.PAIR:
                raise ValueError("pair domains exist only for predicate types")
            n = len(self.universe)
            self._check_cap(t, flavor, n)
            return DomainHandle(self, t, flavor, list(range(n)))
        if isinstance(t, Omicron):
            if flavor == Flavor.THREE:
                return DomainHandle(self, t, flavor, [FALSE, UNDEF, TRUE])
            if flavor == Flavor.PAIR:
                pairs = [ValuePair(FALSE, FALSE), ValuePair(FALSE, TRUE), ValuePair(TRUE, TRUE)]
                return DomainHandle(self, t, flavor, pairs, components=[(0, 0), (0, 1), (1, 1)])
            return DomainHandle(self, t, flavor, [FALSE, TRUE])
        if flavor == Flavor.PAIR:
            return self._build_pairs(t)
        keys = self.key_handle(t, flavor)
        vals = self.handle(t.result, Flavor.THREE if flavor == Flavor.THREE else flavor)
        estimate = len(vals) ** len(keys)
        if isinstance(t.arg, Iota):
            self._check_cap(t, flavor, estimate)
            codes = _product_codes(len(keys), len(vals))
        else:
            if flavor == Flavor.THREE:
                key_order, val_order, anti = "preceq", "preceq", False
            else:
                key_order, val_order, anti = "preceq", "leq", flavor == Flavor.AM
            codes = self._monotone_codes(t, flavor, keys, key_order, vals, val_order, anti, estimate)
        codes.sort()
        elements = [tuple(vals.elements[c] for c in code) for code in codes]
        return DomainHandle(self, t, flavor, elements, codes=codes, keys=keys, values=vals)

    def _monotone_codes(self, t, flavor, keys, key_order, vals, val_order, anti, estimate):
        n_keys = len(keys)
        below = keys.down(key_order)
        linear = sorted(range(n_keys), key=lambda j: (bin(below[j]).count("1"), j))
        preds = [[i for i in bits(below[j]) if i != j] for j in linear]
        rel = vals.down(val_order) if anti else vals.up(val_order)
        full = (1 << len(vals)) - 1
        assign = [0] * n_keys
        out = []
        cap = self.cap

        def go(pos):
            if pos == n_keys:
                out.append(tuple(assign))
                if len(out) > cap:
                    raise CapExceeded(t, flavor, estimate, cap)
                return
            allowed = full
            for i in preds[pos]:
                allowed &= rel[assign[i]]
            j = linear[pos]
            for v in bits(allowed):
                assign[j] = v
                go(pos + 1)

        go(0)
        return out

    def _build_pairs(self, t) -> DomainHandle:
        ma, am = self.handle(t, Flavor.MA), self.handle(t, Flavor.AM)
        cross = self.cross_up(t)
        comps = [(i, j) for i in range(len(ma)) for j in bits(cross[i])]
        self._check_cap(t, Flavor.PAIR, len(comps))
        comps.sort()
        pairs = [ValuePair(ma.elements[i], am.elements[j]) for i, j in comps]
        return DomainHandle(self, t, Flavor.PAIR, pairs, components=comps)

    def cross_up(self, t) -> list[int]:
        """``cross_up(t)[i]``: mask of ``am`` elements above ``ma`` element ``i``."""
        with self._lock:
            if t in self._cross:
                return self._cross[t]
            ma, am = self.handle(t, Flavor.MA), self.handle(t, Flavor.AM)
            if isinstance(t, Omicron):
                out = [sum(1 << j for j, y in enumerate(am.elements) if x <= y) for x in ma.elements]
            else:
                out = _lift(ma.codes, am.codes, self.cross_up(t.result))
            self._cross[t] = out
            return out

    # --- order-theoretic operations ---------------------------------------

    def leaf_count(self, t, flavor=Flavor.MA) -> int:
        """Number of truth-valued cells in a table; bounds chain length."""
        if isinstance(t, Omicron):
            return 1
        return len(self.key_handle(t, flavor)) * self.leaf_count(t.result, flavor)

    def _const(self, t, flavor, leaf):
        if isinstance(t, Omicron):
            return leaf
        inner = self._const(t.result, flavor, leaf)
        return (inner,) * len(self.key_handle(t, flavor))

    def bottom(self, t, flavor=Flavor.THREE, order="leq"):
        flavor = Flavor(flavor)
        if flavor == Flavor.PAIR:
            lo = self._const(t, Flavor.MA, FALSE)
            hi = self._const(t, Flavor.AM, TRUE) if order == "preceq" else self._const(t, Flavor.AM, FALSE)
            return ValuePair(lo, hi)
        if order == "preceq":
            if flavor != Flavor.THREE:
                raise ValueError("the information order is defined on three-valued and pair domains only")
            return self._const(t, flavor, UNDEF)
        return self._const(t, flavor, FALSE)

    def top(self, t, flavor=Flavor.THREE, order="leq"):
        flavor = Flavor(flavor)
        if order != "leq":
            raise ValueError("no top element in the information order")
        if flavor == Flavor.PAIR:
            return ValuePair(self._const(t, Flavor.MA, TRUE), self._const(t, Flavor.AM, TRUE))
        return self._const(t, flavor, TRUE)

    def leq(self, a, b, t, flavor=Flavor.THREE) -> bool:
        flavor = Flavor(flavor)
        self._check_shape(a, t, flavor)
        self._check_shape(b, t, flavor)
        if flavor == Flavor.PAIR:
            return pair_leq(a, b)
        return leq_values(a, b)

    def preceq(self, a, b, t, flavor=Flavor.THREE) -> bool:
        flavor = Flavor(flavor)
        self._check_shape(a, t, flavor)
        self._check_shape(b, t, flavor)
        if flavor == Flavor.PAIR:
            return pair_preceq(a, b)
        if flavor != Flavor.THREE:
            raise ValueError("the information order is defined on three-valued and pair domains only")
        return preceq_values(a, b)

    def lub(self, values: Iterable, t, order="leq", flavor=Flavor.THREE):
        flavor = Flavor(flavor)
        values = list(values)
        if not values:
            raise ValueError("lub of an empty set: use bottom()")
        for v in values:
            self._check_shape(v, t, flavor)
        if order == "leq":
            if flavor == Flavor.PAIR:
                return ValuePair(
                    reduce(join_values, [p[0] for p in values]), reduce(join_values, [p[1] for p in values])
                )
            return reduce(join_values, values)
        self._require_chain(values, flavor)
        if flavor == Flavor.PAIR:
            return ValuePair(
                reduce(join_values, [p[0] for p in values]), reduce(meet_values, [p[1] for p in values])
            )
        return reduce(_info_join, values)

    def glb(self, values: Iterable, t, order="leq", flavor=Flavor.THREE):
        flavor = Flavor(flavor)
        values = list(values)
        if not values:
            raise ValueError("glb of an empty set: use top()")
        if order != "leq":
            raise ValueError("only truth-order glbs are provided")
        for v in values:
            self._check_shape(v, t, flavor)
        if flavor == Flavor.PAIR:
            return ValuePair(
                reduce(meet_values, [p[0] for p in values]), reduce(meet_values, [p[1] for p in values])
            )
        return reduce(meet_values, values)

    def _require_chain(self, values, flavor):
        cmp = pair_preceq if flavor == Flavor.PAIR else preceq_values
        if flavor in (Flavor.MA, Flavor.AM):
            raise ValueError("the information order is not defined on ma/am values")
        for i, a in enumerate(values):
            for b in values[i + 1:]:
                if not (cmp(a, b) or cmp(b, a)):
                    raise NotChain("information-order lub requested for a set that is not a chain")

    def _check_shape(self, v, t, flavor):
        if not self._shape_ok(v, t, flavor):
            raise TypeError(f"value {dump_value(v)} does not have the shape of type {t} ({flavor})")

    def _shape_ok(self, v, t, flavor) -> bool:
        if flavor == Flavor.PAIR:
            return (
                isinstance(v, tuple)
                and len(v) == 2
                and self._shape_ok(v[0], t, Flavor.MA)
                and self._shape_ok(v[1], t, Flavor.AM)
            )
        if isinstance(t, Omicron):
            return isinstance(v, int) and not isinstance(v, bool) and 0 <= v <= 2 and (
                flavor == Flavor.THREE or v != UNDEF
            )
        if isinstance(t, Iota):
            return isinstance(v, int) and 0 <= v < len(self.universe)
        if isinstance(t, PredArrow):
            if type(v) is not tuple or len(v) != len(self.key_handle(t, flavor)):
                return False
            return all(self._shape_ok(x, t.result, flavor) for x in v)
        return False

    def validate(self, v, t, flavor=Flavor.THREE) -> bool:
        """True iff ``v`` is a member of the domain (shape and monotonicity)."""
        flavor = Flavor(flavor)
        try:
            if not self._shape_ok(v, t, flavor):
                return False
        except (CapExceeded, ValueError):
            return False
        return self._monotone(v, t, flavor)

    def _monotone(self, v, t, flavor) -> bool:
        if flavor == Flavor.PAIR:
            return (
                self._monotone(v[0], t, Flavor.MA)
                and self._monotone(v[1], t, Flavor.AM)
                and leq_values(v[0], v[1])
            )
        if not isinstance(t, PredArrow):
            return True
        if not all(self._monotone(x, t.result, flavor) for x in v):
            return False
        if isinstance(t.arg, Iota):
            return True
        up = self.key_handle(t, flavor).up("preceq")
        for i, m in enumerate(up):
            for j in bits(m):
                if flavor == Flavor.THREE:
                    ok = preceq_values(v[i], v[j])
                elif flavor == Flavor.MA:
                    ok = leq_values(v[i], v[j])
                else:
                    ok = leq_values(v[j], v[i])
                if not ok:
                    return False
        return True

    # --- floors and ceilings between ma and am ------------------------------

    def am_floor(self, t, x):
        """Least ``am`` element of type ``t`` that is ``>=`` the ``ma`` element ``x``.

        Built by closing upwards in the information order of the keys:
        ``g(k) = floor(lub{x(k') : k' above k})``.
        """
        if isinstance(t, Omicron):
            return x
        if isinstance(t.arg, Iota):
            return tuple(self.am_floor(t.result, xi) for xi in x)
        up = self.key_handle(t, Flavor.MA).up("preceq")
        out = []
        for m in up:
            acc = reduce(join_values, [x[j] for j in bits(m)])
            out.append(self.am_floor(t.result, acc))
        return tuple(out)

    def ma_ceiling(self, t, y):
        """Greatest ``ma`` element of type ``t`` that is ``<=`` the ``am`` element ``y``."""
        if isinstance(t, Omicron):
            return y
        if isinstance(t.arg, Iota):
            return tuple(self.ma_ceiling(t.result, yi) for yi in y)
        up = self.key_handle(t, Flavor.AM).up("preceq")
        out = []
        for m in up:
            acc = reduce(meet_values, [y[j] for j in bits(m)])
            out.append(self.ma_ceiling(t.result, acc))
        return tuple(out)

    def am_floor_reference(self, t, x):
        """Definitional floor: glb of every enumerated ``am`` element above ``x``."""
        above = [y for y in self.handle(t, Flavor.AM) if leq_values(x, y)]
        return reduce(meet_values, above)

    def ma_ceiling_reference(self, t, y):
        below = [x for x in self.handle(t, Flavor.MA) if leq_values(x, y)]
        return reduce(join_values, below)


def _product_codes(n_keys, n_vals) -> list[tuple]:
    from itertools import product

    return [tuple(c) for c in product(range(n_vals), repeat=n_keys)]
