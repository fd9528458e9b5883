"""The bijection tau between three-valued values and consistent (ma, am) pairs."""
from __future__ import annotations

import threading

from .domains import FALSE, TRUE, UNDEF, DomainSpace, Flavor, ValuePair, dump_value
from .semantics import Interp3, InterpPair
from .typeexpr import Iota, Omicron, PredArrow

_TAU_O = {FALSE: ValuePair(FALSE, FALSE), UNDEF: ValuePair(FALSE, TRUE), TRUE: ValuePair(TRUE, TRUE)}
_TAU_INV_O = {(FALSE, FALSE): FALSE, (FALSE, TRUE): UNDEF, (TRUE, TRUE): TRUE}


class TauContext:
    """tau / tau^-1 over one domain space, memoized per type."""

    def __init__(self, space: DomainSpace):
        self.space = space
        self._to_pair: dict = {}  # arg type -> pair-domain index of each three-valued key
        self._to_three: dict = {}  # arg type -> three-valued index of each pair-domain key
        self._tau_memo: dict = {}
        self._inv_memo: dict = {}
        self._lock = threading.RLock()

    def _key_maps(self, rho):
        with self._lock:
            if rho not in self._to_pair:
                three = self.space.handle(rho, Flavor.THREE)
                pairs = self.space.handle(rho, Flavor.PAIR)
                fwd = [pairs.index[self._tau(rho, v)] for v in three.elements]
                if sorted(fwd) != list(range(len(pairs))):
                    raise AssertionError(f"tau is not a bijection at type {rho}")
                inv = [0] * len(fwd)
                for i, j in enumerate(fwd):
                    inv[j] = i
                self._to_pair[rho] = fwd
                self._to_three[rho] = inv
            return self._to_pair[rho], self._to_three[rho]

    # --- value level -------------------------------------------------------

    def tau(self, t, v, check: bool = True) -> ValuePair:
        if check and not self.space.validate(v, t, Flavor.THREE):
            raise ValueError(f"{dump_value(v)} is not a three-valued element of type {t}")
        return self._tau(t, v)

    def tau_inv(self, t, p, check: bool = True):
        if check and not self.space.validate(ValuePair(*p), t, Flavor.PAIR):
            raise ValueError(f"{dump_value(ValuePair(*p))} is not a consistent pair of type {t}")
        return self._tau_inv(t, p)

    def _tau(self, t, v) -> ValuePair:
        if isinstance(t, Omicron):
            return _TAU_O[v]
        key = (t, v)
        hit = self._tau_memo.get(key)
        if hit is not None:
            return hit
        if not isinstance(t, PredArrow):
            raise TypeError(f"tau is defined on predicate types only, not {t}")
        if isinstance(t.arg, Iota):
            parts = [self._tau(t.result, x) for x in v]
        else:
            _, to_three = self._key_maps(t.arg)
            # both components in one pass over the pair-domain keys
            parts = [self._tau(t.result, v[i]) for i in to_three]
        out = ValuePair(tuple(p.first for p in parts), tuple(p.second for p in parts))
        self._tau_memo[key] = out
        return out

    def _tau_inv(self, t, p):
        if isinstance(t, Omicron):
            try:
                return _TAU_INV_O[(p[0], p[1])]
            except KeyError:
                raise ValueError(f"({p[0]}, {p[1]}) is not a consistent pair of truth values") from None
        key = (t, p[0], p[1])
        hit = self._inv_memo.get(key)
        if hit is not None:
            return hit
        f, g = p
        if isinstance(t.arg, Iota):
            out = tuple(self._tau_inv(t.result, (a, b)) for a, b in zip(f, g))
        else:
            to_pair, _ = self._key_maps(t.arg)
            out = tuple(self._tau_inv(t.result, (f[j], g[j])) for j in to_pair)
        self._inv_memo[key] = out
        return out

    # --- interpretation level ----------------------------------------------

    def tau_interp(self, interp: Interp3) -> InterpPair:
        pairs = [self._tau(t, v) for t, v in zip(interp.types, interp.values)]
        return InterpPair(
            interp.universe,
            interp.predicates,
            interp.types,
            tuple(p.first for p in pairs),
            tuple(p.second for p in pairs),
        )

    def tau_interp_inv(self, pair: InterpPair) -> Interp3:
        values = tuple(self._tau_inv(t, (a, b)) for t, a, b in zip(pair.types, pair.first, pair.second))
        return Interp3(pair.universe, pair.predicates, pair.types, values)
