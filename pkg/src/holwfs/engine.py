"""Well-founded, Kripke-Kleene and three-valued stable models of programs."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Optional, Union

from . import aft
from .bijection import TauContext
from .domains import DomainSpace, Flavor, default_cap, join_values, leq_values, meet_values
from .errors import CapExceeded
from .semantics import Evaluator, Interp3, InterpPair, herbrand_universe, table_json
from .syntax import Expr, parse_query
from .typesys import TypedProgram, check_query


class InterpretationLattice(aft.LatticePairSpace):
    """Pairs of ma/am interpretations, ordered predicate by predicate."""

    def __init__(self, space: DomainSpace, types: tuple):
        self.space = space
        self.types = types
        self.cap = space.cap
        self._bottom = tuple(space.bottom(t, Flavor.MA) for t in types)
        self._top = tuple(space.top(t, Flavor.MA) for t in types)
        self._height = sum(space.leaf_count(t, Flavor.MA) for t in types)

    def leq(self, x, y):
        return all(leq_values(a, b) for a, b in zip(x, y))

    def bottom(self):
        return self._bottom

    def top(self):
        return self._top

    def lub1(self, xs):
        xs = list(xs)
        if not xs:
            return self._bottom
        return tuple(_fold(join_values, col) for col in zip(*xs))

    def glb2(self, ys):
        ys = list(ys)
        if not ys:
            return self._top
        return tuple(_fold(meet_values, col) for col in zip(*ys))

    def _product(self, flavor):
        handles = [self.space.handle(t, flavor) for t in self.types]
        size = prod(len(h) for h in handles)
        if size > self.cap:
            raise CapExceeded("interpretations", flavor, size, self.cap)
        return [tuple(v) for v in product(*(h.elements for h in handles))]

    def elements1(self):
        return self._product(Flavor.MA)

    def elements2(self):
        return self._product(Flavor.AM)

    def height(self):
        return self._height

    def am_floor(self, a):
        return tuple(self.space.am_floor(t, x) for t, x in zip(self.types, a))

    def ma_ceiling(self, b):
        return tuple(self.space.ma_ceiling(t, y) for t, y in zip(self.types, b))

    def pairs(self):
        handles = [self.space.handle(t, Flavor.PAIR) for t in self.types]
        size = prod(len(h) for h in handles)
        if size > self.cap:
            raise CapExceeded("interpretation pairs", Flavor.PAIR, size, self.cap)
        out = []
        for combo in product(*(h.elements for h in handles)):
            out.append((tuple(p.first for p in combo), tuple(p.second for p in combo)))
        return out


def _fold(op, values):
    it = iter(values)
    acc = next(it)
    for v in it:
        acc = op(acc, v)
    return acc


@dataclass
class WfResult:
    model: Interp3
    pair: InterpPair
    trace: list
    stats: dict = field(default_factory=dict)


class Engine:
    """All model computations for one checked program."""

    def __init__(self, program: TypedProgram, max_domain: Optional[int] = None):
        self.program = program
        self.universe = herbrand_universe(program)
        self.space = DomainSpace(self.universe.constants, max_domain if max_domain is not None else default_cap())
        self.tau = TauContext(self.space)
        self.evaluator = Evaluator(program, self.universe, self.space)
        self.predicates = self.evaluator.predicates
        self.types = self.evaluator.types
        self.lattice = InterpretationLattice(self.space, self.types)

    # --- the approximator ----------------------------------------------------

    def three_of(self, a, b) -> tuple:
        return tuple(self.tau.tau_inv(t, (x, y), check=False) for t, x, y in zip(self.types, a, b))

    def pair_of(self, values) -> tuple:
        pairs = [self.tau.tau(t, v, check=False) for t, v in zip(self.types, values)]
        return tuple(p.first for p in pairs), tuple(p.second for p in pairs)

    def tp(self, a, b) -> tuple:
        """``T_P(I, J) = tau(Psi_P(tau^-1(I, J)))``."""
        return self.pair_of(self.evaluator.psi_values(self.three_of(a, b)))

    def interp(self, values) -> Interp3:
        return self.evaluator.interpretation(values)

    def interp_pair(self, pair) -> InterpPair:
        return InterpPair(self.universe, self.predicates, self.types, tuple(pair[0]), tuple(pair[1]))

    def model_of(self, pair) -> Interp3:
        return self.interp(self.three_of(*pair))

    # --- models ---------------------------------------------------------------

    def well_founded_model(self, trace_limit: Optional[int] = 1000, check: bool = True) -> WfResult:
        run = aft.wf_fixpoint(self.lattice, self.tp, trace_limit=trace_limit, check=check)
        stats = {
            "revisions": run.revisions,
            "lower_steps": run.lower_steps,
            "upper_steps": run.upper_steps,
            "leaf_cells": self.lattice.height(),
            "domains": self.domain_sizes(),
        }
        return WfResult(self.model_of(run.pair), self.interp_pair(run.pair), run.trace, stats)

    def kripke_kleene_model(self) -> Interp3:
        return self.model_of(aft.kk_fixpoint(self.lattice, self.tp))

    def kk_pair(self) -> tuple:
        return aft.kk_fixpoint(self.lattice, self.tp)

    def three_valued_stable_models(self) -> list:
        return [self.model_of(p) for p in aft.stable_fixpoints(self.lattice, self.tp)]

    def domain_sizes(self) -> dict:
        with self.space._lock:
            handles = list(self.space._handles.values())
        return {f"{h.type}/{h.flavor}": len(h) for h in sorted(handles, key=lambda h: (str(h.type), h.flavor.value))}

    # --- queries and checks ---------------------------------------------------

    def query(self, wf: Union[WfResult, Interp3], e: Union[Expr, str]):
        if isinstance(e, str):
            e = parse_query(e)
        annotated = check_query(self.program, e)
        model = wf.model if isinstance(wf, WfResult) else wf
        return self.evaluator.eval(annotated, model)

    def is_model(self, interp: Interp3) -> bool:
        return self.evaluator.is_model(interp)

    def interpretations(self) -> list:
        """Every three-valued interpretation, in canonical order (capped)."""
        handles = [self.space.handle(t, Flavor.THREE) for t in self.types]
        size = prod(len(h) for h in handles)
        if size > self.space.cap:
            raise CapExceeded("interpretations", Flavor.THREE, size, self.space.cap)
        return [self.interp(v) for v in product(*(h.elements for h in handles))]

    def models(self) -> list:
        return [m for m in self.interpretations() if self.is_model(m)]

    def verify_minimal(self, wf: Union[WfResult, Interp3]) -> bool:
        target = wf.model if isinstance(wf, WfResult) else wf
        for other in self.interpretations():
            if other.values == target.values:
                continue
            if all(leq_values(x, y) for x, y in zip(other.values, target.values)) and self.is_model(other):
                return False
        return True

    def trace_json(self, wf: WfResult) -> list:
        out = []
        for step in wf.trace:
            before = self.three_of(*step.before)
            after = self.three_of(*step.after)
            changed = {}
            for k, p in enumerate(self.predicates):
                if before[k] != after[k]:
                    changed[p] = table_json(after[k], self.types[k], self.universe, self.space)
            out.append({
                "revision": step.index,
                "lower_steps": step.lower_steps,
                "upper_steps": step.upper_steps,
                "changed": changed,
            })
        return out


# function-style entry points

def build_tp(program: TypedProgram, max_domain: Optional[int] = None):
    return Engine(program, max_domain).tp


def well_founded_model(program: TypedProgram, max_domain: Optional[int] = None, trace_limit=1000) -> WfResult:
    return Engine(program, max_domain).well_founded_model(trace_limit=trace_limit)


def query(program: TypedProgram, wf: WfResult, e):
    return Engine(program).query(wf, e)


def kripke_kleene_model(program: TypedProgram, max_domain: Optional[int] = None) -> Interp3:
    return Engine(program, max_domain).kripke_kleene_model()


def three_valued_stable_models(program: TypedProgram, max_domain: Optional[int] = None) -> list:
    return Engine(program, max_domain).three_valued_stable_models()


def verify_minimal(program: TypedProgram, wf, max_domain: Optional[int] = None) -> bool:
    return Engine(program, max_domain).verify_minimal(wf)
