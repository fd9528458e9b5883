"""Herbrand universes, interpretations, expression valuation, and Psi_P.

Expressions are compiled once into closures ``fn(values, env)`` where
``values`` is the tuple of predicate denotations (ordered as the
interpretation's predicates) and ``env`` holds the values of enclosing
binders positionally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .domains import FALSE, NEG, TRUE, DomainSpace, Truth, Flavor, join_values, meet_values, leq_values, dump_value
from .errors import FunctionSymbolsPresent
from .syntax import And, App, BoolLit, Const, Eq, Exists, Expr, FunApp, Lambda, Not, Or, Var
from .typeexpr import Iota, Omicron, PredArrow, TypeExpr
from .typesys import TypedProgram, synthesize

DEFAULT_INDIVIDUAL = "c0"


@dataclass(frozen=True)
class HerbrandUniverse:
    constants: tuple

    def __post_init__(self):
        if not self.constants:
            raise ValueError("a Herbrand universe is never empty")

    def __len__(self):
        return len(self.constants)

    def __iter__(self):
        return iter(self.constants)

    def index(self, name: str) -> int:
        return self.constants.index(name)

    def name(self, i: int) -> str:
        return self.constants[i]


def herbrand_universe(program: TypedProgram) -> HerbrandUniverse:
    if program.function_symbols:
        raise FunctionSymbolsPresent(program.function_symbols)
    return HerbrandUniverse(tuple(program.individual_constants) or (DEFAULT_INDIVIDUAL,))


@dataclass(frozen=True)
class Interp3:
    """Three-valued Herbrand interpretation of the program's predicates."""

    universe: HerbrandUniverse
    predicates: tuple
    types: tuple
    values: tuple

    def __getitem__(self, name):
        return self.values[self.predicates.index(name)]

    def type_of(self, name) -> TypeExpr:
        return self.types[self.predicates.index(name)]

    def as_dict(self) -> dict:
        return dict(zip(self.predicates, self.values))

    def replace(self, values) -> "Interp3":
        return Interp3(self.universe, self.predicates, self.types, tuple(values))


@dataclass(frozen=True)
class InterpPair:
    """Image of an interpretation under tau: ma part and am part per predicate."""

    universe: HerbrandUniverse
    predicates: tuple
    types: tuple
    first: tuple
    second: tuple

    def __getitem__(self, name):
        k = self.predicates.index(name)
        return self.first[k], self.second[k]


@dataclass(frozen=True)
class State:
    """Values (and types) of argument variables."""

    types: Mapping = field(default_factory=dict)
    values: Mapping = field(default_factory=dict)

    def bind(self, name, type_, value) -> "State":
        return State({**self.types, name: type_}, {**self.values, name: value})


Compiled = Callable[[tuple, tuple], object]


class Evaluator:
    """Compiles and evaluates typed expressions for one program over one universe."""

    def __init__(self, program: TypedProgram, universe: HerbrandUniverse, space: DomainSpace):
        self.program = program
        self.universe = universe
        self.space = space
        self.predicates = tuple(program.predicates)
        self.types = tuple(program.predicate_types[p] for p in self.predicates)
        self._pos = {p: k for k, p in enumerate(self.predicates)}
        self._bodies = None

    # --- compilation -------------------------------------------------------

    def compile(self, e: Expr, scope: tuple = ()) -> Compiled:
        """``scope`` lists ``(name, type)`` of enclosing binders, innermost last."""
        return self._compile(e, scope)

    def _type(self, e, scope):
        return synthesize(e, dict(scope), self.program)

    def _domain(self, t):
        if isinstance(t, Iota):
            return tuple(range(len(self.universe)))
        return tuple(self.space.handle(t, Flavor.THREE).elements)

    def _compile(self, e, scope):
        if isinstance(e, Var):
            for pos in range(len(scope) - 1, -1, -1):
                if scope[pos][0] == e.name:
                    return lambda I, env, pos=pos: env[pos]
            raise KeyError(f"unbound variable {e.name}")
        if isinstance(e, Const):
            if e.name in self._pos:
                k = self._pos[e.name]
                return lambda I, env: I[k]
            c = self.universe.index(e.name)
            return lambda I, env: c
        if isinstance(e, BoolLit):
            v = TRUE if e.value else FALSE
            return lambda I, env: v
        if isinstance(e, FunApp):
            raise FunctionSymbolsPresent({e.symbol: len(e.args)})
        if isinstance(e, App):
            if isinstance(e.fun, Lambda):
                # (\R.B) A: evaluate B with R bound to A instead of tabulating the lambda
                arg = self._compile(e.arg, scope)
                body = self._compile(e.fun.body, scope + ((e.fun.binder, e.fun.binder_type),))
                return lambda I, env: body(I, env + (arg(I, env),))
            fun = self._compile(e.fun, scope)
            arg = self._compile(e.arg, scope)
            arg_t = self._type(e.fun, scope).arg
            if isinstance(arg_t, (Iota, Omicron)):
                return lambda I, env: fun(I, env)[arg(I, env)]
            index = self.space.handle(arg_t, Flavor.THREE).index
            return lambda I, env: fun(I, env)[index[arg(I, env)]]
        if isinstance(e, Lambda):
            dom = self._domain(e.binder_type)
            body = self._compile(e.body, scope + ((e.binder, e.binder_type),))
            return lambda I, env: tuple(body(I, env + (d,)) for d in dom)
        if isinstance(e, (And, Or)):
            left = self._compile(e.left, scope)
            right = self._compile(e.right, scope)
            if isinstance(self._type(e.left, scope), Omicron):
                if isinstance(e, And):
                    def conj(I, env):
                        a = left(I, env)
                        if a == FALSE:
                            return FALSE
                        b = right(I, env)
                        return a if a <= b else b
                    return conj

                def disj(I, env):
                    a = left(I, env)
                    if a == TRUE:
                        return TRUE
                    b = right(I, env)
                    return a if a >= b else b
                return disj
            op = meet_values if isinstance(e, And) else join_values
            return lambda I, env: op(left(I, env), right(I, env))
        if isinstance(e, Not):
            inner = self._compile(e.operand, scope)
            return lambda I, env: NEG[inner(I, env)]
        if isinstance(e, Eq):
            left = self._compile(e.left, scope)
            right = self._compile(e.right, scope)
            return lambda I, env: TRUE if left(I, env) == right(I, env) else FALSE
        if isinstance(e, Exists):
            dom = self._domain(e.binder_type)
            body = self._compile(e.body, scope + ((e.binder, e.binder_type),))

            def exists(I, env):
                best = FALSE
                for d in dom:
                    v = body(I, env + (d,))
                    if v == TRUE:
                        return TRUE
                    if v > best:
                        best = v
                return best
            return exists
        raise TypeError(f"cannot evaluate {e!r}")

    # --- evaluation ---------------------------------------------------------

    def eval(self, e: Expr, interp: Interp3, state: Optional[State] = None):
        state = state or State()
        names = tuple(state.values)
        scope = tuple((n, state.types[n]) for n in names)
        env = tuple(state.values[n] for n in names)
        return self._compile(e, scope)(interp.values, env)

    def bodies(self) -> list:
        """Compiled clause bodies grouped by predicate position."""
        if self._bodies is None:
            grouped = [[] for _ in self.predicates]
            for clause in self.program.clauses:
                grouped[self._pos[clause.head]].append(self._compile(clause.body, ()))
            self._bodies = grouped
        return self._bodies

    def psi_values(self, values: tuple) -> tuple:
        out = []
        for k, fns in enumerate(self.bodies()):
            if not fns:
                out.append(self.space.bottom(self.types[k], Flavor.THREE, "leq"))
                continue
            acc = fns[0](values, ())
            for fn in fns[1:]:
                acc = join_values(acc, fn(values, ()))
            out.append(acc)
        return tuple(out)

    def psi(self, interp: Interp3) -> Interp3:
        return interp.replace(self.psi_values(interp.values))

    def is_model(self, interp: Interp3) -> bool:
        for clause in self.program.clauses:
            k = self._pos[clause.head]
            body = self._compile(clause.body, ())
            if not leq_values(body(interp.values, ()), interp.values[k]):
                return False
        return True

    def interpretation(self, values) -> Interp3:
        return Interp3(self.universe, self.predicates, self.types, tuple(values))


# module-level conveniences mirroring the operations on programs

def _evaluator(program, interp=None, space=None):
    universe = interp.universe if interp is not None else herbrand_universe(program)
    space = space or DomainSpace(universe.constants)
    return Evaluator(program, universe, space)


def evaluate(program: TypedProgram, e: Expr, interp: Interp3, state: Optional[State] = None, space=None):
    return _evaluator(program, interp, space).eval(e, interp, state)


def psi(program: TypedProgram, interp: Interp3, space=None) -> Interp3:
    return _evaluator(program, interp, space).psi(interp)


def is_model(program: TypedProgram, interp: Interp3, space=None) -> bool:
    return _evaluator(program, interp, space).is_model(interp)


def format_value(v, t: TypeExpr, universe: HerbrandUniverse, space: DomainSpace) -> str:
    """Compact one-line rendering of a three-valued value."""
    if isinstance(t, Omicron):
        return str(Truth(v))
    if isinstance(t, Iota):
        return universe.name(v)
    if isinstance(t, PredArrow):
        keys = space.key_handle(t, Flavor.THREE).elements
        parts = [
            f"{format_value(k, t.arg, universe, space)}: {format_value(x, t.result, universe, space)}"
            for k, x in zip(keys, v)
        ]
        return "{" + ", ".join(parts) + "}"
    return dump_value(v)


def table_json(v, t: TypeExpr, universe: HerbrandUniverse, space: DomainSpace):
    """Nested ``{argRepr: ...}`` mapping with truth values as words."""
    if isinstance(t, Omicron):
        return str(Truth(v))
    keys = space.key_handle(t, Flavor.THREE).elements
    return {format_value(k, t.arg, universe, space): table_json(x, t.result, universe, space) for k, x in zip(keys, v)}


def table_rows(v, t: TypeExpr, universe: HerbrandUniverse, space: DomainSpace, prefix=()):
    """Flattened ``(argument reprs, truth word)`` rows in canonical order."""
    if isinstance(t, Omicron):
        yield prefix, str(Truth(v))
        return
    keys = space.key_handle(t, Flavor.THREE).elements
    for k, x in zip(keys, v):
        yield from table_rows(x, t.result, universe, space, prefix + (format_value(k, t.arg, universe, space),))
