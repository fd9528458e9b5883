"""Type checking and local inference for programs and queries.

Inference is syntax directed: every unannotated binder gets a type
variable, constraints from its uses are solved by first-order
unification, and any binder whose type is still open at the end is an
error (E006).  Nothing is ever defaulted.

Diagnostic codes: E001 unbound variable, E002 type mismatch, E003 missing
declaration, E004 function symbol, E005 clause body not closed, E006
binder type cannot be inferred.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import FunctionSymbolsPresent, TypeCheckError
from .syntax import (
    And,
    App,
    BoolLit,
    Clause,
    Const,
    Eq,
    Exists,
    Expr,
    FunApp,
    Lambda,
    Not,
    Or,
    RawProgram,
    Var,
    free_vars,
)
from .typeexpr import IOTA, OMICRON, FunArrow, Iota, Omicron, PredArrow, TypeExpr


@dataclass(frozen=True)
class TypedProgram:
    predicate_types: Mapping[str, TypeExpr]
    individual_constants: tuple
    clauses: tuple  # of syntax.Clause with fully annotated bodies
    function_symbols: Mapping[str, int] = field(default_factory=dict)

    @property
    def predicates(self) -> tuple:
        return tuple(self.predicate_types)

    def clauses_for(self, name: str) -> list:
        return [c for c in self.clauses if c.head == name]


# --- unification machinery ---------------------------------------------------

@dataclass(frozen=True)
class _Meta:
    id: int


@dataclass(frozen=True)
class _Arrow:
    """Arrow whose components may still contain type variables."""

    arg: object
    result: object


class _Unifier:
    def __init__(self):
        self.subst: dict[int, object] = {}
        self._ids = itertools.count()

    def fresh(self) -> _Meta:
        return _Meta(next(self._ids))

    def resolve(self, t):
        while isinstance(t, _Meta) and t.id in self.subst:
            t = self.subst[t.id]
        return t

    def zonk(self, t):
        t = self.resolve(t)
        if isinstance(t, (_Arrow, PredArrow)):
            return _Arrow(self.zonk(t.arg), self.zonk(t.result))
        return t

    def occurs(self, m: _Meta, t) -> bool:
        t = self.resolve(t)
        if t == m:
            return True
        if isinstance(t, (_Arrow, PredArrow)):
            return self.occurs(m, t.arg) or self.occurs(m, t.result)
        return False

    def unify(self, a, b) -> bool:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return True
        if isinstance(a, _Meta):
            if self.occurs(a, b):
                return False
            self.subst[a.id] = b
            return True
        if isinstance(b, _Meta):
            return self.unify(b, a)
        if isinstance(a, (_Arrow, PredArrow)) and isinstance(b, (_Arrow, PredArrow)):
            return self.unify(a.arg, b.arg) and self.unify(a.result, b.result)
        return False


def _show(u: _Unifier, t) -> str:
    t = u.zonk(t)
    if isinstance(t, _Meta):
        return f"?{t.id}"
    if isinstance(t, _Arrow):
        arg = _show(u, t.arg)
        if isinstance(u.resolve(t.arg), (_Arrow, PredArrow)):
            arg = f"({arg})"
        return f"{arg}->{_show(u, t.result)}"
    return str(t)


def _ground(u: _Unifier, t) -> Optional[TypeExpr]:
    """Convert a solved type to a TypeExpr; None if open or ill-formed."""
    t = u.resolve(t)
    if isinstance(t, (Iota, Omicron)):
        return t
    if isinstance(t, (_Arrow, PredArrow)):
        arg, res = _ground(u, t.arg), _ground(u, t.result)
        if arg is None or res is None:
            return None
        try:
            return PredArrow(arg, res)
        except ValueError:
            return None
    return None


def _is_open(u: _Unifier, t) -> bool:
    t = u.resolve(t)
    if isinstance(t, _Meta):
        return True
    if isinstance(t, (_Arrow, PredArrow)):
        return _is_open(u, t.arg) or _is_open(u, t.result)
    return False


class _Inference:
    """One inference problem: a set of expressions sharing declarations."""

    def __init__(self, declarations: Mapping[str, TypeExpr]):
        self.decls = dict(declarations)
        self.u = _Unifier()
        self.binders: dict[int, object] = {}  # id(node) -> binder type
        self.undeclared: dict[str, tuple] = {}  # name -> (type var, span)
        self.pending: list[tuple] = []  # deferred well-formedness checks

    def mismatch(self, expected, actual, span, what=""):
        prefix = f"{what}: " if what else ""
        raise TypeCheckError(
            "E002",
            f"{prefix}expected type {_show(self.u, expected)}, got {_show(self.u, actual)}",
            span,
        )

    def require(self, expected, actual, span, what=""):
        if not self.u.unify(expected, actual):
            self.mismatch(expected, actual, span, what)

    def infer(self, e: Expr, scope: Mapping[str, object], expected=None):
        t = self._infer(e, scope, expected)
        if expected is not None:
            self.require(expected, t, e.span)
        return t

    def _infer(self, e, scope, expected):
        u = self.u
        if isinstance(e, Var):
            if e.name not in scope:
                raise TypeCheckError("E001", f"unbound variable {e.name}", e.span)
            return scope[e.name]
        if isinstance(e, Const):
            t = self.decls.get(e.name)
            if isinstance(t, FunArrow):
                raise FunctionSymbolsPresent({e.name: t.arity}, e.span)
            if t is not None:
                return t
            if e.name not in self.undeclared:
                self.undeclared[e.name] = (u.fresh(), e.span)
            return self.undeclared[e.name][0]
        if isinstance(e, BoolLit):
            return OMICRON
        if isinstance(e, FunApp):
            raise FunctionSymbolsPresent({e.symbol: len(e.args)}, e.span)
        if isinstance(e, App):
            head = e.fun
            while isinstance(head, App):
                head = head.fun
            if isinstance(head, Const):
                dt = self.decls.get(head.name)
                if isinstance(dt, FunArrow):
                    raise FunctionSymbolsPresent({head.name: dt.arity}, head.span)
                if dt is None:
                    raise TypeCheckError(
                        "E003", f"missing type declaration for {head.name}", head.span
                    )
            ft = self.infer(e.fun, scope)
            at = self.infer(e.arg, scope)
            rt = u.fresh() if expected is None else expected
            if not u.unify(ft, _Arrow(at, rt)):
                fz = u.resolve(ft)
                if isinstance(fz, (_Arrow, PredArrow)):
                    self.mismatch(fz.arg, at, e.arg.span, "argument")
                self.mismatch(_Arrow(at, rt), ft, e.fun.span, "applied expression")
            self.pending.append(("predicate", rt, e.span, "application result"))
            return rt
        if isinstance(e, Lambda):
            bt = e.binder_type if e.binder_type is not None else u.fresh()
            body_expected = None
            if expected is not None:
                exp = u.resolve(expected)
                if isinstance(exp, (_Arrow, PredArrow)):
                    self.require(exp.arg, bt, e.span, f"binder {e.binder}")
                    body_expected = exp.result
                elif not isinstance(exp, _Meta):
                    self.mismatch(exp, _Arrow(bt, u.fresh()), e.span)
            self.binders[id(e)] = bt
            self.pending.append(("argument", bt, e.span, f"binder {e.binder}"))
            body_t = self.infer(e.body, {**scope, e.binder: bt}, body_expected)
            self.pending.append(("predicate", body_t, e.body.span, "lambda body"))
            return _Arrow(bt, body_t)
        if isinstance(e, (And, Or)):
            lt = self.infer(e.left, scope, expected)
            self.infer(e.right, scope, lt)
            op = "&" if isinstance(e, And) else "|"
            self.pending.append(("predicate", lt, e.span, f"operands of {op}"))
            return lt
        if isinstance(e, Not):
            self.infer(e.operand, scope, OMICRON)
            return OMICRON
        if isinstance(e, Eq):
            self.infer(e.left, scope, IOTA)
            self.infer(e.right, scope, IOTA)
            return OMICRON
        if isinstance(e, Exists):
            bt = e.binder_type if e.binder_type is not None else u.fresh()
            self.binders[id(e)] = bt
            self.pending.append(("argument", bt, e.span, f"binder {e.binder}"))
            self.infer(e.body, {**scope, e.binder: bt}, OMICRON)
            return OMICRON
        raise TypeError(f"not an expression: {e!r}")

    def finish(self):
        u = self.u
        for kind, t, span, what in self.pending:
            r = u.resolve(t)
            if isinstance(r, _Meta):
                continue  # reported below if it belongs to a binder
            if kind == "predicate" and not isinstance(r, (Omicron, _Arrow, PredArrow)):
                raise TypeCheckError("E002", f"{what} must have a predicate type, got {_show(u, t)}", span)
            if kind == "argument" and not isinstance(r, (Iota, Omicron, _Arrow, PredArrow)):
                raise TypeCheckError("E002", f"{what} must have an argument type, got {_show(u, t)}", span)
        for name, (t, span) in self.undeclared.items():
            r = u.resolve(t)
            if not isinstance(r, Iota):
                raise TypeCheckError(
                    "E003", f"missing type declaration for {name} (used at type {_show(u, t)})", span
                )

    def annotate(self, e: Expr) -> Expr:
        u = self.u
        if isinstance(e, (Lambda, Exists)):
            bt = self.binders[id(e)]
            if _is_open(u, bt):
                raise TypeCheckError(
                    "E006", f"cannot infer the type of binder {e.binder}; add an annotation", e.span
                )
            gt = _ground(u, bt)
            if gt is None:
                raise TypeCheckError("E002", f"binder {e.binder} has ill-formed type {_show(u, bt)}", e.span)
            return type(e)(e.binder, gt, self.annotate(e.body), e.span)
        if isinstance(e, App):
            return App(self.annotate(e.fun), self.annotate(e.arg), e.span)
        if isinstance(e, (And, Or, Eq)):
            return type(e)(self.annotate(e.left), self.annotate(e.right), e.span)
        if isinstance(e, Not):
            return Not(self.annotate(e.operand), e.span)
        return e

    def ground_or_fail(self, t, span, what) -> TypeExpr:
        if _is_open(self.u, t):
            raise TypeCheckError("E006", f"cannot determine the type of {what}", span)
        g = _ground(self.u, t)
        if g is None:
            g = self.u.resolve(t)
            if not isinstance(g, (Iota, Omicron)):
                raise TypeCheckError("E002", f"{what} has ill-formed type {_show(self.u, t)}", span)
        return g


def check_program(raw: RawProgram) -> TypedProgram:
    decls = {d.name: d.type for d in raw.declarations}
    functions = {n: t.arity for n, t in decls.items() if isinstance(t, FunArrow)}
    if functions:
        first = next(d for d in raw.declarations if d.name in functions)
        raise FunctionSymbolsPresent(functions, first.span)
    preds = {n: t for n, t in decls.items() if isinstance(t, (Omicron, PredArrow))}
    individuals = [n for n, t in decls.items() if isinstance(t, Iota)]

    typed_clauses = []
    for clause in raw.clauses:
        head_t = decls.get(clause.head)
        if head_t is None:
            raise TypeCheckError("E003", f"missing type declaration for predicate {clause.head}", clause.span)
        if clause.head not in preds:
            raise TypeCheckError(
                "E002", f"clause head {clause.head} has type {head_t}, expected a predicate type", clause.span
            )
        open_vars = free_vars(clause.body)
        if open_vars:
            raise TypeCheckError(
                "E005",
                f"body of clause for {clause.head} is not closed (free: {', '.join(sorted(open_vars))})",
                clause.body.span or clause.span,
            )
        inf = _Inference(decls)
        inf.infer(clause.body, {}, head_t)
        inf.finish()
        for name, (t, _) in inf.undeclared.items():
            if name not in individuals:
                individuals.append(name)
        typed_clauses.append(Clause(clause.head, inf.annotate(clause.body), clause.span))

    return TypedProgram(preds, tuple(individuals), tuple(typed_clauses), {})


def _declarations_of(program) -> dict:
    if program is None:
        return {}
    if isinstance(program, TypedProgram):
        d = dict(program.predicate_types)
        d.update({c: IOTA for c in program.individual_constants})
        return d
    return dict(program)


def infer_expr(env: Mapping[str, TypeExpr], e: Expr, program=None) -> TypeExpr:
    """Type of ``e`` when its free variables are typed by ``env``.

    ``program`` supplies the constant declarations: a TypedProgram or a
    plain name-to-type mapping.
    """
    inf = _Inference(_declarations_of(program))
    t = inf.infer(e, dict(env))
    inf.finish()
    inf.annotate(e)  # surfaces E006 for open binders
    return inf.ground_or_fail(t, e.span, "expression")


def check_query(program: TypedProgram, e: Expr) -> Expr:
    """Check that ``e`` is a closed type-o query; return it annotated."""
    open_vars = free_vars(e)
    if open_vars:
        raise TypeCheckError("E001", f"unbound variable(s) in query: {', '.join(sorted(open_vars))}", e.span)
    inf = _Inference(_declarations_of(program))
    inf.infer(e, {}, OMICRON)
    inf.finish()
    for name, (_, span) in inf.undeclared.items():
        if name not in program.individual_constants:
            raise TypeCheckError("E003", f"unknown constant {name} in query", span)
    return inf.annotate(e)


def synthesize(e: Expr, scope: Mapping[str, TypeExpr], program: TypedProgram) -> TypeExpr:
    """Type of an already-annotated expression, read bottom-up without unification."""
    if isinstance(e, Var):
        return scope[e.name]
    if isinstance(e, Const):
        return program.predicate_types.get(e.name, IOTA)
    if isinstance(e, (BoolLit, Not, Eq, Exists)):
        return OMICRON
    if isinstance(e, App):
        return synthesize(e.fun, scope, program).result
    if isinstance(e, Lambda):
        return PredArrow(e.binder_type, synthesize(e.body, {**scope, e.binder: e.binder_type}, program))
    if isinstance(e, (And, Or)):
        return synthesize(e.left, scope, program)
    raise TypeError(f"cannot synthesize a type for {e!r}")
