"""Concrete ASCII syntax for higher-order programs: AST, parser, pretty-printer.

A program is a sequence of type declarations and clauses::

    subset : (i->o)->(i->o)->o.
    subset <- \\P.\\Q. ~ exists X. (P X) & ~(Q X).

Application is juxtaposition (left associative, tightest), then ``=``,
then prefix ``~``, then ``&``, then ``|``.  Lambda and ``exists`` bodies
extend as far to the right as possible.  ``%`` starts a line comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import HolSyntaxError
from .typeexpr import IOTA, OMICRON, FunArrow, Iota, Omicron, PredArrow, TypeExpr


@dataclass(frozen=True)
class Span:
    line: int
    col: int


def _span():
    return field(default=None, compare=False, repr=False)


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Var:
    """An argument variable (predicate or individual; typesys tells which)."""

    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Const:
    """A predicate constant, individual constant or function symbol."""

    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class FunApp:
    symbol: str
    args: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App:
    fun: Expr
    arg: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lambda:
    binder: str
    binder_type: Optional[TypeExpr]
    body: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class And:
    left: Expr
    right: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Or:
    left: Expr
    right: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Not:
    operand: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Eq:
    left: Expr
    right: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Exists:
    binder: str
    binder_type: Optional[TypeExpr]
    body: Expr
    span: Optional[Span] = _span()


Expr = Union[Var, Const, BoolLit, FunApp, App, Lambda, And, Or, Not, Eq, Exists]


@dataclass(frozen=True)
class Declaration:
    name: str
    type: TypeExpr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Clause:
    head: str
    body: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class RawProgram:
    declarations: tuple = ()
    clauses: tuple = ()


def free_vars(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Const, BoolLit)):
        return set()
    if isinstance(e, FunApp):
        return set().union(*(free_vars(a) for a in e.args))
    if isinstance(e, App):
        return free_vars(e.fun) | free_vars(e.arg)
    if isinstance(e, (Lambda, Exists)):
        return free_vars(e.body) - {e.binder}
    if isinstance(e, (And, Or, Eq)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Not):
        return free_vars(e.operand)
    raise TypeError(f"not an expression: {e!r}")


# --- lexer -----------------------------------------------------------------

KEYWORDS = {"exists", "true", "false"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<larrow><-)
  | (?P<rarrow>->)
  | (?P<punct>[:.\\~&|=()])
  | (?P<upper>[A-Z][A-Za-z0-9_']*)
  | (?P<lower>[a-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'upper', 'lower', 'kw', or the literal punctuation
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise HolSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        span = Span(line, pos - line_start + 1)
        if kind in ("upper", "lower"):
            tokens.append(Token("kw" if chunk in KEYWORDS else kind, chunk, span))
        elif kind in ("larrow", "rarrow", "punct"):
            tokens.append(Token(chunk, chunk, span))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return tokens


# --- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise HolSyntaxError(f"{message}, found {found}", tok.span.line, tok.span.col)

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, kind, what=None) -> Token:
        if self.tok.kind != kind:
            self.error(f"expected {what or repr(kind)}")
        return self.advance()

    def at(self, kind, text=None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    # types

    def parse_type(self) -> TypeExpr:
        start = self.tok
        tree = self._type_tree()
        try:
            return _classify(tree)
        except ValueError as exc:
            raise HolSyntaxError(str(exc), start.span.line, start.span.col) from None

    def _type_tree(self):
        left = self._type_atom()
        if self.at("->"):
            self.advance()
            return ("->", left, self._type_tree())
        return left

    def _type_atom(self):
        if self.at("lower", "i"):
            self.advance()
            return "i"
        if self.at("lower", "o"):
            self.advance()
            return "o"
        if self.at("("):
            self.advance()
            inner = self._type_tree()
            self.expect(")")
            return inner
        self.error("expected a type ('i', 'o' or '(')")

    # programs

    def parse_program(self) -> RawProgram:
        decls, clauses, seen = [], [], {}
        while not self.at("eof"):
            name_tok = self.expect("lower", "a lowercase name")
            if self.at(":"):
                self.advance()
                t = self.parse_type()
                self.expect(".", "'.' after declaration")
                if name_tok.text in seen:
                    prev = seen[name_tok.text]
                    raise HolSyntaxError(
                        f"duplicate type declaration for {name_tok.text!r} "
                        f"(first declared at {prev.line}:{prev.col})",
                        name_tok.span.line,
                        name_tok.span.col,
                    )
                seen[name_tok.text] = name_tok.span
                decls.append(Declaration(name_tok.text, t, name_tok.span))
            elif self.at("<-"):
                self.advance()
                body = self.parse_expr()
                self.expect(".", "'.' at end of clause")
                clauses.append(Clause(name_tok.text, body, name_tok.span))
            else:
                self.error("expected ':' or '<-'")
        return RawProgram(tuple(decls), tuple(clauses))

    # expressions

    def parse_expr(self) -> Expr:
        left = self._conj()
        while self.at("|"):
            tok = self.advance()
            left = Or(left, self._conj(), tok.span)
        return left

    def _conj(self):
        left = self._unary()
        while self.at("&"):
            tok = self.advance()
            left = And(left, self._unary(), tok.span)
        return left

    def _unary(self):
        if self.at("~"):
            tok = self.advance()
            return Not(self._unary(), tok.span)
        return self._eq()

    def _eq(self):
        left = self._app()
        if self.at("="):
            tok = self.advance()
            left = Eq(left, self._app(), tok.span)
        return left

    def _starts_atom(self) -> bool:
        tok = self.tok
        return tok.kind in ("upper", "lower", "(", "\\") or (
            tok.kind == "kw" and tok.text in KEYWORDS
        )

    def _app(self):
        if not self._starts_atom():
            self.error("expected an expression")
        # a bare binder swallows everything to its right, so it takes no arguments
        bare_binder = self.tok.kind == "\\" or (self.tok.kind == "kw" and self.tok.text == "exists")
        expr = self._atom()
        while self._starts_atom() and not bare_binder:
            arg = self._atom()
            expr = App(expr, arg, expr.span)
        return expr

    def _binder(self):
        var = self.expect("upper", "a variable name")
        binder_type = None
        if self.at(":"):
            self.advance()
            binder_type = self.parse_type()
        self.expect(".", "'.' after binder")
        return var.text, binder_type

    def _atom(self):
        tok = self.tok
        if tok.kind == "upper":
            self.advance()
            return Var(tok.text, tok.span)
        if tok.kind == "lower":
            self.advance()
            return Const(tok.text, tok.span)
        if tok.kind == "kw":
            self.advance()
            if tok.text == "true":
                return BoolLit(True, tok.span)
            if tok.text == "false":
                return BoolLit(False, tok.span)
            name, t = self._binder()
            return Exists(name, t, self.parse_expr(), tok.span)
        if tok.kind == "\\":
            self.advance()
            name, t = self._binder()
            return Lambda(name, t, self.parse_expr(), tok.span)
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        self.error("expected an expression")


def _classify(tree) -> TypeExpr:
    if tree == "i":
        return IOTA
    if tree == "o":
        return OMICRON
    _, left, right = tree
    # i -> ... -> i is a functional type
    arity, t = 0, tree
    while isinstance(t, tuple) and t[1] == "i":
        arity, t = arity + 1, t[2]
    if t == "i":
        return FunArrow(arity)
    arg, result = _classify(left), _classify(right)
    if isinstance(arg, FunArrow):
        raise ValueError(f"functional type {arg} cannot be a predicate argument")
    if not isinstance(result, (Omicron, PredArrow)):
        raise ValueError("a type ending in 'i' must have only 'i' arguments")
    return PredArrow(arg, result)


def parse_program(text: str) -> RawProgram:
    return _Parser(text).parse_program()


def parse_query(text: str) -> Expr:
    p = _Parser(text)
    e = p.parse_expr()
    if p.at("."):
        p.advance()
    if not p.at("eof"):
        p.error("unexpected trailing input")
    return e


def parse_type(text: str) -> TypeExpr:
    p = _Parser(text)
    t = p.parse_type()
    if not p.at("eof"):
        p.error("unexpected trailing input")
    return t


# --- pretty printer --------------------------------------------------------

_OR, _AND, _NOT, _EQ, _APP, _ATOM = 1, 2, 3, 4, 5, 6


def _prec(e) -> int:
    if isinstance(e, (Lambda, Exists)):
        return 0
    if isinstance(e, Or):
        return _OR
    if isinstance(e, And):
        return _AND
    if isinstance(e, Not):
        return _NOT
    if isinstance(e, Eq):
        return _EQ
    if isinstance(e, (App, FunApp)):
        return _APP
    return _ATOM


def _pp(e, ctx: int) -> str:
    text = _pp_bare(e)
    return f"({text})" if _prec(e) < ctx or (_prec(e) == 0 and ctx > 0) else text


def _pp_bare(e) -> str:
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, App):
        return f"{_pp(e.fun, _APP)} {_pp(e.arg, _ATOM)}"
    if isinstance(e, FunApp):
        return " ".join([e.symbol] + [_pp(a, _ATOM) for a in e.args])
    if isinstance(e, Lambda):
        ann = f":{e.binder_type}" if e.binder_type is not None else ""
        return f"\\{e.binder}{ann}. {_pp(e.body, 0)}"
    if isinstance(e, Exists):
        ann = f":{e.binder_type}" if e.binder_type is not None else ""
        return f"exists {e.binder}{ann}. {_pp(e.body, 0)}"
    if isinstance(e, Or):
        return f"{_pp(e.left, _OR)} | {_pp(e.right, _AND)}"
    if isinstance(e, And):
        return f"{_pp(e.left, _AND)} & {_pp(e.right, _NOT)}"
    if isinstance(e, Not):
        return f"~{_pp(e.operand, _NOT)}"
    if isinstance(e, Eq):
        return f"{_pp(e.left, _APP)} = {_pp(e.right, _APP)}"
    raise TypeError(f"cannot print {e!r}")


def pretty(ast) -> str:
    """Render a program, declaration, clause or expression as source text."""
    if isinstance(ast, RawProgram):
        lines = [pretty(d) for d in ast.declarations]
        lines += [pretty(c) for c in ast.clauses]
        return "".join(line + "\n" for line in lines)
    if isinstance(ast, Declaration):
        return f"{ast.name} : {ast.type}."
    if isinstance(ast, Clause):
        return f"{ast.head} <- {_pp(ast.body, 0)}."
    return _pp(ast, 0)


def iter_subexprs(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, App):
        yield from iter_subexprs(e.fun)
        yield from iter_subexprs(e.arg)
    elif isinstance(e, FunApp):
        for a in e.args:
            yield from iter_subexprs(a)
    elif isinstance(e, (Lambda, Exists)):
        yield from iter_subexprs(e.body)
    elif isinstance(e, (And, Or, Eq)):
        yield from iter_subexprs(e.left)
        yield from iter_subexprs(e.right)
    elif isinstance(e, Not):
        yield from iter_subexprs(e.operand)
