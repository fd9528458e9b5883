"""Classical well-founded semantics for propositional normal programs.

Independent of the engine: programs are sets of rules over atoms and the
model is computed with the alternating fixpoint (least models of
Gelfond-Lifschitz style reducts).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Optional

from .domains import FALSE, TRUE, UNDEF, Truth
from .errors import NotNormalForm, NotPropositional
from .syntax import And, BoolLit, Clause, Const, Declaration, Not, RawProgram
from .typeexpr import OMICRON, Omicron
from .typesys import TypedProgram, check_program


@dataclass(frozen=True)
class Rule:
    head: str
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    def __str__(self):
        body = sorted(self.pos) + [f"not {a}" for a in sorted(self.neg)]
        return f"{self.head} <- {', '.join(body)}" if body else f"{self.head}."


@dataclass(frozen=True)
class NormalPropProgram:
    atoms: tuple
    rules: tuple

    def __post_init__(self):
        known = set(self.atoms)
        for r in self.rules:
            if r.head not in known or not (r.pos | r.neg) <= known:
                raise ValueError(f"rule {r} mentions an undeclared atom")


def _literals(body):
    if isinstance(body, And):
        yield from _literals(body.left)
        yield from _literals(body.right)
    else:
        yield body


def lower_hol(program: TypedProgram) -> NormalPropProgram:
    """Read a checked program with only ``o``-typed predicates as a normal program."""
    for name, t in program.predicate_types.items():
        if not isinstance(t, Omicron):
            raise NotPropositional(f"predicate {name} has type {t}, not o")
    rules = []
    for clause in program.clauses:
        pos, neg = set(), set()
        for lit in _literals(clause.body):
            if isinstance(lit, BoolLit) and lit.value:
                continue
            if isinstance(lit, Const):
                pos.add(lit.name)
            elif isinstance(lit, Not) and isinstance(lit.operand, Const):
                neg.add(lit.operand.name)
            else:
                raise NotNormalForm(f"body of {clause.head} is not a conjunction of literals")
        rules.append(Rule(clause.head, frozenset(pos), frozenset(neg)))
    return NormalPropProgram(tuple(program.predicates), tuple(rules))


def least_model(rules: Iterable[Rule], assumed_false: Optional[set] = None) -> set:
    """Least model of the positive program obtained by fixing negative literals.

    With ``assumed_false`` given, ``not a`` holds iff ``a`` is not in it
    (the reduct with respect to the complement of ``assumed_false``).
    """
    rules = [r for r in rules if assumed_false is None or not (r.neg - assumed_false)]
    true = set()
    changed = True
    while changed:
        changed = False
        for r in rules:
            if r.head not in true and r.pos <= true:
                true.add(r.head)
                changed = True
    return true


def _gamma(program: NormalPropProgram, interp: set) -> set:
    # not a is satisfied when a is outside interp
    false_atoms = set(program.atoms) - interp
    return least_model(program.rules, false_atoms)


def wfs_alternating(program: NormalPropProgram) -> dict:
    """Alternating fixpoint: ``K`` grows (true atoms), ``U`` shrinks (possibly true)."""
    k = set()
    u = _gamma(program, k)
    while True:
        k2 = _gamma(program, u)
        u2 = _gamma(program, k2)
        if k2 == k and u2 == u:
            break
        k, u = k2, u2
    return {a: TRUE if a in k else UNDEF if a in u else FALSE for a in program.atoms}


def stable_models(program: NormalPropProgram) -> list:
    """Two-valued stable models by brute force over all assignments."""
    out = []
    atoms = program.atoms
    for bits in product((False, True), repeat=len(atoms)):
        m = {a for a, b in zip(atoms, bits) if b}
        if _gamma(program, m) == m:
            out.append(m)
    return out


def self_check(program: NormalPropProgram, wf: Optional[dict] = None) -> list:
    """Consistency checks of the oracle on one program; returns failure messages."""
    wf = wf or wfs_alternating(program)
    problems = []
    k = {a for a, v in wf.items() if v == TRUE}
    u = {a for a, v in wf.items() if v != FALSE}
    if _gamma(program, u) != k or _gamma(program, k) != u:
        problems.append("not a fixpoint of the alternating operator")
    for m in stable_models(program):
        if not (k <= m <= u):
            problems.append(f"stable model {sorted(m)} disagrees with the well-founded model")
    return problems


# --- HOL rendering of normal programs ----------------------------------------

def to_source(program: NormalPropProgram) -> str:
    lines = [f"{a} : o." for a in program.atoms]
    for r in program.rules:
        lits = sorted(r.pos) + [f"~{a}" for a in sorted(r.neg)]
        lines.append(f"{r.head} <- {' & '.join(lits) if lits else 'true'}.")
    return "\n".join(lines) + "\n"


def to_typed(program: NormalPropProgram) -> TypedProgram:
    decls = tuple(Declaration(a, OMICRON) for a in program.atoms)
    clauses = []
    for r in program.rules:
        lits = [Const(a) for a in sorted(r.pos)] + [Not(Const(a)) for a in sorted(r.neg)]
        body = lits[0] if lits else BoolLit(True)
        for lit in lits[1:]:
            body = And(body, lit)
        clauses.append(Clause(r.head, body))
    return check_program(RawProgram(decls, tuple(clauses)))


# --- suites -----------------------------------------------------------------

def rule_templates(atoms: tuple) -> list:
    """Rules ``h.``, ``h <- a``, ``h <- not a``, ``h <- a, not b`` over ``atoms``."""
    out = []
    for h in atoms:
        out.append(Rule(h))
        for a in atoms:
            out.append(Rule(h, frozenset([a])))
        for a in atoms:
            out.append(Rule(h, neg=frozenset([a])))
        for a in atoms:
            for b in atoms:
                out.append(Rule(h, frozenset([a]), frozenset([b])))
    return out


def exhaustive_suite(atoms=("a", "b"), max_rules: int = 3) -> list:
    templates = rule_templates(tuple(atoms))
    programs = []
    for n in range(max_rules + 1):
        for combo in combinations(templates, n):
            programs.append(NormalPropProgram(tuple(atoms), combo))
    return programs


def random_program(rng: random.Random, max_atoms: int = 4, max_rules: int = 6) -> NormalPropProgram:
    n_atoms = rng.randint(1, max_atoms)
    atoms = tuple(f"a{i}" for i in range(n_atoms))
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        head = rng.choice(atoms)
        pos = frozenset(a for a in atoms if rng.random() < 0.3)
        neg = frozenset(a for a in atoms if rng.random() < 0.3)
        rules.append(Rule(head, pos, neg))
    return NormalPropProgram(atoms, tuple(rules))


def random_suite(n: int, seed: int, max_atoms: int = 4, max_rules: int = 6) -> list:
    rng = random.Random(seed)
    return [random_program(rng, max_atoms, max_rules) for _ in range(n)]


# --- differential check -----------------------------------------------------

def differential_check(program, engine_model: Optional[dict] = None) -> dict:
    """Compare the engine's well-founded model with the alternating fixpoint.

    ``program`` is a :class:`TypedProgram` or a :class:`NormalPropProgram`.
    """
    from .engine import Engine

    if isinstance(program, NormalPropProgram):
        normal, typed = program, to_typed(program)
    else:
        normal, typed = lower_hol(program), program
    if engine_model is None:
        wf = Engine(typed).well_founded_model()
        engine_model = wf.model.as_dict()
    expected = wfs_alternating(normal)
    mismatches = [
        {"atom": a, "engine": str(Truth(engine_model[a])), "oracle": str(expected[a])}
        for a in normal.atoms
        if engine_model[a] != expected[a]
    ]
    return {"atoms": len(normal.atoms), "mismatches": mismatches}


def merge_reports(reports: Iterable[dict]) -> dict:
    atoms = 0
    mismatches = []
    for i, r in enumerate(reports):
        atoms += r["atoms"]
        mismatches.extend({**m, "program": i} for m in r["mismatches"])
    return {"atoms": atoms, "mismatches": mismatches}
