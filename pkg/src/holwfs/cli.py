"""Command-line front end: ``holwfs {check,model,query,kk,stable,compare,domain}``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from .domains import DomainSpace, Flavor, default_cap, dump_value
from .engine import Engine
from .errors import CapExceeded, HolError, HolSyntaxError, NotNormalForm, NotPropositional, TypeCheckError
from .oracle import differential_check, lower_hol, merge_reports, random_suite
from .semantics import Interp3, table_json, table_rows
from .syntax import parse_program, parse_type
from .typesys import check_program

EXIT_OK, EXIT_USER, EXIT_IO, EXIT_CAP = 0, 1, 2, 3


@dataclass
class CliConfig:
    command: str
    path: Optional[str] = None
    format: str = "text"
    max_domain: int = field(default_factory=default_cap)
    trace: bool = False
    trace_limit: Optional[int] = 1000
    seed: int = 0
    random: Optional[int] = None

    def __post_init__(self):
        if self.max_domain < 3:
            raise ValueError("--max-domain must be at least 3")
        if self.format not in ("text", "json"):
            raise ValueError("--format must be text or json")


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise _Fail(EXIT_IO, f"{path} is not valid UTF-8") from None
    return check_program(parse_program(text))


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=False))


def model_json(engine: Engine, interp: Interp3) -> dict:
    preds = {}
    for name, t, v in zip(interp.predicates, interp.types, interp.values):
        preds[name] = {"type": str(t), "table": table_json(v, t, engine.universe, engine.space)}
    return {"universe": list(engine.universe.constants), "predicates": preds}


def model_text(engine: Engine, interp: Interp3) -> str:
    lines = ["universe: " + " ".join(engine.universe.constants)]
    for name, t, v in zip(interp.predicates, interp.types, interp.values):
        rows = list(table_rows(v, t, engine.universe, engine.space))
        if len(rows) == 1 and not rows[0][0]:
            lines.append(f"{name} : {t} = {rows[0][1]}")
            continue
        lines.append(f"{name} : {t}")
        for args, value in rows:
            lines.append(f"  {name} {' '.join(_wrap(a) for a in args)} = {value}")
    return "\n".join(lines) + "\n"


def _wrap(arg: str) -> str:
    return f"({arg})" if " " in arg else arg


def cmd_check(cfg: CliConfig) -> int:
    program = _load(cfg.path)
    if cfg.format == "json":
        _emit({"ok": True, "predicates": {p: str(t) for p, t in program.predicate_types.items()},
               "individuals": list(program.individual_constants)})
    else:
        print(f"ok: {len(program.predicate_types)} predicates, {len(program.clauses)} clauses")
    return EXIT_OK


def cmd_model(cfg: CliConfig) -> int:
    engine = Engine(_load(cfg.path), cfg.max_domain)
    wf = engine.well_founded_model(trace_limit=cfg.trace_limit)
    if cfg.format == "json":
        out = model_json(engine, wf.model)
        out["stats"] = wf.stats
        if cfg.trace:
            out["trace"] = engine.trace_json(wf)
        _emit(out)
    else:
        sys.stdout.write(model_text(engine, wf.model))
        if cfg.trace:
            for step in engine.trace_json(wf):
                print(f"% revision {step['revision']} (lower {step['lower_steps']}, upper {step['upper_steps']} steps)")
                for name, table in step["changed"].items():
                    print(f"%   {name} := {json.dumps(table)}")
    return EXIT_OK


def cmd_kk(cfg: CliConfig) -> int:
    engine = Engine(_load(cfg.path), cfg.max_domain)
    model = engine.kripke_kleene_model()
    if cfg.format == "json":
        _emit(model_json(engine, model))
    else:
        sys.stdout.write(model_text(engine, model))
    return EXIT_OK


def cmd_stable(cfg: CliConfig) -> int:
    engine = Engine(_load(cfg.path), cfg.max_domain)
    models = engine.three_valued_stable_models()
    if cfg.format == "json":
        _emit({"universe": list(engine.universe.constants),
               "models": [model_json(engine, m)["predicates"] for m in models]})
    else:
        print(f"{len(models)} stable model(s)")
        for i, m in enumerate(models, 1):
            print(f"--- model {i}")
            sys.stdout.write(model_text(engine, m).split("\n", 1)[1])
    return EXIT_OK


def cmd_query(cfg: CliConfig, exprs: list) -> int:
    engine = Engine(_load(cfg.path), cfg.max_domain)
    if not exprs:
        exprs = [line.strip() for line in sys.stdin if line.strip()]
    wf = engine.well_founded_model(trace_limit=0)
    results = []
    for text in exprs:
        try:
            value = engine.query(wf, text)
        except (HolSyntaxError, TypeCheckError) as exc:
            raise _Fail(EXIT_USER, f"query {text!r}: {exc}") from None
        results.append((text, str(value)))
    if cfg.format == "json":
        _emit([{"query": q, "value": v} for q, v in results])
    else:
        for _, v in results:
            print(v)
    return EXIT_OK


def cmd_compare(cfg: CliConfig) -> int:
    if cfg.random is not None:
        report = merge_reports(differential_check(p) for p in random_suite(cfg.random, cfg.seed))
        report["programs"] = cfg.random
    elif cfg.path:
        program = _load(cfg.path)
        lower_hol(program)  # surfaces NotPropositional / NotNormalForm before any work
        report = differential_check(program)
    else:
        raise _Fail(EXIT_USER, "compare needs a program file or --random N")
    if cfg.format == "json":
        _emit(report)
    else:
        print(f"atoms: {report['atoms']}")
        print(f"mismatches: {len(report['mismatches'])}")
        for m in report["mismatches"]:
            print(f"  {m['atom']}: engine={m['engine']} oracle={m['oracle']}")
    return EXIT_OK if not report["mismatches"] else EXIT_USER


def cmd_domain(cfg: CliConfig, type_text: str, flavor: str, individuals: int) -> int:
    t = parse_type(type_text)
    space = DomainSpace([f"c{i}" for i in range(individuals)], cfg.max_domain)
    handle = space.handle(t, Flavor(flavor))
    if cfg.format == "json":
        _emit({"type": str(t), "flavor": flavor, "count": len(handle),
               "elements": [dump_value(e) for e in handle.elements]})
    else:
        sys.stdout.write(handle.dump())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--max-domain", type=int, default=None,
                        help="largest domain that may be enumerated (default 20000 or $HOLWFS_MAX_DOMAIN)")

    p = argparse.ArgumentParser(prog="holwfs", description="Well-founded models of higher-order logic programs.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common], help="parse and type-check").add_argument("path")

    m = sub.add_parser("model", parents=[common], help="print the well-founded model")
    m.add_argument("path")
    m.add_argument("--trace", action="store_true", help="include the revision steps")
    m.add_argument("--trace-limit", type=int, default=1000, help="revision steps kept (0 keeps all)")

    q = sub.add_parser("query", parents=[common], help="evaluate closed o-typed expressions")
    q.add_argument("path")
    q.add_argument("exprs", nargs="*", help="expressions; read one per line from stdin if omitted")

    sub.add_parser("kk", parents=[common], help="print the Kripke-Kleene model").add_argument("path")
    sub.add_parser("stable", parents=[common], help="list the three-valued stable models").add_argument("path")

    c = sub.add_parser("compare", parents=[common], help="compare with the alternating-fixpoint oracle")
    c.add_argument("path", nargs="?")
    c.add_argument("--random", type=int, metavar="N", help="check N random normal programs instead")
    c.add_argument("--seed", type=int, default=0)

    d = sub.add_parser("domain", parents=[common], help="enumerate a semantic domain")
    d.add_argument("type")
    d.add_argument("--flavor", choices=[f.value for f in Flavor], default="three")
    d.add_argument("--individuals", type=int, default=1, help="size of the universe of individuals")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = CliConfig(
            command=args.command,
            path=getattr(args, "path", None),
            format=args.format,
            max_domain=args.max_domain if args.max_domain is not None else default_cap(),
            trace=getattr(args, "trace", False),
            trace_limit=(getattr(args, "trace_limit", 1000) or None),
            seed=getattr(args, "seed", 0),
            random=getattr(args, "random", None),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    try:
        if cfg.command == "check":
            return cmd_check(cfg)
        if cfg.command == "model":
            return cmd_model(cfg)
        if cfg.command == "kk":
            return cmd_kk(cfg)
        if cfg.command == "stable":
            return cmd_stable(cfg)
        if cfg.command == "query":
            return cmd_query(cfg, args.exprs)
        if cfg.command == "compare":
            return cmd_compare(cfg)
        return cmd_domain(cfg, args.type, args.flavor, args.individuals)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapExceeded as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NotPropositional, NotNormalForm) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USER
    except HolSyntaxError as exc:
        print(f"{cfg.path or '<input>'}:{exc}", file=sys.stderr)
        return EXIT_USER
    except HolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
