"""Well-founded semantics for higher-order logic programs with negation."""
from .domains import FALSE, TRUE, UNDEF, DomainSpace, Flavor, Truth, ValuePair
from .engine import Engine, WfResult, kripke_kleene_model, three_valued_stable_models, well_founded_model
from .syntax import parse_program, parse_query, parse_type, pretty
from .typesys import TypedProgram, check_program


def load(text: str) -> TypedProgram:
    """Parse and type-check program text."""
    return check_program(parse_program(text))


__all__ = [
    "FALSE", "TRUE", "UNDEF", "Truth", "Flavor", "ValuePair", "DomainSpace",
    "Engine", "WfResult", "well_founded_model", "kripke_kleene_model", "three_valued_stable_models",
    "parse_program", "parse_query", "parse_type", "pretty", "check_program", "TypedProgram", "load",
]
