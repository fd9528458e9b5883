"""Exception hierarchy shared by every stage of the pipeline."""


class HolError(Exception):
    """Base class for all engine errors."""

    code: str | None = None


class HolSyntaxError(HolError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class TypeCheckError(HolError):
    """A diagnostic from the type checker, tagged with a stable code."""

    def __init__(self, code: str, message: str, span=None):
        where = f"{span.line}:{span.col}: " if span is not None else ""
        super().__init__(f"{code} {where}{message}")
        self.code = code
        self.message = message
        self.span = span


class FunctionSymbolsPresent(TypeCheckError):
    def __init__(self, symbols, span=None):
        names = ", ".join(sorted(symbols))
        super().__init__(
            "E004",
            f"function symbols are not supported (Herbrand universe would be infinite): {names}",
            span,
        )
        self.symbols = dict(symbols)


class CapExceeded(HolError):
    """Raised instead of silently truncating a semantic domain."""

    def __init__(self, type_, flavor, estimate, cap):
        super().__init__(
            f"domain of type {type_} ({flavor}) exceeds the cap of {cap} elements "
            f"(estimated size {estimate})"
        )
        self.type = type_
        self.flavor = flavor
        self.estimate = estimate
        self.cap = cap


class NotChain(ValueError):
    pass


class NotReliable(HolError):
    pass


class ContractViolation(HolError):
    """An invariant guaranteed by the theory failed; indicates a bug, not bad input."""


class NotPropositional(HolError):
    pass


class NotNormalForm(HolError):
    pass
