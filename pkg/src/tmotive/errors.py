"""Exception types shared across the package."""


class TmotiveError(Exception):
    """Base class for all errors raised by this package."""


class FieldDivisionError(TmotiveError, ZeroDivisionError):
    """Division by zero in the coefficient field."""


class ReductionOverflowError(TmotiveError):
    """A fraction normalization exceeded the configured work budget.

    Only reachable on inputs far outside desk scale; raised instead of
    silently returning an unreduced (non-canonical) element.
    """


class AmbiguousZeroError(TmotiveError):
    """A truncated series is indistinguishable from zero at its precision."""

    def __init__(self, bound, msg=None):
        self.bound = bound
        super().__init__(msg or f"element indistinguishable from 0 below sigma^{bound}")


class NotAUnitError(TmotiveError):
    """Inversion attempted on a non-unit of the finite quotient ring."""


class AmbiguousValuationError(TmotiveError):
    """A coefficient's valuation is not known at the current precision."""

    def __init__(self, index, bound):
        self.index = index
        self.bound = bound
        super().__init__(
            f"coefficient of t^{index} indistinguishable from 0 below sigma^{bound}"
        )


class PolyDivisionError(TmotiveError):
    """Polynomial division by the zero polynomial."""


class SingleEdgeError(TmotiveError):
    """Newton polygon has a single edge; nothing to split."""


class PrecisionExhaustedError(TmotiveError):
    """A computation could not be certified at the allowed precision."""

    def __init__(self, msg, restart_hint=None):
        self.restart_hint = restart_hint
        if restart_hint is not None:
            msg = f"{msg} (retry with precision >= {restart_hint})"
        super().__init__(msg)


class NotATModuleError(TmotiveError):
    """The constant matrix fails the nilpotency requirement."""

    def __init__(self, msg, witness=None):
        self.witness = witness
        super().__init__(msg)


class InputSyntaxError(TmotiveError):
    """Malformed input document or entry expression."""

    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            msg = f"{where}: {msg}"
        super().__init__(msg)
