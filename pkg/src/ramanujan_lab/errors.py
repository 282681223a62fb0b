"""Exception types raised across the package."""


class RamanujanLabError(Exception):
    pass


class ZeroDivisor(RamanujanLabError, ZeroDivisionError):
    """A factor of a Pochhammer product (or a denominator term) vanished."""


class NotPIntegral(RamanujanLabError, ValueError):
    pass


class ParseError(RamanujanLabError, ValueError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class ValidationError(RamanujanLabError, ValueError):
    def __init__(self, violations, line=None):
        self.violations = list(violations)
        self.line = line
        head = f"line {line}: " if line is not None else ""
        super().__init__(head + "; ".join(str(v) for v in self.violations))


class DivergentSeries(RamanujanLabError, ValueError):
    pass


class AccelerationFailure(RamanujanLabError, ArithmeticError):
    pass


class SingularSystem(RamanujanLabError, ArithmeticError):
    pass


class ReconstructionFailure(RamanujanLabError, ArithmeticError):
    pass


class PoleError(RamanujanLabError, ValueError):
    pass


class UnknownIdentity(RamanujanLabError, KeyError):
    pass


class DegenerateInput(RamanujanLabError, ValueError):
    pass


class FitNotFound(RamanujanLabError, LookupError):
    pass
