from __future__ import annotations


class SolitonLibError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SolitonLibError, ValueError):
    pass


class SeriesConvergenceError(SolitonLibError, ArithmeticError):
    pass


class IntegratorValidationError(SolitonLibError, ArithmeticError):
    pass


class SolitonValidationError(SolitonLibError, ArithmeticError):
    pass


class PolygonError(SolitonLibError, ValueError):
    pass


class JordanSpecError(SolitonLibError, ValueError):
    pass


class PresetError(SolitonLibError, KeyError):
    def __str__(self) -> str:
        # KeyError quotes its message; keep CLI output readable.
        return str(self.args[0]) if self.args else ""


class CsvFormatError(SolitonLibError, ValueError):
    pass
