"""Exception types raised across the treaty laboratory"""

from typing import Optional


class TreatyLabError(ValueError):
    """Base class; subclasses ValueError so plain `except ValueError` still works"""


class DomainError(TreatyLabError):
    """Argument lies outside the domain of an operation"""


class InsufficientSampleError(TreatyLabError):
    """Fewer observations than requested order statistics (N(t) < max(p, q))"""

    def __init__(self, needed: int, available: int):
        self.needed = int(needed)
        self.available = int(available)
        super().__init__(
            f"need {self.needed} order statistics, sample has {self.available}"
        )


class DegenerateSampleError(TreatyLabError):
    """Sample too small or without variance"""


class UnsupportedDependenceError(TreatyLabError):
    """Limit law H is not a product distribution"""


class WrongMdaError(TreatyLabError):
    """Marginal belongs to a different max-domain of attraction"""


class ConfigError(TreatyLabError):
    """
    Experiment config could not be parsed or validated.

    Args:
        message: Human readable diagnostic
        key: Dotted config key at fault, if known
        line: 1-based line number, if known
    """

    def __init__(self, message: str, key: Optional[str] = None,
                 line: Optional[int] = None):
        self.key = key
        self.line = line
        prefix = ""
        if key:
            prefix += f"[{key}] "
        if line is not None:
            prefix += f"(line {line}) "
        super().__init__(prefix + message)
