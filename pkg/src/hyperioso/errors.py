"""Exception hierarchy shared by every module."""


class HyperiosoError(Exception):
    pass


class ConfigError(HyperiosoError, ValueError):
    """A parameter is outside its documented range."""


class DimensionError(HyperiosoError, ValueError):
    """Operands live on hypercubes of different dimension."""


class RestrictionError(HyperiosoError, ValueError):
    """A restriction's fixed set and assignment disagree."""


class BudgetError(HyperiosoError):
    """A brute-force computation would exceed its resource guard."""


class DegenerateCorpusError(HyperiosoError):
    """Every function in a corpus was degenerate for a check."""
