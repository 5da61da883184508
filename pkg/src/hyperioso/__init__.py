"""Fourier analysis, isoperimetry and junta extraction for Boolean functions on the hypercube."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BooleanFunction,
    FourierSpectrum,
    RealPointFunction,
    inner_product,
    lp_norm,
    mean,
    spectrum,
    variance,
    wht_forward,
    wht_inverse,
)
from .errors import (  # noqa: E402
    BudgetError,
    ConfigError,
    DegenerateCorpusError,
    DimensionError,
    HyperiosoError,
    RestrictionError,
)
from .families import FamilySpec, generate, tribes  # noqa: E402
from .geometry import (  # noqa: E402
    EdgeColoring,
    influence,
    sensitivity,
    sensitivity_moment,
    sensitivity_profile,
    talagrand_boundary,
    talagrand_colored,
    total_influence,
)
from .junta import JuntaParams, JuntaResult, extract_junta, nearest_junta  # noqa: E402
from .restrictions import Restriction, restrict, sample_restriction  # noqa: E402
from .spectral import (  # noqa: E402
    NoiseVector,
    level_weights,
    noise_mismatch,
    noise_stability,
    noisy_influence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
