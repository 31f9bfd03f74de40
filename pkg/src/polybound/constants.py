"""Constants and defaults for the polybound package."""

from __future__ import annotations

from typing import Literal

PSource = Literal["closed_form", "numeric", "gamma_lower", "gamma_upper"]

BoundKind = Literal["lower", "upper", "mixed", "gamma-lower", "gamma-upper"]

Parity = Literal["even", "odd"]

DEFAULT_ABS_TOL = 1e-9
DEFAULT_ODE_RTOL = 1e-12
DEFAULT_R_MAX_MARGIN = 50.0
DEFAULT_TAIL_EXPONENT = 15.0
DEFAULT_MAX_ITER = 200
DEFAULT_MAX_EXPONENT = 20.0

# Cache keys round q to this many decimals.
CACHE_Q_DECIMALS = 9
DEFAULT_CACHE_FILENAME = ".polybound-pcache.json"
CACHE_ENV_VAR = "POLYBOUND_CACHE"
LOG_LEVEL_ENV_VAR = "POLYBOUND_LOG_LEVEL"

# Significant digits used for JSON output.
JSON_SIGNIFICANT_DIGITS = 10

# Leading strong-coupling coefficients K0 of the pure r^{2m} oscillator,
# i.e. the ground energy of -d2/dx2 + x^{2m} in one dimension.
STRONG_COUPLING_K0: dict[int, float] = {
    2: 1.06036209,
    3: 1.14480245,
    4: 1.22582011,
}

NON_CERTIFIED_CAVEAT = (
    "potential has a Coulomb or fractional (q < 2) term: the min/max-exponent "
    "P assignments are applied as approximations, not certified bounds"
)
