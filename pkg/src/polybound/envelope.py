"""Envelope bounds: minimize 1/r^2 + sum_i a_i (P_i r)^{q_i} over r.

With P_i = P(q_1) on every term the minimum is a lower bound on E_{n l}^{(d)},
with P_i = P(q_k) an upper bound (P is increasing in q). Assigning each term
its own P(q_i) gives the mixed approximation, which is a lower bound for the
bottom of each angular-momentum subspace (n = 1) and exact for a single term.
"""

from __future__ import annotations

import asyncio
import math
from collections.abc import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .constants import NON_CERTIFIED_CAVEAT, PSource
from .errors import DomainError, InputValidationError, NonConfiningPotentialError
from .logger import WorkbenchLogger
from .models import PotentialSpec, SolverConfig, StateIndex
from .pnumbers import PCache, p_gamma_lower, p_gamma_upper, p_lookup
from .radial_solver import eigenvalue
from .results import BoundReport, EnvelopeTerm

_LOGGER = WorkbenchLogger(name="polybound.envelope")

_SCAN_X = np.logspace(-6.0, 6.0, 241)
_ROOT_TOL = 1e-15
_MAX_DOUBLINGS = 2000


def objective(r: float, terms: Sequence[EnvelopeTerm]) -> float:
    """F(r) = 1/r^2 + sum a (P r)^q."""
    if not r > 0:
        raise DomainError(f"objective needs r > 0, got r={r!r}", context={"r": r})
    return 1.0 / (r * r) + sum(term.a * (term.P * r) ** term.q for term in terms)


def kinetic_objective(r: float, p: float, pot: PotentialSpec) -> float:
    """(P/r)^2 + V(r): the same minimum as ``objective`` with one shared P."""
    if not r > 0:
        raise DomainError(f"objective needs r > 0, got r={r!r}", context={"r": r})
    return (p / r) ** 2 + pot.value(r)


def _check_confining(terms: Sequence[EnvelopeTerm]) -> None:
    if not terms:
        raise NonConfiningPotentialError("no confining term: empty term list")
    if not any(term.a > 0 and term.q > 0 for term in terms):
        raise NonConfiningPotentialError(
            "no confining term: no positive power has a positive coupling",
            context={"terms": [term.dict() for term in terms]},
        )
    for term in terms:
        if not term.P > 0:
            raise DomainError(f"P must be > 0, got {term.P!r}", context=term.dict())


def _stationarity(x: float, terms: Sequence[EnvelopeTerm]) -> float:
    # x^2 dF/dx with x = r^2; increasing in x for every admissible term.
    return -1.0 + sum(term.a * term.P**term.q * 0.5 * term.q * x ** (0.5 * term.q + 1.0) for term in terms)


def _bracket_stationary(terms: Sequence[EnvelopeTerm]) -> tuple[float, float]:
    x = 1.0
    if _stationarity(x, terms) < 0:
        for _ in range(_MAX_DOUBLINGS):
            if _stationarity(2.0 * x, terms) >= 0:
                return x, 2.0 * x
            x *= 2.0
    else:
        for _ in range(_MAX_DOUBLINGS):
            if _stationarity(0.5 * x, terms) < 0:
                return 0.5 * x, x
            x *= 0.5
    raise NonConfiningPotentialError("objective has no interior minimum", context={"x": x})


def _scan_minimum(terms: Sequence[EnvelopeTerm]) -> float:
    """Golden-section minimum in x after a logarithmic scan."""
    f = lambda x: objective(math.sqrt(x), terms)  # noqa: E731
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.array([f(x) for x in _SCAN_X])
    index = int(np.nanargmin(values))
    if index == 0 or index == len(_SCAN_X) - 1:
        lo, hi = _bracket_stationary(terms)
        return float(brentq(_stationarity, lo, hi, args=(terms,), xtol=1e-300, rtol=_ROOT_TOL))

    lo, mid, hi = _SCAN_X[index - 1], _SCAN_X[index], _SCAN_X[index + 1]
    result = minimize_scalar(f, bracket=(lo, mid, hi), method="golden", tol=1e-10)
    x = float(result.x)
    if _stationarity(lo, terms) < 0 < _stationarity(hi, terms):
        x = float(brentq(_stationarity, lo, hi, args=(terms,), xtol=1e-300, rtol=_ROOT_TOL))
    return x


def minimize(terms: Sequence[EnvelopeTerm]) -> tuple[float, float]:
    """Global minimum of ``objective`` and its location, as (value, r_star).

    Raises:
        NonConfiningPotentialError: If no term confines at large r.
    """
    _check_confining(terms)
    if any(term.q < 0 for term in terms):
        x = _scan_minimum(terms)
    else:
        lo, hi = _bracket_stationary(terms)
        x = float(brentq(_stationarity, lo, hi, args=(terms,), xtol=1e-300, rtol=_ROOT_TOL))
    r_star = math.sqrt(x)
    return objective(r_star, terms), r_star


def envelope_terms(
    pot: PotentialSpec,
    ps: Sequence[float],
    sources: Sequence[PSource],
) -> list[EnvelopeTerm]:
    """Pair each term of ``pot`` with its assigned P."""
    if not (len(ps) == len(sources) == len(pot.terms)):
        raise InputValidationError(
            "one P and one source are needed per potential term",
            context={"terms": len(pot.terms), "ps": len(ps), "sources": len(sources)},
        )
    return [
        EnvelopeTerm(a=term.a, q=term.q, P=p, p_source=source)
        for term, p, source in zip(pot.terms, ps, sources)
    ]


def bounds_report(
    pot: PotentialSpec,
    state: StateIndex,
    cfg: SolverConfig | None = None,
    cache: PCache | None = None,
    *,
    with_exact: bool = False,
) -> BoundReport:
    """Lower, upper and mixed envelope values for one state.

    Gamma-estimate columns are filled for (n=1, l=0) only. With
    ``with_exact`` the radial solver value is attached.
    """
    if pot.d != state.d:
        raise InputValidationError(
            f"potential dimension d={pot.d} does not match state {state.label()}",
            context={"potential_d": pot.d, "state_d": state.d},
        )
    cfg = cfg or SolverConfig()
    records = [p_lookup(q, state, cfg, cache) for q in pot.exponents]
    k = len(records)
    notes: list[str] = []

    first, last = records[0], records[-1]
    lower, r_lower = minimize(envelope_terms(pot, [first.P] * k, [first.source] * k))
    upper, r_upper = minimize(envelope_terms(pot, [last.P] * k, [last.source] * k))
    mixed, r_mixed = minimize(
        envelope_terms(pot, [rec.P for rec in records], [rec.source for rec in records])
    )
    r_star = {"lower_A": r_lower, "upper_A": r_upper, "mixed_B": r_mixed}

    gamma_lower = gamma_upper = None
    if state.n == 1 and state.l == 0:
        if all(q > 0 for q in pot.exponents):
            gamma_lower, r_star["gamma_lower_B"] = minimize(
                envelope_terms(
                    pot,
                    [p_gamma_lower(q, state.d) for q in pot.exponents],
                    ["gamma_lower"] * k,
                )
            )
            gamma_upper, r_star["gamma_upper_B"] = minimize(
                envelope_terms(
                    pot,
                    [p_gamma_upper(q, state.d) for q in pot.exponents],
                    ["gamma_upper"] * k,
                )
            )
        else:
            notes.append("Gamma estimates are undefined for a Coulomb term")

    certified = pot.certified
    if not certified:
        notes.append(NON_CERTIFIED_CAVEAT)
    if state.n > 1:
        notes.append("mixed_B is an approximation for n >= 2, not a bound")

    exact = eigenvalue(pot, state, cfg) if with_exact else None
    report = BoundReport(
        state=state,
        lower_A=lower,
        upper_A=upper,
        mixed_B=mixed,
        r_star=r_star,
        gamma_lower_B=gamma_lower,
        gamma_upper_B=gamma_upper,
        exact=exact,
        certified=certified,
        mixed_is_bound=certified and state.n == 1,
        notes=notes,
    )
    _LOGGER.event(
        "envelope.report",
        state=state.label(),
        lower_A=lower,
        upper_A=upper,
        mixed_B=mixed,
        exact=exact,
    )
    return report


async def abounds_report(
    pot: PotentialSpec,
    state: StateIndex,
    cfg: SolverConfig | None = None,
    cache: PCache | None = None,
    *,
    with_exact: bool = False,
) -> BoundReport:
    """Async twin of :func:`bounds_report`."""
    return await asyncio.to_thread(bounds_report, pot, state, cfg, cache, with_exact=with_exact)


def fractional_bounds(
    pot: PotentialSpec,
    state: StateIndex,
    cfg: SolverConfig | None = None,
    cache: PCache | None = None,
    *,
    with_exact: bool = False,
) -> BoundReport:
    """Extremal-exponent envelope values for Coulomb or fractional potentials.

    The same recipe as :func:`bounds_report`, reported as non-certified.
    """
    if pot.certified:
        raise InputValidationError(
            "potential has no Coulomb or fractional term; use bounds_report",
            context={"potential": pot.describe()},
        )
    return bounds_report(pot, state, cfg, cache, with_exact=with_exact)


def even_polynomial(couplings: Sequence[float], d: int = 3) -> PotentialSpec:
    """sum_j g_j r^{2j} for j = 1..J; zero couplings are dropped."""
    pairs = [(g, 2.0 * j) for j, g in enumerate(couplings, start=1) if g != 0]
    if not pairs:
        raise NonConfiningPotentialError("no confining term: every coupling is zero")
    return PotentialSpec.from_pairs(pairs, d=d)
