"""Radial eigensolver for -Laplacian + V(r) in d dimensions.

The reduced radial function u(r) = r^((d-1)/2) R(r) obeys

    -u'' + [V(r) + Lambda (Lambda + 1) / r^2] u = E u,   Lambda = l + (d - 3) / 2,

and is tracked through its Pruefer angle theta (u = rho sin theta,
u' = rho cos theta):

    theta' = cos^2 theta + (E - V_eff(r)) sin^2 theta.

theta never overflows and increases through every zero of u, so
floor(theta(r_max) / pi) is the Sturm node count. Eigenvalues are bracketed
by bisection on that count and refined with Brent's method on the mismatch
between the outward angle and the inward (decaying-tail) angle at the outer
turning point.

In one dimension the even states are the Lambda = -1 class (u'(0) = 0) and
the odd states the Lambda = 0 class (u(0) = 0); the global index n
interleaves them.
"""

from __future__ import annotations

import asyncio
import logging
import math
from collections.abc import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .errors import (
    DomainError,
    ExponentTooLargeError,
    InputValidationError,
    NonConfiningPotentialError,
    SolverConvergenceError,
    UnsupportedStateError,
)
from .logger import WorkbenchLogger
from .models import PotentialSpec, PotentialTerm, SolverConfig, StateIndex
from .results import SolveResult

_LOGGER = WorkbenchLogger(name="polybound.radial_solver")

# Series start point for singular origins, as a fraction of r_max.
_R0_FRACTION = 1e-6
_R_MAX_GROWTH = 1.25
_MAX_R_MAX_GROWTHS = 60
_TURNING_SCAN_RATIO = 0.95
_TURNING_SCAN_STEPS = 400
_BRENT_RTOL = 1e-15


class _RadialProblem:
    """Reduced radial equation for one symmetry class on [r0, r_max]."""

    def __init__(
        self,
        pot: PotentialSpec,
        state: StateIndex,
        r_max: float,
        rtol: float,
    ) -> None:
        self.terms: tuple[tuple[float, float], ...] = tuple(
            (term.a, term.q) for term in pot.terms
        )
        self.lam = state.centrifugal_lambda
        self.centrifugal = self.lam * (self.lam + 1.0)
        self.k = state.class_index
        self.r_max = r_max
        self.rtol = rtol
        self.regular_origin = self.centrifugal == 0.0 and all(q > 0 for _, q in self.terms)
        self.r0 = 0.0 if self.regular_origin else _R0_FRACTION * r_max

    def v_eff(self, r: float) -> float:
        v = 0.0
        for a, q in self.terms:
            v += a * r**q
        if self.centrifugal:
            v += self.centrifugal / (r * r)
        return v

    def _rhs(self, r: float, y: np.ndarray, energy: float) -> list[float]:
        s = math.sin(y[0])
        c = math.cos(y[0])
        return [c * c + (energy - self.v_eff(r)) * s * s]

    def initial_angle(self, energy: float) -> float:
        """Pruefer angle of the regular solution at r0."""
        if self.regular_origin:
            return 0.0 if self.lam == 0.0 else 0.5 * math.pi

        # u = r^s (1 + sum_k c_k r^k): E enters at k = 2, a r^q at k = q + 2.
        s = self.lam + 1.0
        r0 = self.r0
        value = 1.0
        slope = 0.0
        for k, coeff in [(2.0, -energy), *((q + 2.0, a) for a, q in self.terms)]:
            c = coeff / (k * (2.0 * s + k - 1.0))
            value += c * r0**k
            slope += k * c * r0 ** (k - 1.0)
        log_derivative = s / r0 + slope / value
        return math.atan2(1.0, log_derivative)

    def _integrate(self, energy: float, start: float, stop: float, theta: float) -> float:
        sol = solve_ivp(
            self._rhs,
            (start, stop),
            [theta],
            method="DOP853",
            rtol=self.rtol,
            atol=self.rtol,
            args=(energy,),
        )
        if not sol.success:
            raise SolverConvergenceError(
                f"integration failed: {sol.message}",
                context={"energy": energy, "span": [start, stop]},
            )
        return float(sol.y[0, -1])

    def outward_angle(self, energy: float, r_end: float) -> float:
        return self._integrate(energy, self.r0, r_end, self.initial_angle(energy))

    def inward_angle(self, energy: float, r_end: float) -> float:
        kappa = math.sqrt(max(self.v_eff(self.r_max) - energy, 0.0))
        tail = math.atan(1.0 / kappa) if kappa > 0 else 0.5 * math.pi
        return self._integrate(energy, self.r_max, r_end, self.k * math.pi - tail)

    def count_nodes(self, energy: float) -> int:
        """Zeros of the regular solution on (r0, r_max)."""
        return int(math.floor(self.outward_angle(energy, self.r_max) / math.pi))

    def mismatch(self, energy: float, r_match: float) -> float:
        """Outward minus inward angle; strictly increasing in energy."""
        return self.outward_angle(energy, r_match) - self.inward_angle(energy, r_match)

    def outer_turning_point(self, energy: float) -> float | None:
        g = lambda r: self.v_eff(r) - energy  # noqa: E731
        outer = self.r_max
        if g(outer) <= 0:
            return None
        for _ in range(_TURNING_SCAN_STEPS):
            inner = outer * _TURNING_SCAN_RATIO
            if g(inner) < 0:
                return float(brentq(g, inner, outer))
            outer = inner
        return None

    def tail_exponent(self, energy: float) -> float:
        """WKB decay exponent from the outer turning point to r_max."""
        r_turn = self.outer_turning_point(energy)
        if r_turn is None:
            return 0.0
        value, _ = quad(
            lambda r: math.sqrt(max(self.v_eff(r) - energy, 0.0)),
            r_turn,
            self.r_max,
            limit=200,
        )
        return float(value)


def _check_problem(pot: PotentialSpec, state: StateIndex, cfg: SolverConfig) -> None:
    if pot.d != state.d:
        raise InputValidationError(
            f"potential dimension d={pot.d} does not match state {state.label()}",
            context={"potential_d": pot.d, "state_d": state.d},
        )
    if not pot.confining:
        raise NonConfiningPotentialError(
            f"no confining term: {pot.describe()} has no positive power with a positive coupling",
            context={"potential": pot.describe()},
        )
    if pot.max_exponent > cfg.max_exponent:
        raise ExponentTooLargeError(
            f"exponent q={pot.max_exponent:g} exceeds the solver cap {cfg.max_exponent:g}",
            context={"q": pot.max_exponent, "max_exponent": cfg.max_exponent},
        )
    if state.d == 1 and any(q < 0 for q in pot.exponents):
        raise UnsupportedStateError(
            "Coulomb terms are not supported in d=1",
            context={"potential": pot.describe()},
        )


def _margin_radius(pot: PotentialSpec, energy: float, margin: float) -> float:
    """Radius where V(r) - energy reaches ``margin`` (V is increasing)."""
    excess = lambda r: pot.value(r) - energy - margin  # noqa: E731
    r = 1.0
    for _ in range(2000):
        if excess(r) < 0:
            if excess(2.0 * r) >= 0:
                return float(brentq(excess, r, 2.0 * r))
            r *= 2.0
        else:
            if excess(0.5 * r) < 0:
                return float(brentq(excess, 0.5 * r, r))
            r *= 0.5
    raise SolverConvergenceError(
        "could not place the truncation radius",
        context={"potential": pot.describe(), "energy": energy, "margin": margin},
    )


def _problem_for(
    pot: PotentialSpec,
    state: StateIndex,
    energy: float,
    cfg: SolverConfig,
) -> _RadialProblem:
    """Truncated problem whose tail is negligible for every E <= ``energy``."""
    if cfg.r_max is not None:
        problem = _RadialProblem(pot, state, cfg.r_max, cfg.ode_rtol)
        exponent = problem.tail_exponent(energy)
        if exponent < cfg.tail_exponent:
            _LOGGER.event(
                "r_max.fixed_short_tail",
                level=logging.WARNING,
                r_max=cfg.r_max,
                tail_exponent=round(exponent, 3),
            )
        return problem

    r_max = _margin_radius(pot, energy, cfg.r_max_margin)
    for _ in range(_MAX_R_MAX_GROWTHS):
        problem = _RadialProblem(pot, state, r_max, cfg.ode_rtol)
        exponent = problem.tail_exponent(energy)
        if exponent >= cfg.tail_exponent:
            return problem
        _LOGGER.event("r_max.enlarged", r_max=r_max, tail_exponent=round(exponent, 3))
        r_max *= _R_MAX_GROWTH
    raise SolverConvergenceError(
        "tail contamination persists after enlarging r_max",
        context={"r_max": r_max, "energy": energy},
    )


def _energy_guess(pot: PotentialSpec, state: StateIndex) -> float:
    """Rough semiclassical level used to seed the upper bracket."""
    p = max(2 * state.class_index + state.effective_l + 0.5 * max(state.d, 1) - 2.0, 0.5)
    r = np.logspace(-4.0, 4.0, 2001)
    with np.errstate(over="ignore", invalid="ignore"):
        values = 1.0 / r**2 + sum(term.a * (p * r) ** term.q for term in pot.terms)
    finite = values[np.isfinite(values)]
    return max(float(finite.min()), 1.0) if finite.size else 1.0


def _bracket_failure(message: str, bracket: tuple[float, float], **context: object) -> SolverConvergenceError:
    return SolverConvergenceError(message, context={"bracket": list(bracket), **context})


def solve(
    pot: PotentialSpec,
    state: StateIndex,
    cfg: SolverConfig | None = None,
) -> SolveResult:
    """Compute the (n, l, d) eigenvalue of -Laplacian + V with its solve record.

    Raises:
        NonConfiningPotentialError: If the highest-exponent coupling is not positive.
        ExponentTooLargeError: If an exponent exceeds ``cfg.max_exponent``.
        SolverConvergenceError: If the eigenvalue cannot be bracketed or
            refined within ``cfg.max_iter``; context carries the last bracket.
    """
    cfg = cfg or SolverConfig()
    _check_problem(pot, state, cfg)
    k = state.class_index
    iterations = 0

    # The upper end of the bracket fixes the truncation radius.
    e_hi = 1.2 * _energy_guess(pot, state) + 1.0
    while True:
        problem = _problem_for(pot, state, e_hi, cfg)
        n_hi = problem.count_nodes(e_hi)
        iterations += 1
        if n_hi >= k:
            break
        if iterations >= cfg.max_iter:
            raise _bracket_failure("could not bracket the eigenvalue from above", (float("nan"), e_hi))
        e_hi *= 2.0

    e_lo = 0.0 if all(a >= 0 for a in pot.couplings) else -1.0
    n_lo = problem.count_nodes(e_lo)
    while n_lo >= k:
        iterations += 1
        if iterations >= cfg.max_iter:
            raise _bracket_failure("could not bracket the eigenvalue from below", (e_lo, e_hi))
        e_lo = 2.0 * e_lo - 1.0
        n_lo = problem.count_nodes(e_lo)

    while not (n_lo == k - 1 and n_hi == k):
        iterations += 1
        if iterations >= cfg.max_iter:
            raise _bracket_failure(
                "node bisection did not isolate the eigenvalue",
                (e_lo, e_hi),
                nodes=[n_lo, n_hi],
            )
        mid = 0.5 * (e_lo + e_hi)
        n_mid = problem.count_nodes(mid)
        if n_mid >= k:
            e_hi, n_hi = mid, n_mid
        else:
            e_lo, n_lo = mid, n_mid
    _LOGGER.event("solver.bracket", state=state.label(), e_lo=e_lo, e_hi=e_hi, r_max=problem.r_max)

    r_match = problem.outer_turning_point(0.5 * (e_lo + e_hi)) or 0.5 * problem.r_max
    f_lo = problem.mismatch(e_lo, r_match)
    f_hi = problem.mismatch(e_hi, r_match)
    if not (f_lo < 0.0 < f_hi):
        raise _bracket_failure(
            "matching condition does not change sign across the node bracket",
            (e_lo, e_hi),
            mismatch=[f_lo, f_hi],
        )
    try:
        energy, info = brentq(
            problem.mismatch,
            e_lo,
            e_hi,
            args=(r_match,),
            xtol=1e-2 * cfg.abs_tol,
            rtol=_BRENT_RTOL,
            maxiter=cfg.max_iter,
            full_output=True,
        )
    except RuntimeError as exc:
        raise _bracket_failure("Brent refinement did not converge", (e_lo, e_hi)) from exc
    iterations += info.iterations

    # Sturm certificate: exactly k - 1 levels of this class lie below.
    delta = 10.0 * cfg.abs_tol
    below = problem.count_nodes(energy - delta)
    above = problem.count_nodes(energy + delta)
    if below != k - 1 or above != k:
        raise _bracket_failure(
            "node certificate failed for the refined eigenvalue",
            (energy - delta, energy + delta),
            nodes=[below, above],
            expected=[k - 1, k],
        )

    return SolveResult(
        energy=float(energy),
        nodes=state.n - 1,
        state=state,
        r_max=problem.r_max,
        r_match=r_match,
        iterations=iterations,
        config=cfg.summary(),
    )


def eigenvalue(
    pot: PotentialSpec,
    state: StateIndex,
    cfg: SolverConfig | None = None,
) -> float:
    """Discrete eigenvalue E_{n l}^{(d)} of -Laplacian + V, within ``cfg.abs_tol``."""
    return solve(pot, state, cfg).energy


async def aeigenvalue(
    pot: PotentialSpec,
    state: StateIndex,
    cfg: SolverConfig | None = None,
) -> float:
    """Async twin of :func:`eigenvalue` (runs in a worker thread)."""
    return await asyncio.to_thread(eigenvalue, pot, state, cfg)


def count_nodes(
    pot: PotentialSpec,
    state: StateIndex,
    energy: float,
    cfg: SolverConfig | None = None,
) -> int:
    """Number of levels of the state's symmetry class below ``energy``."""
    cfg = cfg or SolverConfig()
    _check_problem(pot, state, cfg)
    problem = _problem_for(pot, state, max(energy, 1.0), cfg)
    return problem.count_nodes(energy)


def pure_power_spec(q: float, v: float, d: int) -> PotentialSpec:
    """Single-term spec ``v * r**q`` with the extension flags it needs."""
    return PotentialSpec(
        d=d,
        terms=(PotentialTerm(a=v, q=q),),
        allow_coulomb=q == -1.0,
        allow_fractional=0 < q < 2,
    )


def pure_power_eigenvalue(
    q: float,
    v: float,
    state: StateIndex,
    cfg: SolverConfig | None = None,
) -> float:
    """Eigenvalue epsilon_{n l}^{(d)}(q; v) of -Laplacian + v r^q.

    For q = -1 (v < 0) the hydrogenic closed form -v^2 / (4 P(-1)^2) is
    returned; every q > 0 goes through the numerical solver.

    Raises:
        DomainError: If q or v are outside the admissible range.
    """
    if q < -1.0 or q == 0.0:
        raise DomainError(f"exponent q={q:g} must be >= -1 and non-zero", context={"q": q})
    if q == -1.0:
        if v >= 0:
            raise DomainError(
                "a repulsive or vanishing Coulomb term has no bound states",
                context={"q": q, "v": v},
            )
        from .pnumbers import p_coulomb

        return -(v * v) / (4.0 * p_coulomb(state) ** 2)
    if q < 0:
        raise DomainError(f"exponent q={q:g} is not supported", context={"q": q})
    if v <= 0:
        raise DomainError(f"coupling v={v:g} must be > 0 for q > 0", context={"q": q, "v": v})
    return eigenvalue(pure_power_spec(q, v, state.d), state, cfg)


def energy_function(pot: PotentialSpec, cfg: SolverConfig | None = None) -> Callable[[StateIndex], float]:
    """Bind a potential and config, returning ``state -> eigenvalue``."""
    return lambda state: eigenvalue(pot, state, cfg)
