"""Closed-form envelope algebra for H = -Laplacian + r^2 + lambda r^{2m}.

Minimizing 1/r^2 + alpha r^2 + lambda beta r^{2m} (alpha = P(2)^2,
beta = P(2m)^{2m}) gives lambda as an explicit function of the energy:

    lambda beta = 2^m alpha^m (m-1)^(m-1) / (m+1) * (delta - E) / (mE - delta)^m,
    delta = sqrt(m^2 E^2 - 4 alpha (m^2 - 1)),

increasing on E >= 2 sqrt(alpha), so E(lambda) follows from a bracketed root.
Both differences are evaluated in cancellation-free form.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy.optimize import brentq

from .constants import STRONG_COUPLING_K0, BoundKind
from .errors import DomainError, InputValidationError, RootBracketError, UnsupportedStateError
from .logger import WorkbenchLogger
from .models import PotentialSpec, SolverConfig, StateIndex
from .pnumbers import PCache, p_gamma_lower, p_gamma_upper, p_lookup
from .radial_solver import eigenvalue
from .results import SweepRow

_LOGGER = WorkbenchLogger(name="polybound.anharmonic")

_ROOT_RTOL = 1e-15
_MAX_WIDENINGS = 200
_MONOTONE_GRID = 64


def _delta_terms(energy: float, m: int, alpha: float) -> tuple[float, float]:
    """(delta - E, mE - delta) without cancellation."""
    mm1 = m * m - 1.0
    delta = math.sqrt(max(m * m * energy * energy - 4.0 * alpha * mm1, 0.0))
    return (
        mm1 * (energy * energy - 4.0 * alpha) / (delta + energy),
        4.0 * alpha * mm1 / (m * energy + delta),
    )


def _lambda_beta(energy: float, m: int, alpha: float) -> float:
    delta_minus_e, m_e_minus_delta = _delta_terms(energy, m, alpha)
    return (
        (2.0 * alpha) ** m
        * (m - 1.0) ** (m - 1)
        / (m + 1.0)
        * delta_minus_e
        / m_e_minus_delta**m
    )


class AnharmonicModel(BaseModel):
    """P-number inputs of the closed-form anharmonic relation.

    ``alpha`` stands in for P(2)^2 and ``beta`` for P(2m)^{2m}; which P's are
    used decides whether E(lambda) is a lower bound, an upper bound or the
    mixed approximation.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    m: int = Field(ge=2)
    lam: float = Field(default=0.0, ge=0)
    alpha: float = Field(gt=0)
    beta: float = Field(gt=0)
    d: int = Field(default=1, ge=1)
    state: StateIndex | None = None

    @model_validator(mode="after")
    def _validate_model(self) -> AnharmonicModel:
        if self.state is not None and self.state.d != self.d:
            raise ValueError(f"state dimension {self.state.d} does not match d={self.d}")
        e0 = self.harmonic_energy
        grid = [e0 + 50.0 * (i / _MONOTONE_GRID) ** 2 for i in range(1, _MONOTONE_GRID + 1)]
        values = [_lambda_beta(e, self.m, self.alpha) for e in grid]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("lambda(E) is not increasing for these parameters")
        return self

    @property
    def harmonic_energy(self) -> float:
        """E at lambda = 0, i.e. 2 sqrt(alpha)."""
        return 2.0 * math.sqrt(self.alpha)

    @classmethod
    def theorem(
        cls,
        kind: BoundKind,
        m: int,
        lam: float = 0.0,
        state: StateIndex | None = None,
        cfg: SolverConfig | None = None,
        cache: PCache | None = None,
    ) -> AnharmonicModel:
        """Model with (alpha, beta) chosen by the bound recipe ``kind``.

        lower: P(2) on both terms; upper: P(2m) on both; mixed: each term its
        own P; gamma-lower / gamma-upper: the Gamma estimates of P(2), P(2m)
        (ground state only).

        Raises:
            UnsupportedStateError: If a Gamma recipe is asked for an excited state.
            InputValidationError: If the parameters are invalid.
        """
        state = state or StateIndex(n=1, l=0, d=1)
        q = 2.0 * m
        if kind in ("gamma-lower", "gamma-upper"):
            if state.n != 1 or state.l != 0:
                raise UnsupportedStateError(
                    "Gamma P estimates apply to the ground state (n=1, l=0) only",
                    context={"kind": kind, "state": state.label()},
                )
            estimate = p_gamma_lower if kind == "gamma-lower" else p_gamma_upper
            p_low, p_high = estimate(2.0, state.d), estimate(q, state.d)
        elif kind in ("lower", "upper", "mixed"):
            p_two = p_lookup(2.0, state, cfg, cache).P
            p_top = p_lookup(q, state, cfg, cache).P
            p_low = p_top if kind == "upper" else p_two
            p_high = p_two if kind == "lower" else p_top
        else:
            raise InputValidationError(f"unknown bound kind {kind!r}", context={"kind": kind})
        try:
            return cls(m=m, lam=lam, alpha=p_low**2, beta=p_high**q, d=state.d, state=state)
        except ValidationError as exc:
            raise InputValidationError(
                f"invalid anharmonic model: {exc.errors()[0]['msg']}",
                context={"kind": kind, "m": m, "lam": lam},
                cause=exc,
            ) from exc


class FullParameterSet(BaseModel):
    """H = -omega Laplacian + a r^2 + b r^{2m} before scaling."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    omega: float = Field(gt=0)
    a: float = Field(gt=0)
    b: float = Field(gt=0)
    m: int = Field(ge=2)


def lambda_of_energy(energy: float, model: AnharmonicModel) -> float:
    """Coupling lambda whose envelope energy is ``energy``.

    Raises:
        DomainError: If energy < 2 sqrt(alpha).
    """
    e0 = model.harmonic_energy
    if energy < e0:
        raise DomainError(
            f"energy {energy:g} is below the harmonic value {e0:g}",
            context={"energy": energy, "harmonic_energy": e0},
        )
    return _lambda_beta(energy, model.m, model.alpha) / model.beta


def single_constant_lambda(energy: float, alpha: float, m: int) -> float:
    """lambda(E) when beta = alpha^m (one P on both terms)."""
    if alpha <= 0 or m < 2:
        raise DomainError("need alpha > 0 and m >= 2", context={"alpha": alpha, "m": m})
    if energy < 2.0 * math.sqrt(alpha):
        raise DomainError(
            f"energy {energy:g} is below the harmonic value {2.0 * math.sqrt(alpha):g}",
            context={"energy": energy, "alpha": alpha},
        )
    delta_minus_e, m_e_minus_delta = _delta_terms(energy, m, alpha)
    return 2.0**m * (m - 1.0) ** (m - 1) / (m + 1.0) * delta_minus_e / m_e_minus_delta**m


def _increasing_root(
    f: Callable[[float], float],
    lo: float,
    label: str,
    **context: object,
) -> float:
    """Root of an increasing f with f(lo) <= 0, widening [lo, lo + w]."""
    width = 1.0
    for _ in range(_MAX_WIDENINGS):
        hi = lo + width
        if f(hi) >= 0:
            try:
                return float(brentq(f, lo, hi, xtol=1e-300, rtol=_ROOT_RTOL, maxiter=500))
            except (RuntimeError, ValueError) as exc:
                raise RootBracketError(
                    f"{label}: Brent iteration failed",
                    context={"bracket": [lo, hi], **context},
                    cause=exc,
                ) from exc
        width *= 2.0
    raise RootBracketError(
        f"{label}: no sign change found",
        context={"bracket": [lo, lo + width], **context},
    )


def energy_of_lambda(lam: float, model: AnharmonicModel) -> float:
    """Envelope energy E(lambda), the inverse of :func:`lambda_of_energy`.

    Raises:
        DomainError: If lam < 0.
        RootBracketError: If the root cannot be bracketed.
    """
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam:g}", context={"lambda": lam})
    e0 = model.harmonic_energy
    if lam == 0:
        return e0
    target = lam * model.beta
    return _increasing_root(
        lambda e: _lambda_beta(e, model.m, model.alpha) - target,
        e0,
        "energy_of_lambda",
        lam=lam,
        m=model.m,
    )


def critical_radius_squared(energy: float, model: AnharmonicModel) -> float:
    """r^2 at which the envelope objective attains ``energy``: (mE - delta) / (2 alpha (m-1))."""
    if energy < model.harmonic_energy:
        raise DomainError(
            f"energy {energy:g} is below the harmonic value {model.harmonic_energy:g}",
            context={"energy": energy},
        )
    _, m_e_minus_delta = _delta_terms(energy, model.m, model.alpha)
    return m_e_minus_delta / (2.0 * model.alpha * (model.m - 1.0))


def ground_relation(energy: float, m: int, d: int) -> float:
    """lambda * beta for the ground state in d dimensions (alpha = (d/2)^2)."""
    return _lambda_beta(energy, m, 0.25 * d * d)


def printed_ground_relation(energy: float, m: int, d: int) -> float:
    """lambda * beta from the ground-state relation with prefactor 1/2^m.

    Agrees with :func:`ground_relation` at d = 1 and is smaller by d^{2m}
    otherwise.
    """
    if energy < d:
        raise DomainError(
            f"energy {energy:g} is below the harmonic value {d}",
            context={"energy": energy, "d": d},
        )
    if d > 1:
        _LOGGER.event(
            "anharmonic.printed_prefactor",
            level=logging.WARNING,
            d=d,
            m=m,
            missing_factor=float(d) ** (2 * m),
        )
    root = math.sqrt(m * m * (energy * energy - d * d) + d * d)
    return (
        0.5**m
        * (m - 1.0) ** (m - 1)
        / (m + 1.0)
        * (root - energy)
        / (m * energy - root) ** m
    )


def reduce_parameters(full: FullParameterSet) -> tuple[float, float]:
    """Map (omega, a, b) to (lambda, energy scale) with E = scale * E(1, 1, lambda)."""
    lam = full.b * full.omega ** ((full.m - 1) / 2.0) / full.a ** ((full.m + 1) / 2.0)
    return lam, math.sqrt(full.a * full.omega)


def bhattacharya_energy(lam: float, m: int, k0: float | None = None) -> float:
    """Root E >= 1 of E^{m+1} - E^{(m-1)(1 + 2/(m+2+lambda))} = K0^{m+1} lambda.

    ``k0`` defaults to the tabulated strong-coupling coefficient for m = 2, 3, 4.
    """
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam:g}", context={"lambda": lam})
    if k0 is None:
        if m not in STRONG_COUPLING_K0:
            raise InputValidationError(
                f"no default K0 for m={m}; pass k0 explicitly",
                context={"m": m, "known": sorted(STRONG_COUPLING_K0)},
            )
        k0 = STRONG_COUPLING_K0[m]
    if k0 <= 0:
        raise DomainError(f"K0 must be > 0, got {k0:g}", context={"k0": k0})
    if lam == 0:
        return 1.0
    power = (m - 1.0) * (1.0 + 2.0 / (m + 2.0 + lam))
    rhs = k0 ** (m + 1) * lam
    return _increasing_root(
        lambda e: e ** (m + 1) - e**power - rhs,
        1.0,
        "bhattacharya_energy",
        lam=lam,
        m=m,
    )


def dasgupta_energy(lam: float, m: int, n: int, k: float) -> float:
    """Root E >= 2n+1 of x^{m+1} - x^{m-1} = K^{m+1} lambda with x = E/(2n+1)."""
    if lam < 0 or n < 0 or k <= 0 or m < 2:
        raise DomainError(
            "need lambda >= 0, n >= 0, K > 0 and m >= 2",
            context={"lambda": lam, "n": n, "k": k, "m": m},
        )
    scale = 2.0 * n + 1.0
    if lam == 0:
        return scale
    rhs = k ** (m + 1) * lam
    x = _increasing_root(
        lambda x: x ** (m + 1) - x ** (m - 1) - rhs,
        1.0,
        "dasgupta_energy",
        lam=lam,
        m=m,
        n=n,
    )
    return scale * x


def anharmonic_potential(m: int, lam: float, d: int = 1) -> PotentialSpec:
    pairs = [(1.0, 2.0)] + ([(lam, 2.0 * m)] if lam > 0 else [])
    return PotentialSpec.from_pairs(pairs, d=d)


def sweep(
    m: int,
    lambdas: Iterable[float],
    state: StateIndex | None = None,
    cfg: SolverConfig | None = None,
    cache: PCache | None = None,
    *,
    with_exact: bool = False,
) -> list[SweepRow]:
    """Bound and comparison columns of r^2 + lambda r^{2m} over ``lambdas``."""
    state = state or StateIndex(n=1, l=0, d=1)
    models: dict[str, AnharmonicModel] = {
        kind: AnharmonicModel.theorem(kind, m, state=state, cfg=cfg, cache=cache)
        for kind in ("lower", "upper", "mixed")
    }
    ground = state.n == 1 and state.l == 0
    if ground:
        for kind in ("gamma-lower", "gamma-upper"):
            models[kind] = AnharmonicModel.theorem(kind, m, state=state, cfg=cfg, cache=cache)
    compare = ground and state.d == 1 and m in STRONG_COUPLING_K0

    rows = []
    for lam in lambdas:
        rows.append(
            SweepRow(
                lam=lam,
                lower=energy_of_lambda(lam, models["lower"]),
                upper=energy_of_lambda(lam, models["upper"]),
                mixed=energy_of_lambda(lam, models["mixed"]),
                gamma_lower=energy_of_lambda(lam, models["gamma-lower"]) if ground else None,
                gamma_upper=energy_of_lambda(lam, models["gamma-upper"]) if ground else None,
                bhattacharya=bhattacharya_energy(lam, m) if compare else None,
                exact=eigenvalue(anharmonic_potential(m, lam, state.d), state, cfg)
                if with_exact
                else None,
            )
        )
    return rows
