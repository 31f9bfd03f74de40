"""Validated input and configuration models."""

from __future__ import annotations

import math
from collections.abc import Iterable
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .constants import (
    DEFAULT_ABS_TOL,
    DEFAULT_MAX_EXPONENT,
    DEFAULT_MAX_ITER,
    DEFAULT_ODE_RTOL,
    DEFAULT_R_MAX_MARGIN,
    DEFAULT_TAIL_EXPONENT,
    Parity,
)
from .errors import InputValidationError


class StateIndex(BaseModel):
    """Quantum labels (n, l, d) of one discrete eigenvalue.

    ``n - 1`` counts the radial nodes of the reduced wavefunction. In one
    dimension ``l`` must be 0 and ``n`` runs over the whole line, even and odd
    parities interleaved (n = 1 is the even ground state).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)
    """Principal index."""
    l: int = Field(default=0, ge=0)
    """Angular momentum."""
    d: int = Field(default=3, ge=1)
    """Spatial dimension."""

    @model_validator(mode="after")
    def _validate_one_dimension(self) -> StateIndex:
        if self.d == 1 and self.l != 0:
            raise ValueError("in d=1 the angular momentum l must be 0")
        return self

    @property
    def parity(self) -> Parity | None:
        """Parity class of a one-dimensional state, ``None`` for d >= 2."""
        if self.d != 1:
            return None
        return "even" if self.n % 2 == 1 else "odd"

    @property
    def class_index(self) -> int:
        """1-based index of the state within its symmetry class.

        For d >= 2 this is ``n``; in d = 1 it counts states of the same parity.
        """
        if self.d == 1:
            return (self.n + 1) // 2
        return self.n

    @property
    def effective_l(self) -> int:
        """Angular momentum that makes the d >= 2 closed forms hold in d = 1.

        Even states behave as l = 0 and odd states as l = 1, both with
        ``class_index`` in place of ``n``.
        """
        if self.d != 1:
            return self.l
        return 0 if self.parity == "even" else 1

    @property
    def centrifugal_lambda(self) -> float:
        """Lambda = l + (d-3)/2 of the reduced radial equation.

        In d = 1 this is -1 for even states (u'(0) = 0) and 0 for odd ones
        (u(0) = 0); both make the centrifugal term vanish.
        """
        if self.d == 1:
            return -1.0 if self.parity == "even" else 0.0
        return self.l + (self.d - 3) / 2.0

    def label(self) -> str:
        return f"(n={self.n}, l={self.l}, d={self.d})"


class PotentialTerm(BaseModel):
    """One power term ``a * r**q`` of a central potential."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    a: float
    """Coupling."""
    q: float
    """Exponent."""

    @model_validator(mode="after")
    def _validate_finite(self) -> PotentialTerm:
        if not (math.isfinite(self.a) and math.isfinite(self.q)):
            raise ValueError("coupling and exponent must be finite")
        if self.q == 0:
            raise ValueError("exponent q = 0 is a constant shift, not a power term")
        return self


class PotentialSpec(BaseModel):
    """The operator -Laplacian + sum_i a_i r**q_i in ``d`` dimensions.

    Terms are kept sorted strictly increasing in ``q``. The certified class
    has every ``q >= 2`` and every ``a >= 0``; ``allow_coulomb`` admits a
    ``q = -1`` term with ``a < 0`` and ``allow_fractional`` admits
    ``0 < q < 2``.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    d: int = Field(default=3, ge=1)
    terms: tuple[PotentialTerm, ...]
    allow_coulomb: bool = False
    allow_fractional: bool = False

    @model_validator(mode="after")
    def _validate_terms(self) -> PotentialSpec:
        if not self.terms:
            raise ValueError("potential needs at least one term")

        exponents = [term.q for term in self.terms]
        if any(b <= a for a, b in zip(exponents, exponents[1:])):
            raise ValueError(f"exponents must be strictly increasing, got {exponents}")

        for term in self.terms:
            if term.q == -1.0:
                if not self.allow_coulomb:
                    raise ValueError("q = -1 (Coulomb) term requires allow_coulomb")
                if term.a >= 0:
                    raise ValueError("Coulomb term must be attractive (a < 0)")
                continue
            if term.q < 0:
                raise ValueError(f"negative exponent q = {term.q} is not supported")
            if term.q < 2 and not self.allow_fractional:
                raise ValueError(f"exponent q = {term.q} < 2 requires allow_fractional")
            if term.a < 0:
                raise ValueError(f"coupling a = {term.a} for q = {term.q} must be >= 0")
        return self

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[float, float]],
        *,
        d: int = 3,
        allow_coulomb: bool = False,
        allow_fractional: bool = False,
    ) -> PotentialSpec:
        """Build a spec from ``(a, q)`` pairs in any order.

        Raises:
            InputValidationError: If the terms do not form a valid potential.
        """
        ordered = sorted(pairs, key=lambda pair: pair[1])
        try:
            return cls(
                d=d,
                terms=tuple(PotentialTerm(a=a, q=q) for a, q in ordered),
                allow_coulomb=allow_coulomb,
                allow_fractional=allow_fractional,
            )
        except ValidationError as exc:
            raise InputValidationError(
                f"invalid potential: {exc.errors()[0]['msg']}",
                context={"pairs": [list(pair) for pair in ordered], "d": d},
                cause=exc,
            ) from exc

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(term.q for term in self.terms)

    @property
    def couplings(self) -> tuple[float, ...]:
        return tuple(term.a for term in self.terms)

    @property
    def max_exponent(self) -> float:
        return self.terms[-1].q

    @property
    def min_exponent(self) -> float:
        return self.terms[0].q

    @property
    def certified(self) -> bool:
        """True when every term is in the class the bound theorems cover."""
        return all(term.q >= 2 and term.a >= 0 for term in self.terms)

    @property
    def confining(self) -> bool:
        """True when some positive power has a positive coupling.

        Zero couplings are ignored, so ``r^2 + 0*r^4`` still confines.
        """
        return any(term.q > 0 and term.a > 0 for term in self.terms)

    def value(self, r: float) -> float:
        """Evaluate V(r) for r > 0."""
        return sum(term.a * r**term.q for term in self.terms)

    def scaled(self, v: float) -> PotentialSpec:
        """Return the spec with every coupling multiplied by ``v > 0``.

        Raises:
            InputValidationError: If ``v`` is not positive.
        """
        if not v > 0:
            raise InputValidationError(f"scale factor must be > 0, got {v!r}", context={"v": v})
        return PotentialSpec.from_pairs(
            [(v * term.a, term.q) for term in self.terms],
            d=self.d,
            allow_coulomb=self.allow_coulomb,
            allow_fractional=self.allow_fractional,
        )

    def with_dimension(self, d: int) -> PotentialSpec:
        return self.model_copy(update={"d": d})

    def describe(self) -> str:
        parts = [f"{term.a:g}*r^{term.q:g}" for term in self.terms]
        return " + ".join(parts) + f" (d={self.d})"


class SolverConfig(BaseModel):
    """Accuracy, truncation and iteration policy of the radial eigensolver."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    abs_tol: float = DEFAULT_ABS_TOL
    """Target absolute eigenvalue accuracy (energy units)."""
    ode_rtol: float = DEFAULT_ODE_RTOL
    """Relative tolerance of the adaptive integrator (step-size policy)."""
    r_max_margin: float = DEFAULT_R_MAX_MARGIN
    """r_max is placed where V(r_max) - E_estimate reaches this margin."""
    r_max: float | None = None
    """Fixed truncation radius; overrides the margin rule when set."""
    tail_exponent: float = DEFAULT_TAIL_EXPONENT
    """Minimum WKB decay exponent between the outer turning point and r_max."""
    max_iter: int = DEFAULT_MAX_ITER
    """Iteration cap for bracketing and refinement."""
    max_exponent: float = DEFAULT_MAX_EXPONENT
    """Largest exponent the solver accepts."""

    @model_validator(mode="after")
    def _validate_config(self) -> SolverConfig:
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if not 0 < self.ode_rtol <= 1e-6:
            raise ValueError("ode_rtol must be in (0, 1e-6]")
        if not self.r_max_margin > 0:
            raise ValueError("r_max_margin must be > 0")
        if self.r_max is not None and not (math.isfinite(self.r_max) and self.r_max > 0):
            raise ValueError("r_max must be finite and > 0")
        if self.tail_exponent <= 0:
            raise ValueError("tail_exponent must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        return self

    def summary(self) -> dict[str, Any]:
        return self.model_dump()


def make_state(n: int, l: int = 0, d: int = 3) -> StateIndex:
    """Build a StateIndex, translating validation failures.

    Raises:
        InputValidationError: If the labels are out of range.
    """
    try:
        return StateIndex(n=n, l=l, d=d)
    except ValidationError as exc:
        raise InputValidationError(
            f"invalid state (n={n}, l={l}, d={d}): {exc.errors()[0]['msg']}",
            context={"n": n, "l": l, "d": d},
            cause=exc,
        ) from exc
