"""Result records for solves, P-numbers, bound reports and table reproduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

from .constants import JSON_SIGNIFICANT_DIGITS, PSource
from .models import StateIndex


def round_sig(value: float | None, digits: int = JSON_SIGNIFICANT_DIGITS) -> float | None:
    """Round to ``digits`` significant digits for deterministic JSON output."""
    if value is None:
        return None
    return float(f"{value:.{digits}g}")


def _state_dict(state: StateIndex) -> dict[str, int]:
    return {"n": state.n, "l": state.l, "d": state.d}


@dataclass
class SolveResult:
    """Eigenvalue returned by the radial solver, with how it was obtained."""

    energy: float
    """Eigenvalue E_{n l}^{(d)}."""
    nodes: int
    """Certified node count of the eigenfunction (n - 1)."""
    state: StateIndex
    r_max: float
    """Truncation radius actually used."""
    r_match: float
    """Matching radius (outer turning point)."""
    iterations: int
    """Node counts plus Brent steps spent."""
    config: dict[str, Any]

    def dict(self):
        return {
            "energy": round_sig(self.energy),
            "nodes": self.nodes,
            **_state_dict(self.state),
            "r_max": round_sig(self.r_max),
            "r_match": round_sig(self.r_match),
            "iterations": self.iterations,
            "config": self.config,
        }


@dataclass
class PNumberRecord:
    """A P-number with its provenance."""

    q: float
    state: StateIndex
    P: float
    source: PSource
    epsilon: float | None = None
    """Pure-power energy behind a numeric P."""
    abs_tol: float | None = None
    """Solver tolerance behind a numeric P."""

    def dict(self):
        return {
            "q": self.q,
            **_state_dict(self.state),
            "P": round_sig(self.P),
            "source": self.source,
            "epsilon": round_sig(self.epsilon),
            "abs_tol": self.abs_tol,
        }


@dataclass
class EnvelopeTerm:
    """One potential term paired with the P-number assigned to it."""

    a: float
    q: float
    P: float
    p_source: PSource

    def dict(self):
        return {"a": self.a, "q": self.q, "P": self.P, "p_source": self.p_source}


@dataclass
class BoundReport:
    """Envelope bounds and approximations for one state of one potential.

    ``lower_A``/``upper_A`` use the P-number of the smallest/largest exponent
    on every term; ``mixed_B`` uses each term's own P-number. The Gamma
    columns exist only for (n=1, l=0).
    """

    state: StateIndex
    lower_A: float
    upper_A: float
    mixed_B: float
    r_star: dict[str, float]
    """Minimizing radius per bound kind."""
    gamma_lower_B: float | None = None
    gamma_upper_B: float | None = None
    exact: float | None = None
    certified: bool = True
    """False for Coulomb or fractional terms."""
    mixed_is_bound: bool = True
    """mixed_B is a lower bound only for n = 1."""
    notes: list[str] = field(default_factory=list)

    @property
    def gap(self) -> float:
        return self.upper_A - self.lower_A

    def relative_errors(self) -> dict[str, float]:
        """Signed (value - exact) / exact for each populated column."""
        if self.exact is None:
            return {}
        values = {
            "lower_A": self.lower_A,
            "upper_A": self.upper_A,
            "mixed_B": self.mixed_B,
            "gamma_lower_B": self.gamma_lower_B,
            "gamma_upper_B": self.gamma_upper_B,
        }
        return {
            key: (value - self.exact) / abs(self.exact)
            for key, value in values.items()
            if value is not None
        }

    def dict(self):
        return {
            **_state_dict(self.state),
            "lower_A": round_sig(self.lower_A),
            "upper_A": round_sig(self.upper_A),
            "mixed_B": round_sig(self.mixed_B),
            "gamma_lower_B": round_sig(self.gamma_lower_B),
            "gamma_upper_B": round_sig(self.gamma_upper_B),
            "exact": round_sig(self.exact),
            "r_star": {key: round_sig(value) for key, value in self.r_star.items()},
            "gap": round_sig(self.gap),
            "relative_errors": {
                key: round_sig(value) for key, value in self.relative_errors().items()
            },
            "certified": self.certified,
            "mixed_is_bound": self.mixed_is_bound,
            "notes": list(self.notes),
        }


CellStatus = Literal["ok", "mismatch", "flagged"]


@dataclass
class TableCell:
    """One computed value next to its printed counterpart."""

    column: str
    computed: float
    printed: str
    """Printed value, verbatim."""
    status: CellStatus
    note: str | None = None

    @property
    def delta(self) -> float:
        return self.computed - float(self.printed)

    @property
    def decimals(self) -> int:
        """Decimal places of the printed value."""
        _, _, fraction = self.printed.partition(".")
        return len(fraction)

    def formatted(self) -> str:
        """Computed value at the printed precision."""
        return f"{self.computed:.{self.decimals}f}"

    def dict(self):
        return {
            "column": self.column,
            "computed": round_sig(self.computed),
            "printed": self.printed,
            "delta": round_sig(self.delta),
            "status": self.status,
            "note": self.note,
        }


@dataclass
class TableRow:
    """One row of a reproduced table, keyed by m or lambda."""

    key: str
    """Printed row key (m for Table 1, lambda otherwise)."""
    cells: list[TableCell]

    def cell(self, column: str) -> TableCell:
        for cell in self.cells:
            if cell.column == column:
                return cell
        raise KeyError(column)

    def dict(self):
        return {"key": self.key, "cells": [cell.dict() for cell in self.cells]}


@dataclass
class ReproduceResult:
    """A reproduced table with its verdict."""

    table: str
    columns: list[str]
    rows: list[TableRow]
    tolerance: float
    relative: bool
    """Whether ``tolerance`` is relative (Table 1) or absolute."""

    @property
    def mismatches(self) -> list[tuple[str, TableCell]]:
        return [
            (row.key, cell)
            for row in self.rows
            for cell in row.cells
            if cell.status == "mismatch"
        ]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def dict(self):
        return {
            "table": self.table,
            "columns": list(self.columns),
            "tolerance": self.tolerance,
            "relative": self.relative,
            "ok": self.ok,
            "rows": [row.dict() for row in self.rows],
        }


@dataclass
class SweepRow:
    """Anharmonic bounds at one coupling, for plot-ready CSV."""

    lam: float
    lower: float
    upper: float
    mixed: float
    gamma_lower: float | None = None
    gamma_upper: float | None = None
    bhattacharya: float | None = None
    exact: float | None = None

    COLUMNS = (
        "lambda",
        "lower",
        "upper",
        "mixed",
        "gamma_lower",
        "gamma_upper",
        "bhattacharya",
        "exact",
    )

    def values(self) -> tuple[float | None, ...]:
        return (
            self.lam,
            self.lower,
            self.upper,
            self.mixed,
            self.gamma_lower,
            self.gamma_upper,
            self.bhattacharya,
            self.exact,
        )

    def dict(self):
        return {column: round_sig(value) for column, value in zip(self.COLUMNS, self.values())}
