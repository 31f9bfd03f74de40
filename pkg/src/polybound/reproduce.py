"""Recompute the published tables and diff them against the printed values."""

from __future__ import annotations

import asyncio
import csv
import io
import json
import logging
from collections.abc import Callable
from typing import Any

from .anharmonic import AnharmonicModel, anharmonic_potential, bhattacharya_energy, energy_of_lambda
from .errors import InputValidationError
from .logger import WorkbenchLogger
from .models import SolverConfig, StateIndex
from .pnumbers import PCache, p_lookup
from .radial_solver import eigenvalue
from .reference import TABLES, TEXT_LAMBDA, TOLERANCES, UNREPRODUCED, ReferenceTable
from .results import ReproduceResult, TableCell, TableRow

_LOGGER = WorkbenchLogger(name="polybound.reproduce")

_GROUND_1D = StateIndex(n=1, l=0, d=1)

RowBuilder = Callable[[str], dict[str, float]]


class Reproducer:
    """Builds a table row by row and grades every cell against the printed value."""

    @classmethod
    def run(
        cls,
        table: str,
        *,
        tol: float | None = None,
        cfg: SolverConfig | None = None,
        cache: PCache | None = None,
    ) -> ReproduceResult:
        """Reproduce ``table`` ("1", "2", "3" or "text") synchronously."""
        reference, builder, tolerance, relative = cls._prepare(table, tol, cfg, cache)
        rows = [
            cls._grade_row(reference, key, builder(key), tolerance, relative)
            for key in reference.keys()
        ]
        return cls._build_result(reference, rows, tolerance, relative)

    @classmethod
    async def arun(
        cls,
        table: str,
        *,
        tol: float | None = None,
        cfg: SolverConfig | None = None,
        cache: PCache | None = None,
    ) -> ReproduceResult:
        """Reproduce ``table`` with rows computed concurrently; row order is kept."""
        reference, builder, tolerance, relative = cls._prepare(table, tol, cfg, cache)
        keys = reference.keys()
        values = await asyncio.gather(*(asyncio.to_thread(builder, key) for key in keys))
        rows = [
            cls._grade_row(reference, key, computed, tolerance, relative)
            for key, computed in zip(keys, values)
        ]
        return cls._build_result(reference, rows, tolerance, relative)

    @classmethod
    def _prepare(
        cls,
        table: str,
        tol: float | None,
        cfg: SolverConfig | None,
        cache: PCache | None,
    ) -> tuple[ReferenceTable, RowBuilder, float, bool]:
        if table not in TABLES:
            raise InputValidationError(
                f"unknown table {table!r}",
                context={"table": table, "known": sorted(TABLES)},
            )
        if tol is not None and not tol > 0:
            raise InputValidationError(f"tolerance must be > 0, got {tol!r}", context={"tol": tol})
        reference = TABLES[table]
        default_tol, relative = TOLERANCES[table]
        cfg = cfg or SolverConfig()

        if table == "1":
            builder = cls._pnumber_builder(cfg, cache)
        elif table == "text":
            builder = cls._text_builder(reference, cfg, cache)
        else:
            builder = cls._anharmonic_builder(reference, cfg, cache)
        return reference, builder, tol if tol is not None else default_tol, relative

    @staticmethod
    def _pnumber_builder(cfg: SolverConfig, cache: PCache | None) -> RowBuilder:
        def build(key: str) -> dict[str, float]:
            q = 2.0 * int(key)
            p = p_lookup(q, _GROUND_1D, cfg, cache).P
            return {"P": p, "beta": p**q}

        return build

    @staticmethod
    def _anharmonic_builder(
        reference: ReferenceTable,
        cfg: SolverConfig,
        cache: PCache | None,
    ) -> RowBuilder:
        m = reference.m or 2
        lower = AnharmonicModel.theorem("gamma-lower", m, state=_GROUND_1D)
        upper = AnharmonicModel.theorem("gamma-upper", m, state=_GROUND_1D)
        mixed = AnharmonicModel.theorem("mixed", m, state=_GROUND_1D, cfg=cfg, cache=cache)

        def build(key: str) -> dict[str, float]:
            lam = float(key)
            return {
                "exact": eigenvalue(anharmonic_potential(m, lam), _GROUND_1D, cfg),
                "lower": energy_of_lambda(lam, lower),
                "upper": energy_of_lambda(lam, upper),
                "E_b": bhattacharya_energy(lam, m),
                "E_L": energy_of_lambda(lam, mixed),
            }

        return build

    @staticmethod
    def _text_builder(
        reference: ReferenceTable,
        cfg: SolverConfig,
        cache: PCache | None,
    ) -> RowBuilder:
        m = reference.m or 2
        models = {
            "lower_A": AnharmonicModel.theorem("lower", m, state=_GROUND_1D, cfg=cfg, cache=cache),
            "upper_A": AnharmonicModel.theorem("upper", m, state=_GROUND_1D, cfg=cfg, cache=cache),
        }

        def build(key: str) -> dict[str, float]:
            if key == "exact":
                value = eigenvalue(anharmonic_potential(m, TEXT_LAMBDA), _GROUND_1D, cfg)
            else:
                value = energy_of_lambda(TEXT_LAMBDA, models[key])
            return {"value": value}

        return build

    @classmethod
    def _grade_row(
        cls,
        reference: ReferenceTable,
        key: str,
        computed: dict[str, float],
        tolerance: float,
        relative: bool,
    ) -> TableRow:
        cells = []
        for column in reference.columns:
            printed = reference.value(key, column)
            note = UNREPRODUCED.get((reference.name, key, column))
            cell = cls._grade_cell(column, computed[column], printed, tolerance, relative, note)
            _LOGGER.event(
                "reproduce.cell",
                table=reference.name,
                key=key,
                column=column,
                status=cell.status,
                delta=cell.delta,
            )
            cells.append(cell)
        return TableRow(key=key, cells=cells)

    @staticmethod
    def _grade_cell(
        column: str,
        computed: float,
        printed: str,
        tolerance: float,
        relative: bool,
        note: str | None,
    ) -> TableCell:
        if note is not None:
            return TableCell(column=column, computed=computed, printed=printed, status="flagged", note=note)
        allowed = tolerance * abs(float(printed)) if relative else tolerance
        status = "ok" if abs(computed - float(printed)) <= allowed else "mismatch"
        return TableCell(column=column, computed=computed, printed=printed, status=status)

    @staticmethod
    def _build_result(
        reference: ReferenceTable,
        rows: list[TableRow],
        tolerance: float,
        relative: bool,
    ) -> ReproduceResult:
        result = ReproduceResult(
            table=reference.name,
            columns=list(reference.columns),
            rows=rows,
            tolerance=tolerance,
            relative=relative,
        )
        for key, cell in result.mismatches:
            _LOGGER.event(
                "reproduce.mismatch",
                level=logging.WARNING,
                table=reference.name,
                key=key,
                column=cell.column,
                computed=cell.computed,
                printed=cell.printed,
            )
        return result


def to_csv(result: ReproduceResult) -> str:
    """CSV with the computed values at printed precision beside the printed ones."""
    reference = TABLES[result.table]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = [reference.key_name]
    for column in result.columns:
        header.extend([column, f"{column}_printed", f"{column}_status"])
    writer.writerow(header)
    for row in result.rows:
        line = [row.key]
        for cell in row.cells:
            line.extend([cell.formatted(), cell.printed, cell.status])
        writer.writerow(line)
    return buffer.getvalue()


def to_json(result: ReproduceResult) -> str:
    payload: dict[str, Any] = {"provenance": TABLES[result.table].provenance, **result.dict()}
    return json.dumps(payload, indent=2) + "\n"
