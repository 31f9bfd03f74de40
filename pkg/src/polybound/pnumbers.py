"""P-numbers of pure-power potentials.

A pure-power eigenvalue epsilon of -Laplacian + r^q is encoded as

    epsilon = min_{r > 0} [1/r^2 + (P r)^q],

which makes P a potential-independent label of the state. P comes from a
closed form (q = 2, q = -1), from the radial solver, or from the two
Gamma-function estimates that bracket the ground-state value.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
import threading
from collections.abc import Iterable
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy.special import gammaln

from .constants import CACHE_ENV_VAR, CACHE_Q_DECIMALS, DEFAULT_CACHE_FILENAME
from .errors import CacheError, DomainError, GammaOverflowError, UnsupportedStateError
from .logger import WorkbenchLogger
from .models import SolverConfig, StateIndex
from .radial_solver import pure_power_eigenvalue
from .results import PNumberRecord

_LOGGER = WorkbenchLogger(name="polybound.pnumbers")

CacheKey = tuple[float, int, int, int, float]


def p_from_energy(q: float, epsilon: float) -> float:
    """P = eps^((2+q)/2q) (2/(2+q))^(1/q) (q/(2+q))^(1/2)."""
    if q <= 0:
        raise DomainError(
            f"P from energy needs q > 0, got q={q:g} (use p_coulomb for q = -1)",
            context={"q": q},
        )
    if epsilon <= 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon:g}", context={"epsilon": epsilon})
    return (
        epsilon ** ((2.0 + q) / (2.0 * q))
        * (2.0 / (2.0 + q)) ** (1.0 / q)
        * math.sqrt(q / (2.0 + q))
    )


def epsilon_from_p(q: float, p: float) -> float:
    """Closed-form min over r of 1/r^2 + (P r)^q (the inverse of p_from_energy)."""
    if q <= 0 or p <= 0:
        raise DomainError(
            f"epsilon from P needs q > 0 and P > 0, got q={q:g}, P={p:g}",
            context={"q": q, "P": p},
        )
    return (1.0 + 2.0 / q) * (0.5 * q * p**q) ** (2.0 / (q + 2.0))


def p_harmonic(state: StateIndex) -> float:
    """P(2) = 2n + l + d/2 - 2 for d >= 2 and n - 1/2 for d = 1."""
    if state.d == 1:
        return state.n - 0.5
    return 2 * state.n + state.l + state.d / 2.0 - 2.0


def p_coulomb(state: StateIndex) -> float:
    """P(-1) = n + l + d/2 - 3/2, defined for d >= 2 only."""
    if state.d < 2:
        raise UnsupportedStateError(
            "the Coulomb P-number is defined for d >= 2 only",
            context={"n": state.n, "l": state.l, "d": state.d},
        )
    return state.n + state.l + state.d / 2.0 - 1.5


def _check_gamma_args(q: float, d: int) -> None:
    if q <= 0 or d < 1:
        raise DomainError(
            f"Gamma P estimates need q > 0 and d >= 1, got q={q:g}, d={d}",
            context={"q": q, "d": d},
        )


def _from_log(log_p: float, q: float, d: int, kind: str) -> float:
    try:
        value = math.exp(log_p)
    except OverflowError as exc:
        raise GammaOverflowError(
            f"{kind} Gamma P estimate overflowed for q={q:g}, d={d}",
            context={"q": q, "d": d, "log_p": log_p},
            cause=exc,
        ) from exc
    if not math.isfinite(value) or value <= 0.0:
        raise GammaOverflowError(
            f"{kind} Gamma P estimate is not finite for q={q:g}, d={d}",
            context={"q": q, "d": d, "log_p": log_p},
        )
    return value


def p_gamma_lower(q: float, d: int) -> float:
    """Gamma-function lower estimate of the ground-state P_{1,0}^{(d)}(q).

    P = (d e / 2)^(1/2) (d / (q e))^(1/q) [Gamma(1 + d/2) / Gamma(1 + d/q)]^(1/d),
    evaluated in log space. Exact at q = 2.

    Raises:
        GammaOverflowError: If the value is not representable.
    """
    _check_gamma_args(q, d)
    log_p = (
        0.5 * math.log(0.5 * d * math.e)
        + math.log(d / (q * math.e)) / q
        + (gammaln(1.0 + 0.5 * d) - gammaln(1.0 + d / q)) / d
    )
    return _from_log(float(log_p), q, d, "lower")


def p_gamma_upper(q: float, d: int) -> float:
    """Gamma-function upper estimate of the ground-state P_{1,0}^{(d)}(q).

    P = (d/2)^(1/2) [Gamma((d + q)/2) / Gamma(d/2)]^(1/q), evaluated in log
    space. Exact at q = 2.

    Raises:
        GammaOverflowError: If the value is not representable.
    """
    _check_gamma_args(q, d)
    log_p = 0.5 * math.log(0.5 * d) + (gammaln(0.5 * (d + q)) - gammaln(0.5 * d)) / q
    return _from_log(float(log_p), q, d, "upper")


def p_gamma_record(q: float, d: int, kind: Literal["lower", "upper"]) -> PNumberRecord:
    """Gamma estimate wrapped as a ground-state record."""
    _check_gamma_args(q, d)
    state = StateIndex(n=1, l=0, d=d)
    if kind == "lower":
        return PNumberRecord(q=q, state=state, P=p_gamma_lower(q, d), source="gamma_lower")
    return PNumberRecord(q=q, state=state, P=p_gamma_upper(q, d), source="gamma_upper")


class PCacheEntry(BaseModel):
    """On-disk shape of one cached numeric P-number."""

    model_config = ConfigDict(extra="forbid")

    q: float
    n: int = Field(ge=1)
    l: int = Field(ge=0)
    d: int = Field(ge=1)
    P: float = Field(gt=0)
    source: Literal["numeric"] = "numeric"
    epsilon: float
    abs_tol: float = Field(gt=0)

    @classmethod
    def from_record(cls, record: PNumberRecord) -> PCacheEntry:
        state = record.state
        return cls(
            q=record.q,
            n=state.n,
            l=state.l,
            d=state.d,
            P=record.P,
            source=record.source,
            epsilon=record.epsilon,
            abs_tol=record.abs_tol,
        )

    def to_record(self) -> PNumberRecord:
        return PNumberRecord(
            q=self.q,
            state=StateIndex(n=self.n, l=self.l, d=self.d),
            P=self.P,
            source="numeric",
            epsilon=self.epsilon,
            abs_tol=self.abs_tol,
        )


class PCache:
    """Persistent store of numeric P-numbers.

    Records are keyed by (q rounded to 9 decimals, n, l, d, abs_tol). The
    backing file is a single JSON array rewritten atomically; with ``path``
    set to ``None`` the cache lives in memory only.
    """

    def __init__(self, path: str | os.PathLike[str] | None = None, *, autosave: bool = True) -> None:
        self.path = Path(path) if path is not None else None
        self.autosave = autosave
        self._records: dict[CacheKey, PNumberRecord] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @classmethod
    def resolve_path(cls, path: str | os.PathLike[str] | None = None) -> Path:
        """Cache path by precedence: explicit path, environment, default file."""
        if path:
            return Path(path)
        env_path = os.environ.get(CACHE_ENV_VAR)
        if env_path:
            return Path(env_path)
        return Path(DEFAULT_CACHE_FILENAME)

    @classmethod
    def open(cls, path: str | os.PathLike[str] | None = None) -> PCache:
        """Resolve the path and load whatever is stored there."""
        cache = cls(cls.resolve_path(path))
        cache.load()
        return cache

    @staticmethod
    def key(q: float, state: StateIndex, abs_tol: float) -> CacheKey:
        return (round(q, CACHE_Q_DECIMALS), state.n, state.l, state.d, abs_tol)

    def __len__(self) -> int:
        return len(self._records)

    def load(self) -> int:
        """Read the backing file; returns the number of records loaded.

        Raises:
            CacheError: If the file exists but cannot be read or validated.
        """
        if self.path is None or not self.path.exists():
            return 0
        try:
            payload = json.loads(self.path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheError(
                f"could not read P cache {self.path}: {exc}",
                context={"path": str(self.path)},
                cause=exc,
            ) from exc
        if not isinstance(payload, list):
            raise CacheError(
                f"P cache {self.path} must hold a JSON array",
                context={"path": str(self.path)},
            )
        loaded: dict[CacheKey, PNumberRecord] = {}
        for index, item in enumerate(payload):
            try:
                record = PCacheEntry.model_validate(item).to_record()
            except ValidationError as exc:
                raise CacheError(
                    f"invalid P cache entry #{index} in {self.path}",
                    context={"path": str(self.path), "index": index},
                    cause=exc,
                ) from exc
            loaded[self.key(record.q, record.state, record.abs_tol or 0.0)] = record
        with self._lock:
            self._records.update(loaded)
        _LOGGER.event("cache.loaded", path=str(self.path), entries=len(loaded))
        return len(loaded)

    def save(self) -> None:
        """Atomically rewrite the backing file.

        Raises:
            CacheError: If the file cannot be written.
        """
        if self.path is None:
            return
        with self._lock:
            entries = [
                PCacheEntry.from_record(self._records[key]).model_dump()
                for key in sorted(self._records)
            ]
            directory = self.path.parent if str(self.path.parent) else Path(".")
            try:
                directory.mkdir(parents=True, exist_ok=True)
                with tempfile.NamedTemporaryFile(
                    "w",
                    encoding="utf-8",
                    dir=directory,
                    prefix=f".{self.path.name}.",
                    suffix=".tmp",
                    delete=False,
                ) as handle:
                    json.dump(entries, handle, indent=2, sort_keys=True)
                    handle.write("\n")
                    temp_name = handle.name
                os.replace(temp_name, self.path)
            except OSError as exc:
                raise CacheError(
                    f"could not write P cache {self.path}: {exc}",
                    context={"path": str(self.path)},
                    cause=exc,
                ) from exc

    def get(self, q: float, state: StateIndex, abs_tol: float) -> PNumberRecord | None:
        with self._lock:
            record = self._records.get(self.key(q, state, abs_tol))
            if record is None:
                self.misses += 1
            else:
                self.hits += 1
        return record

    def put(self, record: PNumberRecord) -> None:
        """Store a numeric record (other sources are never cached)."""
        if record.source != "numeric" or record.abs_tol is None:
            return
        with self._lock:
            self._records[self.key(record.q, record.state, record.abs_tol)] = record
        if self.autosave:
            self.save()

    def clear(self) -> int:
        """Drop every record and delete the backing file; returns the count dropped."""
        with self._lock:
            dropped = len(self._records)
            self._records.clear()
        if self.path is not None and self.path.exists():
            try:
                self.path.unlink()
            except OSError as exc:
                raise CacheError(
                    f"could not delete P cache {self.path}: {exc}",
                    context={"path": str(self.path)},
                    cause=exc,
                ) from exc
        return dropped

    def records(self) -> list[PNumberRecord]:
        with self._lock:
            return [self._records[key] for key in sorted(self._records)]

    def stats(self) -> dict[str, Any]:
        return {
            "path": str(self.path) if self.path is not None else None,
            "entries": len(self),
            "hits": self.hits,
            "misses": self.misses,
        }


def p_lookup(
    q: float,
    state: StateIndex,
    cfg: SolverConfig | None = None,
    cache: PCache | None = None,
) -> PNumberRecord:
    """P_{n l}^{(d)}(q) with provenance.

    q = 2 and q = -1 are closed forms; any other admissible q is solved
    numerically (v = 1) and cached.

    Raises:
        DomainError: If q < -1, q = 0 or -1 < q < 0.
    """
    if q == 2.0:
        return PNumberRecord(q=q, state=state, P=p_harmonic(state), source="closed_form")
    if q == -1.0:
        return PNumberRecord(q=q, state=state, P=p_coulomb(state), source="closed_form")
    if q <= 0:
        raise DomainError(f"no P-number for exponent q={q:g}", context={"q": q})

    cfg = cfg or SolverConfig()
    if cache is not None:
        cached = cache.get(q, state, cfg.abs_tol)
        if cached is not None:
            _LOGGER.event("cache.hit", q=q, state=state.label())
            return cached
        _LOGGER.event("cache.miss", q=q, state=state.label())

    epsilon = pure_power_eigenvalue(q, 1.0, state, cfg)
    record = PNumberRecord(
        q=q,
        state=state,
        P=p_from_energy(q, epsilon),
        source="numeric",
        epsilon=epsilon,
        abs_tol=cfg.abs_tol,
    )
    if cache is not None:
        cache.put(record)
    return record


def p_table(
    qs: Iterable[float],
    state: StateIndex,
    cfg: SolverConfig | None = None,
    cache: PCache | None = None,
) -> list[PNumberRecord]:
    """Look up P for several exponents, warning if P is not increasing in q."""
    records = [p_lookup(q, state, cfg, cache) for q in qs]
    ordered = sorted(records, key=lambda record: record.q)
    for prev, curr in zip(ordered, ordered[1:]):
        if curr.q > prev.q and not curr.P > prev.P:
            _LOGGER.event(
                "pnumbers.non_monotone",
                level=logging.WARNING,
                state=state.label(),
                q=[prev.q, curr.q],
                P=[prev.P, curr.P],
            )
    return records
