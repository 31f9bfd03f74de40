"""JSON potential spec files.

    {"d": 1,
     "terms": [{"a": 1.0, "q": 2}, {"a": 0.1, "q": 4}],
     "extensions": {"allow_coulomb": false, "allow_fractional": false}}
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import SpecParseError
from .models import PotentialSpec


class SpecTerm(BaseModel):
    model_config = ConfigDict(extra="forbid")

    a: float
    q: float


class SpecExtensions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    allow_coulomb: bool = False
    allow_fractional: bool = False


class PotentialSpecFile(BaseModel):
    """On-disk shape of a potential spec."""

    model_config = ConfigDict(extra="forbid")

    d: int = Field(default=3, ge=1)
    terms: list[SpecTerm]
    extensions: SpecExtensions = Field(default_factory=SpecExtensions)

    def to_spec(self) -> PotentialSpec:
        ordered = sorted(self.terms, key=lambda term: term.q)
        return PotentialSpec(
            d=self.d,
            terms=tuple({"a": term.a, "q": term.q} for term in ordered),
            allow_coulomb=self.extensions.allow_coulomb,
            allow_fractional=self.extensions.allow_fractional,
        )


def _line_of(text: str, loc: tuple[Any, ...]) -> int:
    """Best-effort line number of the JSON location ``loc``."""
    pos = 0
    for part in loc:
        if isinstance(part, str):
            found = text.find(f'"{part}"', pos)
        else:
            found = pos
            for _ in range(int(part) + 1):
                found = text.find("{", found + 1)
                if found < 0:
                    break
        if found < 0:
            break
        pos = found
    return text.count("\n", 0, pos) + 1


def _field_name(loc: tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def parse_spec(text: str, *, source: str = "<string>") -> PotentialSpec:
    """Parse a spec document.

    Raises:
        SpecParseError: With ``field`` and ``line`` in its context.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(
            f"{source}:{exc.lineno}: invalid JSON: {exc.msg}",
            context={"source": source, "field": None, "line": exc.lineno, "column": exc.colno},
            cause=exc,
        ) from exc

    try:
        document = PotentialSpecFile.model_validate(payload)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = tuple(error["loc"])
        line = _line_of(text, loc)
        field = _field_name(loc)
        raise SpecParseError(
            f"{source}:{line}: field '{field}': {error['msg']}",
            context={"source": source, "field": field, "line": line},
            cause=exc,
        ) from exc

    try:
        return document.to_spec()
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = tuple(error["loc"]) or ("terms",)
        line = _line_of(text, loc)
        field = _field_name(loc)
        raise SpecParseError(
            f"{source}:{line}: field '{field}': {error['msg']}",
            context={"source": source, "field": field, "line": line},
            cause=exc,
        ) from exc


def load_spec(path: str | os.PathLike[str]) -> PotentialSpec:
    """Read and parse a spec file."""
    spec_path = Path(path)
    try:
        text = spec_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(
            f"could not read spec file {spec_path}: {exc}",
            context={"source": str(spec_path), "field": None, "line": None},
            cause=exc,
        ) from exc
    return parse_spec(text, source=str(spec_path))


def dump_spec(spec: PotentialSpec) -> str:
    """Serialize a spec in the file format (inverse of parse_spec)."""
    document = {
        "d": spec.d,
        "terms": [{"a": term.a, "q": term.q} for term in spec.terms],
        "extensions": {
            "allow_coulomb": spec.allow_coulomb,
            "allow_fractional": spec.allow_fractional,
        },
    }
    return json.dumps(document, indent=2) + "\n"
