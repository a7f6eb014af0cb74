"""Verification records and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

__all__ = ["VerificationReport", "reports_to_json", "reports_from_json", "EngineInconsistency"]


class EngineInconsistency(RuntimeError):
    """The engine disagrees with its own numeric oracle (an engine bug)."""


def _pair(z: complex | None):
    return None if z is None else [float(z.real), float(z.imag)]


def _unpair(v) -> complex | None:
    return None if v is None else complex(v[0], v[1])


@dataclass
class VerificationReport:
    """One compared quantity.

    ``computed`` and ``expected`` are :class:`Poly` values, or boundary
    symbols for checkpoints and symbol identities (``kind == "symbol"``).
    ``oracle_engine`` / ``oracle_expected`` are the two sides evaluated
    numerically under the oracle assignment and ``oracle_value`` is the
    independent numeric value itself.
    """

    setting: str
    l: int | None
    case: str
    computed: object
    expected: object
    exact_match: bool
    tag: str = ""
    oracle_engine: complex | None = None
    oracle_expected: complex | None = None
    oracle_value: complex | None = None
    oracle_verdict: str = ""
    seed: int | None = None
    note: str = ""
    kind: str = "poly"
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("poly", "symbol"):
            raise ValueError(f"unknown report kind {self.kind!r}")

    @classmethod
    def compare(cls, setting: str, l: int | None, case: str, computed, expected, **kw) -> "VerificationReport":
        """Build a report whose exact flag is ``computed - expected == 0``."""
        if expected is None:
            match = False
        else:
            match = (computed - expected).is_zero()
        return cls(setting, l, case, computed, expected, match, **kw)

    def to_dict(self) -> dict:
        d = {
            "setting": self.setting,
            "l": self.l,
            "case": self.case,
            "computed": str(self.computed),
            "expected": None if self.expected is None else str(self.expected),
            "exact_match": self.exact_match,
            "oracle_engine": _pair(self.oracle_engine),
            "oracle_expected": _pair(self.oracle_expected),
            "note": self.note,
            "tag": self.tag,
            "oracle_value": _pair(self.oracle_value),
            "oracle_verdict": self.oracle_verdict,
            "seed": self.seed,
            "kind": self.kind,
            "n": self.n,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        from .dsl import parse_poly, parse_symbol

        kind = d.get("kind", "poly")
        if kind == "symbol":
            parse = lambda text: parse_symbol(text, d["n"])  # noqa: E731
        else:
            parse = parse_poly
        return cls(
            setting=d["setting"],
            l=d["l"],
            case=d["case"],
            computed=parse(d["computed"]),
            expected=None if d["expected"] is None else parse(d["expected"]),
            exact_match=d["exact_match"],
            tag=d.get("tag", ""),
            oracle_engine=_unpair(d.get("oracle_engine")),
            oracle_expected=_unpair(d.get("oracle_expected")),
            oracle_value=_unpair(d.get("oracle_value")),
            oracle_verdict=d.get("oracle_verdict", ""),
            seed=d.get("seed"),
            note=d.get("note", ""),
            kind=kind,
            n=d.get("n"),
        )

    def __eq__(self, other):
        if not isinstance(other, VerificationReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def reports_to_json(reports: Iterable[VerificationReport], indent: int | None = 2) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent)


def reports_from_json(text: str) -> list[VerificationReport]:
    return [VerificationReport.from_dict(d) for d in json.loads(text)]
