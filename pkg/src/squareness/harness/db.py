"""Reading a curve table: one curve per line, `N label index a1 a2 a3 a4 a6 rank torsion`."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from ..elliptic import EllipticCurve, SingularCurve, torsion_order


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class ValidationError(ValueError):
    def __init__(self, label: str, msg: str):
        super().__init__(f"{label}: {msg}")
        self.label = label


@dataclass(frozen=True)
class CurveRecord:
    N: int
    iso_class: str
    index: int
    ainvs: tuple
    rank: int
    torsion: int

    @property
    def label(self) -> str:
        return f"{self.N}{self.iso_class}{self.index}"

    @property
    def optimal(self) -> bool:
        return self.index == 1

    @cached_property
    def curve(self) -> EllipticCurve:
        return EllipticCurve(*self.ainvs)

    @property
    def sort_key(self):
        return (self.N, _class_key(self.iso_class), self.index)


def _class_key(s: str) -> tuple:
    return (len(s), s)


def parse_line(text: str, lineno: int) -> CurveRecord | None:
    body = text.split("#", 1)[0].strip()
    if not body:
        return None
    parts = body.split()
    if len(parts) != 10:
        raise ParseError(lineno, f"expected 10 fields, found {len(parts)}")
    try:
        N = int(parts[0])
        idx = int(parts[2])
        ainvs = tuple(int(x) for x in parts[3:8])
        rank, tors = int(parts[8]), int(parts[9])
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None
    label = parts[1]
    if not label.isalpha() or not label.islower():
        raise ParseError(lineno, f"bad class label {label!r}")
    if N < 1 or idx < 1 or rank < 0 or tors < 1:
        raise ParseError(lineno, "non-positive conductor, index or torsion")
    return CurveRecord(N, label, idx, ainvs, rank, tors)


def validate(rec: CurveRecord) -> None:
    try:
        E = rec.curve
    except SingularCurve:
        raise ValidationError(rec.label, "singular model") from None
    if E.conductor != rec.N:
        raise ValidationError(rec.label, f"conductor is {E.conductor}, not {rec.N}")
    t = torsion_order(E)
    if t != rec.torsion:
        raise ValidationError(rec.label, f"torsion is {t}, not {rec.torsion}")


def parse_db(path, validate_records: bool = False) -> list[CurveRecord]:
    """Parse the table; with validate_records, recompute conductor and torsion for each curve."""
    out = []
    with open(Path(path)) as fh:
        for lineno, text in enumerate(fh, 1):
            rec = parse_line(text, lineno)
            if rec is None:
                continue
            if validate_records:
                validate(rec)
            out.append(rec)
    out.sort(key=lambda r: r.sort_key)
    return out


def find(db: list[CurveRecord], label: str) -> CurveRecord:
    for r in db:
        if r.label == label:
            return r
    raise KeyError(label)
