"""Normalized object values.

Every claim object is reduced to one of four kinds before any comparison
happens: numbers, calendar dates with optional wildcard components, free
text, and references to other resources.  Normalization is what lets the
same fact spelled four different ways collapse into one candidate, so the
rules here are deliberately conservative: if a lexical form does not match
a known shape it stays text rather than being guessed at.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

KIND_NUMBER = "number"
KIND_DATE = "date"
KIND_TEXT = "text"
KIND_REFERENCE = "reference"

_KIND_RANK = {KIND_NUMBER: 0, KIND_DATE: 1, KIND_TEXT: 2, KIND_REFERENCE: 3}

_XSD = "http://www.w3.org/2001/XMLSchema#"

NUMERIC_DATATYPES = frozenset(
    _XSD + name
    for name in (
        "integer", "decimal", "double", "float", "long", "int", "short",
        "byte", "nonNegativeInteger", "nonPositiveInteger",
        "positiveInteger", "negativeInteger", "unsignedLong", "unsignedInt",
        "unsignedShort", "unsignedByte",
    )
)

DATE_DATATYPES = frozenset(
    _XSD + name for name in ("date", "dateTime", "gYear", "gYearMonth")
)

_MONTHS = {}
for _i, _name in enumerate(
    ("january", "february", "march", "april", "may", "june", "july",
     "august", "september", "october", "november", "december"),
    start=1,
):
    _MONTHS[_name] = _i
    _MONTHS[_name[:3]] = _i
_MONTHS["sept"] = 9

# Year is pinned to four digits everywhere so short numerics never get
# mistaken for dates.
_ISO_YMD = re.compile(r"^(\d{4})-(\d{1,2}|#)-(\d{1,2}|#)$")
_ISO_YM = re.compile(r"^(\d{4})-(\d{1,2})$")
_SLASH_MDY = re.compile(r"^(\d{1,2})/(\d{1,2})/(\d{4})$")
_DAY_NAME_YEAR = re.compile(r"^(\d{1,2})\s+([A-Za-z]+)\s+(\d{4})$")
_NAME_YEAR = re.compile(r"^([A-Za-z]+)\s+(\d{4})$")


@dataclass(frozen=True)
class NormalizedValue:
    """One canonical claim object.

    Exactly one payload field is set, matching ``kind``.  Date components
    use ``None`` as the wildcard; a concrete day is only allowed when the
    month is concrete too.
    """

    kind: str
    number: Decimal | None = None
    date: tuple[int, int | None, int | None] | None = None
    text: str | None = None
    reference: str | None = None

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown value kind: {self.kind!r}")
        payloads = (self.number, self.date, self.text, self.reference)
        filled = sum(p is not None for p in payloads)
        if filled != 1:
            raise ValueError("exactly one payload field must be set")
        if self.kind == KIND_NUMBER and self.number is None:
            raise ValueError("number kind requires a number payload")
        if self.kind == KIND_DATE:
            if self.date is None:
                raise ValueError("date kind requires a date payload")
            year, month, day = self.date
            if month is not None and not 1 <= month <= 12:
                raise ValueError(f"month out of range: {month}")
            if day is not None and not 1 <= day <= 31:
                raise ValueError(f"day out of range: {day}")
            if day is not None and month is None:
                raise ValueError("concrete day with wildcard month")
            if not isinstance(year, int):
                raise ValueError("year must be an integer")
        if self.kind == KIND_TEXT and self.text is None:
            raise ValueError("text kind requires a text payload")
        if self.kind == KIND_REFERENCE and self.reference is None:
            raise ValueError("reference kind requires a reference payload")

    @classmethod
    def from_number(cls, value) -> "NormalizedValue":
        if isinstance(value, float):
            dec = Decimal(repr(value))
        elif isinstance(value, Decimal):
            dec = value
        else:
            dec = Decimal(value)
        return cls(KIND_NUMBER, number=dec)

    @classmethod
    def from_date(cls, year: int, month: int | None, day: int | None) -> "NormalizedValue":
        return cls(KIND_DATE, date=(year, month, day))

    @classmethod
    def from_text(cls, text: str) -> "NormalizedValue":
        return cls(KIND_TEXT, text=text)

    @classmethod
    def from_reference(cls, iri: str) -> "NormalizedValue":
        return cls(KIND_REFERENCE, reference=iri)

    def render(self) -> str:
        """Canonical string form; injective within each kind."""
        if self.kind == KIND_NUMBER:
            return _canonical_decimal(self.number)
        if self.kind == KIND_DATE:
            year, month, day = self.date
            m = "#" if month is None else f"{month:02d}"
            d = "#" if day is None else f"{day:02d}"
            return f"{year:04d}-{m}-{d}"
        if self.kind == KIND_TEXT:
            return self.text
        return self.reference

    def sort_key(self):
        """Total order: numbers, then dates, then text, then references.

        Within dates a wildcard component sorts before any concrete one.
        """
        rank = _KIND_RANK[self.kind]
        if self.kind == KIND_NUMBER:
            return (rank, self.number)
        if self.kind == KIND_DATE:
            year, month, day = self.date
            return (rank, year, -1 if month is None else month,
                    -1 if day is None else day)
        if self.kind == KIND_TEXT:
            return (rank, self.text)
        return (rank, self.reference)

    def __str__(self):
        return self.render()


def _canonical_decimal(dec: Decimal) -> str:
    if dec == 0:
        return "0"
    return format(dec.normalize(), "f")


def _parse_date_lexical(text: str) -> tuple[int, int | None, int | None] | None:
    match = _ISO_YMD.match(text)
    if match:
        year = int(match.group(1))
        month = None if match.group(2) == "#" else int(match.group(2))
        day = None if match.group(3) == "#" else int(match.group(3))
        return _checked(year, month, day)
    match = _ISO_YM.match(text)
    if match:
        return _checked(int(match.group(1)), int(match.group(2)), None)
    match = _SLASH_MDY.match(text)
    if match:
        return _checked(int(match.group(3)), int(match.group(1)), int(match.group(2)))
    match = _DAY_NAME_YEAR.match(text)
    if match:
        month = _MONTHS.get(match.group(2).lower())
        if month is None:
            return None
        return _checked(int(match.group(3)), month, int(match.group(1)))
    match = _NAME_YEAR.match(text)
    if match:
        month = _MONTHS.get(match.group(1).lower())
        if month is None:
            return None
        return _checked(int(match.group(2)), month, None)
    return None


def _checked(year, month, day):
    if month is not None and not 1 <= month <= 12:
        return None
    if day is not None and not 1 <= day <= 31:
        return None
    if day is not None and month is None:
        return None
    return (year, month, day)


def _parse_typed_date(lexical: str, datatype: str):
    body = lexical.strip()
    if datatype == _XSD + "dateTime":
        body = body.split("T", 1)[0]
    # trailing timezone on date forms: 1886-10-28Z or 1886-10-28+05:00
    body = re.sub(r"(Z|[+-]\d\d:\d\d)$", "", body)
    if datatype == _XSD + "gYear":
        if re.fullmatch(r"\d{4}", body):
            return (int(body), None, None)
        return None
    if datatype == _XSD + "gYearMonth":
        match = re.fullmatch(r"(\d{4})-(\d{2})", body)
        if match:
            return _checked(int(match.group(1)), int(match.group(2)), None)
        return None
    match = re.fullmatch(r"(\d{4})-(\d{2})-(\d{2})", body)
    if match:
        return _checked(int(match.group(1)), int(match.group(2)), int(match.group(3)))
    return None


def normalize_object(lexical: str, datatype: str | None = None,
                     *, is_iri: bool = False) -> NormalizedValue | None:
    """Map one raw object term to its canonical value.

    Returns ``None`` for empty and NULL-marker literals, which callers
    treat as the absence of a claim.  Resolution order: declared numeric
    datatype, declared date datatype, recognised date shapes, reference
    for IRI objects, free text otherwise.  A failed typed parse falls
    through to the later rules instead of erroring.
    """
    if is_iri:
        return NormalizedValue.from_reference(lexical)
    stripped = lexical.strip()
    if not stripped or stripped.upper() == "NULL":
        return None
    if datatype in NUMERIC_DATATYPES:
        try:
            dec = Decimal(stripped)
            if dec.is_finite():
                return NormalizedValue(KIND_NUMBER, number=dec)
        except InvalidOperation:
            pass
    if datatype in DATE_DATATYPES:
        parts = _parse_typed_date(stripped, datatype)
        if parts is not None:
            return NormalizedValue(KIND_DATE, date=parts)
    parts = _parse_date_lexical(stripped)
    if parts is not None:
        return NormalizedValue(KIND_DATE, date=parts)
    return NormalizedValue.from_text(" ".join(stripped.split()))
