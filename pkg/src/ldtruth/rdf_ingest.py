"""Reading claim corpora from N-Triples and N-Quads files.

The parser is line oriented and hand rolled: one statement per line,
terms matched positionally with compiled patterns, escape sequences
decoded in literals and IRIs.  It covers the slice of the grammar these
corpora actually use.  Blank nodes are recognised but statements using
them are set aside with a diagnostic, since every downstream structure
keys on absolute IRIs.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from urllib.parse import urlsplit

from .public_suffix import pay_level_domain
from .values import NormalizedValue, normalize_object

OWL_SAMEAS = "http://www.w3.org/2002/07/owl#sameAs"

POLICY_HOST = "host"
POLICY_PLD = "pay_level_domain"
POLICY_NAMED_GRAPH = "named_graph"
POLICIES = (POLICY_HOST, POLICY_PLD, POLICY_NAMED_GRAPH)

FORMAT_NTRIPLES = "ntriples"
FORMAT_NQUADS = "nquads"


class MalformedLineError(ValueError):
    """Raised in strict mode for the first unparseable line."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class EncodingError(MalformedLineError):
    """Raised in strict mode for a line that is not valid UTF-8."""


class NoAuthorityError(ValueError):
    """The IRI has no usable authority component."""


@dataclass(frozen=True)
class Term:
    """Object position term: an IRI or a literal with optional annotations."""

    text: str
    is_literal: bool = False
    datatype: str | None = None
    lang: str | None = None


@dataclass(frozen=True)
class RdfStatement:
    subject: str
    predicate: str
    object: Term
    graph: str | None = None
    line: int = 0


@dataclass(frozen=True)
class Diagnostic:
    line: int
    category: str
    reason: str


@dataclass(frozen=True)
class Claim:
    entity: str
    predicate: str
    value: NormalizedValue
    source: str


@dataclass(frozen=True)
class ObjectSupport:
    value: NormalizedValue
    sources: frozenset


@dataclass(frozen=True)
class ConflictSet:
    """All mutually exclusive candidates for one (entity, predicate) slot."""

    entity: str
    predicate: str
    objects: tuple

    def __post_init__(self):
        if len(self.objects) < 2:
            raise ValueError("a conflict set needs at least two candidates")


@dataclass
class ClaimStore:
    claims: list
    conflict_sets: dict
    sources: dict
    drop_counts: dict = field(default_factory=dict)

    def conflicting_claims_of(self, source: str) -> list:
        """Claims by ``source`` that sit inside some conflict set."""
        keys = self.conflict_sets
        return [c for c in self.sources.get(source, ())
                if (c.entity, c.predicate) in keys]


_IRI_BODY = r'[^<>"{}|^`\\\x00-\x20]*'
_IRI_RE = re.compile(r"<(%s)>" % _IRI_BODY)
_BNODE_RE = re.compile(r"_:[A-Za-z0-9][A-Za-z0-9._-]*")
_LITERAL_RE = re.compile(r'"((?:[^"\\]|\\.)*)"')
_LANG_RE = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_WS_RE = re.compile(r"[ \t]+")

_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}


def _unescape(raw: str, line: int) -> str:
    if "\\" not in raw:
        return raw
    out = []
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= n:
            raise MalformedLineError(line, "dangling escape")
        key = raw[i + 1]
        if key in _ESCAPES:
            out.append(_ESCAPES[key])
            i += 2
        elif key == "u" or key == "U":
            width = 4 if key == "u" else 8
            digits = raw[i + 2:i + 2 + width]
            if len(digits) != width or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
                raise MalformedLineError(line, f"bad \\{key} escape")
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise MalformedLineError(line, f"unknown escape \\{key}")
    return "".join(out)


def _skip_ws(text: str, pos: int) -> int:
    match = _WS_RE.match(text, pos)
    return match.end() if match else pos


def _parse_term(text: str, pos: int, line: int, *, allow_literal: bool):
    """Returns (Term | "bnode", end position)."""
    if pos >= len(text):
        raise MalformedLineError(line, "unexpected end of line")
    ch = text[pos]
    if ch == "<":
        match = _IRI_RE.match(text, pos)
        if not match:
            raise MalformedLineError(line, "unterminated or invalid IRI")
        iri = _unescape(match.group(1), line)
        return Term(iri), match.end()
    if ch == "_":
        match = _BNODE_RE.match(text, pos)
        if not match:
            raise MalformedLineError(line, "invalid blank node label")
        return "bnode", match.end()
    if ch == '"' and allow_literal:
        match = _LITERAL_RE.match(text, pos)
        if not match:
            raise MalformedLineError(line, "unterminated literal")
        lexical = _unescape(match.group(1), line)
        end = match.end()
        datatype = None
        lang = None
        if text.startswith("^^", end):
            dt_match = _IRI_RE.match(text, end + 2)
            if not dt_match:
                raise MalformedLineError(line, "bad datatype IRI")
            datatype = _unescape(dt_match.group(1), line)
            end = dt_match.end()
        elif text.startswith("@", end):
            lang_match = _LANG_RE.match(text, end)
            if not lang_match:
                raise MalformedLineError(line, "bad language tag")
            lang = lang_match.group(1)
            end = lang_match.end()
        return Term(lexical, is_literal=True, datatype=datatype, lang=lang), end
    raise MalformedLineError(line, f"unexpected character {ch!r}")


def _parse_line(text: str, lineno: int, fmt: str):
    """One statement, None for blank and comment lines, or "bnode"."""
    pos = _skip_ws(text, 0)
    if pos >= len(text) or text[pos] == "#":
        return None
    subject, pos = _parse_term(text, pos, lineno, allow_literal=False)
    pos = _skip_ws(text, pos)
    predicate, pos = _parse_term(text, pos, lineno, allow_literal=False)
    pos = _skip_ws(text, pos)
    obj, pos = _parse_term(text, pos, lineno, allow_literal=True)
    pos = _skip_ws(text, pos)
    graph = None
    if pos < len(text) and text[pos] not in ".":
        if fmt != FORMAT_NQUADS:
            raise MalformedLineError(lineno, "unexpected fourth term")
        graph, pos = _parse_term(text, pos, lineno, allow_literal=False)
        pos = _skip_ws(text, pos)
    if pos >= len(text) or text[pos] != ".":
        raise MalformedLineError(lineno, "missing terminating dot")
    pos = _skip_ws(text, pos + 1)
    if pos < len(text) and text[pos] != "#":
        raise MalformedLineError(lineno, "trailing garbage after dot")
    if subject == "bnode" or predicate == "bnode" or obj == "bnode" \
            or graph == "bnode":
        return "bnode"
    if ":" not in subject.text or ":" not in predicate.text:
        raise MalformedLineError(lineno, "relative IRI in subject or predicate")
    graph_iri = graph.text if isinstance(graph, Term) else None
    return RdfStatement(subject.text, predicate.text, obj, graph_iri, lineno)


def _iter_decoded_lines(source, mode: str, diagnostics):
    if isinstance(source, str):
        source = io.StringIO(source)
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                if mode == "strict":
                    raise EncodingError(lineno, str(exc)) from exc
                if diagnostics is not None:
                    diagnostics.append(Diagnostic(lineno, "encoding", str(exc)))
                continue
        yield lineno, raw.rstrip("\r\n")


def parse_triples(source, fmt: str = FORMAT_NTRIPLES, mode: str = "lenient",
                  diagnostics: list | None = None):
    """Yield statements from a text, a string, or a binary line source.

    ``mode="strict"`` raises on the first malformed line; lenient mode
    records a diagnostic and keeps going.  Statement line numbers are
    1-based positions in the input.
    """
    if fmt not in (FORMAT_NTRIPLES, FORMAT_NQUADS):
        raise ValueError(f"unknown format: {fmt!r}")
    if mode not in ("lenient", "strict"):
        raise ValueError(f"unknown mode: {mode!r}")
    for lineno, text in _iter_decoded_lines(source, mode, diagnostics):
        try:
            parsed = _parse_line(text, lineno, fmt)
        except MalformedLineError as exc:
            if mode == "strict":
                raise
            if diagnostics is not None:
                diagnostics.append(Diagnostic(lineno, "malformed", exc.reason))
            continue
        if parsed is None:
            continue
        if parsed == "bnode":
            if diagnostics is not None:
                diagnostics.append(Diagnostic(
                    lineno, "blank_node", "blank node outside supported subset"))
            continue
        yield parsed


def _escape_literal(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")


def format_statement(st: RdfStatement) -> str:
    """Serialize one statement back to its N-Triples / N-Quads line."""
    obj = st.object
    if obj.is_literal:
        rendered = f'"{_escape_literal(obj.text)}"'
        if obj.datatype:
            rendered += f"^^<{obj.datatype}>"
        elif obj.lang:
            rendered += f"@{obj.lang}"
    else:
        rendered = f"<{obj.text}>"
    parts = [f"<{st.subject}>", f"<{st.predicate}>", rendered]
    if st.graph is not None:
        parts.append(f"<{st.graph}>")
    return " ".join(parts) + " ."


def extract_source(iri: str, policy: str = POLICY_HOST) -> str:
    """Source identifier for an IRI under the given granularity policy.

    ``host`` and ``named_graph`` take the lower-cased authority host of
    the IRI handed in (for the graph policy the caller passes the graph
    IRI); ``pay_level_domain`` shortens it to the registrable domain.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown source policy: {policy!r}")
    try:
        host = urlsplit(iri).hostname
    except ValueError as exc:
        raise NoAuthorityError(f"unparseable IRI: {iri!r}") from exc
    if not host:
        raise NoAuthorityError(f"no authority in IRI: {iri!r}")
    if policy == POLICY_PLD:
        return pay_level_domain(host)
    return host


def load_alignment(path: str) -> dict:
    """Two-column tab-separated table: predicate IRI to canonical id."""
    table = {}
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split("\t")
            if len(parts) != 2:
                raise ValueError(f"bad alignment row: {text!r}")
            table[parts[0]] = parts[1]
    return table


def _claim_source(st: RdfStatement, policy: str):
    if policy == POLICY_NAMED_GRAPH:
        if st.graph is None:
            return None, "missing_graph"
        anchor = st.graph
    else:
        anchor = st.subject
    try:
        return extract_source(anchor, policy), None
    except NoAuthorityError:
        return None, "no_source"


def build_claims(statements, clusters=None, alignment: dict | None = None,
                 policy: str = POLICY_HOST,
                 diagnostics: list | None = None) -> ClaimStore:
    """Turn parsed statements into a deduplicated claim store.

    Every dropped statement lands in exactly one drop counter, so
    ``len(claims) + sum(drop_counts.values())`` equals the number of
    statements handed in.  Identity linkage statements are counted but
    contribute no claims; they feed the graph stage instead.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown source policy: {policy!r}")
    alignment = alignment or {}
    drop_counts = {}

    def drop(category: str, st: RdfStatement, reason: str, record: bool = False):
        drop_counts[category] = drop_counts.get(category, 0) + 1
        if record and diagnostics is not None:
            diagnostics.append(Diagnostic(st.line, category, reason))

    seen = set()
    claims = []
    for st in statements:
        if st.predicate == OWL_SAMEAS:
            drop("sameas", st, "identity link, no claim")
            continue
        source, err = _claim_source(st, policy)
        if err is not None:
            drop(err, st, "cannot attribute statement to a source", record=True)
            continue
        if st.object.is_literal:
            value = normalize_object(st.object.text, st.object.datatype)
        else:
            value = normalize_object(st.object.text, is_iri=True)
        if value is None:
            drop("null_object", st, "empty or NULL object")
            continue
        predicate = alignment.get(st.predicate, st.predicate)
        entity = clusters.cluster(st.subject) if clusters is not None else st.subject
        claim = Claim(entity, predicate, value, source)
        if claim in seen:
            drop("duplicate", st, "repeated claim")
            continue
        seen.add(claim)
        claims.append(claim)

    claims.sort(key=lambda c: (c.entity, c.predicate, c.value.sort_key(),
                               c.source))
    by_slot = {}
    sources = {}
    for claim in claims:
        by_slot.setdefault((claim.entity, claim.predicate), {}) \
               .setdefault(claim.value, set()).add(claim.source)
        sources.setdefault(claim.source, []).append(claim)

    conflict_sets = {}
    for key in sorted(by_slot):
        support = by_slot[key]
        if len(support) < 2:
            continue
        objects = tuple(
            ObjectSupport(value, frozenset(support[value]))
            for value in sorted(support, key=lambda v: v.sort_key())
        )
        conflict_sets[key] = ConflictSet(key[0], key[1], objects)

    return ClaimStore(claims=claims, conflict_sets=conflict_sets,
                      sources=sources, drop_counts=drop_counts)
