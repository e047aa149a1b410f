"""Line-oriented structure-definition files.

Two document kinds share the syntax: bracketed section headers, `#`
comments, 0-based indices, and exact rational/polynomial values.

Function-model structure:

    [structure]
    name <identifier>          # optional
    base_dim <n>
    rank <r>
    skew <true|false>
    [mult]
    k i j alpha beta coeff     # mu(s,s')_k += coeff * d^alpha(s_i) d^beta(s'_j)
    [anchor]
    a j coeff                  # rho(e_j)'s d_a component
    [pairing]
    i j coeff                  # symmetric; (j,i) filled in, conflicts are errors
    [dcochain]
    k alpha coeff              # D(f)_k += coeff * d^alpha(f)

Finite KV algebra:

    [kvalgebra]
    name <identifier>          # optional
    dim <d>
    k i j value                # e_i e_j gets value * e_k
    [form]
    i j value                  # symmetric rational form

alpha/beta are comma-separated multi-indices of length base_dim; coeff is
a polynomial in x1..xn; value is a rational literal. Serialization is
canonical (sorted term order), so parse -> serialize is bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactmath import Poly, PolyParseError, grlex_key, parse_poly
from .funmodel import (
    AlgebroidStructure,
    AnchorMap,
    BiDiffOp,
    DCochain,
    DiffOp,
    Pairing,
)
from .kvfin import FinKVAlgebra, SymForm


class FormatError(ValueError):
    """Parse error with 1-based line (and, when known, column) position."""

    def __init__(self, message: str, line: int, column: Optional[int] = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


@dataclass
class ParsedDocument:
    kind: str  # "structure" | "kvalgebra"
    name: str
    structure: Optional[AlgebroidStructure] = None
    algebra: Optional[FinKVAlgebra] = None
    form: Optional[SymForm] = None


_STRUCT_SECTIONS = ("structure", "mult", "anchor", "pairing", "dcochain")
_KV_SECTIONS = ("kvalgebra", "form")


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _parse_multi_index(text: str, base_dim: int, lineno: int):
    parts = text.split(",")
    if len(parts) != base_dim:
        raise FormatError(
            f"multi-index {text!r} has {len(parts)} entries, expected {base_dim}",
            lineno,
        )
    try:
        idx = tuple(int(p) for p in parts)
    except ValueError:
        raise FormatError(f"bad multi-index {text!r}", lineno) from None
    if any(i < 0 for i in idx):
        raise FormatError(f"negative entry in multi-index {text!r}", lineno)
    return idx


def _parse_coeff(text: str, base_dim: int, lineno: int, col0: int) -> Poly:
    try:
        return parse_poly(text, base_dim)
    except PolyParseError as exc:
        col = col0 + exc.position + 1
        raise FormatError(f"bad polynomial: {exc}", lineno, col) from None


def _parse_rational(text: str, lineno: int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational literal {text!r}", lineno) from None


def _parse_int_field(text: str, what: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"bad {what} {text!r}", lineno) from None


def parse_document(text: str) -> ParsedDocument:
    lines = text.splitlines()
    # locate the first header to decide the document kind
    section = None
    kind = None
    name = ""
    head: dict = {}
    mult_terms = []
    anchor_entries = {}
    pairing_entries = {}
    d_entries = {}
    kv_entries = {}
    form_entries = {}
    seen_head_keys = set()

    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if kind is None:
                if section == "structure":
                    kind = "structure"
                elif section == "kvalgebra":
                    kind = "kvalgebra"
                else:
                    raise FormatError(
                        "document must open with [structure] or [kvalgebra]", lineno
                    )
            allowed = _STRUCT_SECTIONS if kind == "structure" else _KV_SECTIONS
            if section not in allowed:
                raise FormatError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise FormatError("content before the first section header", lineno)

        if section in ("structure", "kvalgebra") and not line[0].isdigit() and line[0] != "-":
            key, _, value = line.partition(" ")
            value = value.strip()
            if not value:
                raise FormatError(f"key {key!r} has no value", lineno)
            if key in seen_head_keys:
                raise FormatError(f"duplicate key {key!r}", lineno)
            seen_head_keys.add(key)
            head[key] = (value, lineno)
            continue

        fields = line.split()
        if section == "mult":
            parts = line.split(None, 5)
            if len(parts) != 6:
                raise FormatError("expected: k i j alpha beta coeff", lineno)
            k, i, j = (_parse_int_field(p, "index", lineno) for p in parts[:3])
            base_dim = _head_int(head, "base_dim", lineno)
            alpha = _parse_multi_index(parts[3], base_dim, lineno)
            beta = _parse_multi_index(parts[4], base_dim, lineno)
            coeff = _parse_coeff(parts[5], base_dim, lineno, line.rfind(parts[5]))
            mult_terms.append((k, i, j, alpha, beta, coeff))
        elif section == "anchor":
            parts = line.split(None, 2)
            if len(parts) != 3:
                raise FormatError("expected: a j coeff", lineno)
            a = _parse_int_field(parts[0], "index", lineno)
            j = _parse_int_field(parts[1], "index", lineno)
            base_dim = _head_int(head, "base_dim", lineno)
            coeff = _parse_coeff(parts[2], base_dim, lineno, line.rfind(parts[2]))
            if (a, j) in anchor_entries:
                raise FormatError(f"duplicate anchor entry {a} {j}", lineno)
            anchor_entries[(a, j)] = coeff
        elif section == "pairing":
            parts = line.split(None, 2)
            if len(parts) != 3:
                raise FormatError("expected: i j coeff", lineno)
            i = _parse_int_field(parts[0], "index", lineno)
            j = _parse_int_field(parts[1], "index", lineno)
            base_dim = _head_int(head, "base_dim", lineno)
            coeff = _parse_coeff(parts[2], base_dim, lineno, line.rfind(parts[2]))
            key = (min(i, j), max(i, j))
            if key in pairing_entries:
                if pairing_entries[key] != coeff:
                    raise FormatError(
                        f"conflicting pairing entries for ({i},{j})", lineno
                    )
                raise FormatError(f"duplicate pairing entry {i} {j}", lineno)
            pairing_entries[key] = coeff
        elif section == "dcochain":
            parts = line.split(None, 2)
            if len(parts) != 3:
                raise FormatError("expected: k alpha coeff", lineno)
            k = _parse_int_field(parts[0], "index", lineno)
            base_dim = _head_int(head, "base_dim", lineno)
            alpha = _parse_multi_index(parts[1], base_dim, lineno)
            coeff = _parse_coeff(parts[2], base_dim, lineno, line.rfind(parts[2]))
            if (k, alpha) in d_entries:
                raise FormatError(f"duplicate dcochain entry {k} {parts[1]}", lineno)
            d_entries[(k, alpha)] = coeff
        elif section == "kvalgebra":
            if len(fields) != 4:
                raise FormatError("expected: k i j value", lineno)
            k, i, j = (_parse_int_field(p, "index", lineno) for p in fields[:3])
            if (k, i, j) in kv_entries:
                raise FormatError(f"duplicate product entry {k} {i} {j}", lineno)
            kv_entries[(k, i, j)] = _parse_rational(fields[3], lineno)
        elif section == "form":
            if len(fields) != 3:
                raise FormatError("expected: i j value", lineno)
            i = _parse_int_field(fields[0], "index", lineno)
            j = _parse_int_field(fields[1], "index", lineno)
            value = _parse_rational(fields[2], lineno)
            key = (min(i, j), max(i, j))
            if key in form_entries:
                if form_entries[key] != value:
                    raise FormatError(f"conflicting form entries for ({i},{j})", lineno)
                raise FormatError(f"duplicate form entry {i} {j}", lineno)
            form_entries[key] = value
        else:
            raise FormatError(f"unexpected data line in [{section}]", lineno)

    if kind is None:
        raise FormatError("empty document", max(len(lines), 1))

    name = head.get("name", ("", 0))[0]

    if kind == "structure":
        base_dim = _head_int(head, "base_dim", 1)
        rank = _head_int(head, "rank", 1)
        skew_text, skew_line = head.get("skew", ("false", 0))
        if skew_text not in ("true", "false"):
            raise FormatError("skew must be true or false", skew_line)
        _validate_indices(mult_terms, rank, base_dim, anchor_entries, pairing_entries, d_entries)
        mult = BiDiffOp(rank, base_dim, mult_terms, skew=(skew_text == "true"))
        anchor_matrix = [
            [anchor_entries.get((a, j), Poly.zero(base_dim)) for j in range(rank)]
            for a in range(base_dim)
        ]
        anchor = AnchorMap(base_dim, rank, anchor_matrix)
        pairing = None
        if pairing_entries:
            g = [[Poly.zero(base_dim) for _ in range(rank)] for _ in range(rank)]
            for (i, j), coeff in pairing_entries.items():
                g[i][j] = coeff
                g[j][i] = coeff
            pairing = Pairing(rank, base_dim, g)
        d_cochain = None
        if d_entries:
            comps = [dict() for _ in range(rank)]
            for (k, alpha), coeff in d_entries.items():
                comps[k][alpha] = coeff
            d_cochain = DCochain(rank, base_dim, [DiffOp(base_dim, c) for c in comps])
        structure = AlgebroidStructure(rank, base_dim, mult, anchor, pairing, d_cochain)
        return ParsedDocument("structure", name, structure=structure)

    dim = _head_int(head, "dim", 1)
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (k, i, j), value in kv_entries.items():
        if not all(0 <= t < dim for t in (k, i, j)):
            raise FormatError(f"product index out of range: {k} {i} {j}", 1)
        c[i][j][k] = value
    algebra = FinKVAlgebra(dim, c)
    form = None
    if form_entries:
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for (i, j), value in form_entries.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise FormatError(f"form index out of range: {i} {j}", 1)
            m[i][j] = value
            m[j][i] = value
        form = SymForm(m)
    return ParsedDocument("kvalgebra", name, algebra=algebra, form=form)


def _head_int(head: dict, key: str, lineno: int) -> int:
    if key not in head:
        raise FormatError(f"missing required key {key!r}", lineno)
    value, keyline = head[key]
    out = _parse_int_field(value, key, keyline)
    if out <= 0:
        raise FormatError(f"{key} must be positive", keyline)
    return out


def _validate_indices(mult_terms, rank, base_dim, anchor_entries, pairing_entries, d_entries):
    for k, i, j, alpha, beta, _ in mult_terms:
        if not all(0 <= t < rank for t in (k, i, j)):
            raise FormatError(f"mult component index out of range: {k} {i} {j}", 1)
    for a, j in anchor_entries:
        if not (0 <= a < base_dim and 0 <= j < rank):
            raise FormatError(f"anchor index out of range: {a} {j}", 1)
    for i, j in pairing_entries:
        if not (0 <= i < rank and 0 <= j < rank):
            raise FormatError(f"pairing index out of range: {i} {j}", 1)
    for k, alpha in d_entries:
        if not 0 <= k < rank:
            raise FormatError(f"dcochain component out of range: {k}", 1)


# ---------------------------------------------------------------------------
# Canonical serialization.
# ---------------------------------------------------------------------------


def _fmt_idx(alpha) -> str:
    return ",".join(str(a) for a in alpha)


def serialize_structure(S: AlgebroidStructure, name: str = "") -> str:
    lines = ["[structure]"]
    if name:
        lines.append(f"name {name}")
    lines.append(f"base_dim {S.base_dim}")
    lines.append(f"rank {S.rank}")
    lines.append(f"skew {'true' if S.mult.skew else 'false'}")
    if S.mult.terms:
        lines.append("[mult]")
        for (k, i, j, alpha, beta), coeff in S.mult.terms:
            lines.append(f"{k} {i} {j} {_fmt_idx(alpha)} {_fmt_idx(beta)} {coeff}")
    anchor_lines = []
    for a in range(S.base_dim):
        for j in range(S.rank):
            coeff = S.anchor.matrix[a][j]
            if not coeff.is_zero():
                anchor_lines.append(f"{a} {j} {coeff}")
    if anchor_lines:
        lines.append("[anchor]")
        lines.extend(anchor_lines)
    if S.pairing is not None:
        lines.append("[pairing]")
        for i in range(S.rank):
            for j in range(i, S.rank):
                coeff = S.pairing.matrix[i][j]
                if not coeff.is_zero():
                    lines.append(f"{i} {j} {coeff}")
    if S.d_cochain is not None:
        lines.append("[dcochain]")
        for k, op in enumerate(S.d_cochain.components):
            for alpha in sorted(op.terms, key=grlex_key):
                lines.append(f"{k} {_fmt_idx(alpha)} {op.terms[alpha]}")
    return "\n".join(lines) + "\n"


def serialize_kvalgebra(A: FinKVAlgebra, form: Optional[SymForm] = None, name: str = "") -> str:
    lines = ["[kvalgebra]"]
    if name:
        lines.append(f"name {name}")
    lines.append(f"dim {A.dim}")
    for k in range(A.dim):
        for i in range(A.dim):
            for j in range(A.dim):
                value = A.c[i][j][k]
                if value:
                    lines.append(f"{k} {i} {j} {value}")
    if form is not None:
        lines.append("[form]")
        for i in range(form.dim):
            for j in range(i, form.dim):
                if form.matrix[i][j]:
                    lines.append(f"{i} {j} {form.matrix[i][j]}")
    return "\n".join(lines) + "\n"


def serialize_document(doc: ParsedDocument) -> str:
    if doc.kind == "structure":
        return serialize_structure(doc.structure, doc.name)
    return serialize_kvalgebra(doc.algebra, doc.form, doc.name)
