"""The computable bundle model: sections as polynomial tuples, the
structure maps (multiplication, anchor, pairing, D) as multidifferential
operators, and the exact identity-decision engine.

A :class:`MultiDiffOp` is the canonical form of a real-multilinear
multidifferential operator: a sum of terms

    coeff(x) * prod_t d^{alpha_t}( input_t[component_t] )

with polynomial coefficients. Every "for all sections / functions" axiom
is decided by composing structure operators into this canonical form and
subtracting: the canonical form of a nonzero operator is nonzero, and a
witness input is then recovered by sweeping monomial test inputs in
graded-lexicographic order. An operator of order m is determined by its
action on monomials of degree <= m, so the sweep bound makes the witness
search complete, never a sampling heuristic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import (
    Poly,
    grlex_key,
    mat_inverse,
    monomials_upto,
    poly_matrix_det,
)

SECTION = "s"
FUNCTION = "f"


class Section:
    """Rank-r tuple of polynomials sharing one base dimension."""

    __slots__ = ("rank", "base_dim", "components")

    def __init__(self, components: Sequence[Poly]):
        components = tuple(components)
        if not components:
            raise ValueError("a section needs at least one component")
        base_dim = components[0].base_dim
        if any(c.base_dim != base_dim for c in components):
            raise ValueError("components disagree on base_dim")
        self.rank = len(components)
        self.base_dim = base_dim
        self.components = components

    @staticmethod
    def zero(rank: int, base_dim: int) -> "Section":
        return Section([Poly.zero(base_dim)] * rank)

    @staticmethod
    def basis(rank: int, base_dim: int, index: int, coeff: Optional[Poly] = None) -> "Section":
        comps = [Poly.zero(base_dim)] * rank
        comps[index] = coeff if coeff is not None else Poly.constant(base_dim, 1)
        return Section(comps)

    def __add__(self, other: "Section") -> "Section":
        return Section([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "Section") -> "Section":
        return Section([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "Section":
        return Section([-a for a in self.components])

    def scale(self, f) -> "Section":
        """Module action f.s, componentwise; f may be a Poly or a rational."""
        if isinstance(f, Poly):
            return Section([f * c for c in self.components])
        return Section([c.scale(f) for c in self.components])

    __rmul__ = scale

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, Section) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"Section{self}"


class DiffOp:
    """Scalar differential operator sum_alpha c_alpha(x) d^alpha with
    polynomial coefficients."""

    __slots__ = ("base_dim", "terms")

    def __init__(self, base_dim: int, terms=None):
        self.base_dim = base_dim
        clean = {}
        if terms:
            for alpha, coeff in (terms.items() if isinstance(terms, dict) else terms):
                alpha = tuple(int(a) for a in alpha)
                if len(alpha) != base_dim:
                    raise ValueError("multi-index length != base_dim")
                if not isinstance(coeff, Poly):
                    coeff = Poly.constant(base_dim, coeff)
                if not coeff.is_zero():
                    acc = clean.get(alpha)
                    coeff = coeff if acc is None else acc + coeff
                    if coeff.is_zero():
                        clean.pop(alpha, None)
                    else:
                        clean[alpha] = coeff
        self.terms = clean

    @property
    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def apply(self, f: Poly) -> Poly:
        out = Poly.zero(self.base_dim)
        for alpha, coeff in self.terms.items():
            out = out + coeff * f.diff_multi(alpha)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffOp)
            and self.base_dim == other.base_dim
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.base_dim, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=grlex_key):
            coeff = self.terms[alpha]
            ds = "*".join(
                f"d{i + 1}" + (f"^{a}" if a > 1 else "")
                for i, a in enumerate(alpha)
                if a
            )
            cs = str(coeff)
            if " " in cs:
                cs = f"({cs})"
            parts.append(f"{cs}*{ds}" if ds else cs)
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self})"


# ---------------------------------------------------------------------------
# Canonical multidifferential operators.
# ---------------------------------------------------------------------------

# term key: (out_component_or_None, ((slot_component_or_None, alpha), ...))


class MultiDiffOp:
    """Canonical multilinear multidifferential operator.

    slots: tuple of SECTION/FUNCTION markers, one per input slot.
    output: SECTION or FUNCTION.
    terms: map from (out_comp, slot_keys) to a Poly coefficient, where
    slot_keys holds one (component, alpha) pair per slot (component is
    None for function slots).
    """

    __slots__ = ("rank", "base_dim", "slots", "output", "terms")

    def __init__(self, rank, base_dim, slots, output, terms=None):
        self.rank = rank
        self.base_dim = base_dim
        self.slots = tuple(slots)
        self.output = output
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, coeff in items:
                if not isinstance(coeff, Poly):
                    coeff = Poly.constant(base_dim, coeff)
                if coeff.is_zero():
                    continue
                acc = clean.get(key)
                coeff = coeff if acc is None else acc + coeff
                if coeff.is_zero():
                    clean.pop(key, None)
                else:
                    clean[key] = coeff
        self.terms = clean

    # -- bookkeeping ----------------------------------------------------

    def _like(self, terms) -> "MultiDiffOp":
        return MultiDiffOp(self.rank, self.base_dim, self.slots, self.output, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Max total derivative order across all slots of any term."""
        return max(
            (sum(sum(alpha) for _, alpha in skeys) for _, skeys in self.terms),
            default=0,
        )

    def slot_order(self, pos: int) -> int:
        return max((sum(skeys[pos][1]) for _, skeys in self.terms), default=0)

    def same_signature(self, other: "MultiDiffOp") -> bool:
        return (
            self.rank == other.rank
            and self.base_dim == other.base_dim
            and self.slots == other.slots
            and self.output == other.output
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiDiffOp)
            and self.same_signature(other)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.slots, self.output, frozenset(self.terms.items())))

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "MultiDiffOp") -> "MultiDiffOp":
        if not self.same_signature(other):
            raise ValueError("operator signatures differ")
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = terms.get(key)
            total = coeff if acc is None else acc + coeff
            if total.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = total
        return self._like(terms)

    def __neg__(self) -> "MultiDiffOp":
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MultiDiffOp") -> "MultiDiffOp":
        return self + (-other)

    def scale(self, scalar) -> "MultiDiffOp":
        scalar = Fraction(scalar)
        if not scalar:
            return self._like({})
        return self._like({k: c.scale(scalar) for k, c in self.terms.items()})

    # -- operator algebra --------------------------------------------------

    def component(self, comp: Optional[int]) -> "MultiDiffOp":
        """Project a section-output operator to one function-output
        component (comp=None returns a function-output operator as is)."""
        if self.output == FUNCTION:
            if comp is not None:
                raise ValueError("function output has no components")
            return self
        terms = {
            (None, skeys): coeff
            for (out, skeys), coeff in self.terms.items()
            if out == comp
        }
        return MultiDiffOp(self.rank, self.base_dim, self.slots, FUNCTION, terms)

    def derive(self, index: int) -> "MultiDiffOp":
        """d/dx_index composed with a function-output operator (Leibniz
        over the coefficient and every slot factor)."""
        if self.output != FUNCTION:
            raise ValueError("derive only applies to function-output operators")
        terms = []
        for (out, skeys), coeff in self.terms.items():
            dc = coeff.diff(index)
            if not dc.is_zero():
                terms.append(((out, skeys), dc))
            for t, (comp, alpha) in enumerate(skeys):
                bumped = list(alpha)
                bumped[index] += 1
                new_keys = skeys[:t] + ((comp, tuple(bumped)),) + skeys[t + 1 :]
                terms.append(((out, new_keys), coeff))
        return self._like(terms)

    def derive_multi(self, alpha: Sequence[int]) -> "MultiDiffOp":
        op = self
        for i, a in enumerate(alpha):
            for _ in range(a):
                op = op.derive(i)
        return op

    def permute(self, perm: Sequence[int]) -> "MultiDiffOp":
        """Reorder slots: new slot i is old slot perm[i]."""
        perm = tuple(perm)
        if sorted(perm) != list(range(len(self.slots))):
            raise ValueError("not a permutation of the slots")
        slots = tuple(self.slots[p] for p in perm)
        terms = {}
        for (out, skeys), coeff in self.terms.items():
            key = (out, tuple(skeys[p] for p in perm))
            acc = terms.get(key)
            terms[key] = coeff if acc is None else acc + coeff
        return MultiDiffOp(self.rank, self.base_dim, slots, self.output, terms)

    def compose(self, pos: int, inner: "MultiDiffOp") -> "MultiDiffOp":
        """Plug `inner` into slot `pos`; the plugged slot's kind must match
        inner's output. Result slots: self.slots with slot pos replaced by
        inner.slots."""
        if inner.rank != self.rank or inner.base_dim != self.base_dim:
            raise ValueError("operator shapes differ")
        if self.slots[pos] != inner.output:
            raise ValueError("slot kind does not match inner output")
        slots = self.slots[:pos] + inner.slots + self.slots[pos + 1 :]
        # cache derived inner components, keyed by (component, alpha)
        derived = {}
        terms = []
        for (out, skeys), coeff in self.terms.items():
            comp, alpha = skeys[pos]
            key = (comp, alpha)
            if key not in derived:
                derived[key] = inner.component(comp).derive_multi(alpha)
            for (_, in_keys), in_coeff in derived[key].terms.items():
                new_keys = skeys[:pos] + in_keys + skeys[pos + 1 :]
                terms.append(((out, new_keys), coeff * in_coeff))
        return MultiDiffOp(self.rank, self.base_dim, slots, self.output, terms)

    def product(self, other: "MultiDiffOp") -> "MultiDiffOp":
        """Pointwise product; self must be function-valued. Result slots are
        self.slots followed by other.slots, output is other's."""
        if self.output != FUNCTION:
            raise ValueError("left factor of a product must be function-valued")
        if other.rank != self.rank or other.base_dim != self.base_dim:
            raise ValueError("operator shapes differ")
        terms = []
        for (_, skeys1), c1 in self.terms.items():
            for (out, skeys2), c2 in other.terms.items():
                terms.append(((out, skeys1 + skeys2), c1 * c2))
        return MultiDiffOp(
            self.rank, self.base_dim, self.slots + other.slots, other.output, terms
        )

    # -- evaluation ---------------------------------------------------------

    def bind(self, pos: int, value) -> "MultiDiffOp":
        """Substitute a concrete Section/Poly into slot pos."""
        if self.slots[pos] == SECTION:
            if not isinstance(value, Section) or value.rank != self.rank:
                raise ValueError("expected a rank-matching Section")
            comps = value.components
        else:
            if not isinstance(value, Poly) or value.base_dim != self.base_dim:
                raise ValueError("expected a Poly over the structure's base")
            comps = None
        slots = self.slots[:pos] + self.slots[pos + 1 :]
        terms = []
        for (out, skeys), coeff in self.terms.items():
            comp, alpha = skeys[pos]
            target = value if comps is None else comps[comp]
            factor = target.diff_multi(alpha)
            if factor.is_zero():
                continue
            terms.append(((out, skeys[:pos] + skeys[pos + 1 :]), coeff * factor))
        return MultiDiffOp(self.rank, self.base_dim, slots, self.output, terms)

    def apply(self, *inputs):
        """Evaluate on concrete inputs; returns a Poly or a Section."""
        if len(inputs) != len(self.slots):
            raise ValueError(f"expected {len(self.slots)} inputs, got {len(inputs)}")
        if self.output == FUNCTION:
            total = Poly.zero(self.base_dim)
        else:
            acc = [Poly.zero(self.base_dim) for _ in range(self.rank)]
        for (out, skeys), coeff in self.terms.items():
            val = coeff
            for (comp, alpha), value in zip(skeys, inputs):
                target = value if comp is None else value.components[comp]
                val = val * target.diff_multi(alpha)
                if val.is_zero():
                    break
            else:
                if out is None:
                    total = total + val
                else:
                    acc[out] = acc[out] + val
        return total if self.output == FUNCTION else Section(acc)


# ---------------------------------------------------------------------------
# Primitive operators.
# ---------------------------------------------------------------------------


def section_identity(rank: int, base_dim: int) -> MultiDiffOp:
    zero = (0,) * base_dim
    terms = {(k, ((k, zero),)): Poly.constant(base_dim, 1) for k in range(rank)}
    return MultiDiffOp(rank, base_dim, (SECTION,), SECTION, terms)

def function_identity(rank: int, base_dim: int) -> MultiDiffOp:
    zero = (0,) * base_dim
    return MultiDiffOp(
        rank, base_dim, (FUNCTION,), FUNCTION,
        {(None, ((None, zero),)): Poly.constant(base_dim, 1)},
    )

def module_action(rank: int, base_dim: int) -> MultiDiffOp:
    """(f, s) -> f.s"""
    zero = (0,) * base_dim
    terms = {
        (k, ((None, zero), (k, zero))): Poly.constant(base_dim, 1) for k in range(rank)
    }
    return MultiDiffOp(rank, base_dim, (FUNCTION, SECTION), SECTION, terms)

def function_product(rank: int, base_dim: int) -> MultiDiffOp:
    """(f, g) -> f*g"""
    zero = (0,) * base_dim
    return MultiDiffOp(
        rank, base_dim, (FUNCTION, FUNCTION), FUNCTION,
        {(None, ((None, zero), (None, zero))): Poly.constant(base_dim, 1)},
    )


# ---------------------------------------------------------------------------
# Structure data.
# ---------------------------------------------------------------------------


class BiDiffOp:
    """Bilinear bidifferential operator on sections, given in frame terms:

        mu(s, s')_k += coeff * d^alpha(s_i) * d^beta(s'_j)

    The skew flag is a declaration; checkers verify it, never assume it.
    """

    def __init__(self, rank: int, base_dim: int, terms, skew: bool = False):
        self.rank = rank
        self.base_dim = base_dim
        merged = {}
        for k, i, j, alpha, beta, coeff in terms:
            alpha, beta = tuple(alpha), tuple(beta)
            if not isinstance(coeff, Poly):
                coeff = Poly.constant(base_dim, coeff)
            key = (k, i, j, alpha, beta)
            acc = merged.get(key)
            coeff = coeff if acc is None else acc + coeff
            if coeff.is_zero():
                merged.pop(key, None)
            else:
                merged[key] = coeff
        self.terms = tuple(sorted(merged.items()))
        self.skew = skew
        self.slot_order = max(
            (max(sum(a), sum(b)) for (_, _, _, a, b), _ in self.terms), default=0
        )
        self._op = None

    def as_op(self) -> MultiDiffOp:
        if self._op is None:
            terms = [
                ((k, ((i, alpha), (j, beta))), coeff)
                for (k, i, j, alpha, beta), coeff in self.terms
            ]
            self._op = MultiDiffOp(
                self.rank, self.base_dim, (SECTION, SECTION), SECTION, terms
            )
        return self._op

    def __eq__(self, other):
        return (
            isinstance(other, BiDiffOp)
            and (self.rank, self.base_dim, self.skew) == (other.rank, other.base_dim, other.skew)
            and self.terms == other.terms
        )


class AnchorMap:
    """rho(e_j) = sum_a p[a][j] d/dx_a; extends F(M)-linearly to sections."""

    def __init__(self, base_dim: int, rank: int, matrix: Sequence[Sequence[Poly]]):
        self.base_dim = base_dim
        self.rank = rank
        if len(matrix) != base_dim or any(len(row) != rank for row in matrix):
            raise ValueError("anchor matrix must be base_dim x rank")
        self.matrix = tuple(tuple(row) for row in matrix)
        self._op = None

    @staticmethod
    def zero(base_dim: int, rank: int) -> "AnchorMap":
        z = Poly.zero(base_dim)
        return AnchorMap(base_dim, rank, [[z] * rank for _ in range(base_dim)])

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.matrix for p in row)

    def as_op(self) -> MultiDiffOp:
        if self._op is None:
            zero = (0,) * self.base_dim
            terms = []
            for a in range(self.base_dim):
                e_a = tuple(1 if i == a else 0 for i in range(self.base_dim))
                for j in range(self.rank):
                    coeff = self.matrix[a][j]
                    if not coeff.is_zero():
                        terms.append(((None, ((j, zero), (None, e_a))), coeff))
            self._op = MultiDiffOp(
                self.rank, self.base_dim, (SECTION, FUNCTION), FUNCTION, terms
            )
        return self._op

    def vector_field(self, s: Section) -> DiffOp:
        """rho(s) as a first-order differential operator on functions."""
        terms = {}
        for a in range(self.base_dim):
            e_a = tuple(1 if i == a else 0 for i in range(self.base_dim))
            coeff = Poly.zero(self.base_dim)
            for j in range(self.rank):
                coeff = coeff + self.matrix[a][j] * s.components[j]
            if not coeff.is_zero():
                terms[e_a] = coeff
        return DiffOp(self.base_dim, terms)

    def __eq__(self, other):
        return isinstance(other, AnchorMap) and self.matrix == other.matrix


class Pairing:
    """Symmetric bilinear form <s, s'> = sum g_ij s_i s'_j with g_ij Poly."""

    def __init__(self, rank: int, base_dim: int, matrix: Sequence[Sequence[Poly]]):
        self.rank = rank
        self.base_dim = base_dim
        if len(matrix) != rank or any(len(row) != rank for row in matrix):
            raise ValueError("pairing matrix must be rank x rank")
        for i in range(rank):
            for j in range(i):
                if matrix[i][j] != matrix[j][i]:
                    raise ValueError("pairing matrix must be symmetric")
        self.matrix = tuple(tuple(row) for row in matrix)
        self._op = None

    def value(self, s: Section, sp: Section) -> Poly:
        out = Poly.zero(self.base_dim)
        for i in range(self.rank):
            for j in range(self.rank):
                g = self.matrix[i][j]
                if not g.is_zero():
                    out = out + g * s.components[i] * sp.components[j]
        return out

    def det(self) -> Poly:
        return poly_matrix_det(self.matrix)

    def nondegenerate(self, strict: bool = False) -> bool:
        """Generic mode: det(g) is a nonzero polynomial. Strict mode: det(g)
        is a nonzero constant (pointwise nondegeneracy over the base)."""
        d = self.det()
        if strict:
            return d.is_constant() and not d.is_zero()
        return not d.is_zero()

    def as_op(self) -> MultiDiffOp:
        if self._op is None:
            zero = (0,) * self.base_dim
            terms = []
            for i in range(self.rank):
                for j in range(self.rank):
                    g = self.matrix[i][j]
                    if not g.is_zero():
                        terms.append(((None, ((i, zero), (j, zero))), g))
            self._op = MultiDiffOp(
                self.rank, self.base_dim, (SECTION, SECTION), FUNCTION, terms
            )
        return self._op

    def __eq__(self, other):
        return isinstance(other, Pairing) and self.matrix == other.matrix


class DCochain:
    """Degree-1 cochain D(f) = sum_k D_k(f) e_k with each D_k of order <= 1."""

    def __init__(self, rank: int, base_dim: int, components: Sequence[DiffOp]):
        if len(components) != rank:
            raise ValueError("need one DiffOp per fibre component")
        for op in components:
            if op.order > 1:
                raise ValueError("D components must be differential operators of order <= 1")
        self.rank = rank
        self.base_dim = base_dim
        self.components = tuple(components)
        self._op = None

    @staticmethod
    def zero(rank: int, base_dim: int) -> "DCochain":
        return DCochain(rank, base_dim, [DiffOp(base_dim)] * rank)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def apply(self, f: Poly) -> Section:
        return Section([op.apply(f) for op in self.components])

    def as_op(self) -> MultiDiffOp:
        if self._op is None:
            terms = []
            for k, op in enumerate(self.components):
                for alpha, coeff in op.terms.items():
                    terms.append(((k, ((None, alpha),)), coeff))
            self._op = MultiDiffOp(
                self.rank, self.base_dim, (FUNCTION,), SECTION, terms
            )
        return self._op

    def __eq__(self, other):
        return isinstance(other, DCochain) and self.components == other.components


@dataclass
class AlgebroidStructure:
    """Bundle data: rank, base dimension, multiplication, anchor, and the
    optional pairing / D decorations consumed by the axiom profiles."""

    rank: int
    base_dim: int
    mult: BiDiffOp
    anchor: AnchorMap
    pairing: Optional[Pairing] = None
    d_cochain: Optional[DCochain] = None

    def __post_init__(self):
        parts = [self.mult, self.anchor] + [
            p for p in (self.pairing, self.d_cochain) if p is not None
        ]
        for part in parts:
            if part.rank != self.rank or part.base_dim != self.base_dim:
                raise ValueError("structure parts disagree on rank/base_dim")

    # primitive operators
    def mult_op(self) -> MultiDiffOp:
        return self.mult.as_op()

    def anchor_op(self) -> MultiDiffOp:
        return self.anchor.as_op()

    def pairing_op(self) -> MultiDiffOp:
        if self.pairing is None:
            raise ValueError("structure has no pairing")
        return self.pairing.as_op()

    def d_op(self) -> MultiDiffOp:
        if self.d_cochain is None:
            raise ValueError("structure has no D cochain")
        return self.d_cochain.as_op()

    def __eq__(self, other):
        return (
            isinstance(other, AlgebroidStructure)
            and (self.rank, self.base_dim) == (other.rank, other.base_dim)
            and self.mult == other.mult
            and self.anchor == other.anchor
            and self.pairing == other.pairing
            and self.d_cochain == other.d_cochain
        )


def apply_mult(S: AlgebroidStructure, s: Section, sp: Section) -> Section:
    if s.rank != S.rank or sp.rank != S.rank:
        raise ValueError("section rank != structure rank")
    if s.base_dim != S.base_dim or sp.base_dim != S.base_dim:
        raise ValueError("section base_dim != structure base_dim")
    return S.mult_op().apply(s, sp)


def apply_anchor(S: AlgebroidStructure, s: Section, f: Poly) -> Poly:
    if s.rank != S.rank or f.base_dim != S.base_dim:
        raise ValueError("shape mismatch")
    return S.anchor_op().apply(s, f)


def apply_d(S: AlgebroidStructure, f: Poly) -> Section:
    if S.d_cochain is None:
        raise ValueError("structure has no D cochain")
    return S.d_cochain.apply(f)


def pairing_value(S: AlgebroidStructure, s: Section, sp: Section) -> Poly:
    if S.pairing is None:
        raise ValueError("structure has no pairing")
    return S.pairing.value(s, sp)


# ---------------------------------------------------------------------------
# Canonical test inputs and the identity decision.
# ---------------------------------------------------------------------------


def function_inputs(base_dim: int, max_degree: int):
    """Monomial test functions in graded-lexicographic order."""
    return [Poly.monomial(base_dim, e) for e in monomials_upto(base_dim, max_degree)]


def section_inputs(rank: int, base_dim: int, max_degree: int):
    """Monomial-times-basis-vector test sections, ordered by (grlex
    monomial, component index)."""
    out = []
    for expo in monomials_upto(base_dim, max_degree):
        for comp in range(rank):
            out.append(Section.basis(rank, base_dim, comp, Poly.monomial(base_dim, expo)))
    return out


@dataclass(frozen=True)
class Witness:
    """A concrete failing input with its nonzero residual."""

    inputs: tuple
    residual: object  # Poly, Section, or DiffOp

    def __str__(self):
        ins = ", ".join(str(v) for v in self.inputs)
        return f"inputs=({ins}); residual={self.residual}"


def find_witness(diff: MultiDiffOp, max_degree: int) -> Witness:
    """First input tuple (canonical order) on which a nonzero canonical
    operator evaluates to a nonzero residual."""
    pools = []
    for kind in diff.slots:
        if kind == FUNCTION:
            pools.append(function_inputs(diff.base_dim, max_degree))
        else:
            pools.append(section_inputs(diff.rank, diff.base_dim, max_degree))
    for combo in itertools.product(*pools):
        residual = diff.apply(*combo)
        nonzero = not residual.is_zero()
        if nonzero:
            return Witness(tuple(combo), residual)
    raise AssertionError(
        "nonzero canonical operator with no witness inside the degree bound"
    )


def operator_equal(
    lhs: MultiDiffOp, rhs: MultiDiffOp, order_bound: Optional[int] = None
) -> Optional[Witness]:
    """Decide lhs == rhs as operators on all polynomial inputs.

    Returns None when equal, else the first failing monomial input (in
    graded-lexicographic enumeration order) with its nonzero residual.
    The decision is complete: an operator of order m is determined by its
    action on monomials of degree <= m, and the sweep bound is
    order_bound + 1.
    """
    if not lhs.same_signature(rhs):
        raise ValueError("operator signatures differ")
    needed = max(lhs.order(), rhs.order())
    if order_bound is None:
        order_bound = needed
    elif order_bound < needed:
        raise ValueError(
            f"order_bound {order_bound} below the computed composition order {needed}"
        )
    diff = lhs - rhs
    if diff.is_zero():
        return None
    return find_witness(diff, order_bound + 1)


# ---------------------------------------------------------------------------
# Constant linear changes of frame (used to generate randomized instances).
# ---------------------------------------------------------------------------


def conjugate(S: AlgebroidStructure, A: Sequence[Sequence]) -> AlgebroidStructure:
    """Pull the structure back along the constant frame change e -> A e:
    mult'(s,s') = A^-1 mult(As, As'), anchor' = anchor o A, pairing' =
    A^T g A, D' = A^-1 D. Every axiom profile is invariant under this."""
    r, n = S.rank, S.base_dim
    A = [[Fraction(v) for v in row] for row in A]
    Ainv = mat_inverse(A)
    if Ainv is None:
        raise ValueError("frame change must be invertible")

    mult_terms = []
    for (k, i, j, alpha, beta), coeff in S.mult.terms:
        for m in range(r):
            if not Ainv[m][k]:
                continue
            for p in range(r):
                if not A[i][p]:
                    continue
                for q in range(r):
                    if not A[j][q]:
                        continue
                    mult_terms.append(
                        (m, p, q, alpha, beta, coeff.scale(Ainv[m][k] * A[i][p] * A[j][q]))
                    )
    mult = BiDiffOp(r, n, mult_terms, skew=S.mult.skew)

    anchor_matrix = [
        [
            sum(
                (S.anchor.matrix[a][j].scale(A[j][q]) for j in range(r)),
                Poly.zero(n),
            )
            for q in range(r)
        ]
        for a in range(n)
    ]
    anchor = AnchorMap(n, r, anchor_matrix)

    pairing = None
    if S.pairing is not None:
        g = S.pairing.matrix
        new_g = [
            [
                sum(
                    (g[i][j].scale(A[i][p] * A[j][q]) for i in range(r) for j in range(r)),
                    Poly.zero(n),
                )
                for q in range(r)
            ]
            for p in range(r)
        ]
        pairing = Pairing(r, n, new_g)

    d_cochain = None
    if S.d_cochain is not None:
        comps = []
        for m in range(r):
            terms = {}
            for k in range(r):
                if not Ainv[m][k]:
                    continue
                for alpha, coeff in S.d_cochain.components[k].terms.items():
                    acc = terms.get(alpha, Poly.zero(n)) + coeff.scale(Ainv[m][k])
                    if acc.is_zero():
                        terms.pop(alpha, None)
                    else:
                        terms[alpha] = acc
            comps.append(DiffOp(n, terms))
        d_cochain = DCochain(r, n, comps)

    return AlgebroidStructure(r, n, mult, anchor, pairing, d_cochain)
