"""Finite-dimensional Koszul-Vinberg (KV) algebras given by rational
structure constants: KV axiom check, commutator bracket, the cochain
complex with coefficients in the algebra itself or in the trivial module,
cohomology dimensions through H^2, exactness of symmetric 2-cocycles,
clan classification, and the deformation (Maurer-Cartan type) residual.

Coboundary convention, degree k <= 2, coefficients in the algebra:

    dTheta(s_1..s_{k+1}) = sum_{j=1..k} (-1)^j [ (s_j . Theta)(.. s_j hat ..)
                                        + Theta(.. s_j hat .., s_j) . s_{k+1} ]

with (a . Theta)(t_1..t_k) = a Theta(t..) - sum_i Theta(.., a t_i, ..) and a
right-multiplication trailing term. Trivial coefficients delete the two
module-action terms. The convention is pinned by two properties checked
in the tests: d(d Theta) = 0 over KV algebras, and the deformation
calibration KV_{mu+nu} = KV_mu - d(nu) + KV_nu.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import Rational, rank as mat_rank, solve_linear

COEFF_SELF = "self"
COEFF_TRIVIAL = "trivial"


def _frac_matrix(matrix):
    return tuple(tuple(Fraction(v) for v in row) for row in matrix)


class FinKVAlgebra:
    """dim-d algebra with product e_i e_j = sum_k c[i][j][k] e_k."""

    def __init__(self, dim: int, c):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim
        c = tuple(tuple(tuple(Fraction(v) for v in row) for row in plane) for plane in c)
        if len(c) != dim or any(
            len(plane) != dim or any(len(row) != dim for row in plane) for plane in c
        ):
            raise ValueError("structure constants must be dim x dim x dim")
        self.c = c

    @staticmethod
    def zero(dim: int) -> "FinKVAlgebra":
        z = Fraction(0)
        return FinKVAlgebra(dim, [[[z] * dim for _ in range(dim)] for _ in range(dim)])

    def basis_product(self, i: int, j: int):
        """e_i e_j as a coefficient vector."""
        return list(self.c[i][j])

    def product(self, u: Sequence[Rational], v: Sequence[Rational]):
        d = self.dim
        out = [Fraction(0)] * d
        for i in range(d):
            if not u[i]:
                continue
            for j in range(d):
                if not v[j]:
                    continue
                uv = u[i] * v[j]
                for k in range(d):
                    if self.c[i][j][k]:
                        out[k] += uv * self.c[i][j][k]
        return out

    def __eq__(self, other):
        return isinstance(other, FinKVAlgebra) and self.dim == other.dim and self.c == other.c


def _basis_vec(dim: int, k: int):
    v = [Fraction(0)] * dim
    v[k] = Fraction(1)
    return v


def associator_vec(A: FinKVAlgebra, u, v, w):
    return [
        a - b
        for a, b in zip(A.product(u, A.product(v, w)), A.product(A.product(u, v), w))
    ]


def kv_anomaly_vec(A: FinKVAlgebra, u, v, w):
    return [a - b for a, b in zip(associator_vec(A, u, v, w), associator_vec(A, v, u, w))]


def kv_defect_fin(A: FinKVAlgebra) -> Optional[tuple]:
    """None if the KV anomaly vanishes on all basis triples, else the
    first (i, j, k, defect-vector) witness."""
    d = A.dim
    basis = [_basis_vec(d, k) for k in range(d)]
    for i, j, k in itertools.product(range(d), repeat=3):
        defect = kv_anomaly_vec(A, basis[i], basis[j], basis[k])
        if any(defect):
            return (i, j, k, defect)
    return None


@dataclass(frozen=True)
class BracketReport:
    """Skew structure constants b[i][j][k] of the commutator together
    with the Jacobi verdict over basis triples."""

    constants: tuple
    jacobi_ok: bool
    witness: Optional[tuple]  # (i, j, k, defect-vector) when Jacobi fails


def commutator_bracket(A: FinKVAlgebra) -> BracketReport:
    d = A.dim
    b = tuple(
        tuple(
            tuple(A.c[i][j][k] - A.c[j][i][k] for k in range(d)) for j in range(d)
        )
        for i in range(d)
    )
    lie = FinKVAlgebra(d, b)
    basis = [_basis_vec(d, k) for k in range(d)]
    for i, j, k in itertools.product(range(d), repeat=3):
        jac = [
            x + y + z
            for x, y, z in zip(
                lie.product(lie.product(basis[i], basis[j]), basis[k]),
                lie.product(lie.product(basis[j], basis[k]), basis[i]),
                lie.product(lie.product(basis[k], basis[i]), basis[j]),
            )
        ]
        if any(jac):
            return BracketReport(b, False, (i, j, k, jac))
    return BracketReport(b, True, None)


# ---------------------------------------------------------------------------
# Cochains and coboundaries.
# ---------------------------------------------------------------------------


class FinCochain:
    """k-linear map on a dim-d space, stored densely on basis tuples.
    Values are coefficient vectors (coefficients == "self") or rationals
    (coefficients == "trivial")."""

    def __init__(self, dim: int, degree: int, coefficients: str, data=None):
        if coefficients not in (COEFF_SELF, COEFF_TRIVIAL):
            raise ValueError("coefficients must be 'self' or 'trivial'")
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.dim = dim
        self.degree = degree
        self.coefficients = coefficients
        self.data = {}
        if data:
            for idx, value in (data.items() if isinstance(data, dict) else data):
                idx = tuple(idx)
                if len(idx) != degree or any(not 0 <= i < dim for i in idx):
                    raise ValueError("bad basis index tuple")
                self.set(idx, value)

    def _zero_value(self):
        if self.coefficients == COEFF_SELF:
            return [Fraction(0)] * self.dim
        return Fraction(0)

    def get(self, idx):
        idx = tuple(idx)
        value = self.data.get(idx)
        if value is None:
            return self._zero_value()
        return list(value) if self.coefficients == COEFF_SELF else value

    def set(self, idx, value):
        idx = tuple(idx)
        if self.coefficients == COEFF_SELF:
            value = tuple(Fraction(v) for v in value)
            if len(value) != self.dim:
                raise ValueError("value vector has the wrong length")
            if any(value):
                self.data[idx] = value
            else:
                self.data.pop(idx, None)
        else:
            value = Fraction(value)
            if value:
                self.data[idx] = value
            else:
                self.data.pop(idx, None)

    def add_to(self, idx, value):
        if self.coefficients == COEFF_SELF:
            acc = self.get(idx)
            self.set(idx, [a + Fraction(v) for a, v in zip(acc, value)])
        else:
            self.set(idx, self.get(idx) + Fraction(value))

    def value(self, *vectors):
        """Evaluate multilinearly on coefficient vectors."""
        if len(vectors) != self.degree:
            raise ValueError(f"degree-{self.degree} cochain takes {self.degree} inputs")
        out = self._zero_value()
        for idx, value in self.data.items():
            coeff = Fraction(1)
            for pos, i in enumerate(idx):
                coeff *= Fraction(vectors[pos][i])
                if not coeff:
                    break
            if not coeff:
                continue
            if self.coefficients == COEFF_SELF:
                for k in range(self.dim):
                    out[k] += coeff * value[k]
            else:
                out += coeff * value
        return out

    def is_zero(self) -> bool:
        return not self.data

    def __add__(self, other):
        if (self.dim, self.degree, self.coefficients) != (
            other.dim,
            other.degree,
            other.coefficients,
        ):
            raise ValueError("cochain shapes differ")
        out = FinCochain(self.dim, self.degree, self.coefficients, self.data)
        for idx, value in other.data.items():
            out.add_to(idx, value)
        return out

    def __neg__(self):
        out = FinCochain(self.dim, self.degree, self.coefficients)
        for idx, value in self.data.items():
            if self.coefficients == COEFF_SELF:
                out.set(idx, [-v for v in value])
            else:
                out.set(idx, -value)
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = Fraction(scalar)
        out = FinCochain(self.dim, self.degree, self.coefficients)
        for idx, value in self.data.items():
            if self.coefficients == COEFF_SELF:
                out.set(idx, [scalar * v for v in value])
            else:
                out.set(idx, scalar * value)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FinCochain)
            and (self.dim, self.degree, self.coefficients)
            == (other.dim, other.degree, other.coefficients)
            and self.data == other.data
        )

    def flatten(self):
        """Dense coordinate list (basis tuples in lexicographic order)."""
        out = []
        for idx in itertools.product(range(self.dim), repeat=self.degree):
            value = self.get(idx)
            if self.coefficients == COEFF_SELF:
                out.extend(value)
            else:
                out.append(value)
        return out


def product_cochain(A: FinKVAlgebra) -> FinCochain:
    """The multiplication of A as a degree-2 self-coefficient cochain."""
    data = {}
    for i, j in itertools.product(range(A.dim), repeat=2):
        data[(i, j)] = A.c[i][j]
    return FinCochain(A.dim, 2, COEFF_SELF, data)


def kv_defect_cochain(A: FinKVAlgebra) -> FinCochain:
    """The full KV anomaly as a degree-3 self-coefficient cochain."""
    d = A.dim
    basis = [_basis_vec(d, k) for k in range(d)]
    out = FinCochain(d, 3, COEFF_SELF)
    for i, j, k in itertools.product(range(d), repeat=3):
        v = kv_anomaly_vec(A, basis[i], basis[j], basis[k])
        if any(v):
            out.set((i, j, k), v)
    return out


def fin_coboundary(A: FinKVAlgebra, coefficients: str, theta: FinCochain) -> FinCochain:
    """Coboundary of theta (degree <= 2) in the named coefficient module."""
    if theta.coefficients != coefficients:
        raise ValueError("cochain coefficient module does not match")
    if theta.dim != A.dim:
        raise ValueError("cochain dimension does not match the algebra")
    if theta.degree > 2:
        raise ValueError("coboundary implemented for degree <= 2")
    d = A.dim
    k = theta.degree
    out = FinCochain(d, k + 1, coefficients)
    if k == 0:
        return out
    basis = [_basis_vec(d, t) for t in range(d)]
    self_coeffs = coefficients == COEFF_SELF

    for idx in itertools.product(range(d), repeat=k + 1):
        args = [basis[i] for i in idx]
        acc = out._zero_value()

        def accumulate(sign, value):
            nonlocal acc
            if self_coeffs:
                acc = [a + sign * v for a, v in zip(acc, value)]
            else:
                acc = acc + sign * value

        for j in range(1, k + 1):
            sign = Fraction(-1) ** j
            sj = args[j - 1]
            rest = args[: j - 1] + args[j:]  # the other k arguments
            head, last = rest[:-1], rest[-1]
            if self_coeffs:
                # (s_j . Theta)(rest): left action minus action inside slots
                accumulate(sign, A.product(sj, theta.value(*rest)))
            for t in range(k):
                moved = rest[:t] + [A.product(sj, rest[t])] + rest[t + 1 :]
                accumulate(-sign, theta.value(*moved))
            if self_coeffs:
                # trailing right-multiplication term
                accumulate(sign, A.product(theta.value(*(head + [sj])), last))
        out.set(idx, acc)
    return out


def cochain_space_dim(dim: int, degree: int, coefficients: str) -> int:
    base = dim**degree
    return base * dim if coefficients == COEFF_SELF else base


def _coboundary_matrix(A: FinKVAlgebra, coefficients: str, degree: int):
    """Matrix of the coboundary C^degree -> C^{degree+1} on the dense basis."""
    d = A.dim
    cols = []
    for idx in itertools.product(range(d), repeat=degree):
        if coefficients == COEFF_SELF:
            for out_k in range(d):
                theta = FinCochain(d, degree, coefficients, {idx: _basis_vec(d, out_k)})
                cols.append(fin_coboundary(A, coefficients, theta).flatten())
        else:
            theta = FinCochain(d, degree, coefficients, {idx: Fraction(1)})
            cols.append(fin_coboundary(A, coefficients, theta).flatten())
    rows = cochain_space_dim(d, degree + 1, coefficients)
    return [[cols[c][r] for c in range(len(cols))] for r in range(rows)]


def cohomology_summary(A: FinKVAlgebra, coefficients: str, k: int) -> dict:
    """Exact dims of the complex at degree k: cochain space, ker(delta_k),
    im(delta_{k-1}), and H^k."""
    if k not in (0, 1, 2):
        raise ValueError("cohomology supported for k <= 2")
    dom = cochain_space_dim(A.dim, k, coefficients)
    rank_k = mat_rank(_coboundary_matrix(A, coefficients, k))
    kernel = dom - rank_k
    image_prev = (
        mat_rank(_coboundary_matrix(A, coefficients, k - 1)) if k > 0 else 0
    )
    return {
        "dim_cochains": dom,
        "dim_kernel": kernel,
        "dim_image": image_prev,
        "dim_h": kernel - image_prev,
    }


def cohomology_dim(A: FinKVAlgebra, coefficients: str, k: int) -> int:
    """dim H^k = dim ker(delta_k) - rank(delta_{k-1}), exact ranks."""
    return cohomology_summary(A, coefficients, k)["dim_h"]


# ---------------------------------------------------------------------------
# Symmetric forms, exactness, clans.
# ---------------------------------------------------------------------------


class SymForm:
    """Symmetric rational bilinear form on the dim-d fiber."""

    def __init__(self, matrix):
        matrix = _frac_matrix(matrix)
        d = len(matrix)
        if any(len(row) != d for row in matrix):
            raise ValueError("form matrix must be square")
        for i in range(d):
            for j in range(i):
                if matrix[i][j] != matrix[j][i]:
                    raise ValueError("form matrix must be symmetric")
        self.dim = d
        self.matrix = matrix

    def value(self, u, v):
        out = Fraction(0)
        for i in range(self.dim):
            if not u[i]:
                continue
            for j in range(self.dim):
                if self.matrix[i][j] and v[j]:
                    out += Fraction(u[i]) * self.matrix[i][j] * Fraction(v[j])
        return out

    def as_cochain(self) -> FinCochain:
        data = {}
        for i in range(self.dim):
            for j in range(self.dim):
                data[(i, j)] = self.matrix[i][j]
        return FinCochain(self.dim, 2, COEFF_TRIVIAL, data)

    def det(self) -> Fraction:
        return _det(self.matrix)

    def leading_minors(self):
        return [
            _det([row[: k + 1] for row in self.matrix[: k + 1]])
            for k in range(self.dim)
        ]

    def positive_definite(self) -> bool:
        return all(m > 0 for m in self.leading_minors())

    def negative_definite(self) -> bool:
        neg = [[-v for v in row] for row in self.matrix]
        return SymForm(neg).positive_definite()

    def definite(self) -> bool:
        return self.positive_definite() or self.negative_definite()

    def nondegenerate(self) -> bool:
        return self.det() != 0


def _det(matrix) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    m = [list(row) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def exactness_witness(A: FinKVAlgebra, beta: SymForm):
    """Solve beta(e_i, e_j) = Theta(e_i e_j) for a linear functional Theta.

    beta must be a trivial-coefficient 2-cocycle (checked); returns the
    coefficient vector (Theta(e_k))_k or None when the system is
    infeasible, certifying a nonvanishing cohomology class.
    """
    if beta.dim != A.dim:
        raise ValueError("form dimension does not match the algebra")
    if not fin_coboundary(A, COEFF_TRIVIAL, beta.as_cochain()).is_zero():
        raise ValueError("form is not a 2-cocycle")
    d = A.dim
    rows, rhs = [], []
    for i in range(d):
        for j in range(d):
            rows.append([A.c[i][j][k] for k in range(d)])
            rhs.append(beta.matrix[i][j])
    return solve_linear(rows, rhs)


@dataclass(frozen=True)
class ClanReport:
    verdict: str  # "clan" | "pseudo-clan" | "neither"
    kv: bool
    cocycle: bool
    invariant: bool
    definite: bool
    nondegenerate: bool
    kv_witness: Optional[tuple] = None
    invariance_witness: Optional[tuple] = None

    @property
    def sub_verdicts(self):
        return {
            "kv": self.kv,
            "cocycle": self.cocycle,
            "invariant": self.invariant,
            "definite": self.definite,
            "nondegenerate": self.nondegenerate,
        }


def clan_classify(A: FinKVAlgebra, beta: SymForm) -> ClanReport:
    """clan = KV + cocycle + left-invariant + definite;
    pseudo-clan = KV + cocycle + left-invariant + nondegenerate, not definite."""
    if beta.dim != A.dim:
        raise ValueError("form dimension does not match the algebra")
    kv_w = kv_defect_fin(A)
    cocycle = fin_coboundary(A, COEFF_TRIVIAL, beta.as_cochain()).is_zero()
    d = A.dim
    basis = [_basis_vec(d, t) for t in range(d)]
    inv_w = None
    for i, j, k in itertools.product(range(d), repeat=3):
        residual = beta.value(A.product(basis[i], basis[j]), basis[k]) + beta.value(
            basis[j], A.product(basis[i], basis[k])
        )
        if residual:
            inv_w = (i, j, k, residual)
            break
    definite = beta.definite()
    nondeg = beta.nondegenerate()
    base = kv_w is None and cocycle and inv_w is None
    if base and definite:
        verdict = "clan"
    elif base and nondeg:
        verdict = "pseudo-clan"
    else:
        verdict = "neither"
    return ClanReport(verdict, kv_w is None, cocycle, inv_w is None, definite, nondeg, kv_w, inv_w)


# ---------------------------------------------------------------------------
# Deformations.
# ---------------------------------------------------------------------------


def perturb(A: FinKVAlgebra, nu: FinCochain) -> FinKVAlgebra:
    """The algebra with product mu + nu (nu a degree-2 self cochain)."""
    if nu.degree != 2 or nu.coefficients != COEFF_SELF or nu.dim != A.dim:
        raise ValueError("nu must be a degree-2 self-coefficient cochain")
    d = A.dim
    c = [
        [
            [A.c[i][j][k] + nu.get((i, j))[k] for k in range(d)]
            for j in range(d)
        ]
        for i in range(d)
    ]
    return FinKVAlgebra(d, c)


def kv_nu(A: FinKVAlgebra, nu: FinCochain) -> FinCochain:
    """KV_nu(s,s',s'') = nu(s,nu(s',s'')) - nu(nu(s,s'),s'')
                       - nu(s',nu(s,s'')) + nu(nu(s',s),s'')."""
    if nu.degree != 2 or nu.coefficients != COEFF_SELF or nu.dim != A.dim:
        raise ValueError("nu must be a degree-2 self-coefficient cochain")
    d = A.dim
    basis = [_basis_vec(d, t) for t in range(d)]
    out = FinCochain(d, 3, COEFF_SELF)
    for i, j, k in itertools.product(range(d), repeat=3):
        s, sp, spp = basis[i], basis[j], basis[k]
        v = [
            a - b - c + e
            for a, b, c, e in zip(
                nu.value(s, nu.value(sp, spp)),
                nu.value(nu.value(s, sp), spp),
                nu.value(sp, nu.value(s, spp)),
                nu.value(nu.value(sp, s), spp),
            )
        ]
        if any(v):
            out.set((i, j, k), v)
    return out


def mc_check(A: FinKVAlgebra, nu: FinCochain) -> FinCochain:
    """Deformation residual of mu + nu over the base product of A.

    Calibration: residual = KV_nu - d(nu) equals the KV anomaly tensor of
    the deformed product whenever A itself is KV, so it vanishes exactly
    when mu + nu is again a KV product.
    """
    return kv_nu(A, nu) - fin_coboundary(A, COEFF_SELF, nu)
