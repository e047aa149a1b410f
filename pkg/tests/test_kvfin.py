import itertools
import random
from fractions import Fraction as F

import pytest

from algebroid.catalog import clan_84, vinberg_83
from algebroid.kvfin import (
    COEFF_SELF,
    COEFF_TRIVIAL,
    FinCochain,
    FinKVAlgebra,
    SymForm,
    clan_classify,
    cochain_space_dim,
    cohomology_dim,
    cohomology_summary,
    commutator_bracket,
    exactness_witness,
    fin_coboundary,
    kv_defect_cochain,
    kv_defect_fin,
    kv_nu,
    mc_check,
    perturb,
    product_cochain,
)


def alg(dim, triples):
    """Algebra from sparse (i, j, k, value) entries: e_i e_j += value e_k."""
    c = [[[F(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for i, j, k, v in triples:
        c[i][j][k] = F(v)
    return FinKVAlgebra(dim, c)


def rand_cochain(rng, dim, degree, coefficients):
    data = {}
    for idx in itertools.product(range(dim), repeat=degree):
        if coefficients == COEFF_SELF:
            data[idx] = [F(rng.randint(-3, 3)) for _ in range(dim)]
        else:
            data[idx] = F(rng.randint(-3, 3))
    return FinCochain(dim, degree, coefficients, data)


A83, FORM83 = vinberg_83()
A84, FORM84 = clan_84()
A84P, FORM84P = clan_84(as_printed=True)
COMMUTATIVE = alg(2, [(0, 0, 1, 1)])  # e1 e1 = e2, associative and commutative


# --- KV defect and brackets -------------------------------------------------


def test_kv_defect_examples():
    assert kv_defect_fin(A83) is None
    assert kv_defect_fin(A84) is None
    assert kv_defect_fin(A84P) is None
    assert kv_defect_fin(FinKVAlgebra.zero(3)) is None


def test_kv_defect_witness():
    A = alg(2, [(0, 1, 0, 1)])  # e1 e2 = e1
    w = kv_defect_fin(A)
    assert w is not None
    i, j, k, defect = w
    assert (i, j, k) == (0, 1, 1)
    assert defect == [F(-1), F(0)]


def test_commutator_bracket_83_matches_displayed_bracket():
    report = commutator_bracket(A83)
    assert report.jacobi_ok
    # bracket (z y' - z' y, z x' - z' x, 0): [e3,e1] = e2, [e3,e2] = e1
    expected = alg(3, [(2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, 1), (1, 2, 0, -1)])
    assert report.constants == expected.c


def test_commutator_bracket_84_second_component_sign():
    report = commutator_bracket(A84)
    assert report.jacobi_ok
    # corrected product gives [e3,e1] = -e2: the second bracket component
    # is -(z x' - z' x)
    assert report.constants[2][0][1] == F(-1)
    assert report.constants[0][2][1] == F(1)


def test_commutative_product_zero_bracket():
    report = commutator_bracket(COMMUTATIVE)
    assert all(
        not v for plane in report.constants for row in plane for v in row
    )
    assert report.jacobi_ok


def test_jacobi_holds_for_all_kv_algebras():
    for A in (A83, A84, A84P, COMMUTATIVE, FinKVAlgebra.zero(3)):
        assert kv_defect_fin(A) is None
        assert commutator_bracket(A).jacobi_ok


def test_jacobi_witness_on_non_lie_bracket():
    # a product whose commutator violates Jacobi
    A = alg(2, [(0, 1, 0, 1), (0, 0, 1, 1)])
    report = commutator_bracket(A)
    if not report.jacobi_ok:
        assert report.witness is not None


# --- coboundaries ------------------------------------------------------------


def test_degree0_coboundary_is_zero():
    th_self = FinCochain(3, 0, COEFF_SELF, {(): [F(1), F(2), F(3)]})
    th_triv = FinCochain(3, 0, COEFF_TRIVIAL, {(): F(5)})
    assert fin_coboundary(A83, COEFF_SELF, th_self).is_zero()
    assert fin_coboundary(A83, COEFF_TRIVIAL, th_triv).is_zero()


def test_trivial_degree1_is_theta_of_product():
    rng = random.Random(0)
    th = rand_cochain(rng, 3, 1, COEFF_TRIVIAL)
    d = fin_coboundary(A83, COEFF_TRIVIAL, th)
    for i, j in itertools.product(range(3), repeat=2):
        expected = sum(A83.c[i][j][k] * th.get((k,)) for k in range(3))
        assert d.get((i, j)) == expected


def test_trivial_degree2_formula():
    rng = random.Random(1)
    th = rand_cochain(rng, 3, 2, COEFF_TRIVIAL)
    d = fin_coboundary(A83, COEFF_TRIVIAL, th)
    basis = [[F(1 if t == s else 0) for t in range(3)] for s in range(3)]
    for i, j, k in itertools.product(range(3), repeat=3):
        a, b, c = basis[i], basis[j], basis[k]
        expected = (
            th.value(A83.product(a, b), c)
            + th.value(b, A83.product(a, c))
            - th.value(A83.product(b, a), c)
            - th.value(a, A83.product(b, c))
        )
        assert d.get((i, j, k)) == expected


def test_form_83_is_cocycle_for_any_alpha_beta():
    for a, b in itertools.product((1, -1, 2, -2), repeat=2):
        _, form = vinberg_83(a, b)
        assert fin_coboundary(A83, COEFF_TRIVIAL, form.as_cochain()).is_zero()


def test_dd_zero_over_kv_algebras():
    rng = random.Random(42)
    for A in (A83, A84, A84P, COMMUTATIVE):
        for coefficients in (COEFF_SELF, COEFF_TRIVIAL):
            for _ in range(10):
                th = rand_cochain(rng, A.dim, 1, coefficients)
                dd = fin_coboundary(A, coefficients, fin_coboundary(A, coefficients, th))
                assert dd.is_zero()


def test_coboundary_degree_limit():
    th = FinCochain(2, 3, COEFF_SELF)
    with pytest.raises(ValueError):
        fin_coboundary(COMMUTATIVE, COEFF_SELF, th)


def test_cochain_arithmetic():
    rng = random.Random(3)
    a = rand_cochain(rng, 2, 1, COEFF_SELF)
    b = rand_cochain(rng, 2, 1, COEFF_SELF)
    assert (a + b) - b == a
    assert a.scale(2) - a == a
    assert (a - a).is_zero()
    assert len(a.flatten()) == cochain_space_dim(2, 1, COEFF_SELF)


# --- cohomology ---------------------------------------------------------------


def test_h0_self_is_dim():
    for A in (A83, A84, A84P, COMMUTATIVE, FinKVAlgebra.zero(2)):
        assert cohomology_dim(A, COEFF_SELF, 0) == A.dim


def test_h1_abelian_is_dim_squared():
    for d in (2, 3):
        assert cohomology_dim(FinKVAlgebra.zero(d), COEFF_SELF, 1) == d * d


def test_h2_vinberg_83_regression():
    # pinned after first computation by the exact-rank oracle
    assert cohomology_dim(A83, COEFF_SELF, 2) == 5


def test_cohomology_summary_consistent():
    s = cohomology_summary(A83, COEFF_SELF, 1)
    assert s["dim_h"] == s["dim_kernel"] - s["dim_image"]
    assert s["dim_cochains"] == 9


def test_cohomology_unsupported_degree():
    with pytest.raises(ValueError):
        cohomology_dim(A83, COEFF_SELF, 3)


# --- exactness -----------------------------------------------------------------


def test_exactness_83_infeasible():
    for a, b in itertools.product((1, -1, 2, -2), repeat=2):
        _, form = vinberg_83(a, b)
        assert exactness_witness(A83, form) is None


def test_exactness_zero_form():
    theta = exactness_witness(A83, SymForm([[0] * 3 for _ in range(3)]))
    assert theta is not None
    # coboundary of theta reproduces the (zero) form
    for i, j in itertools.product(range(3), repeat=2):
        assert sum(A83.c[i][j][k] * theta[k] for k in range(3)) == 0


def test_exactness_round_trip_on_commutative_algebra():
    """beta := dTheta0 is symmetric here (commutative product), and the
    solver returns a functional whose coboundary reproduces beta."""
    A = COMMUTATIVE
    theta0 = [F(3), F(-2)]
    b = [
        [sum(A.c[i][j][k] * theta0[k] for k in range(2)) for j in range(2)]
        for i in range(2)
    ]
    form = SymForm(b)
    theta = exactness_witness(A, form)
    assert theta is not None
    for i, j in itertools.product(range(2), repeat=2):
        assert sum(A.c[i][j][k] * theta[k] for k in range(2)) == b[i][j]


def test_exactness_rejects_non_cocycle():
    _, form = clan_84(as_printed=True)
    with pytest.raises(ValueError):
        exactness_witness(A84P, form)


# --- clan classification ---------------------------------------------------------


def test_clan_84():
    report = clan_classify(A84, FORM84)
    assert report.verdict == "clan"
    assert all(report.sub_verdicts.values())
    assert FORM84.leading_minors() == [F(1), F(1), F(1)]


def test_pseudo_clan_83():
    report = clan_classify(A83, FORM83)
    assert report.verdict == "pseudo-clan"
    assert not report.definite and report.nondegenerate


def test_as_printed_fails_cocycle_and_invariance():
    report = clan_classify(A84P, FORM84P)
    assert report.verdict == "neither"
    assert report.kv
    assert not report.cocycle and not report.invariant
    assert report.invariance_witness is not None


def test_degenerate_form_is_neither():
    report = clan_classify(A84, SymForm([[0] * 3 for _ in range(3)]))
    assert report.verdict == "neither"
    assert not report.nondegenerate


def test_negative_definite_counts_as_definite():
    report = clan_classify(A84, SymForm([[-1, 0, 0], [0, -1, 0], [0, 0, -1]]))
    assert report.verdict == "clan"


def test_invariance_implies_cocycle():
    """Left-invariant symmetric forms are automatically 2-cocycles;
    checked on randomized invariant forms over the catalog algebras."""
    rng = random.Random(7)
    for A, base in ((A83, FORM83), (A84, FORM84)):
        for _ in range(10):
            scale = F(rng.randint(1, 5), rng.randint(1, 3))
            form = SymForm([[v * scale for v in row] for row in base.matrix])
            report = clan_classify(A, form)
            assert report.invariant
            assert report.cocycle


# --- deformations -----------------------------------------------------------------


def test_kv_nu_zero():
    nu = FinCochain(3, 2, COEFF_SELF)
    assert kv_nu(A83, nu).is_zero()
    assert mc_check(A83, nu).is_zero()


def test_kv_nu_of_kv_product_is_zero():
    nu = product_cochain(A83)
    assert kv_nu(FinKVAlgebra.zero(3), nu).is_zero()


def test_kv_nu_nonzero_for_non_kv_product():
    nu = FinCochain(2, 2, COEFF_SELF, {(0, 1): [F(1), F(0)]})  # e1 e2 = e1
    out = kv_nu(FinKVAlgebra.zero(2), nu)
    assert out.get((0, 1, 1)) == [F(-1), F(0)]


def test_mc_calibration_matches_direct_anomaly():
    rng = random.Random(11)
    for A in (A83, A84, COMMUTATIVE):
        for _ in range(5):
            nu = rand_cochain(rng, A.dim, 2, COEFF_SELF)
            assert mc_check(A, nu) == kv_defect_cochain(perturb(A, nu))


def test_mc_rescaled_product():
    nu = product_cochain(A83)  # 2*mu - mu
    assert mc_check(A83, nu).is_zero()


def test_perturb_validation():
    with pytest.raises(ValueError):
        perturb(A83, FinCochain(3, 1, COEFF_SELF))
    with pytest.raises(ValueError):
        kv_nu(A83, FinCochain(3, 2, COEFF_TRIVIAL))
