"""Tests for monomial symmetry groups, fixed loci, and transition constants."""

import random
from fractions import Fraction

import pytest

from lgdiamond._linalg import det, mat_mul, mat_vec
from lgdiamond.cyclotomic import CycNum, root_of_unity
from lgdiamond.errors import (
    ClosureCapExceeded,
    LgError,
    MissingJ,
    NotASymmetry,
    NotInGraphGroup,
    NotInSL,
)
from lgdiamond.polynomial import Polynomial, parse_polynomial
from lgdiamond.quasihom import analyze_weights
from lgdiamond.symmetry import (
    DiagonalGroup,
    FiniteGroup,
    GroupElement,
    age_via_matrix,
    diagonal_symmetries,
    diagonal_symmetries_of_rows,
    fixed_locus,
    format_element,
    generate_group,
    graph_diagonal_symmetries,
    group_conductor,
    is_symmetry,
    column_generators,
    make_jf,
    restrict,
    restricted_weights,
    rho_constant,
)

F = Fraction

MAIN = "x1^2*x2 + x2^2 + x2*x3^6 + x4^6 + x1*x3^9"
QUINTIC = "x1^5 + x2^5 + x3^5 + x4^5 + x5^5"
CHAIN2 = "x1^2*x2 + x2^3"


def diag(*phases):
    return GroupElement.diagonal([F(a) for a in phases])


def swap(n, i, j):
    sigma = list(range(n))
    sigma[i], sigma[j] = sigma[j], sigma[i]
    return GroupElement(tuple(sigma), (F(0),) * n)


def random_element(rng, nv, den):
    sigma = list(range(nv))
    rng.shuffle(sigma)
    phase = tuple(F(rng.randrange(den), den) for _ in range(nv))
    return GroupElement(tuple(sigma), phase)


MAIN_F, _ = parse_polynomial(MAIN)
QUINTIC_F, _ = parse_polynomial(QUINTIC)
CHAIN2_F, _ = parse_polynomial(CHAIN2)

MAIN_W = analyze_weights(MAIN_F)[2]
MAIN_JF = make_jf(MAIN_W)
MAIN_G = generate_group([MAIN_JF], MAIN_F)

QUINTIC_JF = diag(*([F(1, 5)] * 5))
QUINTIC_T12 = swap(5, 0, 1)
QUINTIC_T23 = swap(5, 1, 2)
QUINTIC_G = generate_group([QUINTIC_T12, QUINTIC_T23, QUINTIC_JF], QUINTIC_F)


# -- element arithmetic -------------------------------------------------------


def test_compose_matches_matrix_product():
    rng = random.Random(7)
    for _ in range(25):
        a = random_element(rng, 4, 12)
        b = random_element(rng, 4, 12)
        lhs = a.compose(b).matrix(12)
        rhs = mat_mul(a.matrix(12), b.matrix(12))
        assert lhs == rhs


def test_compose_is_substitution_order():
    f, _ = parse_polynomial("x1^2*x2 + x2^3 + x3^2*x4 + x4^3 + x1*x2*x3*x4")
    rng = random.Random(11)
    for _ in range(10):
        a = random_element(rng, 4, 6)
        b = random_element(rng, 4, 6)
        assert a.compose(b).apply(f) == b.apply(a.apply(f))


def test_inverse_power_order():
    rng = random.Random(3)
    for _ in range(20):
        g = random_element(rng, 5, 10)
        assert g.compose(g.inverse()).is_identity
        assert g.inverse().compose(g).is_identity
        assert g.power(g.order()).is_identity
        assert g.power(3) == g.compose(g).compose(g)
        assert g.power(-2) == g.inverse().compose(g.inverse())
    assert MAIN_JF.order() == 12
    assert swap(2, 0, 1).compose(diag(F(1, 2), 0)).order() == 4


def test_cycles_and_sign():
    g = GroupElement((1, 2, 0, 4, 3), (F(0),) * 5)
    assert g.cycles() == ((0, 1, 2), (3, 4))
    assert g.sign() == -1
    assert swap(5, 0, 1).sign() == -1
    assert GroupElement.identity(5).sign() == 1
    assert MAIN_JF.sign() == 1


def test_conjugation_of_diagonal_by_swap():
    h = swap(3, 0, 1)
    g = diag(F(1, 2), F(1, 3), F(1, 7))
    assert g.conjugate_by(h) == diag(F(1, 3), F(1, 2), F(1, 7))


def test_determinants():
    t = swap(2, 0, 1)
    assert t.det_phase() == F(1, 2)
    assert not t.is_sl()
    assert t.determinant(2) == CycNum.rational(-1, 2)
    sl_swap = t.compose(diag(F(1, 2), 0))
    assert sl_swap.det_phase() == 0
    assert sl_swap.is_sl()
    assert MAIN_JF.is_sl()
    assert QUINTIC_JF.is_sl()
    assert not diag(F(1, 5), 0, 0, 0, 0).is_sl()
    rng = random.Random(19)
    for _ in range(15):
        g = random_element(rng, 4, 12)
        assert g.determinant(12) == det(g.matrix(12))


def test_age_and_eigenvalue_phases():
    assert swap(5, 0, 1).age() == F(1, 2)
    assert GroupElement((1, 2, 0, 3, 4), (F(0),) * 5).age() == 1
    assert MAIN_JF.age() == 1
    assert QUINTIC_JF.age() == 1
    assert QUINTIC_JF.power(4).age() == 4
    assert swap(2, 0, 1).eigenvalue_phases() == (F(0), F(1, 2))
    assert diag(F(1, 4), F(3, 4)).eigenvalue_phases() == (F(1, 4), F(3, 4))


def test_age_duality_against_fixed_dimension():
    for group, n in ((MAIN_G, 12), (QUINTIC_G, 30)):
        nv = group.nvars
        for g in group.elements:
            n_g = fixed_locus(g, n).n_g
            assert g.age() + g.inverse().age() == nv - n_g


# -- symmetry checks ----------------------------------------------------------


def test_is_symmetry():
    assert is_symmetry(QUINTIC_F, QUINTIC_T12)
    assert is_symmetry(MAIN_F, MAIN_JF)
    # scaling only the graph monomials is not enough: x1*x3^9 breaks it
    assert not is_symmetry(MAIN_F, diag(F(1, 2), 0, 0, 0))
    # a plausible-looking chain generator that fails on the mixed monomial
    assert not is_symmetry(CHAIN2_F, diag(F(1, 6), F(1, 3)))
    assert is_symmetry(CHAIN2_F, diag(F(5, 6), F(1, 3)))


def test_make_jf():
    assert MAIN_JF.phase == (F(1, 4), F(1, 2), F(1, 12), F(1, 6))
    assert MAIN_JF.is_diagonal
    assert is_symmetry(MAIN_F, MAIN_JF)


# -- diagonal symmetry groups -------------------------------------------------


def test_diagonal_symmetries_main():
    group = diagonal_symmetries(MAIN_F)
    assert group.order == 72
    vectors = group.elements()
    assert len(vectors) == 72
    assert len(set(vectors)) == 72
    assert MAIN_JF.phase in vectors
    for v in vectors:
        for mono in MAIN_F.terms:
            total = sum(F(e) * a for e, a in zip(mono, v))
            assert total.denominator == 1


def test_graph_group_order_is_determinant():
    e = analyze_weights(MAIN_F)[1]
    assert graph_diagonal_symmetries(e).order == 144 == e.det


def test_diagonal_symmetries_small_cases():
    fermat, _ = parse_polynomial("x1^6")
    assert diagonal_symmetries(fermat).order == 6
    loop, _ = parse_polynomial("x1^2*x2 + x2^2*x1")
    assert diagonal_symmetries(loop).order == 3
    quintic = diagonal_symmetries(QUINTIC_F)
    assert quintic.order == 3125
    assert quintic.invariant_factors == (5, 5, 5, 5, 5)


def test_diagonal_symmetries_infinite():
    with pytest.raises(LgError):
        diagonal_symmetries_of_rows([[1, 1]])


def test_trivial_diagonal_group():
    group = diagonal_symmetries_of_rows([[1, 0], [0, 1]])
    assert group.order == 1
    assert group.elements() == [(F(0), F(0))]


def test_column_generators_main():
    e = analyze_weights(MAIN_F)[1]
    rho = column_generators(e)
    assert rho == (
        (F(1, 2), F(0), F(0), F(0)),
        (F(3, 4), F(1, 2), F(11, 12), F(0)),
        (F(0), F(0), F(1, 6), F(0)),
        (F(0), F(0), F(0), F(1, 6)),
    )
    total = tuple(sum(col) % 1 for col in zip(*rho))
    assert total == MAIN_JF.phase


def test_column_generators_chain2():
    e = analyze_weights(CHAIN2_F)[1]
    rho = column_generators(e)
    assert rho == ((F(1, 2), F(0)), (F(5, 6), F(1, 3)))
    total = tuple(sum(col) % 1 for col in zip(*rho))
    assert total == (F(1, 3), F(1, 3))


def test_age_via_matrix():
    e2 = analyze_weights(CHAIN2_F)[1]
    assert age_via_matrix((F(5, 6), F(1, 3)), e2) == F(7, 6)
    with pytest.raises(NotInGraphGroup):
        age_via_matrix((F(1, 2), F(1, 2)), e2)
    e4 = analyze_weights(MAIN_F)[1]
    assert age_via_matrix(MAIN_JF.phase, e4) == 1


# -- group closure ------------------------------------------------------------


def test_main_group_structure():
    assert MAIN_G.order == 12
    assert MAIN_G.all_sl
    assert len(MAIN_G.classes) == 12
    assert MAIN_G.elements[MAIN_G.identity_index].is_identity
    for i in range(MAIN_G.order):
        assert MAIN_G.compose_idx(i, MAIN_G.inv[i]) == MAIN_G.identity_index
    assert MAIN_G.contains(MAIN_JF.power(7))


def test_quintic_group_structure():
    assert QUINTIC_G.order == 30
    assert not QUINTIC_G.all_sl
    assert len(QUINTIC_G.classes) == 15
    sizes = sorted(len(c) for c in QUINTIC_G.classes)
    assert sizes == [1] * 5 + [2] * 5 + [3] * 5
    # conjugation table against direct computation
    rng = random.Random(23)
    for _ in range(30):
        hi = rng.randrange(30)
        gi = rng.randrange(30)
        direct = QUINTIC_G.elements[gi].conjugate_by(QUINTIC_G.elements[hi])
        assert QUINTIC_G.conj[hi][gi] == QUINTIC_G.index[direct.key()]
    # the transpositions times a fixed scalar form one class of size 3
    t12_class = QUINTIC_G.classes[QUINTIC_G.class_of[QUINTIC_G.index[QUINTIC_T12.key()]]]
    assert len(t12_class) == 3


def test_generate_group_rejects_non_symmetry():
    with pytest.raises(NotASymmetry):
        generate_group([diag(F(1, 6), F(1, 3))], CHAIN2_F)


def test_generate_group_cap():
    with pytest.raises(ClosureCapExceeded):
        generate_group([QUINTIC_T12, QUINTIC_T23, QUINTIC_JF], QUINTIC_F, cap=5)


def test_generate_group_sl_filter():
    with pytest.raises(NotInSL):
        generate_group([diag(F(1, 5), 0, 0, 0, 0)], QUINTIC_F, require_sl=True)
    generate_group([QUINTIC_JF], QUINTIC_F, require_sl=True)


def test_generate_group_j_filter():
    with pytest.raises(MissingJ):
        generate_group([diag(F(1, 5), F(4, 5), 0, 0, 0)], QUINTIC_F, require_j=QUINTIC_JF)
    generate_group([QUINTIC_JF], QUINTIC_F, require_j=QUINTIC_JF)


def test_group_conductor():
    assert group_conductor(MAIN_G) == 12
    assert group_conductor(QUINTIC_G) == 30
    assert group_conductor(MAIN_G, extra=5) == 60


# -- fixed loci ---------------------------------------------------------------


def test_fixed_locus_diagonal():
    locus = fixed_locus(diag(0, F(1, 2)), 2)
    assert locus.n_g == 1
    assert locus.d_g == 1
    assert locus.i_fixed == (0,)
    assert locus.w_phases == (F(1, 2),)
    one, zero = CycNum.one(2), CycNum.zero(2)
    assert locus.l_matrix == ((one,), (zero,))
    assert locus.w_matrix == ((zero,), (one,))


def test_fixed_locus_quintic_three_cycle():
    g = GroupElement((1, 2, 0, 3, 4), (F(0),) * 5)
    locus = fixed_locus(g, 30)
    assert locus.n_g == 3
    assert locus.i_fixed == (0, 3, 4)
    assert locus.w_phases == (F(1, 3), F(2, 3))
    col0 = [locus.l_matrix[i][0] for i in range(5)]
    one, zero = CycNum.one(30), CycNum.zero(30)
    assert col0 == [one, one, one, zero, zero]


def test_fixed_locus_main_j6():
    g = MAIN_JF.power(6)
    assert g.phase == (F(1, 2), F(0), F(1, 2), F(0))
    locus = fixed_locus(g, 12)
    assert locus.n_g == 2
    assert locus.i_fixed == (1, 3)
    assert locus.complement_indices() == (0, 2)


def test_fixed_locus_eigen_property():
    for group, n in ((MAIN_G, 12), (QUINTIC_G, 30)):
        for g in group.elements:
            locus = fixed_locus(g, n)
            m = g.matrix(n)
            for c in range(locus.n_g):
                col = [locus.l_matrix[i][c] for i in range(g.nvars)]
                assert mat_vec(m, col) == col
            for c in range(locus.d_g):
                col = [locus.w_matrix[i][c] for i in range(g.nvars)]
                scale = root_of_unity(locus.w_phases[c], n)
                assert mat_vec(m, col) == [scale * x for x in col]
            assert det(locus.basis_matrix()) != 0


def test_restrict_quintic_three_cycle():
    g = GroupElement((1, 2, 0, 3, 4), (F(0),) * 5)
    locus = fixed_locus(g, 30)
    r = restrict(QUINTIC_F, locus)
    assert r.nvars == 3
    expected = Polynomial(3, r.n, {
        (5, 0, 0): CycNum.rational(3, r.n),
        (0, 5, 0): CycNum.one(r.n),
        (0, 0, 5): CycNum.one(r.n),
    })
    assert r == expected


def test_restrict_main_j6():
    locus = fixed_locus(MAIN_JF.power(6), 12)
    r = restrict(MAIN_F, locus)
    assert r.nvars == 2
    assert set(r.terms) == {(2, 0), (0, 6)}
    assert all(c == CycNum.one(r.n) for c in r.terms.values())


def test_restrict_chain_prefix():
    f, _ = parse_polynomial("x1^2 + x2^2*x1 + x3^2*x2")
    g = diag(0, 0, F(1, 2))
    assert is_symmetry(f, g)
    locus = fixed_locus(g, 2)
    r = restrict(f, locus)
    assert set(r.terms) == {(2, 0), (1, 2)}


def test_restrict_empty_fixed_locus():
    locus = fixed_locus(MAIN_JF, 12)
    assert locus.n_g == 0
    r = restrict(MAIN_F, locus)
    assert r.nvars == 0
    assert r.is_zero()


def test_restricted_weights():
    locus = fixed_locus(MAIN_JF.power(6), 12)
    w = restricted_weights(locus, MAIN_W)
    assert w.q == (F(1, 2), F(1, 6))
    assert w.d0 == 6
    assert w.d == (3, 1)
    empty = restricted_weights(fixed_locus(MAIN_JF, 12), MAIN_W)
    assert empty.q == ()


# -- transition constants -----------------------------------------------------


def test_rho_on_fermat():
    g = diag(F(1, 2))
    locus = fixed_locus(g, 2)
    assert rho_constant(g, locus, locus) == CycNum.rational(-1, 2)
    h = diag(F(1, 4))
    lg = fixed_locus(h, 4)
    for k in (1, 2, 3):
        assert rho_constant(h.power(k), lg, lg) == root_of_unity(F(k, 4), 4)


def test_rho_identity_sector():
    locus = fixed_locus(GroupElement.identity(5), 30)
    for h in (QUINTIC_T12, QUINTIC_JF):
        assert rho_constant(h, locus, locus) == CycNum.one(30)


def test_rho_at_jf_is_determinant():
    locus = fixed_locus(QUINTIC_JF, 30)
    for h in (QUINTIC_T12, QUINTIC_JF, QUINTIC_T12.compose(QUINTIC_JF)):
        conj = fixed_locus(QUINTIC_JF.conjugate_by(h), 30)
        assert rho_constant(h, locus, conj) == h.determinant(30)


def test_rho_cocycle():
    n = 30
    loci = {g.key(): fixed_locus(g, n) for g in QUINTIC_G.elements}
    rng = random.Random(41)
    for _ in range(40):
        g = QUINTIC_G.elements[rng.randrange(30)]
        h1 = QUINTIC_G.elements[rng.randrange(30)]
        h2 = QUINTIC_G.elements[rng.randrange(30)]
        g1 = g.conjugate_by(h1)
        h21 = h2.compose(h1)
        g2 = g.conjugate_by(h21)
        lhs = rho_constant(h2, loci[g1.key()], loci[g2.key()]) * rho_constant(
            h1, loci[g.key()], loci[g1.key()]
        )
        rhs = rho_constant(h21, loci[g.key()], loci[g2.key()])
        assert lhs == rhs


# -- formatting ---------------------------------------------------------------


def test_format_element():
    assert format_element(GroupElement.identity(3)) == "id"
    assert format_element(MAIN_JF) == "diag(1/4, 1/2, 1/12, 1/6)"
    assert format_element(swap(5, 0, 1)) == "(1 2)"
    twisted = GroupElement((1, 0), (F(1, 2), F(0)))
    assert format_element(twisted) == "(1 2)*diag(1/2, 0)"
