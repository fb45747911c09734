"""Induced structures on wedge/tensor spaces, checked two independent ways.

Every diamond frozen here was computed by hand from the block decompositions
of the fixtures (wedge a bigraded basis, add bigrades, count monomials), so
the assertions are not replays of the code under test.  On top of that, each
induced splitting is computed along two unrelated paths — monomial spans
versus the general intersection formula — which must agree piece by piece.
"""

import random
from fractions import Fraction

import pytest

from hodgenorm.exactlin import (
    Mat,
    Subspace,
    nilpotent_exp,
    qi,
    vec,
)
from hodgenorm.filtrations import level, weight_filtration
from hodgenorm.fixtures import (
    curve_pair,
    weight_one,
    weight_three_line,
    weight_two,
    weight_two_minimum_classes,
)
from hodgenorm.induced import (
    InducedStructure,
    PureHodgeData,
    induce,
    kron,
    kron_vec,
    locate_markers,
    tate_normalize,
    wedge_coords,
    wedge_derivation,
    wedge_matrix,
)
from hodgenorm.mhs import (
    NilpotentCone,
    check_symmetries,
    cone_compatibility,
    deligne_split,
    polarization_check,
)


def random_matrix(rng, n, lo=-3, hi=3):
    return Mat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def strictly_upper(rng, n):
    return Mat([[rng.randint(-2, 2) if j > i else 0 for j in range(n)]
                for i in range(n)])


# -- multilinear helpers -------------------------------------------------------


def test_wedge_coords_hand_example():
    # (e0 + e1) ∧ (e1 + 2 e2) = e01 + 2 e02 + 2 e12
    got = wedge_coords([vec((1, 1, 0)), vec((0, 1, 2))], 3)
    assert got == (qi(1), qi(2), qi(2))


def test_wedge_coords_alternates():
    v = vec((1, 2, 3))
    u = vec((0, 1, 1))
    assert all(not c for c in wedge_coords([v, v], 3))
    swapped = wedge_coords([u, v], 3)
    straight = wedge_coords([v, u], 3)
    assert tuple(-c for c in swapped) == straight


def test_compound_matrix_is_multiplicative():
    # Cauchy-Binet: Λ^k(AB) = Λ^k(A) Λ^k(B); also Λ^k respects identity.
    rng = random.Random(7)
    for k in (1, 2, 3):
        assert wedge_matrix(Mat.identity(4), k) == Mat.identity(
            wedge_matrix(Mat.identity(4), k).nrows)
        for _ in range(5):
            a = random_matrix(rng, 4)
            b = random_matrix(rng, 4)
            assert wedge_matrix(a * b, k) == wedge_matrix(a, k) * wedge_matrix(b, k)


def test_compound_of_wedge_action_matches_coords():
    rng = random.Random(19)
    for _ in range(5):
        a = random_matrix(rng, 4)
        u = vec([rng.randint(-3, 3) for _ in range(4)])
        v = vec([rng.randint(-3, 3) for _ in range(4)])
        left = wedge_matrix(a, 2).apply(wedge_coords([u, v], 4))
        right = wedge_coords([a.apply(u), a.apply(v)], 4)
        assert left == right


def test_derivation_exponentiates_to_the_compound():
    # The Leibniz action is the tangent of the multiplicative one:
    # exp(dΛ(N)) = Λ(exp N) for nilpotent N.  This pins every sign in
    # wedge_derivation against an independent construction.
    rng = random.Random(23)
    for k in (2, 3):
        for _ in range(8):
            n = strictly_upper(rng, 5)
            lifted = wedge_derivation(n, k)
            assert nilpotent_exp(lifted) == wedge_matrix(nilpotent_exp(n), k)


def test_derivation_of_diagonal_adds_eigenvalues():
    d = Mat.diag([1, 2, 5])
    lifted = wedge_derivation(d, 2)
    assert lifted == Mat.diag([3, 6, 7])  # pairs (0,1), (0,2), (1,2)


def test_kron_mixed_product():
    rng = random.Random(31)
    for _ in range(5):
        a, b = random_matrix(rng, 2), random_matrix(rng, 3)
        c, d = random_matrix(rng, 2), random_matrix(rng, 3)
        assert kron(a, b) * kron(c, d) == kron(a * c, b * d)
        u = vec([rng.randint(-2, 2) for _ in range(2)])
        v = vec([rng.randint(-2, 2) for _ in range(3)])
        assert kron(a, b).apply(kron_vec(u, v)) == kron_vec(a.apply(u), b.apply(v))


def test_tensor_assembly_of_nilpotents_exponentiates_factorwise():
    # exp(N⊗1 + 1⊗M) = exp(N) ⊗ exp(M) for commuting slots — the identity
    # behind the per-factor assembly of the induced cone generators.
    rng = random.Random(37)
    for _ in range(5):
        n = strictly_upper(rng, 3)
        m = strictly_upper(rng, 4)
        total = kron(n, Mat.identity(4)) + kron(Mat.identity(3), m)
        assert nilpotent_exp(total) == kron(nilpotent_exp(n), nilpotent_exp(m))


# -- the weight-1 family on Λ³ -------------------------------------------------

# Hand-computed limit diamonds of H = Λ³V, dim 20, weight 3, indexed by the
# number of degenerating rank-2 pieces.
WEIGHT_ONE_DIAMONDS = {
    0: {(3, 0): 1, (2, 1): 9, (1, 2): 9, (0, 3): 1},
    1: {(3, 1): 1, (2, 2): 4, (2, 1): 4, (1, 3): 1, (1, 2): 4, (1, 1): 4,
        (2, 0): 1, (0, 2): 1},
    2: {(3, 2): 1, (2, 3): 1, (2, 2): 4, (2, 1): 4, (1, 2): 4, (1, 1): 4,
        (1, 0): 1, (0, 1): 1},
    3: {(3, 3): 1, (2, 2): 9, (1, 1): 9, (0, 0): 1},
}


@pytest.mark.parametrize("a", range(4))
def test_weight_one_induced_diamond_and_markers(a):
    v = weight_one(a)
    assert v.split().diamond() == {
        key: dim for key, dim in
        {(1, 1): a, (0, 0): a, (1, 0): 3 - a, (0, 1): 3 - a}.items() if dim}

    h = induce(v)
    assert h.dim == 20 and h.weight == 3 and h.factor_exponents == ((1, 3),)
    assert tate_normalize(h) is h  # top line already at level 3

    predicted = h.predicted_split()
    assert predicted.diamond() == WEIGHT_ONE_DIAMONDS[a]
    general = deligne_split(h.structure())
    assert general.pieces == predicted.pieces

    markers = locate_markers(h)
    assert markers.n == 3 and markers.m == 3 + a
    assert level(markers.e0, h.w) == 3 + a
    assert level(markers.einf, h.w) == 3 - a  # 2n - m


@pytest.mark.parametrize("a", range(4))
def test_weight_one_induced_structure_is_polarized(a):
    h = induce(weight_one(a))
    ok, detail = polarization_check(h.structure(), h.cone)
    assert ok, detail
    ok, detail = cone_compatibility(h.structure(), h.cone)
    assert ok, detail


def test_weight_one_monomial_levels_match_the_monodromy_filtration():
    # The induced W is assembled from total levels of monomials; it must
    # coincide with the intrinsic weight filtration of the induced cone.
    for a in (1, 2, 3):
        h = induce(weight_one(a))
        n_op = h.cone.element((1,) * len(h.cone))
        assert h.w == weight_filtration(n_op, center=h.weight)


def test_weight_one_normalizing_scalar():
    # s = Q(e0, conj e_inf) = 1 · (-2i)² = -4 for one degenerate piece,
    # so λ = -1/4 and the pairing against λ e_inf is exactly 1.
    markers = locate_markers(induce(weight_one(1)))
    assert markers.lam == qi(Fraction(-1, 4))
    assert markers.ed == tuple(markers.lam.conjugate() * c.conjugate()
                               for c in markers.einf)


def test_split_cone_variant_agrees_on_the_sum():
    joint = weight_one(2)
    split = weight_one(2, split_cone=True)
    assert len(joint.cone) == 1 and len(split.cone) == 2
    assert split.cone.element((1, 1)) == joint.cone.element((1,))
    assert induce(split).predicted_split().diamond() == WEIGHT_ONE_DIAMONDS[2]


def test_curve_pair_induced():
    h = induce(curve_pair())
    assert h.dim == 6 and h.weight == 2
    assert h.predicted_split().diamond() == {(2, 2): 1, (1, 1): 4, (0, 0): 1}
    markers = locate_markers(h)
    assert markers.m == 4
    assert len(h.cone) == 2


# -- the weight-2 families on Λ² -----------------------------------------------

# Limit diamonds of V at `classes` middle cells, and of H = Λ²V, both by hand.
def weight_two_v_diamond(kind, h):
    table = {
        0: {(2, 0): 2, (1, 1): h, (0, 2): 2},
        1: {(2, 0): 1, (2, 1): 1, (1, 2): 1, (0, 2): 1, (1, 0): 1, (0, 1): 1,
            (1, 1): h - 2},
        2: {(2, 0): 1, (0, 2): 1, (2, 2): 1, (1, 1): h, (0, 0): 1},
        3: {(2, 1): 2, (1, 2): 2, (1, 0): 2, (0, 1): 2, (1, 1): h - 4},
        4: {(2, 1): 1, (1, 2): 1, (1, 0): 1, (0, 1): 1, (2, 2): 1,
            (1, 1): h - 2, (0, 0): 1},
        5: {(2, 2): 2, (1, 1): h, (0, 0): 2},
    }[kind]
    return {key: dim for key, dim in table.items() if dim}


def weight_two_h_diamond(kind, h):
    c2 = lambda k: k * (k - 1) // 2
    table = {
        0: {(4, 0): 1, (3, 1): 2 * h, (2, 2): 4 + c2(h), (1, 3): 2 * h,
            (0, 4): 1},
        1: {(4, 1): 1, (3, 3): 1, (3, 2): h - 1, (3, 1): h - 1, (3, 0): 1,
            (2, 3): h - 1, (2, 2): 3 + c2(h - 2), (2, 1): h - 1, (1, 4): 1,
            (1, 3): h - 1, (1, 2): h - 1, (1, 1): 1, (0, 3): 1},
        2: {(4, 2): 1, (2, 4): 1, (3, 3): h, (3, 1): h, (1, 3): h, (1, 1): h,
            (2, 2): 2 + c2(h), (2, 0): 1, (0, 2): 1},
        3: {(4, 2): 1, (2, 4): 1, (3, 3): 4, (3, 1): 4, (1, 3): 4, (1, 1): 4,
            (3, 2): 2 * (h - 4), (2, 3): 2 * (h - 4), (2, 1): 2 * (h - 4),
            (1, 2): 2 * (h - 4), (2, 2): 8 + c2(h - 4), (2, 0): 1, (0, 2): 1},
        4: {(4, 3): 1, (3, 4): 1, (3, 3): h - 1, (3, 2): h - 1, (3, 1): 1,
            (2, 3): h - 1, (2, 2): 3 + c2(h - 2), (2, 1): h - 1, (1, 3): 1,
            (1, 2): h - 1, (1, 1): h - 1, (1, 0): 1, (0, 1): 1},
        5: {(4, 4): 1, (3, 3): 2 * h, (2, 2): 4 + c2(h), (1, 1): 2 * h,
            (0, 0): 1},
    }[kind]
    return {key: dim for key, dim in table.items() if dim}


WEIGHT_TWO_M = (4, 5, 6, 6, 7, 8)


@pytest.mark.parametrize("kind", range(6))
def test_weight_two_fixture_matches_hand_tables(kind):
    h = weight_two_minimum_classes(kind)
    v = weight_two(kind)
    assert v.dim == h + 4
    assert v.split().diamond() == weight_two_v_diamond(kind, h)

    ind = induce(v)
    assert ind.factor_exponents == ((2, 2),)
    assert ind.dim == (h + 4) * (h + 3) // 2
    assert ind.weight == 4 and tate_normalize(ind) is ind

    predicted = ind.predicted_split()
    assert predicted.diamond() == weight_two_h_diamond(kind, h)
    assert deligne_split(ind.structure()).pieces == predicted.pieces
    check_symmetries(predicted.diamond(), 4, limiting=True)

    markers = locate_markers(ind)
    assert markers.m == WEIGHT_TWO_M[kind]
    ok, detail = polarization_check(v.structure(), v.cone)
    assert ok, detail


def test_weight_two_away_from_the_minimum():
    # The same hand formulas, evaluated at a larger middle dimension.
    for kind, h in ((1, 4), (3, 6), (5, 3)):
        v = weight_two(kind, classes=h)
        assert v.split().diamond() == weight_two_v_diamond(kind, h)
        got = induce(v).predicted_split().diamond()
        assert got == weight_two_h_diamond(kind, h)


def test_weight_two_rejects_too_few_classes():
    with pytest.raises(ValueError):
        weight_two(3, classes=2)
    with pytest.raises(ValueError):
        weight_two(4, classes=2)


def test_weight_two_split_cone_variants():
    for kind in (3, 4, 5):
        v = weight_two(kind, split_cone=True)
        assert len(v.cone) == 2
        joint = weight_two(kind)
        assert v.cone.element((1, 1)) == joint.cone.element((1,))


# -- normalization and markers -------------------------------------------------


def test_weight_three_line_needs_one_twist():
    v = weight_three_line()
    assert v.split().diamond() == {(3, 0): 1, (2, 1): 1, (1, 2): 1, (0, 3): 1}
    ok, detail = polarization_check(v.structure())
    assert ok, detail

    raw = induce(v)
    assert raw.factor_exponents == ((3, 1), (2, 2))
    assert raw.dim == 24 and raw.weight == 9 and raw.twist == 0
    with pytest.raises(ValueError):
        locate_markers(raw)  # top level of F is 8 < 9: not yet a line at n

    norm = tate_normalize(raw)
    assert norm.weight == 7 and norm.twist == 1
    predicted = norm.predicted_split()
    assert deligne_split(norm.structure()).pieces == predicted.pieces
    # Pure of weight 7.  By hand: Λ²V sits at (5,1), (4,2), (3,3)·2, (2,4),
    # (1,5); tensoring with the four lines of V and twisting by (-1,-1)
    # spreads 24 dimensions along p+q = 7 as 1,2,4,5,5,4,2,1.
    assert predicted.diamond() == {(7, 0): 1, (6, 1): 2, (5, 2): 4, (4, 3): 5,
                                   (3, 4): 5, (2, 5): 4, (1, 6): 2, (0, 7): 1}

    markers = locate_markers(norm)
    assert markers.m == 7
    # e0 = α ⊗ (α∧β) pairs with itself: s = 2i · det diag(2i, -2i) = 8i,
    # hence λ = conj(1/s) = i/8.
    assert markers.einf == markers.e0
    assert markers.lam == qi(0, Fraction(1, 8))


def test_induce_requires_a_top_half():
    # All classes in the middle: F² = 0 leaves nothing to wedge.
    q = Mat.identity(3)
    from hodgenorm.filtrations import DecreasingFiltration
    f = DecreasingFiltration.from_generators(
        3, {1: [vec((1, 0, 0)), vec((0, 1, 0)), vec((0, 0, 1))]})
    v = PureHodgeData(2, q, f, NilpotentCone((), q))
    with pytest.raises(ValueError):
        induce(v)


def test_tate_normalize_demands_a_line():
    # Hand the normalizer a structure whose deepest filtration level is a
    # plane (the raw weight-2 input itself, where dim F² = 2).
    v = weight_two(0)
    ind = induce(v)
    fat_top = InducedStructure(
        weight=2, twist=0, q=v.q, f=v.f, w=v.w, cone=v.cone,
        factor_exponents=((2, 2),), v_data=v, bigraded=ind.bigraded)
    with pytest.raises(ValueError):
        tate_normalize(fat_top)


def test_markers_reject_a_fat_opposite_line():
    ind = induce(weight_one(1))
    # Doctor W so that W_{2n-m} ∩ F^{2n-m} is 2-dimensional: push every
    # level down by declaring the whole space at the old m-level.
    squashed = InducedStructure(
        weight=3, twist=0, q=ind.q,
        f=ind.f,
        w=ind.w.__class__(ind.dim, {2: Subspace.full(ind.dim)}),
        cone=NilpotentCone((), ind.q),
        factor_exponents=ind.factor_exponents, v_data=ind.v_data,
        bigraded=ind.bigraded)
    with pytest.raises((ValueError, ArithmeticError)):
        locate_markers(squashed)
