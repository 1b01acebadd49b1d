import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from betatiling.field import (
    AlgebraicNumber,
    BadIndex,
    DegreeCapExceeded,
    FieldMismatch,
    NoPerronRoot,
    NotMonic,
    NotSquarefree,
    PisotKind,
    Reducible,
    field_from_poly,
    is_pisot,
)

K13 = field_from_poly([-3, -1, 1])
KFIB = field_from_poly([-1, -1, 1])
KCUBIC = field_from_poly([-1, -1, 0, 1])  # x^3 - x - 1, complex conjugate pair
KTRIB = field_from_poly([-1, -1, -1, 1])
K2 = field_from_poly([-2, 1])

# roots from an independent 30-digit numeric solve
ORACLE_ROOTS = {
    (-3, -1, 1): [2.3027756377319946466, -1.3027756377319946466],
    (-1, -1, 1): [1.6180339887498948482, -0.61803398874989484820],
    (-1, -1, 0, 1): [1.3247179572447460260, complex(-0.66235897862237301298, 0.5622795120623012439),
                     complex(-0.66235897862237301298, -0.5622795120623012439)],
}


def el(K, *c):
    return AlgebraicNumber(K, [Fraction(x) for x in c])


@pytest.mark.parametrize("poly", sorted(ORACLE_ROOTS))
def test_root_enclosures_contain_oracle_values(poly):
    K = field_from_poly(list(poly))
    for i, z in enumerate(ORACLE_ROOTS[poly], start=1):
        bx = K.root_box(i, 64)
        assert bx.width <= Fraction(1, 1 << 64)
        assert float(bx.re.lo) - 1e-15 <= complex(z).real <= float(bx.re.hi) + 1e-15
        assert float(bx.im.lo) - 1e-15 <= complex(z).imag <= float(bx.im.hi) + 1e-15


def test_enclosures_pairwise_disjoint():
    for K in (K13, KCUBIC, KTRIB, field_from_poly([-1, -1, 0, 0, 0, 1])):
        boxes = [K.root_box(i, 32) for i in range(1, K.degree + 1)]
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                assert not boxes[i].overlaps(boxes[j])


def test_linear_field():
    assert K2.degree == 1
    assert K2.beta == el(K2, 2)
    assert K2.companion == ((2,),)


def test_companion_matrix_layout():
    assert K13.companion == ((0, 3), (1, 1))
    assert KCUBIC.companion == ((0, 0, 1), (1, 0, 1), (0, 1, 0))


@pytest.mark.parametrize(
    "poly, exc",
    [
        ([-3, -1, 2], NotMonic),
        ([2, 1], NoPerronRoot),  # root -2
        ([1, 0, 1], NoPerronRoot),
        ([-1, 0, 1], Reducible),
        ([4, -4, 1], NotSquarefree),
        ([-2, -1, -1, 1], Reducible),  # (x - 2)(x^2 + x + 1)
        ([-1] + [0] * 8 + [-1, 1], DegreeCapExceeded),
    ],
)
def test_construction_errors(poly, exc):
    with pytest.raises(exc):
        field_from_poly(poly)


def test_reducible_reports_a_factor():
    with pytest.raises(Reducible) as info:
        field_from_poly([-2, -1, -1, 1])
    assert info.value.factor


def test_arith_examples():
    b = K13.beta
    assert b * b == el(K13, 3, 1)
    assert (b - 1) * b == el(K13, 3)
    assert 1 + 3 / b == b
    rng = random.Random(5)
    for _ in range(20):
        a = el(K13, Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        assert a * 1 == a


def test_division_by_zero_and_field_mismatch():
    with pytest.raises(ZeroDivisionError):
        K13.beta / K13.zero
    with pytest.raises(FieldMismatch):
        K13.beta + KFIB.beta
    with pytest.raises(FieldMismatch):
        K13.compare(K13.beta, KFIB.beta)


def test_compare_examples():
    b = K13.beta
    assert K13.compare(1 + 3 / b, b) == 0
    assert K13.compare(b, b) == 0
    assert K13.compare(b - 1, el(K13, 1)) == 1
    assert (b - 1) > 1


def test_conjugate_enclosure_examples():
    assert K13.conjugate_enclosure(el(K13, 1, 0), 2).re.contains(1)
    bx = K13.conjugate_enclosure(el(K13, 3, 1), 2, 64)
    # (7 - sqrt 13)/2 from the oracle
    assert abs(float(bx.re.mid) - 1.6972243622680053534) < 1e-15
    assert bx.width <= Fraction(1, 1 << 64)
    m = K13.abs_enclosure(el(K13, -6, 3), 2)
    assert abs(float(m.mid) - 9.9083269131959839397) < 1e-14
    with pytest.raises(BadIndex):
        K13.conjugate_enclosure(K13.one, 1)
    with pytest.raises(BadIndex):
        K13.conjugate_enclosure(K13.one, 3)


def test_pisot_examples():
    v = is_pisot(K13)
    assert v.kind is PisotKind.NON_PISOT and v.witness == 2
    assert 1.30 < float(v.moduli[2].lo) and float(v.moduli[2].hi) < 1.31
    assert is_pisot(K2).is_pisot
    assert is_pisot(KFIB).is_pisot
    assert is_pisot(KTRIB).is_pisot
    assert is_pisot(KCUBIC).is_pisot


def test_salem_number_is_boundary():
    K = field_from_poly([1, -1, -1, -1, 1])
    v = is_pisot(K)
    assert v.kind is PisotKind.BOUNDARY


def test_non_pisot_with_complex_witness():
    K = field_from_poly([-1, -1, 0, 0, 0, 1])  # x^5 - x - 1, a complex pair of modulus 1.099
    v = is_pisot(K)
    assert v.kind is PisotKind.NON_PISOT
    assert not K.is_real_root(v.witness)


def test_literal_round_trip():
    a = el(K13, Fraction(-7, 3), Fraction(5, 11))
    assert AlgebraicNumber.from_literal(K13, a.to_literal()) == a
    assert str(a) == "-7/3 + (5/11)β"


# -- properties --------------------------------------------------------------

coef = st.fractions(min_value=-20, max_value=20, max_denominator=12)
FIELDS = [K13, KFIB, KCUBIC, KTRIB]


def elements(K):
    return st.lists(coef, min_size=K.degree, max_size=K.degree).map(lambda c: AlgebraicNumber(K, c))


def numeric(a: AlgebraicNumber, z) -> complex:
    return complex(sum(mpmath.mpf(c.numerator) / c.denominator * z**k for k, c in enumerate(a.coeffs)))


@pytest.mark.parametrize("K", FIELDS, ids=lambda K: K.poly_str())
def test_mul_by_beta_is_companion_action(K):
    rng = random.Random(11)
    A = K.companion
    for _ in range(100):
        a = AlgebraicNumber(K, [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(K.degree)])
        Aw = tuple(sum(A[i][j] * a.coeffs[j] for j in range(K.degree)) for i in range(K.degree))
        assert (K.beta * a).coeffs == Aw
        assert a.mul_beta() == K.beta * a


@pytest.mark.parametrize("K", FIELDS, ids=lambda K: K.poly_str())
def test_compare_agrees_with_high_precision_evaluation(K):
    rng = random.Random(3)
    beta = mpmath.findroot(lambda x: sum(c * x**k for k, c in enumerate(K.poly)), float(K.beta_interval(30).mid))
    with mpmath.workdps(50):
        for _ in range(1000):
            a = AlgebraicNumber(K, [Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(K.degree)])
            b = AlgebraicNumber(K, [Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(K.degree)])
            diff = numeric(a, beta).real - numeric(b, beta).real
            c = K.compare(a, b)
            if a == b:
                assert c == 0
            else:
                assert c == (1 if diff > 0 else -1)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_field_axioms(data):
    K = data.draw(st.sampled_from(FIELDS))
    a, b, c = (data.draw(elements(K)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == K.zero
    if not a.is_zero():
        assert a * a.inverse() == K.one
        assert (b / a) * a == b


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_conjugate_embedding_is_multiplicative(data):
    K = data.draw(st.sampled_from(FIELDS))
    a, b = data.draw(elements(K)), data.draw(elements(K))
    for i in range(1, K.degree + 1):
        ea, eb, eab = K.embed(a, i, 48), K.embed(b, i, 48), K.embed(a * b, i, 48)
        assert (ea * eb).overlaps(eab)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_compare_abs_consistent_with_enclosure(data):
    K = data.draw(st.sampled_from(FIELDS))
    a = data.draw(elements(K))
    r = data.draw(st.fractions(min_value=0, max_value=30, max_denominator=7))
    for i in K.representative_conjugates():
        s = K.compare_abs(a, i, r)
        m = K.abs_enclosure(a, i, 80)
        if s == 1:
            assert m.hi > r
        elif s == -1:
            assert m.lo < r
        elif s == 0:
            assert m.contains(r)


def test_refinement_shrinks_beta_enclosure():
    for K in FIELDS:
        prev = None
        for bits in (8, 16, 32, 64):
            iv = K.beta_interval(bits)
            assert iv.width <= Fraction(1, 1 << bits)
            if prev is not None:
                assert prev.lo <= iv.lo and iv.hi <= prev.hi or iv.width <= prev.width / 2
            prev = iv
