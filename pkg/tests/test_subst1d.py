import random

import pytest
from hypothesis import given, settings, strategies as st

from betatiling import subst1d
from betatiling.subst1d import (
    AlphabetMismatch,
    EmptyWord,
    MatrixClass,
    NoPerronEigenvalue,
    SubstitutionError,
    build,
    classify_matrix,
    patch,
    substitute_patch,
)


def test_lsss_substitution(fig1):
    K = fig1.field
    assert fig1.matrix == ((1, 3), (1, 0))
    assert K.poly == (-3, -1, 1)
    assert fig1.heights == (K.beta, K.one)


def test_doubling(doubling):
    assert doubling.matrix == ((2,),)
    assert doubling.field.degree == 1
    assert doubling.beta == doubling.field.rational(2)
    assert doubling.heights == (doubling.field.one,)


def test_fibonacci(fib):
    assert fib.matrix == ((1, 1), (1, 0))
    assert fib.field.poly == (-1, -1, 1)
    assert fib.heights == (fib.beta, fib.field.one)


def test_minimal_polynomial_is_a_proper_factor():
    # charpoly x^3 - x^2 - 1 is irreducible; a->ab, b->c, c->a
    s = build("abc", {"a": "ab", "b": "c", "c": "a"})
    assert s.field.poly == (-1, 0, -1, 1)
    # two disjoint Fibonacci blocks: charpoly (x^2 - x - 1)^2, two-dimensional eigenspace
    s2 = build("abcd", {"a": "ab", "b": "a", "c": "cd", "d": "c"})
    assert s2.field.poly == (-1, -1, 1)
    assert all(h > 0 for h in s2.heights)
    # a Jordan-type coupling leaves no positive eigenvector
    with pytest.raises(NoPerronEigenvalue):
        build("abcd", {"a": "abc", "b": "a", "c": "cd", "d": "c"})


def test_errors():
    with pytest.raises(EmptyWord):
        build("ab", {"a": "ab", "b": ""})
    with pytest.raises(AlphabetMismatch):
        build("ab", {"a": "ax", "b": "a"})
    with pytest.raises(AlphabetMismatch):
        build("ab", {"a": "ab"})
    with pytest.raises(NoPerronEigenvalue):
        build("ab", {"a": "ab", "b": "b"})
    with pytest.raises(NoPerronEigenvalue):
        build("ab", {"a": "b", "b": "a"})
    with pytest.raises(SubstitutionError):
        subst1d.from_json({"alphabet": ["a"], "rules": {"a": ["a", "a"]}, "extra": 1})


def test_supplied_heights_are_verified(fib):
    K = fib.field
    assert build("ab", {"a": "ab", "b": "a"}, heights=[K.beta * 2, K.rational(2)]).heights[0] == K.beta * 2
    with pytest.raises(NoPerronEigenvalue):
        build("ab", {"a": "ab", "b": "a"}, heights=[K.one, K.one])


def test_classify_matrix(fig1):
    assert classify_matrix(fig1) is MatrixClass.PRIMITIVE
    assert classify_matrix(((1, 1), (1, 1))) is MatrixClass.PRIMITIVE
    assert classify_matrix(((1, 1), (0, 1))) is MatrixClass.REDUCIBLE
    assert classify_matrix(((0, 1), (1, 0))) is MatrixClass.IRREDUCIBLE_NOT_PRIMITIVE


def test_substitute_patch_examples(fig1):
    K = fig1.field
    b = K.beta
    img = substitute_patch(fig1, patch(fig1, 0, "l"))
    assert img.word == tuple("lsss")
    assert [(t.left, t.right) for t in img.tiles] == [(K.zero, b), (b, b + 1), (b + 1, b + 2), (b + 2, b + 3)]
    assert b + 3 == b * b
    assert substitute_patch(fig1, patch(fig1, 0, "s")).support == (K.zero, b)


def test_json_round_trip(fig1):
    again = subst1d.from_json(subst1d.to_json(fig1))
    assert again.heights == fig1.heights and again.matrix == fig1.matrix


def test_length_identity(fig1, fib):
    for s in (fig1, fib):
        for a in s.alphabet:
            assert s.word_length(s.rule[a]) == s.beta * s.height(a)


@pytest.mark.parametrize("name", ["fig1", "fib", "doubling"])
def test_substitution_commutes_with_translation(name, request):
    s = request.getfixturevalue(name)
    K = s.field
    rng = random.Random(9)
    for _ in range(25):
        word = [rng.choice(s.alphabet) for _ in range(rng.randint(1, 6))]
        t = K([rng.randint(-5, 5) for _ in range(K.degree)])
        p = patch(s, 0, word)
        lhs = substitute_patch(s, p.translate(t))
        rhs = substitute_patch(s, p).translate(s.beta * t)
        assert lhs.left == rhs.left and lhs.word == rhs.word
        assert substitute_patch(s, p.translate(t)).support == tuple(x * s.beta for x in p.translate(t).support)


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.sampled_from("abc"), st.text("abc", min_size=1, max_size=4), min_size=3, max_size=3))
def test_random_rules_satisfy_eigen_equation(rule):
    try:
        s = build("abc", rule)
    except (NoPerronEigenvalue, subst1d.DegreeCapExceeded):
        return
    M = s.matrix
    for i in range(3):
        total = s.field.zero
        for j in range(3):
            total = total + s.heights[j] * M[i][j]
        assert total == s.beta * s.heights[i]
    assert all(h > 0 for h in s.heights)
