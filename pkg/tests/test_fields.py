import pytest
from hypothesis import given, settings, strategies as st

from glie.errors import UnsupportedField
from glie.fields import FieldSpec, batch_field, find_nonsquare, smallest_irreducible

GF5 = FieldSpec.prime(5)
GF7 = FieldSpec.prime(7)
GF25 = FieldSpec.extension(5, 2)


def test_basic_arithmetic_gf5():
    a = GF5.from_int(3)
    b = GF5.from_int(4)
    assert (a + b).code == 2
    assert (GF5.from_int(2).inverse()).code == 3
    assert (GF5.from_int(3) ** 5).code == 3  # a^q = a


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF5.zero().inverse()


def test_small_characteristics_rejected():
    for p in (2, 3, 4, 9):
        with pytest.raises(UnsupportedField):
            FieldSpec.prime(p)


def test_smallest_irreducible_gf25():
    # t^2 + t + 1 has discriminant 1 - 4 = 2, a non-square mod 5
    assert smallest_irreducible(5, 2) == (1, 1, 1)


@pytest.mark.parametrize("spec", [GF5, GF7, GF25])
def test_frobenius_fixes_field(spec):
    q = spec.q
    for a in spec.elements():
        assert a ** q == a
        if not a.is_zero():
            assert (a ** (q - 1)).code == 1


@pytest.mark.parametrize("spec", [GF5, GF7, GF25])
def test_square_count(spec):
    nonzero_squares = {(a * a).code for a in spec.elements() if not a.is_zero()}
    assert len(nonzero_squares) == (spec.q - 1) // 2


@pytest.mark.parametrize(
    "spec,expected",
    [(GF5, 2), (GF7, 3), (FieldSpec.prime(13), 2)],
)
def test_find_nonsquare_frozen(spec, expected):
    # oracle: direct enumeration of the square set
    sq = {(a * a).code for a in spec.elements()}
    b = find_nonsquare(spec)
    assert b.code == expected
    assert b.code not in sq


@pytest.mark.parametrize("spec", [GF5, GF25])
def test_find_nonsquare_never_a_square(spec):
    sq = {(a * a).code for a in spec.elements()}
    assert find_nonsquare(spec).code not in sq


@given(a=st.integers(0, 24), b=st.integers(0, 24), c=st.integers(0, 24))
@settings(max_examples=60)
def test_field_axioms_gf25(a, b, c):
    x, y, z = (GF25.from_code(v) for v in (a, b, c))
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x + y == y + x
    assert x * y == y * x
    if not x.is_zero():
        assert (x * x.inverse()).code == 1


@given(a=st.integers(0, 24), n=st.integers(0, 60))
@settings(max_examples=40)
def test_pow_matches_naive(a, n):
    x = GF25.from_code(a)
    naive = GF25.one()
    for _ in range(n):
        naive = naive * x
    assert x ** n == naive


def test_code_roundtrip():
    for spec in (GF5, GF25):
        for c in range(spec.q):
            assert spec.from_code(c).code == c


@pytest.mark.parametrize("spec", [GF5, GF25])
def test_batch_field_matches_scalar(spec):
    import numpy as np

    bf = batch_field(spec)
    codes = np.arange(spec.q, dtype=np.int64)
    a = np.repeat(codes, spec.q)
    b = np.tile(codes, spec.q)
    els = spec.elements()
    add = bf.add(a, b)
    mul = bf.mul(a, b)
    neg = bf.neg(a)
    for i in range(spec.q ** 2):
        x, y = els[a[i]], els[b[i]]
        assert add[i] == (x + y).code
        assert mul[i] == (x * y).code
        assert neg[i] == (-x).code
