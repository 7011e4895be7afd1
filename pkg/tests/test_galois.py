import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kakeyalab.galois import (
    Field,
    field_of_order,
    is_irreducible,
    make_field,
    mat_inverse,
    mat_mul,
    nullspace,
    prime_power,
    smallest_irreducible,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64]


def poly_mulmod(a, b, modulus, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus (oracle)."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    t = len(modulus) - 1
    for d in range(len(prod) - 1, t - 1, -1):
        c = prod[d]
        if c:
            for k in range(t + 1):
                prod[d - t + k] = (prod[d - t + k] - c * modulus[k]) % p
    return (prod + [0] * t)[:t]


def digits(a, p, t):
    return [(a // p**i) % p for i in range(t)]


def test_prime_field_is_integers_mod_p():
    F = make_field(5, 1)
    for a, b in itertools.product(range(5), repeat=2):
        assert F.add(a, b) == (a + b) % 5
        assert F.mul(a, b) == (a * b) % 5
    assert F.inv(2) == 3


def test_gf9_modulus_is_x2_plus_1():
    F = make_field(3, 2)
    assert F.modulus == [1, 0, 1]
    # x^2 + 1 has no root mod 3
    assert all((r * r + 1) % 3 for r in range(3))


def test_gf4_alpha_squared():
    F = make_field(2, 2)
    assert F.modulus == [1, 1, 1]
    alpha = 2  # the element x
    assert F.mul(alpha, alpha) == F.add(alpha, 1) == 3


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_multiplication_matches_polynomial_oracle(q):
    F = field_of_order(q)
    for a, b in itertools.product(range(q), repeat=2):
        r = poly_mulmod(digits(a, F.p, F.t), digits(b, F.p, F.t), F.modulus, F.p)
        assert F.mul(a, b) == sum(c * F.p**i for i, c in enumerate(r))


@pytest.mark.parametrize("p,t", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (2, 6)])
def test_modulus_is_smallest_irreducible(p, t):
    m = smallest_irreducible(p, t)
    assert is_irreducible(m, p)
    code = sum(c * p**i for i, c in enumerate(m))
    # every smaller monic code of degree t is reducible
    for smaller in range(p**t, code):
        cand = [(smaller // p**i) % p for i in range(t + 1)]
        assert not is_irreducible(cand, p)
    if t <= 3:
        assert all(sum(c * r**i for i, c in enumerate(m)) % p for r in range(p))


@pytest.mark.parametrize("q", [q for q in ORDERS if q <= 64])
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    A, M = F.add_table, F.mul_table
    import numpy as np

    assert (A == A.T).all() and (M == M.T).all()
    idx = np.arange(q)
    assert (A[A[:, :, None], idx[None, None, :]] == A[idx[:, None, None], A[None, :, :]]).all()
    assert (M[M[:, :, None], idx[None, None, :]] == M[idx[:, None, None], M[None, :, :]]).all()
    # distributivity a*(b+c) = a*b + a*c
    lhs = M[idx[:, None, None], A[None, :, :]]
    rhs = A[M[:, :, None], M[:, None, :]]
    assert (lhs == rhs).all()
    assert (A[:, 0] == idx).all() and (M[:, 1] == idx).all()
    assert [a for a in range(q) if F.add(a, 0) == a and all(F.add(a, b) == b for b in range(q))] == [0]


@pytest.mark.parametrize("q", ORDERS)
def test_lagrange_cyclic_and_wilson(q):
    F = field_of_order(q)
    assert all(F.pow(a, q - 1) == 1 for a in range(1, q))
    g = F.primitive_element()
    assert len({F.pow(g, k) for k in range(q - 1)}) == q - 1
    assert F.prod(F.nonzero()) == F.neg(1)


def test_elements_listing():
    assert make_field(2).elements() == [0, 1]
    assert make_field(3, 2).elements() == list(range(9))


def test_errors():
    with pytest.raises(ValueError):
        make_field(6, 1)
    with pytest.raises(ValueError):
        make_field(3, 0)
    with pytest.raises(ZeroDivisionError):
        make_field(5).inv(0)
    with pytest.raises(ValueError):
        prime_power(12)
    with pytest.raises(TypeError):
        make_field(5)(1) + make_field(7)(1)


def test_element_wrapper():
    F = make_field(2, 2)
    a = F(2)
    assert a * a == a + 1
    assert (a / a) == 1
    assert a.inverse() * a == 1
    assert -a == a
    assert a ** 3 == 1


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ORDERS), st.data())
def test_inverse_and_pow_properties(q, data):
    F = field_of_order(q)
    a = data.draw(st.integers(1, q - 1))
    k = data.draw(st.integers(-50, 50))
    assert F.mul(a, F.inv(a)) == 1
    assert F.mul(F.pow(a, k), F.pow(a, -k)) == 1
    assert F.pow(a, k + q - 1) == F.pow(a, k)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([3, 4, 5, 9]), st.data())
def test_dense_linear_algebra(q, data):
    F = field_of_order(q)
    rows = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=4, max_size=4), min_size=1, max_size=3))
    for v in nullspace(F, rows, 4):
        assert all(F.total(F.mul(x, y) for x, y in zip(r, v)) == 0 for r in rows)
    m = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=3, max_size=3), min_size=3, max_size=3))
    try:
        inv = mat_inverse(F, m)
    except ValueError:
        return
    assert mat_mul(F, m, inv) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_field_is_value_like():
    assert make_field(3, 2) == Field(3, 2)
    assert make_field(3, 2) is make_field(3, 2)
    csv = make_field(3).to_csv("mul").splitlines()
    assert csv[0] == "op,0,1,2" and csv[3] == "2,0,2,1"
