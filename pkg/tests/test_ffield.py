import random

import pytest

from fsg.ffield import (
    ExtField,
    NotSquarefree,
    PRootAbsent,
    PrimeField,
    distinct_degree_factorization,
    factor_squarefree,
    is_pth_power,
    is_prime,
    poly_deg,
    poly_eval,
    poly_gcd,
    poly_mod,
    poly_mul,
    poly_sub,
    poly_trim,
    roots_in_ext,
    split_equal_degree,
)

F7 = PrimeField(7)
F2 = PrimeField(2)
F5 = PrimeField(5)


def test_prime_check():
    assert is_prime(2) and is_prime(3) and is_prime(2**31 - 1)
    assert not is_prime(1) and not is_prime(561) and not is_prime(2**32)
    with pytest.raises(ValueError):
        PrimeField(15)


def test_ext_field_construction():
    F4 = ExtField(2, (1, 1, 1))
    assert F4.order == 4
    w = F4.gen
    assert F4.mul(w, w) == F4.add(w, F4.one)  # w^2 = w + 1
    with pytest.raises(ValueError):
        ExtField(2, (1, 0, 1))  # x^2 + 1 = (x+1)^2 over F_2


def test_ext_field_inverses():
    F9 = ExtField(3, (1, 0, 1))  # x^2 + 1 irreducible over F_3
    for a in F9.elements():
        if a == F9.zero:
            continue
        assert F9.mul(a, F9.inv(a)) == F9.one


def test_ddf_two_split_primes():
    # x^2 + 3 over F_7 factors into two linear factors
    assert distinct_degree_factorization(F7, (3, 0, 1)) == [(1, (3, 0, 1))]


def test_ddf_inert_prime():
    # x^2 + x + 1 is irreducible over F_2 (the index-free presentation of the
    # field with 2 inert); x^2 + 3 mod 2 is not squarefree and must error
    assert distinct_degree_factorization(F2, (1, 1, 1)) == [(2, (1, 1, 1))]
    with pytest.raises(NotSquarefree):
        distinct_degree_factorization(F2, (1, 0, 1))


def test_ddf_linear():
    assert distinct_degree_factorization(F7, (0, 1)) == [(1, (0, 1))]


def test_split_equal_degree_examples():
    # x^2 + 3 = (x - 2)(x + 2) over F_7
    facs = split_equal_degree(F7, (3, 0, 1), 1)
    assert sorted(facs) == sorted([(5, 1), (2, 1)])
    for g in facs:
        assert poly_eval(F7, (3, 0, 1), F7.neg(g[0])) == 0
    # an irreducible stays put
    assert split_equal_degree(F2, (1, 1, 1), 2) == [(1, 1, 1)]
    # (x-1)(x-2)(x-3) over F_5
    f = poly_mul(F5, poly_mul(F5, (4, 1), (3, 1)), (2, 1))
    assert split_equal_degree(F5, f, 1) == [(2, 1), (3, 1), (4, 1)]


def test_split_deterministic():
    f = (3, 0, 1)
    assert split_equal_degree(F7, f, 1, seed=7) == split_equal_degree(F7, f, 1, seed=7)


def test_roots_in_ext_examples():
    assert roots_in_ext((3, 0, 1), F7) == [2, 5]
    F4 = ExtField(2, (1, 1, 1))
    rts = roots_in_ext((1, 1, 1), F4)
    assert sorted(rts) == sorted([(0, 1), (1, 1)])  # w and w^2 = w + 1
    assert roots_in_ext((-1, 1), F7) == [1]


def test_roots_count_matches_degree():
    # all factor degrees of f divide the extension degree -> deg(f) roots
    F8 = ExtField(2, (1, 1, 0, 1))
    f = (1, 1, 0, 0, 1, 1, 1)  # arbitrary squarefree poly over F_2
    assert poly_deg(poly_gcd(F2, f, (1, 0, 0, 0, 1, 1))) >= 0
    fac_degs = {d for d, _ in distinct_degree_factorization(F2, f)}
    if all(3 % d == 0 for d in fac_degs):
        assert len(roots_in_ext(f, F8)) == poly_deg(f)


def test_is_pth_power_examples():
    assert is_pth_power(F7, 1, 3)
    assert is_pth_power(F7, 6, 3)
    assert not is_pth_power(F7, 2, 3)
    assert not is_pth_power(F7, 4, 3)
    with pytest.raises(PRootAbsent):
        is_pth_power(F5, 2, 3)
    with pytest.raises(ValueError):
        is_pth_power(F7, 0, 3)


def test_is_pth_power_vs_enumeration():
    # agree with brute-force {x^p} for every field of size <= 3^6
    fields = [PrimeField(q) for q in (7, 13, 31)] + [
        ExtField(3, (1, 2, 0, 1)),  # F_27: x^3 + 2x + 1
        ExtField(2, (1, 1, 1)),
        ExtField(5, (2, 1, 1)),  # F_25 hosting 3rd roots of unity? 24 % 3 == 0
    ]
    for F in fields:
        for p in (2, 3):
            if (F.order - 1) % p != 0:
                continue
            powers = {F.pow(x, p) for x in F.elements() if x != F.zero}
            for a in F.elements():
                if a == F.zero:
                    continue
                assert is_pth_power(F, a, p) == (a in powers)


def _random_squarefree(F, rng, max_deg=20):
    while True:
        deg = rng.randrange(2, max_deg + 1)
        cs = [F.rand(rng) for _ in range(deg)] + [F.one]
        f = poly_trim(tuple(cs))
        from fsg.ffield import poly_deriv

        if poly_deg(poly_gcd(F, f, poly_deriv(F, f))) == 0:
            return f


def _is_irreducible_bruteforce(F, f):
    """Trial division by all monic polynomials of degree <= deg(f)/2."""
    d = poly_deg(f)
    if d == 1:
        return True
    from itertools import product

    els = list(F.elements())
    for deg in range(1, d // 2 + 1):
        for tail in product(els, repeat=deg):
            g = tuple(list(tail) + [F.one])
            if poly_deg(poly_mod(F, f, g)) < 0 or not poly_mod(F, f, g):
                return False
    return True


def test_factorization_roundtrip_property():
    rng = random.Random(20260810)
    for _ in range(12):
        q = rng.choice([2, 3, 5, 7, 11, 31])
        F = PrimeField(q)
        f = _random_squarefree(F, rng, max_deg=9 if q <= 3 else 6)
        facs = factor_squarefree(F, f)
        prod = (F.one,)
        for g in facs:
            prod = poly_mul(F, prod, g)
        assert poly_trim(prod) == poly_trim(
            tuple(F.mul(c, F.inv(f[-1])) for c in f)
        ) or prod == f
        for g in facs:
            assert _is_irreducible_bruteforce(F, g), g


def test_ddf_product_and_degrees():
    rng = random.Random(7)
    for _ in range(8):
        F = PrimeField(rng.choice([2, 3, 5]))
        f = _random_squarefree(F, rng, max_deg=10)
        parts = distinct_degree_factorization(F, f)
        degs = [d for d, _ in parts]
        assert degs == sorted(degs)
        prod = (F.one,)
        for _, g in parts:
            prod = poly_mul(F, prod, g)
        assert prod == poly_trim(tuple(F.mul(c, F.inv(f[-1])) for c in f))
        for d, g in parts:
            for fac in split_equal_degree(F, g, d):
                assert poly_deg(fac) == d
