import pytest

from fsg.ffield import ExtField, PrimeField, factor_squarefree, poly_deg
from fsg.numfield import (
    NFElement,
    NotReducible,
    NumberFieldPresentation,
    PrimeIdealRep,
    RootCountMismatch,
    UnusablePrime,
    ZeroImage,
    frobenius_permutation,
    kummer_residue_degree,
    primes_up_to,
    reduce_element,
    split_prime,
    usable_primes,
)
from galoispolys import random_galois_polys

SQRT_M3 = NumberFieldPresentation((3, 0, 1), "sqrt(-3)")
ZETA3 = NumberFieldPresentation((1, 1, 1), "zeta3")


def perm_order(perm):
    n = len(perm)
    order = 1
    seen = [False] * n
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        order = _lcm(order, length)
    return order


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def test_split_prime_two_primes_above_7():
    parts = split_prime(SQRT_M3, 7)
    assert [P.f for P in parts] == [1, 1]
    parts = split_prime(ZETA3, 7)
    assert [P.f for P in parts] == [1, 1]


def test_split_prime_inert_2_needs_index_free_presentation():
    # x^2+3 mod 2 = (x+1)^2 is not squarefree: 2 is index-obstructed there
    with pytest.raises(UnusablePrime):
        split_prime(SQRT_M3, 2)
    # the same field presented by x^2+x+1 shows 2 inert
    parts = split_prime(ZETA3, 2)
    assert len(parts) == 1 and parts[0].f == 2


def test_split_prime_ramified_unusable():
    with pytest.raises(UnusablePrime):
        split_prime(SQRT_M3, 3)
    with pytest.raises(UnusablePrime):
        split_prime(ZETA3, 3)


def test_split_prime_degree_sum():
    K = NumberFieldPresentation((1, 0, 0, 0, 1), "zeta8")  # x^4 + 1
    for q, parts in usable_primes(K, 60):
        assert sum(P.f for P in parts) == 4


def test_reduce_element_examples():
    one = NFElement((1,))
    parts = split_prime(ZETA3, 7)
    P = next(P for P in parts if P.gbar == (5, 1))  # x - 2
    assert reduce_element(ZETA3, one, P) == 1
    theta = NFElement((0, 1))
    assert reduce_element(ZETA3, theta, P) == 2
    with pytest.raises(NotReducible):
        reduce_element(ZETA3, NFElement((0, 1), 3), split_prime(ZETA3, 13)[0] if False else PrimeIdealRep(3, (1, 1), 1))
    # zero image: theta - 2 at the same prime
    with pytest.raises(ZeroImage):
        reduce_element(ZETA3, NFElement((-2, 1)), P)


def test_reduce_element_extension_field():
    parts = split_prime(ZETA3, 2)
    P = parts[0]
    theta = NFElement((0, 1))
    img = reduce_element(ZETA3, theta, P)
    F = ExtField(2, P.gbar)
    assert img == F.gen


def test_kummer_residue_degree_examples():
    parts = split_prime(ZETA3, 7)
    P = next(P for P in parts if P.gbar == (5, 1))
    # theta = zeta_3 reduces to 2, not a cube in F_7
    assert kummer_residue_degree(ZETA3, NFElement((0, 1)), P, 3) == 3
    # theta^3 = 1 is a cube
    assert kummer_residue_degree(ZETA3, NFElement((1,)), P, 3) == 1
    # 6 is a cube in F_7 (6 = 3^3 mod 7): use the element theta+4 -> 6
    assert kummer_residue_degree(ZETA3, NFElement((4, 1)), P, 3) == 1


def test_kummer_vs_direct_factorization():
    # split iff x^p - abar factors into linears; inert iff irreducible of degree p
    for q in (7, 13, 19, 31):
        F = PrimeField(q)
        parts = split_prime(ZETA3, q)
        if parts[0].f != 1:
            continue
        P = parts[0]
        for c in range(1, min(q, 12)):
            alpha = NFElement((c,))
            expected = kummer_residue_degree(ZETA3, alpha, P, 3)
            facs = factor_squarefree(F, (F.neg(c % q), 0, 0, 1)) if _sf(F, c) else None
            if facs is None:
                continue
            degs = sorted(poly_deg(g) for g in facs)
            assert degs == ([1, 1, 1] if expected == 1 else [3])


def _sf(F, c):
    # x^3 - c is squarefree over F_q iff c != 0 (q coprime to 3 here)
    return c % F.p != 0


def test_frobenius_identity_at_split_prime():
    assert frobenius_permutation(SQRT_M3, 7) == (0, 1)


def test_frobenius_two_cycle_at_inert_prime():
    assert frobenius_permutation(ZETA3, 2) == (1, 0)


def test_frobenius_order_equals_residue_degree_random_galois():
    for poly in random_galois_polys(20260810, count=20):
        L = NumberFieldPresentation(poly)
        hits = 0
        for q, parts in usable_primes(L, 200):
            f = parts[0].f
            perm = frobenius_permutation(L, q)
            assert perm_order(perm) == f
            hits += 1
        assert hits > 10  # plenty of usable primes below 200


def test_frobenius_rejects_non_galois():
    # x^3 - 2 is not Galois: 5 factors as linear * quadratic
    K = NumberFieldPresentation((-2, 0, 0, 1))
    with pytest.raises(RootCountMismatch):
        frobenius_permutation(K, 5)


def test_primes_up_to():
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
