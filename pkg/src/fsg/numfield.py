"""Prime splitting and residue arithmetic for number fields given by integer polynomials.

A field is presented by a monic irreducible h over Z (arbitrary-precision
coefficients, ascending order).  A prime of the field is carried as (q, gbar)
with gbar an irreducible factor of h mod q; only primes with h mod q squarefree
are ever used, which keeps the representation index-safe (the residue degrees
are then the true ones).  Everything else is skipped via UnusablePrime.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .ffield import (
    ExtField,
    PrimeField,
    factor_squarefree,
    is_pth_power,
    poly_deg,
    poly_deriv,
    poly_eval,
    poly_gcd,
    poly_trim,
    roots_in_ext,
)


class UnusablePrime(ValueError):
    """h mod q is not squarefree (q ramified or index-obstructed): skip q."""

    def __init__(self, q: int, label: str = ""):
        self.q = q
        super().__init__(f"prime {q} unusable for {label or 'field'}")


class NotReducible(ValueError):
    """q divides the denominator of the element."""


class ZeroImage(ValueError):
    """The element has positive valuation at the prime; the residue test
    cannot consume it and the caller must move to another prime."""


class RootCountMismatch(ValueError):
    """Fewer roots than the degree: the polynomial is not Galois as promised."""


@dataclass(frozen=True)
class NumberFieldPresentation:
    """Monic irreducible h over Z, ascending coefficients; irreducibility is
    an input promise for large fixtures."""

    poly: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        if not self.poly or self.poly[-1] != 1:
            raise ValueError("defining polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1


@dataclass(frozen=True)
class NFElement:
    """num(theta)/den with deg num < deg h and den a positive integer."""

    num: tuple[int, ...]
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")


@dataclass(frozen=True)
class PrimeIdealRep:
    """A prime above q: an irreducible factor of h mod q, with residue degree f."""

    q: int
    gbar: tuple[int, ...]
    f: int


def split_prime(K: NumberFieldPresentation, q: int) -> list[PrimeIdealRep]:
    """One PrimeIdealRep per irreducible factor of h mod q (squarefree case)."""
    F = PrimeField(q)
    hbar = poly_trim(tuple(c % q for c in K.poly))
    if poly_deg(hbar) != K.degree:
        raise UnusablePrime(q, K.label)  # cannot happen for monic h; guard anyway
    if poly_deg(poly_gcd(F, hbar, poly_deriv(F, hbar))) > 0:
        raise UnusablePrime(q, K.label)
    return [
        PrimeIdealRep(q, g, poly_deg(g)) for g in factor_squarefree(F, hbar)
    ]


def residue_field(P: PrimeIdealRep) -> PrimeField | ExtField:
    if P.f == 1:
        return PrimeField(P.q)
    return ExtField(P.q, P.gbar)


def theta_image(P: PrimeIdealRep, F=None):
    """Image of the field generator theta in the residue field of P."""
    F = F or residue_field(P)
    if P.f == 1:
        return (-P.gbar[0]) % P.q
    return F.gen


def reduce_element(K: NumberFieldPresentation, a: NFElement, P: PrimeIdealRep):
    """Image of a in O_K/P, a field of q^f elements.

    Raises NotReducible when q divides the denominator and ZeroImage when the
    image vanishes (positive valuation), which the Kummer test must not consume.
    """
    if a.den % P.q == 0:
        raise NotReducible(f"denominator divisible by {P.q}")
    F = residue_field(P)
    root = theta_image(P, F)
    if P.f == 1:
        num = poly_eval(F, tuple(c % P.q for c in a.num), root)
        img = F.mul(num, F.inv(a.den % P.q))
        if img == 0:
            raise ZeroImage(f"element reduces to 0 above {P.q}")
        return img
    num = poly_eval(F, tuple(F.embed(c) for c in a.num), root)
    img = F.mul(num, F.inv(F.embed(a.den)))
    if img == F.zero:
        raise ZeroImage(f"element reduces to 0 above {P.q}")
    return img


def kummer_residue_degree(
    K: NumberFieldPresentation, alpha: NFElement, P: PrimeIdealRep, p: int
) -> int:
    """Residue degree of a prime above P in K(alpha^(1/p)) relative to P: 1 if
    the image of alpha is a p-th power in the residue field, else p.

    Requires mu_p inside the residue field (p | q^f - 1), which holds whenever
    the ambient field contains the p-th roots of unity.
    """
    img = reduce_element(K, alpha, P)
    F = residue_field(P)
    return 1 if is_pth_power(F, img, p) else p


def frobenius_permutation(L: NumberFieldPresentation, q: int) -> tuple[int, ...]:
    """The q-power permutation of the roots of h in F_{q^f}, for Galois h.

    Roots are taken in a fixed deterministic order (lexicographic on
    coordinate vectors), so the permutation is well defined per (L, q); its
    order equals the residue degree of q.
    """
    parts = split_prime(L, q)
    fs = {P.f for P in parts}
    if len(fs) != 1:
        raise RootCountMismatch(
            f"mixed residue degrees {sorted(fs)} at {q}: polynomial not Galois"
        )
    f = fs.pop()
    E = residue_field(parts[0])
    roots = roots_in_ext(L.poly, E)
    if len(roots) != L.degree:
        raise RootCountMismatch(
            f"found {len(roots)} roots of degree-{L.degree} polynomial at {q}"
        )
    index = {r: i for i, r in enumerate(roots)}
    return tuple(index[E.pow(r, q)] for r in roots)


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i, v in enumerate(sieve) if v]


def usable_primes(
    K: NumberFieldPresentation, bound: int, skip: frozenset[int] | set[int] = frozenset()
) -> Iterator[tuple[int, list[PrimeIdealRep]]]:
    """(q, primes above q) for every usable rational prime q <= bound."""
    for q in primes_up_to(bound):
        if q in skip:
            continue
        try:
            yield q, split_prime(K, q)
        except UnusablePrime:
            continue
