"""Exact arithmetic over F_p and F_{q^k}, and univariate polynomial factorization.

Polynomials are coefficient sequences in ascending degree order.  Elements of a
prime field are plain ints reduced mod p; elements of an extension field are
tuples of ints (coordinates w.r.t. the power basis of the defining polynomial).
Both are immutable and hashable, so values can be shared freely across threads.
"""

from __future__ import annotations

import random
from typing import Iterator, Sequence

DEFAULT_SEED = 0x5EED


class NotSquarefree(ValueError):
    """Input polynomial has a repeated factor."""


class PRootAbsent(ValueError):
    """The field contains no p-th roots of unity (p does not divide q^k - 1)."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24 (covers machine words)."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """F_p with elements represented as ints in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.char = p
        self.order = p
        self.zero = 0
        self.one = 1 % p

    def __repr__(self):
        return f"F({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def element(self, c: int) -> int:
        return c % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e: int):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def rand(self, rng: random.Random) -> int:
        return rng.randrange(self.p)


class ExtField:
    """F_{q^k} presented over the prime field by a single monic irreducible.

    Towers are always flattened to one extension of the prime field.  Elements
    are length-k tuples of ints, coordinates on 1, z, ..., z^{k-1}.
    """

    def __init__(self, q: int, modulus: Sequence[int]):
        self.base = PrimeField(q)
        self.q = q
        mod = poly_trim(tuple(c % q for c in modulus))
        k = len(mod) - 1
        if k < 1 or mod[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree >= 1")
        if k > 1 and not _is_irreducible(self.base, mod):
            raise ValueError("defining polynomial is reducible")
        self.modulus = mod
        self.k = k
        self.char = q
        self.order = q**k
        self.zero = (0,) * k
        self.one = tuple([1 % q] + [0] * (k - 1))
        self.gen = tuple([0, 1] + [0] * (k - 2)) if k >= 2 else (0,)

    def __repr__(self):
        return f"F({self.q}^{self.k})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.q == self.q
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ExtField", self.q, self.modulus))

    def element(self, coords: Sequence[int]) -> tuple:
        cs = [c % self.q for c in coords]
        if len(cs) > self.k:
            cs = list(_poly_mod_coeffs(self.base, cs, self.modulus))
        return tuple(cs + [0] * (self.k - len(cs)))

    def embed(self, c: int) -> tuple:
        """Image of a prime-field element."""
        return self.element([c])

    def add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a):
        q = self.q
        return tuple(-x % q for x in a)

    def mul(self, a, b):
        k = self.k
        q = self.q
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] = (prod[i + j] + x * y) % q
        red = _poly_mod_coeffs(self.base, prod, self.modulus)
        return tuple(list(red) + [0] * (k - len(red)))

    def inv(self, a):
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = _poly_xgcd(self.base, poly_trim(a), self.modulus)
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible")
        c = self.base.inv(g[0])
        s = tuple(self.base.mul(c, x) for x in s)
        return tuple(list(s) + [0] * (self.k - len(s)))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def elements(self) -> Iterator[tuple]:
        coords = [0] * self.k
        for _ in range(self.order):
            yield tuple(coords)
            for i in range(self.k):
                coords[i] += 1
                if coords[i] < self.q:
                    break
                coords[i] = 0

    def rand(self, rng: random.Random) -> tuple:
        return tuple(rng.randrange(self.q) for _ in range(self.k))


Field = PrimeField | ExtField


# ---------------------------------------------------------------------------
# polynomial arithmetic over a Field


def poly_trim(f) -> tuple:
    f = tuple(f)
    n = len(f)
    while n > 0 and not _is_nonzero(f[n - 1]):
        n -= 1
    return f[:n]


def _is_nonzero(c) -> bool:
    if isinstance(c, tuple):
        return any(x != 0 for x in c)
    return c != 0


def poly_deg(f) -> int:
    return len(poly_trim(f)) - 1


def poly_add(F: Field, f, g) -> tuple:
    n = max(len(f), len(g))
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    return poly_trim(tuple(F.add(a, b) for a, b in zip(f, g)))


def poly_sub(F: Field, f, g) -> tuple:
    n = max(len(f), len(g))
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    return poly_trim(tuple(F.sub(a, b) for a, b in zip(f, g)))


def poly_mul(F: Field, f, g) -> tuple:
    f, g = poly_trim(f), poly_trim(g)
    if not f or not g:
        return ()
    prod = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if _is_nonzero(a):
            for j, b in enumerate(g):
                prod[i + j] = F.add(prod[i + j], F.mul(a, b))
    return poly_trim(tuple(prod))


def poly_scale(F: Field, c, f) -> tuple:
    return poly_trim(tuple(F.mul(c, a) for a in f))


def poly_divmod(F: Field, f, g) -> tuple[tuple, tuple]:
    f, g = list(poly_trim(f)), poly_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    lead_inv = F.inv(g[-1])
    quot = [F.zero] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        c = F.mul(f[-1], lead_inv)
        shift = len(f) - 1 - dg
        quot[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = F.sub(f[shift + i], F.mul(c, b))
        f = list(poly_trim(f))
    return poly_trim(tuple(quot)), poly_trim(tuple(f))


def poly_mod(F: Field, f, g) -> tuple:
    return poly_divmod(F, f, g)[1]


def _poly_mod_coeffs(F: PrimeField, f, g):
    return poly_mod(F, poly_trim(tuple(f)), g)


def poly_monic(F: Field, f) -> tuple:
    f = poly_trim(f)
    if not f:
        return f
    return poly_scale(F, F.inv(f[-1]), f)


def poly_gcd(F: Field, f, g) -> tuple:
    f, g = poly_trim(f), poly_trim(g)
    while g:
        f, g = g, poly_mod(F, f, g)
    return poly_monic(F, f)


def _poly_xgcd(F: Field, f, g):
    r0, r1 = poly_trim(f), poly_trim(g)
    s0, s1 = (F.one,), ()
    t0, t1 = (), (F.one,)
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, q, s1))
        t0, t1 = t1, poly_sub(F, t0, poly_mul(F, q, t1))
    return r0, s0, t0


def poly_deriv(F: Field, f) -> tuple:
    f = poly_trim(f)
    out = []
    for i in range(1, len(f)):
        c = f[i]
        scaled = F.mul(F.element(i) if isinstance(F, PrimeField) else F.embed(i), c)
        out.append(scaled)
    return poly_trim(tuple(out))


def poly_pow_mod(F: Field, f, e: int, m) -> tuple:
    result = (F.one,)
    f = poly_mod(F, f, m)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, f), m)
        f = poly_mod(F, poly_mul(F, f, f), m)
        e >>= 1
    return result


def poly_eval(F: Field, f, x):
    acc = F.zero
    for c in reversed(poly_trim(f)):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _is_irreducible(F: PrimeField, f) -> bool:
    """Rabin test: x^{q^k} = x mod f and gcd(x^{q^{k/l}} - x, f) = 1."""
    f = poly_trim(f)
    k = len(f) - 1
    x = (F.zero, F.one)
    xq = poly_pow_mod(F, x, F.order**k, f)
    if poly_sub(F, xq, x):
        return False
    for ell in _prime_divisors(k):
        xql = poly_pow_mod(F, x, F.order ** (k // ell), f)
        if poly_deg(poly_gcd(F, poly_sub(F, xql, x), f)) > 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# factorization


def distinct_degree_factorization(F: Field, f) -> list[tuple[int, tuple]]:
    """Split monic squarefree f into (d, product of all irreducible factors of
    degree d), sorted by d; trivial entries omitted."""
    f = poly_monic(F, poly_trim(f))
    if poly_deg(f) < 1:
        return []
    if poly_deg(poly_gcd(F, f, poly_deriv(F, f))) > 0:
        raise NotSquarefree("polynomial has a repeated factor")
    out = []
    rem = f
    q = F.order
    x = (F.zero, F.one)
    h = x
    d = 0
    while poly_deg(rem) > 0:
        d += 1
        if 2 * d > poly_deg(rem):
            out.append((poly_deg(rem), rem))
            break
        h = poly_pow_mod(F, h, q, rem)
        g = poly_gcd(F, poly_sub(F, h, x), rem)
        if poly_deg(g) > 0:
            out.append((d, g))
            rem, r = poly_divmod(F, rem, g)
            assert not r
            h = poly_mod(F, h, rem)
    return out


def split_equal_degree(F: Field, g, d: int, seed: int = DEFAULT_SEED) -> list[tuple]:
    """All irreducible factors of g, a squarefree product of degree-d irreducibles.

    Cantor-Zassenhaus with a seeded generator: runs are bit-reproducible and
    the result is sorted canonically.
    """
    g = poly_monic(F, poly_trim(g))
    rng = random.Random(seed)
    out: list[tuple] = []
    stack = [g]
    while stack:
        h = stack.pop()
        if poly_deg(h) == d:
            out.append(h)
            continue
        stack.extend(_split_once(F, h, d, rng))
    out.sort(key=_poly_sort_key)
    return out


def _split_once(F: Field, h, d: int, rng: random.Random):
    q = F.order
    while True:
        a = poly_trim(tuple(F.rand(rng) for _ in range(poly_deg(h))))
        if poly_deg(a) < 1:
            continue
        if F.char == 2:
            # trace map over F_2: a + a^2 + ... + a^{2^{kd-1}}
            k = 1 if isinstance(F, PrimeField) else F.k
            t = a
            s = a
            for _ in range(k * d - 1):
                s = poly_pow_mod(F, s, 2, h)
                t = poly_add(F, t, s)
            cand = poly_gcd(F, t, h)
        else:
            b = poly_pow_mod(F, a, (q**d - 1) // 2, h)
            cand = poly_gcd(F, poly_sub(F, b, (F.one,)), h)
        if 0 < poly_deg(cand) < poly_deg(h):
            other, r = poly_divmod(F, h, cand)
            assert not r
            return [cand, other]


def factor_squarefree(F: Field, f, seed: int = DEFAULT_SEED) -> list[tuple]:
    """All irreducible factors of a monic squarefree polynomial, sorted."""
    out = []
    for d, gd in distinct_degree_factorization(F, f):
        out.extend(split_equal_degree(F, gd, d, seed=seed))
    out.sort(key=_poly_sort_key)
    return out


def _poly_sort_key(f):
    return (len(f), tuple((c if isinstance(c, tuple) else (c,)) for c in f))


def roots_in_ext(f, E: ExtField | PrimeField) -> list:
    """All roots in E of a squarefree f with prime-field coefficients,
    in a deterministic (lexicographic-coordinate) order."""
    if isinstance(E, PrimeField):
        lifted = poly_trim(tuple(c % E.p for c in f))
    else:
        lifted = poly_trim(tuple(E.embed(c) for c in f))
    if poly_deg(lifted) < 1:
        return []
    x = (E.zero, E.one)
    xq = poly_pow_mod(E, x, E.order, lifted)
    lin = poly_gcd(E, poly_sub(E, xq, x), lifted)
    roots = []
    for fac in (
        split_equal_degree(E, lin, 1) if poly_deg(lin) >= 1 else []
    ):
        roots.append(E.neg(fac[0]))
    roots.sort(key=lambda r: r if isinstance(r, tuple) else (r,))
    return roots


def is_pth_power(F: Field, a, p: int) -> bool:
    """Whether nonzero a lies in (F*)^p, for p dividing |F| - 1."""
    if not _is_nonzero(a if isinstance(a, tuple) else a):
        raise ValueError("zero is excluded from the p-th power test")
    if (F.order - 1) % p != 0:
        raise PRootAbsent(f"{p} does not divide {F.order} - 1")
    return F.pow(a, (F.order - 1) // p) == F.one
