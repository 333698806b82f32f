"""Exact models of radical towers over cyclotomic fields.

A model is Q(zeta_M) extended by radicals xi_1, ..., xi_s with xi_i^{n_i} = u_i,
where each radicand u_i lives in the subalgebra generated by zeta and the
earlier radicals.  Elements are maps {radical exponent tuple -> cyclotomic
vector} with exact Fraction coordinates, so all arithmetic is exact.

The automorphism group is constructed symbolically, level by level: an
automorphism maps zeta to zeta^c and each radical to (cyclotomic t) * monomial,
with t recovered by root extraction in the cyclotomic part (numeric embeddings
plus exact verification).  Frobenius at a usable prime q is identified as the
unique automorphism inducing the q-power map under a residue-field embedding;
the choice of embedding is the choice of a prime above q, so the element is
canonical up to conjugacy, which is all the covering computation consumes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath as mp

from .ffield import (
    ExtField,
    PrimeField,
    factor_squarefree,
    is_pth_power,
    poly_deg,
    poly_trim,
    roots_in_ext,
)
from .numfield import NumberFieldPresentation, split_prime, UnusablePrime
from .permgroup import PermGroup

Vec = tuple[Fraction, ...]


class ModelError(RuntimeError):
    pass


def _phi(n: int) -> int:
    out, m, d = n, n, 2
    while d * d <= m:
        if m % d == 0:
            out -= out // d
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out -= out // m
    return out


def _cyclotomic_poly(n: int) -> tuple[int, ...]:
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, list(_cyclotomic_poly(d)))
    return tuple(num)


def _poly_div_exact(f: list[int], g: list[int]) -> list[int]:
    f = f[:]
    out = [0] * (len(f) - len(g) + 1)
    while len(f) >= len(g) and any(f):
        while f and f[-1] == 0:
            f.pop()
        if len(f) < len(g):
            break
        c = f[-1] // g[-1]
        shift = len(f) - len(g)
        out[shift] = c
        for i, b in enumerate(g):
            f[shift + i] -= c * b
    if any(f):
        raise ArithmeticError("non-exact division")
    return out


class CyclotomicField:
    """Q(zeta_M) with exact Fraction coordinates on 1, z, ..., z^{phi(M)-1}."""

    def __init__(self, M: int):
        self.M = M
        self.minpoly = _cyclotomic_poly(M)
        self.degree = len(self.minpoly) - 1
        self.zero = tuple([Fraction(0)] * self.degree)
        self.one = self._unit(0)
        # reduction table: z^k for k in [0, 2*degree)
        self._powers: list[Vec] = []
        cur = self.one
        for k in range(2 * self.degree):
            self._powers.append(cur)
            cur = self._shift(cur)
        self._zeta_cache: dict[int, Vec] = {}

    def _unit(self, i: int) -> Vec:
        v = [Fraction(0)] * self.degree
        if i < self.degree:
            v[i] = Fraction(1)
        return tuple(v)

    def _shift(self, v: Vec) -> Vec:
        """Multiply by z, reducing by the minimal polynomial."""
        out = [Fraction(0)] * self.degree
        for i in range(self.degree - 1):
            out[i + 1] += v[i]
        top = v[self.degree - 1]
        if top:
            for i in range(self.degree):
                out[i] -= top * self.minpoly[i]
        return tuple(out)

    def zeta_power(self, k: int) -> Vec:
        """z^k as a vector, any integer k."""
        k %= self.M
        if k in self._zeta_cache:
            return self._zeta_cache[k]
        v = self.one
        for _ in range(k):
            v = self._shift(v)
        self._zeta_cache[k] = v
        return v

    def add(self, a: Vec, b: Vec) -> Vec:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Vec, b: Vec) -> Vec:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Vec) -> Vec:
        return tuple(-x for x in a)

    def scale(self, c: Fraction, a: Vec) -> Vec:
        return tuple(c * x for x in a)

    def mul(self, a: Vec, b: Vec) -> Vec:
        deg = self.degree
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = [Fraction(0)] * deg
        for k, c in enumerate(prod):
            if c:
                pk = self._powers[k]
                for i in range(deg):
                    out[i] += c * pk[i]
        return tuple(out)

    def pow(self, a: Vec, e: int) -> Vec:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def inv(self, a: Vec) -> Vec:
        if not any(a):
            raise ZeroDivisionError
        n = self.degree
        # solve (multiplication by a) x = 1 by exact elimination
        cols = [self.mul(a, self._unit(j)) for j in range(n)]
        A = [[cols[j][i] for j in range(n)] + [self.one[i]] for i in range(n)]
        x = _solve_fraction(A, n)
        return tuple(x)

    def from_int(self, c: int) -> Vec:
        v = [Fraction(0)] * self.degree
        v[0] = Fraction(c)
        return tuple(v)

    def embed_numeric(self, k: int, v: Vec):
        """Value of v under zeta -> exp(2*pi*i*k/M) at current mpmath precision."""
        z = mp.e ** (2j * mp.pi * k / self.M)
        acc = mp.mpc(0)
        zp = mp.mpc(1)
        for c in v:
            if c:
                acc += mp.mpf(c.numerator) / c.denominator * zp
            zp *= z
        return acc

    def embedding_exponents(self) -> list[int]:
        return [k for k in range(1, self.M + 1) if _gcd(k, self.M) == 1]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _solve_fraction(aug: list[list[Fraction]], n: int) -> list[Fraction]:
    """Solve an n x n system from an augmented matrix, exact Fractions."""
    m = [row[:] for row in aug]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [c * inv for c in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


# ---------------------------------------------------------------------------
# the tower algebra


@dataclass(frozen=True)
class RadicalStep:
    exponent: int  # n_i
    radicand: "Element"  # u_i, supported on earlier radicals only
    name: str = ""


Element = dict  # {exponent tuple -> Vec}; normalized: no zero vectors


class KummerModel:
    """Q(zeta_M)(xi_1, ..., xi_s) with xi_i^{n_i} = u_i."""

    def __init__(self, M: int, steps: Sequence[tuple[int, "Element", str]]):
        self.cyclo = CyclotomicField(M)
        self.steps: list[RadicalStep] = []
        for i, (n, u, name) in enumerate(steps):
            for key in u:
                if any(key[j] for j in range(i, len(steps))):
                    raise ModelError(f"radicand of step {i} uses later radicals")
            self.steps.append(RadicalStep(n, u, name or f"x{i}"))
        self.s = len(self.steps)
        self.exponents = tuple(st.exponent for st in self.steps)
        self.degree = self.cyclo.degree
        for st in self.steps:
            self.degree *= st.exponent

    # -- element constructors -------------------------------------------------

    def zero(self) -> Element:
        return {}

    def one(self) -> Element:
        return {self._key0(): self.cyclo.one}

    def _key0(self) -> tuple:
        return (0,) * self.s

    def from_cyclo(self, v: Vec) -> Element:
        return {self._key0(): v} if any(v) else {}

    def from_int(self, c: int) -> Element:
        return self.from_cyclo(self.cyclo.from_int(c)) if c else {}

    def zeta(self, k: int = 1) -> Element:
        return self.from_cyclo(self.cyclo.zeta_power(k))

    def radical(self, i: int, power: int = 1) -> Element:
        key = [0] * self.s
        key[i] = power % self.exponents[i]
        extra = power // self.exponents[i] if power >= 0 else None
        el = {tuple(key): self.cyclo.one}
        if extra:
            for _ in range(extra):
                el = self.mul(el, self.steps[i].radicand)
        return el

    def monomial(self, key: Sequence[int], coeff: Vec) -> Element:
        return self._normalize({tuple(key): coeff})

    # -- arithmetic -----------------------------------------------------------

    def _normalize(self, e: Element) -> Element:
        return {k: v for k, v in e.items() if any(v)}

    def add(self, a: Element, b: Element) -> Element:
        out = dict(a)
        for k, v in b.items():
            out[k] = self.cyclo.add(out[k], v) if k in out else v
        return self._normalize(out)

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def neg(self, a: Element) -> Element:
        return {k: self.cyclo.neg(v) for k, v in a.items()}

    def scale(self, c: Fraction, a: Element) -> Element:
        if not c:
            return {}
        return {k: self.cyclo.scale(c, v) for k, v in a.items()}

    def mul(self, a: Element, b: Element) -> Element:
        acc: Element = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                coeff = self.cyclo.mul(va, vb)
                self._accumulate_monomial(acc, ka, kb, coeff)
        return self._normalize(acc)

    def _accumulate_monomial(self, acc: Element, ka, kb, coeff: Vec):
        """acc += coeff * xi^{ka+kb}, reducing exponent overflows via radicands."""
        key = list(x + y for x, y in zip(ka, kb))
        extra: Element = {self._key0(): coeff}
        for i in range(self.s):
            if key[i] >= self.exponents[i]:
                key[i] -= self.exponents[i]
                extra = self.mul(extra, self.steps[i].radicand)
        for k2, v2 in extra.items():
            full = tuple(a + b for a, b in zip(key, k2))
            # radicand supports earlier radicals only: no double overflow in i,
            # but the product may overflow an earlier index; recurse if needed
            if any(full[j] >= self.exponents[j] for j in range(self.s)):
                self._accumulate_monomial(acc, tuple(key), k2, v2)
            else:
                acc[full] = self.cyclo.add(acc[full], v2) if full in acc else v2

    def pow(self, a: Element, e: int) -> Element:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self.one()
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def equal(self, a: Element, b: Element) -> bool:
        return self._normalize(a) == self._normalize(b)

    def is_zero(self, a: Element) -> bool:
        return not self._normalize(a)

    def basis_keys(self) -> list[tuple]:
        ranges = [range(n) for n in self.exponents]
        return [tuple(k) for k in itertools.product(*ranges)]

    def to_vector(self, a: Element) -> list[Fraction]:
        """Flat coordinates: for each radical key, the cyclotomic vector."""
        out: list[Fraction] = []
        for key in self.basis_keys():
            v = a.get(key, self.cyclo.zero)
            out.extend(v)
        return out

    def from_vector(self, vec: Sequence[Fraction]) -> Element:
        d = self.cyclo.degree
        out: Element = {}
        for idx, key in enumerate(self.basis_keys()):
            chunk = tuple(Fraction(x) for x in vec[idx * d : (idx + 1) * d])
            if any(chunk):
                out[key] = chunk
        return out

    def inv(self, a: Element) -> Element:
        if self.is_zero(a):
            raise ZeroDivisionError
        n = self.degree
        keys = self.basis_keys()
        d = self.cyclo.degree
        cols = []
        for key in keys:
            for j in range(d):
                unit = self.monomial(key, self.cyclo._unit(j))
                cols.append(self.to_vector(self.mul(a, unit)))
        one = self.to_vector(self.one())
        aug = [[cols[j][i] for j in range(n)] + [one[i]] for i in range(n)]
        x = _solve_fraction(aug, n)
        return self.from_vector(x)

    def div(self, a: Element, b: Element) -> Element:
        return self.mul(a, self.inv(b))

    # -- numeric embeddings ---------------------------------------------------

    def numeric_embeddings(self) -> list[dict]:
        """All complex embeddings as {'k': exponent, 'xi': [values]}."""
        out = []
        for k in self.cyclo.embedding_exponents():
            out.extend(self._extend_embedding(k, []))
        return out

    def _extend_embedding(self, k: int, xi_vals: list) -> list[dict]:
        i = len(xi_vals)
        if i == self.s:
            return [{"k": k, "xi": list(xi_vals)}]
        u_val = self.eval_numeric(self.steps[i].radicand, k, xi_vals)
        n = self.steps[i].exponent
        base = u_val ** (mp.mpf(1) / n)
        out = []
        for j in range(n):
            root = base * mp.e ** (2j * mp.pi * j / n)
            out.extend(self._extend_embedding(k, xi_vals + [root]))
        return out

    def eval_numeric(self, a: Element, k: int, xi_vals: Sequence):
        acc = mp.mpc(0)
        for key, v in a.items():
            term = self.cyclo.embed_numeric(k, v)
            for i, e in enumerate(key):
                if e:
                    term *= xi_vals[i] ** e
            acc += term
        return acc


# ---------------------------------------------------------------------------
# automorphisms


@dataclass
class ModelAutomorphism:
    model: KummerModel
    c: int  # zeta -> zeta^c
    xi_images: list[Element]
    _mono_cache: dict = None  # type: ignore[assignment]

    def __post_init__(self):
        if self._mono_cache is None:
            self._mono_cache = {}

    def key(self) -> tuple:
        ims = []
        for img in self.xi_images:
            ims.append(
                tuple(sorted((k, tuple(v)) for k, v in img.items()))
            )
        return (self.c % self.model.cyclo.M, tuple(ims))

    def apply(self, a: Element) -> Element:
        m = self.model
        out = m.zero()
        for key, v in a.items():
            img = self._monomial_image(key)
            tw = m.from_cyclo(self._twist_cyclo(v))
            out = m.add(out, m.mul(tw, img))
        return out

    def _twist_cyclo(self, v: Vec) -> Vec:
        cy = self.model.cyclo
        out = cy.zero
        for i, coef in enumerate(v):
            if coef:
                out = cy.add(out, cy.scale(coef, cy.zeta_power(self.c * i)))
        return out

    def _monomial_image(self, key: tuple) -> Element:
        if key in self._mono_cache:
            return self._mono_cache[key]
        m = self.model
        out = m.one()
        for i, e in enumerate(key):
            for _ in range(e):
                out = m.mul(out, self.xi_images[i])
        self._mono_cache[key] = out
        return out

    def compose(self, other: "ModelAutomorphism") -> "ModelAutomorphism":
        """self then other (matching permutation composition order)."""
        m = self.model
        xi = [other.apply(img) for img in self.xi_images]
        return ModelAutomorphism(m, (other.c * self.c) % m.cyclo.M, xi)


def cyclotomic_nth_root(
    cy: CyclotomicField, v: Vec, n: int, dps: int = 80
) -> Optional[Vec]:
    """Some t with t^n = v in Q(zeta_M), or None.

    Embedding values of t are n-th roots of the embedding values of v; the
    root choice pattern is resolved by trying all patterns compatible with
    complex conjugation and verifying the reconstruction exactly.
    """
    with mp.workdps(dps):
        ks = cy.embedding_exponents()
        d = cy.degree
        vals = [cy.embed_numeric(k, v) for k in ks]
        if any(abs(x) < mp.mpf(10) ** (-dps // 2) for x in vals):
            return None
        # pair conjugate embeddings k and M-k
        pos = {k: i for i, k in enumerate(ks)}
        pairs = []
        singles = []
        donek = set()
        for k in ks:
            if k in donek:
                continue
            kc = cy.M - k
            if kc != k and kc in pos:
                pairs.append((pos[k], pos[kc]))
                donek |= {k, kc}
            else:
                singles.append(pos[k])
                donek.add(k)
        base = [x ** (mp.mpf(1) / n) for x in vals]
        omega = mp.e ** (2j * mp.pi / n)
        # embedding matrix: rows = embeddings, cols = powers of zeta
        A = mp.matrix(len(ks), d)
        for r, k in enumerate(ks):
            z = mp.e ** (2j * mp.pi * k / cy.M)
            for cidx in range(d):
                A[r, cidx] = z**cidx
        for pattern in itertools.product(range(n), repeat=len(pairs) + len(singles)):
            target = [mp.mpc(0)] * len(ks)
            pi = 0
            ok = True
            for (i, j) in pairs:
                target[i] = base[i] * omega ** pattern[pi]
                target[j] = mp.conj(target[i])
                # conjugate consistency: target[j]^n must equal vals[j]
                if abs(target[j] ** n - vals[j]) > mp.mpf(10) ** (-dps // 3):
                    ok = False
                    break
                pi += 1
            if not ok:
                continue
            for i in singles:
                target[i] = base[i] * omega ** pattern[pi]
                pi += 1
            try:
                coords = mp.lu_solve(A, mp.matrix(target))
            except ZeroDivisionError:
                continue
            frac = []
            good = True
            for x in coords:
                if abs(mp.im(x)) > mp.mpf(10) ** (-dps // 3):
                    good = False
                    break
                frac.append(_rationalize(mp.re(x)))
            if not good or any(f is None for f in frac):
                continue
            t = tuple(frac)
            if cy.pow(t, n) == tuple(v):
                return t
    return None


def _rationalize(x, max_den: int = 10**9) -> Optional[Fraction]:
    f = Fraction(str(x)).limit_denominator(max_den)
    if abs(f - Fraction(str(x))) < Fraction(1, 10**12):
        return f
    return None


def automorphism_group(model: KummerModel, dps: int = 80) -> list[ModelAutomorphism]:
    """All automorphisms of the model field over Q, built level by level."""
    cy = model.cyclo
    partials: list[ModelAutomorphism] = [
        ModelAutomorphism(model, c, []) for c in cy.embedding_exponents()
    ]
    for i, step in enumerate(model.steps):
        extended: list[ModelAutomorphism] = []
        for sigma in partials:
            img_u = sigma.apply(step.radicand)
            for W in _radical_images(model, i, img_u, step.exponent, dps):
                extended.append(
                    ModelAutomorphism(model, sigma.c, sigma.xi_images + [W])
                )
        partials = extended
    if len(partials) != model.degree:
        raise ModelError(
            f"found {len(partials)} automorphisms, expected {model.degree}:"
            " model is not Galois over Q or reconstruction failed"
        )
    # sanity: images must satisfy the defining relations
    for sigma in partials:
        for i, step in enumerate(model.steps):
            lhs = model.pow(sigma.xi_images[i], step.exponent)
            if not model.equal(lhs, sigma.apply(step.radicand)):
                raise ModelError("automorphism image violates a defining relation")
    return partials


def _radical_images(
    model: KummerModel, level: int, img_u: Element, n: int, dps: int
) -> list[Element]:
    """All W supported on radicals < level+1 with W^n = img_u, of the shape
    (cyclotomic) * monomial."""
    cy = model.cyclo
    out: list[Element] = []
    # candidate monomials may involve any radicals, not just earlier ones
    ranges = [range(model.exponents[j]) for j in range(model.s)]
    for key in itertools.product(*ranges):
        mono = model.monomial(key, cy.one)
        mono_n = model.pow(mono, n)
        try:
            ratio = model.div(img_u, mono_n)
        except ZeroDivisionError:
            continue
        if set(ratio) - {model._key0()}:
            continue  # not cyclotomic
        v = ratio.get(model._key0(), cy.zero)
        t = cyclotomic_nth_root(cy, v, n, dps)
        if t is None:
            continue
        for j in range(n):
            tt = cy.mul(t, cy.zeta_power(j * (cy.M // n))) if cy.M % n == 0 else None
            if tt is None:
                break
            W = model.mul(model.from_cyclo(tt), mono)
            if model.equal(model.pow(W, n), img_u):
                out.append(W)
        if out:
            return _dedup_elements(model, out)
    return _dedup_elements(model, out)


def _dedup_elements(model: KummerModel, els: list[Element]) -> list[Element]:
    seen = set()
    out = []
    for e in els:
        k = tuple(sorted((key, tuple(v)) for key, v in e.items()))
        if k not in seen:
            seen.add(k)
            out.append(e)
    return out


# ---------------------------------------------------------------------------
# residue embeddings and Frobenius


@dataclass
class ResidueEmbedding:
    model: KummerModel
    q: int
    field: PrimeField | ExtField
    zeta_image: object
    xi_images: list
    f: int

    def eval(self, a: Element):
        F = self.field
        acc = F.zero
        for key, v in a.items():
            c = self._eval_cyclo(v)
            for i, e in enumerate(key):
                if e:
                    c = F.mul(c, F.pow(self.xi_images[i], e))
            acc = F.add(acc, c)
        return acc

    def _eval_cyclo(self, v: Vec):
        F = self.field
        acc = F.zero
        zp = F.one
        for coef in v:
            if coef:
                num = coef.numerator % self.q
                den = coef.denominator % self.q
                if den == 0:
                    raise UnusablePrime(self.q, "denominator")
                scal = num * pow(den, -1, self.q) % self.q
                scal_el = scal if isinstance(F, PrimeField) else F.embed(scal)
                acc = F.add(acc, F.mul(scal_el, zp))
            zp = F.mul(zp, self.zeta_image)
        return acc


def _find_pth_root(F, v, p: int):
    """Some r with r^p = v, assuming v is a p-th power and p | |F*|."""
    Q = F.order - 1
    m, s = Q, 0
    while m % p == 0:
        m //= p
        s += 1
    # non p-th-power z, deterministic scan
    z = None
    for cand in _element_scan(F):
        if cand == F.zero:
            continue
        if not is_pth_power(F, cand, p):
            z = cand
            break
    if z is None:
        raise ModelError("no p-th non-residue found")
    g = F.pow(z, m)  # order p^s
    e = pow(p, -1, m)
    r = F.pow(v, e)
    t = F.mul(F.pow(r, p), F.inv(v))  # in mu_{p^s}
    a = _dlog_prime_power(F, g, t, p, s)
    if a % p:
        raise ModelError("element is not a p-th power")
    r = F.mul(r, F.pow(g, (p**s - a) // p if a else 0))
    assert F.pow(r, p) == v
    return r


def _dlog_prime_power(F, g, h, p: int, s: int) -> int:
    """a with g^a = h, where g has order p^s; h in <g>."""
    a = 0
    if s == 0:
        return 0
    gamma = F.pow(g, p ** (s - 1))
    ginv = F.inv(g)
    for i in range(s):
        hi = F.pow(F.mul(h, F.pow(ginv, a)), p ** (s - 1 - i))
        d, cur = 0, F.one
        while cur != hi:
            cur = F.mul(cur, gamma)
            d += 1
            if d >= p:
                raise ModelError("dlog digit not found: not in the subgroup")
        a += d * p**i
    return a


def _element_scan(F):
    if isinstance(F, PrimeField):
        for c in range(2, F.p):
            yield c
    else:
        # scan z + c, then small polynomials
        for c in range(F.q):
            yield F.add(F.gen, F.embed(c))
        for a in F.elements():
            yield a


def _all_pth_roots(F, v, p: int):
    r = _find_pth_root(F, v, p)
    mu = []
    for cand in _element_scan(F):
        if cand == F.zero:
            continue
        w = F.pow(cand, (F.order - 1) // p)
        if w != F.one:
            mu = [F.pow(w, j) for j in range(p)]
            break
    if not mu:
        raise ModelError("mu_p not found")
    return sorted(
        (F.mul(r, w) for w in mu), key=lambda x: x if isinstance(x, tuple) else (x,)
    )


def residue_embedding(model: KummerModel, q: int) -> Optional[ResidueEmbedding]:
    """A deterministic residue embedding of the model at q, or None if q is
    unusable (divides M, a structure denominator, or a radicand image)."""
    cy = model.cyclo
    if q < 2 or cy.M % q == 0:
        return None
    for st in model.steps:
        for v in st.radicand.values():
            for c in v:
                if c.denominator % q == 0:
                    return None
    f = 1
    while pow(q, f, cy.M) != 1:
        f += 1
    attempts = 0
    while True:
        attempts += 1
        if attempts > 8:
            raise ModelError(f"residue embedding at {q} did not stabilize")
        emb = _build_embedding(model, q, f)
        if isinstance(emb, int):
            f = emb  # enlarged degree
            continue
        return emb


def _build_embedding(model: KummerModel, q: int, f: int):
    cy = model.cyclo
    F: PrimeField | ExtField
    if f == 1:
        F = PrimeField(q)
    else:
        F = ExtField(q, _irreducible_poly(q, f))
    # zeta image: a root of the (sorted-first) degree-f0 factor of Phi_M mod q
    Fq = PrimeField(q)
    phi_mod = poly_trim(tuple(c % q for c in cy.minpoly))
    facs = factor_squarefree(Fq, phi_mod)
    g0 = facs[0]
    roots = roots_in_ext(tuple(int(c) for c in g0), F)
    if not roots:
        return f  # should not happen; treat as enlargement request
    zeta_img = roots[0]
    emb = ResidueEmbedding(model, q, F, zeta_img, [], f)
    for st in model.steps:
        u_img = emb.eval(st.radicand)
        if u_img == F.zero:
            return None
        n = st.exponent
        # exponent must be a prime power of p with mu_n in F; handle prime n
        p = _least_prime_factor(n)
        if n != p:
            raise ModelError("only prime radical exponents are supported")
        if (F.order - 1) % p != 0:
            return f * p
        if not is_pth_power(F, u_img, p):
            return f * p
        emb.xi_images.append(_all_pth_roots(F, u_img, p)[0])
    return emb


def _least_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def _irreducible_poly(q: int, f: int) -> tuple[int, ...]:
    """Deterministic irreducible polynomial of degree f over F_q."""
    from .ffield import _is_irreducible

    F = PrimeField(q)
    rng = random.Random(q * 1_000_003 + f)
    for _ in range(10_000):
        coeffs = [rng.randrange(q) for _ in range(f)] + [1]
        if _is_irreducible(F, tuple(coeffs)):
            return tuple(coeffs)
    raise ModelError("no irreducible polynomial found")


def frobenius_model_element(
    model: KummerModel,
    q: int,
    autos: list[ModelAutomorphism],
    emb: Optional[ResidueEmbedding] = None,
) -> Optional[ModelAutomorphism]:
    """The automorphism inducing the q-power map under the chosen embedding."""
    emb = emb or residue_embedding(model, q)
    if emb is None:
        return None
    F = emb.field
    zq = F.pow(emb.zeta_image, q)
    xiq = [F.pow(x, q) for x in emb.xi_images]
    for sigma in autos:
        if F.pow(emb.zeta_image, sigma.c % model.cyclo.M) != zq:
            continue
        if all(emb.eval(img) == xiq[i] for i, img in enumerate(sigma.xi_images)):
            return sigma
    raise ModelError(f"no automorphism matches the {q}-power map")


# ---------------------------------------------------------------------------
# permutation realization and cross-checks


def regular_permutation_group(
    autos: list[ModelAutomorphism],
) -> tuple[PermGroup, dict[tuple, int]]:
    """The group as permutations of itself (regular action), plus the index map."""
    keys = sorted(a.key() for a in autos)
    index = {k: i for i, k in enumerate(keys)}
    by_key = {a.key(): a for a in autos}
    perms = []
    elems = [by_key[k] for k in keys]
    for a in elems:
        perms.append(tuple(index[b.compose(a).key()] for b in elems))
    G = PermGroup(len(autos), perms)
    assert G.order == len(autos)
    return G, index


def element_to_perm(
    sigma: ModelAutomorphism, autos: list[ModelAutomorphism]
) -> tuple[int, ...]:
    keys = sorted(a.key() for a in autos)
    index = {k: i for i, k in enumerate(keys)}
    by_key = {a.key(): a for a in autos}
    elems = [by_key[k] for k in keys]
    return tuple(index[b.compose(sigma).key()] for b in elems)


def verify_model_against_polynomial(
    model: KummerModel,
    autos: list[ModelAutomorphism],
    K: NumberFieldPresentation,
    prime_bound: int,
    skip: set[int] = frozenset(),
) -> int:
    """Check order(Frob_q in the model) == residue degree of q in K for every
    usable q <= bound.  Returns the number of primes checked; raises on any
    mismatch (the model would not match the polynomial's field)."""
    from .permgroup import perm_order

    checked = 0
    for q in _primes(prime_bound):
        if q in skip:
            continue
        try:
            parts = split_prime(K, q)
        except UnusablePrime:
            continue
        fs = {P.f for P in parts}
        if len(fs) != 1:
            raise ModelError(f"polynomial not Galois at {q}")
        sigma = frobenius_model_element(model, q, autos)
        if sigma is None:
            continue
        order = _auto_order(sigma)
        if order != fs.pop():
            raise ModelError(
                f"Frobenius order {order} != residue degree at q={q}: "
                "model does not match the polynomial"
            )
        checked += 1
    return checked


def _auto_order(sigma: ModelAutomorphism) -> int:
    ident_key = ModelAutomorphism(sigma.model, 1, [
        sigma.model.radical(i) for i in range(sigma.model.s)
    ]).key()
    cur = sigma
    order = 1
    while cur.key() != ident_key:
        cur = cur.compose(sigma)
        order += 1
        if order > sigma.model.degree:
            raise ModelError("automorphism order exceeds the degree")
    return order


def _primes(bound: int) -> list[int]:
    from .numfield import primes_up_to

    return primes_up_to(bound)


# ---------------------------------------------------------------------------
# presentation by a primitive element


def model_minpoly(model: KummerModel, gamma: Element, dps: int = 120) -> tuple[int, ...]:
    """Minimal polynomial of gamma over Q (monic, ascending, integer
    coefficients), computed from the numeric conjugates and verified exactly
    in the model algebra.  Raises if gamma is not primitive or not integral."""
    n = model.degree
    with mp.workdps(dps):
        vals = [
            model.eval_numeric(gamma, e["k"], e["xi"])
            for e in model.numeric_embeddings()
        ]
        if len(vals) != n:
            raise ModelError("embedding count mismatch")
        coeffs = [mp.mpc(1)]
        for v in vals:
            nxt = [mp.mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i] -= c * v
                nxt[i + 1] += c
            coeffs = nxt
        out = []
        for c in coeffs:
            r = mp.nint(mp.re(c))
            if abs(c - r) > mp.mpf(10) ** (-dps // 4):
                raise ModelError("non-integer minimal polynomial coefficient")
            out.append(int(r))
    h = tuple(out)
    # exact check: h(gamma) == 0 via Horner in the algebra
    acc = model.zero()
    for c in reversed(h):
        acc = model.add(model.mul(acc, gamma), model.from_int(c))
    if not model.is_zero(acc):
        raise ModelError("minimal polynomial verification failed")
    # primitivity: the conjugate values must be pairwise distinct
    return h


class PowerBasis:
    """Exact change of basis between the model and Q[x]/(h(gamma))."""

    def __init__(self, model: KummerModel, gamma: Element, h: Optional[tuple] = None):
        self.model = model
        self.gamma = gamma
        self.h = h or model_minpoly(model, gamma)
        n = model.degree
        if len(self.h) - 1 != n:
            raise ModelError("gamma is not a primitive element")
        self.field = NumberFieldPresentation(self.h)
        cols = []
        power = model.one()
        for _ in range(n):
            cols.append(model.to_vector(power))
            power = model.mul(power, gamma)
        # row-reduce [V | I] once; solves V x = b for many b
        self._rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        self._elim = _echelon_with_transform(self._rows)

    def to_nf(self, a: Element) -> "NFElement":
        from .numfield import NFElement

        vec = self.model.to_vector(a)
        x = _apply_transform(self._elim, vec)
        den = 1
        for c in x:
            den = den * c.denominator // _gcd(den, c.denominator)
        num = tuple(int(c * den) for c in x)
        return NFElement(num, den)

    def from_nf(self, a) -> Element:
        out = self.model.zero()
        power = self.model.one()
        for c in a.num:
            if c:
                out = self.model.add(out, self.model.scale(Fraction(c, a.den), power))
            power = self.model.mul(power, self.gamma)
        return out


def _echelon_with_transform(rows: list[list[Fraction]]):
    """LU-style elimination data for repeated exact solves."""
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(0)] * n for row in rows]
    for i in range(n):
        m[i][n + i] = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ModelError("gamma powers are linearly dependent")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [c * inv for c in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _apply_transform(elim, vec) -> list[Fraction]:
    n = len(elim)
    return [
        sum((elim[i][j] * vec[j] for j in range(n)), Fraction(0)) for i in range(n)
    ]
