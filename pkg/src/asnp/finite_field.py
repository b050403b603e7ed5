"""Arithmetic in F_p and F_q = F_p(xi).

The field is described by a :class:`FieldCtx` holding an odd prime p, an
extension degree a and a monic irreducible polynomial for the generator xi.
Elements are coordinate vectors in the power basis 1, xi, ..., xi^(a-1).
Everything here is exact and immutable; contexts can be shared freely.
"""

from __future__ import annotations

import math
from itertools import product

# Monic minimal polynomials (low-to-high, including the leading 1) used when
# the caller does not supply one.  Standard Conway polynomials for small p, a.
DEFAULT_MIN_POLYS = {
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}

DEFAULT_Q_CAP = 5 ** 6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# small dense-polynomial helpers over F_p (also used by the oracle module to
# build extension towers independent of FqElem)

def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mulmod(u, v, mod, p):
    """(u*v) mod `mod` over F_p; `mod` monic, coefficients low-to-high."""
    m = len(mod) - 1
    out = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                out[i + j] = (out[i + j] + ui * vj) % p
    for e in range(len(out) - 1, m - 1, -1):
        ce = out[e]
        if ce:
            for j in range(m):
                out[e - m + j] = (out[e - m + j] - ce * mod[j]) % p
            out[e] = 0
    return out[:m] + [0] * max(0, m - len(out))


def poly_powmod(u, n, mod, p):
    r = [1] + [0] * (len(mod) - 2)
    u = list(u)
    while n:
        if n & 1:
            r = poly_mulmod(r, u, mod, p)
        u = poly_mulmod(u, u, mod, p)
        n >>= 1
    return r


def poly_gcd(u, v, p):
    u, v = poly_trim(u), poly_trim(v)
    while v:
        inv = pow(v[-1], -1, p)
        v = [c * inv % p for c in v]
        # u mod v
        u = list(u)
        while len(u) >= len(v) and poly_trim(u):
            if u[-1] == 0:
                u.pop()
                continue
            shift = len(u) - len(v)
            lead = u[-1]
            for j, c in enumerate(v):
                u[shift + j] = (u[shift + j] - lead * c) % p
            u = poly_trim(u)
        u, v = v, poly_trim(u)
    return poly_trim(u)


def is_irreducible(coeffs, p) -> bool:
    """Monic `coeffs` (low-to-high, leading 1) irreducible over F_p?

    Uses x^(p^m) == x mod f together with gcd(x^(p^(m/l)) - x, f) = 1 for
    every prime l dividing m.
    """
    coeffs = list(coeffs)
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] != 1:
        return False
    if m == 1:
        return True
    x = [0, 1] + [0] * (m - 2)
    xq = poly_powmod(x, p ** m, coeffs, p)
    if poly_trim([(a - b) % p for a, b in zip(xq, x + [0] * m)]):
        return False
    for l in range(2, m + 1):
        if m % l == 0 and is_prime(l):
            xk = poly_powmod(x, p ** (m // l), coeffs, p)
            diff = poly_trim([(a - b) % p for a, b in zip(xk, x + [0] * m)])
            if not diff:
                return False
            if len(poly_gcd(diff, coeffs, p)) > 1:
                return False
    return True


def find_irreducible(p, m):
    """First monic irreducible of degree m over F_p in lexicographic order."""
    if m == 1:
        return (0, 1)
    for tail in product(range(p), repeat=m):
        cand = list(tail) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError(f"no irreducible polynomial of degree {m} over F_{p}")


# ---------------------------------------------------------------------------


class FieldCtx:
    """The field F_q = F_p[y]/(min_poly), q = p^a, p an odd prime."""

    def __init__(self, p: int, a: int, min_poly=None, q_cap: int = DEFAULT_Q_CAP):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if p == 2:
            raise ValueError("p = 2 is not supported (the ramified quotient degenerates)")
        if a < 1:
            raise ValueError(f"extension degree a = {a} must be >= 1")
        if p ** a > q_cap:
            raise ValueError(f"q = {p}^{a} exceeds the configured cap {q_cap}")
        if min_poly is None:
            try:
                min_poly = DEFAULT_MIN_POLYS[(p, a)]
            except KeyError:
                raise ValueError(
                    f"no built-in minimal polynomial for (p, a) = ({p}, {a}); pass one explicitly"
                ) from None
        min_poly = tuple(int(c) % p for c in min_poly)
        if len(min_poly) != a + 1 or min_poly[-1] != 1:
            raise ValueError("min_poly must be monic of degree a (low-to-high, leading 1)")
        if not is_irreducible(min_poly, p):
            raise ValueError(f"min_poly {list(min_poly)} is reducible over F_{p}")
        self.p = p
        self.a = a
        self.q = p ** a
        self.min_poly = min_poly

    def __eq__(self, other):
        return (isinstance(other, FieldCtx)
                and (self.p, self.a, self.min_poly) == (other.p, other.a, other.min_poly))

    def __hash__(self):
        return hash((self.p, self.a, self.min_poly))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, a={self.a}, min_poly={list(self.min_poly)})"

    def elem(self, coords) -> "FqElem":
        """Element from an int (prime-field constant) or a coordinate list."""
        if isinstance(coords, FqElem):
            if coords.ctx != self:
                raise ValueError("element belongs to a different field context")
            return coords
        if isinstance(coords, int):
            coords = [coords]
        coords = [int(c) % self.p for c in coords]
        if len(coords) > self.a:
            raise ValueError(f"too many coordinates for degree-{self.a} extension")
        coords += [0] * (self.a - len(coords))
        return FqElem(self, tuple(coords))

    def zero(self) -> "FqElem":
        return self.elem(0)

    def one(self) -> "FqElem":
        return self.elem(1)

    def gen(self) -> "FqElem":
        """The generator xi (for a = 1: the residue -min_poly[0])."""
        if self.a == 1:
            return self.elem(-self.min_poly[0])
        return self.elem([0, 1])

    def elements(self):
        """All q elements, in lexicographic coordinate order (0 first)."""
        for n in range(self.q):
            coords = []
            for _ in range(self.a):
                n, r = divmod(n, self.p)
                coords.append(r)
            yield FqElem(self, tuple(coords))

    def units(self):
        it = self.elements()
        next(it)
        return it


class FqElem:
    """Element of F_q as a coordinate vector over the power basis of xi."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: FieldCtx, coords: tuple):
        self.ctx = ctx
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.ctx != self.ctx:
                raise ValueError("mixed field contexts")
            return other
        if isinstance(other, int):
            return self.ctx.elem(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ctx.p
        return FqElem(self.ctx, tuple((x + y) % p for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FqElem(self.ctx, tuple(-x % p for x in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        ctx = self.ctx
        prod = poly_mulmod(list(self.coords), list(other.coords), list(ctx.min_poly), ctx.p)
        return FqElem(ctx, tuple(prod))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r = self.ctx.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in F_q")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.elem(other)
        return isinstance(other, FqElem) and self.ctx == other.ctx and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"FqElem({list(self.coords)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        names = ["", "xi"] + [f"xi^{i}" for i in range(2, self.ctx.a)]
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(names[i])
            else:
                parts.append(f"{c}*{names[i]}")
        return "+".join(parts)

    def as_int(self) -> int:
        """Base-p integer encoding of the coordinate vector."""
        n = 0
        for c in reversed(self.coords):
            n = n * self.ctx.p + c
        return n


class PolyFq:
    """Polynomial over F_q, coefficients low-to-high, leading term nonzero."""

    def __init__(self, ctx: FieldCtx, coeffs):
        self.ctx = ctx
        cs = [ctx.elem(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def monomials(self):
        """(exponent, coefficient) pairs with nonzero coefficient."""
        return [(i, c) for i, c in enumerate(self.coeffs) if not c.is_zero()]

    def constant_term(self) -> FqElem:
        return self.coeffs[0] if self.coeffs else self.ctx.zero()

    def drop_constant(self) -> "PolyFq":
        if self.is_zero():
            return self
        return PolyFq(self.ctx, (self.ctx.zero(),) + self.coeffs[1:])

    def scale(self, lam) -> "PolyFq":
        lam = self.ctx.elem(lam)
        return PolyFq(self.ctx, [lam * c for c in self.coeffs])

    def __call__(self, x: FqElem) -> FqElem:
        acc = self.ctx.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return (isinstance(other, PolyFq) and self.ctx == other.ctx
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"PolyFq({[list(c.coords) for c in self.coeffs]})"

    def coords_list(self):
        return [list(c.coords) for c in self.coeffs]


def lambda_classes(ctx: FieldCtx):
    """Image of lambda -> lambda^(p-1) on F_q^x, one preimage per class.

    Returns [(class value c, representative lambda)] sorted by the base-p
    integer encoding of c.  There are exactly (q-1)/(p-1) classes.
    """
    seen = {}
    for lam in ctx.units():
        c = lam ** (ctx.p - 1)
        if c not in seen:
            seen[c] = lam
    out = sorted(seen.items(), key=lambda t: t[0].as_int())
    assert len(out) == (ctx.q - 1) // (ctx.p - 1)
    return out


def roots_of_unity_condition(ctx: FieldCtx, c: FqElem):
    """All lambda in F_q^x with lambda^(p-1) = c, by exhaustive scan."""
    c = ctx.elem(c)
    if c.is_zero():
        raise ValueError("c must be nonzero")
    return [lam for lam in ctx.units() if lam ** (ctx.p - 1) == c]
