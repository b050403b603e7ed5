"""Independent ground truth on small instances.

Character sums are evaluated by brute-force enumeration of F_{q^k} with exact
integer arithmetic in Z[zeta_p], the L-polynomial is assembled through the
exponential recurrence, and valuations come from the prime (1 - zeta_p).
Nothing here touches pi, Artin-Hasse series or Dwork matrices; agreement with
the trace pipeline is a genuine two-route check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from .finite_field import (FieldCtx, PolyFq, find_irreducible, poly_mulmod)
from .padic import Valuation
from .polygon import NewtonPolygon, ValuationPoint, lower_hull

DEFAULT_ENUM_BOUND = 10 ** 7


class CyclotomicInt:
    """Element of Z[zeta_p] = Z[x]/Phi_p(x), coefficients exact integers."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs=()):
        self.p = p
        cs = list(coeffs) + [0] * (p - 1 - len(coeffs))
        if len(cs) != p - 1:
            raise ValueError("need at most p-1 coefficients")
        self.coeffs = tuple(int(c) for c in cs)

    @classmethod
    def zero(cls, p):
        return cls(p)

    @classmethod
    def one(cls, p):
        return cls(p, [1])

    @classmethod
    def zeta_power(cls, p, t):
        """zeta^t reduced into the power basis 1, zeta, ..., zeta^(p-2)."""
        t %= p
        if t < p - 1:
            return cls(p, [0] * t + [1])
        return cls(p, [-1] * (p - 1))

    def __add__(self, other):
        self._check(other)
        return CyclotomicInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return CyclotomicInt(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CyclotomicInt(self.p, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self.p, [a * other for a in self.coeffs])
        self._check(other)
        m = self.p - 1
        conv = [0] * (2 * m - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    conv[i + j] += a * b
        out = conv[:m]
        # zeta^(p-1+r) = -(zeta^r + zeta^(r+1) + ... + zeta^(r+p-2)); fold the
        # overflow via zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)) repeatedly
        for e in range(2 * m - 2, m - 1, -1):
            c = conv[e]
            if c:
                for r in range(e - m, e):
                    idx = r
                    conv[idx] -= c
                conv[e] = 0
        return CyclotomicInt(self.p, conv[:m])

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, CyclotomicInt) or other.p != self.p:
            raise ValueError("mixed cyclotomic rings")

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, CyclotomicInt) and self.p == other.p
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"CyclotomicInt({list(self.coeffs)})"

    def exact_div_int(self, n: int) -> "CyclotomicInt":
        out = []
        for c in self.coeffs:
            q, r = divmod(c, n)
            if r:
                raise ArithmeticError(f"inexact division by {n} in Z[zeta]")
            out.append(q)
        return CyclotomicInt(self.p, out)

    def galois(self, t: int) -> "CyclotomicInt":
        """zeta -> zeta^t for t coprime to p."""
        if math.gcd(t, self.p) != 1:
            raise ValueError("Galois exponent must be coprime to p")
        out = CyclotomicInt.zero(self.p)
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + CyclotomicInt.zeta_power(self.p, i * t) * c
        return out


def cyc_ord(x: CyclotomicInt):
    """ord_p as a Fraction with denominator p-1, or None for zero (infinity).

    Divisibility by the prime (1 - zeta) is the coefficient-sum test; each
    division multiplies by prod_{k=2}^{p-1} (1 - zeta^k) and divides by p,
    using prod_{k=1}^{p-1} (1 - zeta^k) = p.
    """
    if x.is_zero():
        return None
    p = x.p
    cof = CyclotomicInt.one(p)
    for k in range(2, p):
        cof = cof * (CyclotomicInt.one(p) - CyclotomicInt.zeta_power(p, k))
    m = 0
    while sum(x.coeffs) % p == 0:
        x = (x * cof).exact_div_int(p)
        m += 1
    return Fraction(m, p - 1)


class _ExtField:
    """F_{p^m} = F_p[y]/(g) with a precomputed F_p-linear trace table."""

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.modulus = list(find_irreducible(p, m))
        self.trace_table = self._build_trace_table()

    def _build_trace_table(self):
        p, m = self.p, self.m
        out = []
        for s in range(m):
            basis = [0] * m
            basis[s] = 1
            total = [0] * m
            w = basis
            for _ in range(m):
                total = [(x + y) % p for x, y in zip(total, w)]
                w = self._pow(w, p)
            if any(total[1:]):
                raise ArithmeticError("trace failed to land in F_p")
            out.append(total[0])
        return out

    def mul(self, u, v):
        return poly_mulmod(u, v, self.modulus, self.p)

    def _pow(self, u, n):
        r = [1] + [0] * (self.m - 1)
        u = list(u)
        while n:
            if n & 1:
                r = self.mul(r, u)
            u = self.mul(u, u)
            n >>= 1
        return r

    def pow(self, u, n):
        return self._pow(u, n)

    def trace(self, u) -> int:
        return sum(c * t for c, t in zip(u, self.trace_table)) % self.p

    def elements(self):
        for tup in product(range(self.p), repeat=self.m):
            yield list(tup)

    def embed_root(self, min_poly):
        """First element that is a root of min_poly (coefficients in F_p)."""
        for x in self.elements():
            acc = [0] * self.m
            for c in reversed(min_poly):
                acc = self.mul(acc, x)
                acc[0] = (acc[0] + c) % self.p
            if not any(acc):
                return x
        raise ArithmeticError("embedding root not found (field tower bug)")


def _embedded_coeffs(f: PolyFq, E: _ExtField):
    """Images of f's coefficients under an embedding F_q -> F_{q^k}."""
    ctx = f.ctx
    if ctx.a == 1:
        xi_img = None
    else:
        xi_img = E.embed_root(list(ctx.min_poly))
    out = []
    for i, c in f.monomials():
        img = [0] * E.m
        img[0] = c.coords[0]
        if ctx.a > 1:
            powv = [1] + [0] * (E.m - 1)
            for s in range(1, ctx.a):
                powv = E.mul(powv, xi_img)
                img = [(x + c.coords[s] * y) % ctx.p for x, y in zip(img, powv)]
        out.append((i, img))
    return out


def char_sum(f: PolyFq, k: int, enum_bound: int = DEFAULT_ENUM_BOUND) -> CyclotomicInt:
    """S*(k) = sum over x in F_{q^k}^x of zeta^Tr(f(x)), by enumeration."""
    ctx = f.ctx
    p = ctx.p
    m = ctx.a * k
    if p ** m > enum_bound:
        raise ValueError(
            f"q^k = {p}^{m} exceeds the enumeration bound {enum_bound}; "
            "use the trace pipeline for instances this large")
    E = _ExtField(p, m)
    mons = _embedded_coeffs(f, E)
    counts = [0] * p
    for x in E.elements():
        if not any(x):
            continue
        val = [0] * m
        for i, cimg in mons:
            term = E.mul(cimg, E.pow(x, i))
            val = [(u + v) % p for u, v in zip(val, term)]
        counts[E.trace(val)] += 1
    out = CyclotomicInt.zero(p)
    for t, c in enumerate(counts):
        if c:
            out = out + CyclotomicInt.zeta_power(p, t) * c
    return out


def l_polynomial(f: PolyFq, enum_bound: int = DEFAULT_ENUM_BOUND, check_degree: bool = True):
    """Coefficients c_0..c_d of L*(s) = exp(sum S*(k) s^k / k), exactly.

    The recurrence n*c_n = sum_{k<=n} S_k c_{n-k} divides exactly in
    Z[zeta_p]; when the enumeration bound allows, c_{d+1} is also computed
    and asserted to vanish.
    """
    ctx = f.ctx
    d = f.degree
    if math.gcd(d, ctx.p) != 1:
        raise ValueError(f"deg f = {d} must be coprime to p = {ctx.p}")
    kmax = d + 1 if check_degree and ctx.p ** (ctx.a * (d + 1)) <= enum_bound else d
    S = [char_sum(f, k, enum_bound) for k in range(1, kmax + 1)]
    c = [CyclotomicInt.one(ctx.p)]
    for n in range(1, kmax + 1):
        acc = CyclotomicInt.zero(ctx.p)
        for k in range(1, n + 1):
            acc = acc + S[k - 1] * c[n - k]
        c.append(acc.exact_div_int(n))
    if kmax > d and not c[d + 1].is_zero():
        raise ArithmeticError("L-polynomial fails to truncate at degree d (char_sum bug)")
    return c[: d + 1]


def oracle_np(f: PolyFq, include_trivial: bool = False,
              enum_bound: int = DEFAULT_ENUM_BOUND) -> NewtonPolygon:
    """Newton polygon from exact L-coefficients.

    Default: the polygon of L(s) = L*(s)/(1-s) for f with its constant term
    stripped (matching the trace pipeline).  With include_trivial=True the
    polygon of L*(s) itself, keeping the slope-zero segment.
    """
    f = f if f.constant_term().is_zero() else f.drop_constant()
    if f.is_zero():
        raise ValueError("f must be nonconstant")
    c = l_polynomial(f, enum_bound)
    if not include_trivial:
        # exact division by (1 - s): partial sums; the remainder must vanish
        b = []
        acc = CyclotomicInt.zero(f.ctx.p)
        for ci in c:
            acc = acc + ci
            b.append(acc)
        if not b[-1].is_zero():
            raise ArithmeticError("(1 - s) does not divide L* (char_sum bug)")
        c = b[:-1]
    pts = []
    for n, cn in enumerate(c):
        v = cyc_ord(cn)
        if v is not None:
            pts.append(ValuationPoint(n, Valuation(v, exact=True)))
    if len(c) == 1:
        return NewtonPolygon([(0, Fraction(0))], [], certified=True)
    return lower_hull(pts)


def oracle_data(f: PolyFq, include_trivial: bool = False,
                enum_bound: int = DEFAULT_ENUM_BOUND):
    """Everything the oracle knows: S_k vectors, L-coefficients, valuations,
    polygon; used by the CLI and the equivalence tests."""
    fn = f if f.constant_term().is_zero() else f.drop_constant()
    d = fn.degree
    S = [char_sum(fn, k, enum_bound) for k in range(1, d + 1)]
    c = l_polynomial(fn, enum_bound)
    poly = oracle_np(fn, include_trivial=include_trivial, enum_bound=enum_bound)
    coeffs = c
    if not include_trivial:
        b, acc = [], CyclotomicInt.zero(fn.ctx.p)
        for ci in c:
            acc = acc + ci
            b.append(acc)
        coeffs = b[:-1]
    vals = []
    for n, cn in enumerate(coeffs):
        v = cyc_ord(cn)
        vals.append({"index": n,
                     "ord": None if v is None else
                     (str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"),
                     "exact": True})
    return {
        "S": [list(s.coeffs) for s in S],
        "L_coeffs": [list(x.coeffs) for x in coeffs],
        "valuations": vals,
        "polygon": poly.to_json(),
    }
