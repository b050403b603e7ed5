"""Truncated p-adic arithmetic.

Three layers, all working modulo p^N:

* Z_p/p^N           -- plain residues,
* Z_q/p^N           -- the unramified extension, as (Z/p^N)[g]/(lifted min poly),
                       with Frobenius tau and Teichmueller lifting,
* T = (Z_q/p^N)[pi]/(pi^(p-1) + p)
                    -- the ramified quotient carrying the uniformizer pi with
                       ord_p(pi) = 1/(p-1).

The relation pi^(p-1) = -p is faithful modulo p^N exactly when N <= p (the
first neglected correction term has p-adic order p), so the context enforces
1 <= N <= p.  Valuations are exact rationals with denominator dividing p-1;
anything that vanishes modulo p^N is only ever reported as a lower bound.
"""

from __future__ import annotations

from fractions import Fraction

from .finite_field import FieldCtx, FqElem


class Valuation:
    """Exact p-adic order, or a lower bound for it (exact=False means >= value)."""

    __slots__ = ("value", "exact")

    def __init__(self, value, exact: bool = True):
        self.value = Fraction(value)
        self.exact = bool(exact)

    def __eq__(self, other):
        if isinstance(other, Valuation):
            return self.value == other.value and self.exact == other.exact
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.exact))

    def at_least(self, bound) -> bool:
        """True value is >= bound (valid for exact values and lower bounds)."""
        return self.value >= Fraction(bound)

    def __repr__(self):
        tag = "" if self.exact else ">="
        return f"Valuation({tag}{self.value})"

    def as_str(self) -> str:
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def to_json(self):
        return {"ord": self.as_str(), "exact": self.exact}


class PadicCtx:
    """Shared context for Z_q/p^N and T; immutable after construction."""

    def __init__(self, field: FieldCtx, N: int):
        p, a = field.p, field.a
        if not 1 <= N <= p:
            raise ValueError(f"precision N = {N} must satisfy 1 <= N <= p = {p}")
        self.field = field
        self.p = p
        self.a = a
        self.N = N
        self.pN = p ** N
        # coefficient-wise lift of min_poly, entries in [0, p)
        self.lifted_min_poly = tuple(int(c) for c in field.min_poly)
        # reduction table: g^e for e = a .. 2a-2 as coordinate vectors mod p^N
        self._gred = self._build_gred()
        self.frob_image = self._hensel_frobenius_root() if a > 1 else None
        # coordinate matrices of tau^j (row s = coords of tau^j(g^s))
        self._frob_pows = self._build_frob_tables()
        self._struct = None

    # -- construction helpers ------------------------------------------------

    def _build_gred(self):
        a, pN = self.a, self.pN
        if a == 1:
            return []
        mp = self.lifted_min_poly
        # g^a = -(mp[0] + mp[1] g + ... + mp[a-1] g^(a-1)); higher powers by
        # shifting and folding the overflow back through the same relation.
        tbl = []
        cur = [(-mp[j]) % pN for j in range(a)]
        tbl.append(tuple(cur))
        for _ in range(a - 2):
            nxt = [0] * a
            carry = cur[a - 1]
            for j in range(a - 1):
                nxt[j + 1] = cur[j]
            if carry:
                base = tbl[0]
                for j in range(a):
                    nxt[j] = (nxt[j] + carry * base[j]) % pN
            tbl.append(tuple(nxt))
            cur = nxt
        return tbl

    def _raw_mul(self, x, y):
        """Product of coordinate tuples mod (lifted_min_poly, p^N)."""
        a, pN = self.a, self.pN
        if a == 1:
            return ((x[0] * y[0]) % pN,)
        out = [0] * (2 * a - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    out[i + j] += xi * yj
        for e in range(2 * a - 2, a - 1, -1):
            ce = out[e] % pN
            if ce:
                red = self._gred[e - a]
                for j in range(a):
                    out[j] += ce * red[j]
            out[e] = 0
        return tuple(c % pN for c in out[:a])

    def _raw_pow(self, x, n):
        r = tuple([1] + [0] * (self.a - 1))
        while n:
            if n & 1:
                r = self._raw_mul(r, x)
            x = self._raw_mul(x, x)
            n >>= 1
        return r

    def _raw_inv(self, u):
        """Inverse of a unit: lift the F_q inverse, then Hensel-refine."""
        p, a, pN = self.p, self.a, self.pN
        ubar = self.field.elem([c % p for c in u])
        v = tuple(ubar.inverse().coords)
        two = tuple([2] + [0] * (a - 1))
        k = 1
        while k < self.N:
            uv = self._raw_mul(u, v)
            v = self._raw_mul(v, tuple((t - s) % pN for t, s in zip(two, uv)))
            k *= 2
        return v

    def _poly_at(self, r):
        """Evaluate (lifted_min_poly, derivative) at r by Horner."""
        a, pN = self.a, self.pN
        mp = self.lifted_min_poly

        def add_const(vec, c):
            return ((vec[0] + c) % pN,) + vec[1:]

        val = tuple([mp[a]] + [0] * (a - 1))
        der = tuple([0] * a)
        for k in range(a - 1, -1, -1):
            der = tuple((x + y) % pN for x, y in zip(self._raw_mul(der, r), val))
            val = add_const(self._raw_mul(val, r), mp[k])
        return val, der

    def _hensel_frobenius_root(self):
        """Root of lifted_min_poly congruent to g^p mod p, by Newton iteration."""
        a, pN = self.a, self.pN
        g = tuple([0, 1] + [0] * (a - 2))
        r = self._raw_pow(g, self.p)
        for _ in range(max(1, self.N.bit_length() + 1)):
            val, der = self._poly_at(r)
            r = tuple((x - y) % pN for x, y in zip(r, self._raw_mul(val, self._raw_inv(der))))
        val, _ = self._poly_at(r)
        if any(val):
            raise ArithmeticError("Frobenius root lift failed to converge")
        return r

    def _build_frob_tables(self):
        a = self.a
        identity = tuple(tuple(1 if i == j else 0 for i in range(a)) for j in range(a))
        if a == 1:
            return [identity]
        one = tuple([1] + [0] * (a - 1))
        rows = [one]
        for _ in range(1, a):
            rows.append(self._raw_mul(rows[-1], self.frob_image))
        tables = [identity, tuple(rows)]
        for _ in range(a - 2):
            prev = tables[-1]
            tables.append(tuple(self._apply_rows(tables[1], row) for row in prev))
        return tables

    def _apply_rows(self, rows, coords):
        """coords interpreted as sum coords[s] g^s, mapped through `rows`."""
        a, pN = self.a, self.pN
        out = [0] * a
        for s, c in enumerate(coords):
            if c:
                row = rows[s]
                for j in range(a):
                    out[j] = (out[j] + c * row[j]) % pN
        return tuple(out)

    # -- public element constructors ------------------------------------------

    def scalar(self, coords) -> "UnramifiedScalar":
        if isinstance(coords, UnramifiedScalar):
            if coords.ctx is not self and coords.ctx != self:
                raise ValueError("scalar belongs to a different p-adic context")
            return coords
        if isinstance(coords, FqElem):
            raise TypeError("pass field elements through teichmuller(), not scalar()")
        if isinstance(coords, int):
            coords = [coords]
        coords = [int(c) % self.pN for c in coords]
        if len(coords) > self.a:
            raise ValueError("too many coordinates")
        coords += [0] * (self.a - len(coords))
        return UnramifiedScalar(self, tuple(coords))

    def zero_scalar(self):
        return self.scalar(0)

    def one_scalar(self):
        return self.scalar(1)

    def pi_elem(self, comps) -> "PiElement":
        comps = list(comps)
        if len(comps) > self.p - 1:
            raise ValueError("too many pi components")
        comps = [self.scalar(c) for c in comps]
        comps += [self.zero_scalar()] * (self.p - 1 - len(comps))
        return PiElement(self, tuple(comps))

    def zero(self) -> "PiElement":
        return self.pi_elem([])

    def one(self) -> "PiElement":
        return self.pi_elem([1])

    def pi(self) -> "PiElement":
        return self.pi_elem([0, 1])

    def __eq__(self, other):
        return (isinstance(other, PadicCtx) and self.field == other.field
                and self.N == other.N)

    def __hash__(self):
        return hash((self.field, self.N))

    def __repr__(self):
        return f"PadicCtx(p={self.p}, a={self.a}, N={self.N})"


class UnramifiedScalar:
    """Element of Z_q/p^N in the power basis of the lifted generator."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: PadicCtx, coords: tuple):
        self.ctx = ctx
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, UnramifiedScalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("mixed p-adic contexts")
            return other
        if isinstance(other, int):
            return self.ctx.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        pN = self.ctx.pN
        return UnramifiedScalar(self.ctx, tuple((x + y) % pN for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        pN = self.ctx.pN
        return UnramifiedScalar(self.ctx, tuple(-x % pN for x in self.coords))

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
        return UnramifiedScalar(self.ctx, self.ctx._raw_mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return UnramifiedScalar(self.ctx, self.ctx._raw_pow(self.coords, n))

    def inverse(self):
        if self.ord() > 0:
            raise ZeroDivisionError("inverse of a non-unit scalar")
        return UnramifiedScalar(self.ctx, self.ctx._raw_inv(self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def ord(self) -> int:
        """max k <= N with p^k dividing every coordinate (N for the zero class)."""
        p, N = self.ctx.p, self.ctx.N
        k = N
        for c in self.coords:
            if c == 0:
                continue
            v = 0
            while c % p == 0:
                c //= p
                v += 1
            k = min(k, v)
            if k == 0:
                return 0
        return k

    def reduce_mod_p(self) -> FqElem:
        return self.ctx.field.elem([c % self.ctx.p for c in self.coords])

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        return (isinstance(other, UnramifiedScalar) and self.ctx == other.ctx
                and self.coords == other.coords)

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"UnramifiedScalar({list(self.coords)})"


class PiElement:
    """Element of T = (Z_q/p^N)[pi]/(pi^(p-1) + p): comps[i] multiplies pi^i."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: PadicCtx, comps: tuple):
        self.ctx = ctx
        self.comps = comps

    def _coerce(self, other):
        if isinstance(other, PiElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("mixed p-adic contexts")
            return other
        if isinstance(other, (int, UnramifiedScalar)):
            return self.ctx.pi_elem([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PiElement(self.ctx, tuple(x + y for x, y in zip(self.comps, other.comps)))

    __radd__ = __add__

    def __neg__(self):
        return PiElement(self.ctx, tuple(-x for x in self.comps))

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
        P1 = ctx.p - 1
        out = [ctx.zero_scalar()] * (2 * P1 - 1)
        for i, xi in enumerate(self.comps):
            if xi.is_zero():
                continue
            for j, yj in enumerate(other.comps):
                out[i + j] = out[i + j] + xi * yj
        # pi^(p-1) = -p
        for e in range(2 * P1 - 2, P1 - 1, -1):
            out[e - P1] = out[e - P1] + (-ctx.p) * out[e]
        return PiElement(ctx, tuple(out[:P1]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        r = self.ctx.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other):
        if isinstance(other, (int, UnramifiedScalar)):
            other = self.ctx.pi_elem([other])
        return (isinstance(other, PiElement) and self.ctx == other.ctx
                and self.comps == other.comps)

    def __hash__(self):
        return hash(tuple(c.coords for c in self.comps))

    def __repr__(self):
        return f"PiElement({[list(c.coords) for c in self.comps]})"

    def reduce_digits(self, k: int) -> "PiElement":
        """Canonical representative modulo p^k (k <= N)."""
        pk = self.ctx.p ** k
        return PiElement(self.ctx, tuple(
            UnramifiedScalar(self.ctx, tuple(c % pk for c in s.coords)) for s in self.comps))

    def to_matrix(self):
        """(p-1) x a integer matrix: row i = coordinates of comps[i]."""
        return [list(c.coords) for c in self.comps]


# ---------------------------------------------------------------------------
# operations named at module level


def teichmuller(c: FqElem, ctx: PadicCtx) -> UnramifiedScalar:
    """The Teichmueller lift: the unique root of x^q = x over c (0 lifts to 0).

    Computed by lifting c coefficient-wise and iterating t -> t^q; each
    iteration gains a digit, so the loop is capped at N steps past stability.
    """
    if c.is_zero():
        return ctx.zero_scalar()
    t = ctx.scalar(list(c.coords))
    q = ctx.field.q
    for _ in range(ctx.N + 1):
        nxt = t ** q
        if nxt == t:
            break
        t = nxt
    if not (t ** q == t):
        raise ArithmeticError("Teichmueller iteration failed to stabilize")
    return t


def frobenius(x: UnramifiedScalar, ctx: PadicCtx, power: int = 1) -> UnramifiedScalar:
    """tau^power applied to x (tau: generator -> Hensel root over g^p)."""
    j = power % ctx.a
    if j == 0:
        return x
    rows = ctx._frob_pows[j]
    return UnramifiedScalar(ctx, ctx._apply_rows(rows, x.coords))


def pi_mul(x: PiElement, y: PiElement) -> PiElement:
    return x * y


def pi_ord(x: PiElement, cap: int | None = None) -> Valuation:
    """ord_p of x: min_i ( i/(p-1) + ord_p comps[i] ).

    A component that vanishes modulo p^cap only contributes a lower bound;
    if every component vanishes the result is the lower bound >= cap.
    """
    ctx = x.ctx
    if cap is None:
        cap = ctx.N
    if cap <= 0:
        return Valuation(0, exact=False)
    p = ctx.p
    pcap = p ** cap
    best = None
    for i, comp in enumerate(x.comps):
        coords = [c % pcap for c in comp.coords]
        k = cap
        for c in coords:
            if c == 0:
                continue
            v = 0
            while c % p == 0:
                c //= p
                v += 1
            k = min(k, v)
        if k < cap:
            val = Fraction(i, p - 1) + k
            if best is None or val < best:
                best = val
    if best is None:
        return Valuation(cap, exact=False)
    return Valuation(best, exact=True)


def pi_substitute(x: PiElement, u: UnramifiedScalar) -> PiElement:
    """h(pi) -> h(u*pi) on canonical forms: comps[i] -> u^i * comps[i].

    Requires a unit u; this is a ring map of T exactly when u^(p-1) = 1,
    and in general it is the order-preserving rescaling used to compare
    twists within one (p-1)-power class.
    """
    u = x.ctx.scalar(u)
    if u.ord() > 0:
        raise ValueError("substitution requires a unit scalar")
    out = []
    upow = x.ctx.one_scalar()
    for comp in x.comps:
        out.append(upow * comp)
        upow = upow * u
    return PiElement(x.ctx, tuple(out))
