"""Artin-Hasse exponential and splitting-function coefficient tables.

The splitting function of a twisted polynomial lam*f is the product over the
nonzero monomials a_k x^k of E(pi * w(lam*a_k) * x^k), where E is the
Artin-Hasse exponential and w the Teichmueller lift.  Its x-coefficients
F[0..D] live in T and feed the Dwork matrix.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import _fastring
from .finite_field import FqElem, PolyFq
from .padic import PadicCtx, PiElement, Valuation, pi_ord, teichmuller


def artin_hasse_fractions(p: int, D: int):
    """Exact coefficients of exp(sum_{p^i <= D} x^(p^i)/p^i) through degree D.

    Differentiating gives the recurrence n*u_n = sum_{p^i <= n} u_{n-p^i}.
    Every u_n is p-integral; the recurrence is carried out over exact
    rationals because the divisions by multiples of p would corrupt
    fixed-precision residues.
    """
    u = [Fraction(1)] * (D + 1)
    for n in range(1, D + 1):
        s = Fraction(0)
        pk = 1
        while pk <= n:
            s += u[n - pk]
            pk *= p
        u[n] = s / n
    return u


class ArtinHasseTable:
    """Artin-Hasse coefficients u_0..u_D reduced into Z/p^N."""

    def __init__(self, p: int, N: int, D: int, u):
        self.p = p
        self.N = N
        self.D = D
        self.u = u

    def __getitem__(self, k: int) -> int:
        return self.u[k]


def artin_hasse(p: int, N: int, D: int) -> ArtinHasseTable:
    if D < 1:
        raise ValueError("truncation degree D must be >= 1")
    pN = p ** N
    exact = artin_hasse_fractions(p, D)
    u = []
    for x in exact:
        if x.denominator % p == 0:
            raise ArithmeticError("non-p-integral Artin-Hasse coefficient (internal bug)")
        u.append(x.numerator * pow(x.denominator, -1, pN) % pN)
    return ArtinHasseTable(p, N, D, u)


def decay_bound(i: int, d: int) -> int:
    """Provable lower bound on ord_pi F[i]: every index vector for x^i uses
    at least i/d factors of pi."""
    if i < 0:
        raise ValueError("negative series index")
    if i == 0:
        return 0
    return -(-i // d)


class SplittingCoefficients:
    """The table F[0..D] of splitting-function coefficients for lam*f."""

    def __init__(self, f: PolyFq, lam: FqElem, D: int, F, arr=None):
        self.f = f
        self.lam = lam
        self.D = D
        self.F = F
        self._arr = arr

    def __getitem__(self, i: int) -> PiElement:
        return self.F[i]

    def array(self) -> np.ndarray:
        return self._arr

    def to_json(self):
        return {"D": self.D, "F": [x.to_matrix() for x in self.F]}


def splitting_coeffs(f: PolyFq, lam: FqElem, ctx: PadicCtx, D: int) -> SplittingCoefficients:
    """Coefficients of prod_k E(pi * w(lam*a_k) * x^k) through x^D.

    Requires gcd(deg f, p) = 1, lam != 0 and no constant term in f (the
    trace pipeline strips constants before calling this).
    """
    if f.is_zero():
        raise ValueError("f must be nonzero")
    lam = f.ctx.elem(lam)
    if lam.is_zero():
        raise ValueError("lambda must be nonzero")
    if math.gcd(f.degree, ctx.p) != 1:
        raise ValueError(f"deg f = {f.degree} must be coprime to p = {ctx.p}")
    if not f.constant_term().is_zero():
        raise ValueError("f must have zero constant term")

    table = artin_hasse(ctx.p, ctx.N, D)
    Dflat = _fastring.dim(ctx)
    arr = np.zeros((D + 1, Dflat), dtype=np.int64)
    arr[0] = _fastring.pi_to_vec(ctx.one())
    pi = ctx.pi()
    for k, a_k in f.monomials():
        w = teichmuller(lam * a_k, ctx)
        piw = pi * w
        terms = []
        cur = ctx.one()
        j = 0
        while k * j <= D:
            terms.append((k * j, table[j] * cur))
            cur = cur * piw
            j += 1
        arr = _fastring.series_mul_sparse(ctx, arr, terms)
    F = [_fastring.vec_to_pi(ctx, arr[i]) for i in range(D + 1)]
    out = SplittingCoefficients(f, lam, D, F, arr=arr)
    _check_decay(out, ctx)
    return out


def _check_decay(sc: SplittingCoefficients, ctx: PadicCtx):
    """Every entry must sit above the pi-adic decay bound; exact entries that
    violate it indicate a bug, so fail hard."""
    d = sc.f.degree
    for i, x in enumerate(sc.F):
        v = pi_ord(x)
        need = Fraction(decay_bound(i, d), ctx.p - 1)
        if v.exact and v.value < need:
            raise ArithmeticError(
                f"splitting coefficient F[{i}] has ord {v.value} below the decay bound {need}")
