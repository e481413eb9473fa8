"""Hermite and conjugate Hermite polynomials, quasi-rational eigenfunctions,
Hermite pseudo-Wronskians and exceptional Hermite polynomials."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .partition_maya import (
    MayaDiagram,
    Partition,
    dim_tableaux,
    multi_flip,
)
from .schur_vertex import hermite_times, schur, specialize
from .symbolic import ExpPolyFn, MultiPoly, determinant, poly_ring, wronskian


class HermiteKind(Enum):
    STANDARD = "standard"
    CONJUGATE = "conjugate"


@lru_cache(maxsize=None)
def hermite(n: int, kind: HermiteKind = HermiteKind.STANDARD) -> MultiPoly:
    """H_n from H_{n+1} = 2x H_n - 2n H_{n-1}; the conjugate family flips the sign of the 2n term."""
    if n < 0:
        raise ValueError("Hermite index must be >= 0")
    x = MultiPoly.var("x")
    s = 1 if kind is HermiteKind.CONJUGATE else -1
    prev, cur = MultiPoly.const(0), MultiPoly.const(1)
    for k in range(n):
        prev, cur = cur, 2 * x * cur + prev.scale(s * 2 * k)
    return cur


def hermite_explicit(n: int) -> MultiPoly:
    """sum_j (-1)^j n!/((n-2j)! j!) (2x)^(n-2j)."""
    terms = {}
    for j in range(n // 2 + 1):
        terms[(n - 2 * j,)] = (-1) ** j * factorial(n) // (factorial(n - 2 * j) * factorial(j)) * 2 ** (n - 2 * j)
    return MultiPoly.from_terms(terms, ("x",))


def psi(n: int) -> ExpPolyFn:
    """exp(-x^2/2) H_n for n >= 0, exp(x^2/2) conj-H_{-n-1} for n < 0."""
    if n >= 0:
        return ExpPolyFn.gaussian(Fraction(-1, 2), hermite(n))
    return ExpPolyFn.gaussian(Fraction(1, 2), hermite(-n - 1, HermiteKind.CONJUGATE))


def _derivative(p: MultiPoly, k: int) -> MultiPoly:
    for _ in range(k):
        p = p.diff("x")
    return p


@lru_cache(maxsize=None)
def pseudo_wronskian(M: MayaDiagram) -> MultiPoly:
    """H_M as the mixed Hermite / conjugate-Hermite determinant.

    Rows for negative k carry conj-H_{-k-1}, ..., conj-H_{-k+p-2}; rows for
    k >= 0 carry H_k and its first p-1 derivatives.
    """
    K = M.index_set()
    p = len(K)
    if p == 0:
        return MultiPoly.const(1)
    rows = []
    for k in K:
        if k < 0:
            rows.append([hermite(-k - 1 + j, HermiteKind.CONJUGATE) for j in range(p)])
        else:
            rows.append([_derivative(hermite(k), j) for j in range(p)])
    return determinant(rows)


def pseudo_wronskian_via_wronskian(M: MayaDiagram) -> MultiPoly:
    """exp(sigma x^2/2) Wr[psi_k1, ..., psi_kp] with K increasing."""
    K = M.index_set()
    if not K:
        return MultiPoly.const(1)
    W = wronskian([psi(k) for k in K])
    out = ExpPolyFn.gaussian(Fraction(M.index, 2)) * W
    if out.exponent:
        raise AssertionError("exponential factors did not cancel")
    return _x_poly(out.body.as_poly())


def _x_poly(p: MultiPoly) -> MultiPoly:
    if "z" in p.used_variables():
        raise AssertionError("unexpected z")
    return MultiPoly.from_terms({(e[p.variables.index("x")],): c for e, c in p.terms().items()}, ("x",))


def normalization_constant(M: MayaDiagram) -> Fraction:
    """(-1)^{(p-q)q} / (prod_{i<j<=q} 2(k_i-k_j) prod_{q<i<j} 2(k_j-k_i)).

    The negative block uses 2(k_i - k_j); with 2(k_j - k_i) there the result
    is off by (-1)^{q(q-1)/2} and stops being translation invariant.
    """
    K = M.index_set()
    neg = [k for k in K if k < 0]
    pos = [k for k in K if k >= 0]
    p, q = len(K), len(neg)
    den = 1
    for i in range(q):
        for j in range(i + 1, q):
            den *= 2 * (neg[i] - neg[j])
    for i in range(p - q):
        for j in range(i + 1, p - q):
            den *= 2 * (pos[j] - pos[i])
    return Fraction((-1) ** ((p - q) * q), den)


@lru_cache(maxsize=None)
def normalized_pw(M: MayaDiagram) -> MultiPoly:
    """The translation-invariant normalized pseudo-Wronskian."""
    return pseudo_wronskian(M).scale(normalization_constant(M))


def normalized_pw_via_schur(lam: Partition) -> MultiPoly:
    """(2^N N!/d_lam) S_lam(x, -1/4, 0, ...)."""
    N = lam.weight
    S = specialize(schur(lam), hermite_times())
    return _x_poly(S.lift(("x",))).scale(Fraction(2 ** N * factorial(N), dim_tableaux(lam)))


def exceptional_hermite(M: MayaDiagram, m: int) -> MultiPoly:
    """Normalized pseudo-Wronskian of f_m(M)."""
    return normalized_pw(multi_flip(M, [m]))


def real_root_count(p: MultiPoly) -> int:
    """Number of distinct real roots of a univariate polynomial in x (Sturm sequence)."""
    R = poly_ring(("x",))
    q = _x_poly(p.lift(("x",))).poly.set_ring(R)
    if q.degree() <= 0:
        return 0
    q = q.sqf_part()
    seq = q.sturm()

    def variations(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)

    def sign_at(f, positive: bool):
        d = f.degree()
        lc = f.LC
        s = 1 if lc > 0 else -1
        return s if positive or d % 2 == 0 else -s

    minus = variations([sign_at(f, False) for f in seq if f])
    plus = variations([sign_at(f, True) for f in seq if f])
    return minus - plus

