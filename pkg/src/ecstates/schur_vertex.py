"""Bell polynomials, Schur functions, the vertex operators X_m and Miwa shifts.

Polynomials in the times ``t1, t2, ...`` are MultiPoly values; a vertex
operator is applied through its Miwa-shift form

    V(t, z) P = exp(sum_k t_k z^k) * P(t_1 - 1/z, t_2 - 1/(2 z^2), ...)

and X_m P is the z^m coefficient, which is a finite sum because the shifted
polynomial only has powers z^0 .. z^-d.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from sympy.polys.domains import QQ
from sympy.polys.rings import ring as sympy_ring

from .partition_maya import Partition, insertion, maya_from_partition, partitions_of
from .symbolic import MultiPoly, determinant, poly_ring, t_names


def _tvar(k: int, n: int) -> MultiPoly:
    return MultiPoly.var(f"t{k}", t_names(n))


@lru_cache(maxsize=None)
def _bell_table(n: int) -> tuple[MultiPoly, ...]:
    """B_0..B_n in variables t1..tn via k B_k = sum_j j t_j B_{k-j}."""
    names = t_names(max(n, 1))
    B = [MultiPoly.const(1, names)]
    for k in range(1, n + 1):
        acc = MultiPoly.const(0, names)
        for j in range(1, k + 1):
            acc = acc + _tvar(j, len(names)).scale(j) * B[k - j]
        B.append(acc.scale(Fraction(1, k)))
    return tuple(B)


def bell(k: int, nvars: int | None = None) -> MultiPoly:
    """Ordinary Bell polynomial B_k(t_1, ..., t_k); zero for k < 0."""
    n = max(k, 1) if nvars is None else max(nvars, 1)
    names = t_names(n)
    if k < 0:
        return MultiPoly.const(0, names)
    if k > n:
        raise ValueError(f"B_{k} needs {k} variables, got {n}")
    # the table for the largest k seen so far is reused
    return _bell_table(max(k, 1))[k].lift(names)


def bell_multinomial(k: int) -> MultiPoly:
    """B_k from the multinomial sum over ||mu|| = k (independent of the recurrence)."""
    names = t_names(max(k, 1))
    total = MultiPoly.const(0, names)
    for lam in partitions_of(k):
        mult = {}
        for p in lam.parts:
            mult[p] = mult.get(p, 0) + 1
        term = MultiPoly.const(1, names)
        for j, mu in mult.items():
            term = term * _tvar(j, len(names)) ** mu
            term = term.scale(Fraction(1, factorial(mu)))
        total = total + term
    return total


def _n_for(lam: Partition) -> int:
    return max(lam.weight, 1)


@lru_cache(maxsize=None)
def schur(lam: Partition) -> MultiPoly:
    """S_lambda = det(B_{m_i + j}), m_i = lambda_i - i, in t1..tN."""
    n = _n_for(lam)
    ell = lam.length
    if ell == 0:
        return MultiPoly.const(1, t_names(n))
    rows = [[bell(lam.part(i) - i + j, n) for j in range(1, ell + 1)] for i in range(1, ell + 1)]
    return determinant(rows)


def schur_wronskian(lam: Partition) -> MultiPoly:
    """S_lambda as the t1-Wronskian of B_{m_l + l}, ..., B_{m_1 + l}."""
    n = _n_for(lam)
    ell = lam.length
    if ell == 0:
        return MultiPoly.const(1, t_names(n))
    fs = [bell(lam.part(i) - i + ell, n) for i in range(ell, 0, -1)]
    rows = []
    for f in fs:
        row = [f]
        for _ in range(ell - 1):
            row.append(row[-1].diff("t1"))
        rows.append(row)
    return determinant(rows)


def _t_count(P: MultiPoly) -> int:
    return max([int(n[1:]) for n in P.variables if n.startswith("t")], default=0)


def miwa_shift(P: MultiPoly) -> MultiPoly:
    """P(t_1 - z^-1, t_2 - z^-2/2, ..., t_n - z^-n/n), Laurent in z."""
    n = _t_count(P)
    if n == 0:
        return P
    names = P.variables
    zinv = MultiPoly(poly_ring(("z",)).one, -1)
    values = {}
    for k in range(1, n + 1):
        values[f"t{k}"] = MultiPoly.var(f"t{k}", names) - (zinv ** k).scale(Fraction(1, k))
    return P.subs(values)


@lru_cache(maxsize=None)
def _raw_ring(n: int):
    """QQ[t1..tn, w] with w standing for 1/z."""
    return sympy_ring(",".join(t_names(n) + ("w",)), QQ)[0]


@lru_cache(maxsize=None)
def _raw_bell(k: int, n: int):
    return bell(k, n).poly.set_ring(_raw_ring(n))


@lru_cache(maxsize=None)
def _raw_images(n: int):
    R = _raw_ring(n)
    w = R.gens[-1]
    return tuple(R.gens[k - 1] - w**k * QQ(1, k) for k in range(1, n + 1))


def vertex_X(m: int, P: MultiPoly) -> MultiPoly:
    """Coefficient of z^m in V(t, z) P.

    Works in QQ[t1..tn, w], w = 1/z: shift t_k -> t_k - w^k/k, then
    X_m P = sum_j B_{m+j} [w^j] (shifted P).
    """
    if "z" in P.used_variables() or any(not v.startswith("t") for v in P.used_variables()):
        raise ValueError("vertex_X acts on polynomials in t1, t2, ... only")
    d = P.weighted_degree()
    n = max(_t_count(P), m + d, 1)
    R = _raw_ring(n)
    p = P.lift(t_names(n))
    p = p.poly.set_ring(R)
    images = _raw_images(n)
    cache: dict = {}
    buckets: dict = {}
    for e, c in p.iterterms():
        term = R(c)
        for k, a in enumerate(e[:-1]):
            if a:
                if (k, a) not in cache:
                    cache[(k, a)] = images[k] ** a
                term = term * cache[(k, a)]
        for f, cf in term.iterterms():
            j = f[-1]
            g = f[:-1] + (0,)
            bucket = buckets.setdefault(j, {})
            bucket[g] = bucket.get(g, QQ(0)) + cf
    total = R.zero
    for j, bucket in buckets.items():
        if m + j < 0:
            continue
        total += _raw_bell(m + j, n) * R.from_dict(bucket)
    return MultiPoly(total.set_ring(poly_ring(t_names(n))))


def _drop_z(P: MultiPoly) -> MultiPoly:
    if "z" in P.used_variables():
        raise AssertionError("unexpected z in a t-polynomial")
    names = tuple(v for v in P.variables if v != "z")
    if names == P.variables:
        return P
    terms = {tuple(k for v, k in zip(P.variables, e) if v != "z"): c for e, c in P.terms().items()}
    return MultiPoly.from_terms(terms, names)


def _bell_derivative(j: int, P: MultiPoly) -> MultiPoly:
    """B_j(-d/dt1, -(1/2) d/dt2, ..., -(1/j) d/dtj) applied to P."""
    if j == 0:
        return P
    B = bell(j, j)
    out = P * 0
    for e, c in B.terms().items():
        term = P
        coef = Fraction(int(c.numerator), int(c.denominator))
        for k, a in enumerate(e, start=1):
            for _ in range(a):
                term = term.diff(f"t{k}")
            coef *= Fraction(-1, k) ** a
            if term.is_zero():
                break
        if not term.is_zero():
            out = out + term.scale(coef)
    return out


def vertex_X_sum(m: int, P: MultiPoly) -> MultiPoly:
    """X_m P from the double-sum expansion of the generating function (a second route)."""
    d = P.weighted_degree()
    n = max(_t_count(P), m + d, 1)
    total = MultiPoly.const(0, t_names(n))
    for j in range(0, d + 1):
        if m + j < 0:
            continue
        dj = _bell_derivative(j, P)
        if not dj.is_zero():
            total = total + bell(m + j, n) * dj
    return _drop_z(total)


def schur_via_raising(lam: Partition) -> MultiPoly:
    """X_{lambda_1} ... X_{lambda_l} 1."""
    P = MultiPoly.const(1, t_names(1))
    for m in reversed(lam.parts):
        P = vertex_X(m, P)
    return P.lift(t_names(_n_for(lam)))


def vertex_expansion(lam: Partition, m_range: range) -> list[tuple[int, int, Partition]]:
    """Terms (m, sign, m |> lam) of V(t, z) S_lam for m in m_range, m not in M_lam."""
    M = maya_from_partition(lam)
    out = []
    for m in m_range:
        if m in M:
            continue
        sign, mu = insertion(m, lam)
        out.append((m, sign, mu))
    return out


def specialize(P: MultiPoly, times) -> MultiPoly:
    """Substitute t_k -> times[k-1] (missing times are zero)."""
    n = _t_count(P)
    values = {f"t{k}": (times[k - 1] if k <= len(times) else 0) for k in range(1, n + 1)}
    out = P.subs(values)
    names = tuple(v for v in out.variables if not v.startswith("t"))
    if names != out.variables:
        if any(v.startswith("t") for v in out.used_variables()):
            raise AssertionError("specialization left time variables behind")
        if not names:
            return MultiPoly.const(out.terms().get((0,) * len(out.variables), 0))
        terms = {
            tuple(k for v, k in zip(out.variables, e) if not v.startswith("t")): c
            for e, c in out.terms().items()
        }
        out = MultiPoly.from_terms(terms, names)
    return out


def hermite_times():
    """(x, -1/4, 0, ...) as substitution values."""
    return (MultiPoly.var("x"), Fraction(-1, 4))
