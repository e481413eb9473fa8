"""Exact arithmetic kernels: Laurent-capable polynomials, rational functions in
(x, z), gaussian-times-rational functions, and linear differential operators in x.

Polynomials are backed by sympy's sparse ``PolyRing`` over QQ (gmpy2 rationals)
and rational functions by its ``FracField``, which cancels the gcd of numerator
and denominator after every operation.

Variables are named ``t1, t2, ..., x, z`` and are always ordered that way;
the printing order is graded lexicographic with ``t1 < t2 < ... < x < z``.
Only ``z`` may carry negative exponents.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.fields import field as _sympy_field
from sympy.polys.rings import PolyElement, ring as _sympy_ring

XZ_FIELD = _sympy_field("x,z", QQ)[0]
XZ_RING = XZ_FIELD.ring

_T_NAME = re.compile(r"t(\d+)$")


class PoleError(ArithmeticError):
    """Numeric evaluation hit a zero of a denominator."""


def _name_key(name: str):
    if name == "x":
        return (1, 0)
    if name == "z":
        return (2, 0)
    m = _T_NAME.match(name)
    if not m:
        raise ValueError(f"unknown variable name {name!r}")
    return (0, int(m.group(1)))


def canonical_names(names) -> tuple[str, ...]:
    return _canonical(tuple(names))


@lru_cache(maxsize=4096)
def _canonical(names: tuple) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_name_key))


def t_names(n: int) -> tuple[str, ...]:
    return tuple(f"t{k}" for k in range(1, n + 1))


@lru_cache(maxsize=None)
def poly_ring(names: tuple[str, ...]):
    names = canonical_names(names)
    if names == ("x", "z"):
        return XZ_RING
    if not names:
        names = ("x",)
    return _sympy_ring(",".join(names), QQ)[0]


def to_qq(c):
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    if isinstance(c, (int, Rational)):
        return QQ(c)
    return QQ.convert(c)


_RING_NAMES: dict = {}


def _names(ring) -> tuple[str, ...]:
    # str() of a sympy Symbol goes through the printer, so cache per ring
    try:
        return _RING_NAMES[ring][0]
    except KeyError:
        names = tuple(s.name for s in ring.symbols)
        _RING_NAMES[ring] = (names, names.index("z") if "z" in names else None)
        return names


def _z_index(ring):
    _names(ring)
    return _RING_NAMES[ring][1]


class MultiPoly:
    """Sparse polynomial over QQ; the variable ``z`` may have negative exponents.

    The value is ``poly * z**zlow`` with ``zlow <= 0``.
    """

    __slots__ = ("poly", "zlow")

    def __init__(self, poly: PolyElement, zlow: int = 0):
        if zlow > 0:
            raise ValueError("zlow must be <= 0")
        if zlow < 0 and _z_index(poly.ring) is None:
            poly = poly.set_ring(poly_ring(_names(poly.ring) + ("z",)))
        if zlow < 0 and poly:
            zi = _z_index(poly.ring)
            k = min(min(e[zi] for e in poly.itermonoms()), -zlow)
            if k:
                poly = poly.ring.from_dict(
                    {e[:zi] + (e[zi] - k,) + e[zi + 1:]: c for e, c in poly.iterterms()}
                )
                zlow += k
        if not poly:
            zlow = 0
        self.poly = poly
        self.zlow = zlow

    # construction --------------------------------------------------------
    @classmethod
    def const(cls, c, variables=("x",)) -> "MultiPoly":
        return cls(poly_ring(tuple(variables))(to_qq(c)))

    @classmethod
    def var(cls, name: str, variables=None) -> "MultiPoly":
        R = poly_ring(tuple(variables) if variables else (name,))
        return cls(R.gens[_names(R).index(name)])

    @classmethod
    def from_terms(cls, terms: dict, variables) -> "MultiPoly":
        """Build from ``{exponent tuple: coefficient}`` over ``variables`` (z may be negative)."""
        variables = tuple(variables)
        R = poly_ring(variables)
        order = [variables.index(n) for n in _names(R)]
        zi = _z_index(R)
        zlow = 0
        if zi is not None:
            zlow = min([0] + [e[order[zi]] for e in terms])
        d = {}
        for e, c in terms.items():
            c = to_qq(c)
            if not c:
                continue
            ee = [e[i] for i in order]
            if zi is not None:
                ee[zi] -= zlow
            d[tuple(ee)] = d.get(tuple(ee), QQ(0)) + c
        return cls(R.from_dict(d), zlow)

    # structure -----------------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return _names(self.poly.ring)

    def terms(self) -> dict:
        """``{exponent tuple over self.variables: coefficient}`` with true z exponents."""
        zi = _z_index(self.poly.ring)
        out = {}
        for e, c in self.poly.iterterms():
            if zi is not None and self.zlow:
                e = e[:zi] + (e[zi] + self.zlow,) + e[zi + 1:]
            out[e] = c
        return out

    def is_zero(self) -> bool:
        return not self.poly

    def __bool__(self):
        return bool(self.poly)

    def lift(self, variables) -> "MultiPoly":
        names = canonical_names(tuple(variables) + self.variables)
        R = poly_ring(names)
        if R is self.poly.ring:
            return self
        return MultiPoly(self.poly.set_ring(R), self.zlow)

    def used_variables(self) -> tuple[str, ...]:
        names = self.variables
        used = set()
        for e, _ in self.poly.iterterms():
            used.update(n for n, k in zip(names, e) if k)
        if self.zlow:
            used.add("z")
        return canonical_names(used)

    def degree(self, var: str) -> int:
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        if not self.poly:
            return -1
        return max(e[i] for e in self.terms())

    def min_degree(self, var: str) -> int:
        if var not in self.variables or not self.poly:
            return 0
        i = self.variables.index(var)
        return min(e[i] for e in self.terms())

    def weighted_degree(self) -> int:
        """Degree with weight k on ``tk`` (x and z weigh 1)."""
        w = [_name_key(n)[1] if n.startswith("t") else 1 for n in self.variables]
        return max((sum(a * b for a, b in zip(e, w)) for e in self.terms()), default=0)

    def coeff_z(self, k: int) -> "MultiPoly":
        """Coefficient of z**k, as a z-free polynomial in the same ring."""
        zi = _z_index(self.poly.ring)
        R = self.poly.ring
        if zi is None:
            return self if k == 0 else MultiPoly(R.zero)
        target = k - self.zlow
        d = {e[:zi] + (0,) + e[zi + 1:]: c for e, c in self.poly.iterterms() if e[zi] == target}
        return MultiPoly(R.from_dict(d))

    def z_range(self) -> tuple[int, int]:
        return self.min_degree("z"), self.degree("z")

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Rational, Fraction)) or type(other).__name__ == "mpq":
            return MultiPoly.const(other, self.variables)
        return NotImplemented

    def _align(self, other):
        names = canonical_names(self.variables + other.variables)
        return self.lift(names), other.lift(names)

    def _zmul(self, k):
        """poly * z**k for k >= 0."""
        if k == 0:
            return self.poly
        zi = _z_index(self.poly.ring)
        return self.poly.mul_monom(tuple(k if i == zi else 0 for i in range(self.poly.ring.ngens)))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        lo = min(a.zlow, b.zlow)
        return MultiPoly(a._zmul(a.zlow - lo) + b._zmul(b.zlow - lo), lo)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(-self.poly, self.zlow)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        return MultiPoly(a.poly * b.poly, a.zlow + b.zlow)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of polynomials are rational functions")
        return MultiPoly(self.poly ** n, self.zlow * n)

    def scale(self, c) -> "MultiPoly":
        return MultiPoly(self.poly * to_qq(c), self.zlow)

    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self._align(other)
        return MultiPoly(a.poly.exquo(b.poly), 0)._zshift(a.zlow - b.zlow)

    def _zshift(self, k: int) -> "MultiPoly":
        """Multiply by z**k (any sign)."""
        if k == 0:
            return self
        zk = MultiPoly(poly_ring(("z",)).one, k) if k < 0 else MultiPoly.var("z") ** k
        return self * zk

    def __eq__(self, other):
        if isinstance(other, RationalFn):
            return other == self
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        a, b = self._align(other)
        return a.zlow == b.zlow and a.poly == b.poly

    def __hash__(self):
        used = self.used_variables()
        return hash(tuple(sorted(self.lift(used).terms().items())) + (used,))

    # calculus --------------------------------------------------------------
    def diff(self, var: str) -> "MultiPoly":
        if var not in self.variables:
            return MultiPoly(self.poly.ring.zero)
        i = self.variables.index(var)
        gen = self.poly.ring.gens[i]
        dp = self.poly.diff(gen)
        if var == "z" and self.zlow:
            return MultiPoly(dp * gen + self.poly * self.zlow, self.zlow - 1)
        return MultiPoly(dp, self.zlow)

    def subs(self, values: dict):
        """Substitute ``{name: value}``; values may be scalars, MultiPoly or RationalFn."""
        names = self.variables
        targets = {}
        for n in names:
            if n in values:
                v = values[n]
                targets[n] = v if isinstance(v, (MultiPoly, RationalFn)) else to_qq(v)
            else:
                targets[n] = MultiPoly.var(n, names)
        if self.zlow:
            if "z" in values:
                raise ValueError("cannot substitute for z in a Laurent polynomial")
        rational = any(isinstance(v, RationalFn) for v in targets.values())
        one = RationalFn.one() if rational else MultiPoly.const(1, names)
        cache: dict = {}

        def power(n, k):
            if (n, k) not in cache:
                cache[(n, k)] = targets[n] ** k
            return cache[(n, k)]

        total = one * 0
        for e, c in self.poly.iterterms():
            term = one * c
            for n, k in zip(names, e):
                if k:
                    term = term * power(n, k)
            total = total + term
        if self.zlow:
            zpow = MultiPoly(poly_ring(("z",)).one, self.zlow)
            total = total * (RationalFn.from_poly(zpow) if rational else zpow)
        return total

    def to_rational(self) -> "RationalFn":
        return RationalFn.from_poly(self)

    # presentation ----------------------------------------------------------
    def render(self) -> str:
        return render_terms(self.terms(), self.variables)

    def __repr__(self):
        return f"MultiPoly({self.render()})"

    __str__ = render


def _fmt_coeff(c) -> str:
    n, d = int(c.numerator), int(c.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def _order_key(e, names):
    # graded lex, t1 < t2 < ... < x < z: compare z first, then x, then t_n down to t1
    rank = sorted(range(len(names)), key=lambda i: _name_key(names[i]), reverse=True)
    return (sum(e),) + tuple(e[i] for i in rank)


def render_terms(terms: dict, names) -> str:
    if not terms:
        return "0"
    out = []
    for e in sorted(terms, key=lambda e: _order_key(e, names), reverse=True):
        c = Fraction(int(terms[e].numerator), int(terms[e].denominator))
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        else:
            body = _fmt_coeff(a)
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def _project_xz(p: MultiPoly) -> PolyElement:
    """The stored polynomial of p (without the z**zlow factor) as an element of XZ_RING."""
    if p.poly.ring is XZ_RING:
        return p.poly
    names = p.variables
    idx = [names.index(n) if n in names else None for n in ("x", "z")]
    d = {}
    for e, c in p.poly.iterterms():
        if any(k for i, k in enumerate(e) if i not in idx):
            raise ValueError(f"rational functions live in x, z only; got variables {names}")
        d[tuple(e[i] if i is not None else 0 for i in idx)] = c
    return XZ_RING.from_dict(d)


class RationalFn:
    """Quotient of polynomials in (x, z), kept in lowest terms."""

    __slots__ = ("frac",)

    def __init__(self, frac):
        self.frac = frac

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFn":
        num = _project_xz(p)
        if p.zlow:
            return cls(XZ_FIELD.new(num, XZ_RING.gens[1] ** (-p.zlow)))
        return cls(XZ_FIELD.new(num, XZ_RING.one))

    @classmethod
    def const(cls, c) -> "RationalFn":
        return cls(XZ_FIELD(to_qq(c)))

    @classmethod
    def one(cls) -> "RationalFn":
        return cls(XZ_FIELD.one)

    @classmethod
    def x(cls) -> "RationalFn":
        return cls(XZ_FIELD.gens[0])

    @classmethod
    def z(cls) -> "RationalFn":
        return cls(XZ_FIELD.gens[1])

    @classmethod
    def ratio(cls, num: MultiPoly, den: MultiPoly) -> "RationalFn":
        return cls.from_poly(num) / cls.from_poly(den)

    @property
    def numer(self) -> MultiPoly:
        return MultiPoly(self.frac.numer)

    @property
    def denom(self) -> MultiPoly:
        return MultiPoly(self.frac.denom)

    def is_zero(self) -> bool:
        return not self.frac

    def __bool__(self):
        return bool(self.frac)

    def is_polynomial(self) -> bool:
        return self.frac.denom.is_ground

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return MultiPoly(self.frac.numer * (1 / self.frac.denom.LC))

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, MultiPoly):
            return RationalFn.from_poly(other)
        if isinstance(other, (int, Rational, Fraction)) or type(other).__name__ == "mpq":
            return RationalFn.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else RationalFn(self.frac + other.frac)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else RationalFn(self.frac - other.frac)

    def __rsub__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else RationalFn(other.frac - self.frac)

    def __neg__(self):
        return RationalFn(-self.frac)

    def __mul__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else RationalFn(self.frac * other.frac)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else RationalFn(self.frac / other.frac)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other if other is NotImplemented else RationalFn(other.frac / self.frac)

    def __pow__(self, n: int):
        return RationalFn(self.frac ** n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.frac == other.frac

    def __hash__(self):
        return hash(self.frac)

    def diff(self, var: str) -> "RationalFn":
        return RationalFn(self.frac.diff(XZ_FIELD.gens[0 if var == "x" else 1]))

    def render(self) -> str:
        num, den = self.numer, self.denom
        if self.is_polynomial():
            return self.as_poly().render()
        return f"({num.render()})/({den.render()})"

    def __repr__(self):
        return f"RationalFn({self.render()})"

    __str__ = render


def _as_rational(v) -> RationalFn:
    if isinstance(v, RationalFn):
        return v
    if isinstance(v, MultiPoly):
        return RationalFn.from_poly(v)
    return RationalFn.const(v)


@dataclass(frozen=True, eq=False)
class ExpPolyFn:
    """``exp(exponent) * body`` with a quadratic exponent in (x, z)."""

    exponent: MultiPoly
    body: RationalFn

    def __post_init__(self):
        E = self.exponent.lift(("x", "z"))
        if set(E.used_variables()) - {"x", "z"} or E.zlow:
            raise ValueError("exponent must be a polynomial in x, z")
        if E and max(sum(e) for e in E.terms()) > 2:
            raise ValueError("exponent must have total degree <= 2")
        object.__setattr__(self, "exponent", E)
        object.__setattr__(self, "body", _as_rational(self.body))

    @classmethod
    def gaussian(cls, coeff, body=1) -> "ExpPolyFn":
        """exp(coeff * x**2) * body."""
        x = MultiPoly.var("x", ("x", "z"))
        return cls((x * x).scale(coeff), _as_rational(body))

    @classmethod
    def rational(cls, body) -> "ExpPolyFn":
        return cls(MultiPoly.const(0, ("x", "z")), _as_rational(body))

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def diff(self, var: str = "x") -> "ExpPolyFn":
        Ev = RationalFn.from_poly(self.exponent.diff(var))
        return ExpPolyFn(self.exponent, Ev * self.body + self.body.diff(var))

    def derivatives(self, order: int, var: str = "x") -> list["ExpPolyFn"]:
        out = [self]
        for _ in range(order):
            out.append(out[-1].diff(var))
        return out

    def __mul__(self, other):
        if isinstance(other, ExpPolyFn):
            return ExpPolyFn(self.exponent + other.exponent, self.body * other.body)
        return ExpPolyFn(self.exponent, self.body * _as_rational(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ExpPolyFn(self.exponent, -self.body)

    def __add__(self, other: "ExpPolyFn"):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.exponent != other.exponent:
            raise ValueError("cannot add functions with different exponential factors")
        return ExpPolyFn(self.exponent, self.body + other.body)

    def __sub__(self, other: "ExpPolyFn"):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ExpPolyFn):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.exponent == other.exponent and self.body == other.body

    def __hash__(self):
        return hash((self.exponent, self.body))

    def ratio(self, other: "ExpPolyFn") -> RationalFn:
        """self/other when both share the exponential factor."""
        if self.exponent != other.exponent:
            raise ValueError("exponential factors differ")
        return self.body / other.body

    def render(self) -> str:
        E = self.exponent.render()
        return f"exp({E})*[{self.body.render()}]" if self.exponent else self.body.render()

    __str__ = render


def differentiate(f, var: str):
    return f.diff(var)


# --- determinants -------------------------------------------------------------

def _exact_div(a, b):
    if isinstance(a, MultiPoly):
        return a.exquo(b)
    if isinstance(a, PolyElement):
        return a.exquo(b)
    return a / b


def _is_zero(a):
    return a.is_zero() if hasattr(a, "is_zero") and callable(a.is_zero) else not a


def determinant(rows: Sequence[Sequence]):
    """Fraction-free (Bareiss) determinant; entries need +, -, * and exact division."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    A = [list(r) for r in rows]
    if any(len(r) != n for r in A):
        raise ValueError("matrix must be square")
    if n == 1:
        return A[0][0]
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(A[k][k]):
            for r in range(k + 1, n):
                if not _is_zero(A[r][k]):
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return A[k][k] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = A[k][k] * A[i][j] - A[i][k] * A[k][j]
                A[i][j] = v if prev is None else _exact_div(v, prev)
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return -d if sign < 0 else d


def wronskian(fs: Sequence, var: str = "x"):
    """Wronskian of ExpPolyFn (exponential factors pulled out of each row) or of polynomials."""
    if not fs:
        raise ValueError("wronskian of an empty list")
    p = len(fs)
    if isinstance(fs[0], ExpPolyFn):
        E = fs[0].exponent * 0
        rows = []
        for f in fs:
            E = E + f.exponent
            rows.append([d.body for d in f.derivatives(p - 1, var)])
        return ExpPolyFn(E, determinant(rows))
    rows = []
    for f in fs:
        r = [f]
        for _ in range(p - 1):
            r.append(r[-1].diff(var))
        rows.append(r)
    return determinant(rows)


# --- differential operators -------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearDiffOp:
    """sum_j coeffs[j] * d^j/dx^j with rational coefficients in x."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [_as_rational(c) for c in self.coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def identity(cls) -> "LinearDiffOp":
        return cls((RationalFn.one(),))

    @classmethod
    def multiplication(cls, f) -> "LinearDiffOp":
        return cls((_as_rational(f),))

    @classmethod
    def d(cls, order: int = 1) -> "LinearDiffOp":
        return cls(tuple([0] * order + [1]))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def apply(self, f: ExpPolyFn) -> ExpPolyFn:
        if self.is_zero():
            return f * 0
        derivs = f.derivatives(self.order)
        body = RationalFn.const(0)
        for c, d in zip(self.coeffs, derivs):
            if not c.is_zero():
                body = body + c * d.body
        return ExpPolyFn(f.exponent, body)

    __call__ = apply

    def compose(self, other: "LinearDiffOp") -> "LinearDiffOp":
        """self o other, by the Leibniz rule."""
        from math import comb

        if self.is_zero() or other.is_zero():
            return LinearDiffOp()
        out = [RationalFn.const(0) for _ in range(self.order + other.order + 1)]
        # derivatives of other's coefficients
        dcache = [[b] for b in other.coeffs]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                while len(dcache[j]) <= i:
                    dcache[j].append(dcache[j][-1].diff("x"))
                for r in range(i + 1):
                    br = dcache[j][r]
                    if br.is_zero():
                        continue
                    out[i - r + j] = out[i - r + j] + a * br * comb(i, r)
        return LinearDiffOp(tuple(out))

    __matmul__ = compose

    def __add__(self, other: "LinearDiffOp") -> "LinearDiffOp":
        n = max(len(self.coeffs), len(other.coeffs))
        zero = RationalFn.const(0)
        a = list(self.coeffs) + [zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [zero] * (n - len(other.coeffs))
        return LinearDiffOp(tuple(u + v for u, v in zip(a, b)))

    def __neg__(self):
        return LinearDiffOp(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return LinearDiffOp(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LinearDiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def first_difference(self, other: "LinearDiffOp"):
        """(j, self_j, other_j) for the first differing coefficient, else None."""
        n = max(len(self.coeffs), len(other.coeffs))
        zero = RationalFn.const(0)
        for j in range(n):
            a = self.coeffs[j] if j < len(self.coeffs) else zero
            b = other.coeffs[j] if j < len(other.coeffs) else zero
            if a != b:
                return j, a, b
        return None

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            dpart = "" if j == 0 else ("D" if j == 1 else f"D^{j}")
            if c == 1 and dpart:
                parts.append(dpart)
            else:
                parts.append(f"({c.render()})" + (f"*{dpart}" if dpart else ""))
        return " + ".join(reversed(parts))

    __str__ = render


def op_apply(A: LinearDiffOp, f: ExpPolyFn) -> ExpPolyFn:
    return A.apply(f)


def op_compose(A: LinearDiffOp, B: LinearDiffOp) -> LinearDiffOp:
    return A.compose(B)


# --- numerics ---------------------------------------------------------------

class NumericPoly:
    """Float evaluator for a polynomial in (x, z), Laurent in z."""

    def __init__(self, p: MultiPoly):
        p = p.lift(("x", "z"))
        terms = p.terms()
        xi, zi = p.variables.index("x"), p.variables.index("z")
        by_z: dict[int, dict[int, float]] = {}
        for e, c in terms.items():
            by_z.setdefault(e[zi], {})[e[xi]] = float(c)
        self.groups = []
        for b, xs in sorted(by_z.items()):
            deg = max(xs)
            arr = np.zeros(deg + 1)
            for a, c in xs.items():
                arr[deg - a] = c
            self.groups.append((b, arr))

    def __call__(self, x, z):
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=complex)
        total = np.zeros(np.broadcast(x, z).shape, dtype=complex)
        for b, arr in self.groups:
            total = total + np.polyval(arr, x) * (z ** b if b else 1.0)
        return total


class NumericFn:
    """Float evaluator for an ExpPolyFn, ``exp(E - shift) * num / den``."""

    def __init__(self, f: ExpPolyFn, pole_tol: float = 1e-300):
        self.exponent = NumericPoly(f.exponent)
        self.num = NumericPoly(f.body.numer)
        self.den = NumericPoly(f.body.denom)
        self.pole_tol = pole_tol

    def log_scale(self, x, z):
        return self.exponent(x, z)

    def __call__(self, x, z, shift=0.0):
        den = self.den(x, z)
        if np.any(np.abs(den) <= self.pole_tol):
            raise PoleError("denominator vanishes at an evaluation point")
        return np.exp(self.exponent(x, z) - shift) * self.num(x, z) / den


def compile_numeric(f) -> NumericFn:
    if isinstance(f, RationalFn):
        f = ExpPolyFn.rational(f)
    return NumericFn(f)


def eval_complex(f, x, z=0.0):
    """Evaluate an ExpPolyFn / RationalFn / MultiPoly at real x and complex z."""
    if isinstance(f, MultiPoly):
        f = RationalFn.from_poly(f)
    out = compile_numeric(f)(x, z)
    return complex(out) if np.ndim(out) == 0 else out


def solve_linear(A: Sequence[Sequence], b: Sequence):
    """Solve A u = b over a field (RationalFn entries) by Gaussian elimination."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for k in range(n):
        piv = next((r for r in range(k, n) if not _is_zero(M[r][k])), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][k]
        M[k] = [v * inv if j > k else v for j, v in enumerate(M[k])]
        for r in range(n):
            if r != k and not _is_zero(M[r][k]):
                f = M[r][k]
                M[r] = [M[r][j] - f * M[k][j] if j > k else M[r][j] for j in range(n + 1)]
    return [M[k][n] for k in range(n)]
