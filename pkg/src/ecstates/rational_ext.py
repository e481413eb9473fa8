"""Rational extensions of the harmonic oscillator: potentials, Hamiltonians,
eigenfunctions, Darboux intertwiners and ladder operators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import prod

from .checks import CheckResult
from .hermite import normalized_pw
from .partition_maya import (
    MayaDiagram,
    as_index_set,
    is_krein_adler_regular,
    is_q_core,
    multi_flip,
    symmetric_difference,
    translate,
)
from .symbolic import (
    ExpPolyFn,
    LinearDiffOp,
    MultiPoly,
    RationalFn,
    determinant,
    render_terms,
    solve_linear,
)


@dataclass(frozen=True, eq=False)
class RationalExtension:
    maya: MayaDiagram
    potential: RationalFn
    hamiltonian: LinearDiffOp
    regular: bool


def _hat(M: MayaDiagram) -> RationalFn:
    return RationalFn.from_poly(normalized_pw(M))


@lru_cache(maxsize=None)
def potential(M: MayaDiagram) -> RationalFn:
    """U_M = x^2 + 2(H'/H)^2 - 2H''/H + 2 sigma_M."""
    H = _hat(M)
    H1 = H.diff("x")
    H2 = H1.diff("x")
    x = RationalFn.x()
    return x * x + 2 * (H1 / H) ** 2 - 2 * H2 / H + 2 * M.index


@lru_cache(maxsize=None)
def hamiltonian(M: MayaDiagram) -> LinearDiffOp:
    """T_M = -d^2/dx^2 + U_M."""
    return LinearDiffOp((potential(M), 0, -1))


def build_extension(M: MayaDiagram) -> RationalExtension:
    return RationalExtension(M, potential(M), hamiltonian(M), is_krein_adler_regular(M))


@lru_cache(maxsize=None)
def eigenfunction(M: MayaDiagram, m: int) -> ExpPolyFn:
    """psi_{M,m} = exp(eps x^2/2) Hhat_{f_m(M)} / Hhat_M, eps = +1 iff m in M."""
    eps = 1 if m in M else -1
    body = RationalFn.from_poly(normalized_pw(multi_flip(M, [m]))) / _hat(M)
    return ExpPolyFn.gaussian(Fraction(eps, 2), body)


def is_bound_state(M: MayaDiagram, m: int) -> bool:
    return m not in M


@lru_cache(maxsize=None)
def intertwiner(M: MayaDiagram, K: tuple[int, ...]) -> LinearDiffOp:
    """The monic operator of order |K| whose kernel is spanned by psi_{M,k}, k in K.

    Same operator as y -> Wr[psi_k1, ..., psi_kp, y] / Wr[psi_k1, ..., psi_kp];
    its lower coefficients solve sum_j a_j psi_k^(j) = -psi_k^(p) for every k.
    """
    K = as_index_set(K)
    p = len(K)
    if p == 0:
        return LinearDiffOp.identity()
    rows, rhs = [], []
    for k in K:
        bodies = [d.body for d in eigenfunction(M, k).derivatives(p)]
        rows.append(bodies[:p])
        rhs.append(-bodies[p])
    a = solve_linear(rows, rhs)
    return LinearDiffOp(tuple(a) + (RationalFn.one(),))


def intertwiner_by_cofactors(M: MayaDiagram, K) -> LinearDiffOp:
    """Expand Wr[psi_k1, ..., psi_kp, y] along the y row and divide by Wr[psi_k1, ..., psi_kp]."""
    K = as_index_set(K)
    p = len(K)
    if p == 0:
        return LinearDiffOp.identity()
    F = [[d.body for d in eigenfunction(M, k).derivatives(p)] for k in K]
    minors = [determinant([[row[c] for c in range(p + 1) if c != j] for row in F]) for j in range(p + 1)]
    W = minors[p]
    return LinearDiffOp(tuple((-1) ** (p + j) * minors[j] / W for j in range(p + 1)))


@dataclass(frozen=True, eq=False)
class LadderOperator:
    op: LinearDiffOp
    source: MayaDiagram
    shift: int
    kernel_indices: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.op.order

    def apply(self, f: ExpPolyFn) -> ExpPolyFn:
        return self.op.apply(f)


def kernel_indices(M: MayaDiagram, n: int) -> tuple[int, ...]:
    """K_n = (M + n) symmetric-difference M."""
    return symmetric_difference(translate(M, n), M)


@lru_cache(maxsize=None)
def ladder(M: MayaDiagram, n: int) -> LadderOperator:
    K = kernel_indices(M, n)
    return LadderOperator(intertwiner(M, K), M, n, K)


def is_annihilator(L: LadderOperator) -> bool:
    return all(k not in L.source for k in L.kernel_indices)


def gamma(M: MayaDiagram, q: int, m: int) -> int:
    """prod_{k in K_q} (m - k); requires M to be a q-core."""
    if not is_q_core(M, q):
        raise ValueError(f"{q} is not a critical degree of {M}")
    return prod(m - k for k in kernel_indices(M, q))


def ladder_action_constant(M: MayaDiagram, q: int, m: int) -> RationalFn:
    """The measured ratio L_{M,q} psi_{M,m} / psi_{M,m-q}."""
    image = ladder(M, q).apply(eigenfunction(M, m))
    if image.is_zero():
        return RationalFn.const(0)
    return image.ratio(eigenfunction(M, m - q))


def poly_in_T(M: MayaDiagram, roots) -> LinearDiffOp:
    """prod_{r in roots} (r - T_M) as a differential operator."""
    T = hamiltonian(M)
    ops = [LinearDiffOp.multiplication(r) - T for r in roots]
    return reduce(lambda A, B: A.compose(B), ops, LinearDiffOp.identity())


def composition_check(M: MayaDiagram, K1, K2) -> CheckResult:
    """A_{M2,K2} o A_{M,K1} == A_{M,K1 (+) K2} o p_{K1,K2}(T_M), M2 = f_K1(M)."""
    K1, K2 = as_index_set(K1), as_index_set(K2)
    M2 = multi_flip(M, K1)
    lhs = intertwiner(M2, K2).compose(intertwiner(M, K1))
    both = sorted(set(K1) & set(K2))
    sym = as_index_set(set(K1) ^ set(K2))
    rhs = intertwiner(M, sym).compose(poly_in_T(M, [2 * k + 1 for k in both]))
    diff = lhs.first_difference(rhs)
    name = f"composition M={M} K1={K1} K2={K2}"
    if diff is None:
        return CheckResult(name, True)
    j, a, b = diff
    return CheckResult(name, False, f"coefficient of D^{j}: {a.render()} != {b.render()}")


def intertwining_residual(M: MayaDiagram, K) -> LinearDiffOp:
    """A_{M,K} T_M - T_{f_K(M)} A_{M,K}."""
    A = intertwiner(M, as_index_set(K))
    return A.compose(hamiltonian(M)) - hamiltonian(multi_flip(M, K)).compose(A)


def ladder_residual(M: MayaDiagram, n: int) -> LinearDiffOp:
    """L T_M - (T_M + 2n) L."""
    L = ladder(M, n).op
    T = hamiltonian(M)
    return L.compose(T) - (T + LinearDiffOp.multiplication(2 * n)).compose(L)


def classical_lowering() -> LinearDiffOp:
    return LinearDiffOp((RationalFn.x(), 1))


def classical_raising() -> LinearDiffOp:
    return LinearDiffOp((-RationalFn.x(), 1))


def potential_display(M: MayaDiagram) -> str:
    """U_M as ``x^2 + c + sum_k r_k / D^k`` with D the primitive integer form of Hhat_M."""
    U = potential(M)
    x = RationalFn.x()
    R = U - x * x
    if R.is_polynomial():
        c = R.as_poly()
        return "x^2" if c.is_zero() else f"x^2 {_signed(c.render())}"
    D = normalized_pw(M)
    terms = D.terms()
    from math import gcd, lcm

    den_lcm = reduce(lcm, (int(c.denominator) for c in terms.values()), 1)
    num_gcd = reduce(gcd, (int(c.numerator * den_lcm // c.denominator) for c in terms.values()), 0)
    lead = max(terms)
    scale = Fraction(den_lcm, num_gcd) * (1 if terms[lead] > 0 else -1)
    D = D.scale(scale)
    Dr = RationalFn.from_poly(D)
    num, den = R.numer, R.denom
    r = 0
    rest = RationalFn.from_poly(den)
    while True:
        q = rest / Dr
        if not q.is_polynomial():
            break
        rest, r = q, r + 1
    if r == 0 or rest.as_poly().used_variables():
        return f"x^2 + {R.render()}"
    # R = num / (c * D^r); expand num / c in base D
    N = RationalFn.from_poly(num) / rest
    xpoly = _as_x_poly
    qpoly, rem = _divmod_x(xpoly(N.as_poly()), xpoly(D) ** r)
    out = ["x^2"]
    if not qpoly.is_zero():
        out.append(_signed(qpoly.render()))
    digits = []
    for _ in range(r):
        rem, dgt = _divmod_x(rem, xpoly(D))
        digits.append(dgt)
    dstr = D.render()
    # digits[i] multiplies D^i in num, so contributes digits[i] / D^(r-i)
    for i in range(r - 1, -1, -1):
        dg = digits[i]
        if dg.is_zero():
            continue
        power = r - i
        den_s = f"({dstr})" if power == 1 else f"({dstr})^{power}"
        body = dg.render()
        if len(dg.terms()) > 1:
            body = f"({body})"
        out.append(_signed(f"{body}/{den_s}"))
    return " ".join(out)


def _signed(s: str) -> str:
    return f"- {s[1:]}" if s.startswith("-") else f"+ {s}"


def _as_x_poly(p: MultiPoly) -> MultiPoly:
    return MultiPoly.from_terms({(e[p.variables.index("x")],): c for e, c in p.terms().items()}, ("x",))


def _divmod_x(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    q, r = a.poly.div(b.poly)
    return MultiPoly(q), MultiPoly(r)


def render_index_set(K) -> str:
    return "{" + ",".join(map(str, K)) + "}"


__all__ = [
    "RationalExtension",
    "LadderOperator",
    "build_extension",
    "potential",
    "hamiltonian",
    "eigenfunction",
    "intertwiner",
    "intertwiner_by_cofactors",
    "ladder",
    "kernel_indices",
    "is_annihilator",
    "gamma",
    "ladder_action_constant",
    "composition_check",
    "intertwining_residual",
    "ladder_residual",
    "potential_display",
    "render_terms",
]
