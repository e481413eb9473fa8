"""Bound-state generating functions, canonical and extended coherent states,
their exact eigenrelations, numeric time evolution and uncertainty products."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

import numpy as np

from .checks import CheckResult
from .hermite import hermite, normalized_pw
from .partition_maya import (
    MayaDiagram,
    Partition,
    is_krein_adler_regular,
    is_q_core,
    maya_from_partition,
    translate,
)
from .rational_ext import eigenfunction, hamiltonian, ladder
from .schur_vertex import hermite_times, miwa_shift, schur, specialize
from .symbolic import (
    ExpPolyFn,
    LinearDiffOp,
    MultiPoly,
    RationalFn,
    compile_numeric,
)

# -x^2/2 + x z - z^2/4
_PSI0_EXPONENT = MultiPoly.from_terms({(2, 0): Fraction(-1, 2), (1, 1): 1, (0, 2): Fraction(-1, 4)}, ("x", "z"))


@dataclass(frozen=True, eq=False)
class GeneratingFunction:
    value: ExpPolyFn
    maya: MayaDiagram
    partition: Partition

    @property
    def sigma(self) -> int:
        return self.maya.index

    @property
    def prefactor(self) -> RationalFn:
        """The rational factor multiplying Psi_0."""
        return self.value.body


def psi0_gf() -> GeneratingFunction:
    """Psi_0 = exp(-(x - z)^2/2 + z^2/4)."""
    return GeneratingFunction(
        ExpPolyFn(_PSI0_EXPONENT, RationalFn.one()), MayaDiagram.trivial(), Partition(())
    )


def _xz(P: MultiPoly) -> MultiPoly:
    """Drop every variable other than x, z (they must be unused)."""
    keep = tuple(v for v in P.variables if v in ("x", "z"))
    used = P.used_variables()
    if any(v not in ("x", "z") for v in used):
        raise AssertionError(f"unexpected variables {used}")
    idx = [P.variables.index(v) for v in keep]
    terms = {}
    for e, c in P.terms().items():
        key = tuple(e[i] for i in idx)
        terms[key] = terms.get(key, 0) + c
    return MultiPoly.from_terms(terms, keep or ("x",))


@lru_cache(maxsize=None)
def shifted_schur_ratio(lam: Partition) -> RationalFn:
    """S_lam(x - 1/z, -1/4 - 1/(2 z^2), -1/(3 z^3), ...) / S_lam(x, -1/4, 0, ...)."""
    S = schur(lam)
    num = _xz(specialize(miwa_shift(S), hermite_times()))
    den = _xz(specialize(S, hermite_times()))
    return RationalFn.from_poly(num) / RationalFn.from_poly(den)


@lru_cache(maxsize=None)
def gen_fn(lam: Partition, sigma: int = 0) -> GeneratingFunction:
    """Psi_lam for the Maya diagram M_lam + sigma; the value itself does not depend on sigma."""
    M = translate(maya_from_partition(lam), sigma)
    return GeneratingFunction(ExpPolyFn(_PSI0_EXPONENT, shifted_schur_ratio(lam)), M, lam)


def z_coefficient(gf: GeneratingFunction, k: int) -> ExpPolyFn:
    """The coefficient of z^k in the Laurent expansion of Psi_lam about z = 0.

    Uses exp(x z - z^2/4) = sum_n H_n(x) (z/2)^n / n!.
    """
    pref = gf.prefactor
    num, den = pref.numer, pref.denom
    if "z" in den.used_variables():
        # the denominator is S_lam(x, -1/4, ...), free of z, times a power of z
        dz = den.min_degree("z")
        if den.degree("z") != dz:
            raise ValueError("prefactor denominator is not a monomial in z")
        den_x = den.coeff_z(dz)
    else:
        dz, den_x = 0, den
    total = RationalFn.const(0)
    lo, hi = num.z_range() if not num.is_zero() else (0, 0)
    for j in range(lo, hi + 1):
        n = k - (j - dz)
        if n < 0:
            continue
        cj = num.coeff_z(j)
        if cj.is_zero():
            continue
        total = total + RationalFn.from_poly(cj * hermite(n)) * Fraction(1, 2**n * factorial(n))
    total = total / RationalFn.from_poly(den_x)
    return ExpPolyFn.gaussian(Fraction(-1, 2), total)


def expansion_rule(M: MayaDiagram, lam: Partition, m: int) -> Fraction:
    """prod_i (m - m_i) / (m - sigma + l)! 2^-(m - sigma), m_i = lam_i - i + sigma."""
    sigma = M.index
    ell = lam.length
    c = Fraction(prod(m - (lam.part(i) - i + sigma) for i in range(1, ell + 1)))
    return c / factorial(m - sigma + ell) / Fraction(2) ** (m - sigma)


def expansion_coefficients(lam: Partition, count: int, sigma: int = 0) -> CheckResult:
    """Compare the z-series of Psi_lam with psi_{M,m} times the closed-form coefficient.

    Every power z^k with k from -|lam| up to the count-th bound state is checked;
    powers attached to members of M must vanish.
    """
    gf = gen_fn(lam, sigma)
    M = gf.maya
    bound = []
    m = M.window()[0]
    while len(bound) < count:
        if m not in M:
            bound.append(m)
        m += 1
    name = f"expansion lam={lam.parts} sigma={sigma} count={count}"
    for k in range(-lam.weight, bound[-1] - sigma + 1):
        m = k + sigma
        got = z_coefficient(gf, k)
        if m in M:
            if not got.is_zero():
                return CheckResult(name, False, f"z^{k}: expected 0 (m={m} is a member)")
            continue
        want = eigenfunction(M, m)
        c = expansion_rule(M, lam, m)
        want = ExpPolyFn(want.exponent, want.body * c)
        if got != want:
            return CheckResult(name, False, f"z^{k}: coefficient mismatch at m={m}")
    return CheckResult(name, True, f"{count} bound states")


def _z_euler(f: ExpPolyFn) -> ExpPolyFn:
    """z d/dz f."""
    return f.diff("z") * ExpPolyFn.rational(RationalFn.z())


def tpsi0_check() -> CheckResult:
    """T Psi_0 = (2 z d/dz + 1) Psi_0 and L_- Psi_0 = z Psi_0."""
    P = psi0_gf().value
    T = hamiltonian(MayaDiagram.trivial())
    r1 = T.apply(P) - (_z_euler(P) * ExpPolyFn.rational(RationalFn.const(2)) + P)
    L = ladder(MayaDiagram.trivial(), 1).op
    r2 = L.apply(P) - P * ExpPolyFn.rational(RationalFn.z())
    ok = r1.is_zero() and r2.is_zero()
    return CheckResult("classical generating function", ok, "" if ok else "nonzero residual")


def eigenrelation_residual(lam: Partition, sigma: int = 0) -> ExpPolyFn:
    """T_M Psi_lam - (2 z d/dz + 1 + 2 sigma_M) Psi_lam."""
    gf = gen_fn(lam, sigma)
    P = gf.value
    rhs = _z_euler(P) * ExpPolyFn.rational(RationalFn.const(2)) + P * ExpPolyFn.rational(
        RationalFn.const(1 + 2 * gf.sigma)
    )
    return hamiltonian(gf.maya).apply(P) - rhs


def annihilator_residual(lam: Partition, q: int, sigma: int = 0) -> ExpPolyFn:
    """L_{M,q} Psi_lam - z^q Psi_lam."""
    gf = gen_fn(lam, sigma)
    P = gf.value
    return ladder(gf.maya, q).op.apply(P) - P * ExpPolyFn.rational(RationalFn.z() ** q)


def annihilator_eigencheck(lam: Partition, q: int, sigma: int = 0) -> CheckResult:
    M = translate(maya_from_partition(lam), sigma)
    r = annihilator_residual(lam, q, sigma)
    note = "" if is_q_core(M, q) else f"({q} is not a critical degree)"
    detail = "zero residual" if r.is_zero() else f"residual {r.body.render()[:200]}"
    return CheckResult(f"annihilator lam={lam.parts} q={q}", r.is_zero(), f"{detail} {note}".strip())


# -- numerics -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoherentState:
    gen: GeneratingFunction
    alpha: float
    sigma: int

    def z(self, t):
        return self.alpha * np.exp(-2j * np.asarray(t))

    def phase(self, t):
        return np.exp(-1j * (1 + 2 * self.sigma) * np.asarray(t))

    @property
    def regular(self) -> bool:
        return is_krein_adler_regular(self.gen.maya)

    def _numeric(self, order: int):
        return _numeric_derivs(self.gen, order)

    def __call__(self, x, t, order: int = 0, shift: float = 0.0):
        """Phi (or its order-th x derivative) at real x, time t; values are scaled by exp(-shift)."""
        f = self._numeric(order)[order]
        return self.phase(t) * f(np.asarray(x, dtype=float), self.z(t), shift)

    def log_scale(self, x, t):
        """Re of the gaussian exponent, for overflow-safe scaling."""
        return np.real(self._numeric(0)[0].log_scale(np.asarray(x, dtype=float), self.z(t)))

    def apply(self, op: LinearDiffOp, x, t):
        """(op Phi)(x, t) via exact x-derivatives and numeric coefficients."""
        vals = 0
        for j, c in enumerate(op.coeffs):
            if c == 0 or (isinstance(c, RationalFn) and c.is_zero()):
                continue
            cf = compile_numeric(c if isinstance(c, RationalFn) else RationalFn.const(c))
            vals = vals + cf(np.asarray(x, dtype=float), 0.0) * self(x, t, order=j)
        return vals


_NUMERIC_CACHE: dict = {}


def _numeric_derivs(gf: GeneratingFunction, order: int):
    key = (gf.partition, order)
    if key not in _NUMERIC_CACHE:
        fs = gf.value.derivatives(order)
        _NUMERIC_CACHE[key] = [compile_numeric(f) for f in fs]
    return _NUMERIC_CACHE[key]


def ccs(alpha: float) -> CoherentState:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return CoherentState(psi0_gf(), float(alpha), 0)


def ecs(lam: Partition, alpha: float, sigma: int = 0) -> CoherentState:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    gf = gen_fn(lam, sigma)
    return CoherentState(gf, float(alpha), gf.sigma)


def schrodinger_residual(state: CoherentState, x: float, t: float, dt: float) -> complex:
    """i (Phi(t+dt) - Phi(t-dt)) / (2 dt) - (T_M Phi)(x, t)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    dphi = (state(x, t + dt) - state(x, t - dt)) / (2 * dt)
    return complex(1j * dphi - state.apply(hamiltonian(state.gen.maya), x, t))


def annihilator_numeric_residual(state: CoherentState, q: int, x: float, t: float) -> tuple[float, float]:
    """(|L_q Phi - alpha^q e^{-2iqt} Phi|, |alpha^q Phi|) at one point."""
    L = ladder(state.gen.maya, q).op
    lhs = state.apply(L, x, t)
    phi = state(x, t)
    rhs = state.alpha**q * np.exp(-2j * q * t) * phi
    return float(abs(lhs - rhs)), float(abs(state.alpha**q * phi))


# -- uncertainty ----------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    half_width: float | None = None  # default alpha + 12
    panels: int = 16
    nodes: int = 24
    tol: float = 1e-10
    max_refinements: int = 8


@dataclass
class UncertaintyReport:
    time_grid: list
    var_x: list
    var_p: list
    product: list
    alpha: float
    partition: Partition
    quadrature_config: tuple
    error_estimates: list = field(default_factory=list)

    def max_deviation(self) -> float:
        return max(abs(p - 0.25) for p in self.product)

    def rows(self):
        lam = " ".join(map(str, self.partition.parts))
        for t, vx, vp, pr in zip(self.time_grid, self.var_x, self.var_p, self.product):
            yield (t, vx, vp, pr, self.alpha, lam)


class QuadratureError(RuntimeError):
    pass


def _composite_nodes(a: float, b: float, panels: int, nodes: int):
    g, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    h = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    X = (mid[:, None] + h[:, None] * g[None, :]).ravel()
    W = (h[:, None] * w[None, :]).ravel()
    return X, W


def _moments(state: CoherentState, t: float, X, W):
    """Variances of x and p at time t on the given nodes."""
    shift = float(np.max(state.log_scale(X, t)))
    f0 = state(X, t, 0, shift)
    f1 = state(X, t, 1, shift)
    f2 = state(X, t, 2, shift)
    c = np.conj(f0)
    rho = np.real(f0 * c)
    norm = W @ rho
    ex = (W @ (X * rho)) / norm
    ex2 = (W @ (X * X * rho)) / norm
    var_x = ex2 - ex**2
    d2 = np.real(W @ (f2 * c)) / norm
    ip = (W @ (1j * f1 * c)) / norm
    var_p = -d2 - np.real(ip * ip)
    return var_x, var_p


def uncertainty_at(state: CoherentState, t: float, cfg: QuadratureConfig = QuadratureConfig()):
    """(var_x, var_p, error estimate) at one time, refining panels x2 until converged."""
    L = cfg.half_width if cfg.half_width is not None else state.alpha + 12.0
    panels = cfg.panels
    prev = None
    for _ in range(cfg.max_refinements + 1):
        X, W = _composite_nodes(-L, L, panels, cfg.nodes)
        vx, vp = _moments(state, t, X, W)
        if prev is not None:
            err = max(abs(vx - prev[0]) / abs(vx), abs(vp - prev[1]) / abs(vp))
            if err < cfg.tol:
                return vx, vp, err
        prev = (vx, vp)
        panels *= 2
    raise QuadratureError(f"quadrature did not converge at t={t}: last relative change {err:.3e}")


def uncertainty(
    lam: Partition,
    alpha: float,
    time_grid,
    cfg: QuadratureConfig = QuadratureConfig(),
    sigma: int = 0,
) -> UncertaintyReport:
    M = translate(maya_from_partition(lam), sigma)
    if not is_krein_adler_regular(M):
        raise ValueError(f"{M} is not Krein-Adler regular; the potential is singular on the real line")
    state = ecs(lam, alpha, sigma)
    ts, vxs, vps, prods, errs = [], [], [], [], []
    for t in time_grid:
        vx, vp, err = uncertainty_at(state, float(t), cfg)
        ts.append(float(t))
        vxs.append(float(vx))
        vps.append(float(vp))
        prods.append(float(vx * vp))
        errs.append(float(err))
    L = cfg.half_width if cfg.half_width is not None else alpha + 12.0
    return UncertaintyReport(ts, vxs, vps, prods, float(alpha), lam, (L, cfg.panels, cfg.tol), errs)


def time_grid(start: float, stop: float, count: int) -> list[float]:
    if count < 2:
        raise ValueError("a time grid needs at least two points")
    return list(np.linspace(start, stop, count))


def trapezoid_oracle(state: CoherentState, t: float, half_width: float, n: int = 40001):
    """Independent dense trapezoid estimate of (var_x, var_p), p from a spectral-free finite difference."""
    X = np.linspace(-half_width, half_width, n)
    shift = float(np.max(state.log_scale(X, t)))
    f = state(X, t, 0, shift)
    h = X[1] - X[0]
    rho = np.abs(f) ** 2
    norm = np.trapezoid(rho, X)
    ex = np.trapezoid(X * rho, X) / norm
    var_x = np.trapezoid(X * X * rho, X) / norm - ex**2
    df = np.gradient(f, h, edge_order=2)
    ep2 = np.trapezoid(np.abs(df) ** 2, X) / norm
    ep = np.real(np.trapezoid(-1j * df * np.conj(f), X) / norm)
    return var_x, ep2 - ep**2


__all__ = [
    "GeneratingFunction",
    "CoherentState",
    "UncertaintyReport",
    "QuadratureConfig",
    "QuadratureError",
    "psi0_gf",
    "gen_fn",
    "shifted_schur_ratio",
    "z_coefficient",
    "expansion_rule",
    "expansion_coefficients",
    "tpsi0_check",
    "eigenrelation_residual",
    "annihilator_residual",
    "annihilator_eigencheck",
    "ccs",
    "ecs",
    "schrodinger_residual",
    "annihilator_numeric_residual",
    "uncertainty_at",
    "uncertainty",
    "time_grid",
    "trapezoid_oracle",
]
