"""Exact identity suites, grouped so the CLI and the acceptance run share them."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .checks import CheckResult
from .coherent import annihilator_eigencheck, eigenrelation_residual, expansion_coefficients, tpsi0_check
from .hermite import normalized_pw, normalized_pw_via_schur
from .partition_maya import (
    MayaDiagram,
    Partition,
    bound_state_indices,
    is_q_core,
    maya_from_partition,
    partitions_up_to,
    threshold_degree,
    translate,
)
from .rational_ext import (
    eigenfunction,
    gamma,
    hamiltonian,
    intertwining_residual,
    kernel_indices,
    ladder,
    ladder_residual,
)
from .schur_vertex import schur, schur_via_raising, schur_wronskian, vertex_X
from .symbolic import MultiPoly, t_names

SMALL_PARTITIONS = (
    Partition(()),
    Partition((1,)),
    Partition((2,)),
    Partition((1, 1)),
    Partition((2, 2)),
    Partition((3, 1)),
)


@dataclass
class SuiteReport:
    name: str
    results: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.ok]

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": len(self.results),
            "failures": [r.to_json() for r in self.failures()],
            "seconds": round(self.seconds, 3),
        }


def _timed(name, fn, *args, **kw) -> SuiteReport:
    t0 = time.perf_counter()
    results = list(fn(*args, **kw))
    return SuiteReport(name, results, time.perf_counter() - t0)


def random_t_poly(rng: random.Random, max_degree: int = 4, nvars: int = 4, nterms: int = 4) -> MultiPoly:
    """A random polynomial in t1..t_nvars of graded degree <= max_degree (t_k has degree k)."""
    names = t_names(nvars)
    terms = {}
    for _ in range(nterms):
        budget = rng.randint(0, max_degree)
        e = [0] * nvars
        while budget:
            k = rng.randint(1, min(budget, nvars))
            e[k - 1] += 1
            budget -= k
        terms[tuple(e)] = terms.get(tuple(e), 0) + rng.choice([-3, -2, -1, 1, 2, 3])
    return MultiPoly.from_terms(terms, names)


def fermionic_relation(m_range=range(-3, 5), samples: int = 25, seed: int = 7):
    """(X_m X_n + X_{n-1} X_{m+1}) P = 0."""
    rng = random.Random(seed)
    polys = [random_t_poly(rng) for _ in range(samples)]
    for i, P in enumerate(polys):
        bad = []
        memo: dict = {}

        def XX(a, b):
            if b not in memo:
                memo[b] = vertex_X(b, P)
            if (a, b) not in memo:
                memo[(a, b)] = vertex_X(a, memo[b])
            return memo[(a, b)]

        for m in m_range:
            for n in m_range:
                r = XX(m, n) + XX(n - 1, m + 1)
                if not r.is_zero():
                    bad.append((m, n))
        yield CheckResult(f"X_m X_n + X_(n-1) X_(m+1) on sample {i}", not bad, f"failed at {bad[:3]}" if bad else "")


def schur_routes(max_weight: int = 8):
    for lam in partitions_up_to(max_weight):
        S = schur(lam)
        ok_w = schur_wronskian(lam) == S
        ok_r = schur_via_raising(lam) == S
        detail = "" if ok_w and ok_r else f"wronskian={ok_w} raising={ok_r}"
        yield CheckResult(f"schur routes {lam}", ok_w and ok_r, detail)


def pseudo_wronskian_identities(max_weight: int = 8, shifts=range(-4, 5)):
    for lam in partitions_up_to(max_weight):
        M = maya_from_partition(lam)
        ref = normalized_pw_via_schur(lam)
        bad = [n for n in shifts if normalized_pw(translate(M, n)) != ref]
        yield CheckResult(f"normalized pseudo-Wronskian {lam}", not bad, f"shifts {bad}" if bad else "")


def _virtual(M: MayaDiagram, count: int) -> list[int]:
    out, m = [], M.window()[1] - 1
    while len(out) < count:
        if m in M:
            out.append(m)
        m -= 1
    return out


def _ladder_degrees(lam: Partition) -> list[int]:
    qc = max(threshold_degree(lam), 1)
    return [qc, qc + 1]


def extension_identities(lams=SMALL_PARTITIONS, seed: int = 11):
    rng = random.Random(seed)
    for lam in lams:
        M = maya_from_partition(lam)
        T = hamiltonian(M)
        ms = bound_state_indices(M, 6) + _virtual(M, 3)
        bad = []
        for m in ms:
            psi = eigenfunction(M, m)
            r = T.apply(psi) - psi * _const(2 * m + 1)
            if not r.is_zero():
                bad.append(m)
        yield CheckResult(f"eigenrelation {lam}", not bad, f"m={bad}" if bad else "")

        K = tuple(sorted(rng.sample(range(-3, 6), rng.randint(1, 3))))
        r = intertwining_residual(M, K)
        yield CheckResult(f"intertwining {lam} K={K}", r.is_zero())

        for q in _ladder_degrees(lam):
            L = ladder(M, q)
            yield CheckResult(f"ladder intertwining {lam} q={q}", ladder_residual(M, q).is_zero())
            bad = [k for k in L.kernel_indices if not L.apply(eigenfunction(M, k)).is_zero()]
            yield CheckResult(f"kernel {lam} q={q}", not bad, f"k={bad}" if bad else "")
            bad = []
            for m in bound_state_indices(M, 6):
                image = L.apply(eigenfunction(M, m))
                want = eigenfunction(M, m - q) * _const(Fraction(2) ** q * gamma(M, q, m))
                if image != want:
                    bad.append(m)
            yield CheckResult(f"ladder action 2^q gamma {lam} q={q}", not bad, f"m={bad}" if bad else "")


def _const(c):
    from .symbolic import ExpPolyFn, RationalFn

    return ExpPolyFn.rational(RationalFn.const(c))


def generating_function_identities(lams=SMALL_PARTITIONS, negative_control: bool = True):
    yield tpsi0_check()
    for lam in lams:
        r = eigenrelation_residual(lam)
        yield CheckResult(f"generating function eigenrelation {lam}", r.is_zero())
        yield expansion_coefficients(lam, 8)
        for q in _ladder_degrees(lam):
            yield annihilator_eigencheck(lam, q)
        if negative_control:
            q = threshold_degree(lam) - 1
            if q != 0:
                M = maya_from_partition(lam)
                res = annihilator_eigencheck(lam, q)
                ok = (not res.ok) and not is_q_core(M, q)
                yield CheckResult(f"negative control {lam} q={q}", ok, "residual nonzero" if ok else res.detail)


SUITES = {
    "fermionic": fermionic_relation,
    "schur": schur_routes,
    "pseudo_wronskian": pseudo_wronskian_identities,
    "extension": extension_identities,
    "generating_function": generating_function_identities,
}


def run_all() -> list[SuiteReport]:
    return [_timed(name, fn) for name, fn in SUITES.items()]


def verify_partition(lam: Partition, q: int | None = None) -> list[CheckResult]:
    """Identity checks for one partition; an explicit q adds an annihilator check at that degree."""
    M = maya_from_partition(lam)
    out = [
        CheckResult(f"schur wronskian {lam}", schur_wronskian(lam) == schur(lam)),
        CheckResult(f"schur raising {lam}", schur_via_raising(lam) == schur(lam)),
        CheckResult(
            f"pseudo-Wronskian vs schur {lam}",
            all(normalized_pw(translate(M, n)) == normalized_pw_via_schur(lam) for n in range(-2, 3)),
        ),
    ]
    out += list(extension_identities([lam]))
    out += list(generating_function_identities([lam], negative_control=False))
    if q is not None:
        out.append(annihilator_eigencheck(lam, q))
    return out

