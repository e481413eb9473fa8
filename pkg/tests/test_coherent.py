import math
from fractions import Fraction

import numpy as np
import pytest

from ecstates.coherent import (
    QuadratureConfig,
    annihilator_eigencheck,
    annihilator_numeric_residual,
    ccs,
    ecs,
    eigenrelation_residual,
    expansion_coefficients,
    expansion_rule,
    gen_fn,
    psi0_gf,
    schrodinger_residual,
    tpsi0_check,
    trapezoid_oracle,
    uncertainty,
    uncertainty_at,
    z_coefficient,
)
from ecstates.hermite import psi
from ecstates.partition_maya import MayaDiagram, Partition
from ecstates.rational_ext import eigenfunction
from ecstates.symbolic import ExpPolyFn, MultiPoly, RationalFn

LAM22 = Partition((2, 2))
EMPTY = Partition()
SMALL = [(), (1,), (2,), (1, 1), (2, 2), (3, 1)]


def xz_poly(terms):
    return RationalFn.from_poly(MultiPoly.from_terms(terms, ("x", "z")))


class TestGeneratingFunction:
    def test_psi0_coefficients(self):
        gf = psi0_gf()
        for n in range(9):
            want = psi(n) * ExpPolyFn.rational(RationalFn.const(Fraction(1, 2**n * math.factorial(n))))
            assert z_coefficient(gf, n) == want

    def test_psi0_identities(self):
        assert tpsi0_check().ok

    def test_empty_reduces_to_psi0(self):
        assert gen_fn(EMPTY).value == psi0_gf().value

    def test_example_prefactor(self):
        D = xz_poly({(4, 0): 4, (0, 0): 3})
        zi = RationalFn.one() / RationalFn.z()
        want = 1 - 16 * RationalFn.x() ** 3 * zi / D + 12 * (2 * RationalFn.x() ** 2 + 1) * zi**2 / D
        assert gen_fn(LAM22).prefactor == want

    def test_single_box(self):
        want = (RationalFn.x() - 1 / RationalFn.z()) / RationalFn.x()
        assert gen_fn(Partition((1,))).prefactor == want

    def test_sigma_does_not_change_value(self):
        assert gen_fn(LAM22, 2).value == gen_fn(LAM22, 0).value
        assert gen_fn(LAM22, 2).maya == MayaDiagram.from_index_set((2, 3))


class TestExpansion:
    def test_rule_examples(self):
        M = MayaDiagram.from_index_set((2, 3))
        assert expansion_rule(M, LAM22, 0) == 6 * 4
        assert expansion_rule(M, LAM22, 4) == Fraction(1, 12) / 4
        assert expansion_rule(MayaDiagram.trivial(), EMPTY, 3) == Fraction(1, 8 * 6)

    def test_example_m0(self):
        M = MayaDiagram.from_index_set((2, 3))
        got = z_coefficient(gen_fn(LAM22, 2), -2)
        assert got == eigenfunction(M, 0) * ExpPolyFn.rational(RationalFn.const(24))

    @pytest.mark.parametrize("lam", SMALL)
    def test_series(self, lam):
        r = expansion_coefficients(Partition(lam), 8)
        assert r.ok, r.detail

    def test_series_at_other_label(self):
        assert expansion_coefficients(LAM22, 8, sigma=2).ok


class TestExactEigenrelations:
    @pytest.mark.parametrize("lam", SMALL)
    def test_hamiltonian(self, lam):
        assert eigenrelation_residual(Partition(lam)).is_zero()
        assert eigenrelation_residual(Partition(lam), 3).is_zero()

    @pytest.mark.parametrize("lam", SMALL)
    def test_annihilators(self, lam):
        lam = Partition(lam)
        qc = max(lam.part(1) + lam.length, 1)
        for q in (qc, qc + 1):
            r = annihilator_eigencheck(lam, q)
            assert r.ok, r.detail

    def test_classical_lowering(self):
        assert annihilator_eigencheck(EMPTY, 1).ok

    @pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 2), (3, 1)])
    def test_negative_control(self, lam):
        lam = Partition(lam)
        r = annihilator_eigencheck(lam, lam.part(1) + lam.length - 1)
        assert not r.ok

    def test_example_q3_fails(self):
        assert not annihilator_eigencheck(LAM22, 3, sigma=2).ok


class TestNumericStates:
    def test_ecs_empty_is_ccs(self):
        a, b = ccs(3.0), ecs(EMPTY, 3.0)
        for x, t in [(0.1, 0.2), (-1.3, 2.0)]:
            assert a(x, t) == pytest.approx(b(x, t))

    def test_ccs_closed_form(self):
        s = ccs(2.0)
        x, t = 0.4, 0.9
        z = 2.0 * np.exp(-2j * t)
        want = np.exp(-1j * t) * np.exp(-((x - z) ** 2) / 2 + z * z / 4)
        assert s(x, t) == pytest.approx(want)

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            ccs(0.0)

    def test_ccs_lowering(self):
        s = ccs(2.5)
        for x, t in [(0.3, 0.1), (-0.8, 1.7), (1.9, 2.9)]:
            lhs, scale = annihilator_numeric_residual(s, 1, x, t)
            assert lhs < 1e-12 * max(scale, 1.0)

    def test_ecs_large_x_ratio(self):
        # at t = 0 the prefactor is 1 - 16x^3/(alpha (4x^4+3)) + O(1/alpha^2)
        alpha, x = 40.0, 2.0
        ratio = ecs(LAM22, alpha)(x, 0.0) / ccs(alpha)(x, 0.0)
        lead = 1 - 16 * x**3 / (alpha * (4 * x**4 + 3))
        assert abs(ratio - lead) < 12 * (2 * x * x + 1) / (4 * x**4 + 3) / alpha**2 + 1e-12

    def test_schrodinger_second_order(self):
        s = ecs(LAM22, 4.0, 2)
        r1 = schrodinger_residual(s, 0.7, 0.3, 1e-3)
        r2 = schrodinger_residual(s, 0.7, 0.3, 5e-4)
        assert abs(r1) / abs(r2) == pytest.approx(4.0, rel=1e-2)

    def test_schrodinger_ccs(self):
        s = ccs(2.0)
        r = schrodinger_residual(s, 0.2, 0.5, 1e-3)
        assert abs(r) < 1e-3

    def test_schrodinger_bad_dt(self):
        with pytest.raises(ValueError):
            schrodinger_residual(ccs(1.0), 0.0, 0.0, 0.0)

    @pytest.mark.parametrize("q", [4, 5, 6, 7])
    def test_example_annihilators_numeric(self, q):
        s = ecs(LAM22, 4.0, 2)
        rng = np.random.default_rng(q)
        for _ in range(3):
            x, t = rng.uniform(-3, 3), rng.uniform(0, np.pi)
            res, scale = annihilator_numeric_residual(s, q, x, t)
            assert res < 1e-8 * scale


class TestUncertainty:
    def test_ccs_saturates(self):
        rep = uncertainty(EMPTY, 2.0, np.linspace(0, np.pi, 7))
        assert max(abs(p - 0.25) for p in rep.product) < 1e-9
        assert all(abs(vx - 0.5) < 1e-9 for vx in rep.var_x)

    def test_product_is_product(self):
        rep = uncertainty(LAM22, 4.0, [0.0, 0.5])
        for vx, vp, p in zip(rep.var_x, rep.var_p, rep.product):
            assert p == vx * vp

    def test_label_independent(self):
        a = uncertainty(LAM22, 4.0, [0.3], sigma=0).product[0]
        b = uncertainty(LAM22, 4.0, [0.3], sigma=2).product[0]
        assert a == pytest.approx(b, rel=1e-10)

    def test_periodic(self):
        s = ecs(LAM22, 8.0)
        for t in (0.2, 1.1):
            a = uncertainty_at(s, t)
            b = uncertainty_at(s, t + np.pi)
            assert a[0] * a[1] == pytest.approx(b[0] * b[1], rel=1e-9)

    def test_against_trapezoid_oracle(self):
        s = ecs(LAM22, 4.0, 2)
        vx, vp, _ = uncertainty_at(s, 0.0)
        ox, op = trapezoid_oracle(s, 0.0, 16.0)
        assert vx == pytest.approx(ox, rel=1e-8)
        assert vp == pytest.approx(op, rel=1e-6)

    def test_regression_baseline(self):
        # alpha = 4, t = 0; the stored value agrees with the dense trapezoid oracle at 2x resolution
        baseline = 0.2500440832088362
        s = ecs(LAM22, 4.0, 2)
        vx, vp, _ = uncertainty_at(s, 0.0)
        assert vx * vp == pytest.approx(baseline, rel=1e-10)
        vx2, vp2, _ = uncertainty_at(s, 0.0, QuadratureConfig(half_width=20.0, nodes=32, panels=8))
        assert vx2 * vp2 == pytest.approx(baseline, rel=1e-10)
        ox, op = trapezoid_oracle(s, 0.0, 16.0, n=80001)
        assert ox * op == pytest.approx(baseline, rel=1e-6)

    def test_non_regular_rejected(self):
        with pytest.raises(ValueError):
            uncertainty(Partition((1,)), 4.0, [0.0])

    def test_heisenberg_bound_sampled(self):
        rep = uncertainty(Partition((1, 1)), 3.0, np.linspace(0, np.pi, 9))
        assert min(rep.product) >= 0.25 - 1e-7

    def test_monotone_in_alpha(self):
        grid = np.linspace(0, np.pi, 21)
        devs = [uncertainty(LAM22, a, grid).max_deviation() for a in (4.0, 8.0, 16.0)]
        assert devs[0] > devs[1] > devs[2]
