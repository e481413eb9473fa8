import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from conftest import partitions
from ecstates.partition_maya import Partition, maya_from_partition, partitions_up_to
from ecstates.schur_vertex import (
    bell,
    bell_multinomial,
    hermite_times,
    miwa_shift,
    schur,
    schur_via_raising,
    schur_wronskian,
    specialize,
    vertex_X,
    vertex_X_sum,
    vertex_expansion,
)
from ecstates.symbolic import MultiPoly, t_names
from ecstates.verify import fermionic_relation, random_t_poly

ONE = MultiPoly.const(1, t_names(1))
LAM22 = Partition((2, 2))


def t(k, n=4):
    return MultiPoly.var(f"t{k}", t_names(n))


class TestBell:
    def test_small(self):
        assert bell(0) == MultiPoly.const(1, t_names(1))
        assert bell(2).render() == "1/2*t1^2 + t2"
        assert bell(3).render() == "1/6*t1^3 + t1*t2 + t3"

    def test_negative_is_zero(self):
        assert bell(-1, 3).is_zero()

    def test_recurrence_vs_multinomial(self):
        for k in range(0, 11):
            assert bell(k) == bell_multinomial(k).lift(t_names(max(k, 1)))

    def test_derivative_ladder(self):
        for j in range(1, 11):
            for i in range(1, j + 1):
                assert bell(j).diff(f"t{i}") == bell(j - i, j)


class TestSchur:
    def test_examples(self):
        assert schur(Partition()) == MultiPoly.const(1, t_names(1))
        assert schur(Partition((1,))).render() == "t1"
        assert schur(LAM22).render() == "1/12*t1^4 - t1*t3 + t2^2"

    def test_wronskian_and_raising_all_up_to_8(self):
        for lam in partitions_up_to(8):
            S = schur(lam)
            assert schur_wronskian(lam) == S
            assert schur_via_raising(lam) == S

    def test_weighted_homogeneous(self):
        for lam in partitions_up_to(6):
            S = schur(lam)
            assert S.weighted_degree() == lam.weight


class TestVertex:
    def test_on_one(self):
        assert vertex_X(2, ONE) == schur(Partition((2,))).lift(t_names(2))
        assert vertex_X(-1, ONE).is_zero()
        assert vertex_X(0, ONE) == MultiPoly.const(1, t_names(1))

    def test_raising_11(self):
        assert vertex_X(1, schur(Partition((1,)))).render() == "1/2*t1^2 - t2"

    def test_miwa_shift(self):
        assert miwa_shift(ONE) == ONE
        z = MultiPoly.var("z", ("z",))
        assert miwa_shift(t(1, 1)) == t(1, 1) - MultiPoly(z.poly.ring.one, -1)
        shifted = specialize(miwa_shift(schur(LAM22)), hermite_times())
        x = MultiPoly.var("x", ("x", "z"))
        zinv = MultiPoly(MultiPoly.const(1, ("x", "z")).poly, -1)
        want = (x**4).scale(Fraction(1, 12)) + Fraction(1, 16) - (x**3).scale(Fraction(1, 3)) * zinv
        want = want + ((x**2).scale(Fraction(1, 2)) + Fraction(1, 4)) * zinv * zinv
        assert shifted == want

    @given(st.integers(-3, 4), st.integers(0, 10**6))
    def test_two_routes_agree(self, m, seed):
        P = random_t_poly(random.Random(seed))
        assert vertex_X(m, P) == vertex_X_sum(m, P)

    def test_fermionic_relation_sample(self):
        results = list(fermionic_relation(samples=3, seed=1))
        assert all(r.ok for r in results), [r for r in results if not r.ok]

    @given(partitions(max_weight=6), st.integers(-6, 6))
    def test_action_on_schur(self, lam, m):
        """X_m S_lam = sign S_{m |> lam}, or 0 when m is a member of M_lam."""
        got = vertex_X(m, schur(lam))
        M = maya_from_partition(lam)
        if m in M:
            assert got.is_zero()
            return
        [(mm, sign, mu)] = vertex_expansion(lam, range(m, m + 1))
        want = schur(mu)
        names = tuple(sorted(set(got.variables) | set(want.variables), key=lambda s: int(s[1:])))
        assert got.lift(names) == want.lift(names).scale(sign)

    def test_vertex_expansion_members_excluded(self):
        terms = vertex_expansion(Partition(), range(0, 3))
        assert [(m, s, mu.parts) for m, s, mu in terms] == [(0, 1, ()), (1, 1, (1,)), (2, 1, (2,))]
        assert all(m != 0 for m, _, _ in vertex_expansion(LAM22, range(-2, 3)))
        [(m, s, mu)] = [e for e in vertex_expansion(LAM22, range(2, 3))]
        assert s == 1
