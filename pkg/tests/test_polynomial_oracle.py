"""Moment-side referee: exact polynomials built directly from moment data."""

from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moprec.errors import DomainError, NonNormalIndexError, RangeError
from moprec.measures_catalog import DiscreteMeasure, bessel_stepline, moments, random_system
from moprec.polynomial_oracle import (
    POLY_ONE,
    POLY_X,
    POLY_ZERO,
    MomentTable,
    Poly,
    eval_chain,
    marginal_oracle,
    mop_from_moments,
    nn_oracle,
    orthogonality_residuals,
    stepline_oracle,
)

BESSEL_MOMENTS = MomentTable(
    (
        tuple(F(factorial(k)) ** 2 for k in range(26)),
        tuple(F(factorial(k + 1)) * factorial(k) / 2 for k in range(26)),
    )
)


def test_poly_basics():
    p = Poly((F(1), F(2), F(1)))  # 1 + 2x + x^2
    q = Poly((F(-1), F(1)))  # x - 1
    assert p.degree == 2 and q.degree == 1
    assert p.is_monic and not Poly((F(0), F(2))).is_monic
    assert (p + q).coeff(0) == 0
    assert (p - p) == POLY_ZERO
    assert (-q)(F(2)) == -1
    assert q.times_x() == Poly((F(0), F(-1), F(1)))
    assert (p * q) == Poly((F(-1), F(-1), F(1), F(1)))
    assert p * F(0) == POLY_ZERO
    assert Poly((F(1), F(0), F(0))) == POLY_ONE  # trailing zeros normalized


@given(
    pc=st.lists(st.fractions(max_denominator=20), min_size=1, max_size=5),
    qc=st.lists(st.fractions(max_denominator=20), min_size=1, max_size=5),
    x=st.fractions(max_denominator=20),
)
@settings(max_examples=60, deadline=None)
def test_poly_product_evaluates_pointwise(pc, qc, x):
    p, q = Poly(tuple(pc)), Poly(tuple(qc))
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)


def test_moment_table_range_checked():
    mt = MomentTable(((F(1), F(2)),))
    assert mt.m(0, 1) == 2
    with pytest.raises(RangeError):
        mt.m(0, 2)
    with pytest.raises(RangeError):
        mt.m(1, 0)


def test_mop_monic_and_orthogonal():
    mus = random_system(3, r=2, size=6)
    mt = MomentTable.from_measures(mus, 11)
    for nvec in [(0, 0), (1, 0), (2, 1), (3, 3), (1, 4)]:
        p = mop_from_moments(mt, nvec)
        assert p.is_monic and p.degree == sum(nvec)
        for i in range(2):
            assert all(v == 0 for v in orthogonality_residuals(p, mt, i, nvec[i] - 1))


def test_mop_axis_indices_reduce_to_classical():
    # on the axes only one measure is active, so the classical orthogonal
    # polynomial of that measure must come out
    mus = random_system(8, r=2, size=5)
    mt = MomentTable.from_measures(mus, 9)
    for i in range(2):
        single = MomentTable((moments(mus[i], 9),))
        for n in range(1, 4):
            nvec = (n, 0) if i == 0 else (0, n)
            assert mop_from_moments(mt, nvec) == mop_from_moments(single, (n,))


def test_mop_identical_measures_not_normal_off_axis():
    # duplicated measures duplicate orthogonality rows: the off-axis system
    # is singular, which is the moment-side face of the inverse sweep failing
    mu = DiscreteMeasure((0, 1, 3, 6), (1, 2, 1, 2))
    mt = MomentTable((moments(mu, 9), moments(mu, 9)))
    with pytest.raises(NonNormalIndexError):
        mop_from_moments(mt, (1, 1))


def test_mop_non_normal_index():
    # a 2-point measure has no degree-3 orthogonal polynomial
    mu = DiscreteMeasure((0, 1), (1, 1))
    mt = MomentTable((moments(mu, 9),))
    mop_from_moments(mt, (2,))  # fine: degree = support size
    with pytest.raises(NonNormalIndexError) as exc:
        mop_from_moments(mt, (3,))
    assert exc.value.index == (3,)


def test_nn_oracle_satisfies_recurrence():
    mus = random_system(9, r=2, size=6)
    mt = MomentTable.from_measures(mus, 13)
    for nvec in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]:
        avec, bvec = nn_oracle(mt, nvec)
        p = mop_from_moments(mt, nvec)
        for k in range(2):
            up = list(nvec)
            up[k] += 1
            rhs = mop_from_moments(mt, tuple(up)) + bvec[k] * p
            for j in range(2):
                if nvec[j] >= 1:
                    dn = list(nvec)
                    dn[j] -= 1
                    rhs = rhs + avec[j] * mop_from_moments(mt, tuple(dn))
            assert p.times_x() == rhs
        assert all(avec[j] == 0 for j in range(2) if nvec[j] == 0)


def test_marginal_oracle_symmetric_measure():
    mu = DiscreteMeasure((-1, 1), (F(1, 2), F(1, 2)))
    marg = marginal_oracle(moments(mu, 3), 1)
    assert marg.b == (0, 0)
    assert marg.a_sq == (0, 1)
    with pytest.raises(NonNormalIndexError):
        marginal_oracle(moments(mu, 5), 2)  # past the support size


def test_stepline_oracle_level0_matches_catalog():
    got = stepline_oracle(BESSEL_MOMENTS, None, 0, 9)
    want = bessel_stepline(0, 0, 9)
    for s in range(10):
        assert got.beta[s] == want.beta[s]
        assert s < 1 or got.gamma[s] == want.gamma[s]
        assert s < 2 or got.delta[s] == want.delta[s]


def test_eval_chain_stepline_matches_mop():
    t0 = stepline_oracle(BESSEL_MOMENTS, None, 0, 5)
    # even index 2n sits at multi-index (n, n), odd at (n+1, n)
    assert eval_chain(t0, 4) == mop_from_moments(BESSEL_MOMENTS, (2, 2))
    assert eval_chain(t0, 5) == mop_from_moments(BESSEL_MOMENTS, (3, 2))
    with pytest.raises(DomainError):
        eval_chain(t0, 3, path=(0, 1, 0))


class _OracleGrid:
    """Minimal grid protocol shim backed by nn_oracle."""

    def __init__(self, table, r):
        self.table = table
        self.r = r

    def a(self, nvec, i):
        return nn_oracle(self.table, nvec)[0][i]

    def b(self, nvec, i):
        return nn_oracle(self.table, nvec)[1][i]


def test_eval_chain_path_independent():
    mus = random_system(21, r=3, size=6)
    mt = MomentTable.from_measures(mus, 11)
    grid = _OracleGrid(mt, 3)
    target = (2, 1, 1)
    direct = mop_from_moments(mt, target)
    assert eval_chain(grid, target) == direct
    assert eval_chain(grid, path=(0, 1, 2, 0)) == direct
    assert eval_chain(grid, path=(2, 0, 0, 1)) == direct
    with pytest.raises(DomainError):
        eval_chain(grid, (1, 1, 0), path=(0, 1, 2))
    with pytest.raises(DomainError):
        eval_chain(grid, path=(0, 3))


def test_monicity_everywhere():
    mus = random_system(14, r=2, size=7)
    mt = MomentTable.from_measures(mus, 13)
    for total in range(6):
        for n1 in range(total + 1):
            p = mop_from_moments(mt, (n1, total - n1))
            assert p.is_monic and p.degree == total
