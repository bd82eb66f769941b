"""Forward direction: the coefficient grid and the two marginal recurrences."""

from fractions import Fraction as F
from math import factorial

import pytest

from moprec.errors import DomainError, RangeError
from moprec.measures_catalog import bessel_stepline, moments, random_pair
from moprec.nearest_neighbor import (
    MarginalRecurrence,
    NNGrid,
    marginal_mu1,
    marginal_mu2,
    marginal_positive,
    nn_from_shifts,
)
from moprec.numerics import sqrt_real, to_decimal
from moprec.polynomial_oracle import MomentTable, nn_oracle, stepline_oracle
from moprec.stepline import Axis, build_family_e1, build_family_e2, seed_c00

BESSEL_MOMENTS = MomentTable(
    (
        tuple(F(factorial(k)) ** 2 for k in range(30)),
        tuple(F(factorial(k + 1)) * factorial(k) / 2 for k in range(30)),
    )
)

# the printed 20-digit reference table for the alpha = nu = 0 pair:
# rows n = 0..10 of (a_n, b_n), a_0 shown as blank
REFERENCE_ROWS = [
    (None, "1.0000000000000000000"),
    ("1.7320508075688772935", "9.6666666666666666667"),
    ("8.5374989832437982487", "28.186991869918699187"),
    ("20.265386777687130909", "56.571895845674401834"),
    ("36.925214834648582674", "94.823932737801348717"),
    ("58.518554562959399225", "142.94410230778264607"),
    ("85.045955898223602580", "200.93289913274452209"),
    ("116.50767686120789662", "268.79060407933245800"),
    ("152.90385976282648737", "346.51739199614374938"),
    ("194.23459164836084172", "434.11337913848760712"),
    ("240.49992974325090503", "531.57864673346522330"),
]


def _bessel_family(depth, max_level=None):
    t0 = bessel_stepline(0, 0, 2 * depth + 1)
    return build_family_e1(t0, max_level if max_level is not None else depth, depth)


def test_reference_table_20_digits():
    marg = marginal_mu1(_bessel_family(10), 10)
    for n, (a_str, b_str) in enumerate(REFERENCE_ROWS):
        assert to_decimal(marg.b[n], 20) == b_str
        if n:
            assert to_decimal(sqrt_real(marg.a_sq[n], 20), 20) == a_str


def test_spot_anchors_exact():
    marg = marginal_mu1(_bessel_family(2), 2)
    assert marg.a_sq[1] == 3
    assert marg.b[1] == F(29, 3)
    assert marg.b[2] == F(3467, 123)


def test_mu2_marginal_with_determined_seed():
    t0 = bessel_stepline(0, 0, 13)
    # the free parameter from the second weight's first two moments
    seed = seed_c00(F(1, 2), F(1), t0.beta[0])
    assert seed == 1
    fam2 = build_family_e2(t0, 6, 6, seed)
    marg = marginal_mu2(fam2, 6)
    assert marg.b[0] == 2
    # must agree with the moment-side three-term data of mu2
    from moprec.polynomial_oracle import marginal_oracle

    want = marginal_oracle(BESSEL_MOMENTS.rows[1], 6)
    assert marg.b == want.b and marg.a_sq == want.a_sq


def test_grid_matches_moment_oracle():
    t0 = bessel_stepline(0, 0, 13)
    grid = nn_from_shifts(t0, F(1), 6)
    for n, m in grid.indices():
        avec, bvec = nn_oracle(BESSEL_MOMENTS, (n, m))
        assert grid.a(n, m) == avec[0]
        assert grid.b(n, m) == avec[1]
        assert grid.c(n, m) == bvec[0]
        assert grid.d(n, m) == bvec[1]


def test_kappa_consistency():
    # d - c at (n, m) is exactly the stored c-sequence entry of the family
    # and level that produced the point
    t0 = bessel_stepline(0, 0, 13)
    seed = F(1)
    grid = nn_from_shifts(t0, seed, 6)
    fam1 = build_family_e1(t0, 6, 6)
    fam2 = build_family_e2(t0, 6, 6, seed)
    for n, m in grid.indices():
        kappa = grid.d(n, m) - grid.c(n, m)
        if m < n:
            assert kappa == fam1.cseq(n - m)[m]
        else:
            assert kappa == fam2.cseq(m - n)[n]


def test_diagonal_entries_read_level0_data():
    t0 = bessel_stepline(0, 0, 13)
    seed = F(1)
    grid = nn_from_shifts(t0, seed, 6)
    fam2 = build_family_e2(t0, 6, 6, seed)
    for n in range(4):
        assert grid.c(n, n) == t0.beta[2 * n]
        assert grid.d(n, n) == t0.beta[2 * n] + fam2.cseq(0)[n]


def test_mu1_side_independent_of_seed():
    t0 = bessel_stepline(0, 0, 13)
    g1 = nn_from_shifts(t0, F(1), 5)
    g2 = nn_from_shifts(t0, F(-7, 3), 5)
    for n, m in g1.indices():
        if m < n:  # axis-1 territory: no seed enters
            assert g1.entry(n, m) == g2.entry(n, m)
    # and the first marginal never sees the seed at all
    marg = marginal_mu1(build_family_e1(t0, 5, 5), 5)
    assert marg.b[1] == F(29, 3)


def test_positivity_for_positive_measures():
    for seed in (2, 7, 19):
        # supports big enough that the union keeps every index to (7,7) normal
        mu1, mu2 = random_pair(seed, size=14)
        mt = MomentTable((moments(mu1, 27), moments(mu2, 27)))
        t0 = stepline_oracle(mt, None, 0, 13)
        s = seed_c00(mu2.moment(0), mu2.moment(1), t0.beta[0])
        grid = nn_from_shifts(t0, s, 6)
        for n in range(1, 7):
            assert grid.a(n, 0) > 0
        marg = marginal_mu1(build_family_e1(t0, 6, 6), 6)
        assert marginal_positive(marg)
        assert marg.a_sq[1] == grid.a(1, 0)


def test_grid_bookkeeping():
    t0 = bessel_stepline(0, 0, 9)
    grid = nn_from_shifts(t0, F(1), 4)
    assert grid.a(0, 3) == 0 and grid.b(2, 0) == 0
    assert list(grid.indices())[:6] == [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 0)]
    with pytest.raises(RangeError):
        grid.entry(3, 2)
    with pytest.raises(RangeError):
        grid.entry(-1, 0)
    with pytest.raises(RangeError):
        nn_from_shifts(t0, F(1), 5)  # table reaches 9, needs 2*5+1 = 11


def test_marginal_recurrence_validation():
    m = MarginalRecurrence((F(1), F(2)), (F(0), F(3)))
    assert m.depth == 1 and marginal_positive(m)
    assert not marginal_positive(MarginalRecurrence((F(0), F(0)), (F(0), F(-1))))
    with pytest.raises(DomainError):
        MarginalRecurrence((F(1),), (F(1),))
    with pytest.raises(DomainError):
        MarginalRecurrence((F(1), F(2)), (F(0),))
    with pytest.raises(DomainError):
        MarginalRecurrence((), ())


def test_marginal_depth_requires_family_levels():
    fam = _bessel_family(4)
    with pytest.raises(RangeError):
        marginal_mu1(fam, 5)
    with pytest.raises(DomainError):
        marginal_mu2(fam, 2)  # wrong axis family
