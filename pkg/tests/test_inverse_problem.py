"""Inverse direction: marginals to grid to step-line, and its consistency checks."""

from fractions import Fraction as F
from math import factorial

import pytest

from moprec.errors import (
    DomainError,
    InternalError,
    RangeError,
    SingularSweepError,
)
from moprec.inverse_problem import (
    NNGridR,
    compatibility_check,
    general_from_r2,
    nn_from_marginals_general,
    nn_from_marginals_r2,
    pd_residuals_general,
    pd_residuals_r2,
    stepline_from_nn,
    transfer_matrix,
)
from moprec.measures_catalog import (
    bessel_stepline,
    convex_combination,
    moments,
    random_pair,
    random_system,
)
from moprec.nearest_neighbor import NNGrid, nn_from_shifts
from moprec.polynomial_oracle import MomentTable, marginal_oracle, nn_oracle

BESSEL_MOMENTS = MomentTable(
    (
        tuple(F(factorial(k)) ** 2 for k in range(30)),
        tuple(F(factorial(k + 1)) * factorial(k) / 2 for k in range(30)),
    )
)


def _bessel_marginals(depth):
    return (
        marginal_oracle(BESSEL_MOMENTS.rows[0], depth),
        marginal_oracle(BESSEL_MOMENTS.rows[1], depth),
    )


def _pair_marginals(seed, depth, size=None):
    mus = random_pair(seed, size=size if size else 2 * depth + 2)
    rows = tuple(moments(mu, 2 * depth + 1) for mu in mus)
    return tuple(marginal_oracle(row, depth) for row in rows), mus


def test_bessel_sweep_anchors():
    m1, m2 = _bessel_marginals(3)
    assert m2.b[0] == 2 and m2.a_sq[1] == 8
    grid = nn_from_marginals_r2(m1, m2, 3)
    assert grid.d(1, 0) == 7
    assert grid.c(0, 1) == 6
    assert grid.a(1, 0) == 3 and grid.b(0, 1) == 8  # the marginal boundary data


def test_inverse_equals_forward_bessel():
    m1, m2 = _bessel_marginals(6)
    inv = nn_from_marginals_r2(m1, m2, 6)
    fwd = nn_from_shifts(bessel_stepline(0, 0, 13), F(1), 6)
    for n, m in inv.indices():
        assert inv.entry(n, m) == fwd.entry(n, m)


def test_inverse_matches_oracle_random_seeds():
    for seed in (1, 4, 12):
        (m1, m2), mus = _pair_marginals(seed, 5)
        grid = nn_from_marginals_r2(m1, m2, 5)
        mt = MomentTable.from_measures(mus, 11)
        for n, m in grid.indices():
            avec, bvec = nn_oracle(mt, (n, m))
            assert grid.entry(n, m) == (avec[0], avec[1], bvec[0], bvec[1])


def test_stepline_recovered_from_grid():
    m1, m2 = _bessel_marginals(13)
    grid = nn_from_marginals_r2(m1, m2, 13)
    table = stepline_from_nn(grid, 13)
    want = bessel_stepline(0, 0, 13)
    for s in range(14):
        assert table.beta[s] == want.beta[s]
        assert s < 1 or table.gamma[s] == want.gamma[s]
        assert s < 2 or table.delta[s] == want.delta[s]
    with pytest.raises(RangeError):
        stepline_from_nn(grid, 14)


def test_general_sweep_specializes_to_pair_sweep():
    m1, m2 = _bessel_marginals(5)
    pair = general_from_r2(nn_from_marginals_r2(m1, m2, 5))
    gen = nn_from_marginals_general((m1, m2), 5, check_choices=True)
    for nvec in gen.multi_indices():
        for i in range(2):
            assert gen.a(nvec, i) == pair.a(nvec, i)
            assert gen.b(nvec, i) == pair.b(nvec, i)


def test_three_measure_sweep_matches_oracle():
    mus = random_system(77, r=3, size=6)
    mt = MomentTable.from_measures(mus, 11)
    margs = tuple(marginal_oracle(mt.rows[i], 4) for i in range(3))
    grid = nn_from_marginals_general(margs, 4, check_choices=True)
    for nvec in grid.multi_indices():
        avec, bvec = nn_oracle(mt, nvec)
        for i in range(3):
            assert grid.a(nvec, i) == avec[i]
            assert grid.b(nvec, i) == bvec[i]


def test_pd_residuals_zero_on_valid_grid():
    m1, m2 = _bessel_marginals(5)
    grid = nn_from_marginals_r2(m1, m2, 5)
    triples = list(pd_residuals_r2(grid))
    assert triples and all(v == 0 for _, _, v in triples)
    names = {name for name, _, _ in triples}
    assert names == {"diagonal-increment", "lower-sum", "a-ratio", "b-ratio"}
    gen = nn_from_marginals_general(_bessel_marginals(4), 4)
    gtriples = list(pd_residuals_general(gen))
    assert gtriples and all(v == 0 for _, _, v in gtriples)


def _perturb(grid: NNGrid, n, m, slot, delta=F(1, 7)) -> NNGrid:
    rows = [list(row) for row in grid.rows]
    cell = list(rows[n][m])
    cell[slot] += delta
    rows[n][m] = tuple(cell)
    return NNGrid(grid.max_diag, tuple(tuple(r) for r in rows))


def test_pd_residuals_detect_perturbation():
    m1, m2 = _bessel_marginals(4)
    grid = _perturb(nn_from_marginals_r2(m1, m2, 4), 1, 1, 2)
    assert any(v != 0 for _, _, v in pd_residuals_r2(grid))


def test_transfer_matrix_compatibility():
    m1, m2 = _bessel_marginals(6)
    grid = general_from_r2(nn_from_marginals_r2(m1, m2, 6))
    for nvec in [(1, 1), (2, 1), (1, 3), (2, 2)]:
        ok, residual = compatibility_check(grid, nvec, 0, 1)
        assert ok and residual.is_zero
    broken = general_from_r2(
        _perturb(nn_from_marginals_r2(m1, m2, 6), 1, 1, 2)
    )
    ok, residual = compatibility_check(broken, (1, 1), 0, 1)
    assert not ok and not residual.is_zero
    with pytest.raises(DomainError):
        transfer_matrix(grid, (0, 2), 0)
    with pytest.raises(DomainError):
        compatibility_check(grid, (1, 1), 1, 1)


def test_compatibility_three_measures():
    mus = random_system(77, r=3, size=6)
    margs = tuple(
        marginal_oracle(moments(mus[i], 9), 4) for i in range(3)
    )
    grid = nn_from_marginals_general(margs, 4)
    for i in range(3):
        for j in range(i + 1, 3):
            ok, _ = compatibility_check(grid, (1, 1, 1), i, j)
            assert ok


def test_identical_marginals_singular_at_origin():
    m1, _ = _bessel_marginals(3)
    with pytest.raises(SingularSweepError) as exc:
        nn_from_marginals_r2(m1, m1, 3)
    assert exc.value.site == (0, 0)
    with pytest.raises(SingularSweepError) as exc2:
        nn_from_marginals_general((m1, m1), 3)
    assert exc2.value.site[0] == (0, 0)


def test_convex_combination_leaves_stepline_unchanged():
    mu1, mu2 = random_pair(3, size=12)
    depth = 5

    def stepline_of(second):
        m1 = marginal_oracle(moments(mu1, 2 * depth + 1), depth)
        m2 = marginal_oracle(moments(second, 2 * depth + 1), depth)
        grid = nn_from_marginals_r2(m1, m2, depth)
        return grid, stepline_from_nn(grid, depth)

    base_grid, base = stepline_of(mu2)
    mixed_grid, mixed = stepline_of(convex_combination(mu1, mu2, F(1, 2)))
    assert base.beta.values == mixed.beta.values
    assert base.gamma.values == mixed.gamma.values
    assert base.delta.values == mixed.delta.values
    # while the grids themselves do differ away from the mu1 axis
    assert any(
        base_grid.entry(n, m) != mixed_grid.entry(n, m)
        for n, m in base_grid.indices()
    )


def test_sweep_depth_requirements():
    m1, m2 = _bessel_marginals(3)
    with pytest.raises(RangeError):
        nn_from_marginals_r2(m1, m2, 4)
    with pytest.raises(RangeError):
        nn_from_marginals_general((m1, m2), 4)
    with pytest.raises(DomainError):
        nn_from_marginals_general((m1,), 2)  # need at least two measures


def test_gridr_bookkeeping():
    m1, m2 = _bessel_marginals(3)
    grid = nn_from_marginals_general((m1, m2), 3)
    assert grid.r == 2 and grid.max_len == 3
    with pytest.raises(RangeError):
        grid.a((2, 2), 0)
    with pytest.raises(RangeError):
        grid.b((1, 1), 2)
    with pytest.raises(RangeError):
        grid.a((1,), 0)
    assert sum(1 for _ in grid.multi_indices()) == 10
