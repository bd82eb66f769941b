"""File formats: exact rational round trips for every table kind."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moprec.errors import DomainError, ParseError
from moprec.inverse_problem import nn_from_marginals_general
from moprec.measures_catalog import bessel_stepline, moments, random_pair, random_system
from moprec.nearest_neighbor import marginal_mu1, nn_from_shifts
from moprec.polynomial_oracle import marginal_oracle
from moprec.stepline import build_family_e1, shift_e1
from moprec.tableio import (
    fraction_str,
    parse_fraction,
    read_marginal,
    read_measures,
    read_nn_grid,
    read_stepline,
    write_marginal,
    write_measures,
    write_nn_grid,
    write_stepline,
)


@given(q=st.fractions(max_denominator=10**9))
@settings(max_examples=80, deadline=None)
def test_fraction_text_roundtrip(q):
    assert parse_fraction(fraction_str(q)) == q


def test_fraction_text_forms():
    assert fraction_str(F(3)) == "3"
    assert fraction_str(F(-29, 3)) == "-29/3"
    assert parse_fraction("7/2") == F(7, 2)
    assert parse_fraction("1.5") == F(3, 2)  # exact decimal literals are accepted
    for bad in ("", "1/0", "x", "2/3/4"):
        with pytest.raises(ParseError):
            parse_fraction(bad)


def _tables_equal(a, b):
    assert a.axis is b.axis and a.level == b.level
    for sa, sb in ((a.beta, b.beta), (a.gamma, b.gamma), (a.delta, b.delta)):
        assert sa.start == sb.start and sa.values == sb.values


def test_stepline_roundtrip(tmp_path):
    t0 = bessel_stepline(0, 0, 9)
    for name in ("t.json", "t.csv"):
        path = tmp_path / name
        write_stepline(t0, path)
        _tables_equal(read_stepline(path), t0)


def test_shifted_stepline_json_only(tmp_path):
    t1, _ = shift_e1(bessel_stepline(0, 0, 9), 4)
    path = tmp_path / "t1.json"
    write_stepline(t1, path)
    _tables_equal(read_stepline(path), t1)
    with pytest.raises(DomainError):
        write_stepline(t1, tmp_path / "t1.csv")


def test_marginal_roundtrip(tmp_path):
    t0 = bessel_stepline(0, 0, 13)
    marg = marginal_mu1(build_family_e1(t0, 6, 6), 6)
    for name in ("m.json", "m.csv"):
        path = tmp_path / name
        write_marginal(marg, path, digits=12)
        back = read_marginal(path)
        assert back.b == marg.b and back.a_sq == marg.a_sq


def test_grid_roundtrip_two_measures(tmp_path):
    grid = nn_from_shifts(bessel_stepline(0, 0, 13), F(1), 6)
    for name in ("g.json", "g.csv"):
        path = tmp_path / name
        write_nn_grid(grid, path)
        back = read_nn_grid(path)
        assert back.max_diag == grid.max_diag
        assert all(back.entry(n, m) == grid.entry(n, m) for n, m in grid.indices())


def test_grid_roundtrip_three_measures(tmp_path):
    mus = random_system(77, r=3, size=6)
    margs = tuple(marginal_oracle(moments(mu, 7), 3) for mu in mus)
    grid = nn_from_marginals_general(margs, 3)
    for name in ("g3.json", "g3.csv"):
        path = tmp_path / name
        write_nn_grid(grid, path)
        back = read_nn_grid(path)
        assert back.r == 3 and back.max_len == 3
        for nvec in grid.multi_indices():
            for i in range(3):
                assert back.a(nvec, i) == grid.a(nvec, i)
                assert back.b(nvec, i) == grid.b(nvec, i)


def test_measures_roundtrip(tmp_path):
    mus = random_pair(5, size=4)
    path = tmp_path / "mus.json"
    write_measures(mus, path)
    back = read_measures(path)
    assert back == tuple(mus)
    with pytest.raises(DomainError):
        write_measures(mus, tmp_path / "mus.csv")  # json only


def test_parse_errors_carry_line_numbers(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("n,b,a_sq,a_decimal\n0,1,0,--\n1,oops,3,1.7\n")
    with pytest.raises(ParseError) as exc:
        read_marginal(bad)
    assert exc.value.line == 3

    wrong_header = tmp_path / "h.csv"
    wrong_header.write_text("n,beta,wrong,delta\n0,1,,\n")
    with pytest.raises(ParseError) as exc:
        read_stepline(wrong_header)
    assert exc.value.line == 1

    bad_json = tmp_path / "bad.json"
    bad_json.write_text('{"kind": "stepline",\n  broken\n}')
    with pytest.raises(ParseError) as exc:
        read_stepline(bad_json)
    assert exc.value.line is not None


def test_json_kind_mismatch(tmp_path):
    path = tmp_path / "m.json"
    write_marginal(marginal_oracle(moments(random_pair(1)[0], 5), 2), path, 10)
    with pytest.raises(ParseError):
        read_stepline(path)
    with pytest.raises(ParseError):
        read_nn_grid(path)


def test_csv_rows_must_be_contiguous(tmp_path):
    gap = tmp_path / "gap.csv"
    gap.write_text("n,b,a_sq,a_decimal\n0,1,0,--\n2,3,4,2.0\n")
    with pytest.raises(ParseError):
        read_marginal(gap)


def test_incomplete_grid_rejected(tmp_path):
    grid = nn_from_shifts(bessel_stepline(0, 0, 9), F(1), 3)
    path = tmp_path / "g.csv"
    write_nn_grid(grid, path)
    lines = path.read_text().strip().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")  # drop one lattice point
    with pytest.raises(ParseError):
        read_nn_grid(path)


def test_unknown_suffix(tmp_path):
    with pytest.raises(DomainError):
        read_stepline(tmp_path / "t.xml")
