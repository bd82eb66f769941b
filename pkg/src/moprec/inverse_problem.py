"""Recovering nearest-neighbor data from the per-measure three-term data.

The forward modules go from a step-line table to the full grid of
nearest-neighbor coefficients.  This module goes the other way around the
triangle: given only the classical three-term recurrence coefficients of the
individual measures, it rebuilds the whole nearest-neighbor grid, and from
that grid the step-line table.

The grid entries satisfy a coupled system of first-order partial difference
equations in the multi-index.  Those equations propagate inward from the
axes: each new anti-diagonal (all multi-indices of one length) is computed
from the previous two, dividing at every step by a difference of diagonal
coefficients.  A vanishing difference is precisely the obstruction to the
reconstruction, reported as SingularSweepError with the site where it
happened.  Everything is exact rational arithmetic; there are no tolerance
knobs anywhere.

The same equations, read as identities instead of update rules, give residual
checks (``pd_residuals_*``) and the transfer-matrix compatibility test, which
quantify whether a given grid is internally consistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DomainError, InternalError, RangeError, SingularSweepError
from .nearest_neighbor import MarginalRecurrence, NNGrid
from .polynomial_oracle import POLY_ONE, Poly
from .stepline import StepLineCoeffs, level0

MultiIndex = tuple[int, ...]


def _bump(nvec: MultiIndex, j: int, step: int) -> MultiIndex:
    out = list(nvec)
    out[j] += step
    return tuple(out)


def _axis_index(r: int, j: int, n: int) -> MultiIndex:
    out = [0] * r
    out[j] = n
    return tuple(out)


def _layer(total: int, r: int):
    """All multi-indices with r nonnegative parts summing to total."""
    for cuts in combinations(range(total + r - 1), r - 1):
        prev, out = -1, []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + r - 2 - prev)
        yield tuple(out)


@dataclass(frozen=True, eq=False)
class NNGridR:
    """Nearest-neighbor coefficients for r measures, on multi-index lengths <= max_len.

    ``a(nvec, i)`` is the coefficient of the polynomial one step down in
    direction i, shared by every raising direction; ``b(nvec, i)`` is the
    diagonal coefficient of the relation that raises direction i.  Directions
    are numbered 0..r-1.
    """

    r: int
    max_len: int
    a_entries: dict
    b_entries: dict

    def __post_init__(self):
        if self.r < 1:
            raise DomainError("need at least one measure")
        if self.max_len < 0:
            raise DomainError("need max_len >= 0")

    def _check(self, nvec: MultiIndex, i: int):
        if len(nvec) != self.r or any(v < 0 for v in nvec) or sum(nvec) > self.max_len:
            raise RangeError(
                f"multi-index {nvec} outside grid (r={self.r}, lengths <= {self.max_len})"
            )
        if not 0 <= i < self.r:
            raise RangeError(f"direction {i} outside 0..{self.r - 1}")

    def a(self, nvec, i: int) -> Fraction:
        nvec = tuple(nvec)
        self._check(nvec, i)
        return self.a_entries[nvec, i]

    def b(self, nvec, i: int) -> Fraction:
        nvec = tuple(nvec)
        self._check(nvec, i)
        return self.b_entries[nvec, i]

    def multi_indices(self):
        for total in range(self.max_len + 1):
            yield from _layer(total, self.r)


def general_from_r2(grid: NNGrid) -> NNGridR:
    """Repackage a two-measure triangle grid in the general-r layout."""
    a_entries, b_entries = {}, {}
    for n, m in grid.indices():
        a_entries[(n, m), 0] = grid.a(n, m)
        a_entries[(n, m), 1] = grid.b(n, m)
        b_entries[(n, m), 0] = grid.c(n, m)
        b_entries[(n, m), 1] = grid.d(n, m)
    return NNGridR(2, grid.max_diag, a_entries, b_entries)


def nn_from_marginals_r2(
    marg1: MarginalRecurrence, marg2: MarginalRecurrence, max_diag: int
) -> NNGrid:
    """Rebuild the two-measure grid over n + m <= max_diag from the marginals.

    Axis boundaries come straight from the inputs.  Each sweep step first
    extends the off-diagonal coefficients by their ratio rules, then solves,
    site by site, the two-equation linear system for the new diagonal
    coefficients; both new values are the old ones plus a common increment.
    The system's determinant is c - d at the previous site, so equal values
    there stop the sweep with SingularSweepError carrying that site.  Needs
    marginal data to index max_diag.
    """
    if max_diag < 0:
        raise DomainError("need max_diag >= 0")
    for which, marg in (("first", marg1), ("second", marg2)):
        if marg.depth < max_diag:
            raise RangeError(
                f"{which} marginal stops at index {marg.depth}, need {max_diag}"
            )
    a, b, c, d = {}, {}, {}, {}
    a[0, 0] = b[0, 0] = Fraction(0)
    c[0, 0] = marg1.b[0]
    d[0, 0] = marg2.b[0]

    def cd(n: int, m: int) -> Fraction:
        diff = c[n, m] - d[n, m]
        if diff == 0:
            raise SingularSweepError((n, m))
        return diff

    for k in range(max_diag):
        # off-diagonal pass: layer k+1 from ratios over layers k and k-1
        a[0, k + 1] = Fraction(0)
        a[k + 1, 0] = marg1.a_sq[k + 1]
        b[0, k + 1] = marg2.a_sq[k + 1]
        b[k + 1, 0] = Fraction(0)
        for l in range(1, k + 1):
            a[l, k + 1 - l] = a[l, k - l] * cd(l, k - l) / cd(l - 1, k - l)
            b[l, k + 1 - l] = b[l - 1, k + 1 - l] * cd(l - 1, k + 1 - l) / cd(l - 1, k - l)
        # diagonal pass: common increment at every layer-k site
        c[k + 1, 0] = marg1.b[k + 1]
        d[0, k + 1] = marg2.b[k + 1]
        for n in range(k + 1):
            m = k - n
            inc = (a[n + 1, m] + b[n + 1, m] - a[n, m + 1] - b[n, m + 1]) / cd(n, m)
            c[n, m + 1] = c[n, m] + inc
            d[n + 1, m] = d[n, m] + inc

    rows = tuple(
        tuple((a[n, m], b[n, m], c[n, m], d[n, m]) for m in range(max_diag + 1 - n))
        for n in range(max_diag + 1)
    )
    return NNGrid(max_diag, rows)


def nn_from_marginals_general(
    margs, max_len: int, *, check_choices: bool = False
) -> NNGridR:
    """Rebuild the general-r grid over |nvec| <= max_len from r marginals.

    Layer by layer: first every lower-neighbor coefficient of the new layer
    (zero where the component is zero, the marginal value on its own axis,
    the ratio rule elsewhere), then every diagonal coefficient (the marginal
    value on its own axis, otherwise the increment rule, which consumes the
    just-finished lower-neighbor layer).  Both rules step off the new index
    along some direction j with a nonzero component; the smallest such j is
    used.  With ``check_choices`` every admissible j is evaluated and a
    disagreement raises InternalError; on data that actually comes from a
    common system of measures all choices agree identically.

    Divisions are by differences b(nvec, j) - b(nvec, i) of diagonal
    coefficients; a zero difference raises SingularSweepError with site
    (nvec, i, j).  Needs each marginal to index max_len.
    """
    margs = tuple(margs)
    r = len(margs)
    if r < 2:
        raise DomainError("need at least two marginals")
    if max_len < 0:
        raise DomainError("need max_len >= 0")
    for i, marg in enumerate(margs):
        if marg.depth < max_len:
            raise RangeError(f"marginal {i} stops at index {marg.depth}, need {max_len}")

    a_entries, b_entries = {}, {}
    origin = (0,) * r
    for i in range(r):
        a_entries[origin, i] = Fraction(0)
        b_entries[origin, i] = margs[i].b[0]

    def bdiff(nvec: MultiIndex, i: int, j: int) -> Fraction:
        diff = b_entries[nvec, j] - b_entries[nvec, i]
        if diff == 0:
            raise SingularSweepError((nvec, i, j))
        return diff

    for length in range(1, max_len + 1):
        layer = tuple(_layer(length, r))
        for mvec in layer:
            for i in range(r):
                if mvec[i] == 0:
                    a_entries[mvec, i] = Fraction(0)
                    continue
                if mvec == _axis_index(r, i, length):
                    a_entries[mvec, i] = margs[i].a_sq[length]
                    continue
                choices = [j for j in range(r) if j != i and mvec[j] >= 1]
                vals = []
                for j in choices if check_choices else choices[:1]:
                    nvec = _bump(mvec, j, -1)
                    down = _bump(nvec, i, -1)
                    vals.append(
                        a_entries[nvec, i] * bdiff(nvec, i, j) / bdiff(down, i, j)
                    )
                if check_choices and any(v != vals[0] for v in vals[1:]):
                    raise InternalError(
                        f"lower-coefficient value at {mvec} depends on the "
                        f"direction stepped off (directions {choices})"
                    )
                a_entries[mvec, i] = vals[0]
        for mvec in layer:
            for i in range(r):
                if mvec == _axis_index(r, i, length):
                    b_entries[mvec, i] = margs[i].b[length]
                    continue
                choices = [j for j in range(r) if j != i and mvec[j] >= 1]
                vals = []
                for j in choices if check_choices else choices[:1]:
                    nvec = _bump(mvec, j, -1)
                    up_i = _bump(nvec, i, +1)
                    num = sum(a_entries[mvec, t] for t in range(r)) - sum(
                        a_entries[up_i, t] for t in range(r)
                    )
                    vals.append(b_entries[nvec, i] + num / bdiff(nvec, i, j))
                if check_choices and any(v != vals[0] for v in vals[1:]):
                    raise InternalError(
                        f"diagonal value at {mvec} depends on the "
                        f"direction stepped off (directions {choices})"
                    )
                b_entries[mvec, i] = vals[0]
    return NNGridR(r, max_len, a_entries, b_entries)


def stepline_from_nn(grid: NNGrid, m_max: int) -> StepLineCoeffs:
    """Read the level-0 step-line table off a two-measure grid.

    Even indices sit on the diagonal, odd indices one step to its right; the
    gamma entries are sums of the two lower-neighbor coefficients and the
    delta entries their products with the previous diagonal differences.
    Needs grid entries with n + m up to m_max.
    """
    if m_max < 0:
        raise DomainError("need m_max >= 0")
    if grid.max_diag < m_max:
        raise RangeError(f"grid holds n + m <= {grid.max_diag}, need {m_max}")
    beta, gamma, delta = [], [], []
    for s in range(m_max + 1):
        n, odd = divmod(s, 2)
        if odd:
            beta.append(grid.d(n + 1, n))
            gamma.append(grid.a(n + 1, n) + grid.b(n + 1, n))
            if n >= 1:
                delta.append(grid.b(n + 1, n) * (grid.d(n, n - 1) - grid.c(n, n - 1)))
        else:
            beta.append(grid.c(n, n))
            if n >= 1:
                gamma.append(grid.a(n, n) + grid.b(n, n))
                delta.append(grid.a(n, n) * (grid.c(n - 1, n - 1) - grid.d(n - 1, n - 1)))
    return level0(beta, gamma, delta)


def pd_residuals_r2(grid: NNGrid):
    """Residuals of the four two-measure difference relations, all sites.

    Returns (name, site, residual) triples; every residual is zero exactly
    when the grid is consistent.  The ratio relations are stated
    cross-multiplied so sites with vanishing denominators still make sense.
    """
    out = []
    for n, m in grid.indices():
        if n + m < grid.max_diag:
            out.append((
                "diagonal-increment",
                (n, m),
                (grid.d(n + 1, m) - grid.d(n, m)) - (grid.c(n, m + 1) - grid.c(n, m)),
            ))
            out.append((
                "lower-sum",
                (n, m),
                grid.a(n + 1, m) + grid.b(n + 1, m)
                - grid.a(n, m + 1) - grid.b(n, m + 1)
                - (grid.d(n + 1, m) * grid.c(n, m) - grid.d(n, m) * grid.c(n, m + 1)),
            ))
        if n >= 1 and n + m < grid.max_diag:
            out.append((
                "a-ratio",
                (n, m),
                grid.a(n, m + 1) * (grid.c(n - 1, m) - grid.d(n - 1, m))
                - grid.a(n, m) * (grid.c(n, m) - grid.d(n, m)),
            ))
        if m >= 1 and n + m < grid.max_diag:
            out.append((
                "b-ratio",
                (n, m),
                grid.b(n + 1, m) * (grid.c(n, m - 1) - grid.d(n, m - 1))
                - grid.b(n, m) * (grid.c(n, m) - grid.d(n, m)),
            ))
    return out


def pd_residuals_general(grid: NNGridR):
    """Residuals of the general-r difference relations, all sites and pairs.

    For every stored multi-index nvec and directions i != j (i < j for the
    two symmetric relations), emits (name, (nvec, i, j), residual).  Ratio
    relations are cross-multiplied.
    """
    out = []
    for nvec in grid.multi_indices():
        interior_next = sum(nvec) + 1 <= grid.max_len
        for i in range(grid.r):
            for j in range(grid.r):
                if i == j:
                    continue
                if i < j and interior_next:
                    up_i, up_j = _bump(nvec, i, +1), _bump(nvec, j, +1)
                    out.append((
                        "diagonal-increment",
                        (nvec, i, j),
                        (grid.b(up_i, j) - grid.b(nvec, j))
                        - (grid.b(up_j, i) - grid.b(nvec, i)),
                    ))
                    suma = sum(grid.a(up_j, t) - grid.a(up_i, t) for t in range(grid.r))
                    out.append((
                        "lower-sum",
                        (nvec, i, j),
                        suma
                        - (grid.b(up_j, i) * grid.b(nvec, j)
                           - grid.b(nvec, i) * grid.b(up_i, j)),
                    ))
                if nvec[i] >= 1 and interior_next:
                    up_j = _bump(nvec, j, +1)
                    down_i = _bump(nvec, i, -1)
                    out.append((
                        "a-ratio",
                        (nvec, i, j),
                        grid.a(up_j, i) * (grid.b(down_i, j) - grid.b(down_i, i))
                        - grid.a(nvec, i) * (grid.b(nvec, j) - grid.b(nvec, i)),
                    ))
    return out


@dataclass(frozen=True)
class TransferMatrix:
    """Square matrix of exact polynomials; one step of the vector recurrence."""

    entries: tuple

    def __post_init__(self):
        size = len(self.entries)
        if any(len(row) != size for row in self.entries):
            raise DomainError("transfer matrix must be square")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if self.size != other.size:
            raise DomainError("size mismatch in matrix product")
        n = self.size
        return TransferMatrix(tuple(
            tuple(
                sum(
                    (self.entries[i][k] * other.entries[k][j] for k in range(n)),
                    Poly(()),
                )
                for j in range(n)
            )
            for i in range(n)
        ))

    def __sub__(self, other: "TransferMatrix") -> "TransferMatrix":
        if self.size != other.size:
            raise DomainError("size mismatch in matrix difference")
        return TransferMatrix(tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ))

    @property
    def is_zero(self) -> bool:
        return all(not p.coeffs for row in self.entries for p in row)


def transfer_matrix(grid: NNGridR, nvec, k: int) -> TransferMatrix:
    """The (r+1) x (r+1) one-step matrix raising direction k at nvec.

    Row 0 carries the recurrence itself (x minus the diagonal coefficient,
    then the negated lower-neighbor coefficients); row i >= 1 shifts the
    stacked vector and needs the diagonal differences one step down in
    direction i, so every component of nvec must be >= 1.
    """
    nvec = tuple(nvec)
    if any(v < 1 for v in nvec):
        raise DomainError("transfer matrices are defined at interior points only")
    r = grid.r
    if not 0 <= k < r:
        raise RangeError(f"direction {k} outside 0..{r - 1}")
    rows = [
        tuple(
            [Poly((-grid.b(nvec, k), 1))]
            + [Poly((-grid.a(nvec, t),)) for t in range(r)]
        )
    ]
    for i in range(r):
        down = _bump(nvec, i, -1)
        row = [Poly(()) for _ in range(r + 1)]
        row[0] = POLY_ONE
        row[i + 1] = Poly((grid.b(down, i) - grid.b(down, k),))
        rows.append(tuple(row))
    return TransferMatrix(tuple(rows))


def compatibility_check(grid: NNGridR, nvec, i: int, j: int):
    """Do the two orders of raising directions i and j commute at nvec?

    Compares the products of one-step matrices along both orders,
    coefficient by coefficient.  Returns (ok, residual matrix).  Needs nvec
    interior and grid entries one past |nvec|.
    """
    nvec = tuple(nvec)
    if i == j:
        raise DomainError("need two distinct directions")
    lhs = transfer_matrix(grid, _bump(nvec, j, +1), i) @ transfer_matrix(grid, nvec, j)
    rhs = transfer_matrix(grid, _bump(nvec, i, +1), j) @ transfer_matrix(grid, nvec, i)
    residual = lhs - rhs
    return residual.is_zero, residual
