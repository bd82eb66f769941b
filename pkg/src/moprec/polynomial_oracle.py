"""Moment-based construction of the polynomials themselves.

Everything else in this package manipulates recurrence coefficients without
ever writing a polynomial down.  This module is the independent referee: it
builds each type II polynomial directly from moments by solving the defining
orthogonality system exactly, then reads recurrence coefficients off the
polynomials by basis expansion.  Any coefficient the recursion modules
produce can therefore be checked against a computation that shares no code
with them beyond scalar arithmetic.

The linear algebra is plain Gaussian elimination over rationals: pivots are
exact, so "the moment system is singular" is a decidable statement and maps
to NonNormalIndexError rather than a tolerance call.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, InternalError, NonNormalIndexError, RangeError
from .numerics import as_fraction
from .nearest_neighbor import MarginalRecurrence
from .stepline import Axis, StepLineCoeffs

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over exact rationals, ascending coefficients."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(as_fraction(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(i) - other.coeff(i) for i in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly(())
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, ci in enumerate(self.coeffs):
                for j, cj in enumerate(other.coeffs):
                    out[i + j] += ci * cj
            return Poly(tuple(out))
        s = as_fraction(other)
        return Poly(tuple(c * s for c in self.coeffs))

    __rmul__ = __mul__

    def times_x(self) -> "Poly":
        if not self.coeffs:
            return self
        return Poly((Fraction(0),) + self.coeffs)

    def __call__(self, x):
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


POLY_ZERO = Poly(())
POLY_ONE = Poly((1,))
POLY_X = Poly((0, 1))


@dataclass(frozen=True)
class MomentTable:
    """Moments m_k for each measure of a system: rows[i][k] = m_k(mu_i)."""

    rows: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "rows",
            tuple(tuple(as_fraction(m) for m in row) for row in self.rows),
        )
        if not self.rows:
            raise DomainError("moment table needs at least one measure")

    @property
    def r(self) -> int:
        return len(self.rows)

    def m(self, i: int, k: int) -> Fraction:
        if not 0 <= i < self.r:
            raise RangeError(f"no measure {i} (have 0..{self.r - 1})")
        row = self.rows[i]
        if not 0 <= k < len(row):
            raise RangeError(f"measure {i} has moments 0..{len(row) - 1}, need {k}")
        return row[k]

    @classmethod
    def from_measures(cls, measures, kmax: int) -> "MomentTable":
        return cls(tuple(tuple(mu.moment(k) for k in range(kmax + 1)) for mu in measures))


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Exact Gaussian elimination; returns the solution or None if singular."""
    n = len(rows)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col]
        for r in range(col + 1, n):
            if aug[r][col] != 0:
                f = aug[r][col] / inv
                for c in range(col, n + 1):
                    aug[r][c] -= f * aug[col][c]
    sol = [Fraction(0)] * n
    for row in range(n - 1, -1, -1):
        acc = aug[row][n] - sum(aug[row][c] * sol[c] for c in range(row + 1, n))
        sol[row] = acc / aug[row][row]
    return sol


@lru_cache(maxsize=None)
def mop_from_moments(table: MomentTable, nvec: MultiIndex) -> Poly:
    """Monic type II polynomial of multi-index nvec, straight from moments.

    Solves the |nvec| x |nvec| linear system expressing that the polynomial
    is orthogonal to powers 0..n_i - 1 against measure i.  A singular system
    raises NonNormalIndexError.
    """
    if len(nvec) != table.r:
        raise DomainError(f"multi-index has {len(nvec)} parts, table has {table.r}")
    if any(n < 0 for n in nvec):
        raise DomainError("multi-index parts must be nonnegative")
    length = sum(nvec)
    if length == 0:
        return POLY_ONE
    rows, rhs = [], []
    for i, ni in enumerate(nvec):
        for k in range(ni):
            rows.append([table.m(i, p + k) for p in range(length)])
            rhs.append(-table.m(i, length + k))
    sol = _solve_square(rows, rhs)
    if sol is None:
        raise NonNormalIndexError(nvec)
    return Poly(tuple(sol) + (Fraction(1),))


def _expand(target: Poly, basis: list[Poly], nvec: MultiIndex) -> list[Fraction]:
    """Coefficients of target in the given polynomial basis, exactly.

    The system is overdetermined (one equation per polynomial degree); rank
    deficiency maps to NonNormalIndexError, an inconsistent remainder to
    InternalError since it would mean the expansion postulated by the theory
    does not exist.
    """
    degree = max([target.degree] + [p.degree for p in basis])
    ncols = len(basis)
    aug = [[p.coeff(d) for p in basis] + [target.coeff(d)] for d in range(degree + 1)]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(aug)) if aug[r][col] != 0), None)
        if pivot is None:
            raise NonNormalIndexError(nvec)
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = aug[row][col]
        for r in range(len(aug)):
            if r != row and aug[r][col] != 0:
                f = aug[r][col] / inv
                for c in range(col, ncols + 1):
                    aug[r][c] -= f * aug[row][c]
        pivots.append(row)
        row += 1
    for r in range(row, len(aug)):
        if aug[r][ncols] != 0:
            raise InternalError(f"expansion remainder nonzero at multi-index {nvec}")
    return [aug[pivots[c]][ncols] / aug[pivots[c]][c] for c in range(ncols)]


def nn_oracle(table: MomentTable, nvec: MultiIndex):
    """Nearest-neighbor coefficient vectors at nvec, read off the polynomials.

    For each direction k, expands x*P(nvec) - P(nvec + e_k) in the basis
    {P(nvec)} + {P(nvec - e_j) : n_j >= 1}.  Returns (avec, bvec): the shared
    lower-neighbor coefficients (zero where n_j = 0) and the per-direction
    diagonal coefficients.  The a-vector must come out identical for every
    direction; a disagreement is an InternalError.
    """
    r = table.r
    p_here = mop_from_moments(table, nvec)
    active = [j for j in range(r) if nvec[j] >= 1]
    basis = [p_here] + [
        mop_from_moments(table, _bump(nvec, j, -1)) for j in active
    ]
    avec_seen = None
    bvec = []
    for k in range(r):
        target = p_here.times_x() - mop_from_moments(table, _bump(nvec, k, +1))
        coeffs = _expand(target, basis, nvec)
        bvec.append(coeffs[0])
        avec = [Fraction(0)] * r
        for slot, j in enumerate(active):
            avec[j] = coeffs[1 + slot]
        if avec_seen is None:
            avec_seen = avec
        elif avec_seen != avec:
            raise InternalError(f"a-vector differs between directions at {nvec}")
    return tuple(avec_seen), tuple(bvec)


def _bump(nvec: MultiIndex, j: int, step: int) -> MultiIndex:
    out = list(nvec)
    out[j] += step
    return tuple(out)


def marginal_oracle(moment_row, depth: int) -> MarginalRecurrence:
    """Classical three-term recurrence of a single measure, from moments alone.

    Runs the one-measure case of nn_oracle for n = 0..depth.  Needs moments
    up to order 2*depth + 1.
    """
    table = MomentTable((tuple(moment_row),))
    b, a_sq = [], [Fraction(0)]
    for n in range(depth + 1):
        avec, bvec = nn_oracle(table, (n,))
        b.append(bvec[0])
        if n >= 1:
            a_sq.append(avec[0])
    return MarginalRecurrence(tuple(b), tuple(a_sq))


def _stepline_multi_index(axis: Axis, lvl: int, s: int) -> MultiIndex:
    """Multi-index of the s-th polynomial on a (possibly shifted) step-line.

    Axis 1 level j: even steps (t+j, t), odd steps (t+j+1, t), from s = j.
    Axis 2 level k: even steps (t, t+k), odd steps (t+1, t+k), from s = k,
    extended one index down by (0, k-1): the recurrence at the line's second
    index genuinely involves that polynomial, so it belongs to the line.
    """
    if axis is Axis.E2 and s == lvl - 1:
        return (0, lvl - 1)
    t, odd = divmod(s - lvl, 2)
    if axis is Axis.E1:
        return (t + lvl + odd, t)
    return (t + odd, t + lvl)


def stepline_oracle(
    table: MomentTable, axis: Axis | None, lvl: int, nmax: int
) -> StepLineCoeffs:
    """Shifted step-line coefficients from moments, by peeling basis expansions.

    For each index s on the level-`lvl` line along `axis`, expands
    x*p_s - p_{s+1} in the (degree-triangular) basis p_s, p_{s-1}, p_{s-2},
    which yields beta_s, gamma_s, delta_s in turn.  A nonzero remainder means
    the four-term structure fails there and raises InternalError.

    The recurrence at a shifted line's lowest stored index is a bookkeeping
    convention, not a polynomial identity: its gamma and delta entries are
    the structural zeros, and its beta is the corresponding marginal
    three-term coefficient (first measure's b_j on axis 1, second measure's
    b_{k-1} on axis 2), which is how it is produced here.  Storage ranges
    match the shift operations: axis 1 level j stores from index j, axis 2
    level k from index k-1.  Two measures only.
    """
    if table.r != 2:
        raise DomainError("step-line oracle is defined for two-measure systems")
    if lvl == 0:
        axis = Axis.E1  # level 0 is axis-independent; either map gives the same line
    elif axis is None:
        raise DomainError("shifted lines need an axis")
    bottom = lvl if (lvl == 0 or axis is Axis.E1) else lvl - 1
    if nmax < bottom:
        raise DomainError("nmax below the line's first index")
    polys = {
        s: mop_from_moments(table, _stepline_multi_index(axis, lvl, s))
        for s in range(bottom, nmax + 2)
    }
    beta, gamma, delta = {}, {}, {}
    first = bottom if lvl == 0 else bottom + 1  # lowest index peeled as an identity
    for s in range(first, nmax + 1):
        q = polys[s].times_x() - polys[s + 1]
        beta[s] = q.coeff(s)
        q = q - beta[s] * polys[s]
        if s - 1 >= bottom:
            gamma[s] = q.coeff(s - 1)
            q = q - gamma[s] * polys[s - 1]
        else:
            gamma[s] = Fraction(0)
        if s - 2 >= bottom:
            delta[s] = q.coeff(s - 2)
            q = q - delta[s] * polys[s - 2]
        else:
            delta[s] = Fraction(0)
        if q.coeffs:
            raise InternalError(f"four-term structure violated at line index {s}")
    if lvl >= 1:
        # bottom entries: structural zeros plus the marginal beta
        measure = 0 if axis is Axis.E1 else 1
        beta[bottom] = nn_oracle(table, _stepline_multi_index(axis, lvl, bottom))[1][measure]
        gamma[bottom] = Fraction(0)
        delta[bottom] = Fraction(0)
        delta[bottom + 1] = Fraction(0)
    idx = range(bottom, nmax + 1)
    from .stepline import CoeffSeq  # local import to keep module top uncluttered

    if lvl == 0:
        return StepLineCoeffs(
            None,
            0,
            CoeffSeq(0, tuple(beta[s] for s in idx), "beta"),
            CoeffSeq(1, tuple(gamma[s] for s in list(idx)[1:]), "gamma"),
            CoeffSeq(2, tuple(delta[s] for s in list(idx)[2:]), "delta"),
        )
    return StepLineCoeffs(
        axis,
        lvl,
        CoeffSeq(bottom, tuple(beta[s] for s in idx), "beta"),
        CoeffSeq(bottom, tuple(gamma[s] for s in idx), "gamma"),
        CoeffSeq(bottom, tuple(delta[s] for s in idx), "delta"),
    )


def orthogonality_residuals(p: Poly, table: MomentTable, i: int, upto: int):
    """Integrals of p(x) * x^k against measure i, k = 0..upto, exact."""
    return tuple(
        sum((cf * table.m(i, d + k) for d, cf in enumerate(p.coeffs)), Fraction(0))
        for k in range(upto + 1)
    )


def eval_chain(source, target=None, *, path=None) -> Poly:
    """Run a recurrence chain and return the resulting monic polynomial.

    With a level-0 step-line table, ``target`` is the line index and the
    four-term recurrence is iterated from p_0 = 1.  With a general
    nearest-neighbor grid (anything exposing ``r``, ``a(nvec, i)`` and
    ``b(nvec, i)``), ``target`` is a multi-index; ``path``, if given, is the
    sequence of axis numbers to step through, and pins which relation
    produces each polynomial along it (off-path lower neighbors use the
    first-nonzero-component rule).  Exact coefficients throughout, so path
    independence can be asserted with ==.
    """
    if isinstance(source, StepLineCoeffs):
        if path is not None:
            raise DomainError("paths apply to grids, not step-line tables")
        if source.level != 0:
            raise DomainError("step-line evaluation starts from a level-0 table")
        if target is None or target < 0:
            raise DomainError("need a nonnegative line index")
        prev2, prev1, cur = POLY_ZERO, POLY_ZERO, POLY_ONE
        for n in range(target):
            new = (POLY_X - Poly((source.beta[n],))) * cur
            if n >= 1:
                new = new - source.gamma[n] * prev1
            if n >= 2:
                new = new - source.delta[n] * prev2
            prev2, prev1, cur = prev1, cur, new
        return cur

    r = source.r
    if path is not None:
        path = tuple(path)
        if any(not 0 <= k < r for k in path):
            raise DomainError(f"path steps must be axes 0..{r - 1}")
        reached = [0] * r
        pinned = {}
        for k in path:
            reached[k] += 1
            pinned[tuple(reached)] = k
        if target is not None and tuple(target) != tuple(reached):
            raise DomainError("path does not lead to target")
        target = tuple(reached)
    else:
        if target is None:
            raise DomainError("need a target multi-index")
        target = tuple(target)
        pinned = {}

    memo: dict[MultiIndex, Poly] = {}

    def rec(mvec: MultiIndex) -> Poly:
        if all(v == 0 for v in mvec):
            return POLY_ONE
        got = memo.get(mvec)
        if got is None:
            k = pinned.get(mvec)
            if k is None:
                k = next(i for i, v in enumerate(mvec) if v > 0)
            nvec = _bump(mvec, k, -1)
            got = (POLY_X - Poly((source.b(nvec, k),))) * rec(nvec)
            for j in range(r):
                if nvec[j] >= 1:
                    got = got - source.a(nvec, j) * rec(_bump(nvec, j, -1))
            memo[mvec] = got
        return got

    return rec(target)
