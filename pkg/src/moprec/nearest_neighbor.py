"""Nearest-neighbor recurrence grid and marginal recurrences, forward direction.

A two-measure type II system satisfies, at every multi-index (n, m), a pair
of nearest-neighbor relations

    x P(n,m) = P(n+1,m) + c(n,m) P(n,m) + a(n,m) P(n-1,m) + b(n,m) P(n,m-1)
    x P(n,m) = P(n,m+1) + d(n,m) P(n,m) + a(n,m) P(n-1,m) + b(n,m) P(n,m-1)

Given the step-line table and the single free parameter (the level-0 axis-2
c-sequence seed), the shifted step-line families determine every a, b, c, d:
entries below the diagonal come from the axis-1 family, entries on and above
it from the axis-2 family.  The same families carry the two marginal
three-term recurrences: the classical Jacobi coefficients of each measure
appear as the lowest-index entries of the shifted tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NormalityError, RangeError
from .numerics import as_fraction
from .stepline import (
    Axis,
    ShiftFamily,
    StepLineCoeffs,
    build_family_e1,
    build_family_e2,
)


@dataclass(frozen=True)
class NNGrid:
    """Nearest-neighbor coefficients on the triangle n + m <= max_diag.

    Stored densely by rows; every access is range-checked.  Boundary entries
    keep the convention a(0, m) = 0 and b(n, 0) = 0 (they multiply
    polynomials that do not exist).
    """

    max_diag: int
    rows: tuple  # rows[n][m] = (a, b, c, d)

    def _entry(self, n: int, m: int):
        if n < 0 or m < 0 or n + m > self.max_diag:
            raise RangeError(f"grid entry ({n}, {m}) outside triangle of size {self.max_diag}")
        return self.rows[n][m]

    def a(self, n: int, m: int) -> Fraction:
        return self._entry(n, m)[0]

    def b(self, n: int, m: int) -> Fraction:
        return self._entry(n, m)[1]

    def c(self, n: int, m: int) -> Fraction:
        return self._entry(n, m)[2]

    def d(self, n: int, m: int) -> Fraction:
        return self._entry(n, m)[3]

    def entry(self, n: int, m: int):
        """The tuple (a, b, c, d) at one lattice point."""
        return self._entry(n, m)

    def indices(self):
        for n in range(self.max_diag + 1):
            for m in range(self.max_diag + 1 - n):
                yield n, m


@dataclass(frozen=True)
class MarginalRecurrence:
    """Three-term recurrence data of one measure: b_n and a_n^2, n = 0..depth.

    a_sq[0] is 0 by convention (the recurrence never uses it).
    """

    b: tuple
    a_sq: tuple

    def __post_init__(self):
        if len(self.b) != len(self.a_sq):
            raise DomainError("b and a_sq must cover the same index range")
        if not self.b:
            raise DomainError("empty marginal recurrence")
        if self.a_sq[0] != 0:
            raise DomainError("a_sq[0] is 0 by convention")

    @property
    def depth(self) -> int:
        return len(self.b) - 1


def marginal_positive(marg: MarginalRecurrence) -> bool:
    """Whether a_n^2 > 0 for n >= 1, as holds for any positive measure."""
    return all(v > 0 for v in marg.a_sq[1:])


def marginal_mu1(family: ShiftFamily, depth: int) -> MarginalRecurrence:
    """First measure's recurrence read off the axis-1 family.

    b_n is the bottom beta entry of level n; a_n^2 the bottom gamma entry of
    level n-1.  Needs levels 0..depth.
    """
    if family.axis is not Axis.E1:
        raise DomainError("marginal of the first measure needs the axis-1 family")
    if family.max_level < depth:
        raise RangeError(f"family has levels 0..{family.max_level}, need {depth}")
    b = [family.table(n).beta[n] for n in range(depth + 1)]
    a_sq = [Fraction(0)] + [family.table(n - 1).gamma[n] for n in range(1, depth + 1)]
    return MarginalRecurrence(tuple(b), tuple(a_sq))


def marginal_mu2(family: ShiftFamily, depth: int) -> MarginalRecurrence:
    """Second measure's recurrence read off the axis-2 family.

    b_k adds the level-k c-sequence start to the bottom beta entry; a_k^2 is
    the bottom gamma entry of level k.  Depends on the free seed only through
    b_0 (the higher starts are determined by the data).
    """
    if family.axis is not Axis.E2:
        raise DomainError("marginal of the second measure needs the axis-2 family")
    if family.max_level < depth:
        raise RangeError(f"family has levels 0..{family.max_level}, need {depth}")
    b = [family.table(k).beta[k] + family.cseq(k)[0] for k in range(depth + 1)]
    a_sq = [Fraction(0)] + [family.table(k).gamma[k] for k in range(1, depth + 1)]
    return MarginalRecurrence(tuple(b), tuple(a_sq))


def nn_from_shifts(
    table0: StepLineCoeffs, c00_seed, max_diag: int, variant: str = "product"
) -> NNGrid:
    """Assemble the full grid over n + m <= max_diag from the two shift families.

    Needs step-line indices up to 2*max_diag + 1.  Below-diagonal entries
    (m < n) read the axis-1 family at level n - m; the rest read the axis-2
    family at level m - n (the diagonal itself sits at level 0, which is why
    the free seed enters).  A zero c-sequence value used as a divisor raises
    NormalityError at the offending lattice point.
    """
    if max_diag < 0:
        raise DomainError("need max_diag >= 0")
    seed = as_fraction(c00_seed)
    fam1 = build_family_e1(table0, max_diag, max_diag, variant)
    fam2 = build_family_e2(table0, max_diag, max_diag, seed, variant)
    rows = []
    for n in range(max_diag + 1):
        row = []
        for m in range(max_diag + 1 - n):
            if n == 0 and m == 0:
                a = b = Fraction(0)
                c = table0.beta[0]
                d = c + seed
            elif m < n:
                j, q = n - m, m
                t = fam1.table(j)
                cs = fam1.cseq(j)
                c = t.beta[n + m]
                d = c + cs[q]
                if cs[q] == 0:
                    raise NormalityError(Axis.E1.value, j, q, n + m + 1)
                a = -fam1.table(j - 1).delta[n + m + 1] / cs[q]
                b = Fraction(0) if m == 0 else t.gamma[n + m] - a
            else:
                k, p = m - n, n
                t = fam2.table(k)
                cs = fam2.cseq(k)
                c = t.beta[n + m]
                d = c + cs[p]
                if p == 0:
                    a = Fraction(0)
                    b = t.gamma[n + m]
                else:
                    if cs[p - 1] == 0:
                        raise NormalityError(Axis.E2.value, k, p - 1, n + m)
                    a = -t.delta[n + m] / cs[p - 1]
                    b = t.gamma[n + m] - a
            row.append((a, b, c, d))
        rows.append(tuple(row))
    return NNGrid(max_diag, tuple(rows))
