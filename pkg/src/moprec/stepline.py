"""Step-line recurrence tables and the two families of level shifts.

A two-measure type II system has, on the step-line, a four-term recurrence

    x p_m = p_{m+1} + beta_m p_m + gamma_m p_{m-1} + delta_m p_{m-2}

and each *shifted* step-line (multi-indices displaced by j along the first
measure, or by k along the second) satisfies a recurrence of the same shape
with its own coefficient tables.  The shift operations here move one level at
a time: given the tables at level j-1 (axis 1) or level k (axis 2), they
produce the tables one level further out together with the c-sequence that
drives the update.  The c-sequence obeys a first-order Riccati-type
recursion; its start is determined by the previous level on axis 1, and on
axis 2 by the previous level except at level 0, where it is the system's one
free parameter.

All arithmetic is exact.  Tables store a contiguous index range per
coefficient; reading outside that range raises RangeError rather than
inventing zeros.  The three structural zeros each shifted level starts with
(gamma at the lowest index, delta at the two lowest) are stored explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError, InitError, NormalityError, RangeError, SeedMismatch
from .numerics import as_fraction


class Axis(Enum):
    """Which component of the multi-index a shift family advances."""

    E1 = "e1"
    E2 = "e2"


@dataclass(frozen=True)
class CoeffSeq:
    """A coefficient sequence stored on a contiguous integer index range."""

    start: int
    values: tuple
    label: str = "coeff"

    @property
    def stop(self) -> int:
        """One past the largest stored index."""
        return self.start + len(self.values)

    @property
    def last(self) -> int:
        return self.stop - 1

    def __contains__(self, i: int) -> bool:
        return self.start <= i < self.stop

    def __getitem__(self, i: int):
        if i not in self:
            raise RangeError(
                f"{self.label}[{i}] not stored (range {self.start}..{self.last})"
            )
        return self.values[i - self.start]

    def items(self):
        return ((self.start + i, v) for i, v in enumerate(self.values))


def _seq(start: int, values, label: str) -> CoeffSeq:
    return CoeffSeq(start, tuple(as_fraction(v) for v in values), label)


@dataclass(frozen=True)
class StepLineCoeffs:
    """beta/gamma/delta tables of one (possibly shifted) step-line.

    ``level`` 0 is the unshifted step-line shared by both axes; ``axis`` is
    None there.  For level >= 1 the axis records which shift family produced
    the table.
    """

    axis: Axis | None
    level: int
    beta: CoeffSeq
    gamma: CoeffSeq
    delta: CoeffSeq

    def __post_init__(self):
        if self.level < 0:
            raise DomainError("negative shift level")
        if self.level == 0:
            if self.axis is not None:
                raise DomainError("level 0 is axis-independent; use axis=None")
            return
        if self.axis is None:
            raise DomainError("shifted tables must name their axis")
        # structural zeros at the bottom of every shifted level
        base = self.level if self.axis is Axis.E1 else self.level - 1
        for seq, idx in ((self.gamma, base), (self.delta, base), (self.delta, base + 1)):
            if idx in seq and seq[idx] != 0:
                raise DomainError(
                    f"{seq.label}[{idx}] must be 0 at {self.axis.value} level {self.level}"
                )


def level0(beta, gamma, delta, *, starts=(0, 1, 2)) -> StepLineCoeffs:
    """Build an unshifted step-line table from plain sequences.

    ``starts`` gives the first stored index of beta, gamma, and delta.  The
    conventional table has beta from 0, gamma from 1, delta from 2; catalog
    formulas that evaluate to 0 at lower indices may store those too.
    """
    return StepLineCoeffs(
        None,
        0,
        _seq(starts[0], beta, "beta"),
        _seq(starts[1], gamma, "gamma"),
        _seq(starts[2], delta, "delta"),
    )


@dataclass(frozen=True)
class CSequence:
    """The c-sequence attached to one level shift.

    For axis 1 it belongs to the step from level-1 to level (values
    c_0..c_{depth-level}); for axis 2 to the step from its level to the next.
    """

    axis: Axis
    level: int
    values: tuple

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int):
        if not 0 <= n < len(self.values):
            raise RangeError(
                f"c-sequence ({self.axis.value}, level {self.level}) has no entry "
                f"n={n} (stored 0..{len(self.values) - 1})"
            )
        return self.values[n]


def seed_c00(m0, m1, beta0) -> Fraction:
    """Free parameter fixed from the second measure's first two moments.

    Returns m1/m0 - beta0, the value that makes the level-0 axis-2 shift
    reproduce the second measure's actual recurrence data.
    """
    m0 = as_fraction(m0)
    if m0 == 0:
        raise DomainError("zero total mass: cannot form moment ratio m1/m0")
    return as_fraction(m1) / m0 - as_fraction(beta0)


def _check_axis(prev: StepLineCoeffs, axis: Axis):
    if prev.axis is not None and prev.axis is not axis:
        raise DomainError(
            f"table belongs to axis {prev.axis.value}, expected {axis.value}"
        )


def _initial_c_e1(prev: StepLineCoeffs) -> Fraction:
    """Determined start of the axis-1 c-sequence: -delta[j+1]/gamma[j] at level j-1."""
    j = prev.level + 1
    g = prev.gamma[j]
    if g == 0:
        raise InitError(Axis.E1.value, j, j)
    return -prev.delta[j + 1] / g


def determined_seed_e2(table: StepLineCoeffs) -> Fraction:
    """Determined start of the axis-2 c-sequence at level k >= 1: delta[k+1]/gamma[k]."""
    k = table.level
    if k < 1:
        raise DomainError("level-0 axis-2 seed is a free parameter, not determined")
    g = table.gamma[k]
    if g == 0:
        raise InitError(Axis.E2.value, k, k)
    return table.delta[k + 1] / g


def _resolve_c0_e2(prev: StepLineCoeffs, c0_seed) -> Fraction:
    if prev.level == 0:
        if c0_seed is None:
            raise DomainError("axis-2 shift from level 0 needs the free seed c0")
        return as_fraction(c0_seed)
    determined = determined_seed_e2(prev)
    if c0_seed is not None and as_fraction(c0_seed) != determined:
        raise SeedMismatch(prev.level, determined, as_fraction(c0_seed))
    return determined


def riccati_csequence(
    prev: StepLineCoeffs, axis: Axis, depth: int, c0=None
) -> CSequence:
    """Run the c-sequence recursion on its own, from previous-level data.

    This is the plain first-order recursion (numerators and denominators read
    off the previous level only); the shift operations below cross this with
    their fused update.  ``depth`` has the same meaning as for the shifts:
    the sequence gets entries n = 0..depth-level.
    """
    _check_axis(prev, axis)
    if axis is Axis.E1:
        off = prev.level + 1  # the level being targeted
        if c0 is None:
            c0 = _initial_c_e1(prev)
        sign = Fraction(-1)
    else:
        off = prev.level
        c0 = _resolve_c0_e2(prev, c0)
        sign = Fraction(1)
    level = off if axis is Axis.E1 else off + 1
    steps = depth - off
    if steps < 0:
        raise DomainError(f"depth {depth} below shift level")
    values = [as_fraction(c0)]
    for n in range(1, steps + 1):
        even = 2 * n + off
        denom = prev.delta[even] + sign * values[n - 1] * prev.gamma[even]
        if denom == 0:
            raise NormalityError(axis.value, level, n, even)
        values.append(values[n - 1] * prev.delta[even + 1] / denom)
    return CSequence(axis, off, tuple(values))


def _shift(
    prev: StepLineCoeffs,
    axis: Axis,
    depth: int,
    c0,
    variant: str,
) -> tuple[StepLineCoeffs, CSequence]:
    """Shared body of the two shift operations.

    Axis 1 and axis 2 differ only in the sign with which the c-sequence
    enters every update (and in where their c0 comes from, resolved by the
    callers).  ``variant`` selects how the odd-position delta and the next c
    are computed: "product" (default) uses the quotient identities through
    the freshly updated even-position delta; "direct" runs the plain
    recursion first and applies the additive delta update.  The two agree
    identically in exact arithmetic.
    """
    if variant not in ("product", "direct"):
        raise DomainError(f"unknown shift variant {variant!r}")
    sign = Fraction(-1) if axis is Axis.E1 else Fraction(1)
    off = prev.level + 1 if axis is Axis.E1 else prev.level
    new_level = prev.level + 1
    steps = depth - off
    if steps < 0:
        raise DomainError(f"depth {depth} below shift level {new_level}")

    c = [as_fraction(c0)]
    beta: dict[int, Fraction] = {}
    gamma: dict[int, Fraction] = {}
    delta: dict[int, Fraction] = {}

    beta[off] = prev.beta[off] + sign * c[0]
    beta[off + 1] = prev.beta[off + 1] - sign * c[0]
    gamma[off] = Fraction(0)
    delta[off] = Fraction(0)
    delta[off + 1] = Fraction(0)
    gamma[off + 1] = prev.gamma[off + 1] - sign * c[0] * (prev.beta[off] - beta[off + 1])

    direct = riccati_csequence(prev, axis, depth, c[0]) if variant == "direct" else None

    for n in range(1, steps + 1):
        even = 2 * n + off
        odd = even + 1
        d_even = prev.delta[even] + sign * c[n - 1] * prev.gamma[even]
        if d_even == 0:
            raise NormalityError(axis.value, new_level, n, even)
        if variant == "product":
            cn = c[n - 1] * prev.delta[odd] / d_even
            d_odd = prev.delta[odd] * prev.delta[even] / d_even
        else:
            cn = direct[n]
            d_odd = prev.delta[odd] - sign * cn * prev.gamma[even]
        c.append(cn)
        beta[even] = prev.beta[even] + sign * cn
        gamma[even] = prev.gamma[even]
        delta[even] = d_even
        beta[odd] = prev.beta[odd] - sign * cn
        gamma[odd] = prev.gamma[odd] - sign * cn * (prev.beta[even] - beta[odd])
        delta[odd] = d_odd

    hi = 2 * steps + off + 1
    table = StepLineCoeffs(
        axis,
        new_level,
        _seq(off, [beta[i] for i in range(off, hi + 1)], "beta"),
        _seq(off, [gamma[i] for i in range(off, hi + 1)], "gamma"),
        _seq(off, [delta[i] for i in range(off, hi + 1)], "delta"),
    )
    cseq_level = new_level if axis is Axis.E1 else prev.level
    return table, CSequence(axis, cseq_level, tuple(c))


def shift_e1(
    prev: StepLineCoeffs, depth: int, variant: str = "product"
) -> tuple[StepLineCoeffs, CSequence]:
    """Shift one level along axis 1: level j-1 tables to level j.

    Returns the level-j tables (indices j..2*depth-j+1) and the c-sequence
    c_0..c_{depth-j} of the step.  The c-sequence start is determined by the
    previous level; a zero gamma there raises InitError, and a vanishing
    recursion denominator raises NormalityError with the level, step, and
    table index of the offending entry.
    """
    _check_axis(prev, Axis.E1)
    c0 = _initial_c_e1(prev)
    return _shift(prev, Axis.E1, depth, c0, variant)


def shift_e2(
    prev: StepLineCoeffs,
    depth: int,
    c0_seed=None,
    variant: str = "product",
) -> tuple[StepLineCoeffs, CSequence]:
    """Shift one level along axis 2: level k tables to level k+1.

    From level 0 the caller must supply ``c0_seed`` (the system's free
    parameter; see :func:`seed_c00`).  From level k >= 1 the start is
    determined by the data; a supplied seed is then verified and a
    disagreement raises SeedMismatch.
    """
    _check_axis(prev, Axis.E2)
    c0 = _resolve_c0_e2(prev, c0_seed)
    return _shift(prev, Axis.E2, depth, c0, variant)


def riccati_closed_form(prev: StepLineCoeffs, axis: Axis, level: int, d0, n: int):
    """Closed form for d_n = 1/c_n of the shift targeting ``level``.

    Cross-check utility: unrolls the linearized first-order recursion
    d_n = (d_{n-1} * delta_even -/+ gamma_even) / delta_odd over the
    previous level's entries (minus on axis 1, plus on axis 2), so it needs
    every delta it divides by to be nonzero.  Must equal the reciprocal of
    the recursive c-sequence entry wherever both are defined.
    """
    _check_axis(prev, axis)
    if level != prev.level + 1:
        raise DomainError(f"closed form targets level {prev.level + 1}, got {level}")
    off = prev.level + 1 if axis is Axis.E1 else prev.level
    sign = Fraction(-1) if axis is Axis.E1 else Fraction(1)
    if n < 0:
        raise DomainError("negative step index")
    total = as_fraction(d0)
    ratio = Fraction(1)  # product of delta_odd/delta_even up to the current i
    outer = Fraction(1)  # product of delta_even/delta_odd up to n
    for i in range(1, n + 1):
        even = 2 * i + off
        odd = even + 1
        if prev.delta[odd] == 0 or prev.delta[even] == 0:
            raise DomainError(
                f"closed form needs nonzero delta at indices {even}, {odd}"
            )
        ratio *= prev.delta[odd] / prev.delta[even]
        total += sign * (prev.gamma[even] / prev.delta[odd]) * ratio
        outer *= prev.delta[even] / prev.delta[odd]
    return total * outer


@dataclass(frozen=True)
class ShiftFamily:
    """All levels 0..max_level of one shift axis, built at a common depth.

    ``tables[l]`` is the level-l table.  For axis 1, ``csequences[l]`` is the
    c-sequence of the step into level l (None at l = 0).  For axis 2,
    ``csequences[l]`` is the c-sequence at level l: full for l < max_level,
    and at l = max_level a one-entry sequence holding just its start.
    """

    axis: Axis
    depth: int
    tables: tuple[StepLineCoeffs, ...]
    csequences: tuple[CSequence | None, ...]

    @property
    def max_level(self) -> int:
        return len(self.tables) - 1

    def table(self, level: int) -> StepLineCoeffs:
        if not 0 <= level <= self.max_level:
            raise RangeError(f"family has levels 0..{self.max_level}, asked for {level}")
        return self.tables[level]

    def cseq(self, level: int) -> CSequence:
        if not 0 <= level <= self.max_level or self.csequences[level] is None:
            raise RangeError(f"no c-sequence stored at level {level}")
        return self.csequences[level]


def build_family_e1(
    table0: StepLineCoeffs, max_level: int, depth: int, variant: str = "product"
) -> ShiftFamily:
    """Apply the axis-1 shift repeatedly: levels 0..max_level at one depth."""
    if table0.level != 0:
        raise DomainError("family must start from a level-0 table")
    if not 0 <= max_level <= depth:
        raise DomainError("need 0 <= max_level <= depth")
    tables = [table0]
    cseqs: list[CSequence | None] = [None]
    for _ in range(max_level):
        table, cs = shift_e1(tables[-1], depth, variant)
        tables.append(table)
        cseqs.append(cs)
    return ShiftFamily(Axis.E1, depth, tuple(tables), tuple(cseqs))


def build_family_e2(
    table0: StepLineCoeffs,
    max_level: int,
    depth: int,
    c00_seed,
    variant: str = "product",
) -> ShiftFamily:
    """Apply the axis-2 shift repeatedly, starting from the free seed.

    Each level's c-sequence is stored at that level; the top level carries a
    one-entry sequence with its (determined) start so that marginal and grid
    extraction can read c_0 everywhere up to max_level.
    """
    if table0.level != 0:
        raise DomainError("family must start from a level-0 table")
    if not 0 <= max_level <= depth:
        raise DomainError("need 0 <= max_level <= depth")
    tables = [table0]
    cseqs: list[CSequence | None] = []
    seed = as_fraction(c00_seed)
    for k in range(max_level):
        table, cs = shift_e2(tables[-1], depth, seed if k == 0 else None, variant)
        cseqs.append(cs)
        tables.append(table)
    if max_level == 0:
        cseqs.append(CSequence(Axis.E2, 0, (seed,)))
    else:
        cseqs.append(
            CSequence(Axis.E2, max_level, (determined_seed_e2(tables[-1]),))
        )
    return ShiftFamily(Axis.E2, depth, tuple(tables), tuple(cseqs))
