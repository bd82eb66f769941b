"""Concrete measures: discrete test systems and the modified-Bessel catalog.

Two kinds of input data feed the package.  Discrete measures with rational
support points and weights make every quantity in the pipeline an exact
rational, which is what the cross-check and round-trip suites run on.  The
modified-Bessel weight pair (K_nu-type weights on the positive half line)
has step-line coefficients in closed form, polynomial in the index, and is
the printed-table example the test suite pins digits against.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .numerics import as_fraction
from .stepline import StepLineCoeffs, level0


@dataclass(frozen=True)
class DiscreteMeasure:
    """A finite positive measure: distinct rational points with positive weights."""

    support: tuple
    weights: tuple

    def __post_init__(self):
        support = tuple(as_fraction(x) for x in self.support)
        weights = tuple(as_fraction(w) for w in self.weights)
        if len(support) != len(weights):
            raise DomainError("support and weights must have equal length")
        if not support:
            raise DomainError("empty measure")
        if len(set(support)) != len(support):
            raise DomainError("support points must be distinct")
        if any(w <= 0 for w in weights):
            raise DomainError("weights must be positive")
        order = sorted(range(len(support)), key=lambda i: support[i])
        object.__setattr__(self, "support", tuple(support[i] for i in order))
        object.__setattr__(self, "weights", tuple(weights[i] for i in order))

    @property
    def size(self) -> int:
        return len(self.support)

    def moment(self, k: int) -> Fraction:
        if k < 0:
            raise DomainError("negative moment order")
        return sum((w * x**k for x, w in zip(self.support, self.weights)), Fraction(0))

    def mean_ratio(self) -> Fraction:
        """First-moment ratio m1/m0 (the measure's mean)."""
        return self.moment(1) / self.moment(0)


def moments(measure: DiscreteMeasure, kmax: int) -> tuple:
    """Moments m_0..m_kmax of a discrete measure, exact."""
    return tuple(measure.moment(k) for k in range(kmax + 1))


def convex_combination(mu1: DiscreteMeasure, mu2: DiscreteMeasure, lam) -> DiscreteMeasure:
    """The measure lam*mu1 + (1-lam)*mu2, supports merged, 0 <= lam <= 1."""
    lam = as_fraction(lam)
    if not 0 <= lam <= 1:
        raise DomainError("combination weight must lie in [0, 1]")
    acc: dict[Fraction, Fraction] = {}
    for x, w in zip(mu1.support, mu1.weights):
        acc[x] = acc.get(x, Fraction(0)) + lam * w
    for x, w in zip(mu2.support, mu2.weights):
        acc[x] = acc.get(x, Fraction(0)) + (1 - lam) * w
    points = [(x, w) for x, w in acc.items() if w != 0]
    if not points:
        raise DomainError("combination has no mass")
    return DiscreteMeasure(tuple(x for x, _ in points), tuple(w for _, w in points))


def random_system(seed: int, r: int = 2, size: int = 8, spread: int | None = None):
    """Deterministic tuple of r discrete measures with pairwise distinct means.

    Support points are distinct integers in [-spread, spread] (spread defaults
    to 2*size), weights are integers in 1..9.  Measures whose mean collides
    with an earlier one are redrawn from the same stream, so the result is a
    pure function of the arguments.
    """
    if r < 1:
        raise DomainError("need at least one measure")
    if size < 1:
        raise DomainError("need at least one support point")
    if spread is None:
        spread = 2 * size
    if 2 * spread + 1 < size:
        raise DomainError(f"spread {spread} too small for {size} distinct points")
    rng = random.Random(seed)
    window = range(-spread, spread + 1)

    def draw() -> DiscreteMeasure:
        support = rng.sample(window, size)
        weights = [rng.randint(1, 9) for _ in range(size)]
        return DiscreteMeasure(tuple(support), tuple(weights))

    out: list[DiscreteMeasure] = []
    seen: set[Fraction] = set()
    for _ in range(r):
        mu = draw()
        while mu.mean_ratio() in seen:
            mu = draw()
        seen.add(mu.mean_ratio())
        out.append(mu)
    return tuple(out)


def random_pair(seed: int, size: int = 8, spread: int | None = None):
    """Deterministic pair of discrete measures with distinct means."""
    return random_system(seed, 2, size, spread)


def bessel_stepline(alpha, nu, nmax: int) -> StepLineCoeffs:
    """Step-line table of the modified-Bessel weight pair, indices 0..nmax.

    The two weights on the positive half line are x^(alpha + nu/2) K_nu(2 sqrt x)
    and its companion with nu+1; their step-line coefficients are the cubic /
    quartic / sextic polynomials in n evaluated here.  Requires alpha > -1
    and nu >= 0.
    """
    a, v = as_fraction(alpha), as_fraction(nu)
    if not a > -1:
        raise DomainError("need alpha > -1")
    if not v >= 0:
        raise DomainError("need nu >= 0")
    if nmax < 0:
        raise DomainError("need nmax >= 0")
    ns = range(nmax + 1)
    beta = [(n + a + 1) * (3 * n + a + 2 * v) - (a + 1) * (v - 1) for n in ns]
    gamma = [n * (n + a) * (n + a + v) * (3 * n + 2 * a + v) for n in ns]
    delta = [
        n * (n - 1) * (n + a) * (n + a - 1) * (n + a + v) * (n + a + v - 1) for n in ns
    ]
    return level0(beta, gamma, delta, starts=(0, 0, 0))
