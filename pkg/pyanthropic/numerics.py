# -*- coding: utf-8 -*-
"""Exact and log10-domain arithmetic, Gaussian helpers and seeded random streams."""

import math
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.special import ndtri

from pyanthropic.errors import DegenerateEvidenceError, DomainError

# CONSTANTS -------------------------------------------------------------------

LN10 = math.log(10.0)
EXACT_LIMIT = 2**128  # numerators / denominators beyond this leave exact mode

ExactProb = Fraction

###############################################################################


@total_ordering
class Magnitude(object):
    """
    Nonnegative real number stored as its base-10 logarithm.

    Zero is represented by log10 = -inf. Arithmetic only accepts other
    Magnitudes; use as_magnitude() to convert plain numbers.
    """

    __slots__ = ("_log10",)

    def __init__(self, log10: float):
        log10 = float(log10)
        if math.isnan(log10) or log10 == math.inf:
            raise DomainError(f"invalid log10 value for Magnitude: {log10}")
        object.__setattr__(self, "_log10", log10)

    def __setattr__(self, name, value):
        raise AttributeError("Magnitude is immutable")

    @property
    def log10(self) -> float:
        return self._log10

    @classmethod
    def zero(cls) -> "Magnitude":
        return cls(-math.inf)

    @classmethod
    def one(cls) -> "Magnitude":
        return cls(0.0)

    @classmethod
    def power10(cls, k: Union[int, float]) -> "Magnitude":
        """10^k."""
        return cls(k)

    @classmethod
    def from_value(cls, x: Union[int, float, Fraction]) -> "Magnitude":
        """Convert a nonnegative int, float or Fraction."""
        if x < 0:
            raise DomainError(f"Magnitude cannot hold negative value {x}")
        if x == 0:
            return cls.zero()
        if isinstance(x, Fraction):
            # math.log10 is exact enough for arbitrarily large ints
            return cls(math.log10(x.numerator) - math.log10(x.denominator))
        if isinstance(x, float) and math.isinf(x):
            raise DomainError("Magnitude cannot hold inf")
        return cls(math.log10(x))

    def is_zero(self) -> bool:
        return self._log10 == -math.inf

    def to_float(self) -> float:
        """Float value; overflows to inf and underflows to 0.0."""
        if self.is_zero():
            return 0.0
        try:
            return math.pow(10.0, self._log10)
        except OverflowError:
            return math.inf

    def isclose(self, other: "Magnitude", abs_tol: float = 1e-12) -> bool:
        """Compare in log10 space."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return math.isclose(self._log10, other._log10, rel_tol=0.0, abs_tol=abs_tol)

    def __mul__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Magnitude.zero()
        return Magnitude(self._log10 + other._log10)

    def __truediv__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("Magnitude division by zero")
        if self.is_zero():
            return Magnitude.zero()
        return Magnitude(self._log10 - other._log10)

    def __pow__(self, k: Union[int, float]):
        if self.is_zero():
            if k == 0:
                return Magnitude.one()
            if k < 0:
                raise ZeroDivisionError("zero Magnitude to a negative power")
            return Magnitude.zero()
        return Magnitude(self._log10 * k)

    def __add__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return mag_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return mag_sub(self, other)

    def __eq__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return self._log10 == other._log10

    def __lt__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return self._log10 < other._log10

    def __hash__(self):
        return hash(("Magnitude", self._log10))

    def __repr__(self):
        return f"Magnitude(log10={self._log10!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        if float(self._log10).is_integer():
            return f"10^{int(self._log10)}"
        return f"10^{self._log10:.6g}"


###############################################################################


def mag_add(a: Magnitude, b: Magnitude) -> Magnitude:
    """10^a + 10^b, computed as max + log10(1 + 10^(min - max))."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    hi, lo = (a.log10, b.log10) if a.log10 >= b.log10 else (b.log10, a.log10)
    return Magnitude(hi + math.log1p(10.0 ** (lo - hi)) / LN10)


def mag_sub(a: Magnitude, b: Magnitude) -> Magnitude:
    """10^a - 10^b for a >= b."""
    if b > a:
        raise DomainError(f"mag_sub would go negative: {a} - {b}")
    if b.is_zero():
        return a
    d = b.log10 - a.log10
    if d == 0.0:
        return Magnitude.zero()
    return Magnitude(a.log10 + math.log10(-math.expm1(d * LN10)))


def mag_sum(values: Sequence[Magnitude]) -> Magnitude:
    """Log-sum of many Magnitudes in one pass around the largest term."""
    finite = [v.log10 for v in values if not v.is_zero()]
    if not finite:
        return Magnitude.zero()
    top = max(finite)
    return Magnitude(top + math.log10(math.fsum(10.0 ** (x - top) for x in finite)))


###############################################################################


def is_exact(x) -> bool:
    """True for ints and Fractions small enough to stay in exact mode."""
    if isinstance(x, bool):
        return False
    if isinstance(x, int):
        return abs(x) < EXACT_LIMIT
    if isinstance(x, Fraction):
        return abs(x.numerator) < EXACT_LIMIT and x.denominator < EXACT_LIMIT
    return False


def as_magnitude(x) -> Magnitude:
    """Explicit conversion of any supported number to a Magnitude."""
    if isinstance(x, Magnitude):
        return x
    if isinstance(x, (int, float, Fraction)) and not isinstance(x, bool):
        return Magnitude.from_value(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Magnitude")


def as_exact(x) -> Fraction:
    """
    Explicit conversion to an exact Fraction.

    Magnitudes convert only if they are an integer power of ten within the
    exact range; floats are rejected.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Magnitude):
        if x.is_zero():
            return Fraction(0)
        k = x.log10
        if not k.is_integer() or 10 ** abs(int(k)) >= EXACT_LIMIT:
            raise DomainError(f"{x!r} has no exact representation")
        return Fraction(10) ** int(k)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact fraction")


def unify(values: Sequence) -> list:
    """
    Bring numbers to a common representation.

    All-exact input comes back as Fractions, anything else as Magnitudes.
    """
    if all(is_exact(v) for v in values):
        return [Fraction(v) for v in values]
    return [as_magnitude(v) for v in values]


def to_float(x) -> float:
    if isinstance(x, Magnitude):
        return x.to_float()
    return float(x)


###############################################################################


def normalize(weights: Sequence) -> list[float]:
    """
    Normalize nonnegative weights (numbers or Magnitudes) to float probabilities.

    Results below the float range come back as 0.0; use normalize_log to
    keep them.
    """
    return [m.to_float() for m in normalize_log(weights)]


def normalize_log(weights: Sequence) -> list[Magnitude]:
    """Normalize nonnegative weights, returning Magnitudes."""
    mags = [as_magnitude(w) for w in weights]
    total = mag_sum(mags)
    if total.is_zero():
        raise DegenerateEvidenceError("all weights are zero")
    return [m / total for m in mags]


def normalize_exact(weights: Sequence) -> list[Fraction]:
    """Normalize exact weights; result sums to exactly 1."""
    fr = [Fraction(w) for w in weights]
    if any(w < 0 for w in fr):
        raise DomainError("negative weight")
    total = sum(fr)
    if total == 0:
        raise DegenerateEvidenceError("all weights are zero")
    return [w / total for w in fr]


def compensated_mean(values) -> float:
    """Mean using math.fsum."""
    n = len(values)
    if n == 0:
        raise DomainError("mean of empty sequence")
    return math.fsum(values) / n


###############################################################################

Gaussian10 = NamedTuple("gaussian10", [("mean10", float), ("sd10", float)])
Gaussian10.__doc__ = "Normal distribution of log10 of a positive variable."


def _check_gaussian(g: Gaussian10):
    if not math.isfinite(g.sd10) or g.sd10 < 0:
        raise DomainError(f"sd10 must be finite and >= 0, got {g.sd10}")


def lognormal_mean(g: Gaussian10) -> float:
    """E[10^X] for X ~ N(mean10, sd10^2)."""
    _check_gaussian(g)
    return 10.0**g.mean10 * math.exp((g.sd10 * LN10) ** 2 / 2)


def std_normal_quantile(q: float) -> float:
    """Quantile of the standard normal distribution, q in (0, 1)."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must be in (0, 1), got {q}")
    return float(ndtri(q))


def central_interval(g: Gaussian10, coverage: float = 0.95) -> tuple[float, float]:
    """
    Central interval of 10^X holding the given probability mass.

    Parameters
    ----------
    g : Gaussian10
        Distribution of X = log10 of the variable.
    coverage : float, optional
        Probability mass inside the interval. The default is 0.95.

    Returns
    -------
    tuple[float, float]
        (lower, upper).
    """
    _check_gaussian(g)
    if not 0.0 < coverage < 1.0:
        raise DomainError(f"coverage must be in (0, 1), got {coverage}")
    z = std_normal_quantile(0.5 + coverage / 2)
    return (10.0 ** (g.mean10 - z * g.sd10), 10.0 ** (g.mean10 + z * g.sd10))


###############################################################################


class RandomSource(object):
    """
    Seeded, splittable source of numpy Generators.

    Substream k is derived from SeedSequence(seed, spawn_key=(k,)), so it
    never depends on how much of any other substream was consumed.
    """

    ALGORITHMS = {"philox": np.random.Philox, "pcg64": np.random.PCG64}

    def __init__(self, seed: int, algorithm: str = "philox"):
        if not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        if algorithm not in self.ALGORITHMS:
            raise DomainError(
                f"unknown algorithm '{algorithm}', use one of {sorted(self.ALGORITHMS)}"
            )
        self.seed = int(seed)
        self.algorithm = algorithm

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, algorithm='{self.algorithm}')"

    def _make(self, seq: np.random.SeedSequence) -> np.random.Generator:
        return np.random.Generator(self.ALGORITHMS[self.algorithm](seq))

    def generator(self) -> np.random.Generator:
        """Fresh generator for the root stream."""
        return self._make(np.random.SeedSequence(self.seed))

    def substream(self, k: int) -> np.random.Generator:
        """Fresh generator for substream k >= 0."""
        if k < 0:
            raise DomainError("substream index must be >= 0")
        return self._make(np.random.SeedSequence(self.seed, spawn_key=(int(k),)))
