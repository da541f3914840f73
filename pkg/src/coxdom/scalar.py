"""Scalar arithmetic backends.

Two interchangeable backends share one small interface:

* ``FloatArithmetic`` -- float64 with an absolute tolerance ``eps``; values
  within ``eps`` compare equal.
* ``RationalArithmetic`` -- exact ``fractions.Fraction`` arithmetic, usable
  when every form value is rational (bond labels 2 and 3, rational values on
  infinite bonds).

Vectors are plain tuples of backend scalars.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from itertools import product

from .errors import UnsupportedBackend

DEFAULT_EPS = 1e-9


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class FloatArithmetic:
    name = "float"
    exact = False

    def __init__(self, eps: float = DEFAULT_EPS):
        if not eps > 0:
            raise ValueError("eps must be positive")
        self.eps = float(eps)

    def __repr__(self):
        return f"FloatArithmetic(eps={self.eps!r})"

    def scalar(self, value) -> float:
        if isinstance(value, str):
            return float(Fraction(value)) if "/" in value else float(value)
        return float(value)

    def compare(self, x, y) -> Ordering:
        diff = x - y
        if diff > self.eps:
            return Ordering.GREATER
        if diff < -self.eps:
            return Ordering.LESS
        return Ordering.EQUAL

    def sign(self, x) -> int:
        return int(self.compare(x, 0.0))

    def is_zero(self, x) -> bool:
        return -self.eps <= x <= self.eps

    def cos_pi_over(self, m: int) -> float:
        return math.cos(math.pi / m)

    def to_float(self, x) -> float:
        return float(x)

    def vectors_equal(self, u, v) -> bool:
        return all(abs(a - b) <= self.eps * max(1.0, abs(a), abs(b)) for a, b in zip(u, v))

    def export(self, x):
        """JSON-friendly rendering, stable across runs."""
        r = round(float(x), 12) + 0.0
        if r == int(r) and abs(r) < 2**53:
            return int(r)
        return r


class RationalArithmetic:
    name = "rational"
    exact = True
    eps = 0

    def __repr__(self):
        return "RationalArithmetic()"

    def scalar(self, value) -> Fraction:
        if isinstance(value, float):
            # floats only reach here from user code; go through the decimal
            # literal so 0.5 becomes 1/2 rather than a binary expansion
            return Fraction(repr(value))
        return Fraction(value)

    def compare(self, x, y) -> Ordering:
        if x > y:
            return Ordering.GREATER
        if x < y:
            return Ordering.LESS
        return Ordering.EQUAL

    def sign(self, x) -> int:
        return (x > 0) - (x < 0)

    def is_zero(self, x) -> bool:
        return x == 0

    def cos_pi_over(self, m: int) -> Fraction:
        if m == 2:
            return Fraction(0)
        if m == 3:
            return Fraction(1, 2)
        raise UnsupportedBackend(
            f"cos(pi/{m}) is irrational; use the float backend for bond label {m}"
        )

    def to_float(self, x) -> float:
        return float(x)

    def vectors_equal(self, u, v) -> bool:
        return tuple(u) == tuple(v)

    def export(self, x):
        x = Fraction(x)
        if x.denominator == 1:
            return int(x)
        return f"{x.numerator}/{x.denominator}"


def make_arithmetic(backend: str = "float", eps: float = DEFAULT_EPS):
    if backend == "float":
        return FloatArithmetic(eps)
    if backend == "rational":
        return RationalArithmetic()
    raise UnsupportedBackend(f"unknown backend {backend!r}")


def compare(x, y, arithmetic=None) -> Ordering:
    """Three-way comparison under the tolerance of ``arithmetic`` (float by default)."""
    if arithmetic is None:
        arithmetic = FloatArithmetic()
    return arithmetic.compare(x, y)


class ToleranceIndex:
    """Dictionary keyed by vectors, robust to float round-off.

    Float vectors are bucketed by rounding to ``digits`` decimals; a lookup
    also probes the neighbouring bucket of every coordinate that sits close
    to a rounding boundary, then confirms candidates with
    ``arithmetic.vectors_equal``. Exact arithmetic uses the tuple itself.
    """

    def __init__(self, arithmetic, digits: int = 6):
        self.arithmetic = arithmetic
        self.digits = digits
        self._scale = 10.0**digits
        self._buckets: dict = {}

    def __len__(self):
        return sum(len(v) for v in self._buckets.values())

    def _key(self, vec):
        if self.arithmetic.exact:
            return tuple(vec)
        return tuple(int(math.floor(c * self._scale + 0.5)) for c in vec)

    def _candidate_keys(self, vec):
        if self.arithmetic.exact:
            yield tuple(vec)
            return
        options = []
        for c in vec:
            s = c * self._scale + 0.5
            base = int(math.floor(s))
            frac = s - base
            opts = [base]
            if frac < 1e-3:
                opts.append(base - 1)
            elif frac > 1 - 1e-3:
                opts.append(base + 1)
            options.append(opts)
        yield from product(*options)

    def add(self, vec, value):
        self._buckets.setdefault(self._key(vec), []).append((tuple(vec), value))

    def get(self, vec, default=None):
        for key in self._candidate_keys(vec):
            for stored, value in self._buckets.get(key, ()):
                if self.arithmetic.vectors_equal(stored, vec):
                    return value
        return default

    def __contains__(self, vec):
        sentinel = object()
        return self.get(vec, sentinel) is not sentinel
