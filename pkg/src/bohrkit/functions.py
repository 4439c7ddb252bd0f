"""Bounded complex functions on finite integer supports.

A :class:`BoundedFunction` stores a sorted integer support and aligned
complex values with ``|value| <= 1`` (up to a 1e-12 slack for values built
from floating transcendentals). Evaluation off the support is exactly zero,
which is the convention every averaging kernel in this package relies on:
sums like ``a + n1 + n2`` may land outside the ambient set and contribute
nothing.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import RationalLike, as_rational

_BOUND_TOL = 1e-12


@dataclass(frozen=True)
class BoundedFunction:
    """A function Z -> C supported on finitely many integers, bounded by 1."""

    support: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        support = np.asarray(self.support, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.complex128)
        if support.ndim != 1 or values.shape != support.shape:
            raise ValueError("support and values must be aligned 1-d arrays")
        if support.size and np.any(np.diff(support) <= 0):
            raise ValueError("support must be strictly increasing")
        if values.size and float(np.max(np.abs(values))) > 1 + _BOUND_TOL:
            raise ValueError("values must be bounded by 1 in absolute value")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    @classmethod
    def indicator(cls, elements: np.ndarray) -> "BoundedFunction":
        elements = np.unique(np.asarray(elements, dtype=np.int64))
        return cls(elements, np.ones(elements.size, dtype=np.complex128))

    @classmethod
    def character(
        cls, freq: RationalLike, lo: int, hi: int
    ) -> "BoundedFunction":
        """``n -> e(n * freq)`` on the dense window ``[lo, hi]``.

        Phases are computed from the exact residue ``(n * p) mod q`` so that
        equal angles get bitwise equal values.
        """
        freq = as_rational(freq)
        p, q = freq.numerator % freq.denominator, freq.denominator
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        table = np.exp(2j * np.pi * np.arange(q, dtype=np.float64) / q)
        vals = table[(ns % q) * (p % q) % q]
        return cls(ns, vals)

    @classmethod
    def balanced_indicator(
        cls, subset: np.ndarray, ambient: np.ndarray
    ) -> tuple["BoundedFunction", Fraction]:
        """``1_A - delta`` on the ambient set, zero elsewhere.

        Returns the function and the exact density ``delta = |A cap
        ambient| / |ambient|``. Values use the float image of ``delta`` but
        the returned density is exact.
        """
        ambient = np.unique(np.asarray(ambient, dtype=np.int64))
        subset = np.unique(np.asarray(subset, dtype=np.int64))
        if ambient.size == 0:
            raise ValueError("ambient set is empty")
        inside = np.isin(ambient, subset)
        delta = Fraction(int(np.count_nonzero(inside)), int(ambient.size))
        vals = inside.astype(np.complex128) - complex(float(delta))
        return cls(ambient, vals), delta

    def gather(self, points: np.ndarray) -> np.ndarray:
        """Values at ``points`` (any shape), zero off the support."""
        pts = np.asarray(points, dtype=np.int64)
        flat = pts.reshape(-1)
        if self.support.size == 0:
            return np.zeros(pts.shape, dtype=np.complex128)
        idx = np.searchsorted(self.support, flat)
        idx_c = np.minimum(idx, self.support.size - 1)
        hit = self.support[idx_c] == flat
        out = np.where(hit, self.values[idx_c], 0.0 + 0.0j)
        return out.reshape(pts.shape)

    def mean_on(self, points: np.ndarray) -> complex:
        """Average of the function over the given points."""
        pts = np.asarray(points, dtype=np.int64)
        if pts.size == 0:
            raise ValueError("cannot average over an empty set")
        return complex(np.mean(self.gather(pts)))

    def scaled(self, factor: complex) -> "BoundedFunction":
        if abs(factor) > 1 + _BOUND_TOL:
            raise ValueError("scaling factor must have modulus at most 1")
        return BoundedFunction(self.support, self.values * factor)


def read_values_file(path: str) -> BoundedFunction:
    """Parse a whitespace table ``n re [im]`` (one point per line, # comments)."""
    ns: list[int] = []
    vals: list[complex] = []
    first_line: dict[int, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(
                    f"{path}:{lineno}: expected 'n re [im]', got {len(parts)} fields"
                )
            try:
                n = int(parts[0])
                re = float(parts[1])
                im = float(parts[2]) if len(parts) == 3 else 0.0
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if n in first_line:
                raise ValueError(
                    f"{path}:{lineno}: duplicate support point {n} "
                    f"(first at line {first_line[n]})"
                )
            first_line[n] = lineno
            ns.append(n)
            vals.append(complex(re, im))
    order = np.argsort(np.asarray(ns, dtype=np.int64), kind="stable")
    support = np.asarray(ns, dtype=np.int64)[order]
    values = np.asarray(vals, dtype=np.complex128)[order]
    return BoundedFunction(support, values)
