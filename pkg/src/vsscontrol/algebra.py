"""Prime-field arithmetic, fixed-width bit vectors and GF(2) linear systems.

Bit order is MSB-first everywhere: index 0 of a :class:`BitVector` is its
most significant bit, and ``BitVector.from_int(15, 5)`` renders as
``01111``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from . import _kernels

MAX_MODULUS = 1 << 31


class ModulusMismatch(ValueError):
    """Field elements from different moduli were mixed."""


class WidthMismatch(ValueError):
    """Bit vectors of different widths were combined."""


@lru_cache(maxsize=256)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, int) or not 2 <= p < MAX_MODULUS or not is_prime(p):
        raise ValueError(f"modulus must be a prime below 2**31, got {p!r}")
    return p


@dataclass(frozen=True)
class FieldElement:
    """Element of GF(p), p prime and below 2**31."""

    value: int
    p: int

    def __post_init__(self):
        check_modulus(self.p)
        if not 0 <= self.value < self.p:
            raise ValueError(f"{self.value} is not reduced mod {self.p}")

    @classmethod
    def of(cls, value: int, p: int) -> FieldElement:
        return cls(value % p, p)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")
            return other.value
        return other % self.p

    def __add__(self, other):
        return FieldElement((self.value + self._other(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement((self.value - self._other(other)) % self.p, self.p)

    def __rsub__(self, other):
        return FieldElement((self._other(other) - self.value) % self.p, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._other(other) % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.p, self.p)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            other = FieldElement.of(other, self.p)
        return self * other.inverse()

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def _raw(value, p: int) -> int:
    if isinstance(value, FieldElement):
        if value.p != p:
            raise ModulusMismatch(f"element of GF({value.p}) used in GF({p})")
        return value.value
    if not 0 <= value < p:
        raise ValueError(f"{value} is not reduced mod {p}")
    return int(value)


def gfp_eval_poly(coeffs: Sequence, x, p: int) -> FieldElement:
    """Evaluate ``sum(coeffs[j] * x**j)`` over GF(p) by Horner's rule.

    Coefficients are in ascending degree. Ints and :class:`FieldElement`
    are both accepted, but every operand must already be reduced mod ``p``.
    """
    check_modulus(p)
    raw = [_raw(c, p) for c in coeffs]
    return FieldElement(_kernels.horner(raw, _raw(x, p), p), p)


def lagrange_at_zero(points: Sequence[tuple[int, int]], p: int) -> int:
    """Interpolate the polynomial through ``points`` and evaluate it at 0."""
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation points must have distinct abscissas")
    return _kernels.lagrange_at_zero(xs, [y for _, y in points], p)


@dataclass(frozen=True)
class BitVector:
    """Immutable fixed-width bit string stored as an integer."""

    value: int
    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be non-negative")
        if not 0 <= self.value < (1 << self.width):
            raise OverflowError(f"{self.value} does not fit in {self.width} bits")

    @classmethod
    def from_int(cls, value: int, width: int) -> BitVector:
        return cls(int(value), width)

    @classmethod
    def from_str(cls, text: str) -> BitVector:
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        value = 0
        width = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit must be 0 or 1, got {b!r}")
            value = value << 1 | b
            width += 1
        return cls(value, width)

    @classmethod
    def zeros(cls, width: int) -> BitVector:
        return cls(0, width)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(self.value >> (self.width - 1 - i) & 1 for i in range(self.width))

    def __len__(self):
        return self.width

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.width
        if not 0 <= i < self.width:
            raise IndexError(i)
        return self.value >> (self.width - 1 - i) & 1

    def __iter__(self):
        return iter(self.bits)

    def __xor__(self, other: BitVector) -> BitVector:
        if other.width != self.width:
            raise WidthMismatch(f"width {self.width} vs {other.width}")
        return BitVector(self.value ^ other.value, self.width)

    def concat(self, other: BitVector) -> BitVector:
        return BitVector(self.value << other.width | other.value, self.width + other.width)

    def slice(self, start: int, stop: int) -> BitVector:
        """Bits ``start..stop-1`` counted from the MSB."""
        if not 0 <= start <= stop <= self.width:
            raise IndexError((start, stop))
        w = stop - start
        return BitVector(self.value >> (self.width - stop) & ((1 << w) - 1), w)

    def flip(self, i: int) -> BitVector:
        if not 0 <= i < self.width:
            raise IndexError(i)
        return BitVector(self.value ^ 1 << (self.width - 1 - i), self.width)

    def weight(self) -> int:
        return self.value.bit_count()

    def __str__(self):
        return format(self.value, f"0{self.width}b") if self.width else ""

    def __repr__(self):
        return f"BitVector('{self}')"


def to_bits(value, width: int) -> BitVector:
    """MSB-first encoding of ``value`` at exactly ``width`` bits."""
    if width < 1:
        raise ValueError("width must be positive")
    value = int(value)
    if value < 0:
        raise ValueError("negative values have no bit encoding")
    return BitVector(value, width)


def from_bits(v: BitVector) -> int:
    return v.value


def xor_combine(vs: Sequence[BitVector]) -> BitVector:
    if not vs:
        raise ValueError("xor_combine needs at least one vector")
    return reduce(lambda a, b: a ^ b, vs)


@dataclass(frozen=True)
class Inconsistent:
    """Marker returned by :func:`gf2_solve` when no assignment exists.

    ``row`` is the index of the first row found to contradict the ones
    before it.
    """

    row: int | None = None

    def __bool__(self):
        return False


@dataclass
class Gf2System:
    """Linear system over GF(2): each row is (coefficients, rhs bit).

    Coefficient bit ``j`` (MSB-first) multiplies unknown ``j``.
    """

    unknown_count: int
    rows: list[tuple[BitVector, int]] = field(default_factory=list)

    def __post_init__(self):
        if self.unknown_count < 1:
            raise ValueError("a system needs at least one unknown")
        for coeffs, rhs in self.rows:
            self._check(coeffs, rhs)

    def _check(self, coeffs: BitVector, rhs: int):
        if coeffs.width != self.unknown_count:
            raise WidthMismatch(
                f"row has {coeffs.width} coefficients, system has {self.unknown_count} unknowns"
            )
        if rhs not in (0, 1):
            raise ValueError(f"rhs must be a bit, got {rhs!r}")

    def add_row(self, unknowns: Iterable[int], rhs: int) -> None:
        """Append ``XOR of the listed unknowns = rhs``."""
        value = 0
        for j in unknowns:
            value ^= 1 << (self.unknown_count - 1 - j)
        coeffs = BitVector(value, self.unknown_count)
        self._check(coeffs, rhs)
        self.rows.append((coeffs, rhs))

    def residual(self, solution: BitVector) -> list[int]:
        """Per-row ``lhs XOR rhs``; all zeros means ``solution`` satisfies the system."""
        return [(coeffs.value & solution.value).bit_count() & 1 ^ rhs for coeffs, rhs in self.rows]

    def packed_rows(self) -> list[int]:
        # kernel layout: coefficient bits as in BitVector.value, rhs at bit n
        n = self.unknown_count
        return [coeffs.value | rhs << n for coeffs, rhs in self.rows]


def gf2_solve(system: Gf2System, pins: Sequence[tuple[int, int]] = ()) -> BitVector | Inconsistent:
    """Solve ``system``; return one satisfying assignment or :class:`Inconsistent`.

    ``pins`` is an ordered list of ``(unknown, bit)`` preferences. Each pin
    is kept only if it is consistent with the system and the pins kept
    before it. Unknowns still free afterwards are set to 0. The result is
    checked by substitution before it is returned.
    """
    n = system.unknown_count
    basis, pivots, bad = _kernels.gf2_rref(system.packed_rows(), n)
    if bad >= 0:
        return Inconsistent(row=bad)
    for j, bit in pins:
        if not 0 <= j < n:
            raise IndexError(f"pin refers to unknown {j}, system has {n}")
        b2, p2, bad = _kernels.gf2_rref(basis + [1 << (n - 1 - j) | (bit & 1) << n], n)
        if bad < 0:
            basis, pivots = b2, p2
    value = 0
    for row, pc in zip(basis, pivots):
        if row >> n & 1:
            value |= 1 << pc
    solution = BitVector(value, n)
    if any(system.residual(solution)):
        raise AssertionError("GF(2) solution failed substitution check")
    return solution
