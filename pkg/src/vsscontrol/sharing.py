"""Reference secret-sharing schemes and the combiner abstraction.

Two schemes are provided: Shamir over GF(p) with evaluation points
``x_i = i``, and KGH (XOR) sharing. Both carry shares as width-``l``
:class:`BitVector` values so the verification layer can combine raw share
bit strings independently of how the secret is recovered.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    BitVector,
    FieldElement,
    check_modulus,
    gfp_eval_poly,
    lagrange_at_zero,
    to_bits,
    xor_combine,
)


class EvaluationPointsExhausted(ValueError):
    """GF(p) has too few nonzero points for n participants."""


class InsufficientShares(ValueError):
    pass


@dataclass(frozen=True)
class PlainShare:
    owner: int
    secret_part: BitVector


@dataclass(frozen=True)
class ShamirInstance:
    p: int
    t: int
    n: int

    name = "shamir"

    def __post_init__(self):
        check_modulus(self.p)
        if not 1 <= self.t <= self.n:
            raise ValueError(f"need 1 <= t <= n, got t={self.t}, n={self.n}")
        if self.n >= self.p:
            raise EvaluationPointsExhausted(
                f"GF({self.p}) has only {self.p - 1} nonzero evaluation points for n={self.n}"
            )

    @property
    def l(self) -> int:
        # smallest l with 2**l > p - 1
        return (self.p - 1).bit_length()

    @property
    def recovery_threshold(self) -> int:
        return self.t

    def deal(self, secret: int, rng: random.Random | None = None, coeffs=None) -> list[PlainShare]:
        return shamir_deal(secret, self, rng=rng, coeffs=coeffs)

    def recover(self, shares: Sequence) -> int:
        points = [(s.owner, s.secret_part.value) for s in shares]
        return shamir_reconstruct(points, self).value

    def random_secret(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def secret_bits(self, secret: int) -> BitVector:
        return to_bits(secret, self.l)


@dataclass(frozen=True)
class KghInstance:
    """XOR sharing of an ``l``-bit secret among ``n`` participants (all needed)."""

    n: int
    l: int

    name = "kgh"

    def __post_init__(self):
        if self.n < 1 or self.l < 1:
            raise ValueError(f"need n >= 1 and l >= 1, got n={self.n}, l={self.l}")

    @property
    def t(self) -> int:
        return self.n

    @property
    def recovery_threshold(self) -> int:
        return self.n

    def deal(self, secret: int, rng: random.Random | None = None, coeffs=None) -> list[PlainShare]:
        return kgh_deal(to_bits(secret, self.l), self.n, rng=rng, randoms=coeffs)

    def recover(self, shares: Sequence) -> int:
        if len({s.owner for s in shares}) < self.n:
            raise InsufficientShares(f"KGH recovery needs all {self.n} shares")
        return xor_combine([s.secret_part for s in shares]).value

    def random_secret(self, rng: random.Random) -> int:
        return rng.getrandbits(self.l)

    def secret_bits(self, secret: int) -> BitVector:
        return to_bits(secret, self.l)


def shamir_deal(secret, inst: ShamirInstance, rng: random.Random | None = None,
                coeffs: Sequence[int] | None = None) -> list[PlainShare]:
    """Shares ``g(1), ..., g(n)`` of a random degree ``t-1`` polynomial with ``g(0) = secret``.

    Args:
        secret: Field element or int in ``[0, p)``.
        inst: Scheme parameters.
        rng: Source for the ``t-1`` higher coefficients.
        coeffs: Explicit higher coefficients; overrides ``rng``.
    """
    p = inst.p
    s = secret.value if isinstance(secret, FieldElement) else int(secret)
    if not 0 <= s < p:
        raise ValueError(f"secret must lie in [0, {p}), got {s}")
    if coeffs is None:
        if rng is None:
            raise ValueError("shamir_deal needs either rng or explicit coeffs")
        coeffs = [rng.randrange(p) for _ in range(inst.t - 1)]
    coeffs = list(coeffs)
    if len(coeffs) != inst.t - 1:
        raise ValueError(f"expected {inst.t - 1} coefficients, got {len(coeffs)}")
    poly = [s] + [c % p for c in coeffs]
    return [
        PlainShare(i, to_bits(gfp_eval_poly(poly, i, p).value, inst.l))
        for i in range(1, inst.n + 1)
    ]


def shamir_reconstruct(points: Sequence[tuple[int, int]], inst: ShamirInstance) -> FieldElement:
    """Lagrange interpolation at 0 from the first ``t`` points in id order."""
    ids = [pid for pid, _ in points]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate participant ids in {ids}")
    if len(points) < inst.t:
        raise InsufficientShares(f"need {inst.t} shares, got {len(points)}")
    chosen = sorted(((pid, int(y)) for pid, y in points))[: inst.t]
    for _, y in chosen:
        if not 0 <= y < inst.p:
            raise ValueError(f"share value {y} is not an element of GF({inst.p})")
    return FieldElement(lagrange_at_zero(chosen, inst.p), inst.p)


def kgh_deal(secret: BitVector, n: int, rng: random.Random | None = None,
             randoms: Sequence[int] | None = None) -> list[PlainShare]:
    """XOR sharing: ``n - 1`` random shares plus one that fixes the XOR to ``secret``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    l = secret.width
    if randoms is None:
        if rng is None and n > 1:
            raise ValueError("kgh_deal needs either rng or explicit random shares")
        randoms = [rng.getrandbits(l) for _ in range(n - 1)] if n > 1 else []
    if len(randoms) != n - 1:
        raise ValueError(f"expected {n - 1} random shares, got {len(randoms)}")
    parts = [BitVector(r, l) for r in randoms]
    last = secret
    for part in parts:
        last = last ^ part
    parts.append(last)
    return [PlainShare(i + 1, part) for i, part in enumerate(parts)]


@dataclass(frozen=True)
class Combiner:
    """How a verification round folds a list of bit strings into one.

    ``xor`` folds with bitwise XOR. ``shamir_lagrange`` interpolates the
    share values at 0 over GF(p) and re-encodes the result at width ``l``.
    """

    kind: str
    p: int | None = None
    t: int | None = None

    def __post_init__(self):
        if self.kind not in ("xor", "shamir_lagrange"):
            raise ValueError(f"unknown combiner kind {self.kind!r}")
        if self.kind == "shamir_lagrange":
            if self.p is None or self.t is None:
                raise ValueError("shamir_lagrange combiner needs p and t")
            check_modulus(self.p)

    @classmethod
    def shamir(cls, inst: ShamirInstance) -> Combiner:
        return cls("shamir_lagrange", p=inst.p, t=inst.t)

    @property
    def is_xor(self) -> bool:
        return self.kind == "xor"


XOR = Combiner("xor")


def combine(c: Combiner, inputs: Sequence):
    """Apply a combiner.

    ``inputs`` is a list of :class:`BitVector` or of ``(participant,
    BitVector)`` pairs; the Shamir combiner needs the pairs.
    """
    if not inputs:
        raise ValueError("nothing to combine")
    pairs = [x if isinstance(x, tuple) else (None, x) for x in inputs]
    if c.is_xor:
        return xor_combine([v for _, v in pairs])
    if any(pid is None for pid, _ in pairs):
        raise ValueError("shamir_lagrange combiner needs (participant, value) pairs")
    widths = {v.width for _, v in pairs}
    if len(widths) != 1:
        raise ValueError(f"mixed share widths {sorted(widths)}")
    inst = ShamirInstance(c.p, c.t, max(c.t, max(pid for pid, _ in pairs)))
    value = shamir_reconstruct([(pid, v.value) for pid, v in pairs], inst)
    return to_bits(value.value, widths.pop())
