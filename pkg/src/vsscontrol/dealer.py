"""Extended shares and control-part assignment.

Two strategies are available:

``direct``
    ``c_i = f(s_i)`` for every share, independent of the structure.
``constrained``
    Controls are solved so that every VSoP ``V`` in the structure satisfies
    ``f(C1(s_i : i in V)) == XOR(c_i : i in V)``. Each output bit is an
    independent GF(2) system; unknowns left free are pinned to the direct
    value ``f(s_i)`` in participant order where the system allows it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .access import VerificationStructure, VSoP
from .algebra import BitVector, Gf2System, Inconsistent, WidthMismatch, gf2_solve
from .control import ControlFunction
from .sharing import XOR, Combiner, PlainShare, combine

STRATEGIES = ("direct", "constrained")


class InconsistentDealing(ValueError):
    """No control assignment satisfies every VSoP.

    ``vsops`` is a minimal conflicting subset for output bit ``bit``.
    """

    def __init__(self, vsops: Sequence[VSoP], bit: int):
        self.vsops = tuple(vsops)
        self.bit = bit
        names = ", ".join(str(v) for v in self.vsops)
        super().__init__(f"control bit {bit}: constraints of {{{names}}} are contradictory")


class RoundRule(NamedTuple):
    """Control function and combiners used for one VSoP."""

    f: ControlFunction
    c1: Combiner = XOR
    c2: Combiner = XOR


Overrides = Mapping[frozenset, RoundRule]


def resolve_rule(vsop: VSoP, default: RoundRule, overrides: Overrides | None) -> RoundRule:
    if overrides:
        return overrides.get(vsop.key, default)
    return default


@dataclass(frozen=True)
class ExtendedShare:
    owner: int
    secret_part: BitVector
    control_part: BitVector

    @property
    def payload(self) -> BitVector:
        return append_control(self.secret_part, self.control_part)

    @classmethod
    def from_payload(cls, owner: int, payload: BitVector, l: int, m: int) -> ExtendedShare:
        s, c = split_extended(payload, l, m)
        return cls(owner, s, c)


def append_control(s: BitVector, c: BitVector) -> BitVector:
    return s.concat(c)


def split_extended(payload: BitVector, l: int, m: int) -> tuple[BitVector, BitVector]:
    if payload.width != l + m:
        raise WidthMismatch(f"payload has {payload.width} bits, expected {l}+{m}")
    return payload.slice(0, l), payload.slice(l, l + m)


def information_rate(l: int, m: int) -> float:
    return l / (l + m)


def assign_controls(
    shares: Sequence[PlainShare],
    vs: VerificationStructure,
    f: ControlFunction,
    c1: Combiner = XOR,
    c2: Combiner = XOR,
    strategy: str = "constrained",
    overrides: Overrides | None = None,
    diagnose: bool = True,
) -> list[ExtendedShare]:
    """Attach control parts to ``shares``.

    With ``diagnose`` off, an inconsistent system is reported without the
    (comparatively slow) search for a minimal conflicting VSoP subset.

    Raises:
        InconsistentDealing: the constrained system has no solution.
        ValueError: unknown strategy, non-XOR ``c2`` under the constrained
            strategy, or a structure member without a share.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    by_owner = {s.owner: s for s in shares}
    if len(by_owner) != len(shares):
        raise ValueError("duplicate share owners")
    missing = [i for i in vs.participants() if i not in by_owner]
    if missing:
        raise ValueError(f"no share for participant(s) {missing}")
    owners = sorted(by_owner)
    direct = {i: f(by_owner[i].secret_part) for i in owners}
    if strategy == "direct":
        return [ExtendedShare(i, by_owner[i].secret_part, direct[i]) for i in owners]

    default = RoundRule(f, c1, c2)
    m = f.m
    targets = []
    for vsop in vs:
        rule = resolve_rule(vsop, default, overrides)
        if not rule.c2.is_xor:
            raise ValueError("constrained dealing needs an XOR control combiner")
        if rule.f.m != m:
            raise WidthMismatch(f"control width {rule.f.m} for {vsop} differs from m={m}")
        r_s = combine(rule.c1, [(i, by_owner[i].secret_part) for i in vsop])
        targets.append((vsop, rule.f(r_s)))

    index = {i: k for k, i in enumerate(owners)}
    control_bits = {i: [] for i in owners}
    for b in range(m):
        system = _bit_system(len(owners), index, targets, b)
        pins = [(index[i], direct[i][b]) for i in owners]
        sol = gf2_solve(system, pins)
        if isinstance(sol, Inconsistent):
            conflict = (_minimal_conflict(len(owners), index, targets, b) if diagnose
                        else [vsop for vsop, _ in targets])
            raise InconsistentDealing(conflict, b)
        for i in owners:
            control_bits[i].append(sol[index[i]])

    out = [
        ExtendedShare(i, by_owner[i].secret_part, BitVector.from_bits(control_bits[i]))
        for i in owners
    ]
    controls = {e.owner: e.control_part for e in out}
    for vsop, target in targets:
        if combine(XOR, [controls[i] for i in vsop]) != target:
            raise AssertionError(f"constrained controls do not satisfy {vsop}")
    return out


def _bit_system(nvars, index, targets, b) -> Gf2System:
    system = Gf2System(nvars)
    for vsop, target in targets:
        system.add_row([index[i] for i in vsop], target[b])
    return system


def _minimal_conflict(nvars, index, targets, b) -> list[VSoP]:
    keep = list(targets)
    for item in list(keep):
        trial = [t for t in keep if t is not item]
        if trial and isinstance(gf2_solve(_bit_system(nvars, index, trial, b)), Inconsistent):
            keep = trial
    return [vsop for vsop, _ in keep]


def deal(
    scheme,
    secret: int,
    vs: VerificationStructure,
    f: ControlFunction,
    rng: random.Random | None = None,
    *,
    coeffs=None,
    c1: Combiner = XOR,
    c2: Combiner = XOR,
    strategy: str = "constrained",
    overrides: Overrides | None = None,
    max_attempts: int = 1,
    diagnose: bool = True,
) -> list[ExtendedShare]:
    """Share ``secret`` with ``scheme`` and attach controls.

    When the constrained system is inconsistent and the sharing randomness
    comes from ``rng``, the dealer redraws it, up to ``max_attempts`` deals
    in total. Explicit ``coeffs`` allow a single attempt only.
    """
    if f.l != scheme.l:
        raise WidthMismatch(f"control function expects l={f.l}, scheme has l={scheme.l}")
    attempts = 1 if coeffs is not None else max(1, max_attempts)
    for attempt in range(attempts):
        plain = scheme.deal(secret, rng=rng, coeffs=coeffs)
        try:
            return assign_controls(plain, vs, f, c1, c2, strategy, overrides,
                                   diagnose=diagnose and attempt == attempts - 1)
        except InconsistentDealing:
            if attempt == attempts - 1:
                raise
    raise AssertionError("unreachable")
