"""Verification rounds, protocol reports and gated secret recovery."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .access import AuthorizedSet, VerificationStructure, VSoP
from .algebra import BitVector
from .control import ControlFunction
from .dealer import ExtendedShare, Overrides, RoundRule, resolve_rule
from .sharing import XOR, Combiner, InsufficientShares, combine


class VerificationFailed(Exception):
    def __init__(self, report: ProtocolReport):
        self.report = report
        bad = ", ".join(str(r.vsop) for r in report.rounds if not r.passed)
        super().__init__(f"verification failed in round(s) {bad}")


class MissingShare(KeyError):
    def __init__(self, pid: int):
        self.pid = pid
        super().__init__(f"participant P{pid} has no share")

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class RoundResult:
    vsop: VSoP
    r_s: BitVector
    r_c: BitVector
    f_of_rs: BitVector

    @property
    def passed(self) -> bool:
        return self.f_of_rs == self.r_c

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    @property
    def total_r(self) -> BitVector:
        return self.r_s.concat(self.r_c)


@dataclass(frozen=True)
class ShareValidity:
    rounds_passed: int
    probability: float


@dataclass
class ProtocolReport:
    auth: AuthorizedSet
    rounds: list[RoundResult]
    per_share: dict[int, ShareValidity] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rounds)

    @property
    def overall(self) -> str:
        return "all_pass" if self.all_pass else "some_fail"

    def failing(self) -> list[RoundResult]:
        return [r for r in self.rounds if not r.passed]

    def suspects(self) -> tuple[int, ...]:
        """Heuristic localisation of bad shares.

        Members common to all failing rounds and absent from passing ones;
        falls back to the common members, then to every member of a failing
        round.
        """
        bad = [set(r.vsop.members) for r in self.failing()]
        if not bad:
            return ()
        good = set().union(*(r.vsop.members for r in self.rounds if r.passed))
        common = set.intersection(*bad)
        for candidate in (common - good, common, set().union(*bad)):
            if candidate:
                return tuple(sorted(candidate))
        return ()


def validity_probability(m: int, r: int) -> float:
    """``1 - 2**(-m*r)``: confidence after ``r`` passed rounds of ``m``-bit controls.

    Treats rounds as independent guesses of an ``m``-bit number.
    """
    if m < 1 or r < 0:
        raise ValueError(f"need m >= 1 and r >= 0, got m={m}, r={r}")
    return 1.0 - 2.0 ** (-m * r)


def run_round(
    shares: Sequence[ExtendedShare],
    f: ControlFunction,
    c1: Combiner = XOR,
    c2: Combiner = XOR,
    vsop: VSoP | None = None,
) -> RoundResult:
    if not shares:
        raise ValueError("a round needs at least one share")
    if vsop is None:
        vsop = VSoP(tuple(s.owner for s in shares))
    elif sorted(s.owner for s in shares) != list(vsop.members):
        raise ValueError(f"shares do not match {vsop}")
    r_s = combine(c1, [(s.owner, s.secret_part) for s in shares])
    r_c = combine(c2, [(s.owner, s.control_part) for s in shares])
    return RoundResult(vsop, r_s, r_c, f(r_s))


def _index(shares: Sequence[ExtendedShare]) -> dict[int, ExtendedShare]:
    return {s.owner: s for s in shares}


def run_protocol(
    auth: AuthorizedSet,
    vs: VerificationStructure,
    shares: Sequence[ExtendedShare],
    f: ControlFunction,
    c1: Combiner = XOR,
    c2: Combiner = XOR,
    overrides: Overrides | None = None,
) -> ProtocolReport:
    """Run one round per VSoP of ``vs`` contained in ``auth``.

    Every round runs even after a failure; ``rounds_passed`` for a share
    counts only passed rounds that include it.
    """
    held = _index(shares)
    for pid in auth:
        if pid not in held:
            raise MissingShare(pid)
    default = RoundRule(f, c1, c2)
    rounds = []
    for vsop in vs.within(auth):
        rule = resolve_rule(vsop, default, overrides)
        rounds.append(run_round([held[i] for i in vsop], rule.f, rule.c1, rule.c2, vsop=vsop))
    per_share = {}
    for pid in auth:
        r = sum(1 for rr in rounds if rr.passed and pid in rr.vsop)
        per_share[pid] = ShareValidity(r, validity_probability(f.m, r))
    return ProtocolReport(auth, rounds, per_share)


def recover_secret(
    auth: AuthorizedSet,
    shares: Sequence[ExtendedShare],
    scheme,
    require_verification: bool = True,
    vs: VerificationStructure | None = None,
    f: ControlFunction | None = None,
    c1: Combiner = XOR,
    c2: Combiner = XOR,
    overrides: Overrides | None = None,
) -> int:
    """Recover the secret from the shares of ``auth``, optionally after verification.

    Raises:
        InsufficientShares: ``auth`` is too small for the scheme.
        VerificationFailed: a round failed and verification was required.
    """
    if len(auth) < scheme.recovery_threshold:
        raise InsufficientShares(
            f"{scheme.name} recovery needs {scheme.recovery_threshold} shares, got {len(auth)}"
        )
    held = _index(shares)
    for pid in auth:
        if pid not in held:
            raise MissingShare(pid)
    if require_verification:
        if vs is None or f is None:
            raise ValueError("verification needs a structure and a control function")
        report = run_protocol(auth, vs, shares, f, c1, c2, overrides)
        if not report.all_pass:
            raise VerificationFailed(report)
    return scheme.recover([held[i] for i in auth])


def render_report(report: ProtocolReport) -> str:
    lines = []
    for r in report.rounds:
        members = ",".join(str(i) for i in r.vsop.members)
        lines.append(f"round {members} Rs={r.r_s} f={r.f_of_rs} Rc={r.r_c} {r.verdict}")
    for pid, sv in sorted(report.per_share.items()):
        lines.append(f"share {pid} rounds={sv.rounds_passed} p={sv.probability:.6f}")
    return "\n".join(lines) + "\n"
