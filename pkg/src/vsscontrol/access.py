"""Authorized sets, verification sets (VSoPs) and verification structures.

Participants are plain ints ``1..n``. Member tuples are always kept sorted
so iteration and serialization are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable


def _canonical(members: Iterable[int]) -> tuple[int, ...]:
    ms = tuple(members)
    if not ms:
        raise ValueError("a participant set must be nonempty")
    if len(set(ms)) != len(ms):
        raise ValueError(f"duplicate participants in {ms}")
    if any(not isinstance(i, int) or i < 1 for i in ms):
        raise ValueError(f"participant ids must be positive ints, got {ms}")
    return tuple(sorted(ms))


def label(members: Iterable[int]) -> str:
    return "".join(f"P{i}" for i in members)


@dataclass(frozen=True)
class AuthorizedSet:
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", _canonical(self.members))

    def __contains__(self, pid: int) -> bool:
        return pid in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __str__(self):
        return label(self.members)


@dataclass(frozen=True)
class VSoP:
    """A verification set of participants.

    ``parent`` records the authorized set it was derived from, if any; it is
    excluded from equality so VSoPs compare by member set alone.
    """

    members: tuple[int, ...]
    parent: AuthorizedSet | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", _canonical(self.members))
        if self.parent is not None and not set(self.members) <= set(self.parent.members):
            raise ValueError(f"{label(self.members)} is not a subset of {self.parent}")

    @property
    def key(self) -> frozenset[int]:
        return frozenset(self.members)

    def within(self, auth: AuthorizedSet) -> bool:
        return set(self.members) <= set(auth.members)

    def __contains__(self, pid: int) -> bool:
        return pid in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __str__(self):
        return label(self.members)


@dataclass(frozen=True)
class VerificationStructure:
    """Deduplicated set of VSoPs over participants ``1..n``.

    ``v`` is set for (v,t,n) structures, where every VSoP has ``v``
    members. ``authorized`` optionally keeps the authorized sets the
    structure was built from; the protocol does not depend on it.
    """

    vsops: tuple[VSoP, ...]
    n: int
    v: int | None = None
    t: int | None = None
    authorized: tuple[AuthorizedSet, ...] = ()

    def __post_init__(self):
        if not self.vsops:
            raise ValueError("a verification structure needs at least one VSoP")
        seen = {}
        for vs in self.vsops:
            seen.setdefault(vs.members, vs)
        ordered = tuple(seen[k] for k in sorted(seen))
        object.__setattr__(self, "vsops", ordered)
        for vs in ordered:
            if vs.members[-1] > self.n:
                raise ValueError(f"{vs} references a participant beyond n={self.n}")
            if self.v is not None and len(vs) != self.v:
                raise ValueError(f"{vs} has {len(vs)} members, expected v={self.v}")

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], n: int) -> VerificationStructure:
        """General (non-threshold) structure from explicit member sets."""
        return cls(tuple(VSoP(tuple(s)) for s in sets), n)

    def within(self, auth: AuthorizedSet) -> list[VSoP]:
        return [vs for vs in self.vsops if vs.within(auth)]

    def participants(self) -> list[int]:
        return sorted({i for vs in self.vsops for i in vs.members})

    def __iter__(self):
        return iter(self.vsops)

    def __len__(self):
        return len(self.vsops)


def threshold_authorized_sets(t: int, n: int) -> list[AuthorizedSet]:
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    return [AuthorizedSet(c) for c in combinations(range(1, n + 1), t)]


def verification_sets(auth: AuthorizedSet, v: int) -> list[VSoP]:
    if not 1 <= v <= len(auth):
        raise ValueError(f"need 1 <= v <= {len(auth)}, got v={v}")
    return [VSoP(c, parent=auth) for c in combinations(auth.members, v)]


def build_vtn_structure(v: int, t: int, n: int) -> VerificationStructure:
    """Union of the v-subsets of every authorized t-subset of ``1..n``."""
    if not 1 <= v <= t <= n:
        raise ValueError(f"need 1 <= v <= t <= n, got v={v}, t={t}, n={n}")
    auth = threshold_authorized_sets(t, n)
    vsops = [vs for a in auth for vs in verification_sets(a, v)]
    return VerificationStructure(tuple(vsops), n, v=v, t=t, authorized=tuple(auth))


def rounds_containing(vs: VerificationStructure, auth: AuthorizedSet, pid: int) -> int:
    """Number of VSoPs inside ``auth`` that include ``pid``."""
    if pid not in auth:
        raise ValueError(f"P{pid} is not in {auth}")
    return sum(1 for s in vs.within(auth) if pid in s)
