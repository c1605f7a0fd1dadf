"""Share files and control-function resolution.

Share file grammar (ASCII, ``\\n`` line ends, no trailing whitespace)::

    vss v1
    scheme=<shamir|kgh> p=<p> t=<t> n=<n> v=<v> l=<l> m=<m> strategy=<direct|constrained> f=<name>
    share id=<i> bits=<payload, MSB-first, l+m bits>
    ...

``p`` is 0 for KGH files. Records appear in ascending id order, one per
participant. ``f`` names a builtin control function (``example_table``,
``parity``, ``verhoeff``, ``hash``) or one or more comma-separated truth
table files living next to the share file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .access import VerificationStructure, build_vtn_structure
from .algebra import BitVector
from .control import (
    CheckDigitControl,
    ControlFunction,
    HashControl,
    TableControl,
    TruthTable,
    example_table,
)
from .dealer import STRATEGIES, ExtendedShare
from .sharing import KghInstance, ShamirInstance

MAGIC = "vss v1"
BUILTINS = ("example_table", "parity", "verhoeff", "hash")

_HEADER = re.compile(
    r"scheme=(shamir|kgh) p=(\d+) t=(\d+) n=(\d+) v=(\d+) l=(\d+) m=(\d+) "
    r"strategy=(\w+) f=(\S+)"
)
_RECORD = re.compile(r"share id=(\d+) bits=([01]+)")
_NAME = re.compile(r"[A-Za-z0-9_.\-]+(,[A-Za-z0-9_.\-]+)*")


class FormatError(ValueError):
    pass


@dataclass
class ShareFile:
    scheme: str
    p: int
    t: int
    n: int
    v: int
    l: int
    m: int
    strategy: str
    f: str
    records: list[tuple[int, BitVector]] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.scheme not in ("shamir", "kgh"):
            raise FormatError(f"unknown scheme {self.scheme!r}")
        if self.strategy not in STRATEGIES:
            raise FormatError(f"unknown strategy {self.strategy!r}")
        if not _NAME.fullmatch(self.f):
            raise FormatError(f"bad control function name {self.f!r}")
        if not 1 <= self.v <= self.t <= self.n:
            raise FormatError(f"need 1 <= v <= t <= n, got v={self.v} t={self.t} n={self.n}")
        if self.scheme == "kgh" and (self.p != 0 or self.t != self.n):
            raise FormatError("kgh files carry p=0 and t=n")
        if self.l < 1 or self.m < 1:
            raise FormatError("l and m must be positive")
        ids = [i for i, _ in self.records]
        if ids != list(range(1, self.n + 1)):
            raise FormatError(f"expected one record per participant 1..{self.n}, got ids {ids}")
        for i, payload in self.records:
            if payload.width != self.l + self.m:
                raise FormatError(f"share {i} has {payload.width} bits, expected {self.l + self.m}")
        try:
            self.scheme_instance()
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    def scheme_instance(self):
        if self.scheme == "shamir":
            inst = ShamirInstance(self.p, self.t, self.n)
            if inst.l != self.l:
                raise FormatError(f"l={self.l} does not match GF({self.p}) (expected {inst.l})")
            return inst
        return KghInstance(self.n, self.l)

    def structure(self) -> VerificationStructure:
        return build_vtn_structure(self.v, self.t, self.n)

    def shares(self) -> list[ExtendedShare]:
        return [ExtendedShare.from_payload(i, bits, self.l, self.m) for i, bits in self.records]

    @classmethod
    def from_shares(cls, shares, *, scheme, p, t, n, v, l, m, strategy, f) -> ShareFile:
        records = [(s.owner, s.payload) for s in sorted(shares, key=lambda s: s.owner)]
        return cls(scheme, p, t, n, v, l, m, strategy, f, records)

    def dumps(self) -> str:
        lines = [
            MAGIC,
            f"scheme={self.scheme} p={self.p} t={self.t} n={self.n} v={self.v} "
            f"l={self.l} m={self.m} strategy={self.strategy} f={self.f}",
        ]
        lines += [f"share id={i} bits={bits}" for i, bits in self.records]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> ShareFile:
        if not text.endswith("\n"):
            raise FormatError("share file must end with a newline")
        lines = text[:-1].split("\n")
        if len(lines) < 2 or lines[0] != MAGIC:
            raise FormatError(f"first line must be {MAGIC!r}")
        h = _HEADER.fullmatch(lines[1])
        if not h:
            raise FormatError(f"bad header line {lines[1]!r}")
        scheme, p, t, n, v, l, m, strategy, f = h.groups()
        records = []
        for line in lines[2:]:
            r = _RECORD.fullmatch(line)
            if not r:
                raise FormatError(f"bad share record {line!r}")
            records.append((int(r.group(1)), BitVector.from_str(r.group(2))))
        return cls(scheme, int(p), int(t), int(n), int(v), int(l), int(m), strategy, f, records)

    @classmethod
    def read(cls, path) -> ShareFile:
        try:
            with open(path, encoding="ascii", newline="") as fh:
                text = fh.read()
        except (OSError, UnicodeDecodeError) as exc:
            raise FormatError(f"cannot read {path}: {exc}") from None
        return cls.loads(text)

    def write(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="ascii", newline="\n")


def resolve_control(name: str, l: int, m: int, base_dir=".") -> ControlFunction:
    """Build the control function a share file or flag refers to."""
    if name in ("example_table", "parity"):
        table = example_table() if name == "example_table" else TruthTable.parity(l)
        if table.l != l or m != 1:
            raise FormatError(f"{name} is a single {table.l}-bit table; file has l={l}, m={m}")
        return TableControl([table], name=name)
    if name == "verhoeff":
        return CheckDigitControl(l, m)
    if name == "hash":
        return HashControl(l, m)
    tables = []
    for part in name.split(","):
        path = Path(base_dir) / part
        try:
            tables.append(TruthTable.load(path))
        except OSError as exc:
            raise FormatError(f"cannot read truth table {path}: {exc}") from None
    if len(tables) != m or any(t.l != l for t in tables):
        raise FormatError(f"tables {name} do not form an {l}->{m} bit control function")
    return TableControl(tables, name=name)
