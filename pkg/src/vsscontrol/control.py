"""Control functions: public maps from l-bit strings to m-bit control numbers.

Four families are available:

* ``table``/``vector`` -- one or more Boolean truth tables, one per output bit;
* ``check_digit`` -- the Verhoeff check digit of the input's decimal value;
* ``hash`` -- a prefix of a byte digest of the packed input.

Truth tables can be scored for balance and nonlinearity (Walsh-Hadamard).
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from . import _kernels
from .algebra import BitVector, WidthMismatch

Digest = Callable[[bytes], bytes]


@dataclass(frozen=True)
class TruthTable:
    """Boolean function on ``l`` bits; ``outputs[k]`` is f at input value ``k``."""

    l: int
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(int(b) for b in self.outputs))
        if len(self.outputs) != 1 << self.l:
            raise ValueError(f"table for l={self.l} needs {1 << self.l} rows, got {len(self.outputs)}")
        if set(self.outputs) - {0, 1}:
            raise ValueError("truth table outputs must be bits")

    @classmethod
    def from_function(cls, fn: Callable[[BitVector], int], l: int) -> TruthTable:
        return cls(l, tuple(fn(BitVector(k, l)) for k in range(1 << l)))

    @classmethod
    def constant(cls, l: int, bit: int) -> TruthTable:
        return cls(l, (bit,) * (1 << l))

    @classmethod
    def parity(cls, l: int) -> TruthTable:
        return cls(l, tuple(k.bit_count() & 1 for k in range(1 << l)))

    def __call__(self, x: BitVector) -> int:
        return eval_table(self, x)

    def ones(self) -> int:
        return sum(self.outputs)

    def dumps(self) -> str:
        lines = [f"table l={self.l}"]
        lines += [f"{format(k, f'0{self.l}b')}:{b}" for k, b in enumerate(self.outputs)]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> TruthTable:
        """Parse the line format ``table l=<l>`` followed by ``<bits>:<bit>`` rows."""
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or not lines[0].startswith("table l="):
            raise ValueError("truth table must start with 'table l=<l>'")
        try:
            l = int(lines[0][len("table l="):])
        except ValueError:
            raise ValueError(f"bad table header {lines[0]!r}") from None
        if not 1 <= l <= 20:
            raise ValueError(f"table width {l} out of range")
        rows = lines[1:]
        if len(rows) != 1 << l:
            raise ValueError(f"expected {1 << l} rows, got {len(rows)}")
        outputs = []
        for k, row in enumerate(rows):
            bits, sep, out = row.partition(":")
            if not sep or bits != format(k, f"0{l}b") or out not in ("0", "1"):
                raise ValueError(f"bad table row {k}: {row!r}")
            outputs.append(int(out))
        return cls(l, tuple(outputs))

    @classmethod
    def load(cls, path) -> TruthTable:
        return cls.loads(Path(path).read_text(encoding="ascii"))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode("ascii")).hexdigest()[:16]


def eval_table(tbl: TruthTable, x: BitVector) -> int:
    if x.width != tbl.l:
        raise WidthMismatch(f"table expects {tbl.l} bits, got {x.width}")
    return tbl.outputs[x.value]


def is_balanced(tbl: TruthTable) -> bool:
    return tbl.ones() == 1 << (tbl.l - 1)


def walsh_spectrum(tbl: TruthTable) -> list[int]:
    """``W(a) = sum_x (-1)**(f(x) ^ a.x)`` for every ``a``, indexed by ``a``'s value."""
    return _kernels.walsh_spectrum(tbl.outputs)


def nonlinearity(tbl: TruthTable) -> int:
    """Hamming distance from ``tbl`` to the nearest affine function."""
    if tbl.l > 20:
        raise ValueError("nonlinearity is limited to l <= 20")
    spectrum = walsh_spectrum(tbl)
    return (1 << (tbl.l - 1)) - max(abs(w) for w in spectrum) // 2


def random_balanced_table(l: int, rng: random.Random) -> TruthTable:
    outputs = [1] * (1 << (l - 1)) + [0] * (1 << (l - 1))
    rng.shuffle(outputs)
    return TruthTable(l, tuple(outputs))


def complete_table(l: int, pinned: dict[int, int], seed: int, iterations: int = 4000) -> TruthTable:
    """Deterministically complete a partial truth table.

    The pinned rows are kept; the free rows are filled so the table is
    balanced, then pairs of free rows with opposite outputs are swapped
    whenever that does not lower (nonlinearity, -#spectral peaks).
    """
    size = 1 << l
    ones_needed = (size >> 1) - sum(pinned.values())
    free = [k for k in range(size) if k not in pinned]
    if not 0 <= ones_needed <= len(free):
        raise ValueError("pinned rows make a balanced completion impossible")
    rng = random.Random(seed)
    order = free[:]
    rng.shuffle(order)
    outputs = [0] * size
    for k, b in pinned.items():
        outputs[k] = b
    for k in order[:ones_needed]:
        outputs[k] = 1

    def score(out):
        spec = _kernels.walsh_spectrum(out)
        peak = max(abs(w) for w in spec)
        return ((size >> 1) - peak // 2, -sum(1 for w in spec if abs(w) == peak))

    best = score(outputs)
    for _ in range(iterations):
        ones = [k for k in free if outputs[k]]
        zeros = [k for k in free if not outputs[k]]
        if not ones or not zeros:
            break
        i, j = rng.choice(ones), rng.choice(zeros)
        outputs[i], outputs[j] = 0, 1
        s = score(outputs)
        if s >= best:
            best = s
        else:
            outputs[i], outputs[j] = 1, 0
    return TruthTable(l, tuple(outputs))


# Rows of the worked-example table fixed by its published values, plus
# 01101 -> 1 so that c_4 = f(s_4) and direct dealing matches the example too.
EXAMPLE_PINNED_ROWS = {
    0b00010: 0,
    0b01111: 1,
    0b10000: 1,
    0b10010: 1,
    0b11101: 0,
    0b11111: 0,
    0b01101: 1,
}
EXAMPLE_TABLE_SEED = 20040331


def build_example_table() -> TruthTable:
    return complete_table(5, EXAMPLE_PINNED_ROWS, EXAMPLE_TABLE_SEED)


def example_table() -> TruthTable:
    """The shipped 32-row completion of the worked-example table."""
    text = resources.files("vsscontrol").joinpath("data/example_table.tbl").read_text("ascii")
    return TruthTable.loads(text)


# Verhoeff scheme over the dihedral group D5.
VERHOEFF_D = (
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9),
    (1, 2, 3, 4, 0, 6, 7, 8, 9, 5),
    (2, 3, 4, 0, 1, 7, 8, 9, 5, 6),
    (3, 4, 0, 1, 2, 8, 9, 5, 6, 7),
    (4, 0, 1, 2, 3, 9, 5, 6, 7, 8),
    (5, 9, 8, 7, 6, 0, 4, 3, 2, 1),
    (6, 5, 9, 8, 7, 1, 0, 4, 3, 2),
    (7, 6, 5, 9, 8, 2, 1, 0, 4, 3),
    (8, 7, 6, 5, 9, 3, 2, 1, 0, 4),
    (9, 8, 7, 6, 5, 4, 3, 2, 1, 0),
)
VERHOEFF_P = (
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9),
    (1, 5, 7, 6, 2, 8, 3, 0, 9, 4),
    (5, 8, 0, 3, 7, 9, 6, 1, 4, 2),
    (8, 9, 1, 6, 0, 4, 3, 5, 2, 7),
    (9, 4, 5, 3, 1, 2, 6, 8, 7, 0),
    (4, 2, 8, 6, 5, 7, 3, 9, 0, 1),
    (2, 7, 9, 3, 8, 0, 6, 4, 1, 5),
    (7, 0, 4, 6, 9, 1, 3, 2, 5, 8),
)
VERHOEFF_INV = (0, 4, 3, 2, 1, 5, 6, 7, 8, 9)


def _check_digits(digits: Sequence[int]) -> list[int]:
    ds = list(digits)
    for d in ds:
        if not isinstance(d, int) or not 0 <= d <= 9:
            raise ValueError(f"not a decimal digit: {d!r}")
    return ds


def _verhoeff_fold(digits: Sequence[int], offset: int) -> int:
    c = 0
    for i, d in enumerate(reversed(digits)):
        c = VERHOEFF_D[c][VERHOEFF_P[(i + offset) % 8][d]]
    return c


def verhoeff_check_digit(digits: Sequence[int]) -> int:
    return VERHOEFF_INV[_verhoeff_fold(_check_digits(digits), 1)]


def verhoeff_validate(digits: Sequence[int]) -> bool:
    """True iff the last digit is the correct check digit for the rest."""
    return _verhoeff_fold(_check_digits(digits), 0) == 0


def decimal_digits(value: int) -> list[int]:
    return [int(ch) for ch in str(value)]


def verhoeff_control(x: BitVector, m: int) -> BitVector:
    """Low ``m`` bits of the Verhoeff check digit of ``x``'s decimal value."""
    if not 1 <= m <= 4:
        raise ValueError(f"a check digit carries at most 4 bits, m={m}")
    check = verhoeff_check_digit(decimal_digits(x.value))
    return BitVector(check & ((1 << m) - 1), m)


def pack_bits(x: BitVector) -> bytes:
    """MSB-first packing into ceil(l/8) bytes, zero-padded on the right."""
    nbytes = (x.width + 7) // 8
    return (x.value << (8 * nbytes - x.width)).to_bytes(nbytes, "big")


FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
MASK64 = (1 << 64) - 1


def mix64(data: bytes) -> bytes:
    """Default digest: FNV-1a 64 followed by the SplitMix64 finalizer.

    Not cryptographic; pass ``hashlib`` digests for that.
    """
    h = FNV64_OFFSET
    for byte in data:
        h = (h ^ byte) * FNV64_PRIME & MASK64
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    h = (h ^ (h >> 27)) * 0x94D049BB133111EB & MASK64
    h ^= h >> 31
    return h.to_bytes(8, "big")


def hash_control(x: BitVector, m: int, digest: Digest = mix64) -> BitVector:
    out = digest(pack_bits(x))
    total = 8 * len(out)
    if not 1 <= m <= total:
        raise ValueError(f"digest yields {total} bits, cannot take m={m}")
    return BitVector(int.from_bytes(out, "big") >> (total - m), m)


def eval_vector(fs: Sequence[TruthTable], x: BitVector) -> BitVector:
    if not fs:
        raise ValueError("eval_vector needs at least one table")
    if len({f.l for f in fs}) != 1:
        raise WidthMismatch("component tables disagree on l")
    return BitVector.from_bits(eval_table(f, x) for f in fs)


class ControlFunction:
    """Deterministic map from ``l``-bit vectors to ``m``-bit vectors, ``m < l``."""

    kind = "abstract"

    def __init__(self, l: int, m: int, name: str):
        if not 1 <= m < l:
            raise ValueError(f"control width must satisfy 1 <= m < l, got l={l}, m={m}")
        self.l = l
        self.m = m
        self.name = name

    def __call__(self, x: BitVector) -> BitVector:
        if x.width != self.l:
            raise WidthMismatch(f"{self.name} expects {self.l} bits, got {x.width}")
        return self._eval(x)

    def _eval(self, x: BitVector) -> BitVector:
        raise NotImplementedError

    def digest(self) -> str:
        """Short fingerprint so mismatched control functions are detectable."""
        return "builtin"

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, l={self.l}, m={self.m})"


class TableControl(ControlFunction):
    """One truth table per output bit, concatenated MSB-first."""

    def __init__(self, tables: Sequence[TruthTable], name: str = "table"):
        tables = tuple(tables)
        if not tables:
            raise ValueError("need at least one table")
        if len({t.l for t in tables}) != 1:
            raise WidthMismatch("component tables disagree on l")
        super().__init__(tables[0].l, len(tables), name)
        self.tables = tables
        self.kind = "table" if len(tables) == 1 else "vector"

    def _eval(self, x):
        return eval_vector(self.tables, x)

    def digest(self):
        return hashlib.sha256("".join(t.dumps() for t in self.tables).encode("ascii")).hexdigest()[:16]


class CheckDigitControl(ControlFunction):
    kind = "check_digit"

    def __init__(self, l: int, m: int, name: str = "verhoeff"):
        if m > 4:
            raise ValueError(f"a check digit carries at most 4 bits, m={m}")
        super().__init__(l, m, name)

    def _eval(self, x):
        return verhoeff_control(x, self.m)


class HashControl(ControlFunction):
    kind = "hash"

    def __init__(self, l: int, m: int, digest: Digest = mix64, name: str = "hash"):
        super().__init__(l, m, name)
        self.digest_fn = digest

    def _eval(self, x):
        return hash_control(x, self.m, self.digest_fn)
