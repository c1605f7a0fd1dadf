import hashlib
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vsscontrol.algebra import BitVector, WidthMismatch
from vsscontrol.control import (
    EXAMPLE_PINNED_ROWS,
    VERHOEFF_D,
    VERHOEFF_INV,
    CheckDigitControl,
    HashControl,
    TableControl,
    TruthTable,
    build_example_table,
    decimal_digits,
    eval_table,
    eval_vector,
    example_table,
    hash_control,
    is_balanced,
    mix64,
    nonlinearity,
    pack_bits,
    random_balanced_table,
    verhoeff_check_digit,
    verhoeff_control,
    verhoeff_validate,
)

B = BitVector.from_str

PUBLISHED_ROWS = {"00010": 0, "01111": 1, "10000": 1, "10010": 1, "11101": 0, "11111": 0}


def affine_tables(l):
    for a in range(1 << l):
        for c in (0, 1):
            yield [((a & x).bit_count() + c) & 1 for x in range(1 << l)]


def nonlinearity_by_enumeration(tbl):
    return min(sum(f != g for f, g in zip(tbl.outputs, aff)) for aff in affine_tables(tbl.l))


@pytest.mark.parametrize("bits, out", sorted(PUBLISHED_ROWS.items()))
def test_example_table_published_rows(bits, out):
    assert eval_table(example_table(), B(bits)) == out


def test_example_table_is_reproducible():
    assert example_table() == build_example_table()
    for k, b in EXAMPLE_PINNED_ROWS.items():
        assert example_table().outputs[k] == b


def test_balance():
    assert not is_balanced(TruthTable.constant(5, 0))
    assert is_balanced(TruthTable.parity(5))
    assert is_balanced(example_table())


def test_nonlinearity_examples():
    bent = TruthTable.from_function(lambda x: x[0] & x[1] ^ x[2] & x[3], 4)
    assert nonlinearity_by_enumeration(bent) == 6
    assert nonlinearity(bent) == 6
    for aff in affine_tables(3):
        assert nonlinearity(TruthTable(3, aff)) == 0
    assert nonlinearity(example_table()) == nonlinearity_by_enumeration(example_table()) > 0


@settings(max_examples=200)
@given(l=st.integers(1, 4), data=st.data())
def test_nonlinearity_agrees_with_enumeration(l, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=1 << l, max_size=1 << l))
    tbl = TruthTable(l, bits)
    nl = nonlinearity(tbl)
    assert nl == nonlinearity_by_enumeration(tbl)
    assert (nl == 0) == (list(tbl.outputs) in list(affine_tables(l)))


def test_eval_table_width_check():
    with pytest.raises(WidthMismatch):
        eval_table(example_table(), B("0101"))


def test_eval_vector():
    ex = example_table()
    assert eval_vector([ex], B("01111")) == B("1")
    for x in ("00000", "10101", "11111"):
        assert eval_vector([TruthTable.constant(5, 0), TruthTable.constant(5, 1)], B(x)) == B("01")
    assert eval_vector([TruthTable.parity(5), ex], B("10010")) == B("01")
    with pytest.raises(ValueError):
        eval_vector([], B("10010"))


def test_verhoeff_tables_form_d5():
    perm = set(range(10))
    for j in range(10):
        assert set(VERHOEFF_D[j]) == perm
        assert {VERHOEFF_D[i][j] for i in range(10)} == perm
        assert VERHOEFF_D[j][VERHOEFF_INV[j]] == 0
    for a, b, c in itertools.product(range(10), repeat=3):
        assert VERHOEFF_D[VERHOEFF_D[a][b]][c] == VERHOEFF_D[a][VERHOEFF_D[b][c]]


def brute_check_digit(digits):
    found = [d for d in range(10) if verhoeff_validate([*digits, d])]
    assert len(found) == 1
    return found[0]


def test_verhoeff_examples():
    assert verhoeff_check_digit([]) == 0
    assert verhoeff_check_digit([2, 3, 6]) == 3 == brute_check_digit([2, 3, 6])
    for digits in itertools.product(range(10), repeat=3):
        d = verhoeff_check_digit(digits)
        assert verhoeff_validate([*digits, d])
    with pytest.raises(ValueError):
        verhoeff_check_digit([1, 10])


def test_verhoeff_control():
    zero = verhoeff_control(B("00000"), 4)
    assert zero == BitVector(brute_check_digit([0]), 4)
    assert verhoeff_control(BitVector(236, 8), 4) == B("0011")
    assert verhoeff_control(BitVector(236, 8), 1) == B("1")
    assert decimal_digits(0) == [0]
    with pytest.raises(ValueError):
        verhoeff_control(B("00000"), 5)
    with pytest.raises(ValueError):
        CheckDigitControl(8, 5)


def test_hash_control():
    identity = lambda b: b  # noqa: E731
    assert hash_control(B("10010"), 3, identity) == B("100")
    assert pack_bits(B("01001")) == b"\x48"
    ref = hashlib.sha256(b"\x48").digest()
    assert hash_control(B("01001"), 4, lambda b: hashlib.sha256(b).digest()) == BitVector(ref[0] >> 4, 4)
    assert hash_control(B("10010"), 3) == hash_control(B("10010"), 3)
    assert len(mix64(b"abc")) == 8
    with pytest.raises(ValueError):
        HashControl(5, 5)


def test_control_width_constraint():
    with pytest.raises(ValueError):
        TableControl([TruthTable.parity(1)])
    with pytest.raises(WidthMismatch):
        TableControl([TruthTable.parity(5)])(B("0101"))


@pytest.mark.parametrize("make", [
    lambda l: TableControl([random_balanced_table(l, random.Random(l)) for _ in range(3)]),
    lambda l: CheckDigitControl(l, 4),
    lambda l: HashControl(l, 3),
])
@pytest.mark.parametrize("l", [5, 8, 12])
def test_controls_are_deterministic(make, l):
    f, g = make(l), make(l)
    xs = [BitVector(k, l) for k in range(1 << l)]
    assert [f(x) for x in xs] == [g(x) for x in xs] == [f(x) for x in xs]


@given(l=st.integers(2, 8), m=st.integers(1, 4), seed=st.integers(0, 2**32))
def test_vector_of_balanced_tables_is_balanced_per_bit(l, m, seed):
    rng = random.Random(seed)
    tables = [random_balanced_table(l, rng) for _ in range(m)]
    f = TableControl(tables) if m < l else None
    for j, tbl in enumerate(tables):
        assert is_balanced(tbl)
        if f is not None:
            assert sum(f(BitVector(k, l))[j] for k in range(1 << l)) == 1 << (l - 1)
        # agreement with any fixed target bit is exactly half the inputs
        for target in (0, 1):
            assert sum(b == target for b in tbl.outputs) == 1 << (l - 1)


def test_table_file_round_trip(tmp_path):
    tbl = example_table()
    text = tbl.dumps()
    assert text.splitlines()[0] == "table l=5"
    assert "01111:1" in text.splitlines()
    assert TruthTable.loads(text) == tbl
    path = tmp_path / "t.tbl"
    path.write_text(text)
    assert TruthTable.load(path).digest() == tbl.digest()


@pytest.mark.parametrize("text", ["", "table l=2\n00:0\n01:1\n10:1\n", "table l=1\n1:0\n0:1\n",
                                  "table l=1\n0:0\n1:2\n", "tbl l=1\n0:0\n1:1\n"])
def test_table_parse_errors(text):
    with pytest.raises(ValueError):
        TruthTable.loads(text)
