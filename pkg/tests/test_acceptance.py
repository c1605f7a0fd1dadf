"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N PASS|FAIL`` line; the lines are repeated
in the terminal summary. Runtime limits count towards the verdict.
"""

import itertools
import random
import subprocess
import sys
import time

import pytest

from vsscontrol.access import AuthorizedSet, build_vtn_structure, threshold_authorized_sets
from vsscontrol.algebra import BitVector
from vsscontrol.analysis import EstimateConfig, TamperModel, estimate_detection_rate, sweep_m
from vsscontrol.control import (
    CheckDigitControl,
    HashControl,
    TableControl,
    TruthTable,
    example_table,
    is_balanced,
    nonlinearity,
    random_balanced_table,
    verhoeff_check_digit,
    verhoeff_validate,
)
from vsscontrol.dealer import InconsistentDealing, assign_controls, deal, information_rate
from vsscontrol.protocol import render_report, run_protocol
from vsscontrol.sharing import KghInstance, ShamirInstance

PUBLISHED_ROWS = {"00010": 0, "01111": 1, "10000": 1, "10010": 1, "11101": 0, "11111": 0}


def test_c01_golden_example(criterion):
    t0 = time.perf_counter()
    inst = ShamirInstance(31, 3, 4)
    plain = inst.deal(7, coeffs=[5, 3])
    vs = build_vtn_structure(2, 3, 4)
    f = TableControl([example_table()])
    shares = assign_controls(plain, vs, f)
    report = run_protocol(AuthorizedSet((1, 2, 3)), vs, shares, f)
    text = render_report(report)
    elapsed = time.perf_counter() - t0
    ok = (
        [s.secret_part.value for s in plain] == [15, 29, 18, 13]
        and [str(s.payload) for s in shares] == ["011111", "111010", "100101", "011011"]
        and [(str(r.r_s), str(r.f_of_rs), str(r.r_c), r.verdict) for r in report.rounds]
        == [("10010", "1", "1", "PASS"), ("11101", "0", "0", "PASS"), ("01111", "1", "1", "PASS")]
        and text.count("p=0.750000") == 3
    )
    criterion(1, ok, "golden shares, payloads, rounds and p=0.750000", elapsed, 1)


def _brute_round(shares, members, table):
    rs = 0
    rc = 0
    for s in shares:
        if s.owner in members:
            rs ^= s.secret_part.value
            rc ^= s.control_part.value
    return table.outputs[rs] == rc


def test_c02_completeness(criterion):
    t0 = time.perf_counter()
    rng = random.Random(2)
    dealt = refused = failing = 0
    while dealt < 1000:
        p = rng.choice([31, 251])
        n = rng.randint(1, 6)
        t = rng.randint(1, min(4, n))
        v = rng.randint(1, t)
        inst = ShamirInstance(p, t, n)
        vs = build_vtn_structure(v, t, n)
        f = TableControl([random_balanced_table(inst.l, rng)])
        try:
            shares = deal(inst, inst.random_secret(rng), vs, f, rng, max_attempts=64, diagnose=False)
        except InconsistentDealing:
            refused += 1
            continue
        dealt += 1
        for auth in threshold_authorized_sets(t, n):
            failing += len(run_protocol(auth, vs, shares, f).failing())
        failing += sum(not _brute_round(shares, set(vsop), f.tables[0]) for vsop in vs)
    elapsed = time.perf_counter() - t0
    criterion(2, failing == 0,
              f"{dealt} dealt configs, {failing} failing rounds ({refused} refused as inconsistent)",
              elapsed, 30)


@pytest.mark.slow
def test_c03_soundness_rate(criterion):
    t0 = time.perf_counter()
    inst = ShamirInstance(251, 3, 4)
    config = EstimateConfig(inst, build_vtn_structure(3, 3, 4), TableControl([random_balanced_table(8, random.Random(0))]))
    ests = sweep_m(config, [1, 2, 3], 10_000, TamperModel("replace_random_share", victims=(1,)), seed=3)
    elapsed = time.perf_counter() - t0
    ok = all(e.abs_error <= 0.02 for e in ests) and [e.analytic for e in ests] == [0.5, 0.75, 0.875]
    detail = ", ".join(f"m={e.m} rate={e.rate:.4f} vs {e.analytic}" for e in ests)
    criterion(3, ok, detail, elapsed, 60)


@pytest.mark.slow
def test_c04_two_round_compounding(criterion):
    t0 = time.perf_counter()
    inst = ShamirInstance(31, 3, 4)
    config = EstimateConfig(inst, build_vtn_structure(2, 3, 4), TableControl([example_table()]),
                            auth=AuthorizedSet((1, 2, 3)), scope="protocol")
    est = estimate_detection_rate(config, TamperModel("replace_random_share", victims=(1,)), 10_000, seed=4)
    elapsed = time.perf_counter() - t0
    ok = est.rounds == 2 and est.analytic == 0.75 and est.abs_error <= 0.02
    criterion(4, ok, f"rate={est.rate:.4f} over {est.rounds} rounds vs 0.75", elapsed, 60)


def test_c05_perfectness(criterion):
    t0 = time.perf_counter()
    p = 31
    inst = ShamirInstance(p, 3, 4)
    plain = inst.deal(7, coeffs=[5, 3])
    points = [(s.owner, s.secret_part.value) for s in plain]
    ok = True
    for (x1, y1), (x2, y2) in itertools.combinations(points, 2):
        # every quadratic through both points; collect the secrets they hide
        secrets = set()
        for a1 in range(p):
            for a2 in range(p):
                a0 = (y1 - a1 * x1 - a2 * x1 * x1) % p
                if (a0 + a1 * x2 + a2 * x2 * x2) % p == y2:
                    secrets.add(a0)
        ok &= secrets == set(range(p))
    for subset in itertools.combinations(plain, 3):
        ok &= inst.recover(subset) == 7
    elapsed = time.perf_counter() - t0
    criterion(5, ok, "2-subsets consistent with all 31 secrets, 3-subsets recover 7", elapsed, 1)


def _affine_nonlinearity(tbl):
    n = tbl.l
    best = 1 << n
    for a in range(1 << n):
        for c in (0, 1):
            dist = sum(tbl.outputs[x] != ((a & x).bit_count() + c) % 2 for x in range(1 << n))
            best = min(best, dist)
    return best


def test_c06_control_quality(criterion):
    t0 = time.perf_counter()
    tbl = example_table()
    rows_ok = all(tbl(BitVector.from_str(k)) == b for k, b in PUBLISHED_ROWS.items())
    nl = nonlinearity(tbl)
    rng = random.Random(6)
    fixtures = [TruthTable.parity(4),
                TruthTable.from_function(lambda x: x[0] & x[1] ^ x[2] & x[3], 4)]
    fixtures += [random_balanced_table(4, rng) for _ in range(20)]
    walsh_ok = all(nonlinearity(f) == _affine_nonlinearity(f) for f in fixtures)
    walsh_ok &= nonlinearity(fixtures[1]) == 6 and nonlinearity(fixtures[0]) == 0
    elapsed = time.perf_counter() - t0
    ok = rows_ok and is_balanced(tbl) and nl > 0 and walsh_ok
    criterion(6, ok, f"6 published rows match, balanced={is_balanced(tbl)}, nonlinearity={nl}, "
                     f"Walsh agrees with affine enumeration on {len(fixtures)} l=4 fixtures", elapsed, 1)


def test_c07_verhoeff_exhaustive(criterion):
    t0 = time.perf_counter()
    words = substitutions = transpositions = missed = 0
    for length in range(1, 5):
        for body in itertools.product(range(10), repeat=length):
            word = list(body) + [verhoeff_check_digit(body)]
            words += 1
            missed += not verhoeff_validate(word)
            for i in range(len(word)):
                for d in range(10):
                    if d != word[i]:
                        substitutions += 1
                        bad = word[:]
                        bad[i] = d
                        missed += verhoeff_validate(bad)
            for i in range(len(word) - 1):
                if word[i] != word[i + 1]:
                    transpositions += 1
                    bad = word[:]
                    bad[i], bad[i + 1] = bad[i + 1], bad[i]
                    missed += verhoeff_validate(bad)
    elapsed = time.perf_counter() - t0
    criterion(7, missed == 0, f"{words} words, {substitutions} substitutions, "
                              f"{transpositions} transpositions, {missed} undetected", elapsed, 10)


def test_c08_information_rate(criterion):
    rng = random.Random(8)
    checked = 0
    ok = True
    for p, t, n in [(31, 3, 4), (251, 2, 5), (127, 3, 3), (7, 2, 3)]:
        inst = ShamirInstance(p, t, n)
        for m in range(1, inst.l):
            for f in (TableControl([random_balanced_table(inst.l, rng) for _ in range(m)]),
                      HashControl(inst.l, m)):
                shares = deal(inst, 1, build_vtn_structure(1, t, n), f, rng)
                ok &= all(s.payload.width == inst.l + m > inst.l for s in shares)
                ok &= information_rate(inst.l, m) < 1
                checked += len(shares)
    for n in (1, 3):
        inst = KghInstance(n, 6)
        for m in range(1, 5):
            shares = deal(inst, 5, build_vtn_structure(n, n, n), CheckDigitControl(6, m), rng)
            ok &= all(s.payload.width == 6 + m > 6 for s in shares)
            checked += len(shares)
    criterion(8, ok, f"payload width l+m > l for {checked} dealt shares")


def test_c09_linearity_equivalence(criterion):
    t0 = time.perf_counter()
    rng = random.Random(9)
    bad = 0
    for _ in range(200):
        if rng.random() < 0.8:
            p = rng.choice([7, 31, 127, 251])
            n = rng.randint(1, min(5, p - 1))
            t = rng.randint(1, n)
            inst = ShamirInstance(p, t, n)
        else:
            n = rng.randint(1, 5)
            inst = KghInstance(n, rng.randint(2, 8))
            t = n
        v = rng.randint(1, t)
        vs = build_vtn_structure(v, t, n)
        parity = TruthTable.parity(inst.l)
        f = TableControl([parity])
        plain = inst.deal(inst.random_secret(rng), rng=rng)
        direct = assign_controls(plain, vs, f, strategy="direct")
        constrained = assign_controls(plain, vs, f, strategy="constrained")
        bad += [s.control_part for s in direct] != [s.control_part for s in constrained]
        bad += sum(not _brute_round(constrained, set(vsop), parity) for vsop in vs)
    elapsed = time.perf_counter() - t0
    criterion(9, bad == 0, f"200 parity instances, {bad} mismatches or failing rounds", elapsed, 10)


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "vsscontrol.cli", *map(str, args)],
                          capture_output=True, text=True)


def test_c10_cli_round_trip(criterion, tmp_path):
    from vsscontrol.cli import main
    from vsscontrol.fileformat import ShareFile

    t0 = time.perf_counter()
    golden = tmp_path / "golden.vss"
    bad = tmp_path / "bad.vss"
    codes = [
        main(["deal", "--p", "31", "--t", "3", "--n", "4", "--v", "2", "--secret", "7",
              "--coeffs", "5,3", "--out", str(golden)]),
        main(["verify", "--shares", str(golden), "--auth", "1,2,3"]),
        main(["tamper", "--shares", str(golden), "--victim", "1", "--bit", "5", "--out", str(bad)]),
        main(["verify", "--shares", str(bad), "--auth", "1,2,3"]),
        main(["recover", "--shares", str(bad), "--auth", "1,2,3", "--skip-verify"]),
    ]
    text = golden.read_text()
    identical = ShareFile.loads(text).dumps() == text and ShareFile.loads(bad.read_text()).dumps() == bad.read_text()
    elapsed = time.perf_counter() - t0
    # the console entry point behaves the same in a separate process
    proc = _cli("verify", "--shares", bad, "--auth", "1,2,3")
    ok = codes == [0, 0, 0, 1, 0] and identical and proc.returncode == 1
    criterion(10, ok, f"exit codes deal/verify/tamper/verify/recover={codes}, "
                      f"parse/serialize identical={identical}", elapsed, 1)
