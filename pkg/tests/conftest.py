import pytest

from vsscontrol.access import AuthorizedSet, build_vtn_structure
from vsscontrol.control import TableControl, example_table
from vsscontrol.dealer import assign_controls
from vsscontrol.sharing import ShamirInstance


@pytest.fixture(scope="session")
def golden():
    """The (2,3,4) worked example over GF(31) with g(x) = 7 + 5x + 3x^2."""
    inst = ShamirInstance(31, 3, 4)
    plain = inst.deal(7, coeffs=[5, 3])
    vs = build_vtn_structure(2, 3, 4)
    f = TableControl([example_table()], name="example_table")
    extended = assign_controls(plain, vs, f)
    return {
        "inst": inst,
        "plain": plain,
        "vs": vs,
        "f": f,
        "shares": extended,
        "auth": AuthorizedSet((1, 2, 3)),
    }


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion N PASS|FAIL <detail> (<secs>s, limit <s>s)``."""

    def record(number, ok, detail, elapsed=None, limit=None):
        timing = ""
        if elapsed is not None:
            timing = f" ({elapsed:.2f}s" + (f", limit {limit}s)" if limit else ")")
            ok = ok and (limit is None or elapsed < limit)
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'} {detail}{timing}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
