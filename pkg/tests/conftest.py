import json
from pathlib import Path

import pytest
from hypothesis import settings

from polycov.constructors import build
from polycov.monodromy import monodromy
from polycov.sggi import Sggi

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


def closure(gens):
    """Brute-force element set of the group generated by image tuples."""
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@pytest.fixture(scope="session")
def example_poset():
    return build("pyramid(toroid44(3))")


@pytest.fixture(scope="session")
def example_mon(example_poset):
    return monodromy(example_poset)


@pytest.fixture(scope="session")
def witness_sggi():
    data = json.loads((DATA / "prepolytope_witness.json").read_text())
    return Sggi.from_json(data), data


@pytest.fixture(scope="session")
def square_pyramid():
    return build("pyramid(polygon(4))")


# ---- acceptance summary -------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, bool, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, secs, note = ACCEPTANCE[num]
        line = f"criterion {num} {'PASS' if ok else 'FAIL'} ({secs:.2f}s) {title}"
        terminalreporter.write_line(line + (f": {note}" if note else ""))
