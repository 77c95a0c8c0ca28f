import pytest

from drinfeld import build_group, drinfeld_double

# The fifteen groups used throughout the method-agreement checks.
CORE_SPECS = {
    "C2": "cyclic:2",
    "C4": "cyclic:4",
    "C2xC2": "product:cyclic:2,cyclic:2",
    "D6": "dihedral:3",
    "D8": "dihedral:4",
    "D10": "dihedral:5",
    "D12": "dihedral:6",
    "D14": "dihedral:7",
    "Q8": "dicyclic:2",
    "Q12": "dicyclic:3",
    "Q16": "dicyclic:4",
    "Q20": "dicyclic:5",
    "S3": "symmetric:3",
    "S4": "symmetric:4",
    "A4": "perm:(1,2,3);(2,3,4)",
}


def el(G, a, b=0):
    """Index of y^b x^a in a dihedral or dicyclic group."""
    n = len([e for e in G.elements if e[1] == 0])
    return G.elements.index((a % n, b))


def double(name):
    return drinfeld_double(CORE_SPECS.get(name, name))


@pytest.fixture(params=sorted(CORE_SPECS))
def core_name(request):
    return request.param


@pytest.fixture
def group_of():
    return lambda name: build_group(CORE_SPECS.get(name, name))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
