import pytest

from treebraid.morse import MorseComplex
from treebraid.tree import canonical_t_min, from_document, path_tree, spider, subdivide_for


def h_tree(n):
    """Two degree-3 vertices joined by a path, subdivided for ``n`` strands."""
    raw = from_document({"root": "r", "children": {"r": ["a"], "a": ["x", "b"], "b": ["y", "z"]}})
    return subdivide_for(raw, n)


def sample_trees(n):
    """Small sufficiently subdivided trees for ``n`` strands."""
    k = max(n - 1, 1)
    return {
        "path": path_tree(2 * k + 2),
        "Y": spider([k, k, k]),
        "X": spider([k, k, k, k]),
        "H": h_tree(n),
        "caterpillar": subdivide_for(
            from_document({"root": "0", "children": {"0": ["1"], "1": ["l1", "2"], "2": ["l2", "3"], "3": ["l3", "l4"]}}), n
        ),
    }


@pytest.fixture(scope="session")
def tmin():
    return canonical_t_min()


@pytest.fixture(scope="session")
def tmin4(tmin):
    """The Morse complex of UD^4 T_min, shared so cell caches are reused."""
    return MorseComplex(tmin, 4)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.result_lines():
        terminalreporter.write_line(line)
