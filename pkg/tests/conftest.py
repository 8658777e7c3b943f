import pytest
from hypothesis import settings

from mrapriori.dataset import TransactionDatabase
from mrapriori.runtime import ClusterSpec, CostModel, NodeKind, NodeSpec

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

# Costs reduced to records / speed so schedules can be checked by hand.
FLAT = CostModel(startup=0.0, alpha=1.0, beta=0.0, remote_penalty=1.1)

ACCEPTANCE_LINES = []


def flat_cluster(specs, rf=1, speculation=True, ratio=1.5):
    """``specs`` is a list of (name, cores, speed[, kind])."""
    nodes = [NodeSpec(s[0], s[1], s[2], s[3] if len(s) > 3 else NodeKind.PHYSICAL) for s in specs]
    return ClusterSpec(nodes, rf, speculation, ratio, FLAT)


@pytest.fixture
def db4():
    return TransactionDatabase.from_itemsets([(1, 2, 3), (1, 2, 4), (1, 3), (2, 4)])


@pytest.fixture
def db4_file(tmp_path):
    path = tmp_path / "db4.txt"
    path.write_text("1 2 3\n1 2 4\n1 3\n2 4\n")
    return path


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
