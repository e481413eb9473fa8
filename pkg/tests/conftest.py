import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ecstates.partition_maya import MayaDiagram, Partition

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def partitions(draw, max_weight=8, max_parts=5):
    n = draw(st.integers(0, max_parts))
    parts = draw(st.lists(st.integers(1, max_weight), min_size=n, max_size=n))
    parts = sorted(parts, reverse=True)
    # trim to the weight budget
    out, total = [], 0
    for p in parts:
        if total + p > max_weight:
            break
        out.append(p)
        total += p
    return Partition(tuple(sorted(out, reverse=True)))


@st.composite
def maya_diagrams(draw, span=6, max_flips=4):
    K = draw(st.sets(st.integers(-span, span), max_size=max_flips))
    return MayaDiagram.from_index_set(K)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
