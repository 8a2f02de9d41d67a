import os
import sys
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cmstickel.algebra import FiniteAbelianGroup, GroupRingElement  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SMALL_GROUPS = [(2,), (3,), (4,), (6,), (2, 2), (2, 4), (2, 6), (3, 3), (12,), (2, 2, 2)]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def group_and_elements(draw, count=2):
    G = FiniteAbelianGroup(draw(st.sampled_from(SMALL_GROUPS)))
    els = [GroupRingElement(G, draw(st.lists(rationals, min_size=G.order, max_size=G.order)))
           for _ in range(count)]
    return G, els


@pytest.fixture
def cyclic4():
    return FiniteAbelianGroup([4])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
