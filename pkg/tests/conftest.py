import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from argmc.formula import And, Atom, Iff, Implies, Not, Or  # noqa: E402
from argmc.kb import KnowledgeBase, load_kb  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

ATOMS = ("p", "q", "r")


def formulas(atoms=ATOMS, max_leaves=6):
    leaves = st.sampled_from([Atom(a) for a in atoms])
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            inner.map(Not),
            st.tuples(inner, inner).map(lambda t: And(*t)),
            st.tuples(inner, inner).map(lambda t: Or(*t)),
            st.tuples(inner, inner).map(lambda t: Implies(*t)),
            st.tuples(inner, inner).map(lambda t: Iff(*t)),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def knowledge_bases(draw, atoms=ATOMS, max_formulas=4):
    fs = draw(st.lists(formulas(atoms, 5), min_size=0, max_size=max_formulas, unique=True))
    return KnowledgeBase.from_formulas(fs)


def kb(*lines: str) -> KnowledgeBase:
    return load_kb("\n".join(lines))


@pytest.fixture
def tmp_kb(tmp_path):
    def write(*lines: str, name="kb.txt"):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)
    return write


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
