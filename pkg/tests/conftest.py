import random
from pathlib import Path

import pytest

from roleforge.frames import Frame, Position
from roleforge.suites import nonmonotonic_demo_frame, nontransitive_demo_frame

REPO = Path(__file__).resolve().parent.parent
FRAMES_DIR = REPO / "frames"


@pytest.fixture(scope="session")
def golden_frame() -> Frame:
    """The two-atom set-mode demo frame (supraclassical, non-monotonic)."""
    return nonmonotonic_demo_frame()


@pytest.fixture(scope="session")
def counting_frame() -> Frame:
    """The one-atom multiset demo frame at cap 8 (supralinear, non-transitive)."""
    return nontransitive_demo_frame(8)


def pos(frame: Frame, left=(), right=()) -> Position:
    return frame.position(left, right)


@pytest.fixture(scope="session")
def golden_roles(golden_frame):
    """The six role extensions of the golden frame, by short name.

    T full window; U the unit (everything except the two positions with b
    alone on the left); L/R the two 12-element blockers of the left/right
    atom singletons; D the dualizer (the incoherence relation itself);
    B the lattice bottom L & R.
    """
    f = golden_frame
    top = frozenset(f.window())
    L = top - {pos(f), pos(f, ("a",)), pos(f, (), ("b",)), pos(f, ("a",), ("b",))}
    R = top - {pos(f), pos(f, (), ("a",)), pos(f, ("b",)), pos(f, ("b",), ("a",))}
    U = top - {pos(f, ("b",)), pos(f, ("b",), ("a",))}
    D = frozenset(p for p in top if f.bot_member(p))
    B = L & R
    return {"T": top, "U": U, "L": L, "R": R, "D": D, "B": B}


def role_name(golden_roles, role) -> str:
    return {v: k for k, v in golden_roles.items()}[frozenset(role.positions())]


def seeded(seed: int) -> random.Random:
    return random.Random(seed)
