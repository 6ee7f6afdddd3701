"""The (-)^bot Galois machinery over a frame's window.

For a set A of positions, ``rsr(A)`` is the set of contexts whose pointwise
sum with every member of A is incoherent.  Applying it twice gives a closure
operator; the closed sets ("roles") form a complete lattice, the carrier of
the frame's Girard quantale.

Position sets are bit-vectors: bit ``i`` stands for the window position with
canonical index ``i``.  Principal blocker sets ``p^bot`` are precomputed once
per frame and every rsr call is an intersection of them, which is also what
makes the meet-closure lattice enumeration feasible.
"""

from __future__ import annotations

from typing import Iterable, Union

from .frames import Frame, FrameError, Position

DEFAULT_MAX_ROLES = 1 << 20


class LatticeSizeError(FrameError):
    """Role lattice exceeded the configured bound."""


class _RsrCache:
    __slots__ = ("blockers", "full_mask")

    def __init__(self, frame: Frame):
        window = frame.window()
        size = len(window)
        self.full_mask = (1 << size) - 1
        # p^bot per window position: one membership scan of the window each.
        # Sums are decidable up to 2*cap by the frame contract, so no sum is
        # silently dropped here.
        blockers = []
        for p in window:
            mask = 0
            for j, q in enumerate(window):
                if frame.bot_member(p.add(q) if frame.mode == "multiset" else p.union(q)):
                    mask |= 1 << j
            blockers.append(mask)
        self.blockers = blockers


def _cache(frame: Frame) -> _RsrCache:
    if frame._rsr_cache is None:
        frame._rsr_cache = _RsrCache(frame)
    return frame._rsr_cache


def blocker_masks(frame: Frame) -> list[int]:
    return _cache(frame).blockers


def full_mask(frame: Frame) -> int:
    return _cache(frame).full_mask


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def rsr_mask(frame: Frame, mask: int) -> int:
    cache = _cache(frame)
    out = cache.full_mask
    for i in _iter_bits(mask):
        out &= cache.blockers[i]
        if not out:
            break
    return out


def closure_mask(frame: Frame, mask: int) -> int:
    return rsr_mask(frame, rsr_mask(frame, mask))


# ---------------------------------------------------------------------------
# Position sets and roles
# ---------------------------------------------------------------------------


class PositionSet:
    """A set of window positions over a fixed frame, stored as a bitmask."""

    __slots__ = ("frame", "mask")

    def __init__(self, frame: Frame, mask: int):
        self.frame = frame
        self.mask = mask

    @classmethod
    def from_positions(cls, frame: Frame, positions: Iterable[Position]) -> "PositionSet":
        mask = 0
        for p in positions:
            idx = frame.window_index(p)
            if idx is None:
                raise FrameError(f"position outside the window: {p.render(frame.atoms)}")
            mask |= 1 << idx
        return cls(frame, mask)

    @classmethod
    def empty(cls, frame: Frame) -> "PositionSet":
        return cls(frame, 0)

    @classmethod
    def full(cls, frame: Frame) -> "PositionSet":
        return cls(frame, full_mask(frame))

    def positions(self) -> tuple[Position, ...]:
        window = self.frame.window()
        return tuple(window[i] for i in _iter_bits(self.mask))

    def __contains__(self, p: Position) -> bool:
        idx = self.frame.window_index(p)
        return idx is not None and bool(self.mask >> idx & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self):
        return iter(self.positions())

    def __eq__(self, other):
        return (
            isinstance(other, PositionSet)
            and self.mask == other.mask
            and self.frame == other.frame
        )

    def __hash__(self):
        return hash((self.mask, self.frame))

    def __le__(self, other: "PositionSet") -> bool:
        return self.mask | other.mask == other.mask

    def __and__(self, other: "PositionSet") -> "PositionSet":
        return PositionSet(self.frame, self.mask & other.mask)

    def __or__(self, other: "PositionSet") -> "PositionSet":
        return PositionSet(self.frame, self.mask | other.mask)

    def __repr__(self):
        inner = ", ".join(p.render(self.frame.atoms) for p in self.positions())
        return "{" + inner + "}"


class Role(PositionSet):
    """A bot-bot-closed position set: an element of the frame's role lattice."""


PositionSetLike = Union[PositionSet, Iterable[Position]]


def _as_mask(frame: Frame, A: PositionSetLike) -> int:
    if isinstance(A, PositionSet):
        if A.frame != frame:
            raise FrameError("position set belongs to a different frame")
        return A.mask
    return PositionSet.from_positions(frame, A).mask


def rsr(frame: Frame, A: PositionSetLike) -> Role:
    """Range of subjunctive robustness of A; rsr of the empty set is the full window."""
    return Role(frame, rsr_mask(frame, _as_mask(frame, A)))


def closure(frame: Frame, A: PositionSetLike) -> Role:
    """Double-negation closure rsr(rsr(A))."""
    return Role(frame, closure_mask(frame, _as_mask(frame, A)))


def is_role(frame: Frame, A: PositionSetLike) -> bool:
    mask = _as_mask(frame, A)
    return closure_mask(frame, mask) == mask


def principal_blockers(frame: Frame) -> dict[Position, Role]:
    """p^bot for every window position p (the generating set of the lattice)."""
    blockers = blocker_masks(frame)
    window = frame.window()
    return {p: Role(frame, blockers[i]) for i, p in enumerate(window)}


# ---------------------------------------------------------------------------
# The role lattice
# ---------------------------------------------------------------------------


class RoleLattice:
    """All roles of a frame, in a deterministic order.

    The lattice is the meet-closure (under intersection) of the principal
    blockers together with the full window; since rsr of any set is the
    intersection of its members' blockers, this is exactly the image of rsr.
    Roles are ordered by descending cardinality, ties broken by bitmask value.
    """

    __slots__ = ("frame", "roles", "_index", "full_index", "bottom_index")

    def __init__(self, frame: Frame, masks: Iterable[int]):
        self.frame = frame
        ordered = sorted(set(masks), key=lambda m: (-m.bit_count(), m))
        self.roles = tuple(Role(frame, m) for m in ordered)
        self._index = {m: i for i, m in enumerate(ordered)}
        self.full_index = self._index[full_mask(frame)]
        meet_all = full_mask(frame)
        for m in ordered:
            meet_all &= m
        self.bottom_index = self._index[meet_all]

    def __len__(self) -> int:
        return len(self.roles)

    def __iter__(self):
        return iter(self.roles)

    def __getitem__(self, i: int) -> Role:
        return self.roles[i]

    def index_of(self, role: Union[Role, int]) -> int:
        mask = role.mask if isinstance(role, PositionSet) else role
        try:
            return self._index[mask]
        except KeyError:
            raise FrameError("set is not a role of this lattice") from None

    def contains_mask(self, mask: int) -> bool:
        return mask in self._index


def role_lattice(frame: Frame, max_roles: int = DEFAULT_MAX_ROLES) -> RoleLattice:
    """Enumerate the role lattice by intersection-closing the principal blockers."""
    generators = set(blocker_masks(frame))
    generators.add(full_mask(frame))
    closed = set(generators)
    frontier = list(generators)
    while frontier:
        x = frontier.pop()
        fresh = []
        for y in closed:
            z = x & y
            if z not in closed and z not in fresh:
                fresh.append(z)
        for z in fresh:
            closed.add(z)
            frontier.append(z)
            if len(closed) > max_roles:
                raise LatticeSizeError(
                    f"role lattice exceeds {max_roles} roles; raise max_roles to proceed"
                )
    return RoleLattice(frame, closed)
