"""Atom-to-atom frame morphisms and their validity checks.

A morphism candidate is any total map between the atom vocabularies of two
same-mode frames.  Validity requires it to preserve the incoherence relation
and to be continuous; the continuity decision procedure used here is the
preimage form (closures of preimages of principal blockers stay put), which
is checked window-by-window.  Conservativity is the stronger two-way
transport of incoherence along the map.
"""

from __future__ import annotations

from typing import Mapping

from .frames import Frame, FrameError, ModeMismatchError, Position, Verdict
from .rsr import closure_mask


class FrameMorphism:
    """A total map between the atom sets of two frames of the same mode."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: Frame, target: Frame, mapping: Mapping[str, str]):
        if source.mode != target.mode:
            raise ModeMismatchError("morphisms require both frames in the same mode")
        missing = set(source.atoms.names) - set(mapping)
        if missing:
            raise FrameError(f"mapping is not total; missing {sorted(missing)}")
        for src, tgt in mapping.items():
            if src not in source.atoms:
                raise FrameError(f"unknown source atom {src!r}")
            if tgt not in target.atoms:
                raise FrameError(f"unknown target atom {tgt!r}")
        self.source = source
        self.target = target
        self.mapping = {name: mapping[name] for name in source.atoms.names}

    def __repr__(self):
        arrows = ", ".join(f"{a}->{b}" for a, b in self.mapping.items())
        return f"FrameMorphism({arrows})"

    def apply(self, p: Position) -> Position:
        """Image position: multiplicities accumulate on merged atoms (set mode:
        union, since counts collapse to 0/1)."""
        tgt_index = self.target.atoms.index
        n = len(self.target.atoms)
        left = [0] * n
        right = [0] * n
        for i, name in enumerate(self.source.atoms.names):
            j = tgt_index[self.mapping[name]]
            left[j] += p.left[i]
            right[j] += p.right[i]
        if self.source.mode == "set":
            left = [min(c, 1) for c in left]
            right = [min(c, 1) for c in right]
        return Position(tuple(left), tuple(right))


def _conservativity_window(m: FrameMorphism) -> tuple[Position, ...]:
    src = m.source
    if src.mode == "set":
        return src.window()
    shared_cap = min(src.cap, m.target.cap)
    return src.with_cap(shared_cap).window()


def check_conservative(m: FrameMorphism) -> Verdict:
    """Incoherence transported both ways along the map, over the whole window
    (in multiset mode: up to the smaller cap).  Witness: a position where
    the two verdicts differ."""
    for p in _conservativity_window(m):
        if m.source.bot_member(p) != m.target.bot_member(m.apply(p)):
            return Verdict(False, p)
    return Verdict(True)


def preserves_bot(m: FrameMorphism) -> Verdict:
    for p in m.source.window():
        if m.source.bot_member(p) and not m.target.bot_member(m.apply(p)):
            return Verdict(False, p)
    return Verdict(True)


def _check_continuity_window(m: FrameMorphism):
    if m.source.mode == "multiset" and m.source.cap != m.target.cap:
        raise ModeMismatchError(
            "continuity needs equal caps in multiset mode (window-relative check)"
        )


def continuity_condition3(m: FrameMorphism) -> Verdict:
    """Preimage form of continuity: for every target position y, the closure
    of f^-1(y^bot) is contained in f^-1(y^bot).  Witness on failure: the
    offending y together with the escaping source position."""
    _check_continuity_window(m)
    src, tgt = m.source, m.target
    src_window = src.window()
    images = [m.apply(p) for p in src_window]
    for y in tgt.window():
        preimage = 0
        for i, fp in enumerate(images):
            if tgt.bot_member(_sum_in(tgt, fp, y)):
                preimage |= 1 << i
        escaped = closure_mask(src, preimage) & ~preimage
        if escaped:
            leak = src_window[(escaped & -escaped).bit_length() - 1]
            return Verdict(False, {"target_position": y, "escaping_position": leak})
    return Verdict(True)


def _sum_in(frame: Frame, p: Position, q: Position) -> Position:
    return p.union(q) if frame.mode == "set" else p.add(q)


def check_continuous(m: FrameMorphism) -> Verdict:
    """Full morphism validity: incoherence preservation plus continuity."""
    pres = preserves_bot(m)
    if not pres.ok:
        return Verdict(False, {"bot_preservation": pres.witness})
    return continuity_condition3(m)
