"""Sequent goodness by bidirectional rule unfolding.

A sequent over logically complex formulas is reduced, rule by invertible
rule, to a conjunction of atomic sequents, each of which is settled by
membership in the frame's incoherence relation:

* negation moves a formula to the other side;
* a conjunction on the left (or disjunction on the right) merges in place;
* a conjunction on the right splits into premises for each conjunct -- plus,
  in the contractive variant, a third premise carrying both conjuncts
  side by side; disjunction on the left is dual.

The contractive variant lives on set-mode frames (sides collapse to sets
before every step); the non-contractive variant on multiset frames.
Implication is not a rule: it is unfolded as ~A \\/ B on entry.  The
reduction target is always the leftmost outermost complex formula, left side
first; the verdict is policy-independent (a tested property, not an input).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .formulas import Atom, Bin, Formula, Neg, parse_sequent, render_sequent
from .frames import Frame, FrameError, ModeMismatchError

NMMS_OPS = frozenset({"and", "or"})
VARIANTS = ("contractive", "noncontractive")

Side = tuple[Formula, ...]


class NmmsFragmentError(FrameError):
    """Formula outside the negation / conjunction / disjunction fragment."""


@dataclass(frozen=True)
class FormulaSequent:
    lhs: Side
    rhs: Side
    variant: str

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise FrameError(f"unknown variant {self.variant!r}")

    @classmethod
    def parse(cls, text: str, variant: str) -> "FormulaSequent":
        lhs, rhs = parse_sequent(text)
        return cls(lhs, rhs, variant)

    def render(self) -> str:
        return render_sequent(self.lhs, self.rhs)


def _desugar(f: Formula) -> Formula:
    """Unfold -> as ~A \\/ B; reject connectives outside the rule set."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Neg):
        return Neg(_desugar(f.sub))
    assert isinstance(f, Bin)
    if f.op == "imp":
        return Bin("or", Neg(_desugar(f.left)), _desugar(f.right))
    if f.op not in NMMS_OPS:
        raise NmmsFragmentError(f"connective {f.op!r} has no sequent rule")
    return Bin(f.op, _desugar(f.left), _desugar(f.right))


def _check_variant(frame: Frame, variant: str):
    if variant == "contractive" and frame.mode != "set":
        raise ModeMismatchError("contractive unfolding requires a set-mode frame")
    if variant == "noncontractive" and frame.mode != "multiset":
        raise ModeMismatchError("non-contractive unfolding requires a multiset frame")


def _dedupe(side: Side) -> Side:
    return tuple(dict.fromkeys(side))


def _atomic_verdict(frame: Frame, lhs: Side, rhs: Side) -> bool:
    left = [f.name for f in lhs]
    right = [f.name for f in rhs]
    return frame.bot_member(frame.position(left, right))


def _reduce(
    lhs: Side, rhs: Side, side: str, k: int, contractive: bool
) -> tuple[str, list[tuple[Side, Side]]]:
    """Apply the rule matching the complex formula at (side, k)."""
    if side == "lhs":
        f = lhs[k]
        rest = lhs[:k] + lhs[k + 1:]
        if isinstance(f, Neg):
            return "negL", [(rest, rhs + (f.sub,))]
        assert isinstance(f, Bin)
        if f.op == "and":
            merged = lhs[:k] + (f.left, f.right) + lhs[k + 1:]
            return "andL", [(merged, rhs)]
        assert f.op == "or"
        with_left = lhs[:k] + (f.left,) + lhs[k + 1:]
        with_right = lhs[:k] + (f.right,) + lhs[k + 1:]
        premises = [(with_left, rhs), (with_right, rhs)]
        if contractive:
            both = lhs[:k] + (f.left, f.right) + lhs[k + 1:]
            premises.append((both, rhs))
        return ("orLc" if contractive else "orL"), premises
    f = rhs[k]
    rest = rhs[:k] + rhs[k + 1:]
    if isinstance(f, Neg):
        return "negR", [(lhs + (f.sub,), rest)]
    assert isinstance(f, Bin)
    if f.op == "or":
        merged = rhs[:k] + (f.left, f.right) + rhs[k + 1:]
        return "orR", [(lhs, merged)]
    assert f.op == "and"
    with_left = rhs[:k] + (f.left,) + rhs[k + 1:]
    with_right = rhs[:k] + (f.right,) + rhs[k + 1:]
    premises = [(lhs, with_left), (lhs, with_right)]
    if contractive:
        both = rhs[:k] + (f.left, f.right) + rhs[k + 1:]
        premises.append((lhs, both))
    return ("andRc" if contractive else "andR"), premises


def _targets(lhs: Side, rhs: Side) -> list[tuple[str, int]]:
    out = [("lhs", i) for i, f in enumerate(lhs) if not isinstance(f, Atom)]
    out += [("rhs", i) for i, f in enumerate(rhs) if not isinstance(f, Atom)]
    return out


Chooser = Callable[[list[tuple[str, int]]], tuple[str, int]]


def _decide(
    frame: Frame,
    sequent: FormulaSequent,
    chooser: Optional[Chooser] = None,
) -> bool:
    _check_variant(frame, sequent.variant)
    contractive = sequent.variant == "contractive"
    lhs = tuple(_desugar(f) for f in sequent.lhs)
    rhs = tuple(_desugar(f) for f in sequent.rhs)
    memo: dict[tuple, bool] = {}

    def key(l: Side, r: Side):
        if contractive:
            return (frozenset(l), frozenset(r))
        return (tuple(sorted(map(repr, l))), tuple(sorted(map(repr, r))))

    def go(l: Side, r: Side) -> bool:
        if contractive:
            l, r = _dedupe(l), _dedupe(r)
        k = key(l, r)
        hit = memo.get(k)
        if hit is not None:
            return hit
        targets = _targets(l, r)
        if not targets:
            verdict = _atomic_verdict(frame, l, r)
        else:
            side, i = chooser(targets) if chooser else targets[0]
            _, premises = _reduce(l, r, side, i, contractive)
            verdict = all(go(pl, pr) for pl, pr in premises)
        memo[k] = verdict
        return verdict

    return go(lhs, rhs)


def decide(frame: Frame, sequent: FormulaSequent) -> bool:
    """Goodness of the sequent: the conjunction of the incoherence verdicts
    of all atomic leaves of its rule unfolding."""
    return _decide(frame, sequent)


@dataclass(frozen=True)
class TraceNode:
    lhs: Side
    rhs: Side
    rule: Optional[str]
    verdict: bool
    children: tuple["TraceNode", ...]

    def leaves(self) -> list["TraceNode"]:
        if not self.children:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def as_dict(self) -> dict:
        return {
            "sequent": render_sequent(self.lhs, self.rhs),
            "rule": self.rule,
            "verdict": self.verdict,
            "children": [c.as_dict() for c in self.children],
        }

    def render(self, indent: int = 0) -> str:
        mark = "ok" if self.verdict else "FAIL"
        rule = f" [{self.rule}]" if self.rule else ""
        line = "  " * indent + f"{render_sequent(self.lhs, self.rhs)}{rule}  ({mark})"
        return "\n".join([line] + [c.render(indent + 1) for c in self.children])


def reduction_trace(frame: Frame, sequent: FormulaSequent) -> TraceNode:
    """Full unfolding tree; decide() equals the AND over its leaves."""
    _check_variant(frame, sequent.variant)
    contractive = sequent.variant == "contractive"

    def go(l: Side, r: Side) -> TraceNode:
        if contractive:
            l, r = _dedupe(l), _dedupe(r)
        targets = _targets(l, r)
        if not targets:
            return TraceNode(l, r, None, _atomic_verdict(frame, l, r), ())
        side, i = targets[0]
        rule, premises = _reduce(l, r, side, i, contractive)
        children = tuple(go(pl, pr) for pl, pr in premises)
        return TraceNode(l, r, rule, all(c.verdict for c in children), children)

    lhs = tuple(_desugar(f) for f in sequent.lhs)
    rhs = tuple(_desugar(f) for f in sequent.rhs)
    return go(lhs, rhs)
