"""Conceptual contents and semantic consequence.

A formula denotes a *content*: a pair of roles, the premisory role (what it
contributes on the left of a turnstile) and the conclusory role (its
contribution on the right).  Atoms are interpreted by the closures of their
two signed singleton positions; connectives act on contents through the
quantale operations, with two clause families:

* ``classical`` (set mode only): negation swaps the pair, conjunction is
  tensor on the premisory side and tilde-join on the conclusory side, and
  or / -> are the De Morgan combinations of those.
* ``linear``: tensor, plus, parr, with act as the twisted-quantale pairs
  (tensor x parr), (join x meet), (parr x tensor), (meet x join); negation
  swaps.

A sequent of contents holds when the tensor of all left premisory roles and
all right conclusory roles lands inside the dualizer role.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from .formulas import (
    Atom, Bin, CLASSICAL_OPS, Formula, LINEAR_OPS, Neg, binary_ops, parse_formula,
)
from .frames import Frame, FrameError, ModeMismatchError, Position
from .quantale import IdempotenceError, QuantaleOps, quantale
from .rsr import Role, blocker_masks

CLAUSE_SETS = ("classical", "linear")


class ClauseError(FrameError):
    """Formula/clause-set combination outside the sanctioned semantics."""


@dataclass(frozen=True)
class Content:
    """Semantic value of a formula: a premisory and a conclusory role."""

    premisory: Role
    conclusory: Role

    def swap(self) -> "Content":
        return Content(self.conclusory, self.premisory)


class ContentSequent(NamedTuple):
    """A two-sided sequent whose entries are contents or formulas."""

    lhs: tuple
    rhs: tuple


FormulaLike = Union[Formula, str]
EntryLike = Union[Content, Formula, str]


class Interpretation:
    """Evaluation context for one frame: lattice, quantale, and content caches."""

    def __init__(self, frame: Frame, ops: Optional[QuantaleOps] = None):
        self.frame = frame
        self.quantale = ops if ops is not None else quantale(frame)
        self._eval_cache: dict[tuple[Formula, str], tuple[int, int]] = {}

    # -- atoms ----------------------------------------------------------------

    def _atom_indices(self, name: str) -> tuple[int, int]:
        if name not in self.frame.atoms:
            raise FrameError(f"unknown atom {name!r}")
        key = (Atom(name), "atom")
        hit = self._eval_cache.get(key)
        if hit is None:
            q = self.quantale
            left = self.frame.position([name], [])
            right = self.frame.position([], [name])
            plus = q.lattice.index_of(
                _closure_index_mask(q, left)
            )
            minus = q.lattice.index_of(
                _closure_index_mask(q, right)
            )
            hit = (plus, minus)
            self._eval_cache[key] = hit
        return hit

    def atom(self, name: str) -> Content:
        plus, minus = self._atom_indices(name)
        q = self.quantale
        return Content(q.role(plus), q.role(minus))

    # -- formula evaluation -----------------------------------------------------

    def _check_fragment(self, f: Formula, clauses: str):
        if clauses not in CLAUSE_SETS:
            raise ClauseError(f"unknown clause set {clauses!r}")
        if clauses == "classical" and self.frame.mode != "set":
            raise ClauseError("classical clauses require a set-mode frame")
        ops = binary_ops(f)
        allowed = CLASSICAL_OPS if clauses == "classical" else LINEAR_OPS
        stray = ops - allowed
        if stray:
            raise ClauseError(
                f"connectives {sorted(stray)} are not part of the {clauses} clause set"
            )

    def _eval_indices(self, f: Formula, clauses: str) -> tuple[int, int]:
        key = (f, clauses)
        hit = self._eval_cache.get(key)
        if hit is not None:
            return hit
        q = self.quantale
        if isinstance(f, Atom):
            out = self._atom_indices(f.name)
        elif isinstance(f, Neg):
            plus, minus = self._eval_indices(f.sub, clauses)
            out = (minus, plus)
        else:
            assert isinstance(f, Bin)
            a = self._eval_indices(f.left, clauses)
            b = self._eval_indices(f.right, clauses)
            if clauses == "classical":
                out = self._classical_bin(f.op, a, b)
            else:
                out = self._linear_bin(f.op, a, b)
        self._eval_cache[key] = out
        return out

    def _and_clause(self, a, b) -> tuple[int, int]:
        q = self.quantale
        try:
            minus = q.tilde_join_i(a[1], b[1])
        except IdempotenceError as exc:
            raise ClauseError(f"and-clause on a non-idempotent conclusory role: {exc}") from exc
        return (q.tensor_i(a[0], b[0]), minus)

    def _classical_bin(self, op, a, b) -> tuple[int, int]:
        if op == "and":
            return self._and_clause(a, b)
        if op == "or":
            plus, minus = self._and_clause((a[1], a[0]), (b[1], b[0]))
            return (minus, plus)
        assert op == "imp"
        plus, minus = self._and_clause(a, (b[1], b[0]))
        return (minus, plus)

    def _linear_bin(self, op, a, b) -> tuple[int, int]:
        q = self.quantale
        if op == "tensor":
            return (q.tensor_i(a[0], b[0]), q.parr_i(a[1], b[1]))
        if op == "plus":
            return (q.join_i(a[0], b[0]), q.meet_i(a[1], b[1]))
        if op == "parr":
            return (q.parr_i(a[0], b[0]), q.tensor_i(a[1], b[1]))
        assert op == "with"
        return (q.meet_i(a[0], b[0]), q.join_i(a[1], b[1]))

    def eval(self, f: FormulaLike, clauses: str = "classical") -> Content:
        if isinstance(f, str):
            f = parse_formula(f)
        self._check_fragment(f, clauses)
        plus, minus = self._eval_indices(f, clauses)
        q = self.quantale
        return Content(q.role(plus), q.role(minus))

    # -- consequence -------------------------------------------------------------

    def _as_content_indices(self, entry: EntryLike, clauses: str) -> tuple[int, int]:
        if isinstance(entry, Content):
            lat = self.quantale.lattice
            return (lat.index_of(entry.premisory), lat.index_of(entry.conclusory))
        if isinstance(entry, str):
            entry = parse_formula(entry)
        self._check_fragment(entry, clauses)
        return self._eval_indices(entry, clauses)

    def entails(
        self,
        lhs: Sequence[EntryLike],
        rhs: Sequence[EntryLike],
        clauses: str = "classical",
    ) -> bool:
        """Semantic consequence.

        Tensor of all left premisory roles with all right conclusory roles,
        contained in the dualizer.  The empty tensor is the quantale unit,
        so the empty sequent holds exactly when unit <= dualizer.  In set
        mode the sides are read as content *sets* (duplicates collapse); in
        multiset mode multiplicity counts.
        """
        q = self.quantale
        left = [self._as_content_indices(e, clauses) for e in lhs]
        right = [self._as_content_indices(e, clauses) for e in rhs]
        if self.frame.mode == "set":
            left = list(dict.fromkeys(left))
            right = list(dict.fromkeys(right))
        acc = q.unit_index
        for plus, _ in left:
            acc = q.tensor_i(acc, plus)
        for _, minus in right:
            acc = q.tensor_i(acc, minus)
        return q.leq_i(acc, q.dualizer_index)

    def entails_sequent(self, sequent: Union[str, ContentSequent], clauses: str = "classical") -> bool:
        if isinstance(sequent, str):
            from .formulas import parse_sequent

            lhs, rhs = parse_sequent(sequent)
        else:
            lhs, rhs = sequent.lhs, sequent.rhs
        return self.entails(lhs, rhs, clauses)

    # -- structural properties of contents ----------------------------------------

    def is_reflexive_content(self, c: Content) -> bool:
        """Whether c entails itself: premisory x conclusory lands in the dualizer."""
        q = self.quantale
        lat = q.lattice
        prod = q.tensor_i(lat.index_of(c.premisory), lat.index_of(c.conclusory))
        return q.leq_i(prod, q.dualizer_index)

    def satisfies_cut_condition(self, c: Content) -> bool:
        """Whether the dual of the conclusory role is contained in the premisory role."""
        q = self.quantale
        lat = q.lattice
        return q.leq_i(q.neg_i(lat.index_of(c.conclusory)), lat.index_of(c.premisory))


@functools.lru_cache(maxsize=256)
def interpretation(frame: Frame) -> Interpretation:
    """Shared per-frame evaluation context (frames are immutable values)."""
    return Interpretation(frame)


def _closure_index_mask(q: QuantaleOps, p: Position) -> int:
    from .rsr import closure_mask

    idx = q.frame.window_index(p)
    if idx is None:
        raise FrameError(f"position outside the window: {p.render(q.frame.atoms)}")
    return closure_mask(q.frame, 1 << idx)


# -- spec-level convenience functions ----------------------------------------


def interpret_atom(frame: Frame, name: str) -> Content:
    return interpretation(frame).atom(name)


def eval_formula(frame: Frame, f: FormulaLike, clauses: str = "classical") -> Content:
    return interpretation(frame).eval(f, clauses)


def entails(
    frame: Frame,
    lhs: Sequence[EntryLike],
    rhs: Sequence[EntryLike],
    clauses: str = "classical",
) -> bool:
    return interpretation(frame).entails(lhs, rhs, clauses)


def is_reflexive_content(frame: Frame, c: Content) -> bool:
    return interpretation(frame).is_reflexive_content(c)


def satisfies_cut_condition(frame: Frame, c: Content) -> bool:
    return interpretation(frame).satisfies_cut_condition(c)


# ---------------------------------------------------------------------------
# Clause families in their two published shapes
# ---------------------------------------------------------------------------

IndexContent = tuple[int, int]


def connective_clause(q: QuantaleOps, op: str, a: IndexContent, b: IndexContent) -> IndexContent:
    """Twisted/mixed-quantale shape of the connective clauses (index form)."""
    if op == "tensor":
        return (q.tensor_i(a[0], b[0]), q.parr_i(a[1], b[1]))
    if op == "plus":
        return (q.join_i(a[0], b[0]), q.meet_i(a[1], b[1]))
    if op == "parr":
        return (q.parr_i(a[0], b[0]), q.tensor_i(a[1], b[1]))
    if op == "with":
        return (q.meet_i(a[0], b[0]), q.join_i(a[1], b[1]))
    if op == "and":
        return (q.tensor_i(a[0], b[0]), q.tilde_join_i(a[1], b[1]))
    raise ValueError(f"no clause for {op!r}")


def symjunction_clause(q: QuantaleOps, op: str, a: IndexContent, b: IndexContent) -> IndexContent:
    """The same clauses written with adjunction/symjunction and rsr only.

    Adjunction of roles is tensor, symjunction is join; negations are spelled
    out instead of using meet/parr directly, so this is an independent route
    for the clause-agreement check.
    """
    tensor, join, neg = q.tensor_i, q.join_i, q.neg_i
    if op == "tensor":
        return (tensor(a[0], b[0]), neg(tensor(neg(a[1]), neg(b[1]))))
    if op == "plus":
        return (join(a[0], b[0]), neg(join(neg(a[1]), neg(b[1]))))
    if op == "parr":
        plus, minus = symjunction_clause(q, "tensor", (a[1], a[0]), (b[1], b[0]))
        return (minus, plus)
    if op == "with":
        plus, minus = symjunction_clause(q, "plus", (a[1], a[0]), (b[1], b[0]))
        return (minus, plus)
    if op == "and":
        return (tensor(a[0], b[0]), join(join(a[1], b[1]), tensor(a[1], b[1])))
    raise ValueError(f"no clause for {op!r}")


# ---------------------------------------------------------------------------
# Expressibility probes
# ---------------------------------------------------------------------------

EXPLICIT_KINDS = ("negation", "conj", "disj")
_NEGATION_SEARCH_LIMIT = 10 ** 6


def find_explicit_connective(frame: Frame, kind: str):
    """Search the atom vocabulary for an explicit connective.

    * ``negation`` -- a function g on atoms with (a |-)^bot = (|- g(a))^bot
      and (g(a) |-)^bot = (|- a)^bot for every atom; returns the function as
      a dict, or None.
    * ``conj`` -- per atom pair (a, b), an atom c with (a, b |-)^bot =
      (c |-)^bot; returns a dict mapping each pair to its witness or None.
    * ``disj`` -- per atom pair, an atom c with (c |-)^bot =
      (a |-)^bot intersect (b |-)^bot.
    """
    if frame.mode != "set":
        raise ModeMismatchError("explicit-connective search needs a finite set-mode frame")
    if kind not in EXPLICIT_KINDS:
        raise ValueError(f"unknown connective kind {kind!r}")

    blockers = blocker_masks(frame)
    names = frame.atoms.names

    def left_mask(*atom_names: str) -> int:
        idx = frame.window_index(frame.position(atom_names, []))
        return blockers[idx]

    def right_mask(atom_name: str) -> int:
        idx = frame.window_index(frame.position([], [atom_name]))
        return blockers[idx]

    if kind == "negation":
        if len(names) ** len(names) > _NEGATION_SEARCH_LIMIT:
            raise FrameError("negation search space too large")
        for images in itertools.product(names, repeat=len(names)):
            g = dict(zip(names, images))
            if all(
                left_mask(a) == right_mask(g[a]) and left_mask(g[a]) == right_mask(a)
                for a in names
            ):
                return g
        return None

    table: dict[tuple[str, str], Optional[str]] = {}
    for a, b in itertools.product(names, repeat=2):
        if kind == "conj":
            target = left_mask(a, b)
        else:
            target = left_mask(a) & left_mask(b)
        witness = None
        for c in names:
            if left_mask(c) == target:
                witness = c
                break
        table[(a, b)] = witness
    return table
