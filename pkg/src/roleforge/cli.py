"""Command-line surface.

Subcommands cover frame validation, window listing, rsr queries, lattice and
operation-table reports, atom/formula interpretation, entailment and NMMS
queries with traces, property suites, engine comparison, and morphism checks.

Exit codes: 0 success or true verdict; 1 false verdict on a query; 2 usage or
parse errors; 3 property-suite failures.  Reports are deterministic for fixed
inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import __version__
from .formulas import FormulaSyntaxError, parse_formula, parse_sequent, render
from .frames import Frame, FrameError, Position, parse_frame
from .morphisms import FrameMorphism, check_conservative, check_continuous
from .nmms import FormulaSequent, decide, reduction_trace
from .quantale import check_gq_laws, is_join_idempotent
from .rsr import PositionSet, rsr
from .semantics import Content, interpretation
from .suites import (
    cap_stability_suite, clause_agreement_suite, compare_suite, conservativity_suite,
    robbins_suite, supraclassical_suite, supralinear_suite,
)

FORMATS = ("plain", "markdown", "csv", "json", "dot")

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_SUITE = 3


@dataclass
class Report:
    kind: str
    frame: str
    result: object
    witnesses: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            payload = {
                "kind": self.kind,
                "frame": self.frame,
                "result": self.result,
                "witnesses": self.witnesses,
                "meta": {"versions": {"roleforge": __version__}, **self.meta},
            }
            return json.dumps(payload, sort_keys=True, indent=2)
        return "\n".join(self.lines)


def _parse_position(frame: Frame, text: str) -> Position:
    from .frames import _split_position_line

    lhs, rhs = _split_position_line(text.strip(), 1, 1)
    for name in lhs + rhs:
        if name not in frame.atoms:
            raise FrameError(f"unknown atom {name!r} in position {text!r}")
    p = Position.of(frame.atoms, lhs, rhs)
    if frame.mode == "set" and not p.is_setlike():
        raise FrameError(f"repeated atom on one side in set mode: {text!r}")
    frame._check_encodable(p)
    return p


def _parse_position_set(frame: Frame, text: str) -> list[Position]:
    chunks = [c for c in text.split(";") if c.strip()]
    return [_parse_position(frame, c) for c in chunks]


def _load_frame(path: str) -> Frame:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_frame(fh.read())


class _Labels:
    """Extension-stable display aliases for roles."""

    def __init__(self, frame: Frame, lattice, labels_path: Optional[str]):
        self.frame = frame
        self.lattice = lattice
        self.by_mask: dict[int, str] = {}
        if labels_path:
            with open(labels_path, "r", encoding="utf-8") as fh:
                table = json.load(fh)
            for alias, position_texts in table.items():
                ps = PositionSet.from_positions(
                    frame, [_parse_position(frame, t) for t in position_texts]
                )
                self.by_mask[ps.mask] = alias

    def alias(self, role) -> str:
        mask = role.mask if hasattr(role, "mask") else role
        hit = self.by_mask.get(mask)
        if hit is not None:
            return hit
        return f"R{self.lattice.index_of(mask)}"


def _positions_text(frame: Frame, ps) -> str:
    return "{" + "; ".join(p.render(frame.atoms) for p in ps.positions()) + "}"


def _table_lines(fmt: str, title: str, headers: list[str], rows: list[list[str]]) -> list[str]:
    if fmt == "markdown":
        out = [f"| {title} | " + " | ".join(headers) + " |"]
        out.append("|" + " --- |" * (len(headers) + 1))
        for name, row in zip(headers, rows):
            out.append(f"| {name} | " + " | ".join(row) + " |")
        return out
    if fmt == "csv":
        out = [",".join([title] + headers)]
        for name, row in zip(headers, rows):
            out.append(",".join([name] + row))
        return out
    widths = [max(len(title), max((len(h) for h in headers), default=0))]
    for col in range(len(headers)):
        widths.append(max(len(headers[col]), max((len(r[col]) for r in rows), default=0)))
    out = ["  ".join([title.ljust(widths[0])] + [h.ljust(w) for h, w in zip(headers, widths[1:])])]
    for name, row in zip(headers, rows):
        out.append("  ".join([name.ljust(widths[0])] + [c.ljust(w) for c, w in zip(row, widths[1:])]))
    return out


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    report = Report("check", args.frame, result={}, meta={"cap": frame.cap})
    result = {
        "atoms": list(frame.atoms.names),
        "mode": frame.mode,
        "cap": frame.cap,
        "explicit": len(frame.explicit),
        "generators": sorted(frame.generators),
        "window": frame.window_cardinality(),
        "reflexive": frame.is_reflexive().ok,
    }
    if frame.mode == "set" and frame.window_cardinality() <= 1 << 16:
        result["containment"] = frame.is_containment().ok
    report.result = result
    report.lines = [f"{k} = {v}" for k, v in result.items()]
    return EXIT_OK, report


def _cmd_positions(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    rendered = [p.render(frame.atoms) for p in frame.window()]
    report = Report("check", args.frame, result=rendered, meta={"cap": frame.cap})
    report.lines = rendered
    return EXIT_OK, report


def _stability_note(frame: Frame, positions, compute) -> dict:
    """Recompute an extension at cap+2 and diff it on the current window."""
    from .suites import positions_within

    wide = frame.with_cap(frame.cap + 2)
    small = frozenset(positions)
    big = positions_within(frame, compute(wide))
    return {
        "stable": small == big,
        "recheck_cap": wide.cap,
        "only_at_cap": sorted(p.render(frame.atoms) for p in small - big),
        "only_at_recheck": sorted(p.render(frame.atoms) for p in big - small),
    }


def _cmd_rsr(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    members = _parse_position_set(frame, args.positions)
    out = rsr(frame, members)
    report = Report("check", args.frame, result=None, meta={"cap": frame.cap})
    rendered = sorted(p.render(frame.atoms) for p in out.positions())
    result = {"input": args.positions, "rsr": rendered}
    lines = [_positions_text(frame, out)]
    if args.cap_stability and frame.mode == "multiset":
        note = _stability_note(
            frame, out.positions(), lambda wide: rsr(wide, members).positions()
        )
        result["stability"] = note
        lines.append(f"stability at cap {note['recheck_cap']}: "
                     + ("no changes" if note["stable"] else "CHANGED"))
    report.result = result
    report.lines = lines
    return EXIT_OK, report


def _cmd_lattice(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    interp = interpretation(frame)
    q = interp.quantale
    lattice = q.lattice
    labels = _Labels(frame, lattice, args.labels)
    aliases = [labels.alias(r) for r in lattice]

    join_rows, tensor_rows = [], []
    n = len(lattice)
    for i in range(n):
        join_rows.append([aliases[q.join_i(i, j)] for j in range(n)])
        tensor_rows.append([aliases[q.tensor_i(i, j)] for j in range(n)])

    roles_payload = [
        {
            "alias": aliases[i],
            "size": len(lattice[i]),
            "positions": sorted(p.render(frame.atoms) for p in lattice[i].positions()),
        }
        for i in range(n)
    ]
    result = {
        "roles": roles_payload,
        "unit": aliases[q.unit_index],
        "dualizer": aliases[q.dualizer_index],
        "bottom": aliases[q.bottom_index],
        "join_table": join_rows,
        "tensor_table": tensor_rows,
        "window_relative": q.window_relative,
    }
    report = Report("lattice", args.frame, result=result, meta={"cap": frame.cap})

    if args.format == "dot":
        report.lines = _hasse_dot(lattice, aliases)
    else:
        lines = [f"{n} roles (unit {result['unit']}, dualizer {result['dualizer']}, "
                 f"bottom {result['bottom']})"]
        for entry in roles_payload:
            lines.append(f"{entry['alias']} ({entry['size']}): "
                         + "{" + "; ".join(entry["positions"]) + "}")
        lines.append("")
        lines += _table_lines(args.format, "join", aliases, join_rows)
        lines.append("")
        lines += _table_lines(args.format, "tensor", aliases, tensor_rows)
        report.lines = lines
    return EXIT_OK, report


def _hasse_dot(lattice, aliases: list[str]) -> list[str]:
    n = len(lattice)
    below = [[i != j and lattice[i].mask | lattice[j].mask == lattice[j].mask
              for j in range(n)] for i in range(n)]
    lines = ["digraph role_lattice {", "  rankdir=BT;"]
    for alias in aliases:
        lines.append(f'  "{alias}";')
    for i in range(n):
        for j in range(n):
            if below[i][j] and not any(below[i][k] and below[k][j] for k in range(n)):
                lines.append(f'  "{aliases[i]}" -> "{aliases[j]}";')
    lines.append("}")
    return lines


def _content_payload(frame: Frame, labels: _Labels, c: Content) -> dict:
    return {
        "premisory": {
            "alias": labels.alias(c.premisory),
            "positions": sorted(p.render(frame.atoms) for p in c.premisory.positions()),
        },
        "conclusory": {
            "alias": labels.alias(c.conclusory),
            "positions": sorted(p.render(frame.atoms) for p in c.conclusory.positions()),
        },
    }


def _content_lines(frame: Frame, labels: _Labels, c: Content) -> list[str]:
    return [
        f"premisory  = {labels.alias(c.premisory)} {_positions_text(frame, c.premisory)}",
        f"conclusory = {labels.alias(c.conclusory)} {_positions_text(frame, c.conclusory)}",
    ]


def _content_stability(frame: Frame, compute_pair) -> dict:
    plus = _stability_note(frame, compute_pair(frame)[0], lambda w: compute_pair(w)[0])
    minus = _stability_note(frame, compute_pair(frame)[1], lambda w: compute_pair(w)[1])
    return {"premisory": plus, "conclusory": minus, "stable": plus["stable"] and minus["stable"]}


def _cmd_interp(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    interp = interpretation(frame)
    c = interp.atom(args.atom)
    labels = _Labels(frame, interp.quantale.lattice, args.labels)
    result = {"atom": args.atom, **_content_payload(frame, labels, c)}
    report = Report("interp", args.frame, result=result, meta={"cap": frame.cap})
    report.lines = _content_lines(frame, labels, c)
    if args.cap_stability and frame.mode == "multiset":
        def pair(f):
            cc = interpretation(f).atom(args.atom)
            return cc.premisory.positions(), cc.conclusory.positions()

        note = _content_stability(frame, pair)
        result["stability"] = note
        report.lines.append("stability: " + ("no changes" if note["stable"] else "CHANGED"))
    return EXIT_OK, report


def _cmd_eval(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    interp = interpretation(frame)
    formula = parse_formula(args.formula)
    c = interp.eval(formula, args.clauses)
    labels = _Labels(frame, interp.quantale.lattice, args.labels)
    result = {"formula": render(formula), "clauses": args.clauses,
              **_content_payload(frame, labels, c)}
    report = Report("interp", args.frame, result=result, meta={"cap": frame.cap})
    report.lines = _content_lines(frame, labels, c)
    if args.cap_stability and frame.mode == "multiset":
        def pair(f):
            cc = interpretation(f).eval(formula, args.clauses)
            return cc.premisory.positions(), cc.conclusory.positions()

        note = _content_stability(frame, pair)
        result["stability"] = note
        report.lines.append("stability: " + ("no changes" if note["stable"] else "CHANGED"))
    return EXIT_OK, report


def _cmd_entails(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    lhs, rhs = parse_sequent(args.sequent)
    verdict = interpretation(frame).entails(lhs, rhs, args.clauses)
    result = {"sequent": args.sequent, "clauses": args.clauses, "verdict": verdict}
    report = Report("entails", args.frame, result=result, meta={"cap": frame.cap})
    report.lines = ["true" if verdict else "false"]
    return (EXIT_OK if verdict else EXIT_FALSE), report


def _cmd_nmms(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    sequent = FormulaSequent.parse(args.sequent, args.variant)
    verdict = decide(frame, sequent)
    result = {"sequent": args.sequent, "variant": args.variant, "verdict": verdict}
    report = Report("entails", args.frame, result=result, meta={"cap": frame.cap})
    report.lines = ["true" if verdict else "false"]
    return (EXIT_OK if verdict else EXIT_FALSE), report


def _cmd_trace(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    sequent = FormulaSequent.parse(args.sequent, args.variant)
    tree = reduction_trace(frame, sequent)
    result = tree.as_dict()
    report = Report("trace", args.frame, result=result, meta={"cap": frame.cap})
    report.lines = tree.render().splitlines()
    return (EXIT_OK if tree.verdict else EXIT_FALSE), report


_CHECKS = (
    "gq-laws", "reflexive", "containment", "conservativity",
    "supraclassical", "supralinear", "clause-agreement", "cap-stability",
)


def _cmd_check(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    meta = {"cap": frame.cap, "seed": args.seed}
    report = Report("check", args.frame, result=None, meta=meta)

    def from_suite(*suites):
        ok = all(s.ok for s in suites)
        report.result = {
            s.name: {"checked": s.checked, "violations": s.violations, **s.notes}
            for s in suites
        }
        report.lines = [s.summary() for s in suites]
        report.witnesses = [v for s in suites for v in s.violations]
        return (EXIT_OK if ok else EXIT_SUITE), report

    if args.property == "gq-laws":
        law_report = check_gq_laws(interpretation(frame).quantale, seed=args.seed)
        report.result = {
            "exhaustive": law_report.exhaustive,
            "laws": [
                {"law": c.law, "ok": c.ok, "counterexample": c.counterexample}
                for c in law_report.checks
            ],
            "join_idempotent": is_join_idempotent(interpretation(frame).quantale),
        }
        report.lines = law_report.summary().splitlines()
        report.witnesses = [c.counterexample for c in law_report.violations()]
        return (EXIT_OK if law_report.ok else EXIT_SUITE), report
    if args.property == "reflexive":
        verdict = frame.is_reflexive()
        report.result = {"reflexive": verdict.ok, "witness": verdict.witness}
        report.lines = ["reflexive" if verdict.ok else f"not reflexive: atom {verdict.witness}"]
        return (EXIT_OK if verdict.ok else EXIT_SUITE), report
    if args.property == "containment":
        verdict = frame.is_containment()
        witness = verdict.witness.render(frame.atoms) if verdict.witness else None
        report.result = {"containment": verdict.ok, "witness": witness}
        report.lines = ["containment" if verdict.ok else f"not containment: {witness}"]
        return (EXIT_OK if verdict.ok else EXIT_SUITE), report
    if args.property == "conservativity":
        return from_suite(conservativity_suite(frame))
    if args.property == "supraclassical":
        return from_suite(
            supraclassical_suite(frame, depth=args.depth, seed=args.seed, samples=args.samples),
            robbins_suite(frame, depth=args.depth),
        )
    if args.property == "supralinear":
        return from_suite(
            supralinear_suite(frame, depth=args.depth, seed=args.seed, samples=args.samples)
        )
    if args.property == "clause-agreement":
        return from_suite(clause_agreement_suite(frame))
    assert args.property == "cap-stability"
    if frame.mode != "multiset":
        raise FrameError("cap-stability applies to multiset frames")
    return from_suite(cap_stability_suite(frame))


def _cmd_compare(args) -> tuple[int, Report]:
    frame = _load_frame(args.frame)
    if args.clauses != "classical":
        raise FrameError(
            "compare supports the contractive/classical pairing only; the rule "
            "fragment has no sanctioned linear-clause reading"
        )
    suite = compare_suite(
        frame, depth=args.depth, seed=args.seed, samples=args.samples
    )
    result = {"checked": suite.checked, "disagreements": suite.violations}
    report = Report("compare", args.frame, result=result,
                    meta={"cap": frame.cap, "seed": args.seed, "depth": args.depth})
    report.lines = [suite.summary()]
    report.witnesses = suite.violations
    return (EXIT_OK if suite.ok else EXIT_SUITE), report


def _cmd_morphism(args) -> tuple[int, Report]:
    source = _load_frame(args.source)
    target = _load_frame(args.target)
    mapping = {}
    for chunk in args.mapping.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "->" not in chunk:
            raise FrameError(f"bad mapping entry {chunk!r}; expected 'atom->atom'")
        src, tgt = (part.strip() for part in chunk.split("->", 1))
        mapping[src] = tgt
    m = FrameMorphism(source, target, mapping)

    result = {}
    lines = []
    ok = True
    if args.kind in ("conservative", "both"):
        verdict = check_conservative(m)
        witness = verdict.witness.render(source.atoms) if verdict.witness else None
        result["conservative"] = {"ok": verdict.ok, "witness": witness}
        lines.append("conservative" if verdict.ok else f"not conservative: {witness}")
        ok = ok and verdict.ok
    if args.kind in ("continuous", "both"):
        verdict = check_continuous(m)
        witness = None
        if verdict.witness:
            witness = {
                k: (v.render(source.atoms) if isinstance(v, Position) else str(v))
                for k, v in verdict.witness.items()
            }
        result["continuous"] = {"ok": verdict.ok, "witness": witness}
        lines.append("continuous" if verdict.ok else f"not continuous: {witness}")
        ok = ok and verdict.ok
    report = Report("check", f"{args.source} -> {args.target}", result=result)
    report.lines = lines
    return (EXIT_OK if ok else EXIT_FALSE), report


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roleforge",
        description="Implication-space semantics engine over signed incompatibility frames.",
    )
    parser.add_argument("--version", action="version", version=f"roleforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=FORMATS, default="plain")
        return p

    p = add("validate", _cmd_validate, help="parse a frame file and report its shape")
    p.add_argument("frame")

    p = add("positions", _cmd_positions, help="list the window in canonical order")
    p.add_argument("frame")

    p = add("rsr", _cmd_rsr, help="range of subjunctive robustness of a position set")
    p.add_argument("frame")
    p.add_argument("positions", help="semicolon-separated positions, e.g. 'a |- b; |- a'")
    p.add_argument("--cap-stability", action="store_true")

    p = add("lattice", _cmd_lattice, help="role lattice and operation tables")
    p.add_argument("frame")
    p.add_argument("--labels")

    p = add("interp", _cmd_interp, help="interpret an atom as a content")
    p.add_argument("frame")
    p.add_argument("atom")
    p.add_argument("--labels")
    p.add_argument("--cap-stability", action="store_true")

    p = add("eval", _cmd_eval, help="evaluate a formula to a content")
    p.add_argument("frame")
    p.add_argument("formula")
    p.add_argument("--clauses", choices=("classical", "linear"), default="classical")
    p.add_argument("--labels")
    p.add_argument("--cap-stability", action="store_true")

    p = add("entails", _cmd_entails, help="semantic consequence of a sequent")
    p.add_argument("frame")
    p.add_argument("sequent")
    p.add_argument("--clauses", choices=("classical", "linear"), default="classical")

    p = add("nmms", _cmd_nmms, help="decide a sequent by rule unfolding")
    p.add_argument("frame")
    p.add_argument("sequent")
    p.add_argument("--variant", choices=("contractive", "noncontractive"), default="contractive")

    p = add("trace", _cmd_trace, help="full rule-unfolding tree of a sequent")
    p.add_argument("frame")
    p.add_argument("sequent")
    p.add_argument("--variant", choices=("contractive", "noncontractive"), default="contractive")

    p = add("check", _cmd_check, help="run a property suite")
    p.add_argument("frame")
    p.add_argument("property", choices=_CHECKS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--samples", type=int, default=2000)

    p = add("compare", _cmd_compare, help="NMMS unfolding vs semantic consequence")
    p.add_argument("frame")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--variant", choices=("contractive",), default="contractive")
    p.add_argument("--clauses", choices=("classical", "linear"), default="classical")

    p = add("morphism", _cmd_morphism, help="check an atom map between two frames")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("mapping", help="comma-separated atom map, e.g. 'a->x,b->x'")
    p.add_argument("--kind", choices=("conservative", "continuous", "both"), default="both")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        code, report = args.fn(args)
    except (FrameError, FormulaSyntaxError, OSError, json.JSONDecodeError) as exc:
        print(f"roleforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.meta.setdefault("seed", getattr(args, "seed", None))
    report.meta.setdefault("cap", None)
    text = report.render(args.format)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
