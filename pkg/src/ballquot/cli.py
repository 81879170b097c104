"""Command-line verifier.

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import catalog
from .arrangement import rat_str
from .bmy import INF, c2_orb, verify_pair, weight_str
from .dm import DMWeights, INT, SIGMA_INT_ONLY, find, int_condition, validate
from .errors import BallquotError, CosetOverflow, InputError
from .fpgroup import (
    Presentation,
    parse_word,
    subgroup_signature,
    todd_coxeter,
    triangle_chi,
)
from .quotient import WeightMismatch, dm_identify, euler_multiplicativity_check, quotient_weights

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

INT_LABELS = {INT: "INT", SIGMA_INT_ONLY: "ΣINT-only", "neither": "neither"}


class Output:
    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout
        self.color = (not machine and "NO_COLOR" not in os.environ
                      and hasattr(self.stream, "isatty") and self.stream.isatty())
        self.data: dict = {}

    def verdict(self, ok: bool) -> str:
        word = "PASS" if ok else "FAIL"
        if self.color:
            return f"\033[{32 if ok else 31}m{word}\033[0m"
        return word

    def line(self, text: str = "") -> None:
        if not self.machine:
            print(text, file=self.stream)

    def finish(self) -> None:
        if self.machine:
            print(json.dumps(self.data, indent=2, ensure_ascii=False), file=self.stream)


def _q(x) -> str:
    if x is INF:
        return "inf"
    return rat_str(Fraction(x))


def _catalog_dir(args) -> Optional[Path]:
    return Path(args.catalog) if args.catalog else None


def _load(ref: str, args) -> catalog.CatalogEntry:
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        return catalog.load_path(p, _catalog_dir(args))
    return catalog.load(ref, _catalog_dir(args))


def _tag(origin: str) -> str:
    return {"reported": "[recorded]", "derived": "[derived]", "trivial": "[trivial]"}[origin]


def _compare(out: Output, label: str, computed, exp, mismatches: list) -> None:
    if exp is None:
        return
    want = exp.value
    if isinstance(want, str) and want in ("pass", "fail"):
        got = "pass" if computed else "fail"
    else:
        want = Fraction(want) if not isinstance(want, Fraction) else want
        got = Fraction(computed)
    ok = got == want
    if not ok:
        mismatches.append(label)
    out.line(f"  {label}: expected {_q(want) if not isinstance(want, str) else want} "
             f"{_tag(exp.origin)} {'ok' if ok else 'MISMATCH'}")


# ---------------------------------------------------------------- verify

def cmd_verify(args, out: Output) -> int:
    entry = _load(args.target, args)
    if entry.kind != "pair":
        raise InputError(f"{entry.id} is a {entry.kind} entry; verify needs an arrangement")
    wname = args.weights or entry.default_weights
    arr, w = entry.arrangement, entry.weights(wname)
    rep = verify_pair(arr, w)
    out.line(f"{entry.id} [{wname}]")
    out.line(f"c1^2 = {_q(rep.c1_sq)}, c2 = {_q(rep.c2)}, 3*c2 = {_q(3 * rep.c2)}, "
             f"BMY: {out.verdict(rep.bmy_equal)}, Nakai(declared): {out.verdict(rep.nakai_passed)}")
    out.line(f"L^2 = {_q(rep.L_sq)}")
    out.line("Nakai table (L = K + D):")
    for name, v in rep.per_curve_pairings:
        out.line(f"  L.{name} = {_q(v)}")
    if rep.nakai.witness:
        out.line(f"Nakai witness: {rep.nakai.witness}")
    out.line(f"caveat: {rep.caveat}")

    exp = entry.expected(wname)
    mismatches: list = []
    if exp:
        out.line("catalogue values:")
        _compare(out, "c1^2", rep.c1_sq, exp.get("c1_sq"), mismatches)
        _compare(out, "c2", rep.c2, exp.get("c2"), mismatches)
        _compare(out, "L^2", rep.L_sq, exp.get("L_sq"), mismatches)
        _compare(out, "e(Y)", arr.euler_surface, exp.get("euler"), mismatches)
        if "K_sq" in exp:
            _compare(out, "K^2", arr.canonical_square(), exp["K_sq"], mismatches)
        _compare(out, "BMY", rep.bmy_equal, exp.get("bmy"), mismatches)
        _compare(out, "Nakai", rep.nakai_passed, exp.get("nakai"), mismatches)
        table = dict(rep.per_curve_pairings)
        for name, e in exp.get("pairings", {}).items():
            _compare(out, f"L.{name}", table[name], e, mismatches)
    out.data = {
        "entry": entry.id, "weights": wname,
        "c1_sq": _q(rep.c1_sq), "c2": _q(rep.c2), "three_c2": _q(3 * rep.c2),
        "bmy": rep.bmy_equal, "L_sq": _q(rep.L_sq),
        "pairings": {n: _q(v) for n, v in rep.per_curve_pairings},
        "nakai": rep.nakai_passed, "nakai_witness": rep.nakai.witness, "caveat": rep.caveat,
        "catalogue_mismatches": mismatches,
    }
    return EXIT_OK if rep.ok and not mismatches else EXIT_FAIL


# ---------------------------------------------------------------- quotient

def quotient_report(entry: catalog.CatalogEntry, action: str, catalog_dir: Optional[Path] = None) -> dict:
    """Everything the quotient command prints, as plain data."""
    qdata = entry.action_data(action).get("quotient")
    act = entry.action(action)
    cover_w = (qdata or {}).get("cover_weights", entry.default_weights)
    weights = entry.raw_weights(cover_w)
    cover_e = c2_orb(entry.arrangement, entry.weights(cover_w))
    plan = quotient_weights(weights, act, cover_e)
    result = {"plan": plan, "cover_weights": cover_w, "cover_e_orb": cover_e, "group_order": act.group_order,
              "report": None, "image_mismatches": [], "dm": [], "quotient_entry": None}
    if not qdata:
        return result
    q = catalog.load(qdata["entry"], catalog_dir)
    qw_name = qdata.get("weights", q.default_weights)
    q_raw = q.raw_weights(qw_name)
    if q.kind == "pair":
        report = euler_multiplicativity_check(cover_e, act.group_order, q.arrangement, q.weights(qw_name))
    else:
        report = euler_multiplicativity_check(cover_e, act.group_order,
                                              declared_e_orb=catalog.as_rat(q.declared_e_orb(qw_name).value))
    image = qdata.get("image", {})
    for orbit, wq in zip(plan.orbits, plan.weights):
        target = next((image[c] for c in orbit if c in image), None)
        if target is None:
            if wq != 1:
                result["image_mismatches"].append(f"orbit {orbit[0]} (weight {weight_str(wq)}) has no image")
            continue
        have = q_raw.get(target, 1)
        if weight_str(have) != weight_str(wq):
            result["image_mismatches"].append(
                f"{target}: plan weight {weight_str(wq)}, quotient entry weight {weight_str(have)}")
    sig = (len(plan.locus()), [w for _, w in plan.locus()], report.quotient_e_orb)
    dm_entry = catalog.load("dm-weights", catalog_dir)
    result.update(report=report, dm=dm_identify(sig, dm_entry.dm_records()), quotient_entry=q.id,
                  quotient_weights=qw_name)
    return result


def cmd_quotient(args, out: Output) -> int:
    entry = _load(args.cover, args)
    try:
        res = quotient_report(entry, args.action, _catalog_dir(args))
    except WeightMismatch as exc:
        out.line(f"quotient: FAIL: {exc}")
        out.data = {"entry": entry.id, "action": args.action, "error": str(exc)}
        return EXIT_FAIL
    plan, report = res["plan"], res["report"]
    out.line(f"{entry.id} / {args.action} (order {res['group_order']}), cover weights [{res['cover_weights']}]")
    out.line("orbits -> quotient weight:")
    for orbit, wq in zip(plan.orbits, plan.weights):
        shown = "not in locus" if wq == 1 else weight_str(wq)
        out.line(f"  {{{', '.join(orbit)}}} -> {shown}")
    ok = True
    if report is not None:
        out.line(f"quotient entry: {res['quotient_entry']} [{res['quotient_weights']}]")
        out.line(f"e_orb: {report.line()}  {out.verdict(report.holds)}")
        ok &= report.holds
    for m in res["image_mismatches"]:
        out.line(f"weight mismatch: {m}")
    ok &= not res["image_mismatches"]
    for rec in res["dm"]:
        out.line(f"DM{rec.label} [{rec.arithmetic_flag}]")
    if report is not None and not res["dm"]:
        out.line("DM: no matching record")
    if len(res["dm"]) > 1:
        out.line("DM: several records share this signature")
    out.data = {
        "entry": entry.id, "action": args.action, "group_order": res["group_order"],
        "cover_weights": res["cover_weights"], "cover_e_orb": _q(res["cover_e_orb"]),
        "orbits": [{"curves": list(o), "weight": weight_str(w)} for o, w in zip(plan.orbits, plan.weights)],
        "quotient_entry": res["quotient_entry"],
        "quotient_e_orb": _q(report.quotient_e_orb) if report else None,
        "multiplicativity": report.holds if report else None,
        "image_mismatches": res["image_mismatches"],
        "dm": [{"weights": r.label, "arithmetic": r.arithmetic_flag} for r in res["dm"]],
    }
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- coset

def _parse_presentation(text: str) -> Presentation:
    """``"a,b | a^2, b^3, (ab)^10"``."""
    if "|" not in text:
        raise InputError("presentation must look like 'a,b | rel1, rel2'")
    gens, rels = text.strip().strip("<>").split("|", 1)
    gens = [g.strip() for g in gens.split(",") if g.strip()]
    rels = [r.strip() for r in rels.split(",") if r.strip()]
    return Presentation(tuple(gens), tuple(rels))


def cmd_coset(args, out: Output) -> int:
    note = None
    expected = {}
    elliptic = None
    chi_g = None
    if args.target:
        if "." not in args.target:
            raise InputError("catalogue subgroups are named ENTRY.SUBGROUP, e.g. triangle-tower.lambda")
        eid, sname = args.target.split(".", 1)
        entry = catalog.load(eid, _catalog_dir(args))
        sub = entry.subgroup(sname)
        pres = entry.presentation(sub["group"])
        gspec = entry.data["groups"][sub["group"]]
        words = sub["words"] + list(args.words)
        elliptic = [(w, int(m)) for w, m in sub.get("elliptic", [])] or None
        if "triangle" in gspec:
            chi_g = triangle_chi(*gspec["triangle"])
        note = sub.get("discrepancy")
        expected = {k: e for k, e in ((k, catalog._expected(v, f"{args.target}.{k}"))
                                       for k, v in sub.get("expected", {}).items())}
    else:
        if args.triangle:
            p, q, r = (int(x) for x in args.triangle.split(","))
            names = args.names
            if len(names) != 2 or not names.isalpha() or not names.islower() or names[0] == names[1]:
                raise InputError("--names takes two distinct lowercase letters, e.g. xy")
            pres = Presentation.triangle(p, q, r, names)
            chi_g = triangle_chi(p, q, r)
            elliptic = [(names[0], p), (names[1], q), (names, r)]
        elif args.presentation:
            pres = _parse_presentation(args.presentation)
        else:
            raise InputError("give a catalogue subgroup, --triangle or --presentation")
        words = list(args.words)
    if args.elliptic:
        elliptic = []
        for item in args.elliptic.split(","):
            w, m = item.split(":")
            elliptic.append((w.strip(), int(m)))
    for w in words:
        parse_word(w, pres.generators)
    try:
        table = todd_coxeter(pres, words, max_cosets=args.max_cosets)
    except CosetOverflow as exc:
        out.line(f"overflow: more than {exc.limit} cosets needed, retry with --max-cosets")
        out.data = {"overflow": exc.limit}
        return EXIT_FAIL
    ok = table.verify()
    out.data = {"index": table.index, "perms": {g: list(p.images) for g, p in table.perms.items()},
                "cycle_types": {g: p.cycle_type() for g, p in table.perms.items()}, "verified": ok}
    got = {"index": table.index}
    summary = f"index {table.index}"
    if elliptic and chi_g is not None:
        sig = subgroup_signature(table, elliptic, chi_g)
        summary += f"; signature {sig}; chi {_q(sig.chi)} = {table.index} x ({_q(chi_g)})"
        out.data.update(genus=sig.genus, cones=list(sig.cones), chi=_q(sig.chi), group_chi=_q(chi_g))
        got.update(genus=sig.genus, cones=",".join(map(str, sig.cones)), chi=sig.chi)
    out.line(summary)
    for g, p in table.perms.items():
        out.line(f"  {g}: {p}  cycle type {p.cycle_type()}")
    out.line(f"relators verified on the table: {out.verdict(ok)}")
    mism = []
    for k, e in expected.items():
        if k not in got:
            continue
        want = e.value if k == "cones" else Fraction(e.value)
        if (str(want) if k == "cones" else want) != got[k]:
            mism.append(k)
            out.line(f"  {k}: expected {want} {_tag(e.origin)} MISMATCH")
    if note:
        out.line(f"NOTE: discrepancy flag raised: {note}")
        out.data["discrepancy"] = note
    out.data["catalogue_mismatches"] = mism
    return EXIT_OK if ok and not mism else EXIT_FAIL


# ---------------------------------------------------------------- dm / list

def cmd_dm(args, out: Output) -> int:
    w = DMWeights.parse(args.weights)
    rep = validate(w)
    out.data = {"weights": w.label, "valid": rep.valid, "problems": list(rep.problems)}
    if not rep.valid:
        out.line(f"invalid: {'; '.join(rep.problems)}")
        return EXIT_FAIL
    cls = int_condition(w)
    rec = find(catalog.load("dm-weights", _catalog_dir(args)).dm_records(), w)
    flag = f"{rec.arithmetic_flag} [recorded]" if rec else "arithmeticity unknown"
    out.line(f"valid; {INT_LABELS[cls]}; {flag}")
    out.data.update(int_class=cls, arithmetic=rec.arithmetic_flag if rec else None)
    return EXIT_OK


def cmd_list(args, out: Output) -> int:
    rows = []
    for i in catalog.list_ids(_catalog_dir(args)):
        e = catalog.load(i, _catalog_dir(args))
        rows.append({"id": i, "kind": e.kind, "description": e.description})
        out.line(f"{i:28s} {e.kind:14s} {e.description}")
    out.data = {"entries": rows}
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def common(parser, default):
        parser.add_argument("--machine", action="store_true", default=default(False),
                            help="emit JSON instead of a text report")
        parser.add_argument("--catalog", metavar="DIR", default=default(None),
                            help="catalogue directory (default: the bundled one)")
        parser.add_argument("--max-cosets", type=int, default=default(100_000), metavar="N")

    p = argparse.ArgumentParser(prog="ballquot", description="Exact verifier for ball-quotient orbifold pairs")
    common(p, lambda x: x)
    # subcommands accept the same flags; SUPPRESS keeps them from clobbering the top-level values
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, lambda x: argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[shared])

    v = add("verify", help="Chern numbers, BMY equality and Nakai table of a pair")
    v.add_argument("target", help="catalogue id or path to a document")
    v.add_argument("--weights", help="named weight set (default: the entry's default)")

    q = add("quotient", help="quotient weights, e_orb multiplicativity and DM match")
    q.add_argument("cover")
    q.add_argument("action")

    c = add("coset", help="Todd-Coxeter enumeration and subgroup signature")
    c.add_argument("target", nargs="?", help="ENTRY.SUBGROUP from the catalogue")
    c.add_argument("words", nargs="*", help="extra subgroup generator words")
    c.add_argument("--triangle", metavar="P,Q,R")
    c.add_argument("--names", default="ab", help="generator letters for --triangle (default ab)")
    c.add_argument("--presentation", metavar="'a,b | rels'")
    c.add_argument("--elliptic", metavar="WORD:ORDER,...")

    d = add("dm", help="validate and classify Deligne-Mostow weights")
    d.add_argument("weights", help="e.g. 5,4,1,1,1/6")

    add("list", help="list catalogue entries")
    return p


COMMANDS = {"verify": cmd_verify, "quotient": cmd_quotient, "coset": cmd_coset, "dm": cmd_dm, "list": cmd_list}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "coset" and args.target and (args.triangle or args.presentation):
        args.words = [args.target] + list(args.words)
        args.target = None
    out = Output(args.machine)
    try:
        code = COMMANDS[args.command](args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BallquotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
