"""Command line: exit 0 Holds, 1 Fails, 2 Unknown, 3 usage or input error."""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

from . import generators as gen
from .combinatorics import oracle
from .dot import export_dot
from .errors import OpctError
from .poset import FLAGS, TruncatedPoset, default_depth
from .refiners import (
    apply_refiner,
    check_birefinable,
    check_refiner,
    check_strong,
    check_wedge_preserving,
    star_compose,
    star_of_refiner,
    verify_back_and_forth,
)
from .registry import CHECKS, run_check
from .report import Report, render
from .spectrum import (
    Thread,
    check_tangled_poset,
    connectivity_report,
    enumerate_minimal_selectors,
    is_prime_subset,
    points_equal,
    thread_prefix,
)
from .stars import star, star_above
from .textio import (
    parse_poset,
    parse_refiner,
    parse_stages,
    read_text,
    serialize_poset,
    serialize_refiner,
)
from .verdict import Verdict, exit_code, holds, unknown
from .witness import CONFIRMED, REFUTED, verify_report

USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which means Unknown here
        raise UsageError(message)


class Session:
    """Inputs read so far, the report under construction, and output streams."""

    def __init__(self, args: argparse.Namespace, out, stdin) -> None:
        self.args = args
        self.out = out
        self.stdin = stdin
        self.report = Report(args.command)
        self.verdicts: list[Verdict] = []

    def text(self, path: str) -> str:
        try:
            t = read_text(path, self.stdin)
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        self.report.add_input(path, t)
        return t

    def poset(self, path: str) -> TruncatedPoset:
        p = parse_poset(self.text(path))
        assume = getattr(self.args, "assume", None)
        return p.with_flags(assume) if assume else p

    def verdict(self, name: str, v: Verdict, *posets: TruncatedPoset) -> None:
        self.verdicts.append(v)
        self.report.add(name, v, posets)
        if not self.args.json:
            line = f"{name}: {v.outcome}"
            if v.kind:
                line += f" ({v.kind})"
            if v.witness is not None:
                line += f" witness={render(v.witness, posets)}"
            if v.assumptions:
                line += f" assuming {','.join(v.assumptions)}"
            if v.note and not v.holds:
                line += f" - {v.note}"
            print(line, file=self.out)

    def emit(self, text: str) -> None:
        """Primary text output (a file body); goes to -o when given."""
        path = getattr(self.args, "output", None)
        if path and path != "-":
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        elif not self.args.json:
            self.out.write(text)

    def data(self, key: str, value) -> None:
        self.report.data[key] = value
        if not self.args.json:
            if isinstance(value, list):
                print(f"{key}:", file=self.out)
                for row in value:
                    print("  " + (" ".join(row) if isinstance(row, list) else str(row)),
                          file=self.out)
            else:
                print(f"{key}: {value}", file=self.out)


def _names(arg: str | None) -> list[str]:
    return [s for s in (arg or "").split(",") if s]


def _flags(arg: str) -> list[str]:
    out = _names(arg)
    for f in out:
        if f not in FLAGS:
            raise argparse.ArgumentTypeError(f"unknown flag {f!r}")
    return out


# commands


def cmd_check(s: Session) -> None:
    p = s.poset(s.args.file)
    names = list(CHECKS) if s.args.predicate == "all" else [s.args.predicate]
    for name in names:
        s.verdict(name, run_check(name, p, s.args.depth), p)


def cmd_oracle(s: Session) -> None:
    p = s.poset(s.args.file)
    orc = oracle(p, s.args.bound)
    for key in ("bands", "caps", "minimal_caps", "minimal_selectors"):
        s.data(key, [p.names(x) for x in getattr(orc, key)])


def cmd_stars(s: Session) -> None:
    p = s.poset(s.args.file)
    x = p.element(s.args.element)
    d = default_depth(p) if s.args.depth is None else s.args.depth
    view = p.deepen(max(d, s.args.cap_level)) if p.growable else p
    if s.args.cap_level > view.depth:
        raise UsageError(f"--cap-level {s.args.cap_level} is past the truncation")
    st = star(p, x, view.level(s.args.cap_level), max(d, s.args.cap_level))
    s.data("star", view.names(st.proved))
    s.data("undecided", view.names(st.undecided))
    proved, possible = star_above(p, x, d)
    s.data("star_above", view.names(proved))
    if st.exact:
        s.verdict("star", holds(st.proved, "exact_star", exhausted_depth=d), view)
    else:
        s.verdict("star", unknown(d, "some wedges are undecided"), view)


def cmd_spectrum(s: Session) -> None:
    p = s.poset(s.args.file)
    a = s.args
    if a.action == "enumerate":
        sels = enumerate_minimal_selectors(p, a.bound)
        s.data("minimal_selectors", [sel.names() for sel in sels])
    elif a.action == "equal":
        if not a.thread or not a.other:
            raise UsageError("spectrum equal needs --thread and --other")
        t = Thread.from_names(p.deepen(len(_names(a.thread)) - 1), _names(a.thread))
        u = Thread.from_names(t.poset.deepen(len(_names(a.other)) - 1), _names(a.other))
        s.verdict("points-equal", points_equal(t, u, a.depth), t.poset, u.poset)
    elif a.action == "prefix":
        if not a.thread:
            raise UsageError("spectrum prefix needs --thread")
        t = Thread.from_names(p.deepen(len(_names(a.thread)) - 1), _names(a.thread))
        pre = thread_prefix(t, a.depth)
        s.data("prefix", pre.names())
        s.data("certified", pre.certified)
    elif a.action == "prime":
        q = "all" if not a.subset else p.elements_named(_names(a.subset))
        s.verdict("prime-subset", is_prime_subset(p, q, a.depth), p)
    elif a.action == "connectivity":
        s.verdict("connectivity", connectivity_report(p, a.depth), p)
    elif a.action == "tangled":
        s.verdict("tangled", check_tangled_poset(p, a.depth), p)


def cmd_refiner(s: Session) -> None:
    a = s.args
    p, q = s.poset(a.source), s.poset(a.target)
    if a.action == "back-and-forth":
        st = parse_stages(s.text(a.refiner), p, q)
        s.verdict("back-and-forth", verify_back_and_forth(st, a.depth), p, q)
        return
    r = parse_refiner(s.text(a.refiner), q, p)
    if a.action == "check":
        s.verdict("refiner", check_refiner(r, a.depth), q, p)
        s.verdict("wedge-preserving", check_wedge_preserving(r, a.depth), p, q)
    elif a.action == "strong":
        s.verdict("strong", check_strong(r, a.depth), q, p)
    elif a.action == "birefinable":
        if not a.inverse:
            raise UsageError("refiner birefinable needs --inverse")
        back = parse_refiner(s.text(a.inverse), p, q)
        s.verdict("birefinable", check_birefinable(r, back, a.depth), q, p)
    elif a.action == "apply":
        if not a.thread:
            raise UsageError("refiner apply needs --thread")
        t = Thread.from_names(p.deepen(len(_names(a.thread)) - 1), _names(a.thread))
        out = apply_refiner(r, thread_prefix(t), a.depth)
        s.data("image", out.names())
        s.data("pending", q.names(out.pending))
    elif a.action == "star":
        s.emit(serialize_refiner(star_of_refiner(r, a.depth)))
    elif a.action == "compose":
        if not a.then or not a.then_target:
            raise UsageError("refiner compose needs --then and --then-target")
        t = s.poset(a.then_target)
        r2 = parse_refiner(s.text(a.then), t, q)
        s.emit(serialize_refiner(star_compose(r2, r, a.depth)))


def cmd_generate(s: Session) -> None:
    a = s.args
    if a.family == "tree":
        p = gen.gen_tree(a.k, a.depth)
    elif a.family == "gradify":
        if not a.of:
            raise UsageError("generate gradify needs --of FILE")
        p = gen.gradify(s.poset(a.of), a.depth)
    else:
        p = gen.GENERATORS[a.family](a.depth)
    s.emit(serialize_poset(p.deepen(a.depth) if p.growable else p))


def cmd_export_dot(s: Session) -> None:
    p = s.poset(s.args.file)
    opts = {"rankdir": s.args.rankdir} if s.args.rankdir else {}
    s.emit(export_dot(p, opts))


def cmd_verify(s: Session) -> None:
    rep = Report.from_json(s.text(s.args.report))
    p = parse_poset(s.text(s.args.file))
    if rep.params.get("assume"):
        p = p.with_flags(rep.params["assume"])
    rows = verify_report(rep, p)
    s.data("results", [[n, st, msg] for n, st, msg in rows])
    if any(st == REFUTED for _, st, _ in rows):
        s.code = 1
    elif all(st == CONFIRMED for _, st, _ in rows):
        s.code = 0
    else:
        s.code = 2


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="opct", description="Checks on finite truncations of omega-posets.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, depth=True):
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        if depth:
            sp.add_argument("--depth", type=int, default=None)
        sp.add_argument("--assume", type=_flags, default=None,
                        help="comma-separated flags to assume (recorded in verdicts)")

    c = sub.add_parser("check", help="run a predicate")
    c.add_argument("--predicate", required=True, choices=sorted(CHECKS) + ["all"])
    c.add_argument("file")
    common(c)

    o = sub.add_parser("oracle", help="brute-force classification of a finite poset")
    o.add_argument("file")
    o.add_argument("--bound", type=int, default=16)
    common(o, depth=False)

    st = sub.add_parser("stars", help="star of an element in a level")
    st.add_argument("file")
    st.add_argument("--element", required=True)
    st.add_argument("--cap-level", type=int, required=True)
    common(st)

    sp = sub.add_parser("spectrum", help="points, primality, connectivity")
    sp.add_argument("action", choices=["enumerate", "equal", "prefix", "prime", "connectivity",
                                       "tangled"])
    sp.add_argument("file")
    sp.add_argument("--thread", help="comma-separated names, one per level")
    sp.add_argument("--other", help="second thread for 'equal'")
    sp.add_argument("--subset", help="comma-separated names for 'prime'")
    sp.add_argument("--bound", type=int, default=16)
    common(sp)

    r = sub.add_parser("refiner", help="refiners between two posets")
    r.add_argument("action", choices=["check", "apply", "star", "compose", "strong",
                                      "birefinable", "back-and-forth"])
    r.add_argument("source", help="P.poset (source side)")
    r.add_argument("target", help="Q.poset (target side)")
    r.add_argument("refiner", help="refiner file, pairs q > p")
    r.add_argument("--thread")
    r.add_argument("--inverse", help="refiner file from Q back to P")
    r.add_argument("--then", help="second refiner for compose")
    r.add_argument("--then-target", help="target poset of the second refiner")
    r.add_argument("-o", "--output")
    common(r)

    g = sub.add_parser("generate", help="write a built-in poset")
    g.add_argument("family", choices=sorted(gen.GENERATORS) + ["gradify", "tree"])
    g.add_argument("--depth", type=int, required=True)
    g.add_argument("-k", type=int, default=2, help="branching of 'tree'")
    g.add_argument("--of", help="input poset for 'gradify'")
    g.add_argument("-o", "--output")
    g.add_argument("--json", action="store_true")

    d = sub.add_parser("export-dot", help="Hasse diagram as DOT text")
    d.add_argument("file")
    d.add_argument("--rankdir", choices=["TB", "BT", "LR", "RL"])
    d.add_argument("-o", "--output")
    d.add_argument("--json", action="store_true")

    v = sub.add_parser("verify-witness", help="re-check the witnesses of a JSON report")
    v.add_argument("report")
    v.add_argument("file")
    v.add_argument("--json", action="store_true")
    return ap


COMMANDS = {
    "check": cmd_check,
    "oracle": cmd_oracle,
    "stars": cmd_stars,
    "spectrum": cmd_spectrum,
    "refiner": cmd_refiner,
    "generate": cmd_generate,
    "export-dot": cmd_export_dot,
    "verify-witness": cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None, err=None, stdin=None) -> tuple[int, Report | None]:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"opct: {exc}", file=err)
        return USAGE_ERROR, None
    s = Session(args, out, stdin)
    s.code = None
    start = time.perf_counter()
    try:
        if getattr(args, "depth", None) is not None and args.depth < 0:
            raise UsageError("--depth must be >= 0")
        COMMANDS[args.command](s)
    except (UsageError, OpctError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"opct: {msg}", file=err)
        return USAGE_ERROR, None
    s.report.wall_time = time.perf_counter() - start
    s.report.params = {k: v for k, v in vars(args).items()
                       if k not in ("command", "json", "output") and v is not None}
    if args.json:
        print(s.report.to_json(), file=out)
    code = s.code if s.code is not None else exit_code(s.verdicts)
    return code, s.report


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(argv)
    return code

