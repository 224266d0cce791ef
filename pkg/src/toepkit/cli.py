"""Command-line surface: generators, analyses, and certificate-producing
tests with deterministic reports.

Exit codes: 0 = witnessed/success, 1 = refuted, 2 = unknown at the
searched depth, 3 = usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .words import Word
from .sadic import (
    DirectiveSequence,
    canonical_window,
    language,
    language_is_exact,
    parse_directive,
    recognizability_radius,
    scale_divisors,
    serialize_directive,
)
from .skeletons import skeleton_of_window
from .rank2 import (
    chi,
    chi_conjugacy_criterion,
    conjugacy_test,
    find_strong_rank2_cuts,
    parts,
    run_length,
    strong_rank2_witness,
)
from .inverse import inverse_conjugacy_test
from .constructions import (
    AutExampleParams,
    ClaimFailure,
    CounterexampleParams,
    check_counterexample_claims,
    check_cyclic_aut_claims,
    gen_counterexample,
    gen_cyclic_aut_example,
    gen_flip_example,
)
from .verdicts import Verdict

DEFAULT_SEED = 1729


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


class CliError(Exception):
    pass


def _report(args, sections: list[tuple[str, list[str]]], *,
            verdict: Verdict | None = None) -> str:
    if getattr(args, "format", "text") == "structured":
        doc = {"tool": "toepkit", "version": __version__,
               "command": args._argv, "seed": args.seed,
               "sections": [{"title": t, "lines": b} for t, b in sections]}
        if verdict is not None:
            doc["verdict"] = verdict.status
            doc["depth"] = verdict.depth
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = ["# toepkit report",
             "version: %s" % __version__,
             "command: %s" % " ".join(args._argv),
             "seed: %d" % args.seed]
    if verdict is not None:
        lines.append("verdict: %s" % verdict.status)
        if verdict.is_unknown:
            lines.append("note: undecided at depth %d; a larger --depth"
                         " may decide it" % verdict.depth)
    for title, body in sections:
        lines.append("")
        lines.append("[%s]" % title)
        lines.extend("  " + b for b in body)
    return "\n".join(lines) + "\n"


def _emit(args, text: str):
    target = getattr(args, "report", None)
    if target:
        with open(target, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> DirectiveSequence:
    try:
        with open(path) as fh:
            return parse_directive(fh.read())
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc)) from None
    except ValueError as exc:
        raise CliError("%s: %s" % (path, exc)) from None


def _verdict_lines(v: Verdict) -> list[str]:
    out = ["status: %s" % v.status]
    if v.certificate is not None:
        out.append("certificate: %s" % _show(v.certificate))
    if v.detail:
        out.append("detail: %s" % v.detail)
    return out


def _show(obj) -> str:
    from .rank2 import BlockPermutation
    if isinstance(obj, BlockPermutation):
        pairs = ", ".join("%s->%s" % (a.display(), b.display())
                          for a, b in obj.pairs)
        return "period %d: %s" % (obj.period, pairs)
    if isinstance(obj, Word):
        return obj.display()
    if isinstance(obj, dict):
        return "{%s}" % ", ".join("%s: %s" % (k, _show(v))
                                  for k, v in sorted(obj.items(), key=str))
    if isinstance(obj, (list, tuple)):
        return "(%s)" % ", ".join(_show(v) for v in obj)
    return str(obj)


# --------------------------------------------------------------------- gen


def _cmd_gen(args) -> int:
    if args.construction == "counterexample":
        params = CounterexampleParams(
            depth=args.depth,
            m_schedule=tuple(args.m_schedule or ()))
        d = gen_counterexample(params)
        body = ["depth: %d" % args.depth,
                "m schedule: %s" % " ".join(
                    str(params.m(n)) for n in range(args.depth))]
        report = check_counterexample_claims(d, args.depth)
        sections = [("gen:counterexample", body),
                    ("claims", report.lines())]
    elif args.construction == "flip-aut":
        ex = gen_flip_example(args.depth)
        d = ex.directive
        sections = [("gen:flip-aut", [
            "depth: %d" % args.depth,
            "letter involution: 0<->1",
            "level-1 words: %s" % " ".join(w.display()
                                           for w in d.level_words(1))])]
    elif args.construction == "cyclic-aut":
        params = AutExampleParams(n=args.order, depth=args.depth, m=args.m)
        ex = gen_cyclic_aut_example(params)
        d = ex.directive
        report = check_cyclic_aut_claims(ex, args.depth)
        sections = [("gen:cyclic-aut", [
            "order: %d" % args.order,
            "m: %d" % params.resolved_m(),
            "depth: %d" % args.depth]),
            ("claims", report.lines())]
    else:
        raise CliError("unknown construction %r" % args.construction)
    text = serialize_directive(d)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        sections.append(("output", ["written: %s" % args.output]))
    else:
        sections.append(("output", ["(no -o given; tower not written)"]))
    _emit(args, _report(args, sections))
    return 0


# ----------------------------------------------------------------- analyze


def _cmd_analyze(args) -> int:
    d = _load(args.file)
    if args.what == "scale":
        divs = scale_divisors(d, args.depth)
        body = ["d_%d=%d" % (n, v) for n, v in enumerate(divs)]
        _emit(args, _report(args, [("analyze:scale", body)]))
        return 0
    if args.what == "language":
        words = sorted(language(d, args.length, args.depth))
        exact = language_is_exact(d, args.length, args.depth)
        body = ["length: %d" % args.length,
                "depth: %d" % args.depth,
                "words: %d (%s)" % (len(words),
                                    "exact" if exact else "lower approximation")]
        body += [w.display() for w in words]
        _emit(args, _report(args, [("analyze:language", body)]))
        return 0
    if args.what == "recognizability":
        cert = recognizability_radius(d, args.level, args.depth)
        if cert is None:
            body = ["no radius found up to the bound at depth %d" % args.depth]
            _emit(args, _report(args, [("analyze:recognizability", body)]))
            return 2
        body = ["level: %d" % cert.level,
                "radius: %d" % cert.radius,
                "verified word length: %d" % cert.verified_word_length,
                "note: verified against the depth-limited language only"]
        _emit(args, _report(args, [("analyze:recognizability", body)]))
        return 0

    x = canonical_window(d, args.depth)
    if args.what == "cuts":
        cuts = find_strong_rank2_cuts(x, args.period)
        body = ["period: %d" % args.period]
        for c in cuts:
            body.append("offset %d: blocks %s" % (
                c.offset, " ".join(sorted(b.display() for b in c.blocks))))
        if not cuts:
            body.append("no two-block cut in the window")
        _emit(args, _report(args, [("analyze:cuts", body)]))
        return 0 if cuts else 2
    if args.what == "skeleton":
        s = skeleton_of_window(x, args.period)
        body = ["period: %d" % args.period,
                "pattern: %s" % s.display(),
                "holes: %s" % " ".join(map(str, s.hole_residues))]
        _emit(args, _report(args, [("analyze:skeleton", body)]))
        return 0
    if args.what == "parts":
        classes = parts(d, args.period, args.depth)
        body = ["period: %d" % args.period, "classes: %d" % len(classes)]
        for c in classes:
            body.append("phase %d: skeleton %s" % (c.phase, c.skeleton.display()))
        _emit(args, _report(args, [("analyze:parts", body)]))
        return 0
    if args.what == "chi":
        classes = chi(d, args.period, args.depth)
        body = ["period: %d" % args.period,
                "maximal run: %d" % run_length(d, args.period, args.depth)]
        for c in classes:
            body.append("phase %d: skeleton %s" % (c.phase, c.skeleton.display()))
        _emit(args, _report(args, [("analyze:chi", body)]))
        return 0
    raise CliError("unknown analysis %r" % args.what)


# -------------------------------------------------------------------- test


def _cmd_test(args) -> int:
    if args.check == "conjugacy":
        dx, dy = _load(args.left), _load(args.right)
        v = conjugacy_test(dx, dy, args.depth, max_p=args.max_p)
        chi_v = chi_conjugacy_criterion(dx, dy, args.depth)
        sections = [("test:conjugacy [claim:block-permutation-transport]",
                     _verdict_lines(v)),
                    ("test:chi-criterion [claim:maximal-run-classes]",
                     _verdict_lines(chi_v))]
        _emit(args, _report(args, sections, verdict=v))
        return v.exit_code
    if args.check == "inverse":
        d = _load(args.system)
        rep = inverse_conjugacy_test(d, args.depth)
        body = _verdict_lines(rep.verdict)
        if rep.chain:
            body.append("anchor chain: %s" % _show(rep.chain))
            body.append("note: witnessed up to depth %d; deeper levels"
                        " unchecked" % args.depth)
        if rep.phi is not None:
            body.append("block map: %s" % _show(rep.phi))
        if rep.dead_levels:
            body.append("refuted levels: %s" % _show(rep.dead_levels))
        _emit(args, _report(args, [
            ("test:inverse [claim:reflection-anchors]", body)],
            verdict=rep.verdict))
        return rep.verdict.exit_code
    if args.check == "sts2":
        d = _load(args.system)
        wit = strong_rank2_witness(d, args.base_period, args.affix_bound,
                                   args.depth)
        if wit is None:
            body = ["no witness within the search bounds at depth %d"
                    % args.depth]
            _emit(args, _report(args, [
                ("test:sts2 [claim:two-block-building]", body)]))
            return 2
        body = ["q: %d" % wit.q, "r: %d" % wit.r,
                "u: %s" % wit.u.display(), "v: %s" % wit.v.display()]
        _emit(args, _report(args, [
            ("test:sts2 [claim:two-block-building]", body)]))
        return 0
    if args.check == "claims":
        if args.kind == "counterexample":
            d = _load(args.file)
            try:
                report = check_counterexample_claims(d, args.depth)
            except ClaimFailure as exc:
                _emit(args, _report(args, [("test:claims", [str(exc)])]))
                return 1
            _emit(args, _report(args, [("test:claims", report.lines())]))
            return 0
        if args.kind == "cyclic-aut":
            params = AutExampleParams(n=args.order, depth=args.depth, m=args.m)
            ex = gen_cyclic_aut_example(params)
            try:
                report = check_cyclic_aut_claims(ex, args.depth)
            except ClaimFailure as exc:
                _emit(args, _report(args, [("test:claims", [str(exc)])]))
                return 1
            _emit(args, _report(args, [("test:claims", report.lines())]))
            return 0
        raise CliError("unknown claims kind %r" % args.kind)
    raise CliError("unknown test %r" % args.check)


def _cmd_export(args) -> int:
    d = _load(args.file)
    text = serialize_directive(d)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> _Parser:
    p = _Parser(prog="toepkit", description=__doc__)
    p.add_argument("--seed", type=int,
                   default=int(os.environ.get("TOEPKIT_SEED", DEFAULT_SEED)),
                   help="seed echoed in reports and used by randomized sweeps")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    env_depth = os.environ.get("TOEPKIT_DEPTH")

    def add_depth(sp, default=3):
        sp.add_argument("--depth", type=int,
                        default=int(env_depth) if env_depth else default)

    g = sub.add_parser("gen", help="generate a tower construction")
    g.add_argument("construction",
                   choices=("counterexample", "flip-aut", "cyclic-aut"))
    add_depth(g)
    g.add_argument("--m-schedule", type=int, nargs="*")
    g.add_argument("--n", dest="order", type=int, default=2,
                   help="cyclic order for cyclic-aut")
    g.add_argument("--m", type=int, default=None)
    g.add_argument("-o", "--output")
    g.add_argument("--report")
    g.set_defaults(func=_cmd_gen)

    a = sub.add_parser("analyze", help="inspect a tower file")
    a.add_argument("what", choices=("scale", "cuts", "skeleton", "language",
                                    "parts", "chi", "recognizability"))
    a.add_argument("file")
    add_depth(a)
    a.add_argument("--period", type=int, default=2)
    a.add_argument("--length", type=int, default=2)
    a.add_argument("--level", type=int, default=1)
    a.add_argument("--report")
    a.set_defaults(func=_cmd_analyze)

    t = sub.add_parser("test", help="run a certificate-producing check")
    t.add_argument("check", choices=("conjugacy", "inverse", "sts2", "claims"))
    t.add_argument("file", nargs="?")
    add_depth(t)
    t.add_argument("--left")
    t.add_argument("--right")
    t.add_argument("--system")
    t.add_argument("--max-p", type=int, default=None)
    t.add_argument("--base-period", type=int, default=1)
    t.add_argument("--affix-bound", type=int, default=0)
    t.add_argument("--kind", choices=("counterexample", "cyclic-aut"),
                   default="counterexample")
    t.add_argument("--n", dest="order", type=int, default=2)
    t.add_argument("--m", type=int, default=None)
    t.add_argument("--report")
    t.set_defaults(func=_cmd_test)

    e = sub.add_parser("export", help="canonical re-serialization")
    e.add_argument("file")
    e.add_argument("-o", "--output")
    e.set_defaults(func=_cmd_export)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args._argv = argv
        if getattr(args, "check", None) == "conjugacy":
            if not (args.left and args.right):
                raise CliError("test conjugacy needs --left and --right")
        if getattr(args, "check", None) in ("inverse", "sts2"):
            if not args.system:
                raise CliError("test %s needs --system" % args.check)
        if getattr(args, "check", None) == "claims" \
                and args.kind == "counterexample" and not args.file:
            raise CliError("test claims needs a tower file")
        return args.func(args)
    except CliError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 3
    except (ValueError, ClaimFailure) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
