"""Command-line front end.

Exit codes: 0 success / member / all claims hold, 1 non-member or a failed
claim, 2 malformed input or usage error.  Machine-readable JSON goes to
stdout; the human table goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .classifiers import kannan_min_coefficient, npk_min_coefficient, tpd_min_coefficient
from .exceptions import ContractError, DomainError, StructureError
from .formats import (certificate_to_doc, fmt, parse_document, report_to_doc,
                      space_to_doc, to_space, trace_to_table)
from .iteration import cauchy_certificate, picard
from .metric import as_rational, make_paper_example, validate_metric
from .search import (GeneratorConfig, campaign, generate, mine_separation,
                     verify_theorems)

JOBS_ENV = "KANNANLAB_JOBS"


class InputError(Exception):
    pass


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or an integer, got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError(str(e)) from None


def _load(path, need_map=True):
    space, f = to_space(parse_document(_read(path)))
    if need_map and f is None:
        raise InputError("document has no 'map' field")
    return space, f


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _say(*lines) -> None:
    for line in lines:
        print(line, file=sys.stderr)


def cmd_validate(args) -> int:
    raw = parse_document(_read(args.file))
    report = validate_metric(raw.matrix)
    labels = raw.points
    violations = [{"axiom": v.axiom, "witness": [labels[i] for i in v.witness]}
                  for v in report.violations]
    _emit({"valid": report.valid, "violations": violations})
    if report.valid:
        _say(f"valid metric on {len(labels)} points")
        return 0
    for v in violations[: None if args.verbose else 5]:
        _say(f"violation: {v['axiom']} at {', '.join(v['witness'])}")
    return 2


def cmd_classify(args) -> int:
    space, f = _load(args.file)
    if args.cls == "kannan":
        report = kannan_min_coefficient(f, jobs=args.jobs)
    else:
        if args.n is None:
            raise InputError(f"--n is required for class {args.cls}")
        fn = npk_min_coefficient if args.cls == "npk" else tpd_min_coefficient
        report = fn(f, args.n, jobs=args.jobs)
    verdict = "member" if report.member else "non-member"
    if args.quiet:
        print(f"{fmt(report.min_coefficient)} {verdict}")
        return 0 if report.member else 1
    doc = report_to_doc(report, space, approx=args.approx)
    _emit(doc)
    coef = doc["min_coefficient"]
    if args.approx:
        coef += f" (~{doc['min_coefficient_approx']:.6g})"
    rows = [("class", f"{report.class_name}" + (f"(n={report.n})" if args.cls != "kannan" else "")),
            ("min coefficient", coef),
            ("strict bound", doc["bound"]),
            ("verdict", verdict)]
    if args.verbose or not report.member:
        rows.append(("witness", "{" + ", ".join(doc["witness"]) + "}"))
    width = max(len(k) for k, _ in rows)
    _say(*(f"{k:<{width}}  {v}" for k, v in rows))
    return 0 if report.member else 1


def cmd_iterate(args) -> int:
    space, f = _load(args.file)
    try:
        start = space.index(args.start)
    except KeyError as e:
        raise InputError(str(e)) from None
    trace = picard(f, start, args.max_steps)
    sys.stdout.write(trace_to_table(trace, space))
    term = trace.termination
    _say(f"termination: {term.kind}"
         + (f" at {space.points[term.point]} (step {term.step})" if term.kind == "fixed_point" else "")
         + (f" period {term.period} entered at step {term.step}" if term.kind == "cycle" else ""))
    if not args.certify:
        return 0
    if args.n is None:
        raise InputError("--certify needs --n")
    lam = args.lam if args.lam is not None else npk_min_coefficient(f, args.n).min_coefficient
    cert = cauchy_certificate(trace, args.n, lam)
    doc = certificate_to_doc(cert)
    _say(json.dumps(doc, sort_keys=True))
    return 0 if cert.holds else 1


def cmd_example(args) -> int:
    space, f = make_paper_example(args.n, args.M)
    if args.emit:
        _emit(space_to_doc(space, f))
        return 0
    upper = npk_min_coefficient(f, args.n)
    print(f"E({args.n}, {fmt(args.M)}): {space.size} points, map "
          + " ".join(f"{a}->{b}" for a, b in f.labelled()))
    print(f"npk(n={args.n}) coefficient {fmt(upper.min_coefficient)} "
          f"(bound {fmt(upper.bound)}): {'member' if upper.member else 'non-member'}")
    if args.n >= 3:
        lower = npk_min_coefficient(f, args.n - 1)
        print(f"npk(n={args.n - 1}) coefficient {fmt(lower.min_coefficient)} "
              f"(bound {fmt(lower.bound)}): {'member' if lower.member else 'non-member'}")
    return 0


def cmd_search(args) -> int:
    if args.mode == "separation":
        n = args.n[1]
        template = GeneratorConfig(seed=args.seed, size=max(args.sizes[1], n),
                                   map_scheme="fixed_point_biased")
        found = mine_separation(n, args.trials, template, include_family=not args.no_family)
        _emit([{
            "space": space_to_doc(w.space, w.map),
            "n": w.n,
            "upper": report_to_doc(w.upper, w.space),
            "lower": report_to_doc(w.lower, w.space),
            "config": w.config.to_dict() if w.config else None,
        } for w in found])
        _say(f"{len(found)} separation witnesses for n={n}")
        return 0 if found else 1
    summary = campaign(args.trials, args.sizes, args.n, args.seed, jobs=args.jobs)
    print(summary.to_json())
    _say(f"{summary.trials} trials, {summary.npk_members} npk members, "
         f"{len(summary.failures)} failures")
    for fail in summary.failures[:10]:
        _say(f"  {fail['claim']}: {fail['replay']}")
    return 0 if summary.ok else 1


def cmd_verify(args) -> int:
    if args.replay is not None:
        try:
            cfg = GeneratorConfig.from_dict(json.loads(args.replay))
        except (json.JSONDecodeError, TypeError) as e:
            raise InputError(f"bad replay config: {e}") from None
        space, f = generate(cfg)
    else:
        space, f = _load(args.file)
    report = verify_theorems(space, f, args.n)
    _emit({
        "n": report.n,
        "space": space_to_doc(space, f),
        "npk": report_to_doc(report.npk, space),
        "claims": [{"claim": v.claim, "applicable": v.applicable, "holds": v.holds,
                    "detail": v.detail} for v in report.verdicts],
        "holds": report.holds,
    })
    for v in report.verdicts:
        state = "holds" if v.holds else "FAILS"
        _say(f"{v.claim:<36} {'checked' if v.applicable else 'vacuous':<8} {state}")
    return 0 if report.holds else 1


def build_parser() -> argparse.ArgumentParser:
    jobs_default = int(os.environ.get(JOBS_ENV, "1") or 1)
    p = argparse.ArgumentParser(prog="kannanlab",
                                description="Exact fixed-point experiments on finite metric spaces.")
    sub = p.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=jobs_default,
                        help=f"worker processes (default from ${JOBS_ENV}, else 1)")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("-q", "--quiet", action="store_true")

    s = sub.add_parser("validate", parents=[common], help="check the metric axioms")
    s.add_argument("file", nargs="?")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("classify", parents=[common], help="minimal coefficient of a class")
    s.add_argument("file", nargs="?")
    s.add_argument("--class", dest="cls", choices=("kannan", "npk", "tpd"), required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--approx", action="store_true", help="add decimal renderings")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("iterate", parents=[common], help="Picard trace from one point")
    s.add_argument("file", nargs="?")
    s.add_argument("--start", required=True)
    s.add_argument("--max-steps", type=int, default=100)
    s.add_argument("--certify", action="store_true")
    s.add_argument("--lambda", dest="lam", type=_rational)
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_iterate)

    s = sub.add_parser("example", parents=[common], help="the E(n, M) family")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--M", type=_rational, required=True)
    s.add_argument("--emit", action="store_true", help="print the space+map document")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("search", parents=[common], help="separation mining or theorem campaign")
    s.add_argument("--mode", choices=("separation", "campaign"), required=True)
    s.add_argument("--n", type=_range, default=(2, 5))
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--sizes", type=_range, default=(3, 7))
    s.add_argument("--no-family", action="store_true",
                   help="do not inject the E(n, n(n+1)) witness")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", parents=[common], help="check every theorem on one instance")
    s.add_argument("file", nargs="?")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--replay", help="GeneratorConfig JSON from a campaign failure")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, StructureError, DomainError, ContractError,
            ValueError, TypeError, KeyError) as e:
        msg = e.args[0] if e.args else str(e)
        _emit({"error": str(msg)})
        _say(f"error: {msg}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
