"""Command line: ``analyze``, ``survey`` and ``verify``.

Exit status: 0 success, 1 usage or parse error, 2 size bound exceeded,
3 theorem violation.
"""
import argparse
import csv
import io as _io
import sys

from .abelian import abelian_groups_up_to
from .center import main_theorem_report
from .classify import classify
from .errors import BoundExceeded, EquivalenceViolation, SpecError
from .io import action_to_spec, dumps, group_to_json, parse_spec, subgroup_to_json
from .modules import Bounds, ModuleAction
from .rings import ScalarRing
from .theorems import DEFAULT_DEPTH, SUITE_NAMES, Context, instance_checklist, verify
from .tower import INFINITY, ecdim, tower_classification

EXIT_OK, EXIT_USAGE, EXIT_BOUND, EXIT_VIOLATION = 0, 1, 2, 3

SURVEY_COLUMNS = [
    "invariant_factors", "order", "ring", "S_order", "C_order", "T_order", "ecdim", "classification",
    "multiplication", "comultiplication", "d_module", "self_generator", "dissimilar_semisimple",
    "endo_extendable", "quasi_injective", "generator", "faithful", "balanced", "torsion_subset_size", "status",
]


class _UsageError(Exception):
    pass


def parse_ring(text):
    if text == "Z":
        return ScalarRing(0)
    if text.startswith("Zn:"):
        try:
            n = int(text[3:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad modulus in {text!r}") from None
        if n < 2:
            raise argparse.ArgumentTypeError("modulus must be >= 2")
        return ScalarRing(n)
    raise argparse.ArgumentTypeError("ring must be Z or Zn:<n>")


def _ecdim_json(e):
    return "inf" if e == INFINITY else int(e)


def _ring_summary(R):
    return {"invariant_factors": list(R.additive.invariant_factors), "order": R.order,
            "commutative": R.is_commutative()}


def analysis_report(a, bounds, depth=DEFAULT_DEPTH, seed=0):
    ctx = Context(a, bounds, depth=max(depth, 5), seed=seed)
    S, T, tower = ctx.S, ctx.T, ctx.tower
    rep = main_theorem_report(a, bounds, S, T)
    e = ecdim(a, bounds, tower)
    cls = classify(a, bounds, S, T, ctx.subs)
    return {
        "instance": action_to_spec(a),
        "carrier": group_to_json(a.carrier),
        "end_ring": _ring_summary(S),
        "center": subgroup_to_json(rep.center),
        "commutator_image": subgroup_to_json(rep.commutator_image),
        "biend": _ring_summary(T),
        "tower": {
            "sizes": list(tower.sizes),
            "commutative": list(tower.commutative_flags),
            "containments": list(tower.containments),
            "stabilized_at": tower.stabilized_at,
            "period_two_verified": tower.period_two_verified,
            "ecdim": _ecdim_json(e),
            "classification": str(tower_classification(a, bounds, tower)),
        },
        "classifier": cls.as_dict(),
        "theorems": instance_checklist(ctx),
    }


def _bounds(args):
    return Bounds(carrier=args.bound_carrier, extendable=args.bound_extendable,
                  subgroups=max(args.bound_carrier, Bounds().subgroups), rank=args.bound_rank)


def cmd_analyze(args, out):
    try:
        text = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
    except OSError as exc:
        raise _UsageError(f"cannot read {args.spec}: {exc.strerror}") from None
    a = parse_spec(text)
    report = analysis_report(a, _bounds(args), args.depth, args.seed)
    out.write(dumps(report))
    if "fail" in report["theorems"].values():
        return EXIT_VIOLATION
    return EXIT_OK


def survey_rows(max_order, ring, bounds, depth=5):
    rows = []
    ecdim3 = []
    for G in abelian_groups_up_to(max_order):
        if ring.modulus and ring.modulus % G.exponent:
            continue
        a = ModuleAction(ring, G)
        row = {"invariant_factors": ";".join(map(str, G.invariant_factors)), "order": G.order, "ring": str(ring)}
        try:
            ctx = Context(a, bounds, depth=max(depth, 5))
            e = ecdim(a, bounds, ctx.tower)
            cls = classify(a, bounds, ctx.S, ctx.T, ctx.subs)
            rep = main_theorem_report(a, bounds, ctx.S, ctx.T)
            row.update(S_order=ctx.S.order, C_order=rep.center.order, T_order=ctx.T.order,
                       ecdim=_ecdim_json(e), classification=str(tower_classification(a, bounds, ctx.tower)),
                       status="ok")
            row.update({k: ("" if v is None else v) for k, v in cls.as_dict().items()})
            if e == 3:
                ecdim3.append(row["invariant_factors"])
        except BoundExceeded as exc:
            row["status"] = f"bound_exceeded: {exc}"
        rows.append(row)
    return rows, ecdim3


def cmd_survey(args, out):
    bounds = _bounds(args)
    if args.max_order > bounds.carrier:
        raise BoundExceeded("max order", args.max_order, bounds.carrier)
    rows, ecdim3 = survey_rows(args.max_order, args.ring, bounds, args.depth)
    buf = _io.StringIO()
    w = csv.DictWriter(buf, SURVEY_COLUMNS, restval="", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    buf.write(f"# rows: {len(rows)}\n")
    buf.write(f"# ecdim3: {' '.join(ecdim3) if ecdim3 else 'none'}\n")
    text = buf.getvalue()
    if args.out in (None, "-"):
        out.write(text)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise _UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    return EXIT_OK


def cmd_verify(args, out):
    bounds = _bounds(args)
    if args.max_order > bounds.carrier:
        raise BoundExceeded("max order", args.max_order, bounds.carrier)
    results = verify(args.max_order, args.ring, bounds, args.depth, mutant=args.mutant, seed=args.seed)
    bad = 0
    width = max(len(n) for n in SUITE_NAMES)
    for name in SUITE_NAMES:
        r = results[name]
        status = "PASS" if r.violations == 0 else "FAIL"
        out.write(f"{status} {name:<{width}} checked={r.checked} vacuous={r.vacuous} "
                  f"violations={r.violations} skipped={r.skipped}\n")
        bad += r.violations
    out.write(f"suites: {len(results)}  violations: {bad}\n")
    for name in SUITE_NAMES:
        for ce in results[name].counterexamples[:3]:
            out.write(f"counterexample {name}: {dumps(ce).strip()}\n")
    return EXIT_VIOLATION if bad else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="endocomm", description="Endomorphism rings, centers and towers of finite modules.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound-carrier", type=int, default=Bounds().carrier, help="largest carrier order")
    common.add_argument("--bound-extendable", type=int, default=Bounds().extendable,
                        help="largest carrier order for extendability predicates")
    common.add_argument("--bound-rank", type=int, default=Bounds().rank, help="largest endomorphism entry-space rank")
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="tower depth")
    common.add_argument("--ring", type=parse_ring, default=ScalarRing(0), help="Z or Zn:<n>")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled spot checks")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="analyze one instance spec (JSON)")
    a.add_argument("spec", help="spec file, or - for stdin")
    s = sub.add_parser("survey", parents=[common], help="tabulate every abelian group up to an order")
    s.add_argument("--max-order", type=int, default=16)
    s.add_argument("--out", default="-", help="CSV output path (default stdout)")
    v = sub.add_parser("verify", parents=[common], help="run the theorem suites over a corpus")
    v.add_argument("--max-order", type=int, default=32)
    v.add_argument("--mutant", action="store_true", help=argparse.SUPPRESS)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.depth < 1:
        print("error: --depth must be positive", file=sys.stderr)
        return EXIT_USAGE
    cmd = {"analyze": cmd_analyze, "survey": cmd_survey, "verify": cmd_verify}[args.command]
    try:
        return cmd(args, out)
    except (SpecError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except EquivalenceViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
