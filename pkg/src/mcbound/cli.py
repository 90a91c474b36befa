"""Command-line interface: ``mcbound {bound,sweep,validate,gen}``.

Exit codes: 0 success, 2 bad input or options, 3 theorem not applicable to
the state, 4 numerical failure.
"""
import argparse
import hashlib
import json
import math
import sys

from mcbound import __version__, bounds, oracle, qstate, stateio
from mcbound.errors import McbError, NumericError, PartyCountError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_APPLICABILITY = 3
EXIT_NUMERIC = 4

FAMILIES = ("example1", "example2", "example2-embedded16")
SUITES = ("pure-formulas", "monogamy", "projections", "sandwich", "all")
DEFAULT_THEOREMS = {"example1": ["1"], "example2": ["2", "4"], "example2-embedded16": ["2", "4"]}

DISCREPANCY_NOTE = (
    "# note: paper_formula_* columns are reference closed-form expressions evaluated as written and are not computed by "
    "the bound pipeline"
)
EXAMPLE1_NOTE = (
    "# note: for this family every 2x2x2 substate has diagonal two-qubit reductions, so the theorem-1 column is 0 "
    "for every x while paper_formula_example_closed_form is positive on (0, 9/11); the two do not agree"
)
EXAMPLE2_NOTE = (
    "# note: thm2 columns replace each 2x2x2 convex roof by its pairwise Wootters sum; "
    "thm2_paper uses merged-block factors d_a+d_b-1, thm2_conservative uses d_a*d_b-1"
)


def family_state(family, x):
    if family == "example1":
        return qstate.ggz_family(x)
    if family == "example2":
        return qstate.example2_family(x)
    if family == "example2-embedded16":
        return qstate.example2_family(x, embedded16=True)
    raise McbError(f"unknown family {family!r}")


def grid(x_from, x_to, step):
    """Grid points ``x_from + i*step``; count ``floor((x_to - x_from)/step) + 1``."""
    if not (0.0 <= x_from <= x_to <= 1.0):
        raise McbError(f"need 0 <= from <= to <= 1, got from={x_from} to={x_to}")
    if not step > 0:
        raise McbError(f"step must be positive, got {step}")
    # the epsilon absorbs representation error in e.g. 0.81 / 0.01
    count = math.floor((x_to - x_from) / step + 1e-9) + 1
    return [min(x_from + i * step, x_to) for i in range(count)]


def fmt(v):
    return format(float(v), ".12g")


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- commands ---------------------------------------------------------------------


def cmd_bound(args):
    with open(args.inp, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise McbError(f"input is not UTF-8: {exc}") from exc
    state = stateio.parse_state(text)
    report = bounds.evaluate(
        state,
        args.theorem,
        s=args.s,
        sub_evaluator=args.sub_eval,
        coeff_mode=args.coeff_mode,
        parallel=args.parallel,
        allow_n4=args.allow_n4,
    )
    doc = report.to_dict()
    doc["input_sha256"] = hashlib.sha256(raw).hexdigest()
    doc["tool_version"] = __version__
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def _sweep_columns(args):
    theorems = args.theorem or DEFAULT_THEOREMS[args.family]
    cols = []
    for t in dict.fromkeys(theorems):
        if t == "2":
            cols.append(("thm2_conservative", dict(theorem="2", coeff_mode="conservative")))
            cols.append(("thm2_paper", dict(theorem="2", coeff_mode="paper")))
        elif t == "4":
            name = f"thm4_s{args.s}_{args.sub_eval}"
            cols.append((name, dict(theorem="4", s=args.s, sub_evaluator=args.sub_eval, coeff_mode=args.coeff_mode)))
        else:
            cols.append((f"thm{t}", dict(theorem=t, allow_n4=args.allow_n4)))
    return cols


def sweep_csv(args):
    """Build the sweep CSV text (also used by the tests)."""
    xs = grid(args.x_from, args.x_to, args.step)
    cols = _sweep_columns(args)
    example2 = args.family.startswith("example2")
    header = ["x"] + [name for name, _ in cols] + ["paper_formula_example_closed_form"]
    if example2:
        header.append("paper_formula_ref23_closed_form")
    lines = [",".join(header)]
    for x in xs:
        rho = family_state(args.family, x)
        values = {}
        for name, opts in cols:
            v = bounds.evaluate(rho, parallel=args.parallel, **opts).bound
            if not (math.isfinite(v) and v >= 0.0):
                raise NumericError(f"{name} produced {v!r} at x={x}")
            values[name] = v
        if "thm2_conservative" in values and values["thm2_conservative"] > values["thm2_paper"] + 1e-12:
            raise NumericError(f"conservative thm2 exceeds paper-mode thm2 at x={x}")
        forms = bounds.paper_closed_forms(x)
        row = [fmt(x)] + [fmt(values[name]) for name, _ in cols]
        row.append(fmt(forms.example2 if example2 else forms.example1))
        if example2:
            row.append(fmt(forms.ref23))
        lines.append(",".join(row))
    lines.append(DISCREPANCY_NOTE)
    lines.append(EXAMPLE2_NOTE if example2 else EXAMPLE1_NOTE)
    return "\n".join(lines) + "\n"


def cmd_sweep(args):
    text = sweep_csv(args)
    try:
        _emit(text, args.out)
    except OSError as exc:
        raise McbError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def run_suite(suite, seed, samples, trials=200):
    checks = []
    if suite in ("pure-formulas", "all"):
        checks += oracle.formula_suite(seed, samples)
    if suite in ("monogamy", "all"):
        checks.append(oracle.monogamy_check(seed, samples))
    if suite in ("projections", "all"):
        checks += [
            oracle.pairwise_sum_check(seed, samples),
            oracle.tripartite_projection_check(seed, samples),
            oracle.bipartite_projection_check(seed, samples),
            oracle.thm4_projection_check(seed, samples),
        ]
    if suite in ("sandwich", "all"):
        checks += oracle.sandwich_suite(seed, samples, trials)
    return checks


def cmd_validate(args):
    checks = run_suite(args.suite, args.seed, args.samples, args.trials)
    ok = all(c.passed for c in checks)
    doc = {
        "suite": args.suite,
        "seed": args.seed,
        "samples": args.samples,
        "passed": ok,
        "checks": [c.to_dict() for c in checks],
        "tool_version": __version__,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if ok else 1


def cmd_gen(args):
    state = family_state(args.family, args.x)
    _emit(stateio.format_state(state), args.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="mcbound", description="Projection-based lower bounds of multipartite concurrence.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--parallel", choices=bounds.PARALLEL_MODES, default="det")

    def evaluator_opts(sp):
        sp.add_argument("--s", type=int, default=2, help="substate size for theorem 4")
        sp.add_argument("--sub-eval", dest="sub_eval", choices=bounds.SUB_EVALUATORS, default="thm2")
        sp.add_argument("--coeff-mode", dest="coeff_mode", choices=bounds.COEFF_MODES, default="conservative")
        sp.add_argument("--allow-n4", dest="allow_n4", action="store_true", help="permit theorem 3 on four qubits")

    sp = sub.add_parser("bound", help="evaluate one bound on a state file")
    sp.add_argument("--in", dest="inp", required=True, help="mcb-state/1 file")
    sp.add_argument("--theorem", choices=("1", "2", "3", "4"), required=True)
    evaluator_opts(sp)
    common(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("sweep", help="sweep an example family over x and write CSV")
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--from", dest="x_from", type=float, default=0.0)
    sp.add_argument("--to", dest="x_to", type=float, default=1.0)
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--theorem", choices=("1", "2", "3", "4"), action="append", help="repeatable")
    evaluator_opts(sp)
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="run validation suites")
    sp.add_argument("--suite", choices=SUITES, default="all")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=200, help="roof-search trials for the sandwich suite")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("gen", help="write an example-family state file")
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--x", type=float, required=True)
    common(sp)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PartyCountError as exc:
        print(f"mcbound: not applicable: {exc}", file=sys.stderr)
        return EXIT_APPLICABILITY
    except (NumericError, ArithmeticError) as exc:
        print(f"mcbound: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (McbError, ValueError, OSError) as exc:
        print(f"mcbound: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
