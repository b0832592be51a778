"""Command-line front end.

One subcommand per experiment family::

    gen        write a random hypergraph to a text file
    solve      exact ground-state summary of an instance file
    logz       exact log partition function of an instance file
    interp-er  one-step insertion identities on random instances
    interp-reg regular-chain traces and their bookkeeping laws
    check      statistical checks (superadd-er, superadd-reg, monotone,
               concentration, lemma-a1, delta-unusual)
    satprob    satisfiability probability (Monte Carlo or exact)
    limit      near-superadditive sequence limit from a CSV

Exit codes: 0 the run passed, 1 a check failed (or the limit premise was
violated), 2 usage or parameter errors (including size caps).  Options can
be preloaded from a flat ``key=value`` config file via ``--config``;
explicit flags override the file.  Reports embed the effective scientific
configuration, the seed and the tool version; timestamps and runtimes stay
in the report header so that report bodies are byte-reproducible.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__, exact, interpolate, verify
from .errors import PremiseViolation, SizeCapError
from .hypergraph import (dump_graph, generate_config_partial, generate_er,
                         generate_er_simple, load_graph, project)
from .models import ModelSpec, build_instance
from .reports import CheckReport, dump_record, write_report

MODEL_ALIASES = {
    "is": "independent_set", "independent_set": "independent_set",
    "maxcut": "max_cut", "max_cut": "max_cut",
    "ising": "ising", "coloring": "coloring",
    "ksat": "ksat", "nae": "nae_ksat", "nae_ksat": "nae_ksat",
}


def _model_spec(args) -> ModelSpec:
    kind = MODEL_ALIASES.get(args.model)
    if kind is None:
        raise ValueError(f"unknown model {args.model!r}; choose from "
                         f"{sorted(set(MODEL_ALIASES))}")
    return ModelSpec(kind=kind, q=args.q, arity=args.k,
                     beta=args.beta, field=args.field)


def _add_model_flags(p, arity_default=2):
    p.add_argument("--model", required=True, help="is|maxcut|ising|coloring|ksat|nae")
    p.add_argument("--q", type=int, default=2, help="alphabet size (coloring)")
    p.add_argument("--k", type=int, default=arity_default, help="edge arity")
    p.add_argument("--beta", type=float, default=1.0, help="ising coupling")
    p.add_argument("--field", type=float, default=0.0, help="ising external field")


def _add_common_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="report/record output path")
    p.add_argument("--emit-plot-data", default=None, metavar="PATH",
                   help="write (x, y, yerr) triples for plotting")
    p.add_argument("--jobs", type=int, default=1, help="worker count")
    p.add_argument("--config", default=None, help="flat key=value defaults file")


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def _finish(report: CheckReport, args, started: float) -> int:
    runtime = time.time() - started
    if args.out:
        write_report(report, args.out, runtime_s=runtime)
    else:
        sys.stdout.write(report.to_json(runtime_s=runtime) + "\n")
    if getattr(args, "emit_plot_data", None):
        with open(args.emit_plot_data, "w") as fh:
            fh.write(report.plot_data_text())
    print(f"{report.name}: {report.verdict}")
    return 0 if report.verdict != "fail" else 1


def _write_record(record: dict, args) -> None:
    text = dump_record(record)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_gen(args) -> int:
    if args.ensemble == "er":
        graph = generate_er(args.n, args.m, args.k, seed=args.seed)
    elif args.ensemble == "er-simple":
        graph = generate_er_simple(args.n, args.m, args.k, seed=args.seed)
    else:
        t = args.t if args.t is not None else args.n * args.r // args.k
        graph = project(generate_config_partial(args.n, args.r, args.k, t,
                                                seed=args.seed))
    text = dump_graph(graph)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _load_instance_file(args):
    with open(args.input) as fh:
        graph = load_graph(fh.read())
    return build_instance(graph, _model_spec(args), seed=args.pot_seed)


def _cmd_solve(args) -> int:
    inst = _load_instance_file(args)
    summary = exact.ground_state(inst, cap=args.cap)
    _write_record(summary.to_record(), args)
    return 0


def _cmd_logz(args) -> int:
    inst = _load_instance_file(args)
    table = exact.log_partition(inst, args.lam, cap=args.cap)
    _write_record(table.to_record(), args)
    return 0


def _cmd_interp_er(args) -> int:
    started = time.time()
    spec = _model_spec(args)
    rng_ids = np.random.SeedSequence(args.seed).generate_state(2 * args.count)
    worst_margin = float("inf")
    worst_gap = 0.0
    nonneg = True
    for i in range(args.count):
        graph = generate_er(args.n, args.m, args.k, seed=int(rng_ids[2 * i]))
        inst = build_instance(graph, spec, seed=int(rng_ids[2 * i + 1]))
        res = interpolate.er_onestep_exact(inst, args.n1, mode=args.mode,
                                           fugacity=args.lam)
        worst_margin = min(worst_margin, res.margin)
        worst_gap = max(worst_gap, abs(res.lhs - res.formula_lhs),
                        abs(res.rhs - res.formula_rhs))
        if res.margin_nonneg is False:
            nonneg = False
    margins = {
        "one-step-margin": (worst_margin, 1e-12, "exact"),
        "enumeration-matches-formula": (1e-12 - worst_gap, 0.0, "exact"),
    }
    if args.mode != "log_partition" and not nonneg:
        margins["exact-nonnegativity"] = (-1.0, 0.0, "exact")
    report = CheckReport.build(
        name=f"onestep-er[{spec.kind},{args.mode}]",
        params={"kind": spec.kind, "n_nodes": args.n, "n_edges": args.m,
                "n_first": args.n1, "arity": args.k, "q": args.q,
                "beta": args.beta, "field": args.field, "mode": args.mode,
                "fugacity": args.lam, "count": args.count},
        seed=args.seed, estimates={}, margins=margins)
    return _finish(report, args, started)


def _cmd_interp_reg(args) -> int:
    started = time.time()
    side_counts: dict[tuple[int, int], list[int]] = {}
    failures = 0
    for i in range(args.runs):
        trace = interpolate.reg_chain_run(args.n, args.n1, args.r, args.k,
                                          seed=args.seed + i, n_matched=args.t)
        diag = interpolate.verify_trace(trace)
        failures += trace.failed_at is not None
        for ph, (c1, c2) in diag["side_counts"].items():
            tally = side_counts.setdefault(ph, [0, 0])
            tally[0] += c1
            tally[1] += c2
    margins = {}
    estimates = {}
    for (k1, k2), (c1, c2) in sorted(side_counts.items()):
        total = c1 + c2
        if total == 0:
            continue
        expected = (total * k1 / args.k, total * k2 / args.k)
        chi2 = sum((obs - exp) ** 2 / exp for obs, exp
                   in zip((c1, c2), expected) if exp > 0)
        margins[f"side-law[{k1}+{k2}]"] = \
            (verify.CHI2_3SIGMA_DF1 - chi2, 0.0, "statistical")
        estimates[f"side-one-rate[{k1}+{k2}]"] = \
            (c1 / total, (k1 / args.k * k2 / args.k / total) ** 0.5, total)
    report = CheckReport.build(
        name="reg-chain-trace",
        params={"n_nodes": args.n, "n_first": args.n1, "degree": args.r,
                "arity": args.k, "runs": args.runs, "n_matched": args.t},
        seed=args.seed, estimates=estimates, margins=margins,
        flags={"failed_runs": failures})
    return _finish(report, args, started)


def _cmd_check(args) -> int:
    started = time.time()
    if args.family == "superadd-er":
        report = verify.check_superadditivity_er(
            args.n, args.n1, args.c, _model_spec(args), args.samples,
            args.seed, mode=args.mode, jobs=args.jobs)
    elif args.family == "superadd-reg":
        report = verify.check_superadditivity_reg(
            args.n, args.n1, args.r, args.k, _model_spec(args), args.samples,
            args.seed, correction_const=args.correction_const, jobs=args.jobs)
    elif args.family == "monotone":
        report = verify.monotone_in_edges(
            _model_spec(args), args.n, _ints(args.ladder), args.samples, args.seed)
    elif args.family == "concentration":
        report = verify.concentration_report(
            _model_spec(args), args.c, _ints(args.sizes), args.samples,
            args.seed, jobs=args.jobs)
    elif args.family == "lemma-a1":
        report = verify.check_lemma_a1(args.n, args.m, args.extra, args.delta,
                                       _model_spec(args))
    elif args.family == "delta-unusual":
        report = verify.delta_unusual_frequency(args.n, args.m, args.q,
                                                args.delta, args.samples, args.seed)
    else:
        raise ValueError(f"unknown check family {args.family!r}")
    return _finish(report, args, started)


def _cmd_satprob(args) -> int:
    started = time.time()
    spec = _model_spec(args)
    if args.exact:
        value = verify.exact_sat_prob_tiny(args.n, args.m, spec,
                                           ensemble=args.ensemble)
        report = CheckReport.build(
            name=f"sat-prob-exact[{spec.kind}]",
            params={"n_nodes": args.n, "n_edges": args.m, "kind": spec.kind,
                    "q": args.q, "arity": args.k,
                    "ensemble": args.ensemble or
                    ("simple" if spec.kind == "coloring" else "directed"),
                    "rational": str(value)},
            seed=0,
            estimates={"sat-probability": (float(value), 0.0, 1)}, margins={})
        return _finish(report, args, started)
    report = verify.estimate_sat_prob(args.n, args.m, spec, args.samples,
                                      args.seed, ensemble=args.ensemble,
                                      jobs=args.jobs)
    return _finish(report, args, started)


def _cmd_limit(args) -> int:
    started = time.time()
    rows = []
    with open(args.sequence) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.lower().startswith(("n,", "n ", "#")):
                continue
            n_str, v_str = line.replace(",", " ").split()[:2]
            rows.append((int(n_str), float(v_str)))
    rows.sort()
    if [n for n, _ in rows] != list(range(1, len(rows) + 1)):
        raise ValueError("sequence file must supply a value for every n = 1..N")
    probe = verify.SequenceProbe(tuple(v for _, v in rows), args.alpha,
                                 args.c_const)
    try:
        est = verify.near_superadditive_limit(probe, n_max=args.n_max)
    except PremiseViolation as err:
        report = CheckReport.build(
            name="sequence-limit",
            params={"alpha": args.alpha, "constant": args.c_const,
                    "n_max": args.n_max or probe.n_max,
                    "violation_n": err.n, "violation_split": list(err.split or ())},
            seed=0, estimates={},
            margins={"premise": (-(err.deficit or 1.0), 0.0, "exact")},
            notes=(str(err),))
        return _finish(report, args, started)
    report = CheckReport.build(
        name="sequence-limit",
        params={"alpha": args.alpha, "constant": args.c_const, "n_max": est.n_max},
        seed=0,
        estimates={"limit-estimate": (est.estimate, 0.0, 1)},
        margins={"premise": (0.0, 0.0, "exact")},
        series=tuple((float(n), r, r - b) for n, r, b in est.envelope),
        notes=(f"checked {est.checked_splits} splits",))
    return _finish(report, args, started)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interpolab",
        description="interpolation experiments on sparse random hypergraphs")
    parser.add_argument("--version", action="version",
                        version=f"interpolab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random hypergraph")
    p.add_argument("--ensemble", choices=("er", "er-simple", "config"), default="er")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=int, default=2, help="degree (config ensemble)")
    p.add_argument("--t", type=int, default=None, help="matching size (config)")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_gen)

    for name, func in (("solve", _cmd_solve), ("logz", _cmd_logz)):
        p = sub.add_parser(name, help=f"{name} an instance file")
        p.add_argument("--input", required=True)
        p.add_argument("--pot-seed", type=int, default=0,
                       help="seed for sign tuples (ksat/nae)")
        p.add_argument("--cap", type=int, default=None)
        if name == "logz":
            p.add_argument("--lam", type=float, required=True, help="fugacity")
        _add_model_flags(p)
        _add_common_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("interp-er", help="one-step insertion identities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--mode", choices=interpolate.MODES, default="ground_state")
    p.add_argument("--lam", type=float, default=None)
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_interp_er)

    p = sub.add_parser("interp-reg", help="regular-chain traces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--runs", type=int, default=200)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_interp_reg)

    p = sub.add_parser("check", help="statistical verification families")
    p.add_argument("family", choices=("superadd-er", "superadd-reg", "monotone",
                                      "concentration", "lemma-a1", "delta-unusual"))
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--n1", type=int, default=6)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--c", type=float, default=1.0, help="edge density")
    p.add_argument("--r", type=int, default=2, help="degree (regular)")
    p.add_argument("--extra", type=int, default=1, help="added edges (lemma-a1)")
    p.add_argument("--delta", type=float, default=0.25)
    p.add_argument("--ladder", default="0 4 8", help="edge counts (monotone)")
    p.add_argument("--sizes", default="8 10 12", help="node ladder (concentration)")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--mode", choices=("ground_state", "sat_prob"),
                   default="ground_state")
    p.add_argument("--correction-const", type=float, default=1.0)
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("satprob", help="satisfiability probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--ensemble", choices=("directed", "simple"), default=None)
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_satprob)

    p = sub.add_parser("limit", help="near-superadditive sequence limit")
    p.add_argument("--sequence", required=True, help="CSV of n,value rows")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--c-const", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=None)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_limit)

    return parser


def _apply_config(argv: list[str]) -> list[str]:
    """Insert key=value file entries as flags before the user's flags."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    path = argv[at + 1]
    tokens: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not _:
                raise ValueError(f"config line {line!r} is not key=value")
            tokens.extend([f"--{key}", value])
    head = argv[:1]
    rest = argv[1:at] + argv[at + 2:]
    return head + tokens + rest


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except SizeCapError as err:
        print(f"size cap exceeded: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
