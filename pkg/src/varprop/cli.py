"""Command-line front end.

Subcommands map 1:1 onto library operations; every report has a
human-readable table form and, with --json, a machine-readable form that
round-trips at full precision. Exit codes: 0 success, 1 usage error,
2 data error, 3 unsupported analysis.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bounds as bounds_mod
from . import montecarlo as mc
from .errors import DataError, UnsupportedAnalysisError, VarpropError
from .model import EMPTY_EVIDENCE, classify_topology, parse_evidence, parse_network
from .oracle import enumerate_exact_moments
from .propagation import (conditioned_prior_moments, downstream_evidence_moments,
                          propagate_prior_moments)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_UNSUPPORTED = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def _load_network(path: str):
    try:
        with open(path) as fh:
            return parse_network(fh.read())
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e


def _load_evidence(path: str | None, net):
    if path is None:
        return EMPTY_EVIDENCE
    try:
        with open(path) as fh:
            return parse_evidence(fh.read(), net)
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e


def _moment_rows(net, moments):
    rows = []
    for name in net.node_names():
        if name not in moments:
            continue
        m = moments[name]
        node = net.node(name)
        for i, label in enumerate(node.alternatives):
            mu = float(m.mean[i])
            var = float(m.second[i, i] - mu * mu)
            bound = bounds_mod.variance_upper_bound(min(max(mu, 0.0), 1.0))
            rows.append({
                "node": name, "alternative": label,
                "mean": mu, "variance": var, "std": float(np.sqrt(max(var, 0.0))),
                "variance_bound": bound,
                "bound_ratio": var / bound if bound > 0 else 0.0,
            })
    return rows


def _print_moment_table(rows, out):
    header = f"{'node':<12} {'alt':<10} {'mean':>12} {'variance':>12} {'std':>12} {'bound':>12} {'ratio':>8}"
    print(header, file=out)
    for r in rows:
        print(f"{r['node']:<12} {r['alternative']:<10} {_fmt(r['mean']):>12} "
              f"{_fmt(r['variance']):>12} {_fmt(r['std']):>12} "
              f"{_fmt(r['variance_bound']):>12} {_fmt(r['bound_ratio']):>8}",
              file=out)


def _emit(report: dict, rows, args, out):
    if args.json:
        print(json.dumps(report, indent=2), file=out)
    else:
        for k, v in report.items():
            if k == "rows":
                continue
            print(f"{k}: {v if isinstance(v, (str, int)) else _fmt(v)}", file=out)
        if rows is not None:
            _print_moment_table(rows, out)


def _build_parser() -> _Parser:
    p = _Parser(prog="varprop",
                description="Variances of node probabilities in belief "
                            "networks with uncertain parameters.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--json", action="store_true")
        return sp

    sp = add("validate", help="check a network file")
    sp.add_argument("network")

    sp = add("topology", help="classify network topology")
    sp.add_argument("network")

    sp = add("prior-var", help="prior variances of all node marginals")
    sp.add_argument("network")

    sp = add("evidence-var", help="variances given upstream evidence")
    sp.add_argument("network")
    sp.add_argument("--evidence", required=True, metavar="FILE")

    sp = add("cond-var", help="prior variances via root-cutset conditioning")
    sp.add_argument("network")
    sp.add_argument("--cutset", metavar="NAMES", help="comma-separated root names")

    sp = add("mc", help="Monte Carlo spread of one inferred probability")
    sp.add_argument("network")
    sp.add_argument("--query", required=True, metavar="NODE=ALT")
    sp.add_argument("--evidence", metavar="FILE")
    sp.add_argument("--n", type=int)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--relative", action="store_true")
    sp.add_argument("--seed", type=int,
                    default=int(os.environ.get("VARPROP_SEED", "0")))
    sp.add_argument("--p", type=float, default=0.9,
                    help="mass fraction for the tolerance interval")

    sp = add("plan-n", help="trial count for a target CI width")
    sp.add_argument("--expected", type=float, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--relative", action="store_true")

    sp = add("tolerance", help="nonparametric tolerance interval planning")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--i", type=int)
    sp.add_argument("--j", type=int)

    sp = add("bound", help="closed-form variance and relative-std bounds")
    sp.add_argument("--expected", type=float, required=True)

    sp = add("oracle", help="brute-force exact moments (finite specs only)")
    sp.add_argument("network")
    sp.add_argument("--node", required=True)
    sp.add_argument("--evidence", metavar="FILE")
    return p


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args, sys.stdout)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedAnalysisError as e:
        print(f"unsupported analysis: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (DataError, ValueError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except VarpropError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


def _dispatch(args, out) -> int:
    cmd = args.command

    if cmd == "validate":
        from .model import network_from_obj, validate_network
        try:
            with open(args.network) as fh:
                doc = json.load(fh)
        except OSError as e:
            raise DataError(str(e)) from e
        except json.JSONDecodeError as e:
            raise DataError(f"syntax error at line {e.lineno}: {e.msg}") from e
        net = network_from_obj(doc)
        violations = validate_network(net)
        report = {"command": "validate", "network": net.name,
                  "valid": not violations,
                  "violations": [str(v) for v in violations]}
        if args.json:
            print(json.dumps(report, indent=2), file=out)
        else:
            print("valid" if not violations else "\n".join(str(v) for v in violations),
                  file=out)
        return EXIT_OK if not violations else EXIT_DATA

    if cmd == "topology":
        net = _load_network(args.network)
        rep = classify_topology(net)
        report = {"command": "topology", "network": net.name,
                  "class": rep.topology_class,
                  "suggested_cutset": list(rep.suggested_cutset),
                  "root_cutset_available": rep.root_cutset_available,
                  "max_alternatives": rep.max_alternatives,
                  "min_parents": rep.min_parents, "max_parents": rep.max_parents,
                  "node_count": rep.node_count, "value_count": rep.value_count}
        if args.json:
            print(json.dumps(report, indent=2), file=out)
        else:
            for k, v in report.items():
                if k != "command":
                    print(f"{k}: {v}", file=out)
        return EXIT_OK

    if cmd in ("prior-var", "evidence-var", "cond-var", "oracle"):
        net = _load_network(args.network)
        if cmd == "prior-var":
            moments = propagate_prior_moments(net)
        elif cmd == "evidence-var":
            ev = _load_evidence(args.evidence, net)
            moments = downstream_evidence_moments(net, ev)
        elif cmd == "cond-var":
            if args.cutset:
                cutset = [s.strip() for s in args.cutset.split(",") if s.strip()]
            else:
                rep = classify_topology(net)
                if not rep.root_cutset_available or not rep.suggested_cutset:
                    raise UnsupportedAnalysisError(
                        "no root cutset available; pass --cutset explicitly")
                cutset = list(rep.suggested_cutset)
            moments = conditioned_prior_moments(net, cutset)
        else:
            ev = _load_evidence(args.evidence, net)
            moments = {args.node: enumerate_exact_moments(net, ev, args.node)}
        rows = _moment_rows(net, moments)
        report = {"command": cmd, "network": net.name, "rows": rows}
        if args.json:
            print(json.dumps(report, indent=2), file=out)
        else:
            _print_moment_table(rows, out)
        return EXIT_OK

    if cmd == "mc":
        if (args.n is None) == (args.epsilon is None):
            raise _UsageError("pass exactly one of --n or --epsilon")
        net = _load_network(args.network)
        ev = _load_evidence(args.evidence, net)
        try:
            node_name, alt_label = args.query.split("=", 1)
        except ValueError:
            raise _UsageError("--query must look like NODE=ALT") from None
        if node_name not in net.node_names():
            raise DataError(f"unknown query node {node_name!r}")
        node = net.node(node_name)
        if alt_label not in node.alternatives:
            raise DataError(f"unknown alternative {alt_label!r} of {node_name!r}")
        alt = node.alternatives.index(alt_label)
        if args.epsilon is not None:
            from .inference import instantiate_expected, query_marginal
            ref = float(query_marginal(instantiate_expected(net), ev, node_name)[alt])
            planner = mc.plan_n_relative if args.relative else mc.plan_n_absolute
            n = planner(ref, args.epsilon)
        else:
            n = args.n
            if n < 1:
                raise _UsageError("--n must be at least 1")
        summary = mc.run_trials(net, ev, (node_name, alt), n, args.seed)
        report = {
            "command": "mc", "network": net.name, "query": args.query,
            "seed": args.seed, "n": summary.n,
            "reference_mean": summary.reference_mean,
            "sq_dev_sum": summary.sq_dev_sum,
            "sample_std": float(np.sqrt(summary.sq_dev_sum / summary.n)),
            "sample_min": summary.sample_min, "sample_max": summary.sample_max,
            "relative_std_bound": bounds_mod.relative_std_bound(summary.reference_mean)
            if summary.reference_mean > 0 else None,
        }
        if summary.n > 100:
            ci = mc.std_confidence_interval(summary)
            report["std_ci_95"] = [ci.lower, ci.upper]
            report["a_n"], report["b_n"] = ci.a_n, ci.b_n
        if summary.n >= 2:
            report["tolerance_p"] = args.p
            report["tolerance_gamma"] = mc.minmax_tolerance_gamma(summary.n, args.p)
            report["tolerance_interval"] = [summary.sample_min, summary.sample_max]
        if args.json:
            print(json.dumps(report, indent=2), file=out)
        else:
            for k, v in report.items():
                if isinstance(v, float):
                    v = _fmt(v)
                elif isinstance(v, list):
                    v = "[" + ", ".join(_fmt(x) for x in v) + "]"
                print(f"{k}: {v}", file=out)
        return EXIT_OK

    if cmd == "plan-n":
        planner = mc.plan_n_relative if args.relative else mc.plan_n_absolute
        n = planner(args.expected, args.epsilon)
        m = (max(args.expected, 1 - args.expected) if not args.relative
             else max(1.0, (1 - args.expected) / args.expected))
        rounded = ((n + 99) // 100) * 100
        report = {"command": "plan-n", "expected": args.expected,
                  "epsilon": args.epsilon,
                  "mode": "relative" if args.relative else "absolute",
                  "n": n,
                  "worst_case_width_at_n": float(np.sqrt(n) * m * mc.width_factor(n)),
                  "round_sufficient_n": rounded}
        if args.json:
            print(json.dumps(report, indent=2), file=out)
        else:
            print(f"n: {n}", file=out)
            print(f"worst-case width at n: {_fmt(report['worst_case_width_at_n'])}",
                  file=out)
            print(f"note: n = {rounded} also satisfies the bound", file=out)
        return EXIT_OK

    if cmd == "tolerance":
        if args.gamma is not None:
            n = mc.plan_tolerance_n(args.p, args.gamma)
            report = {"command": "tolerance", "p": args.p, "gamma": args.gamma, "n": n}
        elif args.n is not None:
            i = args.i if args.i is not None else 1
            j = args.j if args.j is not None else args.n
            gamma = mc.order_stat_gamma(args.n, i, j, args.p)
            report = {"command": "tolerance", "p": args.p, "n": args.n,
                      "i": i, "j": j, "gamma": gamma}
        else:
            raise _UsageError("pass --gamma (plan n) or --n (evaluate gamma)")
        if args.json:
            print(json.dumps(report, indent=2), file=out)
        else:
            for k, v in report.items():
                if k != "command":
                    print(f"{k}: {v if isinstance(v, int) else _fmt(v)}", file=out)
        return EXIT_OK

    if cmd == "bound":
        report = {"command": "bound", "expected": args.expected,
                  "variance_bound": bounds_mod.variance_upper_bound(args.expected)}
        if args.expected > 0:
            report["relative_std_bound"] = bounds_mod.relative_std_bound(args.expected)
        if args.json:
            print(json.dumps(report, indent=2), file=out)
        else:
            for k, v in report.items():
                if k != "command":
                    print(f"{k}: {_fmt(v)}", file=out)
        return EXIT_OK

    raise _UsageError(f"unknown command {cmd!r}")


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
