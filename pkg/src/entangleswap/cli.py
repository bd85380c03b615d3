"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .bell import average_swap_negativity, rde_lower_bound, swap_density, swap_outcomes
from .exceptions import EntangleSwapError, VerificationError
from .kernels import BACKEND
from .linalg import Dims
from .negativity import DensityMatrix, negativity_mixed, negativity_pure
from .report import SCHEMA_VERSION, dumps_csv, dumps_json
from .roof import OptimizerConfig, estimate_cren, estimate_noa, swap_decomposition
from .schmidt import schmidt_vector, state_from_schmidt, uniform
from .theorems import (STRATA, random_schmidt, scan_generic, verify_equal_schmidt,
                       verify_low_dim, verify_max_entangled)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
SUM_SLACK = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_vector(text: str | None, d: int | None, rng=None):
    """Parse ``0.5,0.3,0.2``, ``uniform`` or ``random`` into a Schmidt vector."""
    if text is None:
        return None
    text = text.strip().lower()
    if text in ("uniform", "random"):
        if d is None:
            raise UsageError(f"'{text}' needs --d")
        if text == "uniform":
            return uniform(d)
        return random_schmidt(d, rng)
    try:
        v = np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise UsageError(f"cannot parse vector {text!r}") from None
    if v.size == 0 or np.any(~np.isfinite(v)) or np.any(v < 0):
        raise UsageError(f"invalid probability vector {text!r}")
    total = v.sum()
    if abs(total - 1.0) > SUM_SLACK:
        raise UsageError(f"vector {text!r} sums to {total:.9g}; expected 1")
    v = v / total
    if d is not None and v.size > d:
        raise UsageError(f"vector {text!r} is longer than d = {d}")
    return schmidt_vector(v, d)


def _dim(args, *texts):
    if args.d is not None:
        return args.d
    lens = [len(t.split(",")) for t in texts if t and t.strip().lower() not in ("uniform", "random")]
    if not lens:
        raise UsageError("dimension unknown: pass --d")
    return max(lens)


def _opt_cfg(args):
    return OptimizerConfig(restarts=args.restarts, seed=args.seed)


def _emit(args, doc, rows=None, columns=None):
    if args.format == "csv":
        if rows is None:
            rows = [{k: v for k, v in doc.items() if not isinstance(v, (dict, list))}]
            columns = list(rows[0])
        text = dumps_csv(rows, columns)
    else:
        doc = {"schema_version": SCHEMA_VERSION, **doc}
        if rows is not None:
            doc["rows"] = rows
        text = dumps_json(doc)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_measures(args):
    if args.schmidt is None:
        raise UsageError("measures needs --schmidt")
    d = _dim(args, args.schmidt)
    lam = parse_vector(args.schmidt, d)
    if d < 2:
        raise UsageError("negativity needs d >= 2")
    psi = state_from_schmidt(lam, d)
    n = negativity_pure(lam, d)
    doc = {
        "command": "measures",
        "d": d,
        "schmidt": lam,
        "negativity": n,
        "negativity_partial_transpose": negativity_mixed(DensityMatrix.from_pure(psi)),
        # pure state: convex roof and assistance both equal the negativity
        "cren": n,
        "noa": n,
    }
    _emit(args, doc)
    return EXIT_OK


def _outcome_rows(p, q, d):
    rows = []
    for o in swap_outcomes(p, q, d):
        rows.append({
            "k": o.index.k,
            "l": o.index.l,
            "probability": o.probability,
            "schmidt": o.post_schmidt() if o.post_state is not None else [],
            "negativity": o.negativity(),
        })
    return rows


def cmd_swap(args):
    d = _dim(args, args.p, args.q)
    rng = np.random.default_rng(args.seed)
    p, q = parse_vector(args.p, d, rng), parse_vector(args.q, d, rng)
    if p is None or q is None:
        raise UsageError("swap needs --p and --q")
    rows = _outcome_rows(p, q, d)
    doc = {
        "command": "swap",
        "d": d,
        "p": p,
        "q": q,
        "average_negativity": average_swap_negativity(p, q, d),
        "bound": rde_lower_bound(p, q, d),
    }
    if args.format == "csv":
        _emit(args, doc, rows, ["k", "l", "probability", "schmidt", "negativity"])
    else:
        for r, o in zip(rows, swap_outcomes(p, q, d)):
            r["post_state"] = [] if o.post_state is None else o.post_state.amplitudes
        _emit(args, doc, rows)
    return EXIT_OK


def _pairs(args, d):
    """Explicit sides stay fixed; missing or ``random`` sides are sampled."""
    rng = np.random.default_rng(args.seed)
    n = args.random or 1
    out = []
    for _ in range(n):
        p = parse_vector(args.p if args.p else ("random" if args.random else None), d, rng)
        q = parse_vector(args.q if args.q else ("random" if args.random else None), d, rng)
        out.append((p, q))
    return out


def _report_row(rep):
    return {
        "d": rep.d,
        "p": rep.p,
        "q": rep.q,
        "bound": rep.bound,
        "cren_product": rep.cren_product,
        "noa_lower": rep.noa_lower,
        "gap": rep.gap,
        "verdict": rep.verdict,
        "passed": rep.passed,
        "failures": ";".join(sorted(rep.failures)),
    }


_REPORT_COLUMNS = ["d", "p", "q", "bound", "cren_product", "noa_lower", "gap", "verdict",
                   "passed", "failures"]


def cmd_bound(args):
    d = _dim(args, args.p, args.q)
    rows = []
    for p, q in _pairs(args, d):
        if p is None or q is None:
            raise UsageError("bound needs --p and --q, or --random N")
        b = rde_lower_bound(p, q, d)
        prod = negativity_pure(p, d) * negativity_pure(q, d)
        rows.append({"d": d, "p": p, "q": q, "bound": b, "cren_product": prod, "gap": b - prod,
                     "flagged": b < prod - 1e-9})
    _emit(args, {"command": "bound", "d": d, "count": len(rows)}, rows,
          ["d", "p", "q", "bound", "cren_product", "gap", "flagged"])
    return EXIT_OK


def cmd_verify(args):
    d = _dim(args, args.p, args.q)
    mode = args.mode
    cfg = _opt_cfg(args) if args.optimize else None
    reports = []
    if mode == "lowdim":
        for p, q in _pairs(args, d):
            if p is None or q is None:
                raise UsageError("verify lowdim needs --p and --q, or --random N")
            reports.append(verify_low_dim(p, q, d, cfg))
    elif mode == "equal":
        rng = np.random.default_rng(args.seed)
        n = args.random or 1
        for _ in range(n):
            p = parse_vector(args.p or ("random" if args.random else None), d, rng)
            if p is None:
                raise UsageError("verify equal needs --p or --random N")
            reports.append(verify_equal_schmidt(p, d, cfg))
    else:
        rng = np.random.default_rng(args.seed)
        n = args.random or 1
        for _ in range(n):
            q = parse_vector(args.q or args.p or ("random" if args.random else None), d, rng)
            if q is None:
                raise UsageError("verify maxent needs --q or --random N")
            reports.append(verify_max_entangled(q, d, "first", cfg))
    failed = [r for r in reports if not r.passed]
    rows = [_report_row(r) for r in reports]
    doc = {
        "command": "verify",
        "mode": mode,
        "d": d,
        "checks": len(reports),
        "failed": len(failed),
    }
    if args.format != "csv":
        worst = {}
        for r in reports:
            for k, v in r.residuals.items():
                worst[k] = max(worst.get(k, 0.0), float(v))
        doc["max_residuals"] = worst
        if reports and reports[0].sums is not None:
            s = reports[0].sums
            doc["partition_sums"] = {"parity": s.parity, "sums": s.sums, "K": s.K, "L": s.L,
                                     "U": s.U, "V": s.V}
    _emit(args, doc, rows, _REPORT_COLUMNS)
    if failed:
        names = sorted({n for r in failed for n in r.failures})
        print(f"verification failed: {', '.join(names)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_scan(args):
    if args.d is None:
        raise UsageError("scan needs --d")
    strata = args.strata.split(",") if args.strata else STRATA
    reps = scan_generic(args.d, args.samples, args.seed, strata)
    rows = [{
        "row": "sample",
        "stratum": r.stratum,
        "index": r.index,
        "p": r.p,
        "q": r.q,
        "bound": r.bound,
        "product": r.cren_product,
        "gap": r.gap,
        "flagged": r.flagged,
    } for r in reps]
    summary = []
    for s in strata:
        sub = [r for r in reps if r.stratum == s]
        if not sub:
            continue
        summary.append({
            "row": "summary",
            "stratum": s,
            "index": len(sub),
            "gap": min(r.gap for r in sub),
            "flagged": sum(r.flagged for r in sub),
        })
    columns = ["row", "stratum", "index", "p", "q", "bound", "product", "gap", "flagged"]
    doc = {"command": "scan", "d": args.d, "samples": args.samples, "seed": args.seed,
           "summary": summary}
    if args.format == "csv":
        _emit(args, doc, rows + summary, columns)
    else:
        _emit(args, doc, rows)
    return EXIT_OK


def _roof(args, direction):
    d = _dim(args, args.schmidt, args.p, args.q)
    rng = np.random.default_rng(args.seed)
    cfg = _opt_cfg(args)
    initial = None
    if args.schmidt is not None:
        lam = parse_vector(args.schmidt, d, rng)
        rho = DensityMatrix.from_pure(state_from_schmidt(lam, d))
        source = {"schmidt": lam}
    else:
        p, q = parse_vector(args.p, d, rng), parse_vector(args.q, d, rng)
        if p is None or q is None:
            raise UsageError("give --schmidt for a pure state, or --p and --q for a swapped state")
        rho = DensityMatrix(swap_density(p, q, d), Dims(d, d))
        source = {"p": p, "q": q, "bound": rde_lower_bound(p, q, d)}
        if direction == "max":
            initial = swap_decomposition(p, q, d)
    est = (estimate_noa if direction == "max" else estimate_cren)(rho, cfg, initial)
    dec = est.decomposition
    doc = {
        "command": "noa" if direction == "max" else "cren",
        "d": d,
        **source,
        "value": est.value,
        "bound_kind": est.bound_kind,
        "negativity_mixed": negativity_mixed(rho),
        "restarts": est.restarts_used,
        "converged": est.converged,
        "restart_values": list(est.restart_values),
        "decomposition_size": len(dec),
        "seed": args.seed,
        "backend": BACKEND,
    }
    if args.format == "csv":
        _emit(args, {k: v for k, v in doc.items() if k != "restart_values"})
    else:
        doc["decomposition"] = [{"weight": w, "state": s.amplitudes}
                                for w, s in zip(dec.weights, dec.states)]
        _emit(args, doc)
    return EXIT_OK


def cmd_noa(args):
    return _roof(args, "max")


def cmd_cren(args):
    return _roof(args, "min")


def _common(p):
    p.add_argument("--d", type=int, help="local dimension")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def _pq(p):
    p.add_argument("--p", help="Schmidt vector of AB: comma list, 'uniform' or 'random'")
    p.add_argument("--q", help="Schmidt vector of CD: comma list, 'uniform' or 'random'")


def build_parser():
    parser = _Parser(prog="entangleswap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("measures", help="negativity of a pure state")
    p.add_argument("--schmidt", help="Schmidt coefficients, comma separated")
    _common(p)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("swap", help="Bell-measurement outcomes and average negativity")
    _pq(p)
    _common(p)
    p.set_defaults(func=cmd_swap)

    p = sub.add_parser("bound", help="swapping bound against the negativity product")
    _pq(p)
    p.add_argument("--random", type=int, metavar="N", help="draw N random pairs")
    _common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="check the bound in the proven cases")
    p.add_argument("mode", choices=("lowdim", "equal", "maxent"))
    _pq(p)
    p.add_argument("--random", type=int, metavar="N", help="check N random instances")
    p.add_argument("--optimize", action="store_true",
                   help="also run the assistance optimizer seeded with the swap ensemble")
    p.add_argument("--restarts", type=int, default=16)
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="sample generic pairs and report gaps")
    p.add_argument("--samples", type=int, default=1000, help="samples per stratum")
    p.add_argument("--strata", help=f"comma list from {','.join(STRATA)}")
    _common(p)
    p.set_defaults(func=cmd_scan)

    for name, fn, what in (("noa", cmd_noa, "lower bound on the negativity of assistance"),
                           ("cren", cmd_cren, "upper bound on the convex-roof negativity")):
        p = sub.add_parser(name, help=what)
        p.add_argument("--schmidt", help="pure state from Schmidt coefficients")
        _pq(p)
        p.add_argument("--restarts", type=int, default=16)
        _common(p)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, EntangleSwapError, ValueError, OSError) as exc:
        print(f"entangleswap: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
