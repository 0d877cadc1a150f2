"""Command-line front end; every subcommand emits versioned JSON rows (or CSV) tagged with the identity they check."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import re
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import acceptance
from .complexgamma import (barnes_first_closed, barnes_first_integral, barnes_second_closed,
                           barnes_second_integral, gamma, log_gamma)
from .errors import Gl3KuzError, PreconditionError, UsageError
from .kernels import k1_kernel, k1_w4_mellin_barnes, verify_combination_proposition
from .kloosterman import audit_bounds, kloosterman, tabulate
from .kltransform import kl_residue_check, smoothed_value, smoothed_value_direct
from .parallel import THREADS_ENV, thread_count
from .stade import (cosmu1, inv_cosmu1_gamma, psi1_closed, psi1_numeric, sinmu1, sinmu1_residue, specmu1,
                    specmu1_quotient)
from .testfunctions import gaussian_test_function, tempered_mu
from .weyl import EF_PRESETS, SpectralRegion, ef_error, elem_bounds_audit, spectral_main_term
from .whittaker import WhittakerGrid, default_whittaker_contour, whittaker_leading

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    rel_tol: float = 1e-10
    contour_height_override: float | None = None
    nodes: int | None = None
    threads: int = 1
    output_format: str = "json"
    seed: int = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str, count: int | None = None) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} comma-separated numbers, got {text!r}")
    return vals


def _ints(text: str, count: int) -> tuple:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc
    if len(vals) != count:
        raise UsageError(f"expected {count} integers, got {text!r}")
    return vals


def _complexes(text: str) -> tuple:
    try:
        return tuple(complex(v.replace("i", "j")) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated complex numbers, got {text!r}") from exc


def _mu(text: str) -> np.ndarray:
    # two imaginary parts; the third coordinate is fixed by the sum-zero condition
    x1, x2 = _floats(text, 2)
    return tempered_mu(x1, x2)


def _whittaker_contour(mu, config: RunConfig):
    ctl = default_whittaker_contour(mu, config.rel_tol)
    if config.contour_height_override is not None:
        spacing = ctl.spacing(0)
        height = config.contour_height_override
        ctl = dataclasses.replace(ctl, height=height, nodes=int(np.ceil(2 * height / spacing)) + 1)
    if config.nodes is not None:
        ctl = dataclasses.replace(ctl, nodes=config.nodes)
    return ctl


# subcommands: each returns (rows, passed)

def cmd_gamma(args, config):
    rows = []
    for z in _complexes(args.z):
        rows.append({"anchor": "complex-gamma", "z": z, "log_gamma": complex(log_gamma(z)), "gamma": complex(gamma(z))})
    return rows, True


def cmd_barnes(args, config):
    p = _complexes(args.params)
    if args.lemma == "first":
        if len(p) != 4:
            raise UsageError("first lemma takes a,b,c,d")
        closed, numeric = barnes_first_closed(*p), barnes_first_integral(*p)
    else:
        if len(p) == 5:
            p = p + (sum(p),)
        if len(p) != 6:
            raise UsageError("second lemma takes a,b,c,d,e[,f]")
        closed, numeric = barnes_second_closed(*p), barnes_second_integral(*p)
    residual = abs(numeric.value - closed) / abs(closed)
    return [{"anchor": f"barnes-{args.lemma}-lemma", "params": list(p), "closed": closed, "numeric": numeric.value,
             "tail": numeric.tail, "residual": residual}], True


def cmd_whittaker(args, config):
    mu = _mu(args.mu)
    grid = WhittakerGrid(mu, _whittaker_contour(mu, config))
    rows = []
    for y in args.y:
        yy = _floats(y, 2)
        w = grid(yy)
        row = {"anchor": "whittaker-mellin-barnes", "mu": mu, "y": list(yy), "w1star": list(w)}
        if args.leading:
            lead = whittaker_leading(yy, mu)
            row["leading"] = list(lead)
            row["relative_error"] = float(np.linalg.norm(w - lead) / np.linalg.norm(lead))
        rows.append(row)
    return rows, True


def cmd_stade(args, config):
    mu, mup = _mu(args.mu), _mu(args.mu_prime)
    rows = []
    for t in _floats(args.t):
        closed = psi1_closed(mu, mup, t)
        numeric = psi1_numeric(mu, mup, t, ctl=_whittaker_contour(mu, config))
        rows.append({"anchor": "stade-formula", "mu": mu, "mu_prime": mup, "t": t, "closed": closed,
                     "numeric": numeric, "residual": abs(numeric - closed) / abs(closed)})
    return rows, True


def cmd_measures(args, config):
    mu = _mu(args.mu)
    return [{"anchor": "spectral-measures", "mu": mu, "cosmu1": cosmu1(mu), "inv_cosmu1_gamma": inv_cosmu1_gamma(mu),
             "sinmu1": sinmu1(mu), "sinmu1_residue": sinmu1_residue(mu), "specmu1": specmu1(mu),
             "specmu1_quotient": specmu1_quotient(mu)}], True


def cmd_kloosterman(args, config):
    if args.audit is not None:
        report = audit_bounds(args.audit)
        return [{"anchor": "kloosterman-bounds", **report.as_dict()}], True
    if args.table:
        cs = [(c1, c2) for c1 in range(1, args.cmax + 1) for c2 in range(1, args.cmax + 1)]
        rows = tabulate(args.w, [_ints(args.m, 2)], [_ints(args.n, 2)], cs)
        keys = ("w", "m1", "m2", "n1", "n2", "c1", "c2", "re", "im", "term_count")
        return [dict(zip(keys, r)) for r in rows], True
    val = kloosterman(args.w, _ints(args.m, 2), _ints(args.n, 2), _ints(args.c, 2))
    return [{"anchor": "kloosterman-sum", "w": args.w, "m": list(_ints(args.m, 2)), "n": list(_ints(args.n, 2)),
             "c": list(_ints(args.c, 2)), "value": val.value, "term_count": val.term_count}], True


def cmd_kernels(args, config):
    mu = _mu(args.mu)
    y = _floats(args.y, 2)
    if args.case is not None:
        residual = verify_combination_proposition(args.case, y, mu)
        return [{"anchor": f"kernel-combination-{args.case}", "mu": mu, "y": list(y), "residual": residual}], True
    row = {"anchor": "kernel", "w": args.w, "mu": mu, "y": list(y), "value": k1_kernel(args.w, y, mu)}
    if args.w == "w4":
        mb = k1_w4_mellin_barnes(y[0], mu)
        row["mellin_barnes"] = mb
        row["residual"] = abs(mb - row["value"]) / abs(row["value"])
    return [row], True


def cmd_kl_invert(args, config):
    F = gaussian_test_function(_floats(args.center, 2), args.width)
    mu = _mu(args.mu)
    rows = []
    for eps in _floats(args.eps):
        if args.route == "direct":
            value = smoothed_value_direct(F, mu, eps)
            rows.append({"anchor": "kl-inversion", "route": "direct", "mu": mu, "eps": eps, "smoothed": value,
                         "target": complex(F(mu))})
            continue
        res = kl_residue_check(F, mu, eps)
        parts = smoothed_value(F, mu, eps)
        rows.append({"anchor": "kl-inversion", "route": "decomposition", "mu": mu, "eps": eps,
                     "smoothed": res.smoothed, "target": res.target, "residual": res.residual,
                     "symmetrized_target": res.symmetrized_target,
                     "symmetrized_residual": res.symmetrized_residual, "shifted": parts.shifted,
                     "mixed": parts.mixed, "double_residues": parts.double_residues})
    return rows, True


def cmd_weyl(args, config):
    rows = []
    if args.ef is not None:
        F = gaussian_test_function(_floats(args.center, 2), args.width)
        for r in (EF_PRESETS if args.ef == 0 else [args.ef]):
            s, t = EF_PRESETS[r]
            rows.append({"anchor": "error-functional", "row": r, "s": list(s), "t": list(t),
                         "value": ef_error(F, s, t)})
        return rows, True
    if args.elem_sweep:
        report = elem_bounds_audit([(0.0, g, 3.0 * g) for g in (1, 2, 4, 8, 16, 32, 64)])
        for row in report["rows"]:
            rows.append({"anchor": "elementary-bounds", "v": list(row.v), "lhs": list(row.lhs),
                         "rhs": list(row.rhs), "ratio": list(row.ratio)})
        return rows, True
    Ts = _floats(args.T)
    if args.ball is not None:
        region = SpectralRegion.ball(_floats(args.ball, 2), 1.0, T=Ts[0])
        prev = None
        for M in _floats(args.M):
            val = spectral_main_term(region.with_radius(M), args.with_constant)
            rows.append({"anchor": "weyl-main-term-ball", "T": Ts[0], "M": M, "value": val,
                         "ratio": val / prev if prev else None})
            prev = val
        return rows, True
    lo, hi = _floats(args.box, 2)
    region = SpectralRegion.from_box((lo, hi, lo, hi))
    prev = None
    for T in Ts:
        val = spectral_main_term(region.scaled(T), args.with_constant)
        rows.append({"anchor": "weyl-main-term-box", "T": T, "value": val, "ratio": val / prev if prev else None})
        prev = val
    return rows, True


def cmd_verify_all(args, config, log):
    numbers = _ints(args.criteria, len(args.criteria.split(","))) if args.criteria else None
    results = acceptance.run_acceptance(config.seed, config.threads, numbers, log=log, slow=args.slow)
    report = acceptance.serialize(results, config.seed)
    return report, all(r.passed for r in results), results


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")
    common.add_argument("--rel-tol", type=float, default=1e-10)
    common.add_argument("--contour-height", type=float, default=None)
    common.add_argument("--nodes", type=int, default=None)

    parser = _Parser(prog="gl3kuz", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("gamma", parents=[common], help="complex log-gamma and gamma")
    p.add_argument("--z", required=True, help="comma-separated complex arguments, e.g. 0.5+2j,3")
    p = sub.add_parser("barnes", parents=[common], help="Barnes lemma closed form vs contour integral")
    p.add_argument("--lemma", choices=("first", "second"), default="first")
    p.add_argument("--params", required=True)
    p = sub.add_parser("whittaker", parents=[common], help="weight-one Whittaker vector")
    p.add_argument("--mu", required=True, help="imaginary parts of mu1,mu2")
    p.add_argument("--y", action="append", required=True, help="y1,y2 (repeatable)")
    p.add_argument("--leading", action="store_true")
    p = sub.add_parser("stade", parents=[common], help="Stade integral, numeric vs closed")
    p.add_argument("--mu", required=True)
    p.add_argument("--mu-prime", required=True)
    p.add_argument("--t", default="1")
    p = sub.add_parser("measures", parents=[common], help="spectral measures by both routes")
    p.add_argument("--mu", required=True)
    p = sub.add_parser("kloosterman", parents=[common], help="exact Kloosterman sums")
    p.add_argument("--w", default="wl")
    p.add_argument("--m", default="1,1")
    p.add_argument("--n", default="1,1")
    p.add_argument("--c", default="1,1")
    p.add_argument("--audit", type=int, default=None, metavar="C")
    p.add_argument("--table", action="store_true")
    p.add_argument("--cmax", type=int, default=5)
    p = sub.add_parser("kernels", parents=[common], help="Kuznetsov kernels and their cross-checks")
    p.add_argument("--w", default="wl")
    p.add_argument("--y", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--case", type=int, choices=(1, 2, 3, 4), default=None)
    p = sub.add_parser("kl-invert", parents=[common], help="smoothed Kontorovich-Lebedev inversion")
    p.add_argument("--mu", required=True)
    p.add_argument("--eps", default="0.001")
    p.add_argument("--route", choices=("decomposition", "direct"), default="decomposition")
    p.add_argument("--center", default="0.5,-0.2")
    p.add_argument("--width", type=float, default=1.0)
    p = sub.add_parser("weyl", parents=[common], help="Weyl-law main terms and error functionals")
    p.add_argument("--box", default="0.5,1.5")
    p.add_argument("--T", default="8,16")
    p.add_argument("--ball", default=None, help="center x1,x2 of a ball region")
    p.add_argument("--M", default="1,2")
    p.add_argument("--with-constant", action="store_true")
    p.add_argument("--ef", type=int, choices=(0, 1, 2, 3, 4), default=None, help="E_F preset row (0 = all)")
    p.add_argument("--center", default="0.5,-0.2")
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--elem-sweep", action="store_true")
    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    p.add_argument("--criteria", default=None, help="comma-separated subset of 1..9")
    p.add_argument("--slow", action="store_true", help="include the Kontorovich-Lebedev round-trip smoke test")
    return parser


_COMMANDS = {"gamma": cmd_gamma, "barnes": cmd_barnes, "whittaker": cmd_whittaker, "stade": cmd_stade,
             "measures": cmd_measures, "kloosterman": cmd_kloosterman, "kernels": cmd_kernels,
             "kl-invert": cmd_kl_invert, "weyl": cmd_weyl}


def _flatten(row: dict) -> dict:
    out = {}
    for k, v in acceptance.canonical(row).items():
        out[k] = json.dumps(v) if isinstance(v, (list, dict)) else v
    return out


def _render(command: str, rows: list, fmt: str) -> str:
    if fmt == "json":
        payload = {"schema_version": acceptance.SCHEMA_VERSION, "command": command,
                   "rows": acceptance.canonical(rows)}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    flat = [_flatten(r) for r in rows]
    header = list(dict.fromkeys(k for r in flat for k in r))
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_NEGATIVE_VALUE = re.compile(r"^-\d|^-\.\d")


def _attach_negative_values(argv: list) -> list:
    # "--mu-prime -0.8,-0.3" would otherwise be parsed as an unknown option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None) -> int:
    def log(msg):
        print(msg, file=sys.stderr)

    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = _build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        config = RunConfig(args.rel_tol, args.contour_height, args.nodes, thread_count(args.threads), args.format,
                           args.seed)
        t0 = time.perf_counter()
        if args.command == "verify-all":
            report, passed, results = cmd_verify_all(args, config, log)
            if config.output_format == "csv":
                rows = [{k: v for k, v in r.as_dict().items() if k != "rows"} for r in results]
                text = _render("verify-all", rows, "csv")
            else:
                text = report + "\n"
        else:
            rows, passed = _COMMANDS[args.command](args, config)
            text = _render(args.command, rows, config.output_format)
        _emit(text, args.out)
        log(f"{args.command}: {time.perf_counter() - t0:.2f} s")
        return EXIT_OK if passed else EXIT_FAILED
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Gl3KuzError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
