"""Command-line front end: ``residue-audit VERB [options]``.

Exit status: 0 when every requested comparison matches exactly, 1 on a
mismatch (the report says which side the numeric oracle supports), 2 on a
usage error, 3 when the engine disagrees with its own oracle.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from .dsl import DSLError, format_symbol, parse_symbol
from .exact import Poly
from .expected import PaperExpected
from .gform import format_value
from .oracle import OracleConfig, compare_case
from .pipeline import audit, boundary_case, find_case, interior_term, theorem_report
from .reports import EngineInconsistency, VerificationReport, reports_to_json
from .symbols import SymbolError, trace_symbol

__all__ = ["main", "emit_latex", "build_parser"]

_SETTING_OF_DIM = {4: "DIM4_DINV", 6: "DIM6_DM2"}
_OPERATOR_LATEX = {
    "DIM4_DINV": "\\pi^+(LD^{-1})\\circ\\pi^+(D^{-1})",
    "DIM6_DM2": "\\pi^+(LD^{-2})\\circ\\pi^+(D^{-2})",
}


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="residue-audit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, need_l=True):
        sp.add_argument("--dim", type=int, choices=(4, 6), default=4)
        if need_l:
            sp.add_argument("--l", type=int, required=True)
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true")
        fmt.add_argument("--latex", action="store_true")

    def oracle_opts(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--tol", type=float, default=1e-6)
        sp.add_argument("--contour-samples", type=int, default=4096)

    v = sub.add_parser("verify", help="compare boundary cases, total and interior term")
    common(v)
    v.add_argument("--case", choices=("aI", "aII", "aIII", "b", "c"))
    v.add_argument("--expected", help="JSON file of overrides for the reference table")
    oracle_opts(v)

    i = sub.add_parser("interior", help="interior term")
    common(i)
    i.add_argument("--expected", help="JSON file of overrides for the reference table")

    t = sub.add_parser("trace", help="trace of a Clifford expression")
    t.add_argument("expr")
    t.add_argument("--dim", type=int, choices=(4, 6), default=4)

    e = sub.add_parser("eval", help="evaluate a symbol expression")
    e.add_argument("expr")
    e.add_argument("--dim", type=int, choices=(4, 6), default=4)

    o = sub.add_parser("oracle", help="numeric replay against the symbolic value")
    common(o)
    o.add_argument("--case", choices=("aI", "aII", "aIII", "b", "c"))
    oracle_opts(o)

    r = sub.add_parser("report", help="full audit with checkpoints and theorem statement")
    common(r)
    r.add_argument("--expected", help="JSON file of overrides for the reference table")
    oracle_opts(r)
    return p


def _setting(args) -> str:
    setting = _SETTING_OF_DIM[args.dim]
    if hasattr(args, "l") and not 1 <= args.l <= args.dim:
        raise UsageError(f"--l must lie in 1..{args.dim}")
    if getattr(args, "trials", 1) < 1:
        raise UsageError("--trials must be positive")
    if getattr(args, "tol", 1.0) <= 0:
        raise UsageError("--tol must be positive")
    return setting


def _cfg(args) -> OracleConfig:
    return OracleConfig(seed=args.seed, trials=args.trials, case_tol=args.tol,
                        contour_samples=args.contour_samples)


def _expected(args) -> PaperExpected:
    path = getattr(args, "expected", None)
    return PaperExpected.from_overrides_file(path) if path else PaperExpected()


def _describe(rep: VerificationReport) -> str:
    n = rep.n or (4 if rep.setting.startswith("DIM4") else 6)
    if rep.kind == "poly" and rep.l is not None:
        computed = format_value(rep.computed, n, rep.l)
        expected = format_value(rep.expected, n, rep.l) if rep.expected is not None else "-"
    else:
        computed, expected = str(rep.computed), str(rep.expected)
    status = "match" if rep.exact_match else "MISMATCH"
    lines = [f"[{status}] {rep.setting} l={rep.l} {rep.case} ({rep.tag})", f"  engine:   {computed}"]
    if not rep.exact_match:
        lines.append(f"  expected: {expected}")
        if rep.oracle_value is not None:
            lines.append(
                f"  oracle (seed {rep.seed}): {rep.oracle_value:.10g}  engine {rep.oracle_engine:.10g}"
                + (f"  expected {rep.oracle_expected:.10g}" if rep.oracle_expected is not None else "")
            )
        if rep.note:
            lines.append(f"  note: {rep.note}")
    return "\n".join(lines)


def emit_latex(reports: Sequence[VerificationReport]) -> str:
    """Derived theorem displays, one per (setting, l), from engine values."""
    groups: dict = {}
    for rep in reports:
        if rep.kind != "poly":
            continue
        groups.setdefault((rep.setting, rep.l), {})[rep.case] = rep
    out = []
    for (setting, l), reps in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)):
        interior = reps.get("INTERIOR") or reps.get("THEOREM_INTERIOR")
        boundary = reps.get("TOTAL") or reps.get("THEOREM_BOUNDARY")
        if interior is None or boundary is None:
            continue
        n = 4 if setting.startswith("DIM4") else 6
        lhs = f"\\widetilde{{\\rm Wres}}[{_OPERATOR_LATEX[setting]}]"
        parts = []
        if not interior.computed.is_zero():
            parts.append(f"\\int_M\\Big({format_value(interior.computed, n, l, latex=True)}\\Big)d{{\\rm Vol}}_M")
        if not boundary.computed.is_zero():
            parts.append(f"\\int_{{\\partial M}}\\Big({format_value(boundary.computed, n, l, latex=True)}\\Big)dx'")
        rhs = " + ".join(parts) if parts else "0"
        out.append(f"% l = {l}\n\\begin{{equation}}\n{lhs} = {rhs}\n\\end{{equation}}")
    return "\n".join(out) + ("\n" if out else "")


def _emit(args, reports: list[VerificationReport], out) -> None:
    if args.json:
        out.write(reports_to_json(reports) + "\n")
    elif args.latex:
        out.write(emit_latex(reports))
    else:
        out.write("\n".join(_describe(r) for r in reports) + "\n")


def _max_vector_index(expr: str) -> int:
    found = [int(m) for m in re.findall(r"X(\d+)", expr)]
    return max(found, default=0)


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.verb in ("trace", "eval"):
            sym = parse_symbol(args.expr, args.dim)
            if args.verb == "eval":
                out.write(format_symbol(sym) + "\n")
                return 0
            t = trace_symbol(sym)
            if t.p or t.q or t.degree() > 0:
                out.write(format_symbol(t) + "\n")
                return 0
            value = t.num[0].scalar_part() if t.num else Poly()
            l = _max_vector_index(args.expr)
            unit = Poly.const(2 ** (args.dim // 2))
            out.write(format_value(value, args.dim, l, unit=unit) + "\n")
            return 0
        setting = _setting(args)
        if args.verb == "interior":
            e = _expected(args).get(setting, "INTERIOR", args.l)
            rep = VerificationReport.compare(setting, args.l, "INTERIOR", interior_term(setting, args.l),
                                             e.value, tag=e.tag)
            if not rep.exact_match:
                from .oracle import adjudicate_interior

                adjudicate_interior(rep, setting, args.l, OracleConfig())
            _emit(args, [rep], out)
            return 0 if rep.exact_match else 1
        if args.verb == "oracle":
            cfg = _cfg(args)
            labels = [args.case] if args.case else ["aI", "aII", "aIII", "b", "c"]
            worst = 0.0
            lines = []
            for label in labels:
                value = boundary_case(setting, find_case(setting, label), args.l)
                pairs = compare_case(setting, label, args.l, value, cfg)
                err = max(abs(o - s) / (1 + abs(s)) for s, o in pairs)
                worst = max(worst, err)
                lines.append(f"{setting} l={args.l} {label}: {len(pairs)} trials, seed {cfg.seed}, "
                             f"max relative error {err:.3e}")
            out.write("\n".join(lines) + "\n")
            return 0 if worst <= cfg.case_tol else 3
        cfg = _cfg(args)
        expected = _expected(args)
        labels = [args.case] if getattr(args, "case", None) else None
        reports = audit(setting, args.l, cfg, expected, labels=labels, checkpoints=args.verb == "report")
        if args.verb == "report":
            th = theorem_report(setting, args.l, expected)
            for rep in th.components:
                if not rep.exact_match:
                    if rep.case == "THEOREM_INTERIOR":
                        from .oracle import adjudicate_interior

                        adjudicate_interior(rep, setting, args.l, cfg)
                    else:
                        from .oracle import adjudicate_case

                        rep.case = "TOTAL"
                        adjudicate_case(rep, setting, args.l, cfg)
                        rep.case = "THEOREM_BOUNDARY"
            reports.extend(th.components)
        _emit(args, reports, out)
        return 0 if all(r.exact_match for r in reports) else 1
    except UsageError as exc:
        print(f"residue-audit: error: {exc}", file=sys.stderr)
        return 2
    except DSLError as exc:
        print(f"residue-audit: {exc}", file=sys.stderr)
        return 2
    except EngineInconsistency as exc:
        print(f"residue-audit: internal inconsistency: {exc}", file=sys.stderr)
        return 3
    except (SymbolError, KeyError, ValueError) as exc:
        print(f"residue-audit: error: {exc}", file=sys.stderr)
        return 2


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
