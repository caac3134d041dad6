"""Command line front end: ``nochkalab <subcommand> ...``.

Exit status: 0 success, 1 invalid input or usage, 2 failed internal check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import catalog
from .config import load_document, parse_config
from .errors import InternalCheckError, NochkaLabError, ValidationError
from .harness import PointFamily, dumps, log_cell, proof_trace, rows_to_csv, run_inequality_experiment
from .heights import proximity_counting
from .incidence import DEFAULT_NODE_CAP, structure_for
from .nochka import (DirectCase, admissible_max_subset, b_coefficient, chebyshev_min_bound,
                     ChebyshevInstance, low_dim_weights, nochka_diagram, verify_nochka_property)
from .position import analyze
from .poly import ProjectivePoint
from .rational import DEFAULT_FACTOR_LIMIT, format_fraction


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def _load(args):
    cfg, places = parse_config(_read(args.config))
    struct = structure_for(cfg, args.node_cap)
    return cfg, places, struct


def _read_points(path: str, n: int) -> list[ProjectivePoint]:
    try:
        doc = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc.msg}") from None
    if isinstance(doc, dict):
        doc = doc.get("points")
    if not isinstance(doc, list) or not doc:
        raise ValidationError("points file must be a nonempty JSON array of coordinate arrays")
    pts = []
    for p in doc:
        if not isinstance(p, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in p):
            raise ValidationError(f"point {p!r} must be an array of integers")
        if len(p) != n + 1:
            raise ValidationError(f"point {p!r} must have {n + 1} coordinates")
        pts.append(ProjectivePoint(tuple(p)))
    return pts


# ---------------------------------------------------------------------------


def cmd_analyze(args) -> str:
    cfg, _, struct = _load(args)
    rep = analyze(struct, cfg)
    if args.json:
        doc = rep.to_json()
        if args.lattice:
            doc["lattice"] = struct.to_json()
        return dumps(doc)
    rows = [("invariant", "value", "witness"),
            ("m", str(rep.m_min), rep.m_min_witness or "-"),
            ("m (unweighted)", str(rep.m_unweighted), "-"),
            ("kappa", str(rep.kappa), rep.kappa_witness or "-"),
            ("delta", str(rep.delta), rep.delta_witness or "-"),
            ("max alpha/codim", str(rep.max_ratio), rep.max_ratio_witness or "-"),
            ("bezout", "ok" if rep.bezout_ok else "violated",
             " & ".join(rep.bezout_violation) if rep.bezout_violation else "-")]
    text = _table(rows) + "\ncoefficients\n" + _table([(k, str(v)) for k, v in rep.menu.items()])
    if args.lattice:
        text += "\nlattice\n" + _table([("label", "codim", "contains")] + [
            (f.label, str(f.codim), "".join("1" if b else "0" for b in f.contains)) for f in struct.nodes])
    return text


def cmd_weights(args) -> str:
    cfg, _, struct = _load(args)
    rep = analyze(struct, cfg)
    m = args.m if args.m is not None else rep.m_min
    diagram = nochka_diagram(struct, cfg, m)
    doc = {"m": m, "n": cfg.n, "diagram": diagram.to_json()}
    if cfg.n <= 3 and all(e.has_irreducible_support for e in cfg.entries):
        w = low_dim_weights(struct, cfg, m)
        doc["weights"] = w.to_json()
        if not isinstance(w, DirectCase):
            ok, bad = verify_nochka_property(struct, cfg, w.omega)
            if not ok:
                raise InternalCheckError(f"constructed weights violate the Nochka property at {bad}")
            doc["weights"]["nochka_property"] = ok
            doc["weights"]["B_recomputed"] = format_fraction(b_coefficient(cfg, w.omega))
    else:
        doc["weights"] = None
    if args.json:
        return dumps(doc)
    lines = [f"m = {m}, n = {cfg.n}"]
    if diagram.trivial:
        lines.append("diagram: trivial (ratio bound already gives 2m-n+1)")
    else:
        lines.append(f"diagram: W0 = {diagram.w0}, sigma = {diagram.sigma}, alpha(W0) = {diagram.alpha_w0}")
    w = doc["weights"]
    if w is None:
        lines.append("weights: not constructed (needs n <= 3 and irreducible supports)")
    elif w.get("direct"):
        lines.append(f"weights: direct case ({w['reason']}), c = {w['c']}, threshold {w['threshold']}")
    else:
        lines.append("omega = (" + ", ".join(w["omega"]) + ")")
        lines.append(f"tau = {w['tau']}, B = {w['B']}, W0 = {w['w0']}, property: {w['nochka_property']}")
    return "\n".join(lines) + "\n"


def cmd_heights(args) -> str:
    cfg, places = parse_config(_read(args.config))
    pts = _read_points(args.points, cfg.n)
    bds = [proximity_counting(cfg, places, p, args.factor_limit) for p in pts]
    if args.json:
        return dumps({"places": places.to_json(), "points": [b.to_json() for b in bds]})
    rows = []
    for b in bds:
        for d in b.divisors:
            rows.append(([str(b.point), d.label],
                         [log_cell(b.h), log_cell(d.m_S), log_cell(d.N_S), log_cell(d.total)],
                         [f"{b.h.to_real():.6g}", f"{d.m_S.to_real():.6g}", f"{d.N_S.to_real():.6g}",
                          f"{d.total.to_real():.6g}"]))
    return rows_to_csv(["point", "divisor"], ["h", "m_S", "N_S", "total"],
                       ["h_float", "m_S_float", "N_S_float", "total_float"], rows)


def cmd_experiment(args) -> str:
    cfg, places, struct = _load(args)
    family = PointFamily.from_dict(load_document(_read(args.family)))
    rep = run_inequality_experiment(cfg, places, family, args.factor_limit, struct)
    if args.json:
        return dumps(rep.to_json())
    return rep.to_csv()


def cmd_trace(args) -> str:
    cfg, places, struct = _load(args)
    if args.point:
        try:
            coords = [int(x) for x in args.point.replace("[", "").replace("]", "").replace(":", ",").split(",")]
        except ValueError:
            raise ValidationError(f"cannot parse point {args.point!r}") from None
        if len(coords) != cfg.n + 1:
            raise ValidationError(f"point must have {cfg.n + 1} coordinates")
        pts = [ProjectivePoint(tuple(coords))]
    elif args.points:
        pts = _read_points(args.points, cfg.n)
    else:
        raise ValidationError("give --point or --points")
    traces = [proof_trace(cfg, places, p, struct) for p in pts]
    if args.json:
        return dumps({"traces": [t.to_json() for t in traces]})
    rows = [("point", "place", "order", "codims", "m_v", "factor", "cap")]
    for t in traces:
        for pt in t.places:
            rows.append((str(t.point), str(pt.place), " ".join(pt.order),
                         ",".join(map(str, pt.chain)), str(pt.m_v), str(pt.factor), str(pt.ratio_cap)))
    return _table(rows)


def selftest_checks() -> list[tuple[str, bool]]:
    """Built-in examples with known exact answers."""
    out = []
    cfg = catalog.five_lines()
    s = structure_for(cfg)
    rep = analyze(s, cfg)
    out.append(("five lines: m=4, kappa=2, delta=2, ratio=2",
                (rep.m_min, rep.kappa, rep.delta, rep.max_ratio) == (4, 2, 2, 2)))
    out.append(("five lines: coefficient menu",
                list(rep.menu.values()) == [7, Fraction(21, 2), 9, 6, 6, 6, 6]))
    out.append(("five lines: admissible subset, Delta=1",
                admissible_max_subset(s, cfg, 1, [1] * 5).total == 3))
    cfg = catalog.weighted_p2()
    s = structure_for(cfg)
    d = nochka_diagram(s, cfg, 4)
    w = low_dim_weights(s, cfg, 4)
    out.append(("weighted P2: W0 = V(x0), sigma = 1/2", (d.w0, d.sigma) == ("V(x0)", Fraction(1, 2))))
    out.append(("weighted P2: omega, tau, B",
                not isinstance(w, DirectCase)
                and w.omega == (Fraction(1, 3), Fraction(1, 2), Fraction(1, 2)) and w.B == 7
                and verify_nochka_property(s, cfg, w.omega)[0]))
    b = chebyshev_min_bound(ChebyshevInstance.of([3, 2, 1], [1, 0, 2], [1, 1, 1]))
    out.append(("Chebyshev min bound 1/2 at j=2", (b.bound, b.j) == (Fraction(1, 2), 2)))
    cfg = catalog.sharpness(2, 1)
    places, fam = catalog.sharpness_family(2, 1, 1, 10)
    er = run_inequality_experiment(cfg, places, fam)
    out.append(("sharpness n=2, r=1: every ratio is 3", all(r.ratio == 3 for r in er.rows)))
    for p in (r.point for r in er.rows):
        proof_trace(cfg, places, p)
    out.append(("sharpness n=2, r=1: proof traces verify", True))
    return out


def cmd_selftest(args) -> str:
    checks = selftest_checks()
    if args.json:
        text = dumps({"checks": [{"name": n, "ok": ok} for n, ok in checks]})
    else:
        text = "".join(f"{'PASS' if ok else 'FAIL'}  {n}\n" for n, ok in checks)
    if not all(ok for _, ok in checks):
        sys.stdout.write(text)
        raise InternalCheckError("self test failed")
    return text


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nochkalab", description="Position invariants, Nochka weights and height "
                                              "experiments for weighted hypersurface configurations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, config=True, csv=False):
        if config:
            sp.add_argument("config", help="configuration JSON file")
            sp.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
        sp.add_argument("--json", action="store_true", help="emit JSON")
        if csv:
            sp.add_argument("--csv", action="store_true", help="emit CSV (default)")
        sp.add_argument("--out", metavar="FILE", help="write output to FILE")

    sp = sub.add_parser("analyze", help="position invariants and coefficient table")
    common(sp)
    sp.add_argument("--lattice", action="store_true", help="include the lattice nodes")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("weights", help="Nochka diagram and low-dimensional weights")
    common(sp)
    sp.add_argument("--m", type=int, help="subgeneral position index (default: minimal m)")
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("heights", help="local heights, m_S and N_S at given points")
    common(sp, csv=True)
    sp.add_argument("--points", required=True, metavar="FILE", help="JSON array of integer coordinate arrays")
    sp.add_argument("--factor-limit", type=int, default=DEFAULT_FACTOR_LIMIT)
    sp.set_defaults(func=cmd_heights)

    sp = sub.add_parser("experiment", help="LHS/h ratios over a point family")
    common(sp, csv=True)
    sp.add_argument("--family", required=True, metavar="FILE", help="family description (JSON)")
    sp.add_argument("--factor-limit", type=int, default=DEFAULT_FACTOR_LIMIT)
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("trace", help="replay the proof step by step at given points")
    common(sp)
    sp.add_argument("--point", help="coordinates, e.g. 3,1,1048576")
    sp.add_argument("--points", metavar="FILE")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("selftest", help="run the built-in example suite")
    common(sp, config=False)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "json", False) and getattr(args, "csv", False):
            raise _UsageError("choose one of --json and --csv")
        text = args.func(args)
        _emit(text, args.out)
        return 0
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NochkaLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())
