"""Command-line front end.

Exit status: 0 on success, 2 when an input is rejected (diagnostics go to
stderr as JSON), 1 on an internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import betamap, lift, offsets, subst1d, tiling2d
from .field import AlgebraicNumber, FieldError, is_pisot

DIGITS = 12


class InputError(Exception):
    def __init__(self, message: str, *, file: str | None = None, field: str | None = None):
        super().__init__(message)
        self.file = file
        self.field = field


# -- input --------------------------------------------------------------------


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    packaged = resources.files("betatiling") / "data" / path
    if packaged.is_file():
        return Path(str(packaged))
    raise InputError(f"no such file: {path}", file=path)


def _load_json(path: str):
    p = _resolve(path)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", file=path) from None


def _load_subst(path: str) -> subst1d.Substitution1D:
    data = _load_json(path)
    if not isinstance(data, dict) or "alphabet" not in data:
        raise InputError("not a substitution file (expected 'alphabet' and 'rules')", file=path)
    try:
        return subst1d.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(str(exc), file=path) from None


def _load_rule(path: str) -> tiling2d.RectRule2D:
    data = _load_json(path)
    if not isinstance(data, dict) or "prototiles" not in data:
        raise InputError("not a rule file (expected 'polynomial', 'prototiles', 'placements')", file=path)
    try:
        return tiling2d.rule_from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(str(exc), file=path) from None


def parse_point(text: str, field, *, flag: str = "--point") -> AlgebraicNumber:
    """``"[-1/1, 1/1]"`` or a single rational ``"1/2"``."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [s.strip().strip('"').strip("'") for s in body.split(",") if s.strip()]
    try:
        coeffs = [Fraction(s) for s in parts]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse algebraic literal {text!r}", field=flag) from None
    if len(coeffs) == 1:
        coeffs += [Fraction(0)] * (field.degree - 1)
    if len(coeffs) != field.degree:
        raise InputError(f"literal needs {field.degree} coefficients, got {len(coeffs)}", field=flag)
    return AlgebraicNumber(field, coeffs)


def _lit(v: AlgebraicNumber) -> dict:
    return {"exact": v.to_literal(), "approx": v.approx(DIGITS)}


def _emit(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- commands -----------------------------------------------------------------


def cmd_analyze(args) -> str:
    sub = _load_subst(args.file)
    K = sub.field
    verdict = is_pisot(K)
    conj = []
    for i in range(2, K.degree + 1):
        bx = K.root_box(i, 64)
        mod = verdict.moduli[i]
        conj.append(
            {
                "index": i,
                "approx": {"re": f"{float(bx.re.mid):.12g}", "im": f"{float(bx.im.mid):.12g}"},
                "modulus_enclosure": [f"{mod.lo.numerator}/{mod.lo.denominator}", f"{mod.hi.numerator}/{mod.hi.denominator}"],
                "modulus_approx": f"{float(mod.mid):.12g}",
            }
        )
    t = betamap.from_substitution(sub)
    rep = {
        "alphabet": list(sub.alphabet),
        "rules": {a: list(sub.rule[a]) for a in sub.alphabet},
        "structure_matrix": [list(r) for r in sub.matrix],
        "matrix_class": subst1d.classify_matrix(sub).value,
        "polynomial": {"coefficients": list(K.poly), "display": K.poly_str()},
        "beta": _lit(K.beta),
        "conjugates": conj,
        "pisot": verdict.is_pisot,
        "pisot_verdict": verdict.kind.value,
        "heights": {a: _lit(h) for a, h in zip(sub.alphabet, sub.heights)},
        "E": {"start": _lit(K.zero), "end": _lit(t.B)},
    }
    return _emit(rep)


def cmd_betamap(args) -> str:
    sub = _load_subst(args.file)
    t = betamap.from_substitution(sub)
    rep = betamap.to_report(t, DIGITS)
    rep["violations"] = [{"code": v.code, "message": v.message, "branch": v.branch} for v in betamap.validate(t)]
    if args.point is not None:
        x = parse_point(args.point, sub.field)
        try:
            sym, y = betamap.central_tile_step(t, x)
        except betamap.OutOfDomain as exc:
            raise InputError(str(exc), field="--point") from None
        rep["step"] = {"x": _lit(x), "branch": t.branch_index(x), "F(x)": _lit(y), "symbol": sym}
    return _emit(rep)


def _thresholds(m: lift.LiftedMap, name: str):
    if name == "minimal":
        return None
    if name == "eigen":
        if m.field.degree != 2 or 2 not in lift.expanding_conjugates(m.field):
            raise InputError("the eigen preset needs a quadratic field with an expanding conjugate", field="--threshold")
        return {2: lift.eigen_scaled_threshold(m, 2)}
    raise InputError(f"unknown threshold {name!r}", field="--threshold")


def _run_orbit(m, x, budget, thresholds):
    try:
        return lift.orbit(m, x, budget, thresholds)
    except betamap.OutOfDomain as exc:
        raise InputError(str(exc), field="--point") from None


def cmd_orbit(args) -> str:
    sub = _load_subst(args.file)
    m = lift.lift_map(betamap.from_substitution(sub))
    x = parse_point(args.point, sub.field)
    out = _run_orbit(m, x, args.max_iter, _thresholds(m, args.threshold))
    rep = {"point": _lit(x)}
    rep.update(lift.outcome_report(m, out, args.prefix))
    rep["symbols"] = [m.base.symbol_at(m.value(w)) for w in out.prefix[: args.prefix]]
    return _emit(rep)


def _random_seeds(t: betamap.BetaTransform, n: int, q: int, coeff_bound: int, seed: int) -> list[AlgebraicNumber]:
    """Points of E with denominators <= q: pick a denominator, then a coefficient box, reject outside E."""
    rng = random.Random(seed)
    K = t.field
    out = []
    while len(out) < n:
        den = rng.randint(1, q)
        c = [Fraction(rng.randint(-coeff_bound * den, coeff_bound * den), den) for _ in range(K.degree)]
        x = AlgebraicNumber(K, c)
        if x.sign() >= 0 and x < t.B:
            out.append(x)
    return out


def classify_batch(sub: subst1d.Substitution1D, seeds: Sequence[AlgebraicNumber], budget: int) -> list[dict]:
    m = lift.lift_map(betamap.from_substitution(sub))
    rows = []
    for i, x in enumerate(seeds):
        out = _run_orbit(m, x, budget, None)
        row = {"index": i, "point": " ".join(x.to_literal()), "status": out.status,
               "preperiod": "", "period": "", "escape_iterate": "", "conjugate": "", "iterations": ""}
        if isinstance(out, lift.EventuallyPeriodic):
            row.update(preperiod=out.preperiod, period=out.period)
        elif isinstance(out, lift.ProvablyInfinite):
            row.update(escape_iterate=out.escape_iterate, conjugate=out.conjugate)
        else:
            row.update(iterations=out.iterations)
        rows.append(row)
    return rows


def cmd_classify(args) -> str:
    sub = _load_subst(args.file)
    t = betamap.from_substitution(sub)
    if args.seeds is not None:
        data = _load_json(args.seeds)
        if not isinstance(data, list):
            raise InputError("seed file must be a JSON list of literals", file=args.seeds)
        seeds = []
        for k, item in enumerate(data):
            try:
                seeds.append(AlgebraicNumber.from_literal(sub.field, item))
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise InputError(f"seed {k}: {exc}", file=args.seeds) from None
    else:
        if args.random < 0 or args.denominator < 1:
            raise InputError("--random must be >= 0 and --denominator >= 1", field="--random")
        seeds = _random_seeds(t, args.random, args.denominator, args.coeff_bound, args.rng_seed)
    rows = classify_batch(sub, seeds, args.max_iter)
    counts = {}
    for r in rows:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    if args.format == "json":
        return _emit({"rows": rows, "counts": dict(sorted(counts.items())), "total": len(rows)})
    buf = io.StringIO()
    fields = ["index", "point", "status", "preperiod", "period", "escape_iterate", "conjugate", "iterations"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    buf.write("\nstatus,count\n")
    for k, v in sorted(counts.items()):
        buf.write(f"{k},{v}\n")
    return buf.getvalue()


def cmd_tile2d(args) -> str:
    r = _load_rule(args.file)
    rep = tiling2d.validate_rule(r)
    out = {
        "valid": rep.valid,
        "violations": [
            {"code": v.code, "prototile": v.prototile, "message": v.message,
             "witness": [w.to_literal() if isinstance(w, AlgebraicNumber) else w for w in v.witness]}
            for v in rep.violations
        ],
        "edge_words": {side: {a: "".join(w) for a, w in words.items()} for side, words in rep.edge_words.items()},
    }
    for side, s in (("top", rep.top), ("bottom", rep.bottom)):
        if s is not None:
            out[f"{side}_substitution"] = {a: list(s.rule[a]) for a in s.alphabet}
    if rep.valid:
        out["structure_matrix"] = tiling2d.structure_matrix(r)
    if args.svg is not None:
        if not rep.valid:
            raise InputError("cannot render an invalid rule", file=args.file)
        p = tiling2d.expand(r, _root(r, args.root), args.level)
        markers = tiling2d.find_misfits(r, p.root) if args.markers and args.level == 1 else ()
        Path(args.svg).write_text(tiling2d.render_svg(p, {"markers": markers}), encoding="utf-8")
        out["svg"] = {"path": args.svg, "tiles": len(p)}
    return _emit(out)


def _root(r, root):
    if root is None:
        return r.labels[0]
    if root not in r.prototiles:
        raise InputError(f"no prototile {root!r}", field="--root")
    return root


def _checked_rule(path):
    r = _load_rule(path)
    rep = tiling2d.validate_rule(r)
    if not rep.valid:
        raise InputError("; ".join(v.message for v in rep.violations[:5]), file=path)
    return r, rep


def cmd_census(args) -> str:
    r, _ = _checked_rule(args.file)
    root = _root(r, args.root)
    levels = []
    p = tiling2d.expand(r, root, 0)
    for n in range(0, args.level + 1):
        if n:
            p = tiling2d.substitute(p)
        if n < args.level and not args.all_levels:
            continue
        cen = tiling2d.adjacency_census(p)
        entry = {"level": n, "tiles": len(p), "distinct_classes": cen.count}
        if n == args.level:
            entry.update(tiling2d.census_report(cen, DIGITS))
        levels.append(entry)
    return _emit({"root": root, "levels": levels})


def cmd_offsets(args) -> str:
    data = _load_json(args.file)
    segments = []
    if isinstance(data, dict) and "prototiles" in data:
        r, rep = _checked_rule(args.file)
        e = rep.edge_substitution()
        segments = tiling2d.initial_segments(r)
    else:
        e = offsets.EdgeSubstitution.from_lower(_load_subst(args.file))
    if args.segments is not None:
        try:
            segments = segments + offsets.segments_from_json(e.field, _load_json(args.segments))
        except (ValueError, TypeError, KeyError) as exc:
            raise InputError(str(exc), file=args.segments) from None
    try:
        res = offsets.offset_bound(e, segments)
    except offsets.IncommensurateSegment as exc:
        raise InputError(str(exc), file=args.segments or args.file) from None
    rep = offsets.result_report(res, DIGITS)
    rep["segments"] = offsets.segments_to_json(segments)
    return _emit(rep)


def cmd_misfit(args) -> str:
    data = _load_json(args.file)
    if isinstance(data, dict) and "prototiles" in data:
        r, rep = _checked_rule(args.file)
        root = _root(r, args.root)
        found = tiling2d.find_misfits(r, root)
        if args.vertex is not None:
            vx, vy = (parse_point(s, r.field, flag="--vertex") for s in args.vertex)
            chosen = [(vx, vy)]
        else:
            chosen = found
        tracks = []
        for v in chosen:
            try:
                steps = tiling2d.track_misfit(r, v, root, args.levels)
            except tiling2d.NotOnEdgeInterior as exc:
                raise InputError(str(exc), field="--vertex") from None
            F = betamap.from_substitution(rep.top)
            orbit_vals = offsets.misfit_orbit(F, steps[0].value, args.levels - 1)
            tracks.append(
                {
                    "vertex": [_lit(v[0]), _lit(v[1])],
                    "steps": [{"level": s.level, "tile": s.tile, "edge": s.edge,
                               "local_offset": _lit(s.local_offset), "value": _lit(s.value)} for s in steps],
                    "matches_map_orbit": [s.value for s in steps] == orbit_vals,
                }
            )
        return _emit({"root": root, "misfits": [[_lit(x), _lit(y)] for x, y in found], "tracks": tracks})
    sub = _load_subst(args.file)
    t = betamap.from_substitution(sub)
    x0 = parse_point(args.point, sub.field) if args.point is not None else sub.beta - 1
    try:
        vals = offsets.misfit_orbit(t, x0, args.levels)
    except betamap.OutOfDomain as exc:
        raise InputError(str(exc), field="--point") from None
    m = lift.lift_map(t)
    out = lift.orbit(m, x0, args.max_iter)
    return _emit(
        {
            "x0": _lit(x0),
            "offsets": [_lit(v) for v in vals],
            "pairwise_distinct": offsets.all_distinct(vals),
            "certificate": {k: v for k, v in lift.outcome_report(m, out, 0).items() if k != "orbit_prefix"},
        }
    )


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="betatiling", description="Exact analysis of substitutions, beta-maps and rectangle tilings.")
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("analyze", help="structure matrix, field, Pisot verdict and heights of a substitution")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sp.add_parser("betamap", help="the induced beta-transformation")
    p.add_argument("file")
    p.add_argument("--point", help="also evaluate F at this literal")
    p.set_defaults(func=cmd_betamap)

    p = sp.add_parser("orbit", help="certify an orbit as eventually periodic or infinite")
    p.add_argument("file")
    p.add_argument("--point", required=True, help='coefficient literal, e.g. "[-1/1, 1/1]"')
    p.add_argument("--max-iter", type=int, default=lift.DEFAULT_BUDGET)
    p.add_argument("--threshold", default="minimal", help="minimal | eigen (eigen-coordinate r=2, quadratic fields)")
    p.add_argument("--prefix", type=int, default=64, help="orbit points to include in the report")
    p.set_defaults(func=cmd_orbit)

    p = sp.add_parser("classify", help="classify a batch of seeds")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--seeds", help="JSON list of literals")
    g.add_argument("--random", type=int, default=100, help="number of random seeds")
    p.add_argument("--denominator", type=int, default=50, help="largest seed denominator")
    p.add_argument("--coeff-bound", type=int, default=4, help="coefficients drawn from [-b, b]")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=lift.DEFAULT_BUDGET)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_classify)

    p = sp.add_parser("tile2d", help="validate a rectangle rule, optionally render S^n as SVG")
    p.add_argument("file")
    p.add_argument("--root")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--svg", help="write the patch here")
    p.add_argument("--markers", action="store_true", help="circle misfit vertices (level 1)")
    p.set_defaults(func=cmd_tile2d)

    p = sp.add_parser("census", help="adjacency offset classes of S^n(root)")
    p.add_argument("file")
    p.add_argument("--root")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--all-levels", action="store_true", help="report class counts for every level up to --level")
    p.set_defaults(func=cmd_census)

    p = sp.add_parser("offsets", help="prefix/suffix/difference sets and the Pisot candidate list")
    p.add_argument("file", help="substitution or rule file")
    p.add_argument("--segments", help="extra initial segments (JSON)")
    p.set_defaults(func=cmd_offsets)

    p = sp.add_parser("misfit", help="misfit offsets under the edge map, or tracked through a 2D rule")
    p.add_argument("file", help="substitution or rule file")
    p.add_argument("--point", help="initial offset (substitution files; default beta - 1)")
    p.add_argument("--vertex", nargs=2, metavar=("X", "Y"), help="vertex of S(root) to track (rule files)")
    p.add_argument("--root")
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--max-iter", type=int, default=lift.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_misfit)
    return ap


def _diagnostic(kind: str, message: str, **where) -> str:
    body = {"error": kind, "message": message}
    body.update({k: v for k, v in where.items() if v is not None})
    return json.dumps(body, ensure_ascii=False) + "\n"


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    for name in ("max_iter", "levels", "level", "prefix"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            stderr.write(_diagnostic("validation", "must be >= 0", field="--" + name.replace("_", "-")))
            return 2
    try:
        text = args.func(args)
    except InputError as exc:
        stderr.write(_diagnostic("validation", str(exc), file=exc.file, field=exc.field))
        return 2
    except (FieldError, subst1d.SubstitutionError, tiling2d.RuleError, offsets.IncommensurateSegment, lift.NotExpanding) as exc:
        stderr.write(_diagnostic("validation", f"{type(exc).__name__}: {exc}", file=getattr(args, "file", None)))
        return 2
    except Exception as exc:  # invariant failures; never expected
        stderr.write(_diagnostic("internal", f"{type(exc).__name__}: {exc}"))
        return 1
    stdout.write(text)
    return 0


def main() -> None:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    sys.exit(run())


if __name__ == "__main__":
    main()
