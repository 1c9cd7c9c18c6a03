"""Command line front end: ``zerocenter analyze | grid | example``."""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

import tomli

from . import __version__
from .algebra import Deformation, GaussRational, Polynomial, bad_epsilons, parse_coefficient, poly_from_strings
from .center import (
    IDENTITY_TOL,
    NONVANISH_TOL,
    VANISH_TOL,
    cycle_on_f,
    decide_infinitesimal,
    decide_tangential,
    displacement,
    melnikov1,
    melnikov2_formula,
    melnikov_fit,
    sample_points,
    sample_radius,
)
from .cycles import ZeroCycle
from .errors import CapExceeded, InvalidInput, NumericFailure, UnexpectedPrimitive, ZeroCenterError
from .monodromy import CLOSURE_MAX_DEGREE, classify, deformation_group
from .numerics import TrackerConfig

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_CAP = 0, 2, 3, 4
REFERENCE_M2_AT_1 = -17 / 12
GRID_POINTS_T = 8


class Problem:
    """A parsed problem file."""

    def __init__(self, d: Deformation, weights, t0: GaussRational, cfg: TrackerConfig, seed: int, labels=None):
        self.d = d
        self.weights = tuple(weights)
        self.t0 = t0
        self.cfg = cfg
        self.seed = seed
        self.labels = labels

    def cycle(self) -> ZeroCycle:
        return cycle_on_f(self.d, self.weights, self.t0, labels=self.labels, cfg=self.cfg)

    def echo(self) -> dict:
        return {
            "f": self.d.f.to_strings(),
            "g": self.d.g.to_strings(),
            "weights": list(self.weights),
            "t0": str(self.t0),
            "seed": self.seed,
        }


def _coeff_list(table: dict, key: str) -> Polynomial:
    try:
        raw = table[key]["coeffs"]
    except (KeyError, TypeError):
        raise InvalidInput(f"missing {key}.coeffs")
    if not isinstance(raw, list) or not all(isinstance(x, (str, int)) and not isinstance(x, bool) for x in raw):
        raise InvalidInput(f"{key}.coeffs must be a list of exact coefficient strings")
    return poly_from_strings([str(x) for x in raw])


def parse_problem(text: str, overrides: dict | None = None) -> Problem:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise InvalidInput(f"problem file is not valid TOML: {exc}")
    f = _coeff_list(data, "f")
    g = _coeff_list(data, "g") if "g" in data else Polynomial()
    if f.degree < 1:
        raise InvalidInput("f must have degree >= 1")
    weights = data.get("cycle", {}).get("weights")
    if not isinstance(weights, list) or not all(isinstance(w, int) and not isinstance(w, bool) for w in weights):
        raise InvalidInput("cycle.weights must be a list of integers")
    t0_raw = data.get("base", {}).get("t0", "1")
    t0 = parse_coefficient(str(t0_raw))
    tracker = dict(data.get("tracker", {}))
    tracker.update(overrides or {})
    try:
        cfg = TrackerConfig(**tracker)
    except TypeError as exc:
        raise InvalidInput(f"unknown tracker option: {exc}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise InvalidInput("seed must be an integer")
    return Problem(Deformation(f, g), weights, t0, cfg, seed)


def load_problem(path: str, overrides: dict | None = None) -> Problem:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode("utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}")
    return parse_problem(text, overrides)


def check_degree(p: Problem, max_degree: int) -> None:
    if p.d.n > max_degree:
        raise CapExceeded(f"degree {p.d.n} exceeds --max-degree {max_degree}")


def _c(z: complex) -> list[float]:
    return [z.real, z.imag]


# ----------------------------------------------------------------------------
def melnikov_rows(p: Problem, c: ZeroCycle) -> list[dict]:
    d = p.d
    t0 = complex(p.t0)
    ts = [t0] + sample_points(d, t0, 2, sample_radius(d))
    rows = []
    for t in ts:
        m1 = melnikov1(d, c, t, p.cfg)
        m2 = melnikov2_formula(d, c, t, p.cfg)
        fit = melnikov_fit(d, c, t, k=2, cfg=p.cfg)
        rows.append(
            {
                "t": _c(t),
                "M1": _c(m1),
                "M2_formula": _c(m2),
                "M1_fit": _c(fit.coefficients[0]),
                "M2_fit": _c(fit.coefficients[1]),
                "fit_eps0": fit.eps0,
                "M2_rel_diff": abs(m2 - fit.coefficients[1]) / max(abs(m2), 1e-300),
            }
        )
    return rows


def build_report(p: Problem) -> dict:
    d = p.d
    c = p.cycle()
    bad = bad_epsilons(d)
    grp = deformation_group(d, p.cfg)
    try:
        cls = classify(grp).to_dict()
    except UnexpectedPrimitive as exc:
        cls = {"tag": "UnexpectedPrimitive", "message": str(exc)}
    group = {
        "generators": [list(s.images) for s in grp.generators],
        "infinity": list(grp.infinity.images) if grp.infinity else None,
        "order": grp.order,
        "class": cls,
    }
    group_prov = grp.provenance
    tang = decide_tangential(d, c, p.cfg)
    mel = melnikov_rows(p, c) if len(c) > 1 else []
    dec = decide_infinitesimal(d, c, p.cfg)
    return {
        "input": p.echo(),
        "bad_epsilons": bad.to_dict(),
        "group": group,
        "tangential": tang.to_dict(),
        "melnikov": {
            "convention": "Delta = -sum_k eps^k M_k",
            "rows": mel,
            "fit": {"k": 2, "samples": "j*eps0, |j| <= 3"},
        },
        "decision": dec.to_dict(),
        "provenance": {
            "cycle_fiber": c.fiber.to_dict(),
            "loop_basis": group_prov.get("loop_basis"),
            "eps_samples": group_prov.get("eps_samples"),
            "transport": group_prov.get("transport"),
            "tolerances": {
                "vanish": VANISH_TOL,
                "nonvanish": NONVANISH_TOL,
                "identity": IDENTITY_TOL,
                "newton_tol": p.cfg.newton_tol,
                "collision_guard": p.cfg.collision_guard,
                "min_step": p.cfg.min_step,
                "closure_max_degree": CLOSURE_MAX_DEGREE,
            },
            "version": __version__,
        },
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# ----------------------------------------------------------------------------
def parse_range(spec: str) -> list[Fraction]:
    """``start:stop:step`` with exact rational parts; stop is inclusive."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise InvalidInput(f"range must be start:stop:step, got {spec!r}")
    try:
        a, b, h = (Fraction(x.strip()) for x in parts)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"range parts must be exact rationals: {spec!r}")
    if h <= 0 or b < a:
        raise InvalidInput(f"empty or backwards range {spec!r}")
    n = int((b - a) / h)
    return [a + k * h for k in range(n + 1)]


def t_points(p: Problem, circle: str | None, seg: str | None) -> list[complex]:
    if (circle is None) == (seg is None):
        raise InvalidInput("give exactly one of --t-circle and --t-seg")
    if circle is not None:
        try:
            R = float(Fraction(circle))
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"bad radius {circle!r}")
        if R <= 0:
            raise InvalidInput("radius must be positive")
        # angles are nudged so the straight path from the base avoids critical values
        return sample_points(p.d, complex(p.t0), GRID_POINTS_T, R)
    ends = seg.split(":")
    if len(ends) != 2:
        raise InvalidInput(f"segment must be z1:z2, got {seg!r}")
    z1, z2 = (complex(parse_coefficient(e)) for e in ends)
    return [z1 + (z2 - z1) * k / GRID_POINTS_T for k in range(GRID_POINTS_T + 1)]


def grid_rows(p: Problem, ts: Sequence[complex], eps: Sequence[Fraction]) -> tuple[list[list], list[str]]:
    c = p.cycle()
    bad = bad_epsilons(p.d)
    rows, warnings = [], []
    for t in ts:
        for e in eps:
            ef = float(e)
            flag = ""
            if bad.distance(ef) < 1e-6 and e != 0:
                flag = "near_bad_eps"
            try:
                s = displacement(p.d, c, t, ef, p.cfg)
                val = s.value
            except NumericFailure as exc:
                flag = flag or "tracking_failed"
                val = complex(math.nan, math.nan)
                warnings.append(f"t={t}, eps={e}: {exc}")
            if flag == "near_bad_eps":
                warnings.append(f"t={t}, eps={e}: eps within 1e-6 of the bad set")
            rows.append([t.real, t.imag, ef, 0.0, val.real, val.imag, abs(val), flag])
    return rows, warnings


GRID_HEADER = ["re_t", "im_t", "re_eps", "im_eps", "re_delta", "im_delta", "abs_delta", "flag"]


def write_csv(path: str | None, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if path is None or path == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def melnikov_csv_rows(report: dict) -> list[list]:
    """(t, i, Re M_i, Im M_i) rows from the fitted series."""
    out = []
    for r in report["melnikov"]["rows"]:
        t = r["t"]
        for i, key in ((1, "M1_fit"), (2, "M2_fit")):
            out.append([t[0], t[1], i, r[key][0], r[key][1]])
    return out


# ----------------------------------------------------------------------------
def _angular_labels(n: int, t0: complex = 1) -> list[complex]:
    root = t0 ** (1 / n)
    return [root * cmath.exp(2j * math.pi * k / n) for k in range(n)]


def example_problem(which: int) -> Problem:
    cfg = TrackerConfig()
    if which == 1:
        d = Deformation(poly_from_strings(["0"] * 6 + ["1"]), poly_from_strings(["0", "0", "1", "1"]))
        return Problem(d, (2, 1, -1, -2, -1, 1), GaussRational(1), cfg, 0, _angular_labels(6))
    if which == 2:
        d = Deformation(
            poly_from_strings(["0", "0", "0", "0", "1"]),
            poly_from_strings(["1/3", "0", "1", "0", "1/2"]),
        )
        return Problem(d, (1, 1, -1, -1), GaussRational(1), cfg, 0, _angular_labels(4))
    raise InvalidInput(f"no built-in example {which}; choose 1 or 2")


def _fmt(z: complex) -> str:
    re = 0.0 if abs(z.real) < 5e-10 else z.real
    im = 0.0 if abs(z.imag) < 5e-10 else z.imag
    if im == 0:
        return f"{re:.6g}"
    return f"{re:.6g}{im:+.6g}i"


def example_summary(which: int) -> str:
    p = example_problem(which)
    d = p.d
    c = p.cycle()
    tang = decide_tangential(d, c, p.cfg)
    dec = decide_infinitesimal(d, c, p.cfg)
    lines = [
        f"example {which}",
        f"f = {d.f}",
        f"g = {d.g}",
        "cycle weights (roots t0^(1/n) e^(2 pi i k/n), k = 0..n-1): " + " ".join(str(w) for w in c.weights),
        f"max |M1| on 24 points: {'< 1e-9' if tang.verdict else f'{tang.max_m1:.3g}'}",
    ]
    if which == 1:
        m2 = melnikov2_formula(d, c, 1, p.cfg)
        fit = melnikov_fit(d, c, 1, k=2, cfg=p.cfg).coefficients[1]
        agree = abs(m2 - REFERENCE_M2_AT_1) <= 1e-6 * abs(REFERENCE_M2_AT_1)
        lines += [
            f"M2(1) formula: {_fmt(m2)}",
            f"M2(1) fit: {_fmt(fit)}",
            f"formula and fit agree to 1e-6: {'yes' if abs(m2 - fit) <= 1e-6 * abs(m2) else 'no'}",
            f"matches the reference constant -17/12: {'yes' if agree else 'no'}",
        ]
    answer = "yes" if dec.is_center else "no"
    if dec.is_center:
        answer += f", factor {dec.h}"
        lines.append(f"certificate: f = {dec.outer_f.format('h')}, g = {dec.outer_g.format('h')}, h = {dec.h}")
        lines.append(f"projected class weights: {list(dec.projection.class_weights)}")
    else:
        lines.append(f"deformation group: {dec.group_class}")
        lines.append("nonzero displacement found on the (t, eps) grid: yes")
    lines.append(f"tangential center: {'yes' if tang.verdict else 'no'}; infinitesimal center: {answer}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
def _overrides(args) -> dict:
    return {"newton_tol": args.tol} if args.tol is not None else {}


def cmd_analyze(path: str, out_path: str | None = None, csv_path: str | None = None,
                overrides: dict | None = None, max_degree: int = 12, seed: int | None = None) -> int:
    p = load_problem(path, overrides)
    if seed is not None:
        p.seed = seed
    check_degree(p, max_degree)
    report = build_report(p)
    text = dump_report(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if csv_path:
        write_csv(csv_path, ["re_t", "im_t", "i", "re_M", "im_M"], melnikov_csv_rows(report))
    return EXIT_OK


def cmd_grid(path: str, t_circle: str | None, t_seg: str | None, eps_spec: str, csv_out: str | None = None,
             overrides: dict | None = None, max_degree: int = 12) -> int:
    p = load_problem(path, overrides)
    check_degree(p, max_degree)
    rows, warnings = grid_rows(p, t_points(p, t_circle, t_seg), parse_range(eps_spec))
    write_csv(csv_out, GRID_HEADER, rows)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_example(which: int) -> int:
    sys.stdout.write(example_summary(which))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="Newton tolerance for the tracker")
    common.add_argument("--seed", type=int, default=None, help="recorded in the report; sampling is deterministic")
    common.add_argument("--max-degree", type=int, default=12)

    ap = argparse.ArgumentParser(prog="zerocenter", description="Infinitesimal centers of zero-cycle deformations.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("analyze", parents=[common], help="full analysis of a problem file")
    a.add_argument("problem")
    a.add_argument("--out", default=None)
    a.add_argument("--csv", default=None, help="Melnikov coefficients as CSV")

    g = sub.add_parser("grid", parents=[common], help="displacement on a (t, eps) grid")
    g.add_argument("problem")
    g.add_argument("--eps", required=True, help="start:stop:step (exact rationals)")
    t = g.add_mutually_exclusive_group(required=True)
    t.add_argument("--t-circle", default=None)
    t.add_argument("--t-seg", default=None)
    g.add_argument("--csv", default=None)

    e = sub.add_parser("example", help="run a built-in example")
    e.add_argument("which", type=int)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        if args.cmd == "analyze":
            return cmd_analyze(args.problem, args.out, args.csv, _overrides(args), args.max_degree, args.seed)
        if args.cmd == "grid":
            return cmd_grid(args.problem, args.t_circle, args.t_seg, args.eps, args.csv,
                            _overrides(args), args.max_degree)
        return cmd_example(args.which)
    except (InvalidInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NumericFailure, ZeroCenterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
