"""Displacement function, Melnikov functions and the infinitesimal center decision.

Sign conventions: the displacement along a cycle with weights n_i is
``Delta(t, eps) = sum n_i f(z_i(t, eps)) = -eps * sum n_i g(z_i(t, eps))``.
Melnikov functions are normalised so that ``Delta = -sum_k eps^k M_k(t)``;
then ``M_1 = sum n_i g(z_i)`` and ``M_2 = sum n_i (-g g'/f')(z_i)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Deformation, Polynomial, affine_in, common_right_factors, compose, express_in
from .cycles import ProjectedCycle, ZeroCycle, h_partition, is_trivial, make_cycle, project
from .errors import (
    AmbiguousClustering,
    CapExceeded,
    CriticalFiber,
    IdentityViolated,
    IllConditioned,
    Inconclusive,
    InconsistentVerdict,
    NumericFailure,
    UnexpectedPrimitive,
    ZeroCenterError,
)
from .monodromy import classify, deformation_group
from .numerics import (
    LabeledFiber,
    PathSpec,
    TrackerConfig,
    critical_values,
    fiber,
    segment_clear,
    track_fiber,
)

VANISH_TOL = 1e-9
NONVANISH_TOL = 1e-6
IDENTITY_TOL = 1e-8
GRID_EPS = (Fraction(1, 20), Fraction(1, 10), Fraction(3, 20), Fraction(1, 5), Fraction(1, 4))
RESAMPLE_POINTS = 5


@dataclass(frozen=True)
class DisplacementSample:
    t: complex
    eps: complex
    value_f: complex
    value_g: complex

    @property
    def value(self) -> complex:
        """-eps * sum n_i g(z_i); free of the cancellation that value_f suffers."""
        return self.value_g


@dataclass(frozen=True)
class MelnikovSeries:
    t: complex
    coefficients: tuple[complex, ...]
    method: str
    eps0: float | None = None
    remainder_ratio: float | None = None


@dataclass(frozen=True)
class TangentialResult:
    verdict: bool
    max_m1: float
    scale: float
    samples: tuple[complex, ...]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "max_m1": self.max_m1,
            "scale": self.scale,
            "tol": VANISH_TOL,
            "samples": [[t.real, t.imag] for t in self.samples],
        }


@dataclass(frozen=True)
class CenterDecision:
    verdict: str  # "Center" | "NoCenter"
    h: Polynomial | None = None
    outer_f: Polynomial | None = None
    outer_g: Polynomial | None = None
    chain: tuple[Polynomial, ...] = ()
    projection: ProjectedCycle | None = None
    witness: dict | None = None
    group_class: str | None = None
    notes: tuple[str, ...] = ()
    details: dict = field(default_factory=dict, compare=False)

    @property
    def is_center(self) -> bool:
        return self.verdict == "Center"

    def validate(self, d: Deformation) -> bool:
        """Re-check a Center certificate exactly (composition) and the projection."""
        if not self.is_center:
            return False
        return (
            compose(self.outer_f, self.h) == d.f
            and compose(self.outer_g, self.h) == d.g
            and is_trivial(self.projection)
        )

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict, "notes": list(self.notes)}
        if self.is_center:
            out["witness"] = {
                "h": self.h.to_strings(),
                "h_text": str(self.h),
                "outer_f": self.outer_f.to_strings(),
                "outer_g": self.outer_g.to_strings(),
                "chain": [p.to_strings() for p in self.chain],
                "projection": self.projection.to_dict(),
                "exact": ["f = outer_f(h)", "g = outer_g(h)", "class weights are integers"],
            }
        else:
            out["witness"] = self.witness
            out["group_class"] = self.group_class
        out.update(self.details)
        return out


# ----------------------------------------------------------------------------
def cycle_on_f(d: Deformation, weights: Sequence[int], t0=1, labels=None, cfg=None) -> ZeroCycle:
    """Zero cycle on the fiber f^-1(t0) (eps = 0), canonical order unless labels given."""
    return make_cycle(weights, fiber(d, t0, 0, cfg, labels=labels))


def transport(d: Deformation, c: ZeroCycle, t, eps, cfg: TrackerConfig | None = None) -> LabeledFiber:
    """Carry the cycle's fiber to (t, eps): first in eps at the base t, then in t."""
    t0, e0 = c.fiber.base
    path = PathSpec.polyline([(t0, e0), (t0, complex(eps)), (complex(t), complex(eps))])
    return track_fiber(d, path, c.fiber, cfg)


def displacement(d: Deformation, c: ZeroCycle, t, eps, cfg: TrackerConfig | None = None) -> DisplacementSample:
    fib = transport(d, c, t, eps, cfg)
    z = fib.as_array()
    n = np.array(c.weights, dtype=float)
    fz = d.f(z)
    gz = d.g(z) if not d.g.is_zero() else np.zeros_like(z)
    e = complex(eps)
    value_f = complex(np.sum(n * fz))
    value_g = complex(-e * np.sum(n * gz))
    scale = 1.0 + float(np.sum(np.abs(n) * (np.abs(fz) + abs(e) * np.abs(gz))))
    if abs(value_f - value_g) > IDENTITY_TOL * scale:
        raise IdentityViolated(f"sum n f = {value_f} but -eps sum n g = {value_g}")
    return DisplacementSample(complex(t), e, value_f, value_g)


def melnikov1(d: Deformation, c: ZeroCycle, t, cfg: TrackerConfig | None = None) -> complex:
    z = transport(d, c, t, 0, cfg).as_array()
    if d.g.is_zero():
        return 0j
    return complex(np.sum(np.array(c.weights) * d.g(z)))


def melnikov2_formula(d: Deformation, c: ZeroCycle, t, cfg: TrackerConfig | None = None) -> complex:
    z = transport(d, c, t, 0, cfg).as_array()
    if d.g.is_zero():
        return 0j
    fp = d.f.derivative()(z)
    if np.any(np.abs(fp) < 1e-12 * (1 + np.abs(z))):
        raise CriticalFiber(f"f' vanishes on the fiber over t={t}")
    g = d.g(z)
    gp = d.g.derivative()(z) if d.g.degree > 0 else np.zeros_like(z)
    return complex(np.sum(np.array(c.weights) * (-g * gp / fp)))


def melnikov_fit(
    d: Deformation,
    c: ZeroCycle,
    t,
    k: int = 2,
    eps0: float = 1e-2,
    cfg: TrackerConfig | None = None,
    halvings: int = 4,
) -> MelnikovSeries:
    """Fit eps -> Delta(t, eps) on 2k+3 symmetric samples j*eps0, |j| <= k+1.

    The fitted polynomial has zero constant term and degree 2k+2 (in the
    scaled variable eps/eps0); only the first k coefficients are returned.
    """
    if not 1 <= k <= 6:
        raise ValueError("melnikov_fit supports 1 <= k <= 6")
    if len(c) < 2:
        raise ValueError("a single-point fiber carries no nonzero zero cycle")
    base = transport(d, c, t, 0, cfg)
    weights = np.array(c.weights, dtype=float)
    js = np.arange(-(k + 1), k + 2)
    powers = np.arange(1, 2 * k + 3)
    A = js[:, None].astype(float) ** powers[None, :]
    last_error = "no attempt"
    for _ in range(halvings + 1):
        try:
            vals = []
            for j in js:
                e = j * eps0
                if j == 0:
                    vals.append(0j)
                    continue
                zf = track_fiber(d, PathSpec.line(base.base, (base.t, e)), base, cfg).as_array()
                vals.append(complex(-e * np.sum(weights * d.g(zf))) if not d.g.is_zero() else 0j)
        except NumericFailure as exc:
            last_error = str(exc)
            eps0 /= 2
            continue
        vals = np.array(vals)
        coef, *_ = np.linalg.lstsq(A.astype(complex), vals, rcond=None)
        full = coef / eps0 ** powers
        M = -full[:k]
        eps = js * eps0
        model = -sum(M[i] * eps ** (i + 1) for i in range(k))
        resid = np.abs(vals - model)
        noise = 1e-13 * (1 + np.max(np.abs(vals)))
        nz = js != 0
        ratios = resid[nz] / np.abs(eps[nz]) ** (k + 1)
        floor = noise / eps0 ** (k + 1)
        # an O(eps^(k+1)) remainder has comparable ratios at every sample
        if ratios.max() > 100 * max(ratios[np.abs(js[nz]) == k + 1].max(), floor) + floor:
            last_error = "remainder is not O(eps^(k+1)) on the samples"
            eps0 /= 2
            continue
        return MelnikovSeries(complex(t), tuple(complex(m) for m in M), "fit", eps0, float(ratios.max()))
    raise IllConditioned(f"Melnikov fit failed: {last_error}")


# ----------------------------------------------------------------------------
def sample_points(
    d: Deformation, t0: complex, count: int, radius: float, offset: float = 1.0 / 7.0
) -> list[complex]:
    """``count`` points on |t| = radius reachable from t0 by a straight segment
    that keeps clear of the critical values of f."""
    cvs = critical_values(d, 0)
    margin = 0.05 * max(radius, 1.0)
    out = []
    step = 2 * math.pi / (8 * count)
    for k in range(count):
        theta = 2 * math.pi * k / count + offset
        for nudge in (0, 1, -1, 2, -2, 3, -3):
            t = radius * complex(math.cos(theta + nudge * step), math.sin(theta + nudge * step))
            if segment_clear(t0, t, cvs, margin):
                out.append(t)
                break
    return out


def sample_radius(d: Deformation) -> float:
    cvs = critical_values(d, 0)
    return 2.0 * (1.0 + max((abs(v) for v in cvs), default=0.0))


def decide_tangential(d: Deformation, c: ZeroCycle, cfg: TrackerConfig | None = None) -> TangentialResult:
    """Does M_1 vanish identically?  Checked on 24 points on |t| = R and 2R."""
    R = sample_radius(d)
    t0 = c.fiber.t
    pts = sample_points(d, t0, 12, R) + sample_points(d, t0, 12, 2 * R)
    vals = []
    scale = 1.0
    w = np.abs(np.array(c.weights, dtype=float))
    for t in pts:
        z = transport(d, c, t, 0, cfg).as_array()
        if d.g.is_zero():
            vals.append(0.0)
            continue
        gz = d.g(z)
        scale = max(scale, float(np.sum(w * np.abs(gz))))
        vals.append(abs(complex(np.sum(np.array(c.weights) * gz))))
    m = max(vals, default=0.0)
    if m < VANISH_TOL * scale:
        verdict = True
    elif m > NONVANISH_TOL * scale:
        verdict = False
    else:
        raise Inconclusive(f"max |M1| = {m:.3e} between vanish and nonvanish thresholds")
    return TangentialResult(verdict, m, scale, tuple(pts))


def _factor_chain(h: Polynomial, factors: Sequence[Polynomial]) -> tuple[Polynomial, ...]:
    chain = []
    for p in sorted(factors, key=lambda q: q.degree):
        if p.degree >= h.degree:
            continue
        if chain and express_in(p, chain[-1]) is None:
            continue
        if express_in(h, p) is not None:
            chain.append(p)
    return tuple(chain) + (h,)


def _resample_partition_stable(
    d: Deformation, c: ZeroCycle, h: Polynomial, classes, cfg
) -> list[tuple[complex, complex]]:
    """Partition of labels under h at RESAMPLE_POINTS other regular (t, eps)."""
    R = sample_radius(d)
    cands = sample_points(d, c.fiber.t, 2 * RESAMPLE_POINTS, R, offset=0.3)
    used = []
    for i, t in enumerate(cands):
        e = GRID_EPS[i % len(GRID_EPS)] / 2
        try:
            fib = transport(d, c, t, float(e), cfg)
            got, _ = h_partition(h, fib)
        except (NumericFailure, AmbiguousClustering):
            continue
        if tuple(got) != tuple(classes):
            raise InconsistentVerdict(f"class partition under {h} changes at t={t}, eps={float(e)}")
        used.append((t, complex(float(e))))
        if len(used) == RESAMPLE_POINTS:
            break
    if len(used) < RESAMPLE_POINTS:
        raise Inconclusive("could not resample the class partition at enough regular points")
    return used


def _center_from(d: Deformation, c: ZeroCycle, h: Polynomial, factors, cfg, reason: str) -> CenterDecision:
    proj = project(c, h)
    pts = _resample_partition_stable(d, c, h, proj.classes, cfg)
    dec = CenterDecision(
        verdict="Center",
        h=h,
        outer_f=express_in(d.f, h),
        outer_g=express_in(d.g, h),
        chain=_factor_chain(h, factors),
        projection=proj,
        notes=(
            reason,
            "partition computed at the cycle base and re-checked at "
            f"{len(pts)} further regular points (assumed locally constant off the discriminant)",
        ),
        details={"resample_points": [[t.real, t.imag, e.real, e.imag] for t, e in pts]},
    )
    if not dec.validate(d):
        raise InconsistentVerdict("center certificate does not re-validate")
    return dec


def displacement_grid(d: Deformation, c: ZeroCycle, cfg=None) -> list[DisplacementSample]:
    """Delta on 5 t-values (the cycle base and 4 points on |t| = R) x 5 eps-values."""
    t0 = c.fiber.t
    ts = [t0] + sample_points(d, t0, 4, sample_radius(d))
    out = []
    for t in ts:
        for e in GRID_EPS:
            try:
                out.append(displacement(d, c, t, float(e), cfg))
            except NumericFailure:
                continue
    return out


def decide_infinitesimal(d: Deformation, c: ZeroCycle, cfg: TrackerConfig | None = None) -> CenterDecision:
    """Decide whether Delta vanishes identically, with a certificate.

    Center: a common right factor h of f and g whose projection of the cycle
    is trivial (exact composition identities plus integer class sums).
    NoCenter: no common factor works; the deformation group's class and a
    grid point with |Delta| clearly nonzero are reported.
    """
    f, g = d.f, d.g
    if f.degree == 1 or all(w == 0 for w in c.weights):
        h = f.normalized() if f.degree >= 1 else Polynomial.z()
        return _center_from(d, c, h, [], cfg, "trivial cycle or degree-one f")
    factors = common_right_factors(f, g)
    if affine_in(g, f) is not None:
        return _center_from(d, c, f.normalized(), factors, cfg, "g is affine in f, so h = f")
    tried = []
    for h in factors:
        try:
            proj = project(c, h)
        except AmbiguousClustering as exc:
            tried.append({"h": str(h), "error": str(exc)})
            continue
        tried.append({"h": str(h), "class_weights": list(proj.class_weights)})
        if is_trivial(proj):
            return _center_from(d, c, h, factors, cfg, "trivial projection by a common right factor")

    try:
        group = deformation_group(d, cfg)
        try:
            cls = str(classify(group))
        except (UnexpectedPrimitive, CapExceeded) as exc:
            cls = f"unclassified ({exc})"
        group_info = group.to_dict()
    except ZeroCenterError as exc:
        cls, group_info = f"unavailable ({exc})", None

    grid = displacement_grid(d, c, cfg)
    if not grid:
        raise Inconclusive("no displacement grid point could be evaluated")
    best = max(grid, key=lambda s: abs(s.value))
    scale = 1.0 + float(np.sum(np.abs(c.weights))) * max(abs(s.t) for s in grid)
    if abs(best.value) < VANISH_TOL * scale:
        raise InconsistentVerdict(
            "no common factor trivializes the cycle, yet Delta vanishes on the whole grid"
        )
    if abs(best.value) <= NONVANISH_TOL * scale:
        raise Inconclusive(f"max |Delta| = {abs(best.value):.3e} inside the dead band")
    witness = {
        "t": [best.t.real, best.t.imag],
        "eps": [best.eps.real, best.eps.imag],
        "abs_delta": abs(best.value),
        "scale": scale,
        "tol": NONVANISH_TOL,
        "grid_points": len(grid),
    }
    return CenterDecision(
        verdict="NoCenter",
        witness=witness,
        group_class=cls,
        notes=(
            "exact: no common right factor of f and g projects the cycle trivially",
            "numeric corroboration: |Delta| above tolerance at the witness point",
        ),
        details={"factors_tried": tried, "group": group_info},
    )
