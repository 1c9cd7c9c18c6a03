"""Floating-point root solving and analytic continuation of fibers.

A fiber is the ordered list of roots of F(z, eps) = t.  ``track_fiber``
continues each root along a piecewise path in (t, eps) space with an Euler
predictor on the Davidenko equation and a Newton corrector; steps shrink
whenever the corrector fails or two roots come too close, so a path that
touches the discriminant locus raises instead of silently swapping labels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .algebra import Deformation, GaussRational, squarefree_part
from .errors import (
    CollisionDetected,
    LeadingCoefficientVanishes,
    NonConvergence,
    NumericFailure,
    OnDiscriminant,
    PathTooCloseToSigma,
)

# largest step, as a fraction of one segment
_MAX_STEP = 0.05


# ----------------------------------------------------------------------------
# root finding
def all_roots(coeffs: Sequence[complex], max_iter: int = 1000) -> np.ndarray:
    """All roots (with multiplicity) of an ascending coefficient array.

    Aberth-Ehrlich simultaneous iteration from a rotated circle, followed by
    a guarded Newton polish.
    """
    a = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(a)[0]
    if len(nz) == 0 or nz[-1] < 1:
        raise ValueError("all_roots needs a polynomial of degree >= 1")
    a = a[: nz[-1] + 1] / a[nz[-1]]
    # exact zero roots are split off; they would only slow the iteration down
    k0 = int(nz[0])
    a = a[k0:]
    m = len(a) - 1
    zeros = np.zeros(k0, dtype=complex)
    if m == 0:
        return zeros
    if m == 1:
        return np.concatenate([zeros, [-a[0]]])
    desc = a[::-1]
    ddesc = np.polyder(desc)
    absa = np.abs(a)
    radius = abs(a[0]) ** (1.0 / m)
    angles = 2 * np.pi * np.arange(m) / m + 0.4 / m + 0.25
    z = radius * np.exp(1j * angles)
    active = np.ones(m, dtype=bool)
    for _ in range(max_iter):
        pz = np.polyval(desc, z)
        dpz = np.polyval(ddesc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        w[bad] = 1e-3 * (1 + np.abs(z[bad]))
        w[~active] = 0
        z = z - w
        scale = np.polyval(absa[::-1], np.abs(z))
        small = (np.abs(w) <= 4e-16 * np.maximum(1.0, np.abs(z))) | (
            np.abs(np.polyval(desc, z)) <= 4e-16 * scale
        )
        active &= ~small
        if not active.any():
            break
    z = _newton_polish(desc, ddesc, z)
    scale = np.polyval(absa[::-1], np.abs(z))
    resid = np.abs(np.polyval(desc, z))
    if np.any(resid > 1e-10 * scale) or not np.all(np.isfinite(z)):
        raise NonConvergence(f"root finder did not converge (max residual {resid.max():.3e})")
    return np.concatenate([zeros, z]) if k0 else z


def _newton_polish(desc, ddesc, z, steps: int = 3):
    z = z.copy()
    for _ in range(steps):
        pz = np.polyval(desc, z)
        dpz = np.polyval(ddesc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - pz / dpz
        ok = np.isfinite(cand) & (np.abs(np.polyval(desc, cand)) < np.abs(pz))
        z[ok] = cand[ok]
    return z


# ----------------------------------------------------------------------------
# fibers
def canonical_order(roots: Sequence[complex], tol: float = 1e-9) -> list[int]:
    """Indices sorting roots by descending real part, then descending imaginary part.

    Real parts closer than ``tol`` (relative) count as equal so that
    conjugate pairs sort deterministically despite rounding.
    """
    idx = sorted(range(len(roots)), key=lambda i: -roots[i].real)
    out: list[int] = []
    i = 0
    while i < len(idx):
        j = i + 1
        ref = roots[idx[i]].real
        while j < len(idx) and abs(roots[idx[j]].real - ref) <= tol * max(1.0, abs(ref)):
            j += 1
        out.extend(sorted(idx[i:j], key=lambda k: -roots[k].imag))
        i = j
    return out


def _ascending_tolerant(values: Sequence[complex], tol: float = 1e-9) -> list[complex]:
    idx = canonical_order([-v for v in values], tol)
    return [values[i] for i in idx]


@dataclass(frozen=True)
class TrackerConfig:
    newton_tol: float = 1e-12
    initial_step: float = 1e-2
    min_step: float = 1e-9
    collision_guard: float = 1e-8
    max_steps: int = 10**6

    def __post_init__(self):
        if not (0 < self.min_step <= self.initial_step):
            raise ValueError("need 0 < min_step <= initial_step")
        if self.newton_tol <= 0 or self.collision_guard <= 0 or self.max_steps <= 0:
            raise ValueError("tracker tolerances must be positive")


@dataclass(frozen=True)
class LabeledFiber:
    """Roots of F(z, eps) = t at a base point, in a fixed label order."""

    t: complex
    eps: complex
    roots: tuple[complex, ...]

    def __len__(self):
        return len(self.roots)

    @property
    def base(self) -> tuple[complex, complex]:
        return (self.t, self.eps)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)

    def permuted(self, order: Sequence[int]) -> "LabeledFiber":
        return LabeledFiber(self.t, self.eps, tuple(self.roots[i] for i in order))

    def to_dict(self) -> dict:
        return {
            "t": [self.t.real, self.t.imag],
            "eps": [self.eps.real, self.eps.imag],
            "roots": [[z.real, z.imag] for z in self.roots],
        }


def _is_exact(x) -> bool:
    return isinstance(x, (GaussRational, int, Rational)) and not isinstance(x, bool)


def _fiber_coeffs(d: Deformation, eps) -> np.ndarray:
    if _is_exact(eps) and GaussRational.coerce(eps).is_zero():
        return d.f.to_complex()
    return d.coeffs_at(complex(eps))


def _residual_scale(coeffs: np.ndarray, z: np.ndarray, t: complex) -> np.ndarray:
    return np.polyval(np.abs(coeffs[::-1]), np.abs(z)) + abs(t)


def match_roots(moved: Sequence[complex], reference: Sequence[complex], radius: float = 1e-8) -> list[int]:
    """Greedy nearest matching; ``out[i]`` is the reference index of ``moved[i]``.

    Raises NumericFailure when the matching is not injective or a pair is
    farther apart than ``radius`` (relative to max(1, |z|)).
    """
    if len(moved) != len(reference):
        raise NumericFailure("root sets of different sizes")
    pairs = sorted(
        (abs(a - b), i, j) for i, a in enumerate(moved) for j, b in enumerate(reference)
    )
    out = [-1] * len(moved)
    used = set()
    for dist, i, j in pairs:
        if out[i] >= 0 or j in used:
            continue
        if dist > radius * max(1.0, abs(reference[j])):
            raise NumericFailure(f"root matching failed (distance {dist:.3e})")
        out[i] = j
        used.add(j)
    return out


def fiber(
    d: Deformation,
    t,
    eps=0,
    cfg: TrackerConfig | None = None,
    labels: Sequence[complex] | None = None,
) -> LabeledFiber:
    """Solve F(z, eps) = t.

    Roots come in canonical order unless ``labels`` (approximate root
    positions) are given, in which case root i is the one nearest labels[i].
    With eps exactly 0 the fiber is that of f alone (deg f points).
    """
    cfg = cfg or TrackerConfig()
    coeffs = _fiber_coeffs(d, eps).copy()
    t = complex(t)
    if len(coeffs) < 2:
        raise OnDiscriminant("constant polynomial has no fiber")
    if abs(coeffs[-1]) <= cfg.collision_guard * np.abs(coeffs).sum():
        raise LeadingCoefficientVanishes(f"c(eps) ~ 0 at eps={complex(eps)}")
    coeffs[0] -= t
    try:
        roots = all_roots(coeffs)
    except NonConvergence as exc:
        raise OnDiscriminant(str(exc)) from exc
    if len(roots) > 1:
        diff = np.abs(roots[:, None] - roots[None, :])
        np.fill_diagonal(diff, np.inf)
        if diff.min() <= cfg.collision_guard:
            raise OnDiscriminant(f"repeated root at t={t}, eps={complex(eps)}")
    scale = _residual_scale(coeffs, roots, 0)
    if np.any(np.abs(np.polyval(coeffs[::-1], roots)) > cfg.newton_tol * scale):
        raise OnDiscriminant("fiber residual above tolerance")
    if labels is not None:
        idx = match_roots(list(labels), list(roots), radius=np.inf)
        ordered = [roots[j] for j in idx]
    else:
        ordered = [roots[i] for i in canonical_order(list(roots))]
    return LabeledFiber(t, complex(eps), tuple(complex(z) for z in ordered))


# ----------------------------------------------------------------------------
# paths
@dataclass(frozen=True)
class LinearSegment:
    start: tuple[complex, complex]
    end: tuple[complex, complex]

    def point(self, s: float) -> tuple[complex, complex]:
        (t0, e0), (t1, e1) = self.start, self.end
        return t0 + s * (t1 - t0), e0 + s * (e1 - e0)

    def velocity(self, s: float) -> tuple[complex, complex]:
        (t0, e0), (t1, e1) = self.start, self.end
        return t1 - t0, e1 - e0

    def reversed(self) -> "LinearSegment":
        return LinearSegment(self.end, self.start)

    def to_dict(self) -> dict:
        return {"kind": "line", "start": _pt(self.start), "end": _pt(self.end)}


@dataclass(frozen=True)
class ArcSegment:
    """Arc center + radius*exp(i*theta), theta0 -> theta1, in the t-plane
    (eps fixed) or in the eps-plane (t fixed)."""

    center: complex
    radius: float
    theta0: float
    theta1: float
    plane: str = "t"
    fixed: complex = 0j

    def __post_init__(self):
        if self.plane not in ("t", "eps"):
            raise ValueError("plane must be 't' or 'eps'")

    def _moving(self, s):
        return self.center + self.radius * np.exp(1j * (self.theta0 + s * (self.theta1 - self.theta0)))

    def point(self, s: float) -> tuple[complex, complex]:
        w = complex(self._moving(s))
        return (w, self.fixed) if self.plane == "t" else (self.fixed, w)

    def velocity(self, s: float) -> tuple[complex, complex]:
        dw = complex(1j * (self.theta1 - self.theta0) * (self._moving(s) - self.center))
        return (dw, 0j) if self.plane == "t" else (0j, dw)

    @property
    def start(self):
        return self.point(0.0)

    @property
    def end(self):
        return self.point(1.0)

    def reversed(self) -> "ArcSegment":
        return ArcSegment(self.center, self.radius, self.theta1, self.theta0, self.plane, self.fixed)

    def to_dict(self) -> dict:
        return {
            "kind": "arc",
            "plane": self.plane,
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "theta": [self.theta0, self.theta1],
            "fixed": [self.fixed.real, self.fixed.imag],
        }


def _pt(p):
    return [[p[0].real, p[0].imag], [p[1].real, p[1].imag]]


Segment = LinearSegment | ArcSegment


@dataclass(frozen=True)
class PathSpec:
    segments: tuple = field(default_factory=tuple)

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for a, b in zip(segs, segs[1:]):
            (ta, ea), (tb, eb) = a.point(1.0), b.point(0.0)
            if abs(ta - tb) > 1e-9 * max(1, abs(ta)) or abs(ea - eb) > 1e-9 * max(1, abs(ea)):
                raise ValueError("path segments are not continuous")

    @classmethod
    def line(cls, start: tuple[complex, complex], end: tuple[complex, complex]) -> "PathSpec":
        start = (complex(start[0]), complex(start[1]))
        end = (complex(end[0]), complex(end[1]))
        if start == end:
            return cls(())
        return cls((LinearSegment(start, end),))

    @classmethod
    def polyline(cls, points: Iterable[tuple[complex, complex]]) -> "PathSpec":
        pts = [(complex(t), complex(e)) for t, e in points]
        return cls(tuple(LinearSegment(a, b) for a, b in zip(pts, pts[1:]) if a != b))

    @property
    def start(self):
        return self.segments[0].point(0.0) if self.segments else None

    @property
    def end(self):
        return self.segments[-1].point(1.0) if self.segments else None

    def __add__(self, other: "PathSpec") -> "PathSpec":
        return PathSpec(self.segments + other.segments)

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(s.reversed() for s in reversed(self.segments)))

    def to_dict(self) -> list:
        return [s.to_dict() for s in self.segments]


# ----------------------------------------------------------------------------
# tracking
class _Family:
    """Vectorised evaluation of F(z, eps) - t and its partial derivatives."""

    def __init__(self, d: Deformation):
        n = d.n
        fc = np.zeros(n + 1, dtype=complex)
        gc = np.zeros(n + 1, dtype=complex)
        fc[: len(d.f.coeffs)] = d.f.to_complex()
        gc[: len(d.g.coeffs)] = d.g.to_complex()
        self.f = fc[::-1]
        self.g = gc[::-1]
        self.df = np.polyder(self.f) if n > 0 else np.zeros(1, dtype=complex)
        self.dg = np.polyder(self.g) if n > 0 else np.zeros(1, dtype=complex)
        self.absf = np.abs(self.f)
        self.absg = np.abs(self.g)

    def value(self, z, t, e):
        return np.polyval(self.f, z) + e * np.polyval(self.g, z) - t

    def dz(self, z, e):
        return np.polyval(self.df, z) + e * np.polyval(self.dg, z)

    def gval(self, z):
        return np.polyval(self.g, z)

    def scale(self, z, t, e):
        az = np.abs(z)
        return np.polyval(self.absf, az) + abs(e) * np.polyval(self.absg, az) + abs(t)


def _separations(z: np.ndarray) -> np.ndarray:
    if len(z) < 2:
        return np.full(len(z), np.inf)
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    return diff.min(axis=1)


def _newton(fam: _Family, z, t, e, tol, max_iter):
    for _ in range(max_iter):
        der = fam.dz(z, e)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = fam.value(z, t, e) / der
        if not np.all(np.isfinite(step)):
            return z, False
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            return z, True
    return z, False


def _track_segment(fam: _Family, seg, z: np.ndarray, cfg: TrackerConfig, budget: list[int]) -> np.ndarray:
    s = 0.0
    h = min(cfg.initial_step, _MAX_STEP)
    clean = 0
    while s < 1.0:
        h = min(h, 1.0 - s, _MAX_STEP)
        t0, e0 = seg.point(s)
        dt, de = seg.velocity(s)
        t1, e1 = seg.point(s + h) if s + h < 1.0 else seg.point(1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            zdot = (dt - fam.gval(z) * de) / fam.dz(z, e0)
        pred = z + h * zdot
        ok = bool(np.all(np.isfinite(pred)))
        collided = False
        if ok:
            znew, ok = _newton(fam, pred, t1, e1, cfg.newton_tol, 4)
        if ok:
            sep = _separations(znew)
            collided = bool(np.any(sep <= cfg.collision_guard))
            jump = np.abs(znew - pred)
            resid = np.abs(fam.value(znew, t1, e1))
            ok = (
                not collided
                and bool(np.all(jump < 0.25 * sep))
                and bool(np.all(resid <= cfg.newton_tol * fam.scale(znew, t1, e1)))
            )
        budget[0] += 1
        if budget[0] > cfg.max_steps:
            raise PathTooCloseToSigma("step budget exhausted")
        if not ok:
            h *= 0.5
            clean = 0
            if h < cfg.min_step:
                if collided:
                    raise CollisionDetected(f"roots collide near t={t1}, eps={e1}")
                raise PathTooCloseToSigma(f"step underflow near t={t1}, eps={e1}")
            continue
        z = znew
        s = s + h if s + h < 1.0 else 1.0
        clean += 1
        if clean >= 4:
            h *= 2.0
            clean = 0
    t1, e1 = seg.point(1.0)
    z, _ = _newton(fam, z, t1, e1, 1e-16, 3)
    return z


def track_fiber(
    d: Deformation, path: PathSpec, start: LabeledFiber, cfg: TrackerConfig | None = None
) -> LabeledFiber:
    """Continue every root of ``start`` along ``path``; labels are preserved."""
    cfg = cfg or TrackerConfig()
    if not path.segments:
        return start
    t0, e0 = path.start
    if abs(t0 - start.t) > 1e-9 * max(1, abs(t0)) or abs(e0 - start.eps) > 1e-9 * max(1, abs(e0)):
        raise ValueError("path does not start at the fiber's base point")
    fam = _Family(d)
    z = start.as_array()
    budget = [0]
    for seg in path.segments:
        z = _track_segment(fam, seg, z, cfg, budget)
    t1, e1 = path.end
    return LabeledFiber(complex(t1), complex(e1), tuple(complex(w) for w in z))


# ----------------------------------------------------------------------------
def critical_values(d: Deformation, eps=0, tol: float = 1e-9) -> list[complex]:
    """Distinct critical values of F(., eps), ascending by real then imaginary part."""
    if _is_exact(eps):
        F = d.at(eps) if not GaussRational.coerce(eps).is_zero() else d.f
        if F.degree < d.n and not GaussRational.coerce(eps).is_zero():
            raise LeadingCoefficientVanishes(f"c(eps) = 0 at eps={eps}")
        dF = squarefree_part(F.derivative())
        if dF.degree < 1:
            return []
        pts = all_roots(dF.to_complex())
        coeffs = F.to_complex()
    else:
        coeffs = d.coeffs_at(complex(eps))
        if abs(coeffs[-1]) <= 1e-12 * np.abs(coeffs).sum():
            raise LeadingCoefficientVanishes(f"c(eps) ~ 0 at eps={eps}")
        if len(coeffs) < 3:
            return []
        dcoef = np.array([k * coeffs[k] for k in range(1, len(coeffs))])
        pts = all_roots(dcoef)
    vals = np.polyval(coeffs[::-1], pts)
    out: list[complex] = []
    for v in vals:
        if all(abs(v - w) > tol * max(1.0, abs(w)) for w in out):
            out.append(complex(v))
    return _ascending_tolerant(out, tol)


def point_segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    u = ((p - a) * ab.conjugate()).real / abs(ab) ** 2
    u = min(1.0, max(0.0, u))
    return abs(p - (a + u * ab))


def segment_clear(a: complex, b: complex, points: Iterable[complex], margin: float) -> bool:
    return all(point_segment_distance(p, a, b) > margin for p in points)


def scalar(x) -> complex:
    """Complex value of an exact or inexact scalar."""
    return complex(x)


def angle_of(z: complex) -> float:
    """Argument in [0, 2*pi)."""
    a = math.atan2(z.imag, z.real)
    return a + 2 * math.pi if a < 0 else a
