"""Zero cycles on labeled fibers, monodromy action and projection by a factor."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Polynomial
from .errors import AmbiguousClustering, LengthMismatch, NonGenericSample, SizeMismatch, WeightsDoNotSumToZero
from .monodromy import Permutation
from .numerics import LabeledFiber

CLUSTER_TOL = 1e-8
GAP_FACTOR = 10.0


@dataclass(frozen=True)
class ZeroCycle:
    weights: tuple[int, ...]
    fiber: LabeledFiber

    def __len__(self):
        return len(self.weights)

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "fiber": self.fiber.to_dict()}


@dataclass(frozen=True)
class ProjectedCycle:
    classes: tuple[tuple[int, ...], ...]
    class_values: tuple[complex, ...]
    class_weights: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "classes": [list(c) for c in self.classes],
            "class_values": [[v.real, v.imag] for v in self.class_values],
            "class_weights": list(self.class_weights),
        }


def make_cycle(weights: Sequence[int], fiber: LabeledFiber) -> ZeroCycle:
    w = tuple(int(x) for x in weights)
    if len(w) != len(fiber):
        raise LengthMismatch(f"{len(w)} weights for a fiber of {len(fiber)} points")
    if sum(w) != 0:
        raise WeightsDoNotSumToZero(f"weights {w} sum to {sum(w)}")
    return ZeroCycle(w, fiber)


def act(sigma: Permutation, c: ZeroCycle) -> ZeroCycle:
    """sigma(C): the new weight at label i is the old weight at sigma^-1(i)."""
    if sigma.n != len(c):
        raise SizeMismatch(f"permutation of {sigma.n} points on a cycle of {len(c)}")
    inv = sigma.inverse()
    return ZeroCycle(tuple(c.weights[inv(i)] for i in range(len(c))), c.fiber)


def h_partition(h: Polynomial, fiber: LabeledFiber) -> tuple[tuple[tuple[int, ...], ...], tuple[complex, ...]]:
    """Group fiber labels by equal value of h; clustering must be unambiguous."""
    vals = h(fiber.as_array()) if len(fiber) else np.zeros(0, dtype=complex)
    vals = np.atleast_1d(np.asarray(vals, dtype=complex))
    m = len(vals)
    scale = max(1.0, float(np.max(np.abs(vals)))) if m else 1.0
    thresh = CLUSTER_TOL * scale
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(m):
        for j in range(i + 1, m):
            if abs(vals[i] - vals[j]) < thresh:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    classes = sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])
    within = max(
        (abs(vals[a] - vals[b]) for cl in classes for a in cl for b in cl if a < b), default=0.0
    )
    between = min(
        (abs(vals[a[0]] - vals[b[0]]) for i, a in enumerate(classes) for b in classes[i + 1 :]),
        default=np.inf,
    )
    if between < GAP_FACTOR * max(within, thresh):
        raise AmbiguousClustering(
            f"h-values do not separate cleanly (within {within:.3e}, between {between:.3e})"
        )
    reps = tuple(complex(np.mean(vals[list(cl)])) for cl in classes)
    return tuple(classes), reps


def project(c: ZeroCycle, h: Polynomial, fiber: LabeledFiber | None = None) -> ProjectedCycle:
    """Projected cycle h(C): labels with equal h-value merged, weights summed.

    ``fiber`` is any fiber carrying the cycle's labels (by default the
    cycle's own).  The number of classes must be len(fiber) / deg h.
    """
    fiber = fiber if fiber is not None else c.fiber
    if len(fiber) != len(c):
        raise LengthMismatch("fiber and cycle sizes differ")
    classes, reps = h_partition(h, fiber)
    if h.degree >= 1 and len(fiber) % h.degree == 0 and len(classes) != len(fiber) // h.degree:
        raise NonGenericSample(
            f"{len(classes)} classes under a degree-{h.degree} factor on {len(fiber)} points"
        )
    weights = tuple(sum(c.weights[i] for i in cl) for cl in classes)
    return ProjectedCycle(classes, reps, weights)


def is_trivial(p: ProjectedCycle) -> bool:
    return all(w == 0 for w in p.class_weights)
