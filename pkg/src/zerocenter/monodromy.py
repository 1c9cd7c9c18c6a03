"""Monodromy groups of F(., eps) and of the deformation, with classification.

Permutations are image tuples: ``sigma.images[i]`` is the label reached by
continuing root ``i`` once around a loop.  ``a * b`` is the composition
``a o b`` (apply ``b`` first).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Iterable, Sequence

from .algebra import Deformation, bad_epsilons
from .errors import (
    ClosureCapExceeded,
    DegenerateConfiguration,
    GroupMismatch,
    InfinityRelationViolated,
    InvalidInput,
    NumericFailure,
    UnexpectedPrimitive,
)
from .numerics import (
    ArcSegment,
    LabeledFiber,
    LinearSegment,
    PathSpec,
    TrackerConfig,
    angle_of,
    critical_values,
    fiber,
    match_roots,
    point_segment_distance,
    track_fiber,
)

CLOSURE_MAX_DEGREE = 9
ROTATION_STEP = 1.0 / 7.0


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def conjugate_by(self, pi: "Permutation") -> "Permutation":
        """pi o self o pi^-1 (self expressed in the labels pi maps to)."""
        return pi * self * pi.inverse()

    def is_identity(self) -> bool:
        return self.images == tuple(range(self.n))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.n):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def is_full_cycle(self) -> bool:
        c = self.cycles()
        return self.n == 1 or (len(c) == 1 and len(c[0]) == self.n)

    def __str__(self):
        c = self.cycles()
        return "".join("(" + " ".join(map(str, cyc)) + ")" for cyc in c) or "()"


@dataclass(frozen=True)
class LoopBasis:
    base_t: complex
    eps: complex
    values: tuple[complex, ...]
    petals: tuple[PathSpec, ...]
    infinity: PathSpec
    radius: float
    rotation: float

    def provenance(self) -> dict:
        return {
            "base_t": [self.base_t.real, self.base_t.imag],
            "eps": [self.eps.real, self.eps.imag],
            "R": self.radius,
            "rotation_rad": self.rotation,
            "petal_order": [[v.real, v.imag] for v in self.values],
        }


@dataclass(frozen=True)
class PermGroup:
    n: int
    generators: tuple[Permutation, ...]
    labels: tuple[str, ...] = ()
    elements: frozenset | None = None
    infinity: Permutation | None = None
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def order(self) -> int | None:
        return len(self.elements) if self.elements is not None else None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "generators": [list(g.images) for g in self.generators],
            "labels": list(self.labels),
            "order": self.order,
            "infinity": list(self.infinity.images) if self.infinity else None,
        }


@dataclass(frozen=True)
class GroupClass:
    tag: str
    p: int | None = None
    blocks: tuple[tuple[int, ...], ...] | None = None
    order: int | None = None

    def __str__(self):
        if self.tag == "Imprimitive":
            return f"Imprimitive({[set(b) for b in self.blocks]})"
        if self.p is not None:
            return f"{self.tag}({self.p})"
        return self.tag

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "p": self.p,
            "blocks": [list(b) for b in self.blocks] if self.blocks else None,
            "order": self.order,
        }


# ----------------------------------------------------------------------------
# loops
def _petal_radii(values: Sequence[complex], R: float) -> list[float]:
    radii = []
    for i, v in enumerate(values):
        others = [abs(v - w) for j, w in enumerate(values) if j != i]
        # a third (not half) of the gap leaves room for corridors between disks
        r = min(others) / 3.0 if others else 0.25 * (R - abs(v))
        radii.append(min(r, 0.25 * (R - abs(v))))
    return radii


def loop_basis(critical_vals: Sequence[complex], eps=0, max_rotations: int = 44) -> LoopBasis:
    """Petal loops around each critical value plus the loop around infinity.

    The base point sits at radius R = 2(1 + max|v|), on the positive real
    axis unless some petal corridor passes too close to another critical
    value, in which case it is rotated clockwise in steps of 1/7 rad.  When
    a full turn finds no clear direction the petal radii are halved and the
    search repeats.
    """
    values = [complex(v) for v in critical_vals]
    e = complex(eps)
    for i, v in enumerate(values):
        for w in values[i + 1 :]:
            if abs(v - w) <= 1e-9 * max(1.0, abs(v)):
                raise DegenerateConfiguration(f"critical values {v} and {w} coincide")
    R = 2.0 * (1.0 + max((abs(v) for v in values), default=0.0))
    found = None
    for shrink in (1.0, 0.5, 0.25, 0.125):
        radii = [shrink * r for r in _petal_radii(values, R)]
        for k in range(max_rotations):
            rot = -k * ROTATION_STEP
            base = R * complex(math.cos(rot), math.sin(rot))
            entries = [v + r * (base - v) / abs(base - v) for v, r in zip(values, radii)]
            if all(
                point_segment_distance(w, base, entries[i]) > 1.1 * rw
                for i in range(len(values))
                for j, (w, rw) in enumerate(zip(values, radii))
                if j != i
            ):
                found = (base, radii, entries, rot)
                break
        if found:
            break
    if found is None:
        raise DegenerateConfiguration("no clear base point direction found")
    base, radii, entries, rot = found

    def key(i):
        rel = angle_of((values[i] - base) / base)
        return (round(rel, 12), abs(values[i] - base))

    order = sorted(range(len(values)), key=key)
    petals = []
    for i in order:
        v, r, entry = values[i], radii[i], entries[i]
        phi = math.atan2((entry - v).imag, (entry - v).real)
        petals.append(
            PathSpec(
                (
                    LinearSegment((base, e), (entry, e)),
                    ArcSegment(v, r, phi, phi + 2 * math.pi, "t", e),
                    LinearSegment((entry, e), (base, e)),
                )
            )
        )
    outer = 2.0 * R * base / abs(base)
    theta = math.atan2(base.imag, base.real)
    infinity = PathSpec(
        (
            LinearSegment((base, e), (outer, e)),
            ArcSegment(0j, 2.0 * R, theta, theta - 2 * math.pi, "t", e),
            LinearSegment((outer, e), (base, e)),
        )
    )
    return LoopBasis(
        base_t=base,
        eps=e,
        values=tuple(values[i] for i in order),
        petals=tuple(petals),
        infinity=infinity,
        radius=R,
        rotation=rot,
    )


def loop_permutation(d: Deformation, loop: PathSpec, start: LabeledFiber, cfg: TrackerConfig | None = None) -> Permutation:
    end = track_fiber(d, loop, start, cfg)
    return Permutation(tuple(match_roots(end.roots, start.roots, radius=1e-8)))


def ordered_product(perms: Iterable[Permutation], n: int) -> Permutation:
    """Permutation of travelling the loops one after another, first loop first."""
    acc = Permutation.identity(n)
    for p in perms:
        acc = p * acc
    return acc


def monodromy_at(
    d: Deformation, eps=0, cfg: TrackerConfig | None = None, labels: Sequence[complex] | None = None
) -> PermGroup:
    """Monodromy group of F(., eps) on the fiber over the loop base.

    Labels are canonical unless ``labels`` (approximate roots over the base
    point, see ``loop_basis``) fix another order.

    Raises InfinityRelationViolated unless the clockwise loop at infinity
    undoes the ordered product of the petal permutations.
    """
    cvs = critical_values(d, eps)
    basis = loop_basis(cvs, eps)
    start = fiber(d, basis.base_t, eps, cfg, labels=labels)
    n = len(start)
    gens = tuple(loop_permutation(d, loop, start, cfg) for loop in basis.petals)
    inf = loop_permutation(d, basis.infinity, start, cfg)
    product = ordered_product(gens, n)
    if not (inf * product).is_identity():
        raise InfinityRelationViolated(
            f"petal product {product} times infinity loop {inf} is not the identity"
        )
    labels = tuple(f"{v.real:.12g}{v.imag:+.12g}i" for v in basis.values)
    prov = {"loop_basis": basis.provenance(), "fiber": start.to_dict()}
    return PermGroup(n=n, generators=gens, labels=labels, infinity=inf, provenance=prov)


# ----------------------------------------------------------------------------
# group structure
def closure(g: PermGroup) -> PermGroup:
    """Breadth-first closure of the generators (n <= 9)."""
    if g.n > CLOSURE_MAX_DEGREE:
        raise ClosureCapExceeded(f"closure capped at degree {CLOSURE_MAX_DEGREE}, got {g.n}")
    if g.elements is not None:
        return g
    ident = tuple(range(g.n))
    gens = [p.images for p in g.generators]
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple(s[i] for i in x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    elements = frozenset(Permutation(e) for e in seen)
    return PermGroup(g.n, g.generators, g.labels, elements, g.infinity, g.provenance)


def _orbit(start, gens: Sequence[Permutation], act) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = act(s, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_transitive(g: PermGroup) -> bool:
    if g.n <= 1:
        return True
    return len(_orbit(0, g.generators, lambda s, x: s(x))) == g.n


def pair_orbit_size(g: PermGroup) -> int:
    return len(_orbit((0, 1), g.generators, lambda s, x: (s(x[0]), s(x[1]))))


def is_two_transitive(g: PermGroup) -> bool:
    if g.n <= 1:
        return True
    return pair_orbit_size(g) == g.n * (g.n - 1)


def _finest_block_system(n: int, gens: Sequence[Permutation], j: int) -> list[tuple[int, ...]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = [(0, j)]
    parent[find(j)] = find(0)
    while pending:
        a, b = pending.pop()
        for s in gens:
            x, y = find(s(a)), find(s(b))
            if x != y:
                parent[y] = x
                pending.append((s(a), s(b)))
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])


def block_systems(g: PermGroup) -> list[tuple[tuple[int, ...], ...]]:
    """Distinct nontrivial block systems, each the finest one joining 0 and some j.

    Listed in order of the first j producing them; empty iff primitive.
    """
    if not is_transitive(g):
        raise InvalidInput("block systems need a transitive group")
    out = []
    for j in range(1, g.n):
        system = tuple(_finest_block_system(g.n, g.generators, j))
        if len(system) > 1 and system not in out:
            out.append(system)
    return out


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, math.isqrt(n) + 1))


def _has_full_cycle(g: PermGroup) -> bool:
    if g.infinity is not None and g.infinity.is_full_cycle():
        return True
    if any(p.is_full_cycle() for p in g.generators):
        return True
    if g.n <= CLOSURE_MAX_DEGREE:
        return any(p.is_full_cycle() for p in closure(g).elements)
    return False


def classify(g: PermGroup) -> GroupClass:
    """Two-transitive, imprimitive, cyclic of prime degree or dihedral of prime degree."""
    if not is_transitive(g):
        raise InvalidInput("classification needs a transitive group")
    order = closure(g).order if g.n <= CLOSURE_MAX_DEGREE else None
    if is_two_transitive(g):
        return GroupClass("TwoTransitive", order=order)
    systems = block_systems(g)
    if systems:
        return GroupClass("Imprimitive", blocks=systems[0], order=order)
    n = g.n
    if not _is_prime(n) or not _has_full_cycle(g):
        raise UnexpectedPrimitive(f"primitive group of degree {n} outside the expected cases")
    if order is None:
        # primitive, not 2-transitive, prime degree: a subgroup of AGL(1, p),
        # which acts freely on ordered pairs
        order = pair_orbit_size(g)
        has_involution = order == 2 * n
    else:
        has_involution = any(p.order() == 2 for p in closure(g).elements)
    if order == n:
        return GroupClass("CyclicPrime", p=n, order=order)
    if order == 2 * n and has_involution:
        return GroupClass("DihedralChebyshev", p=n, order=order)
    raise UnexpectedPrimitive(f"primitive group of prime degree {n} and order {order}")


# ----------------------------------------------------------------------------
# deformation group
def epsilon_samples() -> Iterable[Fraction]:
    """1/7, 1/5, 1/11, 1/13, 1/17, ... (7 and 5 first, then the primes above 7)."""
    yield Fraction(1, 7)
    yield Fraction(1, 5)
    for p in count(11):
        if _is_prime(p):
            yield Fraction(1, p)


def transport_labels(
    d: Deformation, src: PermGroup, dst: PermGroup, cfg: TrackerConfig | None = None
) -> Permutation:
    """pi with pi(i) = label in ``dst``'s fiber reached by root i of ``src``'s fiber.

    Path: eps-segment at the source base t, then a t-segment at the target eps.
    """
    fs = src.provenance["fiber"]
    fd = dst.provenance["fiber"]
    t_s, e_s = complex(*fs["t"]), complex(*fs["eps"])
    t_d, e_d = complex(*fd["t"]), complex(*fd["eps"])
    start = LabeledFiber(t_s, e_s, tuple(complex(*z) for z in fs["roots"]))
    target = [complex(*z) for z in fd["roots"]]
    path = PathSpec.polyline([(t_s, e_s), (t_s, e_d), (t_d, e_d)])
    end = track_fiber(d, path, start, cfg)
    return Permutation(tuple(match_roots(end.roots, target, radius=1e-8)))


def groups_agree(a: PermGroup, b: PermGroup, pi: Permutation) -> bool:
    """Is pi a o b-generated group equal, elementwise, to the group of a?"""
    moved = PermGroup(b.n, tuple(s.conjugate_by(pi) for s in b.generators))
    if a.n <= CLOSURE_MAX_DEGREE:
        return closure(a).elements == closure(moved).elements
    # beyond the closure cap only orbit-level invariants are compared
    return (
        is_transitive(a) == is_transitive(moved)
        and pair_orbit_size(a) == pair_orbit_size(moved)
        and block_systems(a) == block_systems(moved)
    )


def deformation_group(d: Deformation, cfg: TrackerConfig | None = None, attempts: int = 3) -> PermGroup:
    """The monodromy group G of f + eps*g, from two eps-slices and a transport check."""
    bad = bad_epsilons(d)
    samples = (e for e in epsilon_samples() if bad.distance(complex(e)) > 1e-6)
    e1 = next(samples)
    failures = []
    for _ in range(attempts):
        e2 = next(samples)
        try:
            g1 = monodromy_at(d, e1, cfg)
            g2 = monodromy_at(d, e2, cfg)
            pi = transport_labels(d, g2, g1, cfg)
        except NumericFailure as exc:
            failures.append(f"eps={e1},{e2}: {exc}")
            e1 = e2
            continue
        if groups_agree(g1, g2, pi):
            prov = dict(g1.provenance)
            prov.update(
                {
                    "eps_samples": [str(e1), str(e2)],
                    "transport": list(pi.images),
                    "bad_epsilons": bad.to_dict(),
                }
            )
            g = PermGroup(g1.n, g1.generators, g1.labels, None, g1.infinity, prov)
            return closure(g) if g.n <= CLOSURE_MAX_DEGREE else g
        failures.append(f"eps={e1},{e2}: transported groups differ")
        e1 = e2
    raise GroupMismatch("; ".join(failures))
