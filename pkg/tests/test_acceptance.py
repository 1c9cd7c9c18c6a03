"""Acceptance gate: one test per criterion, each recorded as a PASS/FAIL line."""
import cmath
import time

import numpy as np

from conftest import ACCEPTANCE, P, angular_labels
from zerocenter.algebra import Deformation, compose
from zerocenter.center import (
    decide_infinitesimal,
    decide_tangential,
    displacement,
    melnikov2_formula,
    melnikov_fit,
)
from zerocenter.cycles import is_trivial, make_cycle, project
from zerocenter.errors import InfinityRelationViolated, NumericFailure
from zerocenter.monodromy import (
    classify,
    closure,
    groups_agree,
    loop_basis,
    monodromy_at,
    transport_labels,
)
from zerocenter.numerics import PathSpec, critical_values, fiber, track_fiber

REFERENCE_M2 = -17 / 12


def record(name, ok, detail):
    ACCEPTANCE[name] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
    assert ok, detail


def closed_form_delta(t, eps, weights, a=0.5, b=1.0, c=1 / 3):
    n0, n1, n2, n3 = weights
    disc = cmath.sqrt(eps**2 * b**2 - 4 * (eps * c - t) * (1 + eps * a))
    return eps * b * (-n0 + n1 - n2 + n3) * disc / (2 * (1 + eps * a) ** 2)


def test_criterion_1_closed_form(ex2, ex2_fiber):
    w = (1, -1, 1, -1)
    c = make_cycle(w, ex2_fiber)
    start = time.perf_counter()
    err = 0.0
    for t in (2, 2 + 1j, 3):
        for e in (0.0, 1 / 20, 1 / 10):
            s = displacement(ex2, c, t, e)
            err = max(err, abs(s.value - closed_form_delta(t, e, w)))
    dt = time.perf_counter() - start
    record("1 Example 2 closed form", err < 1e-9 and dt < 5,
           f"max |Delta - closed form| = {err:.2e} (tol 1e-9), {dt:.2f} s (< 5 s)")


def test_criterion_2_center(ex2, ex2_fiber):
    c = make_cycle((1, 1, -1, -1), ex2_fiber)
    worst = max(
        abs(displacement(ex2, c, t, e).value)
        for t in (2, 2 + 1j, 3, 1 + 1j, 1.5 - 0.5j)
        for e in (0.0, 1 / 20, 1 / 10, 3 / 20, 1 / 5)
    )
    dec = decide_infinitesimal(ex2, c)
    ok = worst < 1e-9 and dec.is_center and dec.h == P(0, 0, 1) and dec.validate(ex2)
    record("2 Example 2 center", ok,
           f"max |Delta| on 5x5 grid = {worst:.2e} (tol 1e-9); verdict {dec.verdict}, h = {dec.h}")


def test_criterion_3_tangential(ex1, ex1_fiber):
    c = make_cycle((2, 1, -1, -2, -1, 1), ex1_fiber)
    res = decide_tangential(ex1, c)
    radii = sorted({round(abs(t), 9) for t in res.samples})
    ok = res.verdict and res.max_m1 < 1e-9 and len(res.samples) == 24 and radii == [2.0, 4.0]
    record("3 Example 1 tangential", ok,
           f"max |M1| = {res.max_m1:.2e} over {len(res.samples)} points on |t| in {radii} (tol 1e-9)")


def test_criterion_4_infinitesimal(ex1, ex1_fiber):
    c = make_cycle((2, 1, -1, -2, -1, 1), ex1_fiber)
    rel = 0.0
    for t in (1, 2, 1 + 1j):
        m2 = melnikov2_formula(ex1, c, t)
        fit = melnikov_fit(ex1, c, t, k=2).coefficients[1]
        rel = max(rel, abs(m2 - fit) / abs(m2))
    m2_1 = melnikov2_formula(ex1, c, 1)
    dec = decide_infinitesimal(ex1, c)
    matches = abs(m2_1 - REFERENCE_M2) <= 1e-6 * abs(REFERENCE_M2)
    ok = rel < 1e-6 and abs(m2_1) > 0.1 and dec.verdict == "NoCenter"
    record("4 Example 1 infinitesimal", ok,
           f"formula vs fit rel diff {rel:.2e} (tol 1e-6); |M2(1)| = {abs(m2_1):.6g} (> 0.1); "
           f"verdict {dec.verdict}; M2(1) = {m2_1.real:.6g} "
           f"{'matches' if matches else 'does not match'} the reference constant -17/12")


def _chebyshev(n):
    t0, t1 = P(1), P(0, 1)
    for _ in range(n - 1):
        t0, t1 = t1, P(0, 2) * t1 - t0
    return t1


def test_criterion_5_classification():
    out, ok = [], True

    def run(f, labels=None):
        d = Deformation(f, P(0))
        t = time.perf_counter()
        if labels is not None:
            base = loop_basis(critical_values(d, 0), 0).base_t
            g = monodromy_at(d, 0, labels=labels(base))
        else:
            g = monodromy_at(d, 0)
        cls = classify(g)
        return cls, closure(g).order, time.perf_counter() - t

    T5 = _chebyshev(5)
    assert T5 == P(0, 5, 0, -20, 0, 16)
    cases = [
        ("z^5", P(0, 0, 0, 0, 0, 1), None, lambda c, o: c.tag == "CyclicPrime" and c.p == 5 and o == 5),
        ("T5", T5, None, lambda c, o: c.tag == "DihedralChebyshev" and c.p == 5 and o == 10),
        ("z^4", P(0, 0, 0, 0, 1), lambda b: angular_labels(4, b),
         lambda c, o: c.tag == "Imprimitive" and c.blocks == ((0, 2), (1, 3))),
        ("z^4+z", P(0, 1, 0, 0, 1), None, lambda c, o: c.tag == "TwoTransitive" and o == 24),
    ]
    for name, f, labels, check in cases:
        cls, order, dt = run(f, labels)
        good = check(cls, order) and dt < 2
        ok &= good
        out.append(f"{name} -> {cls} order {order} in {dt:.2f} s")
    record("5 classification suite", ok, "; ".join(out))


def test_criterion_6_transport():
    d = Deformation(P(0, 0, 1, 0, 1), P(0, 0, 0, 1))
    g1 = monodromy_at(d, 1 / 7)
    g2 = monodromy_at(d, 1 / 5)
    pi = transport_labels(d, g2, g1)
    ok = groups_agree(g1, g2, pi)
    record("6 group invariance along eps", ok,
           f"closures at eps=1/7 and 1/5 equal after transport {pi}: {ok} (order {closure(g1).order})")


def _random_poly(rng, deg, lo=-3, hi=3):
    c = [int(x) for x in rng.integers(lo, hi + 1, size=deg + 1)]
    while c[-1] == 0:
        c[-1] = int(rng.integers(lo, hi + 1))
    return P(*c)


def _trivial_weights(rng, classes, n):
    w = [0] * n
    for cl in classes:
        vals = [int(x) for x in rng.integers(-3, 4, size=len(cl) - 1)]
        if not any(vals):
            vals[0] = 1
        vals.append(-sum(vals))
        for i, v in zip(cl, vals):
            w[i] = v
    return w


def test_criterion_7_sufficiency():
    rng = np.random.default_rng(20240607)
    hs = [P(0, 0, 1), P(0, 0, 0, 1), P(0, 1, 1)]
    failures, worst = [], 0.0
    for k in range(50):
        dg = int(rng.integers(0, 4))
        df = int(rng.integers(max(1, dg), 4))
        ft, gt = _random_poly(rng, df), _random_poly(rng, dg)
        h = hs[k % 3]
        d = Deformation(compose(ft, h), compose(gt, h))
        T = 3 * (1 + max(abs(v) for v in critical_values(d, 0)))
        base = fiber(d, T, 0)
        proj = project(make_cycle([0] * len(base), base), h)
        c = make_cycle(_trivial_weights(rng, proj.classes, len(base)), base)
        assert is_trivial(project(c, h))
        try:
            m = max(
                abs(displacement(d, c, T * cmath.exp(1j * th), e).value)
                for th in (0.0, 0.3, 0.6)
                for e in (0.01, 0.02, 0.03)
            )
        except NumericFailure as exc:
            failures.append(f"instance {k}: {exc}")
            continue
        worst = max(worst, m)
        if m >= 1e-9:
            failures.append(f"instance {k}: max |Delta| = {m:.2e}")
    record("7 sufficiency property", not failures,
           f"50 instances, max |Delta| = {worst:.2e} (tol 1e-9), failures: {len(failures)} {failures[:3]}")


def test_criterion_8_numerics():
    rng = np.random.default_rng(7)
    worst, failures = 0.0, []
    for k in range(100):
        n = int(rng.integers(2, 7))
        f = _random_poly(rng, n)
        g = _random_poly(rng, int(rng.integers(0, n + 1)))
        d = Deformation(f, g)
        T = 3 * (1 + max((abs(v) for v in critical_values(d, 0)), default=0.0))
        th = rng.uniform(0, 2 * np.pi, size=3)
        r = rng.uniform(1.0, 1.5, size=3)
        e = rng.uniform(-0.02, 0.02, size=3) + 1j * rng.uniform(-0.02, 0.02, size=3)
        pts = [(T, 0j)] + [(T * r[j] * cmath.exp(1j * th[j]), complex(e[j])) for j in range(3)] + [(T, 0j)]
        loop = PathSpec.polyline(pts)
        start = fiber(d, T, 0)
        try:
            there = track_fiber(d, loop, start)
            back = track_fiber(d, loop.reversed(), there)
        except NumericFailure as exc:
            failures.append(f"loop {k}: {exc}")
            continue
        err = float(np.max(np.abs(back.as_array() - start.as_array())))
        worst = max(worst, err)
        if err >= 1e-10:
            failures.append(f"loop {k}: round trip error {err:.2e}")
    violations = 0
    for k in range(20):
        f = _random_poly(rng, int(rng.integers(2, 7)))
        try:
            monodromy_at(Deformation(f, P(0)), 0)
        except InfinityRelationViolated as exc:
            violations += 1
            failures.append(f"monodromy {k}: {exc}")
    record("8 numerics properties", not failures,
           f"100 loops, max round-trip error {worst:.2e} (tol 1e-10); "
           f"infinity relation violations {violations}/20; failures {failures[:3]}")
