"""Exact univariate polynomials over the Gaussian rationals.

Coefficients are ``GaussRational`` values (pairs of ``fractions.Fraction``).
Besides ring arithmetic the module provides functional decomposition
(right composition factors), the t-discriminant of a deformation
``f + eps*g - t`` and the finite set of bad deformation parameters.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import CoefficientParseError


class GaussRational:
    """An element ``re + im*i`` of Q(i), stored as two reduced fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, str):
            return parse_coefficient(x)
        if isinstance(x, (int, Rational)):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {x!r} to an exact Gaussian rational")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __add__(self, other):
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        result = GaussRational(1)
        base = self
        if k < 0:
            base, k = GaussRational(1) / base, -k
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRational({str(self)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "" if abs(self.im) == 1 else str(abs(self.im))
        if self.re == 0:
            return ("-" if self.im < 0 else "") + im + "i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"


def _exact_or_none(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussRational(x)
    return None


ZERO = GaussRational(0)
ONE = GaussRational(1)

_NUM = r"\d+(?:/\d+)?"
_COEFF_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<isign>[+-])?(?P<im>{_NUM})?i)?$"
)


def _num(text: str) -> Fraction:
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise CoefficientParseError(f"zero denominator in {text!r}")
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def parse_coefficient(text: str) -> GaussRational:
    """Parse ``a/b``, ``a/b+c/di``, ``3``, ``-i``, ``1/2i``; floats are rejected."""
    s = text.strip().replace(" ", "")
    m = _COEFF_RE.match(s)
    if not s or m is None:
        raise CoefficientParseError(f"not an exact Gaussian rational: {text!r}")
    has_i = s.endswith("i")
    if m.group("re") is not None and has_i and m.group("isign") is None:
        # "2i" matched as re="2" followed by "i": reinterpret as pure imaginary
        # "1/2+3i" style keeps an explicit sign between the parts
        return GaussRational(0, _num(m.group("re")))
    re_part = _num(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if has_i:
        im_part = _num(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("isign") == "-":
            im_part = -im_part
    return GaussRational(re_part, im_part)


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class Polynomial:
    """Dense polynomial with ascending exact coefficients; immutable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [GaussRational.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[GaussRational, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @classmethod
    def z(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> GaussRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, k: int) -> GaussRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def monic(self) -> "Polynomial":
        lc = self.lc()
        return Polynomial(c / lc for c in self.coeffs)

    def normalized(self) -> "Polynomial":
        """Monic with zero constant term (representative of h modulo affine maps)."""
        m = self.monic()
        return Polynomial((ZERO,) + m.coeffs[1:])

    # ring operations -----------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [ZERO] * (dq + 1)
        inv = ONE / other.lc()
        db = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + db] * inv
            quot[k] = c
            if c.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return Polynomial(quot), Polynomial(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        ex = _exact_or_none(other)
        if ex is not None:
            return self.coeffs == Polynomial([ex]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # calculus / composition ----------------------------------------------
    def derivative(self) -> "Polynomial":
        return Polynomial(c * k for k, c in enumerate(self.coeffs) if k > 0)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        return compose(self, inner)

    def __call__(self, z):
        """Horner evaluation; exact for exact arguments, complex otherwise."""
        ex = _exact_or_none(z)
        if ex is not None:
            acc = ZERO
            for c in reversed(self.coeffs):
                acc = acc * ex + c
            return acc
        if isinstance(z, np.ndarray):
            return np.polyval(self.to_complex()[::-1], z) if self.coeffs else np.zeros_like(z, dtype=complex)
        acc = 0j
        for c in reversed(self.to_complex()):
            acc = acc * z + c
        return acc

    def to_complex(self) -> np.ndarray:
        """Ascending complex128 coefficient array (empty for zero)."""
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def norm1(self) -> float:
        return float(sum(abs(complex(c)) for c in self.coeffs))

    # formatting ------------------------------------------------------------
    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        return f"Polynomial({self.to_strings()!r})"

    def __str__(self):
        return self.format("z")

    def format(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mon = "" if k == 0 else var + ("" if k == 1 else str(k).translate(_SUPERSCRIPT))
            if k > 0 and c == ONE:
                body, neg = mon, False
            elif k > 0 and c == -ONE:
                body, neg = mon, True
            elif c.im == 0:
                body, neg = str(abs(c.re)) + mon, c.re < 0
            else:
                body, neg = f"({c})" + mon, False
            terms.append(("-" if neg else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([x])


def poly_from_strings(coeffs: Sequence[str]) -> Polynomial:
    return Polynomial(parse_coefficient(c) if isinstance(c, str) else c for c in coeffs)


def eval_poly(p: Polynomial, z):
    return p(z)


def derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def compose(outer: Polynomial, inner: Polynomial) -> Polynomial:
    """Return ``outer(inner(z))`` exactly (Horner in the ring)."""
    acc = Polynomial()
    for c in reversed(outer.coeffs):
        acc = acc * inner + Polynomial([c])
    return acc


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q(i); gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree < 1:
        return p
    return (p // poly_gcd(p, p.derivative())).monic()


# functional decomposition ----------------------------------------------------
def express_in(p: Polynomial, h: Polynomial) -> Polynomial | None:
    """Return ``q`` with ``p == compose(q, h)``, or None when p is not in C[h].

    The h-adic expansion of p is built by repeated division; every remainder
    has to be a constant.
    """
    if h.degree < 1:
        raise ValueError("express_in needs deg h >= 1")
    digits = []
    rest = p
    while not rest.is_zero():
        rest, r = divmod(rest, h)
        if r.degree > 0:
            return None
        digits.append(r.coeff(0))
    return Polynomial(digits)


def _right_factor_candidate(p: Polynomial, r: int) -> Polynomial:
    """Monic, zero-constant h of degree r forced by the top coefficients of p."""
    n = p.degree
    s = n // r
    q = p.monic()
    h = [ZERO] * r + [ONE]
    for k in range(1, r):
        # coefficient of z^(n-k) in h^s is s*h_{r-k} + (terms in h_{r-1..r-k+1})
        partial = Polynomial(h) ** s
        h[r - k] = (q.coeff(n - k) - partial.coeff(n - k)) / s
    return Polynomial(h)


def right_factors(p: Polynomial) -> list[Polynomial]:
    """All normalized right composition factors h, 1 < deg h < deg p, by degree."""
    n = p.degree
    if n < 2:
        return []
    out = []
    for r in range(2, n):
        if n % r:
            continue
        h = _right_factor_candidate(p, r)
        if express_in(p, h) is not None:
            out.append(h)
    return out


def affine_in(g: Polynomial, f: Polynomial) -> tuple[GaussRational, GaussRational] | None:
    """Return (alpha, beta) with g = alpha*f + beta, or None."""
    if f.degree < 1:
        return None
    q = express_in(g, f)
    if q is None or q.degree > 1:
        return None
    return q.coeff(1), q.coeff(0)


def common_right_factors(f: Polynomial, g: Polynomial) -> list[Polynomial]:
    """Normalized h (deg h > 1) with f and g both in C[h], sorted by degree.

    Includes h = f (normalized) when g is affine in f.
    """
    if f.degree < 1:
        raise ValueError("common_right_factors needs deg f >= 1")
    out = [h for h in right_factors(f) if g.is_constant() or express_in(g, h) is not None]
    if f.degree > 1 and affine_in(g, f) is not None:
        out.append(f.normalized())
    return out


# deformations, discriminants, bad parameters ---------------------------------
@dataclass(frozen=True)
class Deformation:
    """The family F(z, eps) = f(z) + eps*g(z)."""

    f: Polynomial
    g: Polynomial

    def __post_init__(self):
        if self.f.degree < 1 and self.g.degree < 1:
            raise ValueError("deformation needs deg f >= 1 or deg g >= 1")

    @property
    def n(self) -> int:
        return max(self.f.degree, self.g.degree)

    @property
    def m(self) -> int:
        """Degree of f, the size of the unperturbed fiber."""
        return self.f.degree

    def leading(self) -> Polynomial:
        """c(eps), the coefficient of z^n as a polynomial in eps."""
        return Polynomial([self.f.coeff(self.n), self.g.coeff(self.n)])

    def at(self, eps) -> Polynomial:
        """F(., eps) as an exact polynomial (eps must be exact)."""
        e = GaussRational.coerce(eps)
        return self.f + self.g * Polynomial([e])

    def coeffs_at(self, eps: complex) -> np.ndarray:
        """Complex ascending coefficients of F(., eps), padded to length n+1."""
        n = self.n
        fc = np.zeros(n + 1, dtype=complex)
        gc = np.zeros(n + 1, dtype=complex)
        fc[: len(self.f.coeffs)] = self.f.to_complex()
        gc[: len(self.g.coeffs)] = self.g.to_complex()
        return fc + complex(eps) * gc


@dataclass(frozen=True)
class BivariatePolynomial:
    """Polynomial in (t, eps) stored as ascending t-coefficients in Q(i)[eps]."""

    coeffs: tuple[Polynomial, ...]

    @property
    def degree_t(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree_eps(self) -> int:
        return max((c.degree for c in self.coeffs), default=-1)

    def at_eps(self, eps) -> Polynomial:
        e = GaussRational.coerce(eps)
        return Polynomial(c(e) for c in self.coeffs)

    def __call__(self, t, eps):
        ex_t, ex_e = _exact_or_none(t), _exact_or_none(eps)
        if ex_t is not None and ex_e is not None:
            return self.at_eps(ex_e)(ex_t)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * complex(t) + c(complex(eps))
        return acc


def _gauss_int_det(rows: list[list[tuple[int, int]]]) -> tuple[int, int]:
    """Bareiss fraction-free determinant over the Gaussian integers."""
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    prev = (1, 0)
    for k in range(n - 1):
        if a[k][k] == (0, 0):
            for i in range(k + 1, n):
                if a[i][k] != (0, 0):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return (0, 0)
        pr, pi = a[k][k]
        qr, qi = prev
        qn = qr * qr + qi * qi
        for i in range(k + 1, n):
            xr, xi = a[i][k]
            for j in range(k + 1, n):
                yr, yi = a[i][j]
                br, bi = a[k][j]
                # (a_kk * a_ij - a_ik * a_kj) / prev, exact in Z[i]
                nr = (pr * yr - pi * yi) - (xr * br - xi * bi)
                ni = (pr * yi + pi * yr) - (xr * bi + xi * br)
                a[i][j] = ((nr * qr + ni * qi) // qn, (ni * qr - nr * qi) // qn)
            a[i][k] = (0, 0)
        prev = a[k][k]
    r, i = a[n - 1][n - 1]
    return (sign * r, sign * i)


def exact_det(matrix: list[list[GaussRational]]) -> GaussRational:
    """Determinant of a square matrix over Q(i)."""
    n = len(matrix)
    if n == 0:
        return ONE
    rows = []
    scale = Fraction(1)
    for row in matrix:
        den = reduce(lcm, (c.re.denominator for c in row), 1)
        den = reduce(lcm, (c.im.denominator for c in row), den)
        rows.append([(int(c.re * den), int(c.im * den)) for c in row])
        scale *= den
    r, i = _gauss_int_det(rows)
    return GaussRational(Fraction(r) / scale, Fraction(i) / scale)


def sylvester_matrix(a: Sequence[GaussRational], b: Sequence[GaussRational]) -> list[list[GaussRational]]:
    """Sylvester matrix of ascending coefficient lists (formal degrees len-1)."""
    da, db = len(a) - 1, len(b) - 1
    size = da + db
    ad, bd = list(reversed(a)), list(reversed(b))
    rows = []
    for i in range(db):
        rows.append([ZERO] * i + ad + [ZERO] * (size - da - 1 - i))
    for i in range(da):
        rows.append([ZERO] * i + bd + [ZERO] * (size - db - 1 - i))
    return rows


def resultant(a: Sequence[GaussRational], b: Sequence[GaussRational]) -> GaussRational:
    """Raw Sylvester resultant of two ascending coefficient lists."""
    if len(a) < 2 and len(b) < 2:
        return ONE
    return exact_det(sylvester_matrix(a, b))


def interpolate(xs: Sequence[GaussRational], ys: Sequence[GaussRational]) -> Polynomial:
    """Newton divided-difference interpolation, exact."""
    xs = [GaussRational.coerce(x) for x in xs]
    coef = [GaussRational.coerce(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = Polynomial([coef[-1]]) if coef else Polynomial()
    for i in range(n - 2, -1, -1):
        p = p * Polynomial([-xs[i], 1]) + Polynomial([coef[i]])
    return p


def _interpolation_nodes(count: int) -> list[GaussRational]:
    # centred integer nodes keep intermediate integers small
    return [GaussRational(k - count // 2) for k in range(count)]


def discriminant_t(d: Deformation) -> BivariatePolynomial:
    """D(t, eps) = Res_z(F - t, dF/dz) as raw Sylvester determinant.

    The determinant is evaluated exactly on a grid of integer (t, eps) nodes
    and interpolated; deg_t D <= n-1 and deg_eps D <= 2n-1 bound the grid.
    """
    n = d.n
    if n < 1:
        raise ValueError("deformation of degree 0")
    ts = _interpolation_nodes(n)
    es = _interpolation_nodes(2 * n)
    fpad = [d.f.coeff(k) for k in range(n + 1)]
    gpad = [d.g.coeff(k) for k in range(n + 1)]
    # values[j][i] = D(ts[i], es[j])
    per_eps: list[Polynomial] = []
    for e in es:
        F = [fpad[k] + e * gpad[k] for k in range(n + 1)]
        dF = [F[k] * k for k in range(1, n + 1)]
        vals = []
        for t in ts:
            Ft = [F[0] - t] + F[1:]
            vals.append(resultant(Ft, dF))
        per_eps.append(interpolate(ts, vals))
    t_coeffs = []
    for k in range(n):
        t_coeffs.append(interpolate(es, [p.coeff(k) for p in per_eps]))
    while t_coeffs and t_coeffs[-1].is_zero():
        t_coeffs.pop()
    return BivariatePolynomial(tuple(t_coeffs))


# arithmetic in Q(i)[eps][t] for the squarefree part of D ----------------------
def _content(coeffs: Sequence[Polynomial]) -> Polynomial:
    g = Polynomial()
    for c in coeffs:
        g = poly_gcd(g, c)
        if g.degree == 0:
            break
    return g if not g.is_zero() else Polynomial([1])


def _primitive(coeffs: list[Polynomial]) -> list[Polynomial]:
    c = _content(coeffs)
    if c.degree <= 0:
        lc = coeffs[-1].lc()
        return [p * Polynomial([ONE / lc]) for p in coeffs]
    return [p // c for p in coeffs]


def _strip(coeffs: list[Polynomial]) -> list[Polynomial]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _prem(a: list[Polynomial], b: list[Polynomial]) -> list[Polynomial]:
    """Pseudo-remainder lc(b)^(da-db+1) * a mod b in R[t], R = Q(i)[eps]."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        dr = len(r) - 1
        lr = r[-1]
        shift = dr - db
        r = [c * lb for c in r]
        for j, bc in enumerate(b):
            r[j + shift] = r[j + shift] - lr * bc
        r = _strip(r[:-1])
    return r


def _bigcd(a: list[Polynomial], b: list[Polynomial]) -> list[Polynomial]:
    """Primitive gcd in Q(i)[eps][t] via the primitive PRS."""
    a, b = _primitive(_strip(a)), _primitive(_strip(b))
    if len(a) < len(b):
        a, b = b, a
    while b and len(b) > 1:
        r = _prem(a, b)
        a = b
        b = _primitive(r) if r else []
    if not b:
        return a
    return [Polynomial([1])]


def _bidiv_exact(a: list[Polynomial], b: list[Polynomial]) -> list[Polynomial]:
    r = list(a)
    db = len(b) - 1
    q = [Polynomial()] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c, rem = divmod(r[k + db], b[-1])
        if not rem.is_zero():
            raise ArithmeticError("inexact division in Q(i)[eps][t]")
        q[k] = c
        for j, bc in enumerate(b):
            r[k + j] = r[k + j] - c * bc
    return q


@dataclass(frozen=True)
class BadEpsilonSet:
    leading_vanishing: tuple[GaussRational, ...]
    degenerate: tuple[complex, ...]

    def distance(self, eps: complex) -> float:
        pts = [complex(e) for e in self.leading_vanishing] + list(self.degenerate)
        return min((abs(complex(eps) - p) for p in pts), default=float("inf"))

    def to_dict(self) -> dict:
        return {
            "leading_vanishing": [str(e) for e in self.leading_vanishing],
            "degenerate": [[v.real, v.imag] for v in self.degenerate],
            "dedup_tol": 1e-9,
        }


def _dedup(values: Iterable[complex], tol: float) -> list[complex]:
    out: list[complex] = []
    for v in values:
        if all(abs(v - w) > tol * max(1.0, abs(w)) for w in out):
            out.append(v)
    return sorted(out, key=lambda v: (round(v.real, 12), round(v.imag, 12)))


def _numeric_roots(p: Polynomial) -> list[complex]:
    from .numerics import all_roots

    p = squarefree_part(p)
    if p.degree < 1:
        return []
    # scale by the largest coefficient before leaving exact arithmetic
    big = max(max(abs(c.re), abs(c.im)) for c in p.coeffs)
    coeffs = np.array([complex(c / big) for c in p.coeffs], dtype=complex)
    return list(all_roots(coeffs))


def bad_epsilons(d: Deformation) -> BadEpsilonSet:
    """Leading-coefficient roots (exact) and parameters where critical values merge."""
    c = d.leading()
    if c.degree == 1:
        leading = (-c.coeff(0) / c.coeff(1),)
    else:
        leading = ()
    D = discriminant_t(d)
    coeffs = _strip(list(D.coeffs))
    candidates: list[complex] = []
    if len(coeffs) >= 1:
        cont = _content(coeffs)
        candidates += _numeric_roots(cont)
        prim = _primitive(coeffs)
        if len(prim) >= 2:
            dt = _strip([p * Polynomial([k]) for k, p in enumerate(prim)][1:])
            g = _bigcd(prim, dt)
            S = _primitive(_bidiv_exact(prim, g)) if len(g) > 1 else prim
            candidates += _numeric_roots(S[-1])
            if len(S) >= 3:
                candidates += _numeric_roots(_disc_in_t(S))
    lead_c = [complex(e) for e in leading]
    degenerate = [complex(v) for v in _dedup(candidates, 1e-9) if all(abs(v - w) > 1e-9 for w in lead_c)]
    return BadEpsilonSet(leading, tuple(degenerate))


def _disc_in_t(S: list[Polynomial]) -> Polynomial:
    """Res_t(S, dS/dt) as a polynomial in eps, by exact interpolation."""
    dt = len(S) - 1
    de = max(c.degree for c in S)
    bound = de * (2 * dt - 1) + 1
    nodes = _interpolation_nodes(bound)
    vals = []
    for e in nodes:
        a = [c(e) for c in S]
        b = [a[k] * k for k in range(1, len(a))]
        vals.append(resultant(a, b))
    return interpolate(nodes, vals)
