"""Closed-form real-coefficient cubic and depressed-quartic root solvers.

The cubic solver follows Cardano's construction, switching to the
trigonometric form when all three roots are real (negative discriminant),
which avoids the cancellation of the algebraic form.  The quartic solver
handles ``x^4 + p x^2 + q x + r`` via the resolvent cubic.  When the linear
coefficient is (numerically) zero the resolvent construction degenerates, so
a biquadratic branch takes over; each root receives one Newton polishing step
against the original quartic to tighten residuals after cancellation.
"""

from __future__ import annotations

import cmath
import math
from typing import Tuple

ONE_REAL = "one_real"
REPEATED_REAL = "repeated_real"
THREE_REAL = "three_real"

CubicRoots = Tuple[complex, complex, complex]
QuarticRoots = Tuple[complex, complex, complex, complex]

_SQRT3_HALF = math.sqrt(3.0) / 2.0


def real_cbrt(x: float) -> float:
    """Real, sign-preserving cube root."""
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def is_effectively_real(z: complex, rel: float = 1e-8) -> bool:
    """Whether a root should be treated as real downstream."""
    return abs(z.imag) <= rel * (1.0 + abs(z))


def _polish_cubic(z: complex, a: float, b: float, c: float, d: float) -> complex:
    f = ((a * z + b) * z + c) * z + d
    df = (3.0 * a * z + 2.0 * b) * z + c
    if abs(df) > 1e-300:
        z = z - f / df
    return z


def solve_cubic(a: float, b: float, c: float, d: float) -> Tuple[CubicRoots, str]:
    """Roots of ``a x^3 + b x^2 + c x + d`` plus a discriminant class.

    Returns three complex roots and one of ``one_real`` (a single real root,
    two complex conjugates), ``repeated_real`` (all real, at least two equal)
    or ``three_real`` (all real and distinct).  Raises for ``a == 0``.
    """
    if a == 0.0:
        raise ValueError("leading coefficient must be nonzero for a cubic")
    q1 = (3.0 * a * c - b * b) / (9.0 * a * a)
    q2 = (9.0 * a * b * c - 27.0 * a * a * d - 2.0 * b ** 3) / (54.0 * a ** 3)
    disc = q1 ** 3 + q2 * q2
    shift = b / (3.0 * a)
    if disc > 0.0:
        sd = math.sqrt(disc)
        s1 = real_cbrt(q2 + sd)
        s2 = real_cbrt(q2 - sd)
        x1 = complex(s1 + s2 - shift, 0.0)
        re = -(s1 + s2) / 2.0 - shift
        im = _SQRT3_HALF * (s1 - s2)
        roots = (x1, complex(re, im), complex(re, -im))
        klass = ONE_REAL
    elif disc == 0.0:
        s = real_cbrt(q2)
        roots = (
            complex(2.0 * s - shift, 0.0),
            complex(-s - shift, 0.0),
            complex(-s - shift, 0.0),
        )
        klass = REPEATED_REAL
    else:
        # three distinct real roots; trigonometric form is numerically stable
        rho = math.sqrt(-q1)
        theta = math.acos(max(-1.0, min(1.0, q2 / rho ** 3)))
        roots = tuple(
            complex(2.0 * rho * math.cos((theta + 2.0 * math.pi * k) / 3.0) - shift, 0.0)
            for k in range(3)
        )
        klass = THREE_REAL
    polished = tuple(_polish_cubic(z, a, b, c, d) for z in roots)
    return polished, klass  # type: ignore[return-value]


def _quartic_eval(z: complex, p: float, q: float, r: float) -> complex:
    return ((z * z + p) * z + q) * z + r


def _polish_quartic(z: complex, p: float, q: float, r: float) -> complex:
    f = _quartic_eval(z, p, q, r)
    df = (4.0 * z * z + 2.0 * p) * z + q
    if abs(df) > 1e-300:
        z = z - f / df
    return z


def _biquadratic_roots(p: float, r: float) -> QuarticRoots:
    roots = []
    for sgn in (1.0, -1.0):
        z = (-p + sgn * cmath.sqrt(complex(p * p - 4.0 * r))) / 2.0
        w = cmath.sqrt(z)
        roots.append(w)
        roots.append(-w)
    return tuple(roots)  # type: ignore[return-value]


def resolvent_real_root(p: float, q: float, r: float) -> float:
    """The real root of the quartic's resolvent cubic used for factoring."""
    q1 = -(p * p + 12.0 * r) / 36.0
    q2 = (2.0 * p ** 3 - 72.0 * r * p + 27.0 * q * q) / 432.0
    disc = q1 ** 3 + q2 * q2
    if disc >= 0.0:
        sd = math.sqrt(disc)
        return real_cbrt(q2 + sd) + real_cbrt(q2 - sd) - p / 3.0
    rho = math.sqrt(-q1)
    theta = math.acos(max(-1.0, min(1.0, q2 / rho ** 3)))
    return 2.0 * rho * math.cos(theta / 3.0) - p / 3.0


def solve_depressed_quartic(p: float, q: float, r: float) -> QuarticRoots:
    """The four complex roots of ``x^4 + p x^2 + q x + r``.

    Total over real inputs.  Complex roots of real inputs come in conjugate
    pairs; multiple roots are repeated in the output.
    """
    eps_q = 1e-12 * max(1.0, abs(p), abs(r))
    if abs(q) < eps_q:
        roots = _biquadratic_roots(p, r)
    else:
        alpha = resolvent_real_root(p, q, r)
        # a vanishing resolvent root would divide by zero below; the quartic
        # is then indistinguishable from a biquadratic at working precision
        if alpha <= 1e-13 * max(1.0, abs(p), math.sqrt(abs(r))):
            roots = _biquadratic_roots(p, r)
        else:
            sq = math.sqrt(2.0 * alpha)
            out = []
            for s1 in (1.0, -1.0):
                w = cmath.sqrt(complex(-(2.0 * p + 2.0 * alpha + s1 * 2.0 * q / sq)))
                out.append((s1 * sq + w) / 2.0)
                out.append((s1 * sq - w) / 2.0)
            roots = tuple(out)
    return tuple(_polish_quartic(z, p, q, r) for z in roots)  # type: ignore[return-value]
