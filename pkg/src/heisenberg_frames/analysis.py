"""Digamma closed forms for the ``chi_[0,2] x chi_[0,2]`` generator with
``hat h = chi_[0,p]``.

``A_p(lam) = 2 |sum_{r=1}^p e^{i pi (lam - r)} sinc(lam - r)|`` has the closed form
``2 sinc(1 - lam) [1 + (1 - lam)(psi(p - lam + 1) - psi(2 - lam))]`` and the
lower Gramian estimate is driven by the margin ``p - A_p(lam)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

# Bernoulli numbers B_2k / (2k) for the asymptotic digamma series
_ASYMPTOTIC = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)

SCAN_POINTS = 2048
SCAN_EDGE = 1e-6
ROOT_TOL = 1e-12


def sinc(x):
    """``sin(pi x) / (pi x)`` with a Taylor branch for ``|x| < 1e-4``."""
    if isinstance(x, (int, float)):
        px = math.pi * x
        if abs(x) < 1e-4:
            return 1 - px ** 2 / 6 + px ** 4 / 120
        return math.sin(px) / px
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    px = np.pi * x
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, 1 - px ** 2 / 6 + px ** 4 / 120, np.sin(px) / np.where(small, 1, px))
    return float(out) if out.ndim == 0 else out


def digamma(x: float) -> float:
    """``psi(x) = d/dx log Gamma(x)`` for ``x > 0``.

    Upward recurrence to ``x >= 6`` followed by the asymptotic series
    ``log x - 1/(2x) - sum B_2k / (2k x^2k)``.
    """
    x = float(x)
    if not x > 0:
        raise ValueError("digamma is only implemented for x > 0")
    acc = 0.0
    while x < 6:
        acc -= 1 / x
        x += 1
    inv2 = 1 / (x * x)
    series, power = 0.0, inv2
    for c in _ASYMPTOTIC:
        series += c * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def a_p_closed(p: int, lam: float) -> float:
    return 2 * sinc(1 - lam) * (1 + (1 - lam) * (digamma(p - lam + 1) - digamma(2 - lam)))


def a_p_direct(p: int, lam: float) -> float:
    """``2 |sum_{r=1}^p e^{i pi (lam - r)} sinc(lam - r)|`` by direct summation."""
    d = lam - np.arange(1, p + 1)
    return 2 * abs(complex(np.sum(np.exp(1j * np.pi * d) * sinc(d))))


def psi3_derivative(lam: float) -> float:
    """Explicit derivative of ``3 - A_3(lam)``."""
    l = lam
    num = (2 * math.pi * (l - 3) * (l - 2) * (l - 1) * (3 * (l - 4) * l + 11) * math.cos(math.pi * l)
           - 2 * (3 * (l - 4) * l * ((l - 4) * l + 8) + 49) * math.sin(math.pi * l))
    return num / (math.pi * (l - 3) ** 2 * (l - 2) ** 2 * (l - 1) ** 2)


def margin_derivative(p: int, lam: float) -> float:
    """``d/dlam (p - A_p(lam))``.

    ``A_p = (2/pi) sin(pi lam) S(lam)`` with ``S = sum_r 1/(r - lam)``, so the
    derivative only needs the finite sums ``S`` and ``S' = sum_r 1/(r - lam)^2``.
    """
    if p == 3:
        return psi3_derivative(lam)
    S = sum(1 / (r - lam) for r in range(1, p + 1))
    dS = sum(1 / (r - lam) ** 2 for r in range(1, p + 1))
    dA = 2 * math.cos(math.pi * lam) * S + 2 / math.pi * math.sin(math.pi * lam) * dS
    return -dA


def margin(p: int, lam: float) -> float:
    return p - a_p_closed(p, lam)


@dataclass
class MarginResult:
    p: int
    lambda0: float
    margin: float
    curvature: float
    critical_points: list = field(default_factory=list)
    unique: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _bisect(f, a, b, fa):
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if abs(fm) <= ROOT_TOL or b - a < 1e-16:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def margin_min(p: int) -> MarginResult:
    """Minimise ``p - A_p`` on (0, 1) via a sign scan of the derivative and
    bisection.  Every interior minimum found is reported; ``unique`` is
    false when there is more than one."""
    if p < 3:
        raise ValueError("margin_min needs p >= 3")
    f = lambda lam: margin_derivative(p, lam)
    grid = np.linspace(SCAN_EDGE, 1 - SCAN_EDGE, SCAN_POINTS)
    vals = [f(x) for x in grid]
    minima = []
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa < 0 <= fb or fa == 0:
            minima.append(_bisect(f, float(a), float(b), fa))
    if not minima:
        raise RuntimeError(f"no interior minimum of p - A_p found for p={p}")
    best = min(minima, key=lambda x: margin(p, x))
    h = 1e-5
    curvature = (f(best + h) - f(best - h)) / (2 * h)
    return MarginResult(p, best, margin(p, best), curvature,
                        critical_points=[float(x) for x in minima],
                        unique=len(minima) == 1)


def margin_monotonicity_gap(p: int, lam: float) -> float:
    """``(p + 1 - A_{p+1}(lam)) - (p - A_p(lam))`` in closed form."""
    return 1 - 2 * (1 - lam) / (p + 1 - lam) * sinc(1 - lam)


def margin_scan(p: int, points: int = 1000) -> str:
    """CSV with columns ``lambda, A_p, margin`` on a midpoint grid."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "A_p", "margin"])
    for lam in (np.arange(points) + 0.5) / points:
        a = a_p_closed(p, float(lam))
        w.writerow([repr(float(lam)), repr(a), repr(p - a)])
    return buf.getvalue()
