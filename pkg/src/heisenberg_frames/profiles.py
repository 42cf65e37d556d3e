"""Profiles for the central (t) variable of a separable generator.

The Fourier convention is ``hat h(xi) = \\int h(t) e^{-2 pi i xi t} dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .piecewise_poly import PiecewisePolynomial


@dataclass(frozen=True)
class TimeDomain:
    """``h`` given pointwise as a compactly supported piecewise polynomial.

    ``bspline_order`` marks ``h == B_n`` so spectra can use ``sinc^n``.
    """

    h: PiecewisePolynomial
    bspline_order: Optional[int] = None

    def __post_init__(self):
        if self.h.is_zero:
            raise ValueError("time profile must be nonzero")

    def hat(self, xi):
        """``hat h(xi)`` (complex)."""
        return self.h.modulated_integral(-2 * np.pi * np.asarray(xi, dtype=float))

    def variation_bound(self) -> float:
        """Upper bound for the total variation of ``h`` (jumps included)."""
        h = self.h
        total = 0.0
        prev_right = 0.0
        for a, b, c in h.intervals():
            left = float(sum(ci * a ** i for i, ci in enumerate(c)))
            total += abs(left - prev_right)
            prev_right = float(sum(ci * b ** i for i, ci in enumerate(c)))
            m = max(abs(float(a)), abs(float(b)))
            dmax = sum(i * abs(float(ci)) * m ** (i - 1) for i, ci in enumerate(c) if i)
            total += float(b - a) * dmax
        return total + abs(prev_right)

    def to_json(self) -> dict:
        out = {"kind": "time", "h": self.h.to_json()}
        if self.bspline_order is not None:
            out["bspline_order"] = self.bspline_order
        return out


@dataclass(frozen=True)
class FrequencyIndicator:
    """``hat h = chi_[0, p]``; ``h`` has no pointwise time-domain form here."""

    p: int

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError("FrequencyIndicator needs an integer p >= 1")

    def hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = ((xi >= 0) & (xi <= self.p)).astype(complex)
        return complex(out) if out.ndim == 0 else out

    def to_json(self) -> dict:
        return {"kind": "freq_indicator", "p": int(self.p)}


TProfile = Union[TimeDomain, FrequencyIndicator]


def profile_from_json(data: dict) -> TProfile:
    kind = data.get("kind")
    if kind == "time":
        return TimeDomain(PiecewisePolynomial.from_json(data["h"]),
                          data.get("bspline_order"))
    if kind == "freq_indicator":
        return FrequencyIndicator(int(data["p"]))
    raise ValueError(f"unknown t_part kind {kind!r}")


def sinc_tail_bound(n: int, radius: int) -> float:
    """Bound on ``sum_{|k| > R} sinc^{2n}(lam + k)`` for ``lam`` in (0, 1]."""
    if radius < 2:
        return math.inf
    return 2.0 / ((2 * n - 1) * math.pi ** (2 * n) * (radius - 1) ** (2 * n - 1))


def profile_tail_bound(profile: TProfile, radius: int) -> float:
    """Bound on ``sum_{|k| > R} |hat h(lam + k)|^2`` for ``lam`` in (0, 1]."""
    if isinstance(profile, FrequencyIndicator):
        return 0.0 if radius >= profile.p + 1 else math.inf
    if profile.bspline_order is not None:
        return sinc_tail_bound(profile.bspline_order, radius)
    if radius < 2:
        return math.inf
    # |hat h(xi)| <= V / (2 pi |xi|)
    v = profile.variation_bound()
    return 2 * (v / (2 * math.pi)) ** 2 / (radius - 1)


def radius_for(profile: TProfile, eps: float, scale: float = 1.0,
               max_radius: int = 100_000) -> int:
    """Smallest truncation radius with ``scale * tail < eps`` (capped)."""
    if isinstance(profile, FrequencyIndicator):
        return profile.p + 1
    lo, hi = 2, 2
    while scale * profile_tail_bound(profile, hi) >= eps and hi < max_radius:
        lo, hi = hi, min(2 * hi, max_radius)
    while lo < hi:
        mid = (lo + hi) // 2
        if scale * profile_tail_bound(profile, mid) < eps:
            hi = mid
        else:
            lo = mid + 1
    return hi
