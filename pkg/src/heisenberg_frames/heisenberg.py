"""Heisenberg group law, left translates and lambda-twisted translates.

Group law: ``(x, y, t)(x', y', t') = (x + x', y + y', t + t' + (x'y - y'x)/2)``.
Left translation: ``L_w f(p) = f(w^{-1} p)``.  The lambda-slice of
``f(x, y, t)`` is ``f^lam(x, y) = \\int f(x, y, t) e^{2 pi i lam t} dt``; for a
separable generator ``u(x) v(y) h(t)`` it equals ``u(x) v(y) hat h(-lam)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bspline import spectrum_sq
from .piecewise_poly import PiecewisePolynomial, as_fraction
from .profiles import (TimeDomain, TProfile,
                       profile_from_json)


@dataclass(frozen=True)
class GroupElement:
    x: float
    y: float
    t: float

    def __mul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.x + other.x, self.y + other.y,
                            self.t + other.t + (other.x * self.y - other.y * self.x) / 2)

    def inverse(self) -> GroupElement:
        return GroupElement(-self.x, -self.y, -self.t)

    @classmethod
    def lattice(cls, k: int, l: int, m: int) -> GroupElement:
        """The lattice point ``(2k, l, m)``."""
        return cls(2 * k, l, m)


IDENTITY = GroupElement(0, 0, 0)


def group_op(a: GroupElement, b: GroupElement, invert_a: bool = False) -> GroupElement:
    """``a * b``, or ``a^{-1} * b`` when ``invert_a`` is set."""
    return (a.inverse() if invert_a else a) * b


@dataclass(frozen=True)
class SeparableGenerator:
    """``g(x, y, t) = u(x) v(y) h(t)`` with real piecewise-polynomial ``u, v``."""

    u: PiecewisePolynomial
    v: PiecewisePolynomial
    t_part: TProfile

    def __post_init__(self):
        if self.u.is_zero or self.v.is_zero:
            raise ValueError("spatial factors must be nonzero")

    def __call__(self, x, y, t):
        if not isinstance(self.t_part, TimeDomain):
            raise TypeError("pointwise values need a time-domain t-profile")
        return (self.u.evaluate(x) * self.v.evaluate(y)
                * self.t_part.h.evaluate(t))

    def slice(self, lam, x, y):
        """``g^lam(x, y) = u(x) v(y) hat h(-lam)``."""
        return self.u.evaluate(x) * self.v.evaluate(y) * self.t_part.hat(-lam)

    @property
    def spatial_norm_sq(self) -> float:
        return float((self.u * self.u).integral() * (self.v * self.v).integral())

    def to_json(self) -> dict:
        return {"u": self.u.to_json(), "v": self.v.to_json(),
                "t_part": self.t_part.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> SeparableGenerator:
        return cls(PiecewisePolynomial.from_json(data["u"]),
                   PiecewisePolynomial.from_json(data["v"]),
                   profile_from_json(data["t_part"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def left_translate_eval(g: SeparableGenerator, w: GroupElement, p: GroupElement) -> float:
    """``(L_w g)(p) = g(w^{-1} p)``."""
    if not isinstance(g.t_part, TimeDomain):
        raise TypeError("left_translate_eval needs a time-domain t-profile")
    q = group_op(w, p, invert_a=True)
    return float(g(q.x, q.y, q.t))


def twisted_translate_eval(a, b, lam, F, point):
    """``(T_(a,b))^lam F (x, y) = e^{i pi lam (b x - a y)} F(x - a, y - b)``."""
    x, y = point
    return np.exp(1j * np.pi * lam * (b * x - a * y)) * F(x - a, y - b)


def twisted_composition_phase(a, b, c, d, lam):
    """Phase with ``T_(a,b) T_(c,d) = phase * T_(a+c, b+d)``."""
    return np.exp(1j * np.pi * lam * (c * b - a * d))


@lru_cache(maxsize=4096)
def overlap(p: PiecewisePolynomial, shift) -> PiecewisePolynomial:
    """Exact product ``p(s - shift) p(s)``."""
    return p.translate(shift) * p


def twisted_inner(g: SeparableGenerator, a, b, lam):
    """``<(T_(a,b))^lam g^lam, g^lam>``; vectorised over ``lam``.

    Factorises as ``|hat h(-lam)|^2 * X * Y`` with
    ``X = \\int e^{i pi lam b x} u(x - a) u(x) dx`` and
    ``Y = \\int e^{-i pi lam a y} v(y - b) v(y) dy``.
    """
    lam = np.asarray(lam, dtype=float)
    a, b = as_fraction(a), as_fraction(b)
    ux = overlap(g.u, a)
    vy = overlap(g.v, b)
    if ux.is_zero or vy.is_zero:
        out = np.zeros(lam.shape, dtype=complex)
    else:
        weight = spectrum_sq(g.t_part, -lam)
        X = ux.modulated_integral(np.pi * lam * float(b))
        Y = vy.modulated_integral(-np.pi * lam * float(a))
        out = np.asarray(weight * X * Y)
    return complex(out) if out.ndim == 0 else out


def offset_range(g: SeparableGenerator) -> tuple[int, int]:
    """Largest ``|dk|, |dl|`` for which ``T_(2dk, dl) g^lam`` can meet ``g^lam``."""
    ku = 0
    while not overlap(g.u, 2 * (ku + 1)).is_zero:
        ku += 1
    lv = 0
    while not overlap(g.v, lv + 1).is_zero:
        lv += 1
    return ku, lv
