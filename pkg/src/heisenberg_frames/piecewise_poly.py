"""Exact piecewise polynomials with rational breakpoints and coefficients.

A :class:`PiecewisePolynomial` is compactly supported: it is zero outside
``[breakpoints[0], breakpoints[-1]]``.  Coefficients are stored in ascending
powers of the *global* variable, so every piece can be evaluated directly at
``t`` without recentring.  All algebra (sums, products, shifts, convolution,
integration) stays inside :class:`fractions.Fraction`; floating point only
appears in :meth:`PiecewisePolynomial.evaluate` and
:meth:`PiecewisePolynomial.modulated_integral`.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Poly = tuple  # tuple[Fraction, ...], ascending powers

_SERIES_TERMS = 24
_SERIES_THRESHOLD = 0.5


def as_fraction(x) -> Fraction:
    """Convert ints, floats, strings and Fractions to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(float(x))
    return Fraction(x)


# --- dense polynomial helpers (ascending Fraction tuples) -------------------

def _trim(c: Iterable[Fraction]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                 for i in range(n))


def poly_scale(p: Poly, c) -> Poly:
    return _trim(c * a for a in p)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_shift(p: Poly, s) -> Poly:
    """Coefficients of ``t -> p(t + s)``."""
    out: Poly = ()
    for a in reversed(p):
        out = poly_add(poly_mul(out, (s, Fraction(1))), (a,))
    return out


def poly_eval(p: Poly, t):
    acc = 0
    for a in reversed(p):
        acc = acc * t + a
    return acc


def poly_antideriv(p: Poly) -> Poly:
    return _trim([Fraction(0)] + [a / (i + 1) for i, a in enumerate(p)])


def poly_deriv(p: Poly) -> Poly:
    return _trim(i * a for i, a in enumerate(p) if i > 0)


def poly_definite(p: Poly, a, b) -> Fraction:
    P = poly_antideriv(p)
    return poly_eval(P, b) - poly_eval(P, a)


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Compactly supported piecewise polynomial in canonical form.

    Construction normalises the data: coefficients become Fractions, trailing
    zero coefficients are dropped, adjacent identical pieces are merged and
    zero pieces at either end are trimmed.  Two functions that agree almost
    everywhere therefore compare equal with ``==``.  The zero function has no
    breakpoints and no pieces.
    """

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bps = [as_fraction(b) for b in self.breakpoints]
        pcs = [_trim(as_fraction(c) for c in piece) for piece in self.pieces]
        if bps and len(pcs) != len(bps) - 1:
            raise ValueError("need exactly len(breakpoints) - 1 pieces")
        if not bps and pcs:
            raise ValueError("pieces given without breakpoints")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        # merge equal neighbours
        if pcs:
            mb, mp = [bps[0]], [pcs[0]]
            for b, c in zip(bps[1:-1], pcs[1:]):
                if c == mp[-1]:
                    continue
                mb.append(b)
                mp.append(c)
            mb.append(bps[-1])
            bps, pcs = mb, mp
        # trim zero end pieces
        while pcs and pcs[0] == ():
            pcs.pop(0)
            bps.pop(0)
        while pcs and pcs[-1] == ():
            pcs.pop()
            bps.pop()
        if not pcs:
            bps = []
        object.__setattr__(self, "breakpoints", tuple(bps))
        object.__setattr__(self, "pieces", tuple(pcs))

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> PiecewisePolynomial:
        return cls((), ())

    @classmethod
    def indicator(cls, a, b, value=1) -> PiecewisePolynomial:
        """``value`` times the characteristic function of ``[a, b]``."""
        return cls((a, b), ((value,),))

    @classmethod
    def polynomial_on(cls, coeffs: Sequence, a, b) -> PiecewisePolynomial:
        return cls((a, b), (tuple(coeffs),))

    # --- basic properties -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def support(self) -> tuple[Fraction, Fraction]:
        if self.is_zero:
            raise ValueError("zero function has empty support")
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def width(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        a, b = self.support
        return b - a

    @property
    def degree(self) -> int:
        return max((len(c) - 1 for c in self.pieces), default=-1)

    def intervals(self):
        """Yield ``(a, b, coeffs)`` for every piece."""
        bp = self.breakpoints
        for i, c in enumerate(self.pieces):
            yield bp[i], bp[i + 1], c

    def _piece_on(self, a: Fraction, b: Fraction) -> Poly:
        """Coefficients on ``[a, b]``, which must lie inside one piece or outside."""
        bp = self.breakpoints
        if not bp or b <= bp[0] or a >= bp[-1]:
            return ()
        i = bisect.bisect_right(bp, a) - 1
        return self.pieces[i]

    # --- evaluation -------------------------------------------------------

    def __call__(self, t):
        bp = self.breakpoints
        if not bp or t < bp[0] or t > bp[-1]:
            return 0 * t
        i = bisect.bisect_right(bp, t) - 1
        if i == len(self.pieces):
            i -= 1
        return poly_eval(self.pieces[i], t)

    @cached_property
    def _float_data(self):
        bp = np.array([float(b) for b in self.breakpoints])
        deg = max(self.degree, 0)
        coef = np.zeros((len(self.pieces), deg + 1))
        for i, c in enumerate(self.pieces):
            coef[i, : len(c)] = [float(a) for a in c]
        return bp, coef

    def evaluate(self, t) -> np.ndarray:
        """Vectorised float evaluation with the same breakpoint convention."""
        t = np.asarray(t, dtype=float)
        if self.is_zero:
            return np.zeros_like(t)
        bp, coef = self._float_data
        idx = np.searchsorted(bp, t, side="right") - 1
        idx = np.clip(idx, 0, len(self.pieces) - 1)
        c = coef[idx]
        out = np.zeros_like(t)
        for j in range(coef.shape[1] - 1, -1, -1):
            out = out * t + c[..., j]
        inside = (t >= bp[0]) & (t <= bp[-1])
        return np.where(inside, out, 0.0)

    # --- algebra ----------------------------------------------------------

    def _combine(self, other: PiecewisePolynomial, op) -> PiecewisePolynomial:
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        pieces = [op(self._piece_on(a, b), other._piece_on(a, b))
                  for a, b in zip(bps, bps[1:])]
        return PiecewisePolynomial(tuple(bps), tuple(pieces))

    def __add__(self, other: PiecewisePolynomial) -> PiecewisePolynomial:
        return self._combine(other, poly_add)

    def __neg__(self) -> PiecewisePolynomial:
        return self.scale(-1)

    def __sub__(self, other: PiecewisePolynomial) -> PiecewisePolynomial:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PiecewisePolynomial):
            return self._combine(other, poly_mul)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> PiecewisePolynomial:
        c = as_fraction(c)
        return PiecewisePolynomial(self.breakpoints,
                                   tuple(poly_scale(p, c) for p in self.pieces))

    def translate(self, a) -> PiecewisePolynomial:
        """``t -> p(t - a)``: the graph moves right by ``a``."""
        a = as_fraction(a)
        return PiecewisePolynomial(tuple(b + a for b in self.breakpoints),
                                   tuple(poly_shift(p, -a) for p in self.pieces))

    def reflect(self) -> PiecewisePolynomial:
        """``t -> p(-t)``."""
        bps = tuple(-b for b in reversed(self.breakpoints))
        pcs = tuple(tuple(a if i % 2 == 0 else -a for i, a in enumerate(p))
                    for p in reversed(self.pieces))
        return PiecewisePolynomial(bps, pcs)

    def restrict(self, a, b) -> PiecewisePolynomial:
        """Product with the indicator of ``[a, b]``."""
        return self * PiecewisePolynomial.indicator(a, b)

    # --- integration ------------------------------------------------------

    def integral(self) -> Fraction:
        return sum((poly_definite(c, a, b) for a, b, c in self.intervals()),
                   Fraction(0))

    def integrate(self, lo, hi) -> Fraction:
        lo, hi = as_fraction(lo), as_fraction(hi)
        if lo > hi:
            raise ValueError("interval must be well ordered")
        if lo == hi:
            return Fraction(0)
        return self.restrict(lo, hi).integral()

    def convolve(self, other: PiecewisePolynomial) -> PiecewisePolynomial:
        """Exact ``(p * q)(t) = \\int p(s) q(t - s) ds``."""
        out = PiecewisePolynomial.zero()
        for a, b, P in self.intervals():
            for c, d, Q in other.intervals():
                if P and Q:
                    out = out + _convolve_pieces(P, a, b, Q, c, d)
        return out

    # --- oscillatory integrals -------------------------------------------

    @cached_property
    def _centred(self):
        """Per piece: (centre, half width, float coeffs in ``t - centre``)."""
        out = []
        for a, b, c in self.intervals():
            mid = (a + b) / 2
            q = poly_shift(c, mid)
            out.append((float(mid), float((b - a) / 2),
                        np.array([float(x) for x in q] or [0.0])))
        return out

    def modulated_integral(self, omega):
        """``\\int e^{i omega t} p(t) dt``; ``omega`` may be an array.

        Each piece is recentred at its midpoint.  Pieces with
        ``|omega| * width < 1/2`` use a moment series (the closed form divides
        by powers of omega); the rest use repeated integration by parts.
        """
        w = np.asarray(omega, dtype=float)
        total = np.zeros(w.shape, dtype=complex)
        for mid, h, q in self._centred:
            small = np.abs(w) * (2 * h) < _SERIES_THRESHOLD
            val = np.zeros(w.shape, dtype=complex)
            if np.any(small):
                val[small] = _series_piece(q, h, w[small])
            if np.any(~small):
                val[~small] = _closed_piece(q, h, w[~small])
            total += np.exp(1j * w * mid) * val
        if total.ndim == 0:
            return complex(total)
        return total

    # --- serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        return {"breakpoints": [_fmt(b) for b in self.breakpoints],
                "pieces": [[_fmt(a) for a in p] for p in self.pieces]}

    @classmethod
    def from_json(cls, data: dict) -> PiecewisePolynomial:
        return cls(tuple(Fraction(b) for b in data["breakpoints"]),
                   tuple(tuple(Fraction(a) for a in p) for p in data["pieces"]))

    def __repr__(self):
        parts = ", ".join(f"[{a},{b}]: {list(map(str, c))}"
                          for a, b, c in self.intervals())
        return f"PiecewisePolynomial({parts or '0'})"


def _series_piece(q: np.ndarray, h: float, w: np.ndarray) -> np.ndarray:
    # \int_{-h}^{h} s^n q(s) ds is nonzero only for even n + j
    moments = np.zeros(_SERIES_TERMS)
    for n in range(_SERIES_TERMS):
        for j, qj in enumerate(q):
            e = n + j
            if e % 2 == 0:
                moments[n] += qj * 2 * h ** (e + 1) / (e + 1)
    out = np.zeros(w.shape, dtype=complex)
    term = np.ones(w.shape, dtype=complex)
    for n in range(_SERIES_TERMS):
        out += term * moments[n]
        term = term * (1j * w) / (n + 1)
    return out


def _closed_piece(q: np.ndarray, h: float, w: np.ndarray) -> np.ndarray:
    # \int e^{iws} q(s) ds = e^{iws} sum_j (-1)^j q^{(j)}(s) / (iw)^{j+1}
    derivs = [np.polynomial.polynomial.Polynomial(q)]
    for _ in range(len(q) - 1):
        derivs.append(derivs[-1].deriv())
    iw = 1j * w
    out = np.zeros(w.shape, dtype=complex)
    for s, sign in ((h, 1.0), (-h, -1.0)):
        acc = np.zeros(w.shape, dtype=complex)
        for j, d in enumerate(derivs):
            acc += (-1) ** j * d(s) / iw ** (j + 1)
        out += sign * np.exp(iw * s) * acc
    return out


def _convolve_pieces(P: Poly, a, b, Q: Poly, c, d) -> PiecewisePolynomial:
    """Convolution of ``P`` on ``[a, b]`` with ``Q`` on ``[c, d]``."""
    # integrand P(s) Q(t - s) as {(i, j): coeff} meaning s^i t^j
    terms: dict[tuple[int, int], Fraction] = {}
    for i, p in enumerate(P):
        if not p:
            continue
        for j, qj in enumerate(Q):
            if not qj:
                continue
            for k in range(j + 1):
                key = (i + k, j - k)
                terms[key] = terms.get(key, 0) + p * qj * math.comb(j, k) * (-1) ** k
    anti = {(i + 1, j): v / (i + 1) for (i, j), v in terms.items()}

    def at(limit) -> Poly:
        # limit = ("const", alpha) or ("shift", beta) meaning s = t - beta
        kind, val = limit
        out: Poly = ()
        for (i, j), v in anti.items():
            tj = (Fraction(0),) * j + (v,)
            if kind == "const":
                out = poly_add(out, poly_scale(tj, val ** i))
            else:
                base: Poly = (Fraction(1),)
                for _ in range(i):
                    base = poly_mul(base, (-val, Fraction(1)))
                out = poly_add(out, poly_mul(tj, base))
        return out

    def piece(lo, hi) -> Poly:
        return poly_add(at(hi), poly_scale(at(lo), -1))

    t1, t2 = min(a + d, b + c), max(a + d, b + c)
    bps = [a + c]
    pcs = []
    if t1 > a + c:
        bps.append(t1)
        pcs.append(piece(("const", a), ("shift", c)))
    if t2 > t1:
        bps.append(t2)
        if a + d <= b + c:
            pcs.append(piece(("shift", d), ("shift", c)))
        else:
            pcs.append(piece(("const", a), ("const", b)))
    if b + d > t2:
        bps.append(b + d)
        pcs.append(piece(("shift", d), ("const", b)))
    return PiecewisePolynomial(tuple(bps), tuple(pcs))


def convolve(p: PiecewisePolynomial, q: PiecewisePolynomial) -> PiecewisePolynomial:
    return p.convolve(q)


def eval_pp(p: PiecewisePolynomial, t):
    return p(t)


def integrate_product_shifted(p: PiecewisePolynomial, q: PiecewisePolynomial,
                              shift, interval) -> Fraction:
    """Exact ``\\int_interval p(t + shift) q(t) dt``."""
    lo, hi = interval
    return (p.translate(-as_fraction(shift)) * q).integrate(lo, hi)


def modulated_integral(p: PiecewisePolynomial, omega):
    return p.modulated_integral(omega)
