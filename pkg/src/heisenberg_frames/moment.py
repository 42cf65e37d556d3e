"""Oblique duals supported on ``Q = [0,2] x [0,1] x [0,1]`` via a moment problem.

For ``phi`` supported in ``[0,2n] x [0,n] x [0,M]`` the only translates that
can meet ``Q`` are indexed by

    A = {-(n-1) <= k, l <= 0,  -M-n+1 < m < n}.

The dual is sought as ``phi~ = [sum_{b in A} d_b L_b phi] chi_Q`` subject to
``<L_a phi, phi~> = delta_{a,0}`` for ``a`` in ``A``; this is a linear system
in the Gram matrix of the restrictions ``(L_a phi)|_Q``.  Whenever both
translates have ``k = l = 0`` the shear term of the group law vanishes and the
entry is an exact rational number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from . import exact
from .heisenberg import GroupElement, SeparableGenerator
from .piecewise_poly import PiecewisePolynomial
from .profiles import TimeDomain

Q_BOX = ((Fraction(0), Fraction(2)), (Fraction(0), Fraction(1)), (Fraction(0), Fraction(1)))

RANK_TOL = 1e-10
QUAD_TOL = 1e-12
QUAD_MAX_LEVEL = 5
_QUAD_NODES = 8


class TranslateIndex(NamedTuple):
    k: int
    l: int
    m: int

    @property
    def element(self) -> GroupElement:
        return GroupElement.lattice(self.k, self.l, self.m)

    def __str__(self):
        return f"({self.k},{self.l},{self.m})"


ORIGIN = TranslateIndex(0, 0, 0)


def support_index_set(n: int, M: int) -> list:
    """``A`` for a generator supported in ``[0,2n] x [0,n] x [0,M]``.

    ``(0,0,0)`` comes first; the rest follow in decreasing lexicographic order.
    """
    if n < 1 or M < 1:
        raise ValueError("n and M must be positive integers")
    idx = [TranslateIndex(k, l, m)
           for k in range(-(n - 1), 1) for l in range(-(n - 1), 1)
           for m in range(-M - n + 2, n)]
    rest = sorted((i for i in idx if i != ORIGIN), reverse=True)
    return [ORIGIN] + rest


def support_box(phi: SeparableGenerator) -> tuple[int, int]:
    """Smallest ``(n, M)`` with ``supp phi`` inside ``[0,2n] x [0,n] x [0,M]``."""
    if not isinstance(phi.t_part, TimeDomain):
        raise TypeError("moment machinery needs a time-domain t-profile")
    (ua, ub), (va, vb), (ha, hb) = phi.u.support, phi.v.support, phi.t_part.h.support
    if min(ua, va, ha) < 0:
        raise ValueError("generator must be supported in the positive octant")
    n = max(math.ceil(ub / 2), math.ceil(vb), 1)
    return n, max(math.ceil(hb), 1)


def _check_q_supported(g: SeparableGenerator):
    (ua, ub), (va, vb), (ha, hb) = g.u.support, g.v.support, g.t_part.h.support
    if ua < 0 or ub > 2 or va < 0 or vb > 1 or ha < 0 or hb > 1:
        raise ValueError("dual must be supported in Q = [0,2] x [0,1] x [0,1]")


# --- exact pieces ----------------------------------------------------------

@lru_cache(maxsize=8192)
def _cross(p: PiecewisePolynomial, q: PiecewisePolynomial, shift) -> PiecewisePolynomial:
    """``p(s) q(s - shift)``."""
    return p * q.translate(shift)


@lru_cache(maxsize=8192)
def _prod_on(p: PiecewisePolynomial, sp, sq, lo, hi) -> PiecewisePolynomial:
    """``p(s - sp) p(s - sq)`` restricted to ``[lo, hi]``."""
    return (p.translate(sp) * p.translate(sq)).restrict(lo, hi)


# --- quadrature over Q -------------------------------------------------------

def _t_integral(hl: PiecewisePolynomial, offl, hr: PiecewisePolynomial, offr):
    """``\\int_0^1 hl(t + offl) hr(t + offr) dt`` for arrays of offsets."""
    bl = np.array([float(b) for b in hl.breakpoints])
    br = np.array([float(b) for b in hr.breakpoints])
    n = offl.shape[0]
    pts = np.concatenate([np.zeros((n, 1)), np.ones((n, 1)),
                          bl[None, :] - offl[:, None], br[None, :] - offr[:, None]], axis=1)
    pts = np.sort(np.clip(pts, 0.0, 1.0), axis=1)
    a, b = pts[:, :-1], pts[:, 1:]
    deg = max(hl.degree, 0) + max(hr.degree, 0)
    x, w = np.polynomial.legendre.leggauss(deg // 2 + 1)
    half = (b - a) / 2
    t = (a + b)[..., None] / 2 + half[..., None] * x
    vals = hl.evaluate(t + offl[:, None, None]) * hr.evaluate(t + offr[:, None, None])
    return np.sum(vals * w * half[..., None], axis=(1, 2))


def _term_eval(g: SeparableGenerator, e: GroupElement, x, y):
    """Spatial value and t-offset of ``q -> g(e q)`` at points ``(x, y, .)``."""
    s = g.u.evaluate(e.x + x) * g.v.evaluate(e.y + y)
    off = e.t + 0.5 * (x * e.y - y * e.x)
    return s, off


def _cells(terms):
    xs = {0.0, 2.0}
    ys = {0.0, 1.0}
    for _, g, e in terms:
        xs |= {float(b) - e.x for b in g.u.breakpoints if 0 < float(b) - e.x < 2}
        ys |= {float(b) - e.y for b in g.v.breakpoints if 0 < float(b) - e.y < 1}
    return sorted(xs), sorted(ys)


def _q_integral_level(left, right, level):
    xs, ys = _cells(left + right)
    sub = 2 ** level
    gx, gw = np.polynomial.legendre.leggauss(_QUAD_NODES)

    def nodes(edges):
        pts, wts = [], []
        for a, b in zip(edges, edges[1:]):
            for j in range(sub):
                lo = a + (b - a) * j / sub
                hi = a + (b - a) * (j + 1) / sub
                pts.append((lo + hi) / 2 + (hi - lo) / 2 * gx)
                wts.append((hi - lo) / 2 * gw)
        return np.concatenate(pts), np.concatenate(wts)

    px, wx = nodes(xs)
    py, wy = nodes(ys)
    X, Y = np.meshgrid(px, py, indexing="ij")
    W = np.outer(wx, wy).ravel()
    X, Y = X.ravel(), Y.ravel()
    total = 0.0
    for cl, gl, el in left:
        sl, ol = _term_eval(gl, el, X, Y)
        for cr, gr, er in right:
            sr, orr = _term_eval(gr, er, X, Y)
            mask = (sl != 0) & (sr != 0)
            if not np.any(mask):
                continue
            T = _t_integral(gl.t_part.h, np.broadcast_to(ol, X.shape)[mask],
                            gr.t_part.h, np.broadcast_to(orr, X.shape)[mask])
            total += float(cl) * float(cr) * float(np.sum(W[mask] * sl[mask] * sr[mask] * T))
    return total


def q_integral(left, right, tol: float = QUAD_TOL, max_level: int = QUAD_MAX_LEVEL):
    """``\\int_Q [sum c g(e q)] [sum c' g'(e' q)] dq`` by refined tensor Gauss.

    ``left`` and ``right`` are lists of ``(coef, generator, element)``.  The
    t-integral is exact per node (breakpoints follow the shear); the x-y rule
    is refined until two successive levels agree to ``tol``.  Returns
    ``(value, error_estimate)``.
    """
    cur = _q_integral_level(left, right, 0)
    err = math.inf
    for level in range(1, max_level + 1):
        prev, cur = cur, _q_integral_level(left, right, level)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            break
    return cur, err


# --- moment system ------------------------------------------------------------

@dataclass
class MomentSystem:
    """Gram matrix of ``(L_a phi)|_Q`` and the Kronecker right-hand side."""

    indices: list
    gram: list
    rhs: list
    exact: bool
    error_estimate: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])

    @property
    def target(self) -> int:
        return self.indices.index(ORIGIN)


def _restricted_entry(phi: SeparableGenerator, a: TranslateIndex, b: TranslateIndex):
    (x0, x1), (y0, y1), (t0, t1) = Q_BOX
    px = _prod_on(phi.u, 2 * a.k, 2 * b.k, x0, x1)
    py = _prod_on(phi.v, a.l, b.l, y0, y1)
    if px.is_zero or py.is_zero:
        return Fraction(0), True, 0.0
    if a.k == a.l == b.k == b.l == 0:
        pt = _prod_on(phi.t_part.h, a.m, b.m, t0, t1)
        return px.integral() * py.integral() * pt.integral(), True, 0.0
    val, err = q_integral([(1, phi, a.element.inverse())], [(1, phi, b.element.inverse())])
    return val, False, err


def restricted_gram(phi: SeparableGenerator, indices) -> MomentSystem:
    """``gram[i][j] = <L_{a_i} phi, (L_{a_j} phi) chi_Q>``."""
    if not isinstance(phi.t_part, TimeDomain):
        raise TypeError("restricted_gram needs a time-domain t-profile")
    indices = [TranslateIndex(*i) for i in indices]
    if ORIGIN not in indices:
        raise ValueError("index list must contain (0,0,0)")
    n = len(indices)
    gram = [[None] * n for _ in range(n)]
    all_exact, err = True, 0.0
    for i in range(n):
        for j in range(i, n):
            val, ex, e = _restricted_entry(phi, indices[i], indices[j])
            gram[i][j] = gram[j][i] = val
            all_exact &= ex
            err = max(err, e)
    if not all_exact:
        gram = [[float(x) for x in row] for row in gram]
    rhs = [Fraction(int(i == ORIGIN)) for i in indices]
    return MomentSystem(indices, gram, rhs, all_exact, err)


@dataclass
class ExistenceVerdict:
    solvable: bool
    rank_full: int
    rank_without_target: int
    exact: bool

    @property
    def label(self) -> str:
        return "solvable" if self.solvable else "not_solvable"


def _float_rank(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > RANK_TOL * max(1.0, s[0])))


def existence_test(system: MomentSystem) -> ExistenceVerdict:
    """Solvable iff the target restriction is not in the span of the others,
    i.e. dropping it from the Gram matrix lowers the rank."""
    t = system.target
    keep = [i for i in range(len(system.indices)) if i != t]
    if system.exact:
        full = exact.rank(system.gram)
        rest = exact.rank([[system.gram[i][j] for j in keep] for i in keep]) if keep else 0
    else:
        A = system.as_array()
        full = _float_rank(A)
        rest = _float_rank(A[np.ix_(keep, keep)]) if keep else 0
    return ExistenceVerdict(full > rest, full, rest, system.exact)


@dataclass
class ObliqueDual:
    """``phi~ = [sum d_b L_b phi] chi_Q``.

    ``dual`` is the separable form, available when every contributing
    translate has ``k = l = 0``; ``evaluate`` works in all cases.
    """

    phi: SeparableGenerator
    coefficients: dict
    dual: Optional[SeparableGenerator]
    exact: bool
    kernel: list = field(default_factory=list)
    region: tuple = Q_BOX

    @property
    def t_poly(self) -> PiecewisePolynomial:
        if self.dual is None:
            raise ValueError("dual is not separable")
        return self.dual.t_part.h

    def terms(self):
        return [(d, self.phi, TranslateIndex(*b).element.inverse())
                for b, d in self.coefficients.items() if d]

    def evaluate(self, x, y, t):
        x, y, t = (np.asarray(v, dtype=float) for v in (x, y, t))
        inside = (x >= 0) & (x <= 2) & (y >= 0) & (y <= 1) & (t >= 0) & (t <= 1)
        out = np.zeros(np.broadcast(x, y, t).shape)
        for d, g, e in self.terms():
            s, off = _term_eval(g, e, x, y)
            out = out + float(d) * s * g.t_part.h.evaluate(t + off)
        return np.where(inside, out, 0.0)


def solve_dual(phi: SeparableGenerator, system: MomentSystem) -> ObliqueDual:
    """Solve ``gram^T d = rhs`` and assemble the dual generator.

    Raises :class:`exact.SingularSystemError` carrying a kernel basis when the
    moment problem has no solution.
    """
    verdict = existence_test(system)
    n = len(system.indices)
    if system.exact:
        gt = [[system.gram[j][i] for j in range(n)] for i in range(n)]
        ker = exact.kernel(gt)
        if not verdict.solvable:
            raise exact.SingularSystemError("moment problem has no solution", ker)
        d = exact.solve(gt, system.rhs)
    else:
        A = system.as_array().T
        u, s, vt = np.linalg.svd(A)
        null = s <= RANK_TOL * max(1.0, s[0])
        ker = [list(vt[i]) for i in np.nonzero(null)[0]]
        if not verdict.solvable:
            raise exact.SingularSystemError("moment problem has no solution", ker)
        d = list(np.linalg.lstsq(A, np.array([float(b) for b in system.rhs]), rcond=None)[0])
    coeffs = {idx: di for idx, di in zip(system.indices, d)}
    dual = None
    if all(i.k == 0 and i.l == 0 for i, di in coeffs.items() if di):
        (x0, x1), (y0, y1), (t0, t1) = Q_BOX
        h = phi.t_part.h
        tp = PiecewisePolynomial.zero()
        for i, di in coeffs.items():
            if di:
                tp = tp + h.translate(i.m).scale(di)
        tp = tp.restrict(t0, t1)
        if not tp.is_zero:
            dual = SeparableGenerator(phi.u.restrict(x0, x1), phi.v.restrict(y0, y1),
                                      TimeDomain(tp))
    return ObliqueDual(phi, coeffs, dual, system.exact, ker)


def oblique_dual(phi: SeparableGenerator) -> ObliqueDual:
    """Index set, moment system and solution in one call."""
    n, M = support_box(phi)
    return solve_dual(phi, restricted_gram(phi, support_index_set(n, M)))


# --- verification ----------------------------------------------------------------

def translate_inner(left: SeparableGenerator, w: TranslateIndex,
                    right: SeparableGenerator, v: TranslateIndex):
    """``<L_w left, L_v right>`` for a ``Q``-supported ``right``.

    Exact when the spatial factors cannot meet (zero) or when ``w`` and ``v``
    share ``(k, l)`` (common shear, so the t-integral decouples); quadrature
    over ``Q`` after the measure-preserving substitution ``q -> v q``
    otherwise.  Returns ``(value, exact_flag)``.
    """
    w, v = TranslateIndex(*w), TranslateIndex(*v)
    xo = _cross(left.u, right.u, 2 * (v.k - w.k))
    yo = _cross(left.v, right.v, v.l - w.l)
    if xo.is_zero or yo.is_zero:
        return Fraction(0), True
    if (w.k, w.l) == (v.k, v.l):
        t = _cross(left.t_part.h, right.t_part.h, v.m - w.m)
        return xo.integral() * yo.integral() * t.integral(), True
    _check_q_supported(right)
    e = w.element.inverse() * v.element
    val, _ = q_integral([(1, left, e)], [(1, right, GroupElement(0, 0, 0))])
    return val, False


def dual_inner(phi: SeparableGenerator, dual: ObliqueDual, w, v):
    """``<L_w phi, L_v phi~>`` for any dual (separable or not)."""
    if dual.dual is not None:
        return translate_inner(phi, w, dual.dual, v)
    w, v = TranslateIndex(*w), TranslateIndex(*v)
    e = w.element.inverse() * v.element
    val, _ = q_integral([(1, phi, e)], dual.terms())
    return val, False


def default_window(phi: SeparableGenerator):
    """``|k|, |l| <= 2`` and ``|m| <= M + n + 2``."""
    n, M = support_box(phi)
    return (range(-2, 3), range(-2, 3), range(-(M + n + 2), M + n + 3))


@dataclass
class BiorthogonalityReport:
    max_deviation: float
    values: dict
    exact: bool

    def worst(self):
        return max(self.values.items(), key=lambda kv: abs(kv[1] - (kv[0] == str(ORIGIN))))


def verify_biorthogonality(phi: SeparableGenerator, dual: ObliqueDual,
                           window=None) -> BiorthogonalityReport:
    """``max |<phi, L_w phi~> - delta_{w,0}|`` over ``window`` (three ranges)."""
    ks, ls, ms = window or default_window(phi)
    worst, values, all_exact = 0.0, {}, True
    for k in ks:
        for l in ls:
            for m in ms:
                w = TranslateIndex(k, l, m)
                val, ex = dual_inner(phi, dual, ORIGIN, w)
                all_exact &= ex
                values[str(w)] = val
                worst = max(worst, abs(float(val) - (w == ORIGIN)))
    return BiorthogonalityReport(worst, values, all_exact)


def reconstruction_matrix(phi: SeparableGenerator, dual: ObliqueDual, support, margin=None):
    """``(outer_indices, M)`` with ``M[i][j] = <L_{support_j} phi, L_{outer_i} phi~>``."""
    n, Mt = support_box(phi)
    dk, dl, dm = margin or (n + 1, n + 1, Mt + 2 * n + 3)
    support = [TranslateIndex(*s) for s in support]
    ks = range(min(s.k for s in support) - dk, max(s.k for s in support) + dk + 1)
    ls = range(min(s.l for s in support) - dl, max(s.l for s in support) + dl + 1)
    ms = range(min(s.m for s in support) - dm, max(s.m for s in support) + dm + 1)
    outer = [TranslateIndex(k, l, m) for k in ks for l in ls for m in ms]
    mat = np.zeros((len(outer), len(support)))
    for j, w in enumerate(support):
        for i, v in enumerate(outer):
            mat[i, j] = float(dual_inner(phi, dual, w, v)[0])
    return outer, mat


def verify_reconstruction(phi: SeparableGenerator, dual: ObliqueDual, coefficients: dict,
                          _cache=None) -> float:
    """Relative residual ``||c_rec - c|| / ||c||`` where ``f = sum c_w L_w phi``
    and ``c_rec(v) = <f, L_v phi~>`` over an enlarged window."""
    support = [TranslateIndex(*w) for w in coefficients]
    outer, mat = _cache or reconstruction_matrix(phi, dual, support)
    c = np.array([float(coefficients[w]) for w in coefficients])
    recovered = mat @ c
    target = np.zeros(len(outer))
    pos = {v: i for i, v in enumerate(outer)}
    for w, cw in zip(support, c):
        target[pos[w]] = cw
    return float(np.linalg.norm(recovered - target) / np.linalg.norm(c))
