"""Truncated Gramians of ``{L_(2k,l,m) g}`` at a fixed ``lam`` in (0, 1].

Entry ``((k,l), (k',l'))`` is

    sum_r e^{2 pi i (lam - r)(l k' - k l')} <(T_(2(k-k'), l-l'))^{lam-r} g^{lam-r}, g^{lam-r}>

The phase comes from the composition law of twisted translates applied to
``<T_(2k,l) F, T_(2k',l') F> = <T_(2k',l')^{-1} T_(2k,l) F, F>``.  Because
``r`` is an integer the phase does not depend on ``r``, so each entry is a
phase times an ``r``-sum that depends only on the offset ``(k-k', l-l')``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse.linalg

from .heisenberg import (SeparableGenerator, offset_range,
                         twisted_composition_phase, twisted_inner)
from .profiles import FrequencyIndicator, radius_for, profile_tail_bound

ASYMMETRY_LIMIT = 1e-8
DENSE_LIMIT = 64 * 64


class PhaseConventionError(RuntimeError):
    """Assembled Gramian is not Hermitian."""


def r_indices(profile, lam: float, eps: float, scale: float = 1.0):
    """Integers ``r`` for the ``r``-sum and the achieved tail bound.

    ``scale`` bounds ``|X Y|`` (the spatial factors) so that the neglected
    part of every entry is below ``scale * tail``.
    """
    if isinstance(profile, FrequencyIndicator):
        # hat h(-(lam - r)) = chi_[0,p](r - lam)
        lo, hi = math.ceil(lam), math.floor(lam + profile.p)
        return np.arange(lo, hi + 1), 0.0
    R = radius_for(profile, eps, scale=scale)
    r = np.arange(-R, R + 1)
    r = r[np.argsort(np.abs(r), kind="stable")]
    return r, scale * profile_tail_bound(profile, R)


def offset_sums(g: SeparableGenerator, lam: float, eps: float = 1e-10):
    """``{(dk, dl): sum_r twisted_inner(g, 2 dk, dl, lam - r)}`` for all
    offsets whose spatial supports overlap; plus the tail bound."""
    r, tail = r_indices(g.t_part, lam, eps, scale=g.spatial_norm_sq)
    mu = lam - r
    ku, lv = offset_range(g)
    table = {}
    for dk in range(-ku, ku + 1):
        for dl in range(-lv, lv + 1):
            table[(dk, dl)] = complex(np.sum(twisted_inner(g, 2 * dk, dl, mu)))
    return table, tail


def _phase(row, col, lam):
    (k, l), (kp, lp) = row, col
    # T_(-2k', -l') T_(2k, l) = e^{i pi lam (2k(-l') - (-2k')l)} T_(2(k-k'), l-l')
    return twisted_composition_phase(-2 * kp, -lp, 2 * k, l, lam)


def gramian_entry(g: SeparableGenerator, row, col, lam: float, eps: float = 1e-10) -> complex:
    (k, l), (kp, lp) = row, col
    r, _ = r_indices(g.t_part, lam, eps, scale=g.spatial_norm_sq)
    s = np.sum(twisted_inner(g, 2 * (k - kp), l - lp, lam - r))
    return complex(_phase(row, col, lam) * s)


def window_indices(K: int, L: int) -> list:
    """``[(k, l) for k < K for l < L]``; nested for growing ``K, L``."""
    return [(k, l) for k in range(K) for l in range(L)]


def parse_window(text: str) -> tuple[int, int]:
    K, _, L = text.lower().partition("x")
    K, L = int(K), int(L or K)
    if K < 1 or L < 1:
        raise ValueError("window sizes must be positive")
    return K, L


@dataclass
class GramianMatrix:
    lam: float
    indices: list
    entries: np.ndarray
    eps: float
    tail_bound: float = 0.0
    max_asymmetry: float = 0.0

    @property
    def size(self) -> int:
        return len(self.indices)

    def to_json(self) -> dict:
        return {"lambda": self.lam, "indices": [list(i) for i in self.indices],
                "real": self.entries.real.tolist(), "imag": self.entries.imag.tolist(),
                "eps": self.eps, "tail_bound": self.tail_bound,
                "max_asymmetry": self.max_asymmetry}


def assemble_gramian(g: SeparableGenerator, window, lam: float,
                     eps: float = 1e-10) -> GramianMatrix:
    """Gramian over ``window`` (``(K, L)`` or an explicit index list)."""
    indices = window_indices(*window) if isinstance(window, tuple) else list(window)
    if not indices:
        raise ValueError("window must be nonempty")
    table, tail = offset_sums(g, lam, eps)
    n = len(indices)
    G = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(indices):
        for j, col in enumerate(indices):
            off = (row[0] - col[0], row[1] - col[1])
            val = table.get(off)
            if val:
                G[i, j] = _phase(row, col, lam) * val
    asym = float(np.max(np.abs(G - G.conj().T))) if n else 0.0
    if asym > ASYMMETRY_LIMIT:
        raise PhaseConventionError(f"Gramian asymmetry {asym:.3e} exceeds {ASYMMETRY_LIMIT}")
    G = (G + G.conj().T) / 2
    return GramianMatrix(lam, indices, G, eps, tail, asym)


def eig_bounds(G, max_iter: int = 2000):
    """``(min_eig, max_eig)`` of a Hermitian matrix.

    Dense ``eigvalsh`` up to 64^2 rows; beyond that a Lanczos solve with a
    fixed iteration budget.
    """
    A = G.entries if isinstance(G, GramianMatrix) else np.asarray(G)
    if A.shape[0] <= DENSE_LIMIT:
        w = np.linalg.eigvalsh(A)
        return float(w[0]), float(w[-1])
    lo = scipy.sparse.linalg.eigsh(A, k=1, which="SA", maxiter=max_iter,
                                   return_eigenvectors=False)
    hi = scipy.sparse.linalg.eigsh(A, k=1, which="LA", maxiter=max_iter,
                                   return_eigenvectors=False)
    return float(lo[0]), float(hi[0])


@dataclass
class RieszScanReport:
    lambda_grid: list
    windows: list
    min_eig: list  # [window][lambda]
    max_eig: list
    A_est: float
    B_est: float
    A_by_window: list
    B_by_window: list
    verdict: str
    status: str = field(default="estimated")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "window_size", "min_eig", "max_eig"])
        for wi, (K, L) in enumerate(self.windows):
            for li, lam in enumerate(self.lambda_grid):
                w.writerow([repr(lam), f"{K}x{L}", repr(self.min_eig[wi][li]),
                            repr(self.max_eig[wi][li])])
        return buf.getvalue()


def riesz_scan(g: SeparableGenerator, windows, grid_size: int = 512,
               eps: float = 1e-10, positivity_tol: float = 1e-10) -> RieszScanReport:
    """Extreme Gramian eigenvalues over a midpoint grid and growing windows.

    Verdict ``riesz-consistent`` when the lower estimate stays above
    ``positivity_tol`` for every window and the last window keeps at least half
    of the previous window's lower estimate; ``not-riesz`` when it does not
    stay positive; ``inconclusive`` otherwise.  Finite windows and grids can
    support or falsify the a.e. infinite-lattice condition, never certify it.
    """
    from .bspline import midpoint_grid

    windows = [tuple(w) for w in windows]
    for (K1, L1), (K2, L2) in zip(windows, windows[1:]):
        if K2 < K1 or L2 < L1:
            raise ValueError("windows must be increasing")
    grid = midpoint_grid(grid_size)
    mins = [[0.0] * len(grid) for _ in windows]
    maxs = [[0.0] * len(grid) for _ in windows]
    for li, lam in enumerate(grid):
        table, _ = offset_sums(g, float(lam), eps)
        for wi, win in enumerate(windows):
            G = _assemble_from_table(window_indices(*win), table, float(lam))
            mins[wi][li], maxs[wi][li] = eig_bounds(G)
    A_w = [min(m) for m in mins]
    B_w = [max(m) for m in maxs]
    A_est, B_est = min(A_w), max(B_w)
    if A_est <= positivity_tol:
        verdict = "not-riesz"
    elif len(A_w) > 1 and A_w[-1] < 0.5 * A_w[-2]:
        verdict = "inconclusive"
    else:
        verdict = "riesz-consistent"
    return RieszScanReport([float(x) for x in grid], [list(w) for w in windows],
                           mins, maxs, A_est, B_est, A_w, B_w, verdict)


def _assemble_from_table(indices, table, lam):
    n = len(indices)
    G = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(indices):
        for j, col in enumerate(indices):
            val = table.get((row[0] - col[0], row[1] - col[1]))
            if val:
                G[i, j] = _phase(row, col, lam) * val
    asym = float(np.max(np.abs(G - G.conj().T)))
    if asym > ASYMMETRY_LIMIT:
        raise PhaseConventionError(f"Gramian asymmetry {asym:.3e} exceeds {ASYMMETRY_LIMIT}")
    return (G + G.conj().T) / 2


@dataclass
class FrameCheckReport:
    lambda_grid: list
    window: list
    trials: int
    ratios: list
    lower_est: float
    upper_est: float
    skipped: int
    status: str = field(default="estimated")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def frame_middle(g: SeparableGenerator, window, alpha, lam: float, eps: float = 1e-10):
    """``(middle, side)`` of the frame-sequence inequality for coefficients ``alpha``.

    ``side = ||sum alpha f_kl||^2 = <G alpha, alpha>`` and
    ``middle = sum_{(k,l) in Z^2} |<sum alpha f, f_kl>|^2``, where the outer
    sum runs over the window grown by the interaction range, which contains
    every nonzero term.
    """
    indices = window_indices(*window) if isinstance(window, tuple) else list(window)
    table, _ = offset_sums(g, lam, eps)
    ku, lv = offset_range(g)
    ks = [i[0] for i in indices]
    ls = [i[1] for i in indices]
    outer = [(k, l) for k in range(min(ks) - ku, max(ks) + ku + 1)
             for l in range(min(ls) - lv, max(ls) + lv + 1)]
    alpha = np.asarray(alpha, dtype=complex)
    # <f_{k'l'}, f_{kl}> for rows (k,l) in outer and columns (k',l') in window
    C = np.zeros((len(outer), len(indices)), dtype=complex)
    for i, kl in enumerate(outer):
        for j, kpl in enumerate(indices):
            val = table.get((kpl[0] - kl[0], kpl[1] - kl[1]))
            if val:
                C[i, j] = _phase(kpl, kl, lam) * val
    coeffs = C @ alpha
    middle = float(np.sum(np.abs(coeffs) ** 2))
    G = _assemble_from_table(indices, table, lam)
    # G[i, j] = <f_i, f_j>, so ||sum_j alpha_j f_j||^2 = alpha^T G conj(alpha)
    side = float(np.real(alpha @ G @ alpha.conj()))
    return middle, side


def frame_check(g: SeparableGenerator, window, lambda_grid, trials: int = 20,
                eps: float = 1e-10, seed: int = 0,
                kernel_tol: float = 1e-14) -> FrameCheckReport:
    """Empirical ``middle / side`` ratios for random coefficient vectors."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    indices = window_indices(*window) if isinstance(window, tuple) else list(window)
    rng = np.random.default_rng(seed)
    ratios, skipped = [], 0
    for lam in lambda_grid:
        for _ in range(trials):
            alpha = rng.standard_normal(len(indices)) + 1j * rng.standard_normal(len(indices))
            middle, side = frame_middle(g, indices, alpha, float(lam), eps)
            if side < kernel_tol:
                skipped += 1
                continue
            ratios.append(middle / side)
    return FrameCheckReport([float(x) for x in lambda_grid],
                            [list(i) for i in indices], trials, ratios,
                            float(min(ratios)) if ratios else math.nan,
                            float(max(ratios)) if ratios else math.nan, skipped)
