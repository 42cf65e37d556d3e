"""Independent brute-force oracles shared by several test modules."""

import numpy as np

_X, _W = np.polynomial.legendre.leggauss(20)


def cell_quad_2d(f, xs, ys):
    """Tensor Gauss-Legendre over every unit cell ``[x, x+1] x [y, y+1]``.

    ``f`` must be vectorised; cells aligned with integer breakpoints make the
    rule exact up to rounding for piecewise polynomials times smooth phases.
    """
    total = 0j
    for x0 in xs:
        for y0 in ys:
            X = _X / 2 + x0 + 0.5
            Y = _X / 2 + y0 + 0.5
            XX, YY = np.meshgrid(X, Y, indexing="ij")
            total += np.sum(np.outer(_W, _W) * f(XX, YY)) / 4
    return total


def brute_gramian(u, v, weights, indices, lam, cells=range(-1, 8)):
    """``sum_r w_r <T_(2k,l) F, T_(2k',l')F>`` at ``mu = lam - r`` by 2-D quadrature.

    ``weights`` maps ``r`` to ``|hat h(r - lam)|^2``; ``F = u(x) v(y)``.
    """
    n = len(indices)
    G = np.zeros((n, n), dtype=complex)
    F = lambda x, y: u(x) * v(y)
    for r, wr in weights.items():
        mu = lam - r

        def T(a, b):
            return lambda x, y: np.exp(1j * np.pi * mu * (b * x - a * y)) * F(x - a, y - b)

        for i, (k, l) in enumerate(indices):
            for j, (kp, lp) in enumerate(indices):
                f1, f2 = T(2 * k, l), T(2 * kp, lp)
                G[i, j] += wr * cell_quad_2d(lambda x, y: f1(x, y) * np.conj(f2(x, y)),
                                             cells, cells)
    return G
