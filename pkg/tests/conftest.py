from fractions import Fraction

from hypothesis import strategies as st

from heisenberg_frames.piecewise_poly import PiecewisePolynomial

small_fractions = st.builds(Fraction, st.integers(-24, 24), st.sampled_from([1, 2, 3, 4, 6]))


@st.composite
def piecewise_polys(draw, max_pieces=3, max_degree=2):
    """Random compactly supported piecewise polynomials with rational data."""
    start = draw(st.integers(-3, 3))
    widths = draw(st.lists(st.builds(Fraction, st.integers(1, 8), st.just(4)),
                           min_size=1, max_size=max_pieces))
    bps = [Fraction(start)]
    for w in widths:
        bps.append(bps[-1] + w)
    pieces = [tuple(draw(st.lists(small_fractions, min_size=1, max_size=max_degree + 1)))
              for _ in widths]
    return PiecewisePolynomial(tuple(bps), tuple(pieces))
