"""Quantization of symbols into dense Fourier-mode operators.

Three assembly rules, all Kohn-Nirenberg ordered (frequency multiplier
first, then the x-dependence):

* ``t_quantize``     -- rescaled family: mode m is multiplied by a(x, m/t)
                        and re-expanded, so entry (n, m) is the x-Fourier
                        coefficient of a(., m/t) at frequency n - m.
* ``op_quantize``    -- order-zero operator of a homogeneous symbol with a
                        cutting function: entry (n, m) is
                        a_hat_{sign m}(n - m) * theta(|m|).
* ``multiplication_operator`` -- pi(c): plain convolution by the loop c.

Chart-local assembly sums windowed quantizations against a partition of
unity on two arcs.  Arcs of the circle carry the global angle coordinate,
so chart-local quantization on the mode lattice coincides with windowed
global assembly; products are formed on an enlarged mode range and
compressed back, which keeps corner entries free of truncation artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import CircleGrid, FourierOperator
from .partition import smooth_step
from .symbols import HomogeneousSymbol, Loop, Symbol

__all__ = [
    "Atlas",
    "t_quantize",
    "t_quantize_charts",
    "op_quantize",
    "multiplication_operator",
    "padded_grid",
    "restrict_to",
]


# -- low-level assembly ----------------------------------------------------


def _toeplitz_gather(coeffs, grid):
    """Arrange coefficients c(j), |j| <= 2N, into the (n, m) -> c(n-m) table.

    Returns an array of shape (2N+1, 2N+1, k, k).
    """
    n = grid.n_modes
    idx = np.subtract.outer(np.arange(n), np.arange(n)) + 2 * grid.N
    return coeffs[idx]


def _assemble(column_weighted):
    """(n, m, k, k) block table -> flat (dim, dim) matrix."""
    n = column_weighted.shape[0]
    k = column_weighted.shape[2]
    return column_weighted.transpose(0, 2, 1, 3).reshape(n * k, n * k)


def padded_grid(grid, pad):
    """Same sampling density, mode range enlarged by ``pad`` on both sides."""
    return CircleGrid(J=grid.J + 4 * pad, N=grid.N + pad, k=grid.k)


def restrict_to(op, grid):
    """Corner compression of an operator onto a coarser target grid."""
    if grid.k != op.grid.k:
        raise ValueError("block sizes differ")
    if grid.N > op.grid.N:
        raise ValueError("target cutoff exceeds the source cutoff")
    keep = ~op.grid.tail_mask(grid.N)
    return FourierOperator(grid, op.mat[np.ix_(keep, keep)])


# -- the rescaled family -----------------------------------------------------


def t_quantize(a, t, grid):
    """Operator of the rescaled symbol a(x, xi/t) on the mode lattice.

    Linear in the symbol; for a separable term c(x) rho(xi) M the entry
    (n, m) is exactly c_hat(n - m) * rho(m / t) * M.
    """
    if t <= 0:
        raise ValueError("need t > 0")
    if not isinstance(a, Symbol):
        raise TypeError("t_quantize expects a separable Symbol")
    table = np.zeros((grid.n_modes, grid.n_modes, grid.k, grid.k), dtype=complex)
    freqs = grid.modes / t
    for loop, prof in a.terms:
        coeffs = loop.coefficients(grid, 2 * grid.N)
        weights = np.asarray(prof(freqs), dtype=complex)
        table += _toeplitz_gather(coeffs, grid) * weights[None, :, None, None]
    return FourierOperator(grid, _assemble(table))


def quantize_sampled(fn, t, grid, chunk=128):
    """t-quantization of a sampled matrix function a(x, xi).

    ``fn(x_array, xi) -> (J, k, k)`` is evaluated column by column at the
    rescaled lattice frequencies; x-coefficients come from the grid FFT.
    Used for symbols outside the separable vocabulary (projection-valued
    symbols of the index pairing).
    """
    if t <= 0:
        raise ValueError("need t > 0")
    x = grid.x
    modes = grid.modes
    table = np.zeros((grid.n_modes, grid.n_modes, grid.k, grid.k), dtype=complex)
    for start in range(0, grid.n_modes, chunk):
        cols = modes[start:start + chunk]
        vals = np.stack([np.asarray(fn(x, m / t), dtype=complex) for m in cols], axis=1)
        spectrum = np.fft.fft(vals, axis=0) / grid.J
        idx = (modes[:, None] - cols[None, :]) % grid.J
        table[:, start:start + len(cols)] = spectrum[idx, np.arange(len(cols))[None, :]]
    return FourierOperator(grid, _assemble(table))


# -- order-zero quantization -------------------------------------------------


def op_quantize(a, theta, grid):
    """Order-zero operator of a homogeneous symbol with cutting function.

    Column m is weighted by theta(|m|) and uses the loop of the matching
    half-axis; theta(0) = 0 makes the m = 0 column vanish, so the branch
    convention there is immaterial.
    """
    if not isinstance(a, HomogeneousSymbol):
        raise TypeError("op_quantize expects a HomogeneousSymbol")
    if grid.k != a.k:
        raise ValueError("block sizes differ")
    modes = grid.modes
    w = np.asarray(theta(np.abs(modes)), dtype=complex)
    wp = np.where(modes >= 0, w, 0.0)
    wm = np.where(modes < 0, w, 0.0)
    cp = a.plus.coefficients(grid, 2 * grid.N)
    cm = a.minus.coefficients(grid, 2 * grid.N)
    table = (_toeplitz_gather(cp, grid) * wp[None, :, None, None]
             + _toeplitz_gather(cm, grid) * wm[None, :, None, None])
    return FourierOperator(grid, _assemble(table))


def multiplication_operator(c, grid):
    """pi(c): multiplication by a loop, entries c_hat(n - m).

    A declared trigonometric degree above N would alias: rejected.  Loops
    without a declared degree (smooth windows) are accepted; their
    coefficients must decay inside the band, which the construction of the
    window vocabulary guarantees.
    """
    if not isinstance(c, Loop):
        raise TypeError("multiplication_operator expects a Loop")
    if c.k != grid.k:
        raise ValueError("block sizes differ")
    if c.degree is not None and c.degree > grid.N:
        raise ValueError(f"loop degree {c.degree} exceeds the cutoff N={grid.N}")
    coeffs = c.coefficients(grid, 2 * grid.N)
    return FourierOperator(grid, _assemble(_toeplitz_gather(coeffs, grid)))


# -- charts ------------------------------------------------------------------


def _wrap(x):
    return (np.asarray(x, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi


@dataclass(frozen=True)
class Atlas:
    """Two-chart partition of unity on the circle.

    ``phis`` sum to one, ``psis`` are plateau windows with psi_k = 1 on the
    support of phi_k (with a positive margin) and supp psi_k inside the
    chart arc.  Windows are plain callables of the angle.
    """

    phis: tuple
    psis: tuple
    arcs: tuple
    strict: bool = True

    def validate(self, grid, tol=1e-13):
        x = grid.x
        total = sum(np.asarray(phi(x), dtype=float) for phi in self.phis)
        if np.max(np.abs(total - 1.0)) > tol:
            raise ValueError("chart windows do not sum to one")
        for phi, psi, arc in zip(self.phis, self.psis, self.arcs):
            pv = np.asarray(phi(x), dtype=float)
            sv = np.asarray(psi(x), dtype=float)
            if np.min(pv) < -tol:
                raise ValueError("phi windows must be nonnegative")
            if np.max(np.abs(sv * pv - pv)) > tol:
                raise ValueError("psi must equal one on the support of phi")
            if self.strict and not (arc[1] - arc[0] < 2.0 * np.pi):
                raise ValueError("chart arcs must be shorter than the full circle")
        return True

    @staticmethod
    def default_two_charts():
        """Two arcs of length 3*pi/2 centered at angle 0 and pi."""
        d_phi, rise = 5.0 * np.pi / 8.0, 3.0 * np.pi / 8.0
        plateau, support = 21.0 * np.pi / 32.0, 11.0 * np.pi / 16.0

        def bump(center):
            def fn(x):
                r = np.abs(_wrap(np.asarray(x, dtype=float) - center))
                return smooth_step((d_phi - r) / rise)
            return fn

        b1, b2 = bump(0.0), bump(np.pi)

        def phi1(x):
            v1, v2 = b1(x), b2(x)
            return v1 / (v1 + v2)

        def phi2(x):
            v1, v2 = b1(x), b2(x)
            return v2 / (v1 + v2)

        def window(center):
            def fn(x):
                r = np.abs(_wrap(np.asarray(x, dtype=float) - center))
                return smooth_step((support - r) / (support - plateau))
            return fn

        arcs = ((-0.75 * np.pi, 0.75 * np.pi), (0.25 * np.pi, 1.75 * np.pi))
        return Atlas((phi1, phi2), (window(0.0), window(np.pi)), arcs)

    @staticmethod
    def degenerate():
        """Single effective chart (phi_1 = psi_1 = 1); for collapse tests."""
        one = lambda x: np.ones_like(np.asarray(x, dtype=float))
        zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
        arcs = ((0.0, 2.0 * np.pi), (0.0, 2.0 * np.pi))
        return Atlas((one, zero), (one, zero), arcs, strict=False)


def _windowed(a, window):
    """Multiply the x-part of every term of a separable symbol by a window."""
    terms = []
    for loop, prof in a.terms:
        def fn(x, _loop=loop, _w=window):
            return np.asarray(_w(x))[..., None, None] * np.asarray(_loop.fn(x))
        terms.append((Loop(fn, loop.k, None), prof))
    return Symbol(tuple(terms), a.k, a.tag)


def _scalar_multiplier(window, grid):
    """Multiplication operator of a scalar window (identity coefficient block)."""
    loop = Loop(lambda x, _w=window: np.asarray(_w(x))[..., None, None]
                * np.eye(grid.k)[None, :, :], grid.k, None)
    return multiplication_operator(loop, grid)


def t_quantize_charts(a, t, atlas, grid, pad=64):
    """Chart-by-chart quantization f -> sum_k T_t(psi_k a)(phi_k f).

    Each chart term is the windowed quantization composed with
    multiplication by phi_k.  The composition is carried out on a mode range
    enlarged by ``pad`` and compressed back, so the returned corner agrees
    with the untruncated product up to window-coefficient decay.
    """
    if t <= 0:
        raise ValueError("need t > 0")
    atlas.validate(grid)
    big = padded_grid(grid, pad)
    total = np.zeros((big.dim, big.dim), dtype=complex)
    for phi, psi in zip(atlas.phis, atlas.psis):
        if np.max(np.abs(np.asarray(phi(grid.x), dtype=float))) == 0.0:
            continue
        chart_term = t_quantize(_windowed(a, psi), t, big)
        total += chart_term.mat @ _scalar_multiplier(phi, big).mat
    return restrict_to(FourierOperator(big, total), grid)
