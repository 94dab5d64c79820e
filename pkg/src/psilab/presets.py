"""Bundled test symbols, profiles and sweep suites.

Everything here is deterministic: random coefficients always come from
fixed seeds, so repeated runs and the regression files they produce are
byte-stable.  These are the defaults the command line and the acceptance
suite share.
"""

from __future__ import annotations

import numpy as np

from .symbols import (CutFunction, HomogeneousSymbol, Loop, Symbol, SymbolClass,
                      bump_profile, cap_profile, rational_decay_profile,
                      rational_vanishing_profile)

__all__ = [
    "default_theta",
    "loop_c1",
    "loop_c2",
    "cs_pair",
    "v00_pair",
    "translation_symbols",
    "chart_symbol",
    "t0_symbol",
    "smooth_homogeneous_pair",
    "fiber_constant_loops",
    "winding_pair",
    "index_suite",
    "ch_cases",
    "ch_extended_cases",
    "homotopy_symbol",
]


def default_theta(r0=4.0):
    return CutFunction(r0)


def loop_c1(k=1):
    return Loop.from_scalar_modes({1: 0.5, 0: 1.0, -2: 0.25}, k=k)


def loop_c2(k=1):
    return Loop.from_scalar_modes({-1: 0.5j, 2: 0.3, 0: 0.4}, k=k)


def _windowed_rational(scale, radius):
    # compactly supported but with rational variation on every dyadic scale
    return rational_decay_profile(scale) * cap_profile(radius, rise=radius / 4.0)


def cs_pair():
    """Compact-support pair for the multiplicativity/adjoint sweeps."""
    a = Symbol.separable(loop_c1(), _windowed_rational(2.0, 48.0),
                         SymbolClass.COMPACT_SUPPORT)
    b = Symbol.separable(loop_c2(), _windowed_rational(1.2, 48.0),
                         SymbolClass.COMPACT_SUPPORT)
    return a, b


def v00_pair():
    """Vanishing-at-zero-and-infinity pair for the same sweeps."""
    a = Symbol.separable(loop_c1(), rational_vanishing_profile(2.0),
                         SymbolClass.VANISHING_00)
    b = Symbol.separable(loop_c2(), rational_vanishing_profile(1.4),
                         SymbolClass.VANISHING_00)
    return a, b


def matrix_loop(k=2, seed=11, degree=2, decay=0.6):
    """Deterministic matrix-valued loop with geometrically damped modes."""
    rng = np.random.default_rng(seed)
    coeffs = np.zeros((2 * degree + 1, k, k), dtype=complex)
    for j in range(-degree, degree + 1):
        mag = decay ** abs(j)
        coeffs[j + degree] = mag * (rng.normal(size=(k, k))
                                    + 1j * rng.normal(size=(k, k))) / (2.0 * k)
    return Loop.from_coeffs(coeffs)


def translation_symbols():
    """Three symbols for the translation-invariance grid (k = 1, 1, 2)."""
    s1 = Symbol.separable(loop_c1(), cap_profile(2.0), SymbolClass.COMPACT_SUPPORT)
    s2 = Symbol.separable(loop_c2(), rational_vanishing_profile(1.0),
                          SymbolClass.VANISHING_00)
    s3 = Symbol.separable(matrix_loop(k=2), bump_profile(0.5, 6.0),
                          SymbolClass.COMPACT_SUPPORT)
    return [s1, s2, s3]


def chart_symbol():
    """Compact-support symbol for the chart-independence sweep."""
    return Symbol.separable(loop_c1(), cap_profile(1.0), SymbolClass.COMPACT_SUPPORT)


def t0_symbol():
    """Vanishing symbol with cubic frequency decay for the t -> 0 check."""
    prof = rational_vanishing_profile(2.0) * rational_decay_profile(2.0)
    return Symbol.separable(loop_c1(), prof, SymbolClass.VANISHING_00)


def smooth_loop(seed=23, degree=96, rate=8.0, k=1):
    """Trigonometric polynomial with exp(-|j|/rate) coefficient decay.

    High enough degree that tail norms of quantization defects decay
    geometrically across the dyadic cutoff grid.
    """
    rng = np.random.default_rng(seed)
    js = np.arange(-degree, degree + 1)
    mags = np.exp(-np.abs(js) / rate)
    phases = np.exp(2j * np.pi * rng.uniform(size=js.size))
    coeffs = (mags * phases)[:, None, None] * np.eye(k)[None]
    return Loop.from_coeffs(coeffs)


def smooth_homogeneous_pair():
    """Homogeneous pair with slowly banded loops for the tail-halving check."""
    a = HomogeneousSymbol(smooth_loop(seed=23), smooth_loop(seed=24))
    b = HomogeneousSymbol(smooth_loop(seed=25), smooth_loop(seed=26))
    return a, b


def fiber_constant_loops():
    """Unit, one-mode and a seeded degree-3 loop (all fiber constant)."""
    rng = np.random.default_rng(31)
    modes = {j: complex(rng.normal(), rng.normal()) / (1.0 + abs(j))
             for j in range(-3, 4)}
    return [Loop.identity(1), Loop.from_scalar_modes({1: 1.0}),
            Loop.from_scalar_modes(modes)]


def winding_pair(w_plus, w_minus, k=1):
    """Invertible homogeneous symbol with prescribed branch windings."""
    def loop(w):
        if w == 0:
            return Loop.identity(k)
        return Loop.from_scalar_modes({w: 1.0}, k=k)
    return HomogeneousSymbol(loop(w_plus), loop(w_minus))


def index_suite():
    """The calibration windings: (0,0), (1,0), (0,1), (2,-1)."""
    pairs = [(0, 0), (1, 0), (0, 1), (2, -1)]
    return [(f"w({p},{m})", winding_pair(p, m)) for p, m in pairs]


def ch_cases():
    """(label, suspended profile, homogeneous symbol) triples."""
    shift = winding_pair(1, 0)
    mixed = HomogeneousSymbol(loop_c1(), Loop.from_scalar_modes({-1: 1.0}))
    return [
        ("rv1-shift", rational_vanishing_profile(1.0), shift),
        ("rv2rd-unit", rational_vanishing_profile(2.0) * rational_decay_profile(2.0),
         HomogeneousSymbol.unit(1)),
        ("rv05-mixed", rational_vanishing_profile(0.5), mixed),
    ]


def ch_extended_cases():
    """(label, decaying profile, fiber-constant loop) triples."""
    return [
        ("rd1-c1", rational_decay_profile(1.0), loop_c1()),
        ("rd2-mode", rational_decay_profile(2.0), Loop.from_scalar_modes({1: 0.7, 0: 0.5})),
    ]


def homotopy_symbol():
    """Homogeneous symbol driving the deformation-family checks."""
    return winding_pair(1, 0)


def band_vector(grid, band, seed):
    """Normalized coefficient vector supported on modes |m| <= band."""
    rng = np.random.default_rng(seed)
    v = np.zeros(grid.dim, dtype=complex)
    sel = np.abs(grid.mode_of_index()) <= band
    amps = 1.0 / (1.0 + np.abs(grid.mode_of_index()[sel]))
    v[np.where(sel)[0]] = amps * np.exp(2j * np.pi * rng.uniform(size=int(sel.sum())))
    return v / np.linalg.norm(v)
