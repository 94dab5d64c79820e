"""Approximate-unit machinery and the extension-to-deformation map.

Given a lifted representative chi_bar of the symbol map (the order-zero
operator for general symbols, plain multiplication for fiber-constant ones)
and a quasicentral approximate unit u_t, elementary tensors f (x) d map to

    chi_bar(d) * (f o kappa)(u_t),

evaluated here in exact functional calculus on the diagonal of u_t.  With
the bundled default pair (kappa(v) = 1/v - 1, u_t = kappa^{-1}(|n|/t)) the
weight collapses to f(|n|/t), which makes comparisons with the rescaled
quantization sharp; alternative unit profiles are configurable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import FourierOperator, operator_norm
from .partition import smooth_step
from .quantize import multiplication_operator, op_quantize
from .symbols import HomogeneousSymbol, Loop

__all__ = [
    "Reparametrization",
    "ApproximateUnit",
    "default_unit",
    "tail_deformed_unit",
    "quasicentrality_defect",
    "ch_apply",
    "ch_extended_apply",
]


@dataclass(frozen=True)
class Reparametrization:
    """Homeomorphism kappa: (0, 1] -> [0, infinity), default 1/v - 1."""

    kappa: callable = field(default=lambda v: 1.0 / v - 1.0, repr=False)
    kappa_inv: callable = field(default=lambda r: 1.0 / (1.0 + r), repr=False)

    def check(self, samples=None, tol=1e-13):
        v = np.linspace(1e-3, 1.0, 997) if samples is None else samples
        err = np.max(np.abs(self.kappa_inv(self.kappa(v)) - v))
        if err > tol:
            raise ValueError(f"kappa round-trip error {err}")
        if self.kappa(1.0) != 0.0:
            raise ValueError("kappa must send 1 to 0")
        return True


@dataclass(frozen=True)
class ApproximateUnit:
    """Diagonal approximate unit u_t = m(|n|/t) on the mode lattice.

    The profile m is nonincreasing with m(0) = 1 and m -> 0 at infinity, so
    0 <= u_t <= 1, every u_t has decaying tails, and u_t -> 1 entrywise.
    """

    profile: callable = field(repr=False)
    name: str = "unit"

    def values(self, t, grid):
        if t <= 0:
            raise ValueError("need t > 0")
        return np.asarray(self.profile(np.abs(grid.modes) / t), dtype=float)

    def diagonal(self, t, grid):
        vals = np.repeat(self.values(t, grid), grid.k)
        return FourierOperator(grid, np.diag(vals.astype(complex)))

    def check(self, t, grid):
        vals = self.values(t, grid)
        if np.min(vals) < 0.0 or np.max(vals) > 1.0:
            raise ValueError("unit values must lie in [0, 1]")
        half = vals[grid.N:]
        if np.any(np.diff(half) > 1e-13):
            raise ValueError("unit profile must be nonincreasing in |n|")
        return True

    def weight(self, f, rep, t, grid):
        """Diagonal weights f(kappa(m(|n|/t))), exact on the diagonal."""
        u = self.values(t, grid)
        r = rep.kappa(np.maximum(u, 1e-300))
        return np.asarray(f(r), dtype=complex)


def default_unit(rep=None):
    rep = Reparametrization() if rep is None else rep
    return ApproximateUnit(lambda r: rep.kappa_inv(np.asarray(r, dtype=float)),
                           name="kappa-inverse")


def tail_deformed_unit(rep=None, onset=32.0, width=8.0, amplitude=0.04):
    """Genuinely different unit profile agreeing with the default near 0.

    The induced time change eta = kappa o m deviates from the identity only
    beyond ``onset``; deviations supported near the origin would freeze the
    comparison with the rescaled quantization at a constant (the choice of
    unit is a homotopy-level freedom, not a norm-level one), so the bundled
    alternative exercises the tail where the comparison stays meaningful.
    """
    rep = Reparametrization() if rep is None else rep

    def eta(r):
        r = np.asarray(r, dtype=float)
        return r * (1.0 + amplitude * smooth_step((r - onset) / width))

    return ApproximateUnit(lambda r: rep.kappa_inv(eta(r)),
                           name=f"tail-deformed[{onset}]")


def quasicentrality_defect(u, t, a, theta, grid):
    """Commutator norm ||[u_t, Op(a)]||."""
    U = u.diagonal(t, grid)
    X = op_quantize(a, theta, grid)
    return operator_norm(U @ X - X @ U)


def ch_apply(f, d, t, rep, u, theta, grid):
    """Image of the tensor f (x) d, with the order-zero lifting.

    Returns Op(d) * diag f(kappa(m(|n|/t))); requires f to vanish at the
    origin, matching the suspended domain.
    """
    if not f.vanishes_at_zero:
        raise ValueError("profile must vanish at the origin")
    if not isinstance(d, HomogeneousSymbol):
        raise TypeError("ch_apply expects a homogeneous symbol")
    w = u.weight(lambda r: f(r), rep, t, grid)
    X = op_quantize(d, theta, grid)
    return FourierOperator(grid, X.mat * np.repeat(w, grid.k)[None, :])


def ch_extended_apply(g, c, t, rep, u, grid):
    """Image of g (x) c for fiber-constant c, with the multiplication lifting.

    Returns pi(c) * diag g(kappa(m(|n|/t))); g need not vanish at the
    origin, only at infinity.
    """
    if not isinstance(c, Loop):
        raise TypeError("ch_extended_apply expects a fiber-constant Loop")
    w = u.weight(lambda r: g(r), rep, t, grid)
    X = multiplication_operator(c, grid)
    return FourierOperator(grid, X.mat * np.repeat(w, grid.k)[None, :])
