"""Integer index of invertible order-zero symbols, three independent ways.

* winding data of the two determinant loops (analytic route),
* kernel counting of the quantized operator and its adjoint on
  column-complete rectangular truncations (Fredholm route),
* spectral counting of the deformed clutching projections (pairing route).

Sign conventions for the boundary map differ across the literature; the
convention here is calibrated once on the loop pair (e^{ix}, 1), whose
quantization is a weighted shift of index -1, and is then

    index = winding(minus branch) - winding(plus branch).

The same calibration fixes the sign of the spectral pairing; agreement of
the three routes is the content being tested, not the convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .numerics import CircleGrid
from .quantize import op_quantize, padded_grid, quantize_sampled
from .symbols import CutFunction, HomogeneousSymbol, Loop

__all__ = [
    "InconclusiveIndexError",
    "IndexReport",
    "winding_number",
    "fredholm_index_svd",
    "analytic_index",
    "bott_projection",
    "higson_trace_index",
    "index_report",
]

#: global sign of the analytic formula, fixed by the (e^{ix}, 1) calibration
ANALYTIC_SIGN = +1
#: global sign of the spectral pairing, fixed by the same calibration
PAIRING_SIGN = +1
#: spectral gap required around 1/2 for a conclusive eigenvalue count
PAIRING_GAP = 0.1
#: the clutching must reach at least this ramp height inside the mode range
PAIRING_MIN_RAMP = 2.0


class InconclusiveIndexError(RuntimeError):
    """No usable spectral gap at this resolution; increase N (or retune eps)."""


# -- winding numbers ---------------------------------------------------------


def winding_number(loop, samples=4096, invertibility_tol=1e-9):
    """Degree of an invertible loop via the argument of its determinant.

    Accepts a Loop (determinant taken pointwise, sampled densely for its
    degree) or an array of nonzero scalar samples around the circle.
    Raises on non-invertible samples and when a wrapped phase step reaches
    pi/2: beyond that the true increment is ambiguous modulo 2*pi, so the
    loop counts as undersampled.
    """
    if isinstance(loop, Loop):
        if loop.degree is not None:
            samples = max(samples, 16 * loop.degree + 16)
        x = 2.0 * np.pi * np.arange(samples) / samples
        vals = np.linalg.det(np.asarray(loop(x), dtype=complex))
    else:
        vals = np.asarray(loop, dtype=complex)
    if np.min(np.abs(vals)) < invertibility_tol:
        raise ValueError("loop has a (numerically) non-invertible sample")
    ratios = np.roll(vals, -1) / vals
    steps = np.angle(ratios)
    if np.max(np.abs(steps)) >= 0.5 * np.pi:
        raise ValueError("phase step >= pi/2: loop is undersampled")
    total = float(np.sum(steps)) / (2.0 * np.pi)
    w = int(np.rint(total))
    if abs(total - w) > 1e-6:
        raise ValueError(f"winding {total} did not close to an integer")
    return w


# -- Fredholm route ----------------------------------------------------------


def _gapped_small_count(svals, eps, gap_ratio):
    svals = np.sort(svals)
    counted = svals[svals < eps]
    uncounted = svals[svals >= eps]
    top = float(counted[-1]) if counted.size else 0.0
    bottom = float(uncounted[0]) if uncounted.size else np.inf
    if counted.size and bottom < gap_ratio * top:
        raise InconclusiveIndexError(
            f"singular values {top:.3e} and {bottom:.3e} straddle eps={eps:.1e} "
            f"without a {gap_ratio:.0e} gap; increase N or adjust eps_rank")
    if not counted.size and bottom < 10.0 * eps:
        raise InconclusiveIndexError(
            f"smallest singular value {bottom:.3e} sits too close to eps={eps:.1e}")
    return int(counted.size)


def fredholm_index_svd(sigma, theta, grid, eps_rank=1e-6, gap_ratio=1e3, pad=None):
    """Kernel count of Op(sigma) minus kernel count of its adjoint.

    Square corners of an operator can never show an index (their kernel and
    cokernel dimensions agree by rank-nullity), so both counts are taken on
    tall column-complete truncations: domain modes |m| <= N, range modes
    enlarged by the symbol bandwidth.  These converge to the kernel and
    cokernel of the untruncated operator.
    """
    if not isinstance(sigma, HomogeneousSymbol):
        raise TypeError("expected a homogeneous symbol")
    for branch in (sigma.plus, sigma.minus):
        winding_number(branch)  # raises if a branch is not invertible
    deg = sigma.degree if sigma.degree is not None else 16
    pad = deg + 8 if pad is None else pad
    big = padded_grid(grid, pad)
    X = op_quantize(sigma, theta, big).mat
    keep = ~big.tail_mask(grid.N)
    tall = X[:, keep]
    tall_adj = X.conj().T[:, keep]
    k_ker = _gapped_small_count(np.linalg.svd(tall, compute_uv=False), eps_rank, gap_ratio)
    k_coker = _gapped_small_count(np.linalg.svd(tall_adj, compute_uv=False), eps_rank, gap_ratio)
    return k_ker - k_coker


def analytic_index(sigma):
    """Winding formula: ANALYTIC_SIGN * (w(minus) - w(plus))."""
    if not isinstance(sigma, HomogeneousSymbol):
        raise TypeError("expected a homogeneous symbol")
    w_plus = winding_number(sigma.plus)
    w_minus = winding_number(sigma.minus)
    return ANALYTIC_SIGN * (w_minus - w_plus)


# -- clutching projections ---------------------------------------------------


def _graph_projection(B):
    """Projection onto the graph of B, batched over the leading axis.

    For any matrix b the block matrix
        [[ (1+b*b)^-1,      (1+b*b)^-1 b* ],
         [ b (1+b*b)^-1,  b (1+b*b)^-1 b* ]]
    is an exact orthogonal projection of trace k.
    """
    k = B.shape[-1]
    BH = np.swapaxes(B.conj(), -1, -2)
    G = np.linalg.inv(np.eye(k)[None] + BH @ B)
    top = np.concatenate([G, G @ BH], axis=-1)
    bot = np.concatenate([B @ G, B @ G @ BH], axis=-1)
    return np.concatenate([top, bot], axis=-2)


@dataclass(frozen=True)
class BottPair:
    """Clutching projection of a symbol and its trivial companion.

    Both are 2k x 2k exact projections; their difference has entries
    vanishing at fiber infinity at the rate of the chosen ramp profile.
    """

    sigma: HomogeneousSymbol
    ramp: callable = field(repr=False)

    @property
    def k(self):
        return self.sigma.k

    def _b_sigma(self, x, xi):
        vals = np.asarray(self.sigma.branch(+1 if xi >= 0 else -1).fn(x), dtype=complex)
        return self.ramp(abs(xi)) * vals

    def p_sigma(self, x, xi):
        """(len(x), 2k, 2k) samples of the clutching projection."""
        return _graph_projection(self._b_sigma(np.atleast_1d(np.asarray(x, dtype=float)), xi))

    def p_base(self, x, xi):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        B = self.ramp(abs(xi)) * np.broadcast_to(np.eye(self.k, dtype=complex),
                                                 (x.size, self.k, self.k))
        return _graph_projection(np.ascontiguousarray(B))

    def corner(self):
        """The fiber-infinity limit diag(0, 1) of both projections."""
        out = np.zeros((2 * self.k, 2 * self.k), dtype=complex)
        out[self.k:, self.k:] = np.eye(self.k)
        return out


def _identity_ramp(r):
    return r


def bott_projection(sigma, ramp=None):
    """Clutching pair of an invertible symbol.

    ``ramp`` maps |xi| to the fiber radius used in the graph construction;
    it must vanish at 0 and increase to infinity (default: identity).
    """
    for branch in (sigma.plus, sigma.minus):
        winding_number(branch)
    ramp = _identity_ramp if ramp is None else ramp
    if ramp(0.0) != 0.0:
        raise ValueError("ramp must vanish at the origin")
    return BottPair(sigma, ramp)


# -- the spectral pairing ----------------------------------------------------

_pairing_cache = {}


def _count_above_half(pair, t, grid, use_base):
    """Eigenvalue count > 1/2 of P_inf + T_t(p - corner), with its gap."""
    g2 = CircleGrid(J=grid.J, N=grid.N, k=2 * pair.k)
    corner = pair.corner()
    fn = pair.p_base if use_base else pair.p_sigma

    def q_fn(x, xi):
        return fn(x, xi) - corner[None]

    mat = quantize_sampled(q_fn, t, g2).mat
    mat += np.kron(np.eye(g2.n_modes), corner)
    evals = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    gap = float(np.min(np.abs(evals - 0.5)))
    return int(np.sum(evals > 0.5)), gap


def higson_trace_index(sigma, t, grid, ramp=None, pair=None):
    """Spectral pairing of the clutching class with the deformation at time t.

    Counts eigenvalues above 1/2 of the deformed clutching projection and of
    its trivial companion; the difference (times the calibrated sign) is the
    pairing value.  Raises InconclusiveIndexError when the clutching cannot
    develop inside the mode range (ramp below PAIRING_MIN_RAMP at the lattice
    edge) or when an eigenvalue sits within PAIRING_GAP of 1/2; past the
    edge the deformation collapses to the zero-section value and the counts
    would silently agree.

    The literal entrywise trace of the difference vanishes identically
    (both projections have pointwise trace k), so the class content is
    carried entirely by the spectral counts.
    """
    pair = bott_projection(sigma, ramp) if pair is None else pair
    if pair.ramp(grid.N / t) < PAIRING_MIN_RAMP:
        raise InconclusiveIndexError(
            f"ramp height {pair.ramp(grid.N / t):.2f} at the mode cutoff is below "
            f"{PAIRING_MIN_RAMP}; the clutching does not complete at t={t}, "
            "reduce t or increase N")
    key = ("base", grid.J, grid.N, pair.k, float(t), id(pair.ramp))
    if key in _pairing_cache:
        base, base_gap = _pairing_cache[key]
    else:
        base, base_gap = _count_above_half(pair, t, grid, use_base=True)
        _pairing_cache[key] = (base, base_gap)
    cnt, gap = _count_above_half(pair, t, grid, use_base=False)
    if min(base_gap, gap) < PAIRING_GAP:
        raise InconclusiveIndexError(
            f"eigenvalue within {PAIRING_GAP} of 1/2 at t={t}; "
            "the deformation has reached the mode cutoff, reduce t or increase N")
    return float(PAIRING_SIGN * (cnt - base))


def naive_trace_pairing(sigma, t, grid, ramp=None):
    """Entrywise trace of T_t(p_sigma - p_base); identically ~0 (diagnostic)."""
    pair = bott_projection(sigma, ramp)

    def q_fn(x, xi):
        return pair.p_sigma(x, xi) - pair.p_base(x, xi)

    g2 = CircleGrid(J=grid.J, N=grid.N, k=2 * pair.k)
    return float(np.real(np.trace(quantize_sampled(q_fn, t, g2).mat)))


# -- combined report ---------------------------------------------------------


@dataclass(frozen=True)
class IndexReport:
    """All index routes for one symbol, with agreement flags."""

    label: str
    winding_plus: int
    winding_minus: int
    analytic_index: int
    fredholm_index: int | None
    fredholm_inconclusive: bool
    higson_t_grid: tuple
    higson_trace: tuple
    higson_limit: float | None
    higson_rounded: int | None
    agree: bool
    params: dict

    def to_dict(self):
        return asdict(self)


def index_report(sigma, grid, theta=None, t_grid=(16.0, 32.0, 64.0, 128.0, 256.0),
                 eps_rank=1e-6, label="sigma", round_window=0.25):
    """Run all three routes and flag agreement.

    Higson values that are inconclusive at large t are reported as None; the
    limit is the value at the largest conclusive t, rounded only when within
    ``round_window`` of an integer.  Agreement requires every conclusive
    route to give the same integer; an inconclusive route never counts as
    agreement.
    """
    theta = CutFunction() if theta is None else theta
    w_plus = winding_number(sigma.plus)
    w_minus = winding_number(sigma.minus)
    analytic = analytic_index(sigma)

    fredholm, fredholm_bad = None, False
    try:
        fredholm = fredholm_index_svd(sigma, theta, grid, eps_rank=eps_rank)
    except InconclusiveIndexError:
        fredholm_bad = True

    pair = bott_projection(sigma)
    traces = []
    for t in t_grid:
        try:
            traces.append(higson_trace_index(sigma, t, grid, pair=pair))
        except InconclusiveIndexError:
            traces.append(None)
    conclusive = [v for v in traces if v is not None]
    limit = conclusive[-1] if conclusive else None
    rounded = None
    if limit is not None and abs(limit - np.rint(limit)) <= round_window:
        rounded = int(np.rint(limit))

    agree = (not fredholm_bad and fredholm is not None and rounded is not None
             and fredholm == analytic == rounded)
    return IndexReport(
        label=label,
        winding_plus=w_plus,
        winding_minus=w_minus,
        analytic_index=analytic,
        fredholm_index=fredholm,
        fredholm_inconclusive=fredholm_bad,
        higson_t_grid=tuple(float(t) for t in t_grid),
        higson_trace=tuple(traces),
        higson_limit=limit,
        higson_rounded=rounded,
        agree=agree,
        params={"N": grid.N, "J": grid.J, "k": grid.k,
                "eps_rank": eps_rank, "theta_r0": theta.r0},
    )
