import numpy as np
import pytest

from psilab.extension import lifting_check, symbol_map_defect
from psilab.numerics import compact_tail_norm, operator_norm
from psilab.quantize import op_quantize, t_quantize
from psilab.symbols import (HomogeneousSymbol, Loop,
                            rational_vanishing_profile, smash)
from psilab.presets import fiber_constant_loops, loop_c1, smooth_loop


def shift_symbol():
    return HomogeneousSymbol(Loop.from_scalar_modes({1: 1.0}), Loop.identity(1))


def smooth_pair(rate=3.0, degree=40):
    a = HomogeneousSymbol(smooth_loop(seed=23, degree=degree, rate=rate),
                          smooth_loop(seed=24, degree=degree, rate=rate))
    b = HomogeneousSymbol(smooth_loop(seed=25, degree=degree, rate=rate),
                          smooth_loop(seed=26, degree=degree, rate=rate))
    return a, b


class TestSymbolMapDefect:
    def test_unit_pair_vanishes(self, grid64, theta):
        u = HomogeneousSymbol.unit(1)
        prof = symbol_map_defect(u, u, theta, grid64, [8, 16, 32])
        assert max(prof.product_tails) < 1e-13
        assert max(prof.commutator_tails) < 1e-13
        assert prof.passed

    def test_fiber_constant_times_sign_band(self, grid64, theta):
        # defect is the commutator of a band matrix with a diagonal sign:
        # supported below K = deg c + r0, so the tail there is exactly zero
        a = HomogeneousSymbol.fiber_constant(loop_c1())
        b = HomogeneousSymbol.sign(1)
        K = 2 + int(theta.r0)
        prof = symbol_map_defect(a, b, theta, grid64, [K])
        assert prof.product_tails[0] < 1e-13
        assert prof.commutator_tails[0] < 1e-13

    def test_shift_pair_tails_are_exact_zeros(self, grid64, theta):
        # the defect of a degree-one pair is finite rank below the first
        # cutoff: every tail from K = 8 on is an exact zero (frozen from a
        # direct computation; the defect support ends at |m| = r0 + 1)
        a = shift_symbol()
        prof = symbol_map_defect(a, a.adjoint(), theta, grid64, [8, 16, 32])
        assert max(prof.product_tails) < 1e-12
        assert max(prof.commutator_tails) < 1e-12
        assert prof.passed

    def test_smooth_pair_tails_halve(self, grid64, theta):
        a, b = smooth_pair()
        prof = symbol_map_defect(a, b, theta, grid64, [4, 8, 16, 32])
        for tails in (prof.product_tails, prof.commutator_tails):
            assert all(y < x for x, y in zip(tails, tails[1:]))
            assert all(y <= 0.5 * x for x, y in zip(tails, tails[1:]))
        assert prof.passed

    def test_tail_sequences_nonincreasing(self, grid64, theta):
        a, b = smooth_pair()
        prof = symbol_map_defect(a, b, theta, grid64, list(range(2, 33, 3)))
        assert all(y <= x + 1e-13 for x, y in
                   zip(prof.product_tails, prof.product_tails[1:]))

    def test_block_size_mismatch(self, grid64, theta):
        with pytest.raises(ValueError):
            symbol_map_defect(shift_symbol(),
                              HomogeneousSymbol.unit(2), theta, grid64, [8])


class TestLiftingCheck:
    def test_three_fiber_constant_symbols(self, grid64, theta):
        for c in fiber_constant_loops():
            val = lifting_check(HomogeneousSymbol.fiber_constant(c), theta, grid64)
            assert val == 0.0

    def test_rejects_genuinely_homogeneous(self, grid64, theta):
        with pytest.raises(ValueError):
            lifting_check(shift_symbol(), theta, grid64)


class TestIdealMembership:
    def test_adjoint_compatible_modulo_tails(self, grid64, theta):
        a, _ = smooth_pair()
        X = op_quantize(a, theta, grid64)
        Y = op_quantize(a.adjoint(), theta, grid64)
        diff = X.adjoint() - Y
        tails = [compact_tail_norm(diff, K) for K in (8, 16, 32, 60)]
        assert all(y <= x + 1e-13 for x, y in zip(tails, tails[1:]))
        assert tails[-1] < 1e-6

    def test_zero_symbol_quantizes_to_zero(self, grid64, theta):
        zero = HomogeneousSymbol(Loop.constant(np.zeros((1, 1))),
                                 Loop.constant(np.zeros((1, 1))))
        assert operator_norm(op_quantize(zero, theta, grid64)) == 0.0

    def test_vanishing_symbol_lands_in_ideal(self, grid64):
        g = smash(rational_vanishing_profile(), shift_symbol())
        T = t_quantize(g, 4.0, grid64)
        tails = [compact_tail_norm(T, K) for K in (8, 16, 32, 60)]
        assert all(y < x for x, y in zip(tails, tails[1:]))
        assert tails[-1] < 0.2 * tails[0]


class TestMatrixCoefficients:
    def test_symbol_map_defect_at_k2(self, theta):
        from psilab.numerics import CircleGrid
        from psilab.presets import matrix_loop
        g = CircleGrid(J=132, N=32, k=2)
        a = HomogeneousSymbol(matrix_loop(k=2, seed=41), matrix_loop(k=2, seed=42))
        b = HomogeneousSymbol(matrix_loop(k=2, seed=43), matrix_loop(k=2, seed=44))
        prof = symbol_map_defect(a, b, theta, g, [8, 12, 16])
        # the product defect is always in the ideal (finite rank here) ...
        assert prof.product_tails[-1] < 1e-12
        # ... but with noncommuting matrix values the operator commutator
        # carries the symbol commutator, which is not in the ideal
        assert prof.commutator_tails[-1] > 0.1

    def test_commuting_matrix_symbols_have_compact_commutator(self, theta):
        from psilab.numerics import CircleGrid
        from psilab.presets import matrix_loop
        g = CircleGrid(J=132, N=32, k=2)
        a = HomogeneousSymbol(matrix_loop(k=2, seed=41), matrix_loop(k=2, seed=42))
        prof = symbol_map_defect(a, a * a, theta, g, [12, 16])
        assert prof.commutator_tails[-1] < 1e-12

    def test_lifting_check_at_k2(self, theta):
        from psilab.numerics import CircleGrid
        from psilab.presets import matrix_loop
        g = CircleGrid(J=132, N=32, k=2)
        c = matrix_loop(k=2, seed=45)
        assert lifting_check(HomogeneousSymbol.fiber_constant(c), theta, g) == 0.0
