import numpy as np
import pytest

from psilab.symbols import (CutFunction, HomogeneousSymbol, Loop, Symbol,
                            SymbolClass, adjoint, bump_profile, cap_profile,
                            constant_profile, dilate, gamma_profile,
                            pointwise_mul, rational_decay_profile,
                            rational_vanishing_profile, smash, step_profile)
from psilab.partition import build_partition

RNG = np.random.default_rng(42)
POINTS = [(RNG.uniform(0, 2 * np.pi), RNG.uniform(-10, 10)) for _ in range(100)]


def simple_symbol():
    loop = Loop.from_scalar_modes({1: 0.5, 0: 1.0, -2: 0.25j})
    return Symbol.separable(loop, rational_decay_profile(), SymbolClass.FULL_C0)


def homog_example(k=1):
    return HomogeneousSymbol(Loop.from_scalar_modes({1: 1.0}, k=k), Loop.identity(k))


class TestLoop:
    def test_coefficient_eval(self):
        loop = Loop.from_scalar_modes({2: 1.0 + 0.5j})
        x = np.array([0.3, 1.2])
        assert np.allclose(loop(x)[:, 0, 0], (1.0 + 0.5j) * np.exp(2j * x))

    def test_product_degree(self):
        a = Loop.from_scalar_modes({1: 1.0})
        b = Loop.from_scalar_modes({-2: 1.0, 0: 3.0})
        assert (a * b).degree == 3

    def test_adjoint_matrix(self):
        mat = np.array([[1.0, 2.0 + 1j], [0.0, 3.0]])
        loop = Loop.constant(mat)
        assert np.allclose(loop.adjoint()(0.0), mat.conj().T)

    def test_block_size_mismatch(self):
        with pytest.raises(ValueError):
            Loop.identity(1) * Loop.identity(2)


class TestDilate:
    def test_identity_dilation(self):
        a = simple_symbol()
        for x, xi in POINTS[:20]:
            assert np.allclose(dilate(a, 1.0)(x, xi), a(x, xi))

    def test_substitution(self):
        a = Symbol.separable(Loop.identity(1), rational_decay_profile(),
                             SymbolClass.FULL_C0)
        # value of a_2 at xi = 2 equals the profile at 1
        assert dilate(a, 2.0)(0.0, 2.0)[0, 0] == pytest.approx(0.5)

    def test_group_law(self):
        a = simple_symbol()
        lhs = dilate(dilate(a, 0.5), 3.0)
        rhs = dilate(a, 1.5)
        for x, xi in POINTS[:30]:
            assert np.allclose(lhs(x, xi), rhs(x, xi), atol=1e-14)

    def test_class_preserved(self):
        a = Symbol.separable(Loop.identity(1), cap_profile(2.0),
                             SymbolClass.COMPACT_SUPPORT)
        assert dilate(a, 3.0).tag == SymbolClass.COMPACT_SUPPORT

    def test_positive_parameter(self):
        with pytest.raises(ValueError):
            dilate(simple_symbol(), 0.0)
        with pytest.raises(ValueError):
            dilate(homog_example(), -2.0)

    def test_homogeneous_fixed_point(self):
        a = homog_example()
        for x, xi in POINTS[:20]:
            if xi != 0:
                assert np.allclose(dilate(a, 7.0)(x, xi), a(x, xi))


class TestSmash:
    def test_zero_profile(self):
        f = constant_profile(0.0)
        f = rational_vanishing_profile() * 0.0
        g = smash(f, homog_example())
        for x, xi in POINTS[:10]:
            assert np.max(np.abs(g(x, xi))) == 0.0

    def test_fiber_constant_branches(self):
        f = rational_vanishing_profile()
        g = smash(f, HomogeneousSymbol.unit(1))
        for x, xi in POINTS[:30]:
            expect = f(abs(xi)) if xi != 0 else 0.0
            assert np.allclose(g(x, xi)[0, 0], expect)

    def test_zero_at_zero_section(self):
        g = smash(rational_vanishing_profile(), homog_example())
        for x in np.linspace(0, 2 * np.pi, 17):
            assert np.max(np.abs(g(x, 0.0))) == 0.0

    def test_translation_compatibility(self):
        # smash(tau_s f, a) = dilate(smash(f, a), 1/s) with tau_s f(r) = f(s r)
        f = rational_vanishing_profile()
        a = homog_example()
        for s in (0.5, 2.0, 3.0):
            lhs = smash(f.scale_argument(s), a)
            rhs = dilate(smash(f, a), 1.0 / s)
            for x, xi in POINTS[:25]:
                assert np.allclose(lhs(x, xi), rhs(x, xi), atol=1e-14)

    def test_requires_vanishing_at_zero(self):
        with pytest.raises(ValueError):
            smash(rational_decay_profile(), homog_example())

    def test_class_is_vanishing(self):
        g = smash(bump_profile(0.5, 4.0), homog_example())
        assert g.tag == SymbolClass.VANISHING_00


class TestAlgebra:
    def test_unimodular_inverse(self):
        a = Symbol.separable(Loop.from_scalar_modes({1: 1.0}), constant_profile(1.0),
                             SymbolClass.FULL_C0)
        b = Symbol.separable(Loop.from_scalar_modes({-1: 1.0}), constant_profile(1.0),
                             SymbolClass.FULL_C0)
        prod = pointwise_mul(a, b)
        for x, xi in POINTS[:20]:
            assert np.allclose(prod(x, xi), np.eye(1))

    def test_adjoint_involution(self):
        a = simple_symbol()
        aa = adjoint(adjoint(a))
        for x, xi in POINTS[:30]:
            assert np.allclose(aa(x, xi), a(x, xi), atol=1e-14)

    def test_product_adjoint_identity(self):
        a = simple_symbol()
        b = Symbol.separable(Loop.from_scalar_modes({-1: 2.0, 1: 0.5j}),
                             rational_vanishing_profile(), SymbolClass.VANISHING_00)
        lhs = adjoint(pointwise_mul(a, b))
        rhs = pointwise_mul(adjoint(b), adjoint(a))
        for x, xi in POINTS:
            assert np.allclose(lhs(x, xi), rhs(x, xi), atol=1e-13)

    def test_tag_combination(self):
        cs = Symbol.separable(Loop.identity(1), cap_profile(1.0),
                              SymbolClass.COMPACT_SUPPORT)
        full = simple_symbol()
        assert pointwise_mul(cs, full).tag == SymbolClass.COMPACT_SUPPORT
        v = smash(rational_vanishing_profile(), homog_example())
        assert pointwise_mul(v, full).tag == SymbolClass.VANISHING_00

    def test_mixed_homogeneous_product(self):
        a = simple_symbol()
        h = homog_example()
        prod = pointwise_mul(a, h)
        for x, xi in POINTS[:40]:
            if xi != 0:
                assert np.allclose(prod(x, xi), a(x, xi) @ h(x, xi), atol=1e-13)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            pointwise_mul(simple_symbol(),
                          Symbol.separable(Loop.identity(2), constant_profile(1.0),
                                           SymbolClass.FULL_C0))


class TestInvariants:
    def test_periodicity(self):
        a = simple_symbol()
        for x, xi in POINTS[:30]:
            assert np.allclose(a(x + 2 * np.pi, xi), a(x, xi), atol=1e-12)

    def test_homogeneity(self):
        h = homog_example()
        for x, xi in POINTS[:30]:
            if xi != 0:
                for lam in (0.5, 3.0, 17.0):
                    assert np.allclose(h(x, lam * xi), h(x, xi))

    def test_compact_support_requires_supported_profiles(self):
        with pytest.raises(ValueError):
            Symbol.separable(Loop.identity(1), rational_decay_profile(),
                             SymbolClass.COMPACT_SUPPORT)

    def test_vanishing_requires_flags(self):
        with pytest.raises(ValueError):
            Symbol.separable(Loop.identity(1), rational_decay_profile(),
                             SymbolClass.VANISHING_00)


class TestCutFunction:
    def test_endpoints(self):
        th = CutFunction(4.0)
        assert th(0.0) == 0.0
        assert th(4.0) == 1.0 and th(100.0) == 1.0

    def test_range_and_monotone(self):
        th = CutFunction(4.0)
        r = np.linspace(0, 5, 300)
        v = th(r)
        assert np.all((0.0 <= v) & (v <= 1.0))
        assert np.all(np.diff(v) >= 0.0)


class TestProfiles:
    def test_bump_support_exact(self):
        p = bump_profile(0.5, 4.0)
        assert p(0.4) == 0.0 and p(4.1) == 0.0 and p(0.0) == 0.0
        assert abs(p(2.0)) > 0.0

    def test_step_profile(self):
        p = step_profile(1.0, 2.0)
        assert p(0.5) == 0.0 and p(3.0) == 1.0

    def test_gamma_profile_matches_partition(self):
        part = build_partition(1.0, 4)
        p = gamma_profile(part, 1)
        xs = np.array([1.5, 2.0, 3.0, -3.0])
        assert np.allclose(np.real([p(x) for x in xs]),
                           part.gamma(1, np.abs(xs)))

    def test_one_sided(self):
        p = rational_vanishing_profile().one_sided(+1)
        assert p(-3.0) == 0.0 and abs(p(3.0)) > 0.0
