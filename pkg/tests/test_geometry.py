"""Geometry primitives: examples, invariants, and contract errors."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mechlab import (
    ContractViolationError,
    DomainError,
    PlaneRotation,
    SpaceConfig,
    UnsupportedProfileError,
    as_point,
    as_profile,
    center_two_agent,
    lp_distance,
    rotate,
    scale,
    translate,
)

SP2 = SpaceConfig(2, 2.0)


class TestSpaceConfig:
    def test_valid(self):
        cfg = SpaceConfig(3, 1.5)
        assert cfg.m == 3 and cfg.p == 1.5

    @pytest.mark.parametrize("p", [1.0, 0.5, -2.0, float("inf"), float("nan")])
    def test_rejects_bad_exponent(self, p):
        with pytest.raises(DomainError):
            SpaceConfig(2, p)

    @pytest.mark.parametrize("m", [0, -1])
    def test_rejects_bad_dimension(self, m):
        with pytest.raises(ContractViolationError):
            SpaceConfig(m, 2.0)


class TestLpDistance:
    def test_identity(self):
        assert lp_distance((0.0, 0.0), (0.0, 0.0), SP2) == 0.0

    def test_pythagorean(self):
        assert lp_distance((0.0, 0.0), (3.0, 4.0), SP2) == 5.0

    def test_cube_diagonal_p3(self):
        d = lp_distance((0.0, 0.0), (1.0, 1.0), SpaceConfig(2, 3.0))
        assert d == pytest.approx(2.0 ** (1.0 / 3.0), abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ContractViolationError):
            lp_distance((0.0,), (1.0, 2.0), SP2)

    def test_symmetry_and_positivity(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            m = int(rng.integers(1, 5))
            p = float(rng.uniform(1.01, 8.0))
            space = SpaceConfig(m, p)
            a = tuple(rng.uniform(-10, 10, m))
            b = tuple(rng.uniform(-10, 10, m))
            d = lp_distance(a, b, space)
            assert d >= 0
            assert d == lp_distance(b, a, space)

    @settings(max_examples=80, deadline=None)
    @given(
        coords=st.lists(
            st.tuples(*[st.floats(-1e3, 1e3) for _ in range(9)]), min_size=1, max_size=1
        ),
        p=st.floats(1.05, 6.0),
    )
    def test_triangle_inequality(self, coords, p):
        flat = coords[0]
        a, b, c = flat[0:3], flat[3:6], flat[6:9]
        space = SpaceConfig(3, p)
        lhs = lp_distance(a, c, space)
        rhs = lp_distance(a, b, space) + lp_distance(b, c, space)
        assert lhs <= rhs + 1e-12 * max(1.0, rhs)

    def test_translation_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            m = int(rng.integers(1, 4))
            space = SpaceConfig(m, float(rng.uniform(1.1, 5.0)))
            a, b, t = (tuple(rng.uniform(-10, 10, m)) for _ in range(3))
            prof = translate((a, b), t)
            d0 = lp_distance(a, b, space)
            d1 = lp_distance(prof[0], prof[1], space)
            assert d1 == pytest.approx(d0, rel=1e-12, abs=1e-15)

    def test_positive_homogeneity(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            m = int(rng.integers(1, 4))
            space = SpaceConfig(m, float(rng.uniform(1.1, 5.0)))
            a, b = (tuple(rng.uniform(-10, 10, m)) for _ in range(2))
            k = float(10.0 ** rng.uniform(-3, 3))
            sa, sb = scale((a, b), k)
            assert lp_distance(sa, sb, space) == pytest.approx(
                k * lp_distance(a, b, space), rel=1e-12
            )


class TestAffine:
    def test_translate_examples(self):
        assert translate(((0.0, 0.0), (1.0, 1.0)), (1.0, 0.0)) == ((1.0, 0.0), (2.0, 1.0))
        assert translate(((5.0,),), (0.0,)) == ((5.0,),)
        assert translate(((-1.0, 2.0), (3.0, -4.0)), (-3.0, 4.0)) == ((-4.0, 6.0), (0.0, 0.0))

    def test_translate_dimension_mismatch(self):
        with pytest.raises(ContractViolationError):
            translate(((0.0, 0.0),), (1.0,))

    def test_scale_examples(self):
        assert scale(((1.0, 1.0),), 1.0) == ((1.0, 1.0),)
        assert scale(((1.0, 2.0), (3.0, 4.0)), 2.0) == ((2.0, 4.0), (6.0, 8.0))
        assert scale(((4.0, -2.0),), 0.5) == ((2.0, -1.0),)

    @pytest.mark.parametrize("k", [0.0, -1.0])
    def test_scale_rejects_nonpositive(self, k):
        with pytest.raises(DomainError):
            scale(((1.0,),), k)


class TestRotate:
    def test_quarter_turn(self):
        r = PlaneRotation(0, 1, math.pi / 2, (0.0, 0.0))
        (out,) = rotate(((1.0, 0.0),), r)
        assert out == pytest.approx((0.0, 1.0), abs=1e-15)

    def test_identity_rotation(self):
        r = PlaneRotation(0, 1, 0.0, (3.0, -2.0))
        prof = ((1.5, 2.5), (-3.0, 0.25))
        assert rotate(prof, r) == prof

    def test_quarter_turn_diagonal(self):
        r = PlaneRotation(0, 1, math.pi / 2, (0.0, 0.0))
        (out,) = rotate(((1.0, 1.0),), r)
        assert out == pytest.approx((-1.0, 1.0), abs=1e-15)

    def test_preserves_euclidean_distances(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            m = int(rng.integers(2, 5))
            space = SpaceConfig(m, 2.0)
            i, j = rng.choice(m, size=2, replace=False)
            r = PlaneRotation(int(i), int(j), float(rng.uniform(0, 2 * math.pi)),
                              tuple(rng.uniform(-1e3, 1e3, m)))
            a, b = (tuple(rng.uniform(-1e3, 1e3, m)) for _ in range(2))
            ra, rb = rotate((a, b), r)
            assert abs(lp_distance(ra, rb, space) - lp_distance(a, b, space)) <= 1e-9

    def test_rejects_one_dimension(self):
        with pytest.raises(UnsupportedProfileError):
            rotate(((1.0,),), PlaneRotation(0, 1, 1.0, (0.0,)))

    def test_rejects_axis_out_of_range(self):
        with pytest.raises(ContractViolationError):
            rotate(((1.0, 2.0),), PlaneRotation(0, 5, 1.0, (0.0, 0.0)))

    def test_rejects_equal_axes(self):
        with pytest.raises(ContractViolationError):
            PlaneRotation(1, 1, 1.0, (0.0, 0.0))


class TestCenterTwoAgent:
    def test_already_centered(self):
        x, y = center_two_agent((-1.0, 0.0), (1.0, 0.0), (0.0, 1.0))
        assert x == (1.0, 0.0) and y == (0.0, 1.0)

    def test_shift_by_midpoint(self):
        x, y = center_two_agent((0.0, 0.0), (2.0, 0.0), (1.0, 1.0))
        assert x == (1.0, 0.0) and y == (0.0, 1.0)

    def test_coincident(self):
        x, y = center_two_agent((1.0, 1.0), (1.0, 1.0), (1.0, 1.0))
        assert x == (0.0, 0.0) and y == (0.0, 0.0)

    def test_round_trip(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            m = int(rng.integers(1, 4))
            a, b, w = (tuple(rng.uniform(-10, 10, m)) for _ in range(3))
            x, y = center_two_agent(a, b, w)
            mid = tuple((ai + bi) / 2 for ai, bi in zip(a, b))
            for back, orig in (
                (tuple(-xi + mi for xi, mi in zip(x, mid)), a),
                (tuple(xi + mi for xi, mi in zip(x, mid)), b),
                (tuple(yi + mi for yi, mi in zip(y, mid)), w),
            ):
                assert all(abs(u - v) <= 1e-12 for u, v in zip(back, orig))


class TestPointValidation:
    def test_rejects_nan(self):
        with pytest.raises(ContractViolationError):
            as_point((1.0, float("nan")))

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(ContractViolationError):
            as_profile([(1.0, 2.0), (3.0,)])

    def test_rejects_empty_profile(self):
        with pytest.raises(ContractViolationError):
            as_profile([])
