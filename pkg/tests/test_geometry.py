import math

import numpy as np
import pytest

from fisherrao import (
    DimensionMismatch,
    DistanceConvention,
    Geodesic,
    SpdMatrix,
    SymmetricMatrix,
    TangentVector,
    christoffel,
    congruence,
    distance,
    exp_map,
    fd_path_derivative,
    geodesic_point,
    geodesic_velocity,
    log_map,
    mc_fisher,
    metric,
    pencil_eigenvalues,
    random_spd,
    random_symmetric,
    random_tangent,
)

R_FIX = SpdMatrix([[2.0, 1.0], [1.0, 2.0]])
S_FIX = SpdMatrix([[3.0, 0.0], [0.0, 1.0]])

# frozen via the 2x2 quadratic-formula eigensystem oracle
LOGMAP_FIX = np.array(
    [[0.3006198874012332, -1.2024795496049379],
     [-1.2024795496049379, -1.5030994370061719]]
)
PENCIL_FIX = np.array([0.4514162296451364, 2.21525043702153])
DIST_FIX = 0.7953654612239056


class TestMetric:
    def test_identity_point(self):
        eye = SymmetricMatrix(np.eye(2))
        assert metric(SpdMatrix(np.eye(2)), eye, eye) == pytest.approx(1.0, abs=1e-15)

    def test_scalar_case(self):
        at = SpdMatrix([[2.0]])
        d = SymmetricMatrix([[3.0]])
        assert metric(at, d, d) == pytest.approx(1.125, abs=1e-15)

    def test_fixture_value(self):
        d = SymmetricMatrix(np.diag([1.0, -1.0]))
        assert metric(R_FIX, d, d) == pytest.approx(1.0 / 3.0, rel=1e-14)

    def test_matches_monte_carlo_oracle(self):
        d = SymmetricMatrix(np.diag([1.0, -1.0]))
        estimate, std_error = mc_fisher(R_FIX, d, 200_000, seed=2024, form="score")
        assert abs(estimate - metric(R_FIX, d, d)) < 3.0 * std_error

    def test_positive_on_nonzero(self, rng):
        for _ in range(10):
            r = random_spd(3, rng)
            a = random_symmetric(3, rng)
            assert metric(r, a, a) > 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            metric(R_FIX, SymmetricMatrix(np.eye(3)), SymmetricMatrix(np.eye(2)))


class TestChristoffel:
    def test_identity_base(self, rng):
        a = random_symmetric(3, rng)
        out = christoffel(SpdMatrix(np.eye(3)), a, a)
        np.testing.assert_allclose(out.entries, -(a.entries @ a.entries), atol=1e-14)

    def test_scalar_case(self):
        out = christoffel(SpdMatrix([[2.0]]), SymmetricMatrix([[3.0]]), SymmetricMatrix([[4.0]]))
        assert out.entries[0, 0] == pytest.approx(-6.0, abs=1e-15)

    def test_symmetric_in_arguments_exactly(self, rng):
        for _ in range(50):
            p = int(rng.integers(1, 7))
            r = random_spd(p, rng)
            a = random_symmetric(p, rng)
            b = random_symmetric(p, rng)
            np.testing.assert_array_equal(
                christoffel(r, a, b).entries, christoffel(r, b, a).entries
            )


class TestGeodesic:
    def test_point_at_zero_is_base(self, rng):
        r = random_spd(4, rng)
        geo = Geodesic(r, random_symmetric(4, rng))
        assert np.max(np.abs(geo.point(0.0).entries - r.entries)) < 1e-10

    def test_velocity_at_zero_is_direction(self, rng):
        r = random_spd(4, rng)
        d = random_symmetric(4, rng)
        geo = Geodesic(r, d)
        assert np.max(np.abs(geo.velocity(0.0).entries - d.entries)) < 1e-10

    def test_scalar_exponential(self):
        geo = Geodesic(SpdMatrix([[1.0]]), SymmetricMatrix([[1.0]]))
        for t in (-1.0, 0.0, 0.5, 2.0):
            assert geo.point(t).entries[0, 0] == pytest.approx(math.exp(t), rel=1e-12)

    def test_scalar_velocity(self):
        geo = Geodesic(SpdMatrix([[1.0]]), SymmetricMatrix([[2.0]]))
        for t in (0.0, 0.3):
            assert geo.velocity(t).entries[0, 0] == pytest.approx(2.0 * math.exp(2.0 * t), rel=1e-12)

    def test_endpoint_reaches_target(self):
        geo = Geodesic(R_FIX, log_map(R_FIX, S_FIX))
        assert np.max(np.abs(geo.point(1.0).entries - S_FIX.entries)) < 1e-10

    def test_point_stays_spd_for_any_t(self, rng):
        r = random_spd(3, rng)
        geo = Geodesic(r, random_tangent(r, rng))
        for t in (-3.0, -1.0, 2.0, 5.0):
            assert np.all(np.linalg.eigvalsh(geo.point(t).entries) > 0.0)

    def test_velocity_matches_finite_difference(self, rng):
        r = random_spd(3, rng)
        geo = Geodesic(r, random_tangent(r, rng))
        fd = fd_path_derivative(geo.point, 0.37, 1e-5, order=1)
        assert np.max(np.abs(geo.velocity(0.37).entries - fd.entries)) < 1e-8

    def test_module_level_wrappers(self):
        geo = Geodesic(R_FIX, log_map(R_FIX, S_FIX))
        np.testing.assert_array_equal(geodesic_point(geo, 0.5).entries, geo.point(0.5).entries)
        np.testing.assert_array_equal(
            geodesic_velocity(geo, 0.5).entries, geo.velocity(0.5).entries
        )

    def test_from_tangent(self):
        tv = TangentVector(R_FIX, log_map(R_FIX, S_FIX))
        geo = Geodesic.from_tangent(tv)
        assert np.max(np.abs(geo.point(1.0).entries - S_FIX.entries)) < 1e-10

    def test_tangent_vector_dim_invariant(self):
        with pytest.raises(DimensionMismatch):
            TangentVector(R_FIX, SymmetricMatrix(np.eye(3)))

    def test_tangent_norm_is_distance_of_log(self):
        tv = TangentVector(R_FIX, log_map(R_FIX, S_FIX))
        assert tv.norm() == pytest.approx(distance(R_FIX, S_FIX), rel=1e-12)


class TestExpLogMaps:
    def test_exp_of_zero(self, rng):
        r = random_spd(3, rng)
        out = exp_map(r, SymmetricMatrix(np.zeros((3, 3))))
        assert np.max(np.abs(out.entries - r.entries)) < 1e-12

    def test_exp_diagonal_at_identity(self):
        out = exp_map(SpdMatrix(np.eye(2)), SymmetricMatrix(np.diag([1.0, 2.0])))
        np.testing.assert_allclose(out.entries, np.diag([np.e, np.e**2]), rtol=1e-12)

    def test_log_at_same_point_is_zero(self, rng):
        r = random_spd(4, rng)
        assert np.max(np.abs(log_map(r, r).entries)) < 1e-12

    def test_log_diagonal_at_identity(self):
        out = log_map(SpdMatrix(np.eye(2)), SpdMatrix(np.diag([np.e, np.e**2])))
        np.testing.assert_allclose(out.entries, np.diag([1.0, 2.0]), atol=1e-13)

    def test_log_map_fixture(self):
        np.testing.assert_allclose(log_map(R_FIX, S_FIX).entries, LOGMAP_FIX, atol=1e-12)

    def test_round_trip_random_pairs(self, rng):
        for _ in range(40):
            p = int(rng.integers(1, 6))
            r = random_spd(p, rng)
            s = random_spd(p, rng)
            back = exp_map(r, log_map(r, s))
            rel = np.max(np.abs(back.entries - s.entries)) / np.max(np.abs(s.entries))
            assert rel < 1e-10


class TestDistance:
    def test_zero_at_same_point(self, rng):
        r = random_spd(3, rng)
        assert distance(r, r) == 0.0

    def test_forced_commuting_case(self):
        d = distance(SpdMatrix(np.eye(2)), SpdMatrix(np.exp(2.0) * np.eye(2)))
        assert d == pytest.approx(2.0, abs=1e-14)

    def test_forced_diagonal_case(self):
        d = distance(SpdMatrix(np.diag([1.0, 4.0])), SpdMatrix(np.diag([4.0, 1.0])))
        assert d == pytest.approx(math.log(4.0), abs=1e-14)

    def test_fixture_value(self):
        assert distance(R_FIX, S_FIX) == pytest.approx(DIST_FIX, rel=1e-12)

    def test_trace_and_pencil_methods_agree(self, rng):
        for _ in range(30):
            p = int(rng.integers(1, 7))
            r = random_spd(p, rng)
            s = random_spd(p, rng)
            via_trace = distance(r, s, method="trace")
            via_pencil = distance(r, s, method="pencil")
            assert abs(via_trace - via_pencil) <= 1e-10 * via_trace

    def test_smith_convention_factor(self):
        paper = distance(R_FIX, S_FIX, convention=DistanceConvention.PAPER)
        smith = distance(R_FIX, S_FIX, convention=DistanceConvention.SMITH)
        assert smith == pytest.approx(paper * math.sqrt(2.0), rel=1e-15)

    def test_convention_accepts_strings(self):
        assert distance(R_FIX, S_FIX, convention="smith") == distance(
            R_FIX, S_FIX, convention=DistanceConvention.SMITH
        )

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="unknown distance method"):
            distance(R_FIX, S_FIX, method="frobenius")

    def test_near_identical_snaps_to_zero(self, rng):
        r = random_spd(3, rng)
        nudged = SpdMatrix(r.entries * (1.0 + 1e-16))
        assert distance(r, nudged) == 0.0

    def test_symmetry(self, rng):
        for _ in range(30):
            p = int(rng.integers(1, 7))
            r = random_spd(p, rng)
            s = random_spd(p, rng)
            d_rs, d_sr = distance(r, s), distance(s, r)
            assert abs(d_rs - d_sr) <= 1e-12 * d_rs

    def test_congruence_invariance(self, rng):
        for _ in range(30):
            p = int(rng.integers(1, 7))
            r = random_spd(p, rng)
            s = random_spd(p, rng)
            m = rng.standard_normal((p, p))
            while np.linalg.cond(m) > 1e3:
                m = rng.standard_normal((p, p))
            mapped = distance(SpdMatrix(congruence(r, m)), SpdMatrix(congruence(s, m)))
            assert abs(mapped - distance(r, s)) <= 1e-9 * distance(r, s)

    def test_inversion_invariance(self, rng):
        for _ in range(30):
            p = int(rng.integers(1, 7))
            r = random_spd(p, rng)
            s = random_spd(p, rng)
            flipped = distance(SpdMatrix(r.inv()), SpdMatrix(s.inv()))
            assert abs(flipped - distance(r, s)) <= 1e-9 * distance(r, s)

    def test_additivity_along_geodesic(self, rng):
        for _ in range(15):
            p = int(rng.integers(1, 6))
            r = random_spd(p, rng)
            s = random_spd(p, rng)
            geo = Geodesic(r, log_map(r, s))
            full = distance(r, s)
            for t in (0.25, 0.5, 0.75):
                assert abs(distance(r, geo.point(t)) - t * full) <= 1e-9 * full

    def test_triangle_inequality(self, rng):
        for _ in range(60):
            p = int(rng.integers(1, 6))
            r, s, t = (random_spd(p, rng) for _ in range(3))
            assert distance(r, t) <= distance(r, s) + distance(s, t) + 1e-9


class TestPencilEigenvalues:
    def test_same_point_gives_ones(self, rng):
        r = random_spd(4, rng)
        np.testing.assert_allclose(pencil_eigenvalues(r, r), np.ones(4), atol=1e-13)

    def test_diagonal_case(self):
        values = pencil_eigenvalues(SpdMatrix(np.diag([1.0, 2.0])), SpdMatrix(np.diag([3.0, 8.0])))
        np.testing.assert_allclose(values, [3.0, 4.0], rtol=1e-13)

    def test_fixture(self):
        np.testing.assert_allclose(pencil_eigenvalues(R_FIX, S_FIX), PENCIL_FIX, rtol=1e-12)

    def test_matches_generalized_eigenvalue_oracle(self, rng):
        # roots of det(S - lambda R) via LAPACK's nonsymmetric route on R^-1 S
        for _ in range(10):
            p = int(rng.integers(2, 6))
            r = random_spd(p, rng)
            s = random_spd(p, rng)
            ref = np.sort(np.linalg.eigvals(np.linalg.solve(r.entries, s.entries)).real)
            np.testing.assert_allclose(pencil_eigenvalues(r, s), ref, rtol=1e-9)

    def test_ascending_and_positive(self, rng):
        values = pencil_eigenvalues(random_spd(5, rng), random_spd(5, rng))
        assert np.all(values > 0.0)
        assert np.all(np.diff(values) >= 0.0)


class TestLeviCivitaProperties:
    def test_metric_polarization_identity(self, rng):
        for _ in range(20):
            p = int(rng.integers(1, 7))
            r = random_spd(p, rng)
            a = random_symmetric(p, rng)
            b = random_symmetric(p, rng)
            plus = SymmetricMatrix(a.entries + b.entries)
            minus = SymmetricMatrix(a.entries - b.entries)
            polarized = 0.25 * (metric(r, plus, plus) - metric(r, minus, minus))
            value = metric(r, a, b)
            assert abs(value - polarized) <= 1e-12 * max(1.0, abs(value))

    def test_metric_compatibility_along_lines(self, rng):
        h = 1e-6
        for _ in range(10):
            p = int(rng.integers(1, 6))
            r = random_spd(p, rng)
            x, y, z = (random_symmetric(p, rng) for _ in range(3))
            plus = metric(SpdMatrix(r.entries + h * x.entries), y, z)
            minus = metric(SpdMatrix(r.entries - h * x.entries), y, z)
            lhs = (plus - minus) / (2.0 * h)
            rhs = metric(r, christoffel(r, x, y), z) + metric(r, y, christoffel(r, x, z))
            assert abs(lhs - rhs) < 1e-6

    def test_geodesic_equation_residual(self, rng):
        # gamma'' = gamma' gamma^-1 gamma', with gamma'' computed analytically
        # as D R^-1/2 exp(tW) R^-1/2 D through a LAPACK eigensystem
        for _ in range(5):
            p = int(rng.integers(1, 6))
            r = random_spd(p, rng)
            d = random_tangent(r, rng)
            geo = Geodesic(r, d)
            inv_sqrt = r.inv_sqrt().entries
            w = inv_sqrt @ d.entries @ inv_sqrt
            evals, evecs = np.linalg.eigh((w + w.T) / 2.0)
            for t in np.linspace(0.0, 1.0, 20):
                vel = geo.velocity(t).entries
                gamma = geo.point(t).entries
                e_t = (evecs * np.exp(t * evals)) @ evecs.T
                accel = d.entries @ inv_sqrt @ e_t @ inv_sqrt @ d.entries
                residual = np.max(np.abs(accel - vel @ np.linalg.solve(gamma, vel)))
                assert residual <= 1e-10 * np.max(np.abs(accel))
