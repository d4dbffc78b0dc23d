import numpy as np
import pytest

from ncweyl import (
    AlgebraParams,
    Branch,
    CriticalLine,
    DegenerateParams,
    IllConditioned,
    InvalidParams,
    ReductionCase,
    SingularMap,
    WrongPhase,
    invert,
    is_canonical,
    normalize,
    solve,
    solve_gamma_zero,
    solve_negative_delta,
    solve_positive_delta,
    solve_theta_zero,
    structure_matrix,
    transform_structure,
)
from ncweyl.algebra import CANONICAL_J
from ncweyl.darboux import (
    assemble_negative,
    assemble_positive,
    negative_coefficients,
    positive_coefficients,
)

from helpers import (
    make_rng,
    negative_phase_params,
    positive_phase_params,
    sigma_negative_closed,
    sigma_positive_closed,
)


def measured_sigma(dmap):
    """Oracle: push the structure matrix through the map and pattern-match."""
    prime = transform_structure(dmap.matrix, structure_matrix(dmap.params))
    return is_canonical(prime)


class TestPositiveDelta:
    def test_plus_branch_example(self):
        params = AlgebraParams(1.0, 1.0, 2.0)  # delta = 3
        dmap = solve_positive_delta(params, Branch.PLUS)
        root3 = np.sqrt(3.0)
        assert dmap.a == pytest.approx(2.0 + root3, rel=1e-14)
        assert dmap.b == pytest.approx(2.0 + root3, rel=1e-14)
        assert dmap.sigma == pytest.approx(6.0 * (2.0 + root3), rel=1e-14)
        assert measured_sigma(dmap) == pytest.approx(dmap.sigma, rel=1e-12)

    def test_minus_branch_example(self):
        params = AlgebraParams(1.0, 1.0, 2.0)
        dmap = solve_positive_delta(params, Branch.MINUS)
        root3 = np.sqrt(3.0)
        assert dmap.a == pytest.approx(2.0 - root3, rel=1e-13)
        assert dmap.sigma == pytest.approx(6.0 * (2.0 - root3), rel=1e-13)
        assert measured_sigma(dmap) == pytest.approx(dmap.sigma, rel=1e-12)

    def test_critical_is_wrong_phase(self):
        with pytest.raises(WrongPhase):
            solve_positive_delta(AlgebraParams(1.0, 1.0, 1.0), Branch.PLUS)

    def test_degenerate_gamma_rejected(self):
        with pytest.raises(DegenerateParams):
            solve_positive_delta(AlgebraParams(1.0, 0.0, 1.0), Branch.MINUS)

    def test_degenerate_theta_rejected(self):
        with pytest.raises(DegenerateParams):
            solve_positive_delta(AlgebraParams(0.0, 1.0, 1.0), Branch.MINUS)

    def test_closed_form_sigma_property(self):
        rng = make_rng(21)
        for params in positive_phase_params(rng, 300):
            for branch, sign in ((Branch.PLUS, +1), (Branch.MINUS, -1)):
                dmap = solve_positive_delta(params, branch)
                closed = sigma_positive_closed(params, sign)
                got = measured_sigma(dmap)
                assert got is not None
                assert abs(got - closed) <= 1e-10 * abs(closed)

    def test_cross_branch_pairing_vanishes(self):
        # y from a+, q from b- (or the reverse) kills [y_i, q_i]
        rng = make_rng(22)
        for params in positive_phase_params(rng, 200, hbar_min=0.25):
            a_plus, a_minus, b_plus, b_minus = positive_coefficients(params)
            omega = structure_matrix(params)
            for a, b in ((a_plus, b_minus), (a_minus, b_plus)):
                prime = transform_structure(assemble_positive(a, b), omega)
                assert abs(prime[0, 2]) <= 1e-10 * params.hbar
                assert abs(prime[1, 3]) <= 1e-10 * params.hbar


class TestNegativeDelta:
    def test_plus_branch_example(self):
        params = AlgebraParams(1.0, 2.0, 1.0)  # delta = -1
        dmap = solve_negative_delta(params, Branch.PLUS)
        root2 = np.sqrt(2.0)
        assert dmap.a == pytest.approx(-2.0 + root2, rel=1e-13)
        assert dmap.b == pytest.approx(-2.0 - root2, rel=1e-13)
        assert dmap.sigma == pytest.approx(4.0, rel=1e-14)
        assert measured_sigma(dmap) == pytest.approx(4.0, rel=1e-12)

    def test_minus_branch_swaps_coefficients(self):
        params = AlgebraParams(1.0, 2.0, 1.0)
        dmap = solve_negative_delta(params, Branch.MINUS)
        root2 = np.sqrt(2.0)
        assert dmap.a == pytest.approx(-2.0 - root2, rel=1e-13)
        assert dmap.b == pytest.approx(-2.0 + root2, rel=1e-13)
        assert dmap.sigma == pytest.approx(4.0, rel=1e-14)

    def test_positive_params_rejected(self):
        with pytest.raises(WrongPhase):
            solve_negative_delta(AlgebraParams(1.0, 0.5, 1.0), Branch.PLUS)

    def test_closed_form_sigma_property(self):
        rng = make_rng(23)
        for params in negative_phase_params(rng, 300):
            closed = sigma_negative_closed(params)
            for branch in (Branch.PLUS, Branch.MINUS):
                got = measured_sigma(solve_negative_delta(params, branch))
                assert got is not None
                assert abs(got - closed) <= 1e-10 * abs(closed)

    def test_same_branch_pairing_vanishes(self):
        rng = make_rng(24)
        for params in negative_phase_params(rng, 200, hbar_min=0.25):
            a_plus, a_minus = negative_coefficients(params)
            omega = structure_matrix(params)
            for c in (a_plus, a_minus):
                m = assemble_negative(params.theta, params.gamma, c, c)
                prime = transform_structure(m, omega)
                assert abs(prime[0, 2]) <= 1e-10 * params.hbar
                assert abs(prime[1, 3]) <= 1e-10 * params.hbar


class TestLimits:
    def test_gamma_zero_example(self):
        dmap = solve_gamma_zero(AlgebraParams(1.0, 0.0, 1.0))
        assert dmap.a == 0.5
        assert dmap.b == 0.0
        assert dmap.sigma == 1.0
        assert dmap.case is ReductionCase.GAMMA_ZERO_LIMIT
        assert measured_sigma(dmap) == pytest.approx(1.0, rel=1e-14)

    def test_gamma_zero_scaling(self):
        dmap = solve_gamma_zero(AlgebraParams(2.0, 0.0, 1.0))
        assert dmap.a == 1.0
        assert dmap.sigma == 1.0

    def test_gamma_zero_guard(self):
        with pytest.raises(DegenerateParams):
            solve_gamma_zero(AlgebraParams(0.0, 0.0, 1.0))
        with pytest.raises(DegenerateParams):
            solve_gamma_zero(AlgebraParams(1.0, 0.5, 1.0))

    def test_theta_zero_example(self):
        dmap = solve_theta_zero(AlgebraParams(0.0, 1.0, 1.0))
        assert dmap.b == 0.5
        assert dmap.a == 0.0
        assert dmap.sigma == 1.0
        assert measured_sigma(dmap) == pytest.approx(1.0, rel=1e-14)

    def test_theta_zero_scaling(self):
        dmap = solve_theta_zero(AlgebraParams(0.0, 4.0, 2.0))
        assert dmap.b == 1.0
        assert dmap.sigma == 2.0

    def test_theta_zero_guard(self):
        with pytest.raises(DegenerateParams):
            solve_theta_zero(AlgebraParams(0.0, 0.0, 1.0))

    def test_smooth_limit_continuity(self):
        # the minus branch approaches the gamma-zero map monotonically
        theta, hbar = 1.3, 0.9
        limit = solve_gamma_zero(AlgebraParams(theta, 0.0, hbar)).matrix
        gaps = []
        for k in range(4, 13):
            dmap = solve(AlgebraParams(theta, 10.0**-k, hbar), Branch.MINUS)
            gaps.append(np.max(np.abs(dmap.matrix - limit)))
        for prev, nxt in zip(gaps, gaps[1:]):
            assert nxt <= prev * (1.0 + 1e-12) + 1e-16
        assert gaps[-1] <= 1e-11


class TestSolveDispatch:
    def test_commutative_identity(self):
        for branch in (Branch.PLUS, Branch.MINUS):
            dmap = solve(AlgebraParams(0.0, 0.0, 1.0), branch)
            assert dmap.case is ReductionCase.COMMUTATIVE_IDENTITY
            assert np.array_equal(dmap.matrix, np.eye(4))
            assert dmap.sigma == 1.0

    def test_critical_line_raises(self):
        with pytest.raises(CriticalLine):
            solve(AlgebraParams(2.0, 0.5, 1.0))

    def test_negative_gamma_gives_negative_sigma(self):
        params = AlgebraParams(1.0, -1.0, 1.0)  # delta = 2
        dmap = solve(params, Branch.PLUS)
        assert dmap.case is ReductionCase.POSITIVE_DELTA
        assert dmap.a == pytest.approx((1.0 + np.sqrt(2.0)) / -1.0, rel=1e-13)
        assert dmap.sigma < 0
        assert measured_sigma(dmap) == pytest.approx(dmap.sigma, rel=1e-12)

    def test_ill_conditioned_plus_branch(self):
        params = AlgebraParams(1.0, 1e-12, 1.0)
        with pytest.raises(IllConditioned):
            solve(params, Branch.PLUS)
        # the minus branch stays smooth and available
        dmap = solve(params, Branch.MINUS)
        assert dmap.a == pytest.approx(0.5, rel=1e-10)

    def test_routes_limits(self):
        assert solve(AlgebraParams(1.0, 0.0, 1.0)).case is ReductionCase.GAMMA_ZERO_LIMIT
        assert solve(AlgebraParams(0.0, 3.0, 1.0)).case is ReductionCase.THETA_ZERO_LIMIT


class TestNormalize:
    def test_scales_q_rows(self):
        params = AlgebraParams(1.0, 2.0, 1.0)
        dmap = solve(params, Branch.PLUS)  # sigma = 4
        scaled = normalize(dmap, 1.0)
        assert scaled.sigma == 1.0
        assert np.array_equal(scaled.matrix[:2], dmap.matrix[:2])
        assert np.allclose(scaled.matrix[2:], dmap.matrix[2:] / 4.0)
        assert measured_sigma(scaled) == pytest.approx(1.0, rel=1e-12)

    def test_fixed_point(self):
        dmap = solve(AlgebraParams(1.0, 0.0, 1.0))
        assert normalize(dmap, 1.0) is dmap

    def test_negative_sigma_flip(self):
        dmap = solve(AlgebraParams(1.0, -1.0, 1.0), Branch.PLUS)
        assert dmap.sigma < 0
        scaled = normalize(dmap, 1.0)
        assert scaled.sigma == 1.0
        assert measured_sigma(scaled) == pytest.approx(1.0, rel=1e-10)

    def test_default_target_is_hbar(self):
        params = AlgebraParams(1.0, 2.0, 1.5)
        scaled = normalize(solve(params, Branch.PLUS))
        assert scaled.sigma == params.hbar

    def test_rejects_bad_target(self):
        dmap = solve(AlgebraParams(1.0, 0.0, 1.0))
        with pytest.raises(InvalidParams):
            normalize(dmap, 0.0)


class TestInvert:
    def test_identity(self):
        dmap = solve(AlgebraParams(0.0, 0.0, 1.0))
        assert np.allclose(invert(dmap), np.eye(4))

    def test_gamma_zero_closed_inverse(self):
        # x_i = y_i - (theta/2 hbar) eps_ij q_j, p_i = q_i
        dmap = solve(AlgebraParams(1.0, 0.0, 1.0))
        expected = np.array(
            [
                [1.0, 0.0, 0.0, -0.5],
                [0.0, 1.0, 0.5, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
        inv = invert(dmap)
        assert np.max(np.abs(inv - expected)) < 1e-14
        assert np.max(np.abs(dmap.matrix @ inv - np.eye(4))) < 1e-10

    def test_round_trip_recovers_structure(self):
        rng = make_rng(25)
        pool = positive_phase_params(rng, 60) + negative_phase_params(rng, 60)
        for params in pool:
            dmap = solve(params, Branch.MINUS)
            inv = invert(dmap)
            recovered = transform_structure(inv, dmap.sigma * CANONICAL_J)
            omega = structure_matrix(params).omega
            scale = max(1.0, float(np.max(np.abs(omega))))
            assert np.max(np.abs(recovered - omega)) <= 1e-10 * scale

    def test_singular_gate(self):
        from dataclasses import replace

        dmap = solve(AlgebraParams(1.0, 0.0, 1.0))
        broken = replace(dmap, matrix=np.zeros((4, 4)))
        with pytest.raises(SingularMap):
            invert(broken)
