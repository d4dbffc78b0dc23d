import pytest
from dataclasses import replace

from ncweyl import (
    AlgebraParams,
    Branch,
    WeylPhaseForm,
    WrongPhase,
    commutator,
    group_law_defect,
    nondegenerate,
    nondegenerate_sigma,
    phase_form_negative,
    phase_form_positive,
    solve,
    structure_matrix,
    transform_structure,
    weyl_phase,
)

from helpers import make_rng, negative_phase_params, positive_phase_params


class TestWeylPhase:
    def test_negative_delta_example(self):
        # sigma = 4, so omega((1,0),(1,0)) = -4; the printed closed form
        # 2*delta*(gamma*theta/hbar) = 2*(-1)*2 agrees
        params = AlgebraParams(1.0, 2.0, 1.0)
        dmap = solve(params, Branch.PLUS)
        assert weyl_phase(dmap, (1.0, 0.0), (1.0, 0.0)) == pytest.approx(-4.0, rel=1e-14)
        assert phase_form_negative(params, (1.0, 0.0), (1.0, 0.0)) == pytest.approx(
            -4.0, rel=1e-14
        )

    def test_zero_vector(self):
        dmap = solve(AlgebraParams(1.0, 2.0, 1.0))
        assert weyl_phase(dmap, (0.0, 0.0), (0.7, -0.3)) == 0.0

    def test_orthogonal_index_pairing(self):
        # only the matched components alpha_1*beta_1 + alpha_2*beta_2 enter
        dmap = solve(AlgebraParams(1.0, 2.0, 1.0))
        assert weyl_phase(dmap, (1.0, 0.0), (0.0, 1.0)) == 0.0

    def test_identity_with_positive_closed_form(self):
        rng = make_rng(31)
        # |gamma*theta| >= 1e-4 keeps the literal (hbar - sqrt(delta))
        # subtraction in the printed form accurate to ~1e-12 relative
        for params in positive_phase_params(rng, 300, min_gamma_theta=1e-4):
            alpha = rng.uniform(-2, 2, size=2)
            beta = rng.uniform(-2, 2, size=2)
            for branch in (Branch.PLUS, Branch.MINUS):
                dmap = solve(params, branch)
                printed = phase_form_positive(params, branch, alpha, beta)
                got = weyl_phase(dmap, alpha, beta)
                assert abs(got - printed) <= 1e-10 * abs(printed)

    def test_identity_with_negative_closed_form(self):
        rng = make_rng(32)
        for params in negative_phase_params(rng, 300):
            alpha = rng.uniform(-2, 2, size=2)
            beta = rng.uniform(-2, 2, size=2)
            printed = phase_form_negative(params, alpha, beta)
            for branch in (Branch.PLUS, Branch.MINUS):
                got = weyl_phase(solve(params, branch), alpha, beta)
                assert abs(got - printed) <= 1e-10 * abs(printed)

    def test_negative_form_branch_independent(self):
        rng = make_rng(33)
        for params in negative_phase_params(rng, 100):
            alpha = rng.uniform(-2, 2, size=2)
            beta = rng.uniform(-2, 2, size=2)
            plus = weyl_phase(solve(params, Branch.PLUS), alpha, beta)
            minus = weyl_phase(solve(params, Branch.MINUS), alpha, beta)
            assert abs(plus - minus) <= 1e-12 * max(1.0, abs(plus))

    def test_family_exchange_flips_sign(self):
        # exchanging the exponential families conjugates the relation:
        # V(beta) U(alpha) = e^{-i omega(alpha, beta)} U(alpha) V(beta)
        dmap = solve(AlgebraParams(1.0, 2.0, 1.0))
        alpha, beta = (0.3, -0.8), (1.1, 0.2)
        exchanged = dmap.sigma * (beta[0] * alpha[0] + beta[1] * alpha[1])
        assert weyl_phase(dmap, alpha, beta) == -exchanged

    def test_homogeneity(self):
        rng = make_rng(34)
        dmap = solve(AlgebraParams(1.0, 2.0, 1.0))
        for _ in range(100):
            alpha = rng.uniform(-2, 2, size=2)
            beta = rng.uniform(-2, 2, size=2)
            s, t = rng.uniform(-3, 3, size=2)
            lhs = weyl_phase(dmap, s * alpha, t * beta)
            rhs = s * t * weyl_phase(dmap, alpha, beta)
            assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-13)

    def test_wrong_phase_guards(self):
        with pytest.raises(WrongPhase):
            phase_form_positive(AlgebraParams(1.0, 2.0, 1.0), Branch.PLUS, (1, 0), (1, 0))
        with pytest.raises(WrongPhase):
            phase_form_negative(AlgebraParams(1.0, 0.5, 1.0), (1, 0), (1, 0))


class TestPhaseForm:
    def test_bilinear_evaluation(self):
        form = WeylPhaseForm(sigma_eff=4.0)
        assert form((1.0, 0.0), (1.0, 0.0)) == -4.0
        assert form((0.5, 0.5), (1.0, -1.0)) == 0.0

    def test_nondegeneracy(self):
        assert WeylPhaseForm(1.0).nondegenerate(hbar=1.0)
        assert not WeylPhaseForm(0.0).nondegenerate(hbar=1.0)


class TestNondegenerate:
    def test_off_critical_maps(self):
        rng = make_rng(35)
        pool = positive_phase_params(rng, 50) + negative_phase_params(rng, 50)
        for params in pool:
            assert nondegenerate(solve(params, Branch.MINUS))

    def test_zero_sigma(self):
        dmap = solve(AlgebraParams(1.0, 2.0, 1.0))
        assert not nondegenerate(replace(dmap, sigma=0.0))

    def test_threshold_semantics(self):
        assert not nondegenerate_sigma(1e-15, hbar=1.0, eps_critical=1e-12)
        assert nondegenerate_sigma(1e-9, hbar=1.0, eps_critical=1e-12)


class TestGroupLaw:
    def test_vector_addition(self):
        assert group_law_defect((1.0, 2.0), (3.0, 4.0)) == 0.0

    def test_identity_element(self):
        assert group_law_defect((0.0, 0.0), (-0.7, 0.4)) == 0.0

    def test_corrupted_map_caught_by_commutator_check(self):
        # the companion check: a corrupted y-row breaks [y1, y2] = 0, which
        # the structure pushforward sees even though exponent addition is
        # blind to it
        params = AlgebraParams(1.0, 2.0, 1.0)
        dmap = solve(params, Branch.PLUS)
        omega = structure_matrix(params)
        good = transform_structure(dmap.matrix, omega)
        assert abs(good[0, 1]) <= 1e-12
        corrupted = dmap.matrix.copy()
        corrupted[0, 2] += 0.25  # pollute y1 with a p1 component
        bad = commutator(corrupted[0], corrupted[1], omega)
        assert abs(bad) > 1e-3
        assert group_law_defect((0.1, 0.2), (0.3, 0.4)) == 0.0
