import numpy as np
import pytest

from src.models.decoder_models import (
    DecoderKind,
    DecoderModel,
    eps_bmd,
    eps_gs,
    irs_lambda,
    lambda_gs,
    make_tangent,
    optimal_kappa,
    radius_array,
    succeeds,
)

TABLE_ROWS = [
    # z, kappa*, lambda, delta
    (1, 41, 1.69126, 107),
    (5, 72, 1.79208, 110),
    (10, 85, 1.84699, 111),
]


class TestRadii:
    def test_bmd(self, rs255_code):
        assert eps_bmd(rs255_code, 0) == 56
        assert eps_bmd(rs255_code, 110) == 1
        assert eps_bmd(rs255_code, 111) == 0.5
        with pytest.raises(ValueError):
            eps_bmd(rs255_code, 112)

    def test_gs(self, rs255_code):
        assert eps_gs(rs255_code, 0) == pytest.approx(64.04, abs=0.01)
        assert eps_gs(rs255_code, 41) == pytest.approx(39.07, abs=0.01)
        # n - tau = k - 1
        assert eps_gs(rs255_code, 112) == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(ValueError):
            eps_gs(rs255_code, 255)

    def test_lambda_gs(self, rs255_code):
        assert lambda_gs(rs255_code, 41) == pytest.approx(1.69126, abs=1e-4)
        assert lambda_gs(rs255_code, 72) == pytest.approx(1.79208, abs=1e-4)
        assert lambda_gs(rs255_code, 0) == pytest.approx(1.599, abs=1e-3)

    def test_lambda_gs_increasing_and_below_two(self, rs255_code):
        values = [lambda_gs(rs255_code, tau) for tau in range(rs255_code.d)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(1.0 < v < 2.0 for v in values)

    def test_irs_lambda(self):
        assert irs_lambda(1) == 2.0
        assert irs_lambda(2) == 1.5
        with pytest.raises(ValueError):
            irs_lambda(0)


class TestTangent:
    @pytest.mark.parametrize("z,kappa,lam,delta", TABLE_ROWS)
    def test_rs255_tangents(self, rs255_code, z, kappa, lam, delta):
        tangent = make_tangent(rs255_code, kappa)
        assert tangent.lam == pytest.approx(lam, abs=1e-4)
        assert tangent.delta == delta

    @pytest.mark.parametrize("z,kappa,lam,delta", TABLE_ROWS)
    def test_optimal_kappa(self, rs255_code, z, kappa, lam, delta):
        found, tangent = optimal_kappa(rs255_code, z)
        assert found == kappa
        assert tangent.lam == pytest.approx(lam, abs=1e-4)
        assert tangent.delta == delta

    def test_tangent_below_gs_curve(self, rs255_code):
        taus = np.arange(rs255_code.d)
        gs = np.array([eps_gs(rs255_code, t) for t in taus])
        for kappa in range(rs255_code.d):
            tangent = make_tangent(rs255_code, kappa)
            assert np.all(tangent.radius(taus) <= gs + 1e-9)
            assert 0 <= tangent.delta <= rs255_code.n - 1
            assert tangent.radius(tangent.delta) >= 0
            assert tangent.radius(tangent.delta + 1) <= 0

    def test_out_of_range(self, rs255_code, tiny_code):
        with pytest.raises(ValueError):
            make_tangent(rs255_code, 112)
        with pytest.raises(ValueError):
            make_tangent(tiny_code, 0)
        with pytest.raises(ValueError):
            DecoderModel.tangent(rs255_code, -1)


class TestSucceeds:
    def test_examples(self, rs255_code):
        bmd = DecoderModel.bmd(rs255_code)
        gs = DecoderModel.gs(rs255_code)
        tangent = DecoderModel.tangent(rs255_code, 41)
        assert succeeds(bmd, 55, 0)
        assert not succeeds(bmd, 56, 0)
        assert succeeds(bmd, 0, 111)
        assert succeeds(gs, 64, 0)
        assert not succeeds(gs, 65, 0)
        assert succeeds(tangent, 0, 107)
        assert not succeeds(tangent, 0, 108)

    def test_bmd_integer_equivalence(self, small_code):
        bmd = DecoderModel.bmd(small_code)
        for eps in range(16):
            for tau in range(16 - eps):
                assert succeeds(bmd, eps, tau) == (2 * eps + tau <= small_code.d - 1)

    def test_tangent_implies_gs(self, rs255_code):
        gs = DecoderModel.gs(rs255_code)
        for kappa in (0, 41, 85, 111):
            tangent = DecoderModel.tangent(rs255_code, kappa)
            for tau in range(0, 256, 5):
                for eps in range(0, 256 - tau, 3):
                    if tangent.succeeds(eps, tau):
                        assert gs.succeeds(eps, tau)

    def test_precondition(self, rs255_code):
        with pytest.raises(ValueError):
            succeeds(DecoderModel.bmd(rs255_code), 200, 100)
        with pytest.raises(ValueError):
            succeeds(DecoderModel.bmd(rs255_code), -1, 0)

    def test_constant_tradeoff_decoder(self, rs255_code):
        model = DecoderModel.constant(rs255_code, irs_lambda(2))
        assert model.kind is DecoderKind.LAMBDA
        assert model.succeeds(0, 111)
        assert not model.succeeds(0, 112)
        # (d - tau) / 1.5 at tau = 0
        assert model.succeeds(74, 0)
        assert not model.succeeds(75, 0)
        with pytest.raises(ValueError):
            DecoderModel.constant(rs255_code, 2.5)

    def test_radius_array_matches_scalar(self, rs255_code):
        taus = np.arange(0, 256)
        for model in (DecoderModel.bmd(rs255_code), DecoderModel.gs(rs255_code), DecoderModel.tangent(rs255_code, 72)):
            values = radius_array(model, taus)
            assert values.shape == taus.shape
            assert values[10] == pytest.approx(model.radius(10))
        assert radius_array(DecoderModel.gs(rs255_code), np.array([255]))[0] == 0.0


class TestOperatingPoint:
    def test_bmd(self, rs255_code):
        assert DecoderModel.bmd(rs255_code).operating_point(3) == (2.0, 111)

    @pytest.mark.parametrize("z,kappa,lam,delta", TABLE_ROWS)
    def test_gs_uses_optimal_tangent(self, rs255_code, z, kappa, lam, delta):
        got_lam, got_delta = DecoderModel.gs(rs255_code).operating_point(z)
        assert got_lam == pytest.approx(lam, abs=1e-4)
        assert got_delta == delta

    def test_tangent_and_constant(self, rs255_code):
        lam, delta = DecoderModel.tangent(rs255_code, 41).operating_point(7)
        assert delta == 107
        assert DecoderModel.constant(rs255_code, 1.5, delta=100).operating_point(2) == (1.5, 100)

    @pytest.mark.parametrize("z,kappa,lam,delta", TABLE_ROWS)
    def test_gs_judged_by_its_tangent(self, rs255_code, z, kappa, lam, delta):
        judged = DecoderModel.gs(rs255_code).judging_decoder(z)
        assert judged.kind is DecoderKind.TANGENT
        assert judged.kappa == kappa
        assert judged.describe() == f"tangent(kappa={kappa})"
        assert judged.operating_point(z) == DecoderModel.gs(rs255_code).operating_point(z)

    def test_other_kinds_judged_as_given(self, rs255_code):
        for model in (
            DecoderModel.bmd(rs255_code),
            DecoderModel.tangent(rs255_code, 41),
            DecoderModel.constant(rs255_code, irs_lambda(3)),
        ):
            assert model.judging_decoder(4) is model
