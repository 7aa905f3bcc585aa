import math

import numpy as np
import pytest
from scipy.stats import binom

from src.models.decoder_models import DecoderModel
from src.simulation.simulator import (
    SymbolDraw,
    class_counts,
    draw_symbols,
    estimate_pe,
    exact_class_probs,
    mtee_decode_word,
    sample_symbol,
    trial_counts,
    wilson_interval,
)
from src.theory.analysis import pe_mtee
from src.theory.thresholds import ThresholdSet, optimal_thresholds

from .conftest import pinned_channel


def sigma_band(p, n, k=4.0):
    return k * math.sqrt(max(p * (1 - p), 1e-12) / n)


def tiny_code_failure_probability(a):
    """Exact P_e of RS(3,1,3), BMD, one trial at T_1 = E0/(3s), E0 n = a."""
    x = math.exp(-2 * a / 3)
    q_l, q_e, q_r = x * x, x - x * x, 1 - x
    return (
        q_e ** 3
        + 6 * q_l * q_e * q_r
        + 3 * q_l * q_e ** 2
        + 3 * q_l ** 2 * q_r
        + 3 * q_l ** 2 * q_e
        + q_l ** 3
    )


class TestGenerativeModel:
    def test_error_probability_and_ranges(self):
        model = pinned_channel(e0=0.05)
        is_error, v = draw_symbols(model, np.random.default_rng(1), 200_000)
        p_err = math.exp(-0.05 * 16)
        assert abs(is_error.mean() - p_err) < sigma_band(p_err, is_error.size)
        assert np.all(v >= 0)
        assert np.all(v[~is_error] <= model.e0 / model.s + 1e-12)

    def test_tails_match_closed_form(self):
        model = pinned_channel(e0=0.05)
        is_error, v = draw_symbols(model, np.random.default_rng(2), 200_000)
        cap = model.e0 / model.s
        for t in np.linspace(0, cap, 10):
            p_tail = math.exp(-(model.e0 + model.s * t) * model.n_inner)
            freq = np.mean(is_error & (v >= t))
            assert abs(freq - p_tail) < sigma_band(p_tail, v.size)
            p_low = math.exp(-(model.e0 - model.s * t) * model.n_inner) - math.exp(-model.e0 * model.n_inner)
            freq_low = np.mean(~is_error & (v <= t))
            assert abs(freq_low - p_low) < sigma_band(p_low, v.size)

    def test_class_frequencies(self):
        model = pinned_channel(e0=0.08)
        ts = optimal_thresholds(1.6, 4, model.e0, model.s)
        is_error, v = draw_symbols(model, np.random.default_rng(3), 300_000)
        counts = class_counts(is_error, v, ts)
        total = v.size
        assert counts["c"] + counts["l"] + sum(counts["bar"]) + sum(counts["under"]) + counts["r"] == total

        exact = exact_class_probs(model, ts)
        pairs = [(counts["c"], exact.p_c), (counts["l"], exact.p_l), (counts["r"], exact.p_r)]
        pairs += list(zip(counts["bar"], exact.p_bar)) + list(zip(counts["under"], exact.p_under))
        for count, p in pairs:
            assert abs(count / total - p) < sigma_band(p, total)

    def test_seeded_draws_repeat(self):
        model = pinned_channel(e0=0.05)
        a = [sample_symbol(model, np.random.default_rng(9)) for _ in range(3)]
        b = [sample_symbol(model, np.random.default_rng(9)) for _ in range(3)]
        assert a == b
        assert isinstance(a[0], SymbolDraw)

    def test_requires_positive_exponent(self):
        model = pinned_channel(e0=0.0)
        with pytest.raises(ValueError):
            draw_symbols(model, np.random.default_rng(0), 10)

    @pytest.mark.slow
    def test_tails_match_closed_form_ten_million_draws(self):
        model = pinned_channel(e0=0.05)
        is_error, v = draw_symbols(model, np.random.default_rng(20), 10_000_000)
        for t in np.linspace(0, model.e0 / model.s, 10):
            p_tail = math.exp(-(model.e0 + model.s * t) * model.n_inner)
            assert abs(np.mean(is_error & (v >= t)) - p_tail) < sigma_band(p_tail, v.size, k=3.0)

    @pytest.mark.slow
    def test_class_frequencies_ten_million_draws(self):
        model = pinned_channel(e0=0.08)
        ts = optimal_thresholds(1.6, 4, model.e0, model.s)
        is_error, v = draw_symbols(model, np.random.default_rng(21), 10_000_000)
        counts = class_counts(is_error, v, ts)
        total = v.size
        exact = exact_class_probs(model, ts)
        pairs = [(counts["c"], exact.p_c), (counts["l"], exact.p_l), (counts["r"], exact.p_r)]
        pairs += list(zip(counts["bar"], exact.p_bar)) + list(zip(counts["under"], exact.p_under))
        assert sum(count for count, _ in pairs) == total
        for count, p in pairs:
            assert abs(count / total - p) < sigma_band(p, total, k=3.0)


class TestWordDecision:
    def test_all_correct_at_cap(self, rs255_code):
        model = pinned_channel(e0=0.1)
        ts = optimal_thresholds(2.0, 3, model.e0, model.s)
        draws = [SymbolDraw(False, model.e0 / model.s)] * 255
        assert mtee_decode_word(draws, ts, DecoderModel.bmd(rs255_code))

    def test_erased_errors_are_harmless(self, rs255_code):
        ts = ThresholdSet(lam=2.0, z=1, thresholds=(0.1,))
        draws = [SymbolDraw(True, 0.05)] * 60 + [SymbolDraw(False, 0.15)] * 195
        assert mtee_decode_word(draws, ts, DecoderModel.bmd(rs255_code))

    def test_unerased_errors_fail(self, rs255_code):
        ts = ThresholdSet(lam=2.0, z=1, thresholds=(0.1,))
        draws = [SymbolDraw(True, 0.2)] * 56 + [SymbolDraw(False, 0.15)] * 199
        assert not mtee_decode_word(draws, ts, DecoderModel.bmd(rs255_code))

    def test_later_trial_rescues(self, rs255_code):
        ts = ThresholdSet(lam=2.0, z=2, thresholds=(0.0, 0.1))
        draws = [SymbolDraw(True, 0.05)] * 60 + [SymbolDraw(False, 0.15)] * 195
        eps, tau = trial_counts(
            np.array([d.is_error for d in draws]), np.array([d.reliability for d in draws]), ts
        )
        assert eps.tolist() == [60, 0] and tau.tolist() == [0, 60]
        assert mtee_decode_word(draws, ts, DecoderModel.bmd(rs255_code))

    def test_length_mismatch(self, rs255_code):
        ts = ThresholdSet(lam=2.0, z=1, thresholds=(0.1,))
        with pytest.raises(ValueError):
            mtee_decode_word([SymbolDraw(False, 1.0)] * 10, ts, DecoderModel.bmd(rs255_code))

    def test_nested_erasing(self):
        model = pinned_channel(e0=0.1)
        ts = optimal_thresholds(1.5, 6, model.e0, model.s)
        is_error, v = draw_symbols(model, np.random.default_rng(5), (50, 255))
        eps, tau = trial_counts(is_error, v, ts)
        assert eps.shape == tau.shape == (50, 6)
        assert np.all(np.diff(tau, axis=1) >= 0)
        assert np.all(np.diff(eps, axis=1) <= 0)


class TestWilson:
    def test_zero_failures(self):
        low, high = wilson_interval(0, 1000)
        assert low == 0.0
        assert 3.7e-3 <= high <= 3.9e-3

    def test_contains_estimate(self):
        for k, n in [(1, 10), (50, 100), (999, 1000), (3, 1_000_000)]:
            low, high = wilson_interval(k, n)
            assert low <= k / n <= high


class TestEstimatePe:
    def test_deterministic_across_chunks_and_workers(self, tiny_code):
        model = pinned_channel(e0=0.225)
        decoder = DecoderModel.bmd(tiny_code)
        ts = optimal_thresholds(2.0, 1, model.e0, model.s)
        reports = [
            estimate_pe(tiny_code, model, decoder, ts, 5000, seed=4, chunks=chunks, workers=workers)
            for chunks, workers in [(1, 1), (8, 1), (8, 4), (3, 2)]
        ]
        assert all(r == reports[0] for r in reports)
        assert reports[0].pe_hat == reports[0].num_failures / 5000
        assert reports[0].ci95[0] <= reports[0].pe_hat <= reports[0].ci95[1]

    def test_different_seeds_differ(self, tiny_code):
        model = pinned_channel(e0=0.225)
        decoder = DecoderModel.bmd(tiny_code)
        ts = optimal_thresholds(2.0, 1, model.e0, model.s)
        a = estimate_pe(tiny_code, model, decoder, ts, 20_000, seed=1)
        b = estimate_pe(tiny_code, model, decoder, ts, 20_000, seed=2)
        assert (a.num_failures, a.trial_successes) != (b.num_failures, b.trial_successes)

    def test_tiny_code_matches_exact_and_prediction(self, tiny_code):
        # E0 * n_inner = 3.6: predicted ln P_e = -4.8, exact P_e about 4.6e-3
        model = pinned_channel(e0=0.225)
        decoder = DecoderModel.bmd(tiny_code)
        ts = optimal_thresholds(2.0, 1, model.e0, model.s)
        words = 200_000
        report = estimate_pe(tiny_code, model, decoder, ts, words, seed=11)
        exact = tiny_code_failure_probability(3.6)
        assert abs(report.pe_hat - exact) < sigma_band(exact, words)

        log_pe = pe_mtee(model.e0, model.n_inner, 2.0, 2, 1).log_pe
        assert log_pe == pytest.approx(-4.8)
        assert abs(math.log(report.pe_hat) - log_pe) <= 0.2 * abs(log_pe)

    def test_binomial_tail_without_erasing(self, rs255_code):
        model = pinned_channel(e0=0.1)
        decoder = DecoderModel.bmd(rs255_code)
        ts = ThresholdSet(lam=2.0, z=1, thresholds=(0.0,))
        words = 20_000
        report = estimate_pe(rs255_code, model, decoder, ts, words, seed=21, chunks=4)
        p_tail = binom.sf(55, 255, math.exp(-0.1 * 16))
        assert abs(report.pe_hat - p_tail) < sigma_band(p_tail, words)

    def test_more_trials_do_not_hurt(self, small_code):
        model = pinned_channel(e0=0.12)
        decoder = DecoderModel.bmd(small_code)
        words = 40_000
        pe = []
        for z in (1, 2, 4):
            ts = optimal_thresholds(2.0, z, model.e0, model.s)
            pe.append(estimate_pe(small_code, model, decoder, ts, words, seed=5).pe_hat)
        for a, b in zip(pe, pe[1:]):
            assert b <= a + sigma_band(a, words)

    def test_gs_decoder(self, rs255_code):
        model = pinned_channel(e0=0.05)
        decoder = DecoderModel.gs(rs255_code)
        lam, _ = decoder.operating_point(2)
        ts = optimal_thresholds(lam, 2, model.e0, model.s)
        report = estimate_pe(rs255_code, model, decoder, ts, 2048, seed=0)
        assert report.z == 2
        assert len(report.trial_successes) == 2
        assert report.decoder == "gs"

    def test_invalid_arguments(self, tiny_code, small_code):
        model = pinned_channel(e0=0.225)
        decoder = DecoderModel.bmd(tiny_code)
        ts = optimal_thresholds(2.0, 1, model.e0, model.s)
        with pytest.raises(ValueError):
            estimate_pe(tiny_code, model, decoder, ts, 0)
        with pytest.raises(ValueError):
            estimate_pe(tiny_code, model, decoder, ts, 10, chunks=0)
        with pytest.raises(ValueError):
            estimate_pe(small_code, model, decoder, ts, 10)

    @pytest.mark.slow
    def test_tiny_code_million_words(self, tiny_code):
        model = pinned_channel(e0=0.225)
        decoder = DecoderModel.bmd(tiny_code)
        ts = optimal_thresholds(2.0, 1, model.e0, model.s)
        report = estimate_pe(tiny_code, model, decoder, ts, 1_000_000, seed=1, chunks=8, workers=4)
        log_pe = pe_mtee(model.e0, model.n_inner, 2.0, 2, 1).log_pe
        assert abs(math.log(report.pe_hat) - log_pe) <= 0.2 * abs(log_pe)
