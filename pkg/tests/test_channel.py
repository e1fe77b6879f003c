"""Channel model statistics.

Autocovariance checks use a cluster estimator: many independent traces,
a per-trace mean of lag products, and a standard error computed across
traces.  That keeps the 3-sigma bands honest even when q is close to 1
and products within one trace are strongly correlated.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chirpsim import channel


def lag_autocov_cluster(traces: np.ndarray, lag: int) -> tuple[float, float]:
    """(estimate, standard error) of Re E[h[n] conj(h[n+lag])] across traces."""
    products = np.real(traces[:, :-lag] * np.conj(traces[:, lag:])) if lag else \
        np.abs(traces) ** 2
    per_trace = products.mean(axis=1)
    est = float(per_trace.mean())
    se = float(per_trace.std(ddof=1) / math.sqrt(per_trace.shape[0]))
    return est, se


def make_traces(n_traces: int, length: int, q: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.stack(
        [channel.generate_fading(length, q, rng) for _ in range(n_traces)]
    )


class TestNoiseSigma:
    def test_zero_db_reference(self):
        assert channel.noise_sigma(7, 0.0) == pytest.approx(1 / math.sqrt(7))

    def test_snr_definition(self):
        # SNR = 1/(S*sigma^2) inverted: sigma^2 = 1/(S*10^(snr/10)).
        sigma = channel.noise_sigma(12, -15.0)
        assert 1.0 / (12 * sigma**2) == pytest.approx(10 ** (-1.5))

    def test_noiseless_limit(self):
        assert channel.noise_sigma(7, math.inf) == 0.0

    @pytest.mark.parametrize("bad", [math.nan, -math.inf])
    def test_rejects_non_physical_snr(self, bad):
        with pytest.raises(ValueError):
            channel.noise_sigma(7, bad)


class TestAwgn:
    def test_zero_sigma_is_exact_silence(self):
        rng = np.random.default_rng(0)
        w = channel.awgn(1000, 0.0, rng)
        assert np.all(w == 0)

    def test_moments(self):
        rng = np.random.default_rng(42)
        w = channel.awgn(1_000_000, 1.0, rng)
        # 3-sigma band for 1e6 unit-mean exponential variates is +/-0.003.
        assert abs(np.mean(np.abs(w) ** 2) - 1.0) < 0.003
        assert abs(np.var(w.real) - 0.5) < 0.003
        assert abs(np.var(w.imag) - 0.5) < 0.003
        assert abs(np.mean(w.real)) < 0.003
        assert abs(np.mean(w.imag)) < 0.003

    def test_sigma_scales_power(self):
        rng = np.random.default_rng(7)
        w = channel.awgn(200_000, 0.25, rng)
        assert np.mean(np.abs(w) ** 2) == pytest.approx(0.0625, rel=0.02)

    def test_rejects_negative_arguments(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            channel.awgn(-1, 1.0, rng)
        with pytest.raises(ValueError):
            channel.awgn(10, -0.5, rng)

    def test_empty_request(self):
        rng = np.random.default_rng(0)
        assert channel.awgn(0, 1.0, rng).shape == (0,)


class TestGenerateFading:
    def test_block_fading_is_exactly_constant(self):
        rng = np.random.default_rng(5)
        h = channel.generate_fading(5000, 1.0, rng)
        assert np.all(h == h[0])
        assert h[0] != 0

    def test_single_sample_trace(self):
        rng = np.random.default_rng(5)
        h = channel.generate_fading(1, 0.5, rng)
        assert h.shape == (1,)

    def test_iid_limit_has_no_lag_correlation(self):
        rng = np.random.default_rng(11)
        h = channel.generate_fading(1_000_000, 0.0, rng)
        lag1 = np.mean(np.real(h[:-1] * np.conj(h[1:])))
        assert abs(lag1) < 0.004  # 3-sigma for 1e6 products

    def test_lag_1000_autocovariance_near_one(self):
        """q = 0.999 at lag 1000 should sit 3 SE around 0.999^1000."""
        traces = make_traces(1200, 3000, 0.999, seed=303)
        est, se = lag_autocov_cluster(traces, 1000)
        expected = 0.999 ** 1000
        assert expected == pytest.approx(0.36770, abs=1e-4)
        assert abs(est - expected) < 3 * se

    @pytest.mark.parametrize("q", [0.0, 0.9999, 1.0])
    def test_unit_variance(self, q):
        traces = make_traces(800, 2048, q, seed=17)
        est, se = lag_autocov_cluster(traces, 0)
        assert abs(est - 1.0) < 3 * max(se, 1e-6)

    @pytest.mark.parametrize("lag", [1, 10, 100])
    def test_intermediate_lags(self, lag):
        q = 0.9999
        traces = make_traces(900, 2048, q, seed=select_seed(lag))
        est, se = lag_autocov_cluster(traces, lag)
        assert abs(est - q**lag) < 3 * se

    def test_mean_is_zero(self):
        traces = make_traces(500, 2048, 0.9999, seed=23)
        n = traces.size
        mean = traces.mean()
        # Conservative bound: samples within a trace are correlated, so
        # scale the i.i.d. standard error by the correlation length.
        corr_len = (1 + 0.9999) / (1 - 0.9999)
        se = math.sqrt(corr_len / n)
        assert abs(mean.real) < 3 * se and abs(mean.imag) < 3 * se

    def test_traces_from_distinct_trial_streams_are_independent(self):
        from chirpsim.simulator import trial_rng

        a = channel.generate_fading(65536, 0.99, trial_rng(99, 0))
        b = channel.generate_fading(65536, 0.99, trial_rng(99, 1))
        rho = np.mean(a * np.conj(b))  # E|h|^2 = 1, so this is the correlation
        assert abs(rho) < 4 / math.sqrt(65536 / 200)  # ~200-sample corr length

    @pytest.mark.parametrize("bad_q", [-0.1, 1.0001, 2.0])
    def test_invalid_q_rejected(self, bad_q):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            channel.generate_fading(100, bad_q, rng)

    def test_invalid_length_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            channel.generate_fading(0, 0.5, rng)


class TestApplyChannel:
    def test_identity_channel(self):
        rng = np.random.default_rng(3)
        clean = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        gains = np.ones(256, dtype=complex)
        np.testing.assert_array_equal(
            channel.apply_channel(clean, gains, 0.0, rng), clean
        )

    def test_pure_noise_power(self):
        rng = np.random.default_rng(9)
        clean = np.zeros(500_000, dtype=complex)
        gains = np.ones_like(clean)
        r = channel.apply_channel(clean, gains, 0.7, rng)
        assert np.mean(np.abs(r) ** 2) == pytest.approx(0.49, rel=0.01)

    def test_constant_gain_noiseless(self):
        rng = np.random.default_rng(3)
        clean = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        h0 = 0.3 - 1.2j
        gains = np.full(64, h0)
        np.testing.assert_allclose(
            channel.apply_channel(clean, gains, 0.0, rng), h0 * clean, rtol=1e-15
        )

    def test_shape_mismatch_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            channel.apply_channel(
                np.ones(10, dtype=complex), np.ones(9, dtype=complex), 0.1, rng
            )


def select_seed(lag: int) -> int:
    return 1000 + lag


@given(
    q=st.floats(min_value=0.0, max_value=1.0),
    length=st.integers(min_value=1, max_value=512),
)
@settings(max_examples=30, deadline=None)
def test_fading_trace_shape_and_finiteness(q, length):
    rng = np.random.default_rng(99)
    h = channel.generate_fading(length, q, rng)
    assert h.shape == (length,)
    assert np.all(np.isfinite(h.view(np.float64)))
    if q == 1.0:
        assert np.all(h == h[0])
