import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bernoulli_mc import (
    ErrorSpec,
    EstimateReport,
    IntervalEstimate,
    InvalidSpecError,
    SampleSizePlan,
    StreamExhaustedError,
    StreamParseError,
    StreamSource,
    SyntheticSource,
    draw_batch,
    make_error_spec,
    n_hoeffding,
)
from bernoulli_mc.core import IntervalMethod, Method


class TestErrorSpec:
    def test_valid_passes_through(self):
        spec = make_error_spec(0.01, 0.05)
        assert spec == ErrorSpec(0.01, 0.05)
        assert spec.confidence == pytest.approx(0.95)

    def test_zero_epsilon(self):
        with pytest.raises(InvalidSpecError, match="epsilon must be positive"):
            make_error_spec(0.0, 0.05)

    def test_alpha_one(self):
        with pytest.raises(InvalidSpecError, match=r"alpha must lie in \(0,1\)"):
            make_error_spec(0.01, 1.0)

    @pytest.mark.parametrize("eps, alpha", [
        (-0.1, 0.05), (0.1, 0.0), (0.1, -0.2), (math.nan, 0.05), (0.1, math.nan),
        (math.inf, 0.05), ("abc", 0.05),
    ])
    def test_rejects(self, eps, alpha):
        with pytest.raises(ValueError):
            make_error_spec(eps, alpha)

    def test_immutable(self):
        spec = make_error_spec(0.1, 0.05)
        with pytest.raises(AttributeError):
            spec.epsilon = 0.2


class TestSyntheticSource:
    def test_degenerate_zero(self):
        assert draw_batch(SyntheticSource(0.0, 3), 1000) == 0

    def test_degenerate_one(self):
        assert draw_batch(SyntheticSource(1.0, 3), 1000) == 1000

    def test_fair_coin_seed_42(self):
        src = SyntheticSource(0.5, 42)
        k = draw_batch(src, 10**6)
        assert abs(k / 10**6 - 0.5) < 0.005
        assert k == 500207  # regression value for PCG64 / SeedSequence(42)
        assert src.draws_emitted == 10**6

    def test_counter_advances(self):
        src = SyntheticSource(0.3, 1)
        src.draw(10)
        src.draw(5)
        assert src.draws_emitted == 15

    def test_same_seed_same_sequence(self):
        a, b = SyntheticSource(0.37, 99), SyntheticSource(0.37, 99)
        assert [a.draw(100) for _ in range(5)] == [b.draw(100) for _ in range(5)]

    def test_substreams_differ(self):
        a = SyntheticSource(0.5, 99).spawn(0)
        b = SyntheticSource(0.5, 99).spawn(1)
        assert a.stream == (0,) and b.stream == (1,)
        assert a.draw(10_000) != b.draw(10_000)

    def test_one_uniform_per_draw(self):
        # draw i is 1 exactly when the i-th PCG64 double is below p
        seq = np.random.SeedSequence(5, spawn_key=(2,))
        u = np.random.Generator(np.random.PCG64(seq)).random(1000)
        src = SyntheticSource(0.2, 5, stream=(2,))
        assert src.draw(1000) == int(np.sum(u < 0.2))

    @pytest.mark.parametrize("bad", [-1, 2**64])
    def test_seed_range(self, bad):
        with pytest.raises(ValueError):
            SyntheticSource(0.5, bad)

    def test_p_range(self):
        with pytest.raises(ValueError):
            SyntheticSource(1.5, 0)

    def test_count_positive(self):
        with pytest.raises(ValueError):
            SyntheticSource(0.5, 0).draw(0)

    @settings(max_examples=40, deadline=None)
    @given(
        seed=st.integers(0, 2**64 - 1),
        p=st.floats(0, 1),
        parts=st.lists(st.integers(1, 3000), min_size=1, max_size=8),
    )
    def test_partition_invariance(self, seed, p, parts):
        whole = SyntheticSource(p, seed).draw(sum(parts))
        src = SyntheticSource(p, seed)
        assert sum(src.draw(m) for m in parts) == whole

    def test_partition_across_internal_chunks(self):
        m = 2**20 + 12345
        whole = SyntheticSource(0.4, 8).draw(m)
        src = SyntheticSource(0.4, 8)
        assert src.draw(2**19 + 1) + src.draw(m - 2**19 - 1) == whole

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**64 - 1), count=st.integers(1, 5000))
    def test_degenerate_any_seed(self, seed, count):
        assert SyntheticSource(0.0, seed).draw(count) == 0
        assert SyntheticSource(1.0, seed).draw(count) == count

    def test_mean_sanity_across_seeds(self):
        m, p = 10**7, 0.3
        band = 5 * math.sqrt(p * (1 - p) / m)
        hits = sum(abs(SyntheticSource(p, s).draw(m) / m - p) <= band for s in range(100))
        assert hits >= 99


class TestStreamSource:
    def test_whitespace_variants(self):
        src = StreamSource(b"1 0\n1\t1\r\n0  1\n")
        assert src.draw(6) == 4
        assert src.draws_emitted == 6

    def test_partial_draws_keep_position(self):
        src = StreamSource(b"1 1 0 0 1 0")
        assert [src.draw(2), src.draw(3), src.draw(1)] == [2, 1, 0]

    def test_exhaustion_reports_partial_counts(self):
        src = StreamSource(b"1 0 1")
        with pytest.raises(StreamExhaustedError) as info:
            src.draw(5)
        assert (info.value.requested, info.value.available, info.value.successes) == (5, 3, 2)

    @pytest.mark.parametrize("data, offset, token", [
        (b"1 0 2 1", 4, "2"),
        (b"1 01 1", 2, "01"),
        (b"0\n1\nyes\n", 4, "yes"),
        (b"10", 0, "10"),
    ])
    def test_parse_errors_report_offset(self, data, offset, token):
        with pytest.raises(StreamParseError) as info:
            StreamSource(data).draw(4)
        assert info.value.offset == offset
        assert info.value.token == token

    @pytest.mark.parametrize("chunk", [1, 2, 3, 7])
    def test_small_chunks(self, chunk):
        data = b"1 0 1 1\n0 0 1"
        assert StreamSource(io.BytesIO(data), chunk_size=chunk).draw(7) == 4

    @pytest.mark.parametrize("chunk", [1, 2, 3])
    def test_token_split_across_chunks_is_rejected(self, chunk):
        with pytest.raises(StreamParseError) as info:
            StreamSource(io.BytesIO(b"1 0 11 0"), chunk_size=chunk).draw(4)
        assert info.value.offset == 4
        assert info.value.token == "11"

    def test_from_array(self):
        src = StreamSource.from_array([1, 0, 1, 1])
        assert src.draw(4) == 3
        with pytest.raises(ValueError):
            StreamSource.from_array([0, 2])

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(0, 1), min_size=1, max_size=300),
           st.integers(1, 17), st.sampled_from([b" ", b"\n", b"\t", b"\r\n", b"   "]))
    def test_roundtrip_property(self, bits, chunk, sep):
        data = sep.join(str(b).encode() for b in bits) + b"\n"
        src = StreamSource(io.BytesIO(data), chunk_size=chunk)
        assert src.draw(len(bits)) == sum(bits)


class TestValueTypes:
    def test_plan_budget_flag_consistency(self):
        spec = make_error_spec(0.1, 0.05)
        with pytest.raises(ValueError):
            SampleSizePlan(10, Method.HOEFFDING, spec, True, 100)
        with pytest.raises(ValueError):
            SampleSizePlan(0, Method.HOEFFDING, spec, False, 100)

    def test_report_arithmetic(self):
        plan = n_hoeffding(make_error_spec(0.1, 0.05))
        r = EstimateReport(1 / 3, 1, 3, plan, False, 0)
        assert r.p_hat_exact == Fraction(1, 3)
        assert r.p_hat_exact * r.n_used == r.successes
        with pytest.raises(ValueError):
            EstimateReport(0.5, 1, 3, plan, False, 0)
        with pytest.raises(ValueError):
            EstimateReport(4 / 3, 4, 3, plan, False, 0)

    def test_capped_report_requires_budget_draws(self):
        plan = n_hoeffding(make_error_spec(0.01, 0.05), budget=100)
        with pytest.raises(ValueError):
            EstimateReport(0.0, 0, 99, plan, True, 0)
        assert EstimateReport(0.0, 0, 100, plan, True, 0).epsilon == plan.achievable_epsilon

    def test_interval_ordering(self):
        IntervalEstimate(0.1, 0.3, 0.2, IntervalMethod.WALD, 0.05)
        with pytest.raises(ValueError):
            IntervalEstimate(0.3, 0.1, 0.2, IntervalMethod.WALD, 0.05)
        with pytest.raises(ValueError):
            IntervalEstimate(-0.1, 0.3, 0.2, IntervalMethod.WALD, 0.05)
