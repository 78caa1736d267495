import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stacknas.errors import DomainError
from stacknas.metrics import kendall_tau_b
from stacknas.rank_transform import (
    latent_to_rank,
    latent_to_score,
    latent_to_score_exact,
    latent_to_score_paper,
    rank_to_latent,
    round_half_away,
)

# frozen 50-digit mpmath evaluations
LN_1_OVER_500 = -6.2146080984221917426367422425949160547278043315261
LN_250_OVER_251 = -0.0039920212695374529990751178715137546270414184179298
SIGMOID_SCORE_249 = 249.00199600798403193612774451097804391217564870259


class TestRankToLatent:
    def test_midpoint(self):
        assert rank_to_latent(1, 3) == 0.0

    def test_lowest_rank(self):
        assert rank_to_latent(0, 500) == pytest.approx(LN_1_OVER_500, rel=1e-15)

    def test_near_middle(self):
        assert rank_to_latent(249, 500) == pytest.approx(LN_250_OVER_251, rel=1e-12)

    @pytest.mark.parametrize("y,n", [(-1, 10), (10, 10), (0, 1), (1.5, 10)])
    def test_domain(self, y, n):
        with pytest.raises(DomainError):
            rank_to_latent(y, n)

    def test_vector_and_scalar(self):
        z = rank_to_latent(np.arange(5), 5)
        assert z.shape == (5,)
        assert isinstance(rank_to_latent(2, 5), float)

    def test_strictly_increasing(self):
        for n in range(2, 1001):
            assert np.all(np.diff(rank_to_latent(np.arange(n), n)) > 0)

    @pytest.mark.parametrize("n", [2, 3, 10, 499, 500])
    def test_symmetric(self, n):
        z = rank_to_latent(np.arange(n), n)
        np.testing.assert_allclose(z, -z[::-1], atol=1e-12)
        c = z - z.mean()
        skew = (c**3).mean() / (c**2).mean() ** 1.5
        assert abs(skew) < 1e-9


class TestScores:
    def test_paper_at_zero(self):
        assert latent_to_score_paper(0.0, 500) == 249.5

    def test_paper_saturates(self):
        assert latent_to_score_paper(1e3, 500) == pytest.approx(499, abs=1e-9)

    def test_paper_composed(self):
        s = latent_to_score_paper(rank_to_latent(249, 500), 500)
        assert s == pytest.approx(SIGMOID_SCORE_249, rel=1e-13)

    def test_exact_at_zero(self):
        assert latent_to_score_exact(0.0, 500) == 249.5

    def test_variant_dispatch(self):
        assert latent_to_score(1.0, 10, "paper") == latent_to_score_paper(1.0, 10)
        with pytest.raises(ValueError):
            latent_to_score(1.0, 10, "other")

    def test_variants_share_ordering(self, rng):
        z = rng.normal(scale=3, size=300)
        a = latent_to_score_exact(z, 500)
        b = latent_to_score_paper(z, 500)
        assert kendall_tau_b(a, b) == 1.0


class TestLatentToRank:
    @pytest.mark.parametrize("n", [2, 3, 10, 500])
    def test_round_trip(self, n):
        y = np.arange(n)
        np.testing.assert_array_equal(latent_to_rank(rank_to_latent(y, n), n), y)

    def test_zero(self):
        assert latent_to_rank(0.0, 500) == 250

    def test_clamp(self):
        assert latent_to_rank(-1e6, 10) == 0
        assert latent_to_rank(1e6, 10) == 9

    def test_paper_variant_shifts_top(self):
        # the sigmoid variant composed with the logit maps n-1 to n-2
        assert latent_to_rank(rank_to_latent(499, 500), 500, "paper") == 498

    def test_round_half_away(self):
        np.testing.assert_array_equal(round_half_away(np.array([0.5, 1.5, 2.5, -0.5, 2.4])), [1, 2, 3, -1, 2])

    @given(st.integers(2, 1000), st.data())
    def test_round_trip_property(self, n, data):
        y = data.draw(st.integers(0, n - 1))
        assert latent_to_rank(rank_to_latent(y, n), n) == y

    @given(st.lists(st.floats(-50, 50), min_size=2, max_size=50))
    def test_monotone(self, zs):
        z = np.sort(np.array(zs))
        assert np.all(np.diff(latent_to_rank(z, 100)) >= 0)

    def test_natural_log(self):
        assert rank_to_latent(2, 3) == pytest.approx(math.log(3))
