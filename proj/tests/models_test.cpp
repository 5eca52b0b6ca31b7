#include "test_util.hpp"

#include "smoothrank/rational.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <map>

using namespace smoothrank;
using smoothrank::testing::R;

namespace {

// Pr(a beats b) by summing the pmf over every ranking.
template <typename Pmf>
double enumerated_pairwise(int m, Alternative a, Alternative b, Pmf pmf) {
  double total = 0;
  for (const auto& w : all_rankings(m)) {
    const auto pos = w.positions();
    if (pos[a] < pos[b]) total += pmf(w);
  }
  return total;
}

// Chi-square goodness of fit of `draws` samples against `pmf` over all m!
// rankings, at significance 0.001.
template <typename Sampler, typename Pmf>
void expect_chi_square_fit(int m, int draws, Sampler sample, Pmf pmf) {
  std::map<std::uint64_t, int> counts;
  for (int k = 0; k < draws; ++k) ++counts[sample().code()];
  double stat = 0;
  int cells = 0;
  for (const auto& w : all_rankings(m)) {
    const double expected = draws * pmf(w);
    const double observed = counts[w.code()];
    stat += (observed - expected) * (observed - expected) / expected;
    ++cells;
  }
  const boost::math::chi_squared dist(cells - 1);
  EXPECT_LT(stat, boost::math::quantile(boost::math::complement(dist, 0.001))) << "m=" << m;
}

TEST(MallowsZ, Examples) {
  EXPECT_DOUBLE_EQ(mallows_z(1.0, 3), 6.0);
  EXPECT_NEAR(mallows_z(0.5, 3), 2.625, 1e-12);
  EXPECT_NEAR(mallows_z(0.4, 3), 2.184, 1e-12);
  EXPECT_NEAR(mallows_z(0.8, 3), 4.392, 1e-12);
  EXPECT_DOUBLE_EQ(mallows_z(1.0, 6), 720.0);
  EXPECT_THROW(mallows_z(0.0, 3), std::domain_error);
  EXPECT_THROW(mallows_z(1.5, 3), std::domain_error);
}

TEST(MallowsZ, MatchesClosedProductForm) {
  for (double phi : {0.1, 0.37, 0.9})
    for (int m = 1; m <= 7; ++m) {
      double z = 1;
      for (int i = 2; i <= m; ++i) z *= (1 - std::pow(phi, i)) / (1 - phi);
      EXPECT_NEAR(mallows_z(phi, m), z, 1e-10 * z);
    }
}

TEST(MallowsPmf, Examples) {
  const MallowsParam<double> p(R({1, 2, 3}), 0.5);
  EXPECT_NEAR(mallows_pmf(p, R({1, 2, 3})), 1 / 2.625, 1e-12);
  const MallowsParam<double> uniform(R({2, 1, 3, 4}), 1.0);
  for (const auto& w : all_rankings(4)) EXPECT_NEAR(mallows_pmf(uniform, w), 1.0 / 24, 1e-15);
  EXPECT_THROW(mallows_pmf(p, R({1, 2})), std::invalid_argument);
}

TEST(MallowsPmf, TwoVoterProfileProbability) {
  const auto central = R({1, 2, 3});
  const double first = mallows_pmf(MallowsParam<double>(central, 0.4), R({2, 1, 3}));
  const double second = mallows_pmf(MallowsParam<double>(central, 0.8), R({2, 3, 1}));
  EXPECT_NEAR(first, 0.4 / 2.184, 1e-12);
  EXPECT_NEAR(second, 0.64 / 4.392, 1e-12);
  EXPECT_NEAR(first * second, 0.026688, 1e-6);
}

TEST(MallowsPmf, NormalisesForSmallM) {
  Rng rng(1);
  for (int m = 1; m <= 6; ++m)
    for (double phi : {0.05, 0.5, 0.93, 1.0}) {
      const MallowsParam<double> p(smoothrank::testing::random_ranking(m, rng), phi);
      double total = 0;
      for (const auto& w : all_rankings(m)) total += mallows_pmf(p, w);
      EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(MallowsPmf, ExactNormalisation) {
  const MallowsParam<Rational> p(R({3, 1, 2, 4}), Rational(2) / 7);
  Rational total = 0;
  for (const auto& w : all_rankings(4)) total += mallows_pmf(p, w);
  EXPECT_EQ(total, Rational(1));
}

TEST(MallowsPairwise, Examples) {
  EXPECT_NEAR(mallows_pairwise(0.5, 1), 2.0 / 3, 1e-12);
  EXPECT_NEAR(mallows_pairwise(0.5, 2), 2 / 2.625, 1e-12);
  for (int k = 1; k <= 8; ++k) EXPECT_DOUBLE_EQ(mallows_pairwise(1.0, k), 0.5);
  EXPECT_EQ(mallows_pairwise(Rational(1), 4), Rational(1) / 2);
  EXPECT_THROW(mallows_pairwise(0.5, 0), std::domain_error);
}

TEST(MallowsPairwise, MatchesLiteralFormulaAwayFromOne) {
  for (double phi : {0.2, 0.5, 0.8})
    for (int k = 1; k <= 6; ++k) {
      const double literal = (k + 1) / (1 - std::pow(phi, k + 1)) - k / (1 - std::pow(phi, k));
      EXPECT_NEAR(mallows_pairwise(phi, k), literal, 1e-10);
    }
}

TEST(MallowsPairwise, MatchesEnumeration) {
  Rng rng(7);
  for (int m = 2; m <= 5; ++m)
    for (double phi : {0.1, 0.45, 0.9, 1.0}) {
      const MallowsParam<double> p(smoothrank::testing::random_ranking(m, rng), phi);
      const auto g = expected_wmg(p);
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          const Alternative a = p.central[i], b = p.central[j];
          const double enumerated = enumerated_pairwise(m, a, b, [&](const Ranking& w) { return mallows_pmf(p, w); });
          EXPECT_NEAR(mallows_pairwise(phi, j - i), enumerated, 1e-10);
          EXPECT_NEAR(g(a, b), 2 * enumerated - 1, 1e-10);
        }
    }
}

TEST(MallowsExpectedWmg, Examples) {
  const auto g = expected_wmg(MallowsParam<double>(R({1, 2, 3}), 0.5));
  EXPECT_NEAR(g(0, 1), 1.0 / 3, 1e-12);
  EXPECT_NEAR(g(0, 2), 2 * (2 / 2.625) - 1, 1e-12);
  EXPECT_NEAR(g(0, 2), 0.52381, 1e-5);
  EXPECT_TRUE(expected_wmg(MallowsParam<double>(R({2, 3, 1}), 1.0)).is_zero());
}

TEST(MallowsSample, NearZeroDispersionGivesCentral) {
  Rng rng(9);
  const MallowsParam<double> p(R({3, 1, 4, 2}), 1e-12);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(mallows_sample(p, rng), p.central);
}

TEST(MallowsSample, ChiSquareAgainstPmf) {
  Rng rng(2024);
  for (int m = 2; m <= 4; ++m)
    for (double phi : {0.3, 0.5, 1.0}) {
      const MallowsParam<double> p(smoothrank::testing::random_ranking(m, rng), phi);
      expect_chi_square_fit(
          m, 100000, [&] { return mallows_sample(p, rng); }, [&](const Ranking& w) { return mallows_pmf(p, w); });
    }
}

TEST(MallowsSample, FrequenciesWithinFourSigma) {
  Rng rng(31);
  const MallowsParam<double> p(R({1, 2, 3}), 0.5);
  const int draws = 100000;
  std::map<std::uint64_t, int> counts;
  for (int k = 0; k < draws; ++k) ++counts[mallows_sample(p, rng).code()];
  for (const auto& w : all_rankings(3)) {
    const double q = mallows_pmf(p, w);
    EXPECT_LE(std::abs(counts[w.code()] - draws * q), 4 * std::sqrt(draws * q * (1 - q))) << w.label();
  }
}

TEST(ExpectedKtBound, Examples) {
  EXPECT_NEAR(expected_kt_bound(0.5, 3), 4.5, 1e-12);
  EXPECT_NEAR(expected_kt_bound(1.0, 3), 9.0, 1e-12);
  EXPECT_LT(expected_kt_bound(1e-9, 5), 1e-6);
  EXPECT_NEAR(mallows_expected_kt(0.5, 3), 2.375 / 2.625, 1e-12);
  EXPECT_NEAR(mallows_expected_kt(0.5, 3), 0.90476, 1e-5);
}

TEST(ExpectedKtBound, HoldsByEnumeration) {
  for (int m = 3; m <= 6; ++m)
    for (int t = 1; t <= 9; ++t) {
      const double phi = t / 10.0;
      const MallowsParam<double> p(Ranking::identity(m), phi);
      double expectation = 0;
      for (const auto& w : all_rankings(m)) expectation += mallows_pmf(p, w) * kt_distance(p.central, w);
      EXPECT_NEAR(mallows_expected_kt(phi, m), expectation, 1e-10);
      EXPECT_LE(expectation, expected_kt_bound(p)) << "m=" << m << " phi=" << phi;
    }
}

TEST(PhiStar, Examples) {
  EXPECT_NEAR(phi_star({0.5}, 3), 4.5, 1e-12);
  EXPECT_NEAR(phi_star({0.5, 1.0}, 3), 6.75, 1e-12);
  EXPECT_NEAR(phi_star({1.0, 1.0, 1.0}, 4), 16.0, 1e-12);
  EXPECT_THROW(phi_star({}, 3), std::invalid_argument);
}

TEST(PlackettLuce, PmfExamples) {
  const PlackettLuceParam<double> two({0.75, 0.25});
  EXPECT_NEAR(pl_pmf(two, R({1, 2})), 0.75, 1e-15);
  const PlackettLuceParam<double> uniform(std::vector<double>(4, 0.25));
  for (const auto& w : all_rankings(4)) EXPECT_NEAR(pl_pmf(uniform, w), 1.0 / 24, 1e-15);
  EXPECT_THROW(PlackettLuceParam<double>({0.5, 0.6}), std::domain_error);
  EXPECT_THROW(PlackettLuceParam<double>({1.0, 0.0}), std::domain_error);
}

TEST(PlackettLuce, NormalisesAndMatchesPairwiseRatio) {
  Rng rng(17);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int m = 2; m <= 6; ++m) {
    std::vector<double> raw(m);
    double total = 0;
    for (auto& t : raw) total += (t = u(rng));
    for (auto& t : raw) t /= total;
    const PlackettLuceParam<double> p(raw);
    double sum = 0;
    for (const auto& w : all_rankings(m)) sum += pl_pmf(p, w);
    EXPECT_NEAR(sum, 1.0, 1e-12);
    if (m > 5) continue;
    const auto g = expected_wmg(p);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a == b) continue;
        const double enumerated = enumerated_pairwise(m, a, b, [&](const Ranking& w) { return pl_pmf(p, w); });
        EXPECT_NEAR(p.theta[a] / (p.theta[a] + p.theta[b]), enumerated, 1e-10);
        EXPECT_NEAR(g(a, b), 2 * enumerated - 1, 1e-10);
      }
  }
}

TEST(PlackettLuce, WitnessMargins) {
  const auto p = pl_witness(3, Rational(1), Rational(2));
  const auto g = expected_wmg(p);
  EXPECT_EQ(g(0, 1), Rational(1) / 7);
  EXPECT_EQ(g(1, 2), Rational(1) / 5);
  EXPECT_EQ(g(0, 2), Rational(1) / 3);
}

TEST(PlackettLuce, SamplerChiSquare) {
  Rng rng(55);
  for (int m = 2; m <= 4; ++m) {
    const auto p = pl_witness(m, 0.1, 0.2);
    expect_chi_square_fit(
        m, 100000, [&] { return pl_sample(p, rng); }, [&](const Ranking& w) { return pl_pmf(p, w); });
  }
  const PlackettLuceParam<double> sharp({1 - 2e-9, 1e-9, 1e-9});
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(pl_sample(sharp, rng)[0], 0);
}

TEST(Neutrality, PmfInvariantUnderRelabelling) {
  Rng rng(77);
  for (int k = 0; k < 30; ++k) {
    const int m = 3 + k % 4;
    const auto sigma = smoothrank::testing::random_permutation(m, rng);
    const auto w = smoothrank::testing::random_ranking(m, rng);
    const MallowsParam<double> mp(smoothrank::testing::random_ranking(m, rng), 0.3 + 0.02 * k);
    EXPECT_NEAR(mallows_pmf(mp, w), mallows_pmf(permute(sigma, mp), permute(sigma, w)), 1e-14);
    const auto pl = pl_witness(m, 0.1, 0.3);
    EXPECT_NEAR(pl_pmf(pl, w), pl_pmf(permute(sigma, pl), permute(sigma, w)), 1e-14);
    EXPECT_TRUE(nearly_equal(0.0, (permute(sigma, expected_wmg(mp)) - expected_wmg(permute(sigma, mp))).max_abs()));
  }
}

TEST(ParameterProfile, WeightsAndTypes) {
  ParameterProfile<MallowsParam<double>> p(3);
  p.add(MallowsParam<double>(R({1, 2, 3}), 0.5), 2);
  p.add(MallowsParam<double>(R({1, 2, 3}), 0.5), 1);
  p.add(MallowsParam<double>(R({2, 1, 3}), 0.5), 4);
  EXPECT_DOUBLE_EQ(p.total_weight(), 7);
  EXPECT_EQ(p.type_count(), 2u);
  EXPECT_THROW(p.add(MallowsParam<double>(R({1, 2}), 0.5)), std::invalid_argument);
  EXPECT_THROW(p.add(MallowsParam<double>(R({1, 2, 3}), 0.5), -1), std::invalid_argument);
  const auto g = expected_wmg(p);
  const auto direct = 3.0 * expected_wmg(MallowsParam<double>(R({1, 2, 3}), 0.5)) +
                      4.0 * expected_wmg(MallowsParam<double>(R({2, 1, 3}), 0.5));
  EXPECT_LT((g - direct).max_abs(), 1e-12);
}

TEST(SampleProfile, CountsAndDeterminism) {
  ParameterProfile<MallowsParam<double>> p(4);
  p.add(MallowsParam<double>(R({1, 2, 3, 4}), 0.5), 3);
  p.add(MallowsParam<double>(R({4, 3, 2, 1}), 0.2), 2);
  Rng a(5), b(5);
  const auto pa = sample_profile(p, a);
  const auto pb = sample_profile(p, b);
  EXPECT_EQ(pa.total_weight(), 5);
  ASSERT_EQ(pa.votes().size(), pb.votes().size());
  for (std::size_t k = 0; k < pa.votes().size(); ++k) EXPECT_EQ(pa.votes()[k].ranking, pb.votes()[k].ranking);
  p.add(MallowsParam<double>(R({1, 2, 3, 4}), 0.5), 0.5);
  EXPECT_THROW(sample_profile(p, a), std::invalid_argument);
}

TEST(SampleProfile, MeanWmgMatchesExpectation) {
  ParameterProfile<MallowsParam<double>> p(3);
  p.add(MallowsParam<double>(R({1, 2, 3}), 0.5), 1);
  p.add(MallowsParam<double>(R({3, 1, 2}), 0.8), 1);
  const auto want = expected_wmg(p);
  const int trials = 10000;
  Rng rng(12);
  Wmg sum(3);
  for (int k = 0; k < trials; ++k) sum += wmg(sample_profile(p, rng));
  // Each vote contributes a +-1 margin, so the per-edge variance is at most n = 2.
  const double sigma = std::sqrt(2.0 / trials);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) EXPECT_NEAR(sum(a, b) / trials, want(a, b), 4 * sigma);
}

TEST(SampleProfile, CompactMatchesWeights) {
  ParameterProfile<PlackettLuceParam<double>> p(3);
  p.add(pl_witness(3, 0.1, 0.2), 5000);
  Rng rng(3);
  const auto compact = sample_profile_compact(p, rng);
  EXPECT_DOUBLE_EQ(compact.total_weight(), 5000);
  EXPECT_LE(compact.votes().size(), 6u);
}

TEST(MakeStream, StreamsAreDistinctAndReproducible) {
  auto a = make_stream(1, 0), b = make_stream(1, 1), c = make_stream(1, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_EQ(x, c());
}

}  // namespace
