#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace fstest;

namespace {

std::vector<Rational> weights(std::vector<int> r) { return rank_weights(r); }

}  // namespace

TEST(RankWeights, SingleFactor) { EXPECT_EQ(weights({1}), std::vector<Rational>{Rational(1)}); }

TEST(RankWeights, FiveIdentity) {
  std::vector<Rational> want{Rational(5, 15), Rational(4, 15), Rational(3, 15), Rational(2, 15), Rational(1, 15)};
  EXPECT_EQ(weights({1, 2, 3, 4, 5}), want);
}

TEST(RankWeights, ThreePermuted) {
  std::vector<Rational> want{Rational(2, 6), Rational(3, 6), Rational(1, 6)};
  EXPECT_EQ(weights({2, 1, 3}), want);
}

TEST(RankWeights, NonPermutationIsConfigError) {
  for (auto bad : std::vector<std::vector<int>>{{}, {1, 1}, {0, 1}, {1, 3}, {2, 3, 4}}) {
    try {
      weights(bad);
      ADD_FAILURE() << "accepted a non-permutation of size " << bad.size();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::config);
    }
  }
}

TEST(RankWeights, RandomPermutationsSumToOneAndFollowRank) {
  Random r(17);
  for (int round = 0; round < 200; ++round) {
    int n = r.between(1, 12);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), r.engine());
    auto w = weights(perm);
    Rational sum{0};
    for (const auto& x : w) sum += x;
    ASSERT_EQ(sum, Rational(1));
    for (int i = 0; i < n; ++i) {
      // Oracle: (N - r + 1) / (N(N+1)/2), reduced by the rational type.
      ASSERT_EQ(w[i], Rational(n - perm[i] + 1, n * (n + 1) / 2));
      for (int j = 0; j < n; ++j)
        if (perm[i] < perm[j]) {
          ASSERT_GT(w[i], w[j]);
        }
    }
  }
}

TEST(FactorWeights, FollowEnabledFactorsInRankOrder) {
  auto cfg = RankingConfig::defaults();
  cfg.factors = {{FactorId::client_status, 2, true}, {FactorId::billing_distance, 1, true},
                 {FactorId::periodicity, 3, false}};
  auto fw = factor_weights(cfg);
  ASSERT_EQ(fw.size(), 2u);
  EXPECT_EQ(fw[0].factor, FactorId::billing_distance);
  EXPECT_EQ(fw[0].weight, Rational(2, 3));
  EXPECT_EQ(fw[1].weight, Rational(1, 3));
}

TEST(FactorWeights, DisabledFactorLeavesAGapInRanks) {
  auto cfg = RankingConfig::defaults();
  cfg.factors[1].enabled = false;  // periodicity, rank 2
  try {
    cfg.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config);
  }
}

TEST(RankingConfigJson, RoundTripAndValidation) {
  auto cfg = ranking_config_from_json(nlohmann::json::parse(R"({
    "factors": [{"id": "billing_distance", "rank": 2}, {"id": "client_status", "rank": 1},
                {"id": "periodicity", "rank": 3, "enabled": false}],
    "billing_distance": {"quiet_threshold": 4},
    "action_rules": [{"action": "DELETE_INVOICE", "severity": "high", "authorized": ["u9"]},
                     {"action": "REFUND", "severity": "medium"}],
    "employee_mode": {"mode": "threshold", "tau": "1/2"}
  })"));
  EXPECT_EQ(cfg.billing.quiet_threshold, 4);
  EXPECT_EQ(cfg.employee_mode.tau, Rational(1, 2));
  EXPECT_EQ(cfg.actions.size(), 2u);
  EXPECT_EQ(to_json(ranking_config_from_json(to_json(cfg))), to_json(cfg));
  EXPECT_EQ(config_digest(cfg), config_digest(ranking_config_from_json(to_json(cfg))));

  for (const char* bad : {R"({"factors": [{"id": "nope", "rank": 1}]})",
                          R"({"factors": [{"id": "periodicity", "rank": 1}, {"id": "periodicity", "rank": 2}]})",
                          R"({"factors": [{"id": "periodicity", "rank": 2}]})",
                          R"({"action_rules": [{"action": "X", "severity": "extreme"}]})",
                          R"({"action_rules": {"X": "high"}})"}) {
    try {
      ranking_config_from_json(nlohmann::json::parse(bad));
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::config) << bad;
    }
  }
}

TEST(RankingConfigJson, BothDistanceFactorsWarn) {
  auto cfg = RankingConfig::defaults();
  cfg.factors.push_back({FactorId::due_distance, 7, true});
  EXPECT_FALSE(cfg.validate().empty());
}
