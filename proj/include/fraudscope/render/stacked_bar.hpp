#pragma once

#include "fraudscope/ranking.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace fraudscope::render {

struct BarSegment {
  FactorId factor = FactorId::billing_distance;
  int rank = 1;
  int performance = 0;  // label shown inside the segment
  Rational length{0};   // performance * weight
};

struct Bar {
  std::string client_id;
  Rational total{0};
  std::vector<BarSegment> segments;  // factor rank order
};

struct StackedBarData {
  std::vector<Bar> bars;
};

/// Bars of the `top_k` best-ranked clients; segment lengths sum to R_c.
inline StackedBarData stacked_bar(std::span<const ClientRanking> rankings, std::size_t top_k = 10) {
  std::vector<const ClientRanking*> order;
  for (const auto& r : rankings) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return ranking_before(*a, *b); });
  if (order.size() > top_k) order.resize(top_k);

  StackedBarData out;
  for (const auto* r : order) {
    Bar bar{r->client_id, Rational{0}, {}};
    for (const auto& w : r->weights) {
      auto it = std::find_if(r->factor_scores.begin(), r->factor_scores.end(),
                             [&](const auto& s) { return s.factor == w.factor; });
      int a = it == r->factor_scores.end() ? 0 : it->performance;
      bar.segments.push_back({w.factor, w.rank, a, Rational(a) * w.weight});
      bar.total += bar.segments.back().length;
    }
    out.bars.push_back(std::move(bar));
  }
  return out;
}

}  // namespace fraudscope::render
