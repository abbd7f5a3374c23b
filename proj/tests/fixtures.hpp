#pragma once

#include "biaseval/scores.hpp"

#include "support.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace testing_support {

// Three models whose pairs split evenly into slightly stereo-preferring pairs
// (stereo score a hair above anti) and strongly anti-preferring pairs (anti
// score far above stereo). Every model has an overall indicator of exactly 50,
// so its indicator ranking is decided by sampling noise, while the anti-side
// gap, and with it the spread of the stereo scores, grows from model to model.
inline std::map<std::string, biaseval::ScoreSet> imbalance_fixture(std::size_t n = 600,
                                                                   std::uint64_t seed = 2024)
{
  const std::pair<const char*, double> models[] = {
    { "model_a", 0.4 }, { "model_b", 1.5 }, { "model_c", 4.0 } };
  const char* types[] = { "gender", "race", "religion" };
  std::map<std::string, biaseval::ScoreSet> out;
  Rng rng(seed);
  for (const auto& [name, gap] : models) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng.next() % (i + 1)]);
    std::vector<double> stereo(n), anti(n);
    std::vector<std::string> type(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = order[k];
      anti[i] = rng.normal(-3.0, 0.5);
      if (k < n / 2)
        stereo[i] = anti[i] + rng.uniform(0.001, 0.05);
      else
        stereo[i] = anti[i] - gap * rng.uniform(0.8, 1.2);
      type[i] = types[i % 3];
    }
    out.emplace(name, make_scores(name, stereo, anti, type));
  }
  return out;
}

} // namespace testing_support
