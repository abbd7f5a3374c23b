#pragma once

#include "biaseval/scores.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace testing_support {

// SplitMix64 stream. tools/shapiro_reference.py reproduces it bit for bit.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next()
  {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // open interval (0, 1)
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, cosine branch only
  double normal()
  {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

private:
  std::uint64_t state_;
};

inline std::vector<double> normal_sample(std::uint64_t seed, std::size_t n,
                                         double mu = 0.0, double sigma = 1.0)
{
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out)
    v = rng.normal(mu, sigma);
  return out;
}

inline std::vector<double> uniform_sample(std::uint64_t seed, std::size_t n)
{
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out)
    v = rng.uniform();
  return out;
}

inline biaseval::ScoreSet make_scores(const std::string& model,
                                      const std::vector<double>& stereo,
                                      const std::vector<double>& anti,
                                      const std::vector<std::string>& types = {},
                                      biaseval::ScoreMeasure measure = biaseval::ScoreMeasure::AUL)
{
  std::vector<biaseval::ScoredPair> entries;
  for (std::size_t i = 0; i < stereo.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "p%05zu", i);
    entries.push_back({ id, types.empty() ? std::string("gender") : types[i], model, measure,
                        stereo[i], anti[i] });
  }
  return biaseval::ScoreSet(model, measure, std::move(entries));
}

} // namespace testing_support
