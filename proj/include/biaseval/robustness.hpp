#pragma once

#include "biaseval/measures.hpp"
#include "biaseval/scores.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace biaseval {

struct SamplingPlan
{
  std::vector<double> rates = { 0.3, 0.4, 0.5, 0.6, 0.7, 0.8 };
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  // sample each bias type separately at the same rate
  bool stratified = false;

  // rates strictly increasing in (0, 1], repeats >= 1; throws ConfigError
  void validate() const;
};

//! Mean score gaps inside the stereotype group (pairs where the stereotypical
//! score wins) and the anti-stereotype group (all other pairs).
struct GroupDeltas
{
  double avg_st_in_stereo_group = 0.0;
  double avg_at_in_stereo_group = 0.0;
  double delta_st = 0.0;
  double avg_st_in_anti_group = 0.0;
  double avg_at_in_anti_group = 0.0;
  double delta_at = 0.0;
  double imbalance = 0.0;
  std::size_t stereo_group_size = 0;
  std::size_t anti_group_size = 0;
};

// Throws EmptyGroup when either group is empty.
GroupDeltas group_deltas(const ScoreSet& scores);

// Number of pairs kept at a rate: rate * n rounded half up.
std::size_t sample_size(std::size_t n, double rate);

// Sorted ids of a simple random sample without replacement. The generator is
// seeded from (seed, rate) only, so equal id universes give equal samples.
// `types`, when given, is parallel to `sorted_ids` and turns on stratified
// sampling. Throws TooFewSamples when fewer than two ids would be kept.
std::vector<std::string> sample_pair_ids(const std::vector<std::string>& sorted_ids,
                                         double rate,
                                         std::uint64_t seed,
                                         const std::vector<std::string>* types = nullptr);

ScoreSet subsample(const ScoreSet& scores,
                   double rate,
                   std::uint64_t seed,
                   bool stratified = false);

// Per-repeat seed derived from the plan seed and the repeat index.
std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat);

// Least biased first: Indicator and KLS by |score - 50| ascending, JSS by
// score descending. Ties are broken by model id.
std::vector<std::string> rank_models(const std::map<std::string, double>& scores,
                                     MeasureKind kind);

struct RateResult
{
  double rate = 1.0;
  // model -> kind -> mean over repeats
  std::map<std::string, std::map<MeasureKind, double>> mean_scores;
  std::map<MeasureKind, std::vector<std::string>> ranking;
  std::map<MeasureKind, bool> rank_flag;
  // model -> mean(imbalance(sampled)) - imbalance(full)
  std::map<std::string, double> delta_sp;
};

struct RobustnessReport
{
  ScoreMeasure score_measure = ScoreMeasure::AUL;
  SamplingPlan plan;
  std::set<MeasureKind> kinds;
  std::map<std::string, std::map<MeasureKind, double>> full_scores;
  std::map<MeasureKind, std::vector<std::string>> full_ranking;
  std::map<std::string, GroupDeltas> full_deltas;
  std::vector<RateResult> rates;
};

// All score sets must cover the same pair ids (UniverseMismatch) under the
// same score function (MixedSetError); at least two models are required
// (ConfigError). Every model is evaluated on the same subset per repeat.
RobustnessReport robustness_experiment(const std::map<std::string, ScoreSet>& score_sets,
                                       const SamplingPlan& plan,
                                       const std::set<MeasureKind>& kinds);

} // namespace biaseval
