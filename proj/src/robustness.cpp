#include "biaseval/robustness.hpp"

#include "biaseval/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace biaseval {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, bound) by rejection; identical on every platform,
// unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold)
      return r % bound;
  }
}

void partial_shuffle(std::vector<std::size_t>& items, std::size_t keep, std::mt19937_64& rng)
{
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, items.size() - i));
    std::swap(items[i], items[j]);
  }
}

// mean = first + sum(v - first) / n; exact when all values are equal
double stable_mean(const std::vector<double>& values)
{
  const double first = values.front();
  double sum = 0.0;
  for (double v : values)
    sum += v - first;
  return first + sum / static_cast<double>(values.size());
}

std::vector<std::string> sorted_ids(const ScoreSet& scores)
{
  std::vector<std::string> ids;
  ids.reserve(scores.size());
  for (const auto& e : scores.entries())
    ids.push_back(e.pair_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> types_for(const ScoreSet& scores,
                                   const std::vector<std::string>& ids)
{
  std::map<std::string, std::string, std::less<>> by_id;
  for (const auto& e : scores.entries())
    by_id.emplace(e.pair_id, e.bias_type);
  std::vector<std::string> types;
  types.reserve(ids.size());
  for (const auto& id : ids)
    types.push_back(by_id.at(id));
  return types;
}

std::map<MeasureKind, double> evaluate(const ScoreSet& scores,
                                       const std::set<MeasureKind>& kinds)
{
  std::map<MeasureKind, double> out;
  if (kinds.contains(MeasureKind::Indicator))
    out[MeasureKind::Indicator] = indicator_bias_score(scores).value;
  if (kinds.contains(MeasureKind::KLS) || kinds.contains(MeasureKind::JSS)) {
    const auto divergence = divergence_measures(scores);
    if (kinds.contains(MeasureKind::KLS))
      out[MeasureKind::KLS] = divergence.kls.value;
    if (kinds.contains(MeasureKind::JSS))
      out[MeasureKind::JSS] = divergence.jss.value;
  }
  return out;
}

std::map<MeasureKind, std::vector<std::string>> rank_all(
  const std::map<std::string, std::map<MeasureKind, double>>& scores,
  const std::set<MeasureKind>& kinds)
{
  std::map<MeasureKind, std::vector<std::string>> out;
  for (auto kind : kinds) {
    std::map<std::string, double> column;
    for (const auto& [model, values] : scores)
      column[model] = values.at(kind);
    out[kind] = rank_models(column, kind);
  }
  return out;
}

} // namespace

void SamplingPlan::validate() const
{
  if (rates.empty())
    throw ConfigError("sampling plan has no rates");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0 && rates[i] <= 1.0))
      throw ConfigError("sampling rate " + std::to_string(rates[i]) +
                        " is outside (0, 1]");
    if (i > 0 && !(rates[i] > rates[i - 1]))
      throw ConfigError("sampling rates must be strictly increasing");
  }
  if (repeats < 1)
    throw ConfigError("sampling plan needs at least one repeat");
}

GroupDeltas group_deltas(const ScoreSet& scores)
{
  double st_in_stereo = 0.0;
  double at_in_stereo = 0.0;
  double st_in_anti = 0.0;
  double at_in_anti = 0.0;
  GroupDeltas out;
  for (const auto& e : scores.entries()) {
    if (e.score_stereo > e.score_anti) {
      st_in_stereo += e.score_stereo;
      at_in_stereo += e.score_anti;
      ++out.stereo_group_size;
    } else {
      st_in_anti += e.score_stereo;
      at_in_anti += e.score_anti;
      ++out.anti_group_size;
    }
  }
  if (out.stereo_group_size == 0 || out.anti_group_size == 0)
    throw EmptyGroup("score set of " + scores.model_id() + " has an empty " +
                     (out.stereo_group_size == 0 ? "stereotype" : "anti-stereotype") +
                     " sample group");
  const auto ns = static_cast<double>(out.stereo_group_size);
  const auto na = static_cast<double>(out.anti_group_size);
  out.avg_st_in_stereo_group = st_in_stereo / ns;
  out.avg_at_in_stereo_group = at_in_stereo / ns;
  out.avg_st_in_anti_group = st_in_anti / na;
  out.avg_at_in_anti_group = at_in_anti / na;
  out.delta_st = std::abs(out.avg_st_in_stereo_group - out.avg_at_in_stereo_group);
  out.delta_at = std::abs(out.avg_st_in_anti_group - out.avg_at_in_anti_group);
  out.imbalance = out.delta_st - out.delta_at;
  return out;
}

std::size_t sample_size(std::size_t n, double rate)
{
  return static_cast<std::size_t>(std::floor(rate * static_cast<double>(n) + 0.5));
}

std::vector<std::string> sample_pair_ids(const std::vector<std::string>& sorted_ids,
                                         double rate,
                                         std::uint64_t seed,
                                         const std::vector<std::string>* types)
{
  if (!(rate > 0.0 && rate <= 1.0))
    throw ConfigError("sampling rate " + std::to_string(rate) + " is outside (0, 1]");
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(std::bit_cast<std::uint64_t>(rate))));

  // strata in key order; a single stratum for plain sampling
  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < sorted_ids.size(); ++i)
    strata[types ? (*types)[i] : std::string()].push_back(i);

  std::vector<std::string> chosen;
  for (auto& [type, members] : strata) {
    const std::size_t keep = sample_size(members.size(), rate);
    partial_shuffle(members, keep, rng);
    for (std::size_t i = 0; i < keep; ++i)
      chosen.push_back(sorted_ids[members[i]]);
  }
  if (chosen.size() < 2)
    throw TooFewSamples("sampling " + std::to_string(sorted_ids.size()) +
                        " pairs at rate " + std::to_string(rate) + " keeps " +
                        std::to_string(chosen.size()) + " (need at least 2)");
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

ScoreSet subsample(const ScoreSet& scores, double rate, std::uint64_t seed, bool stratified)
{
  const auto ids = sorted_ids(scores);
  std::vector<std::string> types;
  if (stratified)
    types = types_for(scores, ids);
  const auto chosen = sample_pair_ids(ids, rate, seed, stratified ? &types : nullptr);
  return scores.restricted_to(chosen);
}

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat)
{
  return splitmix64(splitmix64(seed) + static_cast<std::uint64_t>(repeat));
}

std::vector<std::string> rank_models(const std::map<std::string, double>& scores,
                                     MeasureKind kind)
{
  auto key = [kind](double value) {
    return kind == MeasureKind::JSS ? -value : std::abs(value - 50.0);
  };
  std::vector<std::pair<double, std::string>> keyed;
  for (const auto& [model, value] : scores)
    keyed.emplace_back(key(value), model);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  for (auto& [k, model] : keyed)
    out.push_back(std::move(model));
  return out;
}

RobustnessReport robustness_experiment(const std::map<std::string, ScoreSet>& score_sets,
                                       const SamplingPlan& plan,
                                       const std::set<MeasureKind>& kinds)
{
  plan.validate();
  if (score_sets.size() < 2)
    throw ConfigError("a robustness experiment needs at least two models, got " +
                      std::to_string(score_sets.size()));
  if (kinds.empty())
    throw ConfigError("a robustness experiment needs at least one measure kind");

  const auto& reference = score_sets.begin()->second;
  const auto universe = sorted_ids(reference);
  for (const auto& [model, scores] : score_sets) {
    if (scores.measure() != reference.measure())
      throw MixedSetError("model " + model + " is scored with " +
                          to_string(scores.measure()) + ", expected " +
                          to_string(reference.measure()));
    if (sorted_ids(scores) != universe)
      throw UniverseMismatch("model " + model + " covers different pair ids than " +
                             reference.model_id());
  }
  std::vector<std::string> types;
  if (plan.stratified)
    types = types_for(reference, universe);

  RobustnessReport report;
  report.score_measure = reference.measure();
  report.plan = plan;
  report.kinds = kinds;
  for (const auto& [model, scores] : score_sets) {
    report.full_scores[model] = evaluate(scores, kinds);
    report.full_deltas[model] = group_deltas(scores);
  }
  report.full_ranking = rank_all(report.full_scores, kinds);

  for (double rate : plan.rates) {
    // model -> kind -> per-repeat values
    std::map<std::string, std::map<MeasureKind, std::vector<double>>> samples;
    std::map<std::string, std::vector<double>> imbalance;
    for (std::size_t r = 0; r < plan.repeats; ++r) {
      const auto ids = sample_pair_ids(universe, rate, repeat_seed(plan.seed, r),
                                       plan.stratified ? &types : nullptr);
      for (const auto& [model, scores] : score_sets) {
        const auto subset = scores.restricted_to(ids);
        for (const auto& [kind, value] : evaluate(subset, kinds))
          samples[model][kind].push_back(value);
        imbalance[model].push_back(group_deltas(subset).imbalance -
                                   report.full_deltas.at(model).imbalance);
      }
    }
    RateResult result;
    result.rate = rate;
    for (const auto& [model, by_kind] : samples) {
      for (const auto& [kind, values] : by_kind)
        result.mean_scores[model][kind] = stable_mean(values);
      result.delta_sp[model] = stable_mean(imbalance.at(model));
    }
    result.ranking = rank_all(result.mean_scores, kinds);
    for (auto kind : kinds)
      result.rank_flag[kind] = result.ranking.at(kind) != report.full_ranking.at(kind);
    report.rates.push_back(std::move(result));
  }
  return report;
}

} // namespace biaseval
