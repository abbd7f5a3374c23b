#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biaseval {

struct BiasDataset;

//! Score function that produced a PLL score.
enum class ScoreMeasure
{
  SSS,
  CPS,
  AUL
};

// lowercase wire names: "sss", "cps", "aul"
std::string to_string(ScoreMeasure measure);
ScoreMeasure score_measure_from_string(std::string_view text);

struct ScoredPair
{
  std::string pair_id;
  std::string bias_type;
  std::string model_id;
  ScoreMeasure measure = ScoreMeasure::AUL;
  double score_stereo = 0.0;
  double score_anti = 0.0;

  bool operator==(const ScoredPair&) const = default;
};

//! Scores of one model under one score function. Entries share model_id and
//! measure, pair ids are unique and both scores are finite.
class ScoreSet
{
public:
  ScoreSet(std::string model_id,
           ScoreMeasure measure,
           std::vector<ScoredPair> entries);

  const std::string& model_id() const { return model_id_; }
  ScoreMeasure measure() const { return measure_; }
  const std::vector<ScoredPair>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<double> stereo_scores() const;
  std::vector<double> anti_scores() const;

  // entries whose pair_id is in `ids` (sorted), preserving entry order
  ScoreSet restricted_to(std::span<const std::string> sorted_ids) const;

  bool operator==(const ScoreSet&) const = default;

private:
  std::string model_id_;
  ScoreMeasure measure_;
  std::vector<ScoredPair> entries_;
};

// Parses a JSON Lines score file. Every line must carry exactly
// {pair_id, bias_type, model_id, measure, score_stereo, score_anti}.
// Throws SchemaError, MixedSetError or DuplicatePairError, naming the line.
ScoreSet load_scores(std::string_view document);

std::string serialize_scores(const ScoreSet& scores);

struct JoinResult
{
  ScoreSet scores;
  std::size_t dropped = 0;
};

// Overwrites bias_type from the dataset and drops entries without a match.
// Throws EmptyJoin when nothing matches.
JoinResult join_with_dataset(const ScoreSet& scores, const BiasDataset& dataset);

// Partition by bias_type; keys ordered.
std::map<std::string, ScoreSet> split_by_type(const ScoreSet& scores);

} // namespace biaseval
