#include "biaseval/scores.hpp"

#include "biaseval/dataset.hpp"
#include "biaseval/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace biaseval {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<const char*, 6> kScoreFields = {
  "pair_id", "bias_type", "model_id", "measure", "score_stereo", "score_anti"
};

double finite_number(const ordered_json& object,
                     const char* key,
                     const std::string& where)
{
  const auto& value = object.at(key);
  if (!value.is_number())
    throw SchemaError(where + ": '" + key + "' is not a number");
  const double x = value.get<double>();
  if (!std::isfinite(x))
    throw SchemaError(where + ": '" + key + "' is not finite");
  return x;
}

std::string string_field(const ordered_json& object,
                         const char* key,
                         const std::string& where)
{
  const auto& value = object.at(key);
  if (!value.is_string())
    throw SchemaError(where + ": '" + key + "' is not a string");
  return value.get<std::string>();
}

} // namespace

std::string to_string(ScoreMeasure measure)
{
  switch (measure) {
    case ScoreMeasure::SSS:
      return "sss";
    case ScoreMeasure::CPS:
      return "cps";
    case ScoreMeasure::AUL:
      return "aul";
  }
  return "aul";
}

ScoreMeasure score_measure_from_string(std::string_view text)
{
  if (text == "sss")
    return ScoreMeasure::SSS;
  if (text == "cps")
    return ScoreMeasure::CPS;
  if (text == "aul")
    return ScoreMeasure::AUL;
  throw SchemaError("unknown score measure '" + std::string(text) +
                    "' (expected sss, cps or aul)");
}

ScoreSet::ScoreSet(std::string model_id,
                   ScoreMeasure measure,
                   std::vector<ScoredPair> entries)
  : model_id_(std::move(model_id))
  , measure_(measure)
  , entries_(std::move(entries))
{
  std::unordered_set<std::string_view> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (e.model_id != model_id_ || e.measure != measure_)
      throw MixedSetError("pair '" + e.pair_id + "' belongs to " + e.model_id +
                          "/" + to_string(e.measure) + ", set is " + model_id_ +
                          "/" + to_string(measure_));
    if (!std::isfinite(e.score_stereo) || !std::isfinite(e.score_anti))
      throw SchemaError("pair '" + e.pair_id + "': non-finite score");
    if (!ids.insert(e.pair_id).second)
      throw DuplicatePairError("duplicate pair_id '" + e.pair_id + "'");
  }
}

std::vector<double> ScoreSet::stereo_scores() const
{
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_)
    out.push_back(e.score_stereo);
  return out;
}

std::vector<double> ScoreSet::anti_scores() const
{
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_)
    out.push_back(e.score_anti);
  return out;
}

ScoreSet ScoreSet::restricted_to(std::span<const std::string> sorted_ids) const
{
  std::vector<ScoredPair> kept;
  kept.reserve(sorted_ids.size());
  for (const auto& e : entries_)
    if (std::binary_search(sorted_ids.begin(), sorted_ids.end(), e.pair_id))
      kept.push_back(e);
  return ScoreSet(model_id_, measure_, std::move(kept));
}

ScoreSet load_scores(std::string_view document)
{
  std::vector<ScoredPair> entries;
  std::unordered_map<std::string, std::size_t> first_line;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < document.size()) {
    auto end = document.find('\n', start);
    if (end == std::string_view::npos)
      end = document.size();
    auto line = document.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos)
      continue;

    const std::string where = "line " + std::to_string(line_no);
    ordered_json object;
    try {
      object = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(where + ": " + e.what());
    }
    if (!object.is_object())
      throw SchemaError(where + ": not a JSON object");
    for (const char* key : kScoreFields)
      if (!object.contains(key))
        throw SchemaError(where + ": missing field '" + key + "'");
    if (object.size() != kScoreFields.size()) {
      for (const auto& item : object.items())
        if (std::find_if(kScoreFields.begin(), kScoreFields.end(), [&](const char* k) {
              return item.key() == k;
            }) == kScoreFields.end())
          throw SchemaError(where + ": unexpected field '" + item.key() + "'");
    }

    ScoredPair pair;
    pair.pair_id = string_field(object, "pair_id", where);
    pair.bias_type = string_field(object, "bias_type", where);
    pair.model_id = string_field(object, "model_id", where);
    try {
      pair.measure = score_measure_from_string(string_field(object, "measure", where));
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
    pair.score_stereo = finite_number(object, "score_stereo", where);
    pair.score_anti = finite_number(object, "score_anti", where);

    if (!entries.empty()) {
      const auto& head = entries.front();
      if (pair.model_id != head.model_id || pair.measure != head.measure)
        throw MixedSetError(where + ": " + pair.model_id + "/" +
                            to_string(pair.measure) + " differs from " +
                            head.model_id + "/" + to_string(head.measure));
    }
    auto [it, inserted] = first_line.emplace(pair.pair_id, line_no);
    if (!inserted)
      throw DuplicatePairError(where + ": pair_id '" + pair.pair_id +
                               "' already seen on line " +
                               std::to_string(it->second));
    entries.push_back(std::move(pair));
  }
  if (entries.empty())
    throw SchemaError("score file has no entries");
  auto model = entries.front().model_id;
  auto measure = entries.front().measure;
  return ScoreSet(std::move(model), measure, std::move(entries));
}

std::string serialize_scores(const ScoreSet& scores)
{
  std::string out;
  for (const auto& e : scores.entries()) {
    ordered_json line;
    line["pair_id"] = e.pair_id;
    line["bias_type"] = e.bias_type;
    line["model_id"] = e.model_id;
    line["measure"] = to_string(e.measure);
    line["score_stereo"] = e.score_stereo;
    line["score_anti"] = e.score_anti;
    out += line.dump();
    out += '\n';
  }
  return out;
}

JoinResult join_with_dataset(const ScoreSet& scores, const BiasDataset& dataset)
{
  std::unordered_map<std::string_view, const SentencePair*> index;
  index.reserve(dataset.pairs.size());
  for (const auto& pair : dataset.pairs)
    index.emplace(pair.pair_id, &pair);

  std::vector<ScoredPair> kept;
  kept.reserve(scores.size());
  std::size_t dropped = 0;
  for (const auto& e : scores.entries()) {
    auto it = index.find(e.pair_id);
    if (it == index.end()) {
      ++dropped;
      continue;
    }
    ScoredPair joined = e;
    joined.bias_type = it->second->bias_type;
    kept.push_back(std::move(joined));
  }
  if (kept.empty())
    throw EmptyJoin("no score entry of " + scores.model_id() + "/" +
                    to_string(scores.measure()) + " matches the dataset");
  return JoinResult{ ScoreSet(scores.model_id(), scores.measure(), std::move(kept)),
                     dropped };
}

std::map<std::string, ScoreSet> split_by_type(const ScoreSet& scores)
{
  std::map<std::string, std::vector<ScoredPair>> groups;
  for (const auto& e : scores.entries())
    groups[e.bias_type].push_back(e);
  std::map<std::string, ScoreSet> out;
  for (auto& [type, entries] : groups)
    out.emplace(type, ScoreSet(scores.model_id(), scores.measure(), std::move(entries)));
  return out;
}

} // namespace biaseval
