#include "biaseval/dataset.hpp"

#include "biaseval/error.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include <json.hpp>

namespace biaseval {

namespace {

using ordered_json = nlohmann::ordered_json;

bool is_space(char c)
{
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_punct(char c)
{
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// line breaks. Returns one vector of fields per record, with the 1-based line
// number on which each record starts.
struct CsvRecord
{
  std::vector<std::string> fields;
  std::size_t line = 0;
};

std::vector<CsvRecord> read_csv(std::string_view text)
{
  if (text.starts_with("\xEF\xBB\xBF"))
    text.remove_prefix(3);

  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = line;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank)
      records.push_back(std::move(current));
    current = CsvRecord{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n')
          ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          throw MalformedDataset("CSV line " + std::to_string(line) +
                                 ": stray quote inside unquoted field");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes)
    throw MalformedDataset("CSV: unterminated quoted field starting on line " +
                           std::to_string(current.line));
  if (field_started || !current.fields.empty())
    end_record();
  return records;
}

std::string trim(std::string_view s)
{
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos)
    return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

const ordered_json& require(const ordered_json& object,
                            const char* key,
                            const std::string& where)
{
  if (!object.is_object() || !object.contains(key))
    throw MalformedDataset(where + ": missing field '" + key + "'");
  return object.at(key);
}

std::string require_string(const ordered_json& object,
                           const char* key,
                           const std::string& where)
{
  const auto& value = require(object, key, where);
  if (!value.is_string())
    throw MalformedDataset(where + ": field '" + key + "' is not a string");
  return value.get<std::string>();
}

} // namespace

std::string to_string(Source source)
{
  return source == Source::StereoSet ? "stereoset" : "crowspairs";
}

Source source_from_string(std::string_view text)
{
  if (text == "stereoset")
    return Source::StereoSet;
  if (text == "crowspairs")
    return Source::CrowsPairs;
  throw MalformedDataset("unknown dataset source '" + std::string(text) + "'");
}

const SentencePair* BiasDataset::find(std::string_view pair_id) const
{
  auto it = std::find_if(pairs.begin(), pairs.end(), [&](const SentencePair& p) {
    return p.pair_id == pair_id;
  });
  return it == pairs.end() ? nullptr : &*it;
}

BiasDataset make_dataset(Source source, std::vector<SentencePair> pairs)
{
  BiasDataset dataset;
  dataset.source = source;
  std::set<std::string, std::less<>> seen;
  for (const auto& pair : pairs) {
    const std::string where = "pair '" + pair.pair_id + "'";
    if (pair.pair_id.empty())
      throw MalformedDataset("pair with empty pair_id");
    if (!seen.insert(pair.pair_id).second)
      throw MalformedDataset(where + ": duplicate pair_id");
    if (pair.bias_type.empty())
      throw MalformedDataset(where + ": empty bias_type");
    if (pair.stereo_sentence.empty() || pair.anti_sentence.empty())
      throw MalformedDataset(where + ": empty sentence");
    if (pair.stereo_sentence == pair.anti_sentence)
      throw MalformedDataset(where + ": stereotypical and anti-stereotypical "
                                     "sentences are identical");
    if (pair.source != source)
      throw MalformedDataset(where + ": source differs from dataset source");
    ++dataset.type_counts[pair.bias_type];
  }
  dataset.pairs = std::move(pairs);
  return dataset;
}

BiasDataset parse_stereoset(std::string_view document)
{
  ordered_json root;
  try {
    root = ordered_json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedDataset(std::string("StereoSet JSON: ") + e.what());
  }
  const auto& data = require(root, "data", "StereoSet document");
  const auto& entries = require(data, "intrasentence", "StereoSet data");
  if (!entries.is_array())
    throw MalformedDataset("StereoSet: 'intrasentence' is not an array");

  std::vector<SentencePair> pairs;
  pairs.reserve(entries.size());
  std::size_t index = 0;
  for (const auto& entry : entries) {
    std::string where = "intrasentence entry " + std::to_string(index++);
    SentencePair pair;
    pair.source = Source::StereoSet;
    pair.pair_id = require_string(entry, "id", where);
    where += " ('" + pair.pair_id + "')";
    pair.bias_type = require_string(entry, "bias_type", where);

    const auto& sentences = require(entry, "sentences", where);
    if (!sentences.is_array())
      throw MalformedDataset(where + ": 'sentences' is not an array");
    std::optional<std::string> stereo;
    std::optional<std::string> anti;
    for (const auto& candidate : sentences) {
      std::string label = require_string(candidate, "gold_label", where);
      std::string text = require_string(candidate, "sentence", where);
      if (label == "stereotype") {
        if (stereo)
          throw MalformedDataset(where + ": two stereotype sentences");
        stereo = std::move(text);
      } else if (label == "anti-stereotype") {
        if (anti)
          throw MalformedDataset(where + ": two anti-stereotype sentences");
        anti = std::move(text);
      } else if (label != "unrelated") {
        throw MalformedDataset(where + ": unknown label '" + label + "'");
      }
    }
    if (!stereo)
      throw MalformedDataset(where + ": no stereotype sentence");
    if (!anti)
      throw MalformedDataset(where + ": no anti-stereotype sentence");
    pair.stereo_sentence = std::move(*stereo);
    pair.anti_sentence = std::move(*anti);
    pairs.push_back(std::move(pair));
  }
  return make_dataset(Source::StereoSet, std::move(pairs));
}

BiasDataset parse_crowspairs(std::string_view document)
{
  auto records = read_csv(document);
  if (records.empty())
    throw MalformedDataset("CrowS-Pairs CSV: no header row");

  const auto& header = records.front().fields;
  auto column = [&](std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == name)
        return i;
    throw MalformedDataset("CrowS-Pairs CSV: missing column '" +
                           std::string(name) + "'");
  };
  const std::size_t more = column("sent_more");
  const std::size_t less = column("sent_less");
  const std::size_t direction = column("stereo_antistereo");
  const std::size_t type = column("bias_type");
  const std::size_t needed = std::max({ more, less, direction, type }) + 1;

  std::vector<SentencePair> pairs;
  pairs.reserve(records.size() - 1);
  for (std::size_t row = 1; row < records.size(); ++row) {
    const auto& record = records[row];
    const std::string where = "CrowS-Pairs line " + std::to_string(record.line);
    if (record.fields.size() < needed)
      throw MalformedDataset(where + ": expected at least " +
                             std::to_string(needed) + " columns, got " +
                             std::to_string(record.fields.size()));
    SentencePair pair;
    pair.source = Source::CrowsPairs;
    pair.pair_id = std::to_string(row - 1);
    pair.bias_type = trim(record.fields[type]);
    std::string first = trim(record.fields[more]);
    std::string second = trim(record.fields[less]);
    const std::string flag = trim(record.fields[direction]);
    if (pair.bias_type.empty())
      throw MalformedDataset(where + ": empty bias_type");
    if (first.empty() || second.empty())
      throw MalformedDataset(where + ": empty sentence");
    if (flag == "stereo") {
      pair.stereo_sentence = std::move(first);
      pair.anti_sentence = std::move(second);
    } else if (flag == "antistereo") {
      pair.stereo_sentence = std::move(second);
      pair.anti_sentence = std::move(first);
    } else {
      throw MalformedDataset(where + ": unknown direction flag '" + flag + "'");
    }
    pairs.push_back(std::move(pair));
  }
  return make_dataset(Source::CrowsPairs, std::move(pairs));
}

std::string serialize_dataset(const BiasDataset& dataset)
{
  std::string out;
  for (const auto& pair : dataset.pairs) {
    ordered_json line;
    line["pair_id"] = pair.pair_id;
    line["bias_type"] = pair.bias_type;
    line["stereo_sentence"] = pair.stereo_sentence;
    line["anti_sentence"] = pair.anti_sentence;
    line["source"] = to_string(pair.source);
    out += line.dump();
    out += '\n';
  }
  return out;
}

BiasDataset parse_canonical(std::string_view document)
{
  std::vector<SentencePair> pairs;
  std::optional<Source> source;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < document.size()) {
    auto end = document.find('\n', start);
    if (end == std::string_view::npos)
      end = document.size();
    auto line = document.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (trim(line).empty())
      continue;
    const std::string where = "dataset line " + std::to_string(line_no);
    ordered_json object;
    try {
      object = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedDataset(where + ": " + e.what());
    }
    if (!object.is_object() || object.size() != 5)
      throw MalformedDataset(where + ": expected an object with 5 fields");
    SentencePair pair;
    pair.pair_id = require_string(object, "pair_id", where);
    pair.bias_type = require_string(object, "bias_type", where);
    pair.stereo_sentence = require_string(object, "stereo_sentence", where);
    pair.anti_sentence = require_string(object, "anti_sentence", where);
    pair.source = source_from_string(require_string(object, "source", where));
    if (source && *source != pair.source)
      throw MalformedDataset(where + ": mixed dataset sources");
    source = pair.source;
    pairs.push_back(std::move(pair));
  }
  if (!source)
    throw MalformedDataset("canonical dataset is empty");
  return make_dataset(*source, std::move(pairs));
}

std::vector<std::string> tokenize(std::string_view sentence)
{
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i]))
      ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j]))
      ++j;
    if (j == i)
      break;
    std::string_view chunk = sentence.substr(i, j - i);
    i = j;

    std::size_t lead = 0;
    while (lead < chunk.size() && is_punct(chunk[lead]))
      ++lead;
    if (lead == chunk.size()) {
      for (char c : chunk)
        tokens.emplace_back(1, c);
      continue;
    }
    std::size_t trail = chunk.size();
    while (trail > lead && is_punct(chunk[trail - 1]))
      --trail;
    for (std::size_t k = 0; k < lead; ++k)
      tokens.emplace_back(1, chunk[k]);
    tokens.emplace_back(chunk.substr(lead, trail - lead));
    for (std::size_t k = trail; k < chunk.size(); ++k)
      tokens.emplace_back(1, chunk[k]);
  }
  return tokens;
}

TokenSplit diff_tokens(const SentencePair& pair)
{
  const auto a = tokenize(pair.stereo_sentence);
  const auto b = tokenize(pair.anti_sentence);
  if (a.empty() || b.empty())
    throw MalformedDataset("pair '" + pair.pair_id + "': empty sentence");
  if (a == b)
    throw DegeneratePair("pair '" + pair.pair_id +
                         "': sentences are token-identical");

  // suffix LCS lengths
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::size_t> table((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return table[i * (m + 1) + j];
  };
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      at(i, j) = a[i] == b[j] ? at(i + 1, j + 1) + 1
                              : std::max(at(i + 1, j), at(i, j + 1));

  TokenSplit split;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j] && at(i, j) == at(i + 1, j + 1) + 1) {
      split.unmodified.push_back(a[i]);
      ++i;
      ++j;
    } else if (at(i + 1, j) >= at(i, j + 1)) {
      split.stereo.tokens.push_back(a[i]);
      split.stereo.positions.push_back(i);
      ++i;
    } else {
      split.anti.tokens.push_back(b[j]);
      split.anti.positions.push_back(j);
      ++j;
    }
  }
  for (; i < n; ++i) {
    split.stereo.tokens.push_back(a[i]);
    split.stereo.positions.push_back(i);
  }
  for (; j < m; ++j) {
    split.anti.tokens.push_back(b[j]);
    split.anti.positions.push_back(j);
  }
  return split;
}

std::vector<std::string> reconstruct(const ModifiedTokens& modified,
                                     const std::vector<std::string>& unmodified)
{
  std::vector<std::string> out;
  out.reserve(modified.tokens.size() + unmodified.size());
  std::size_t next_modified = 0;
  std::size_t next_shared = 0;
  while (next_modified < modified.tokens.size() ||
         next_shared < unmodified.size()) {
    if (next_modified < modified.tokens.size() &&
        modified.positions[next_modified] == out.size()) {
      out.push_back(modified.tokens[next_modified++]);
    } else if (next_shared < unmodified.size()) {
      out.push_back(unmodified[next_shared++]);
    } else {
      // positions inconsistent with the token counts
      out.push_back(modified.tokens[next_modified++]);
    }
  }
  return out;
}

} // namespace biaseval
