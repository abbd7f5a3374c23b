#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace biaseval {

enum class Source
{
  StereoSet,
  CrowsPairs
};

std::string to_string(Source source);
Source source_from_string(std::string_view text);

//! One stereotype / anti-stereotype sentence pair.
struct SentencePair
{
  std::string pair_id;
  std::string bias_type;
  std::string stereo_sentence;
  std::string anti_sentence;
  Source source = Source::StereoSet;

  bool operator==(const SentencePair&) const = default;
};

//! A parsed benchmark. Construct through make_dataset() so that the pair
//! invariants and the per-type counts are checked.
struct BiasDataset
{
  Source source = Source::StereoSet;
  std::vector<SentencePair> pairs;
  std::map<std::string, std::size_t> type_counts;

  std::size_t size() const { return pairs.size(); }
  const SentencePair* find(std::string_view pair_id) const;

  bool operator==(const BiasDataset&) const = default;
};

// Validates pairs (distinct sentences, non-empty bias type, unique ids) and
// fills type_counts. Throws MalformedDataset.
BiasDataset make_dataset(Source source, std::vector<SentencePair> pairs);

// StereoSet development-set JSON. Only the intrasentence section is read;
// unrelated candidates are dropped.
BiasDataset parse_stereoset(std::string_view document);

// CrowS-Pairs CSV. Rows flagged "antistereo" are swapped so that
// stereo_sentence always holds the stereotypical member.
BiasDataset parse_crowspairs(std::string_view document);

// Canonical JSON Lines form, one object per pair:
// {pair_id, bias_type, stereo_sentence, anti_sentence, source}
std::string serialize_dataset(const BiasDataset& dataset);
BiasDataset parse_canonical(std::string_view document);

// ---------------------------------------------------------------------------
// Modified / unmodified token split

// Whitespace split; leading and trailing ASCII punctuation is detached, one
// token per character. Interior punctuation ("don't") stays in the word.
std::vector<std::string> tokenize(std::string_view sentence);

struct ModifiedTokens
{
  std::vector<std::string> tokens;
  // index of each modified token in the sentence's token sequence
  std::vector<std::size_t> positions;
};

struct TokenSplit
{
  ModifiedTokens stereo;
  ModifiedTokens anti;
  // longest common subsequence of the two token sequences
  std::vector<std::string> unmodified;
};

// Throws DegeneratePair when the sentences are token-identical and
// MalformedDataset when either sentence is empty.
TokenSplit diff_tokens(const SentencePair& pair);

// Merges the recorded modified tokens back into the shared tokens.
std::vector<std::string> reconstruct(const ModifiedTokens& modified,
                                     const std::vector<std::string>& unmodified);

} // namespace biaseval
