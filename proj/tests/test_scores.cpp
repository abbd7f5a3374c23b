#include "biaseval/dataset.hpp"
#include "biaseval/error.hpp"
#include "biaseval/scores.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace biaseval;

namespace {

std::string line(const std::string& id, double st, double at,
                 const std::string& model = "bert", const std::string& measure = "aul")
{
  return R"({"pair_id":")" + id + R"(","bias_type":"gender","model_id":")" + model +
         R"(","measure":")" + measure + R"(","score_stereo":)" + std::to_string(st) +
         R"(,"score_anti":)" + std::to_string(at) + "}\n";
}

BiasDataset ten_pairs()
{
  std::vector<SentencePair> pairs;
  for (int i = 0; i < 10; ++i)
    pairs.push_back({ std::to_string(i), i < 6 ? "gender" : "race",
                      "s" + std::to_string(i) + " x", "a" + std::to_string(i) + " x",
                      Source::CrowsPairs });
  return make_dataset(Source::CrowsPairs, pairs);
}

} // namespace

TEST(LoadScores, FourLines)
{
  const auto set = load_scores(line("0", -1, -2) + line("1", -3, -2) + line("2", -1.5, -1.25) +
                               line("3", -4, -4));
  EXPECT_EQ(set.size(), 4u);
  EXPECT_EQ(set.model_id(), "bert");
  EXPECT_EQ(set.measure(), ScoreMeasure::AUL);
  EXPECT_EQ(set.stereo_scores(), (std::vector<double>{ -1, -3, -1.5, -4 }));
  EXPECT_EQ(set.anti_scores(), (std::vector<double>{ -2, -2, -1.25, -4 }));
}

TEST(LoadScores, NonFiniteScoreIsSchemaError)
{
  const std::string bad =
    R"({"pair_id":"0","bias_type":"g","model_id":"m","measure":"aul","score_stereo":NaN,"score_anti":1})";
  EXPECT_THROW(load_scores(line("1", 1, 2) + bad), SchemaError);
  const std::string huge =
    R"({"pair_id":"0","bias_type":"g","model_id":"m","measure":"aul","score_stereo":1e999,"score_anti":1})";
  EXPECT_THROW(load_scores(huge), SchemaError);
}

TEST(LoadScores, SchemaViolations)
{
  // missing field, extra field, wrong type, unknown measure
  EXPECT_THROW(load_scores(R"({"pair_id":"0","bias_type":"g","model_id":"m","measure":"aul","score_stereo":1})"),
               SchemaError);
  EXPECT_THROW(load_scores(R"({"pair_id":"0","bias_type":"g","model_id":"m","measure":"aul","score_stereo":1,"score_anti":2,"x":0})"),
               SchemaError);
  EXPECT_THROW(load_scores(R"({"pair_id":0,"bias_type":"g","model_id":"m","measure":"aul","score_stereo":1,"score_anti":2})"),
               SchemaError);
  EXPECT_THROW(load_scores(line("0", 1, 2, "m", "pll")), SchemaError);
  EXPECT_THROW(load_scores(""), SchemaError);
}

TEST(LoadScores, ErrorNamesTheLine)
{
  try {
    load_scores(line("0", 1, 2) + line("1", 1, 2) + "{oops}\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadScores, DuplicatePairId)
{
  EXPECT_THROW(load_scores(line("0", 1, 2) + line("0", 3, 4)), DuplicatePairError);
}

TEST(LoadScores, MixedModelsOrMeasures)
{
  EXPECT_THROW(load_scores(line("0", 1, 2, "a") + line("1", 1, 2, "b")), MixedSetError);
  EXPECT_THROW(load_scores(line("0", 1, 2, "a", "sss") + line("1", 1, 2, "a", "cps")),
               MixedSetError);
}

TEST(LoadScores, SerializeRoundTripsExactly)
{
  const auto set = load_scores(line("0", -1.0 / 3.0, -2.0 / 7.0) + line("1", -1e-300, 5e300));
  const auto text = serialize_scores(set);
  const auto back = load_scores(text);
  EXPECT_EQ(back, set);
  EXPECT_EQ(serialize_scores(back), text);
}

TEST(Join, DropsUnknownIds)
{
  std::string doc;
  for (int i = 0; i < 9; ++i)
    doc += line(std::to_string(i), -i, -2.0 * i);
  doc += line("unknown", -1, -2);
  const auto joined = join_with_dataset(load_scores(doc), ten_pairs());
  EXPECT_EQ(joined.scores.size(), 9u);
  EXPECT_EQ(joined.dropped, 1u);
  // bias type comes from the dataset
  EXPECT_EQ(joined.scores.entries()[7].bias_type, "race");
}

TEST(Join, DisjointIsEmptyJoin)
{
  EXPECT_THROW(join_with_dataset(load_scores(line("x", 1, 2) + line("y", 1, 2)), ten_pairs()),
               EmptyJoin);
}

TEST(SplitByType, PartitionsInKeyOrder)
{
  std::string doc;
  for (int i = 0; i < 10; ++i)
    doc += line(std::to_string(i), i, 0);
  auto set = join_with_dataset(load_scores(doc), ten_pairs()).scores;
  const auto parts = split_by_type(set.restricted_to(std::vector<std::string>{ "0", "1", "2", "7", "8" }));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts.begin()->first, "gender");
  EXPECT_EQ(parts.at("gender").size(), 3u);
  EXPECT_EQ(parts.at("race").size(), 2u);
  EXPECT_EQ(parts.at("race").model_id(), "bert");
}

TEST(ScoreMeasureNames, RoundTrip)
{
  for (auto m : { ScoreMeasure::SSS, ScoreMeasure::CPS, ScoreMeasure::AUL })
    EXPECT_EQ(score_measure_from_string(to_string(m)), m);
  EXPECT_THROW(score_measure_from_string("AUL "), SchemaError);
}
