#pragma once

#include "biaseval/dataset.hpp"
#include "biaseval/measures.hpp"
#include "biaseval/robustness.hpp"
#include "biaseval/scores.hpp"
#include "biaseval/stats.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace biaseval {

enum class DatasetKind
{
  StereoSet,
  CrowsPairs,
  // JSON Lines written by `validate --out`
  Canonical
};

DatasetKind dataset_kind_from_string(std::string_view text);
std::string to_string(DatasetKind kind);

enum class ReportFormat
{
  Json,
  Csv,
  Markdown
};

ReportFormat report_format_from_string(std::string_view text);

struct RunConfig
{
  std::filesystem::path dataset_path;
  DatasetKind dataset_kind = DatasetKind::CrowsPairs;
  std::vector<std::filesystem::path> score_paths;
  ScoreMeasure divergence_source = ScoreMeasure::AUL;
  SamplingPlan plan;
  std::filesystem::path output_dir = ".";
  std::set<ReportFormat> formats = { ReportFormat::Json, ReportFormat::Csv,
                                     ReportFormat::Markdown };
  std::size_t kde_grid = 512;
  std::size_t mi_neighbors = 3;

  // Throws ConfigError: no score path, missing dataset, unusable output dir.
  void validate() const;
};

//! Dataset plus every score file, joined on pair id and grouped by model.
struct LoadedInputs
{
  BiasDataset dataset;
  // model -> score function -> joined scores
  std::map<std::string, std::map<ScoreMeasure, ScoreSet>> scores;
  std::map<std::string, std::map<ScoreMeasure, std::size_t>> dropped;
};

BiasDataset load_dataset(const std::filesystem::path& path, DatasetKind kind);
LoadedInputs load_inputs(const RunConfig& config);

//! Square matrix of a pairwise statistic between named measure vectors.
//! Entries are empty where the statistic is undefined (e.g. zero variance).
struct MeasureMatrix
{
  std::vector<std::string> labels;
  std::vector<std::vector<std::optional<double>>> values;
  std::size_t samples = 0;
};

struct ModelReport
{
  std::string model_id;
  std::map<ScoreMeasure, double> indicator;
  std::map<ScoreMeasure, std::map<std::string, double>> indicator_by_type;
  std::map<ScoreMeasure, std::size_t> pairs;
  std::map<ScoreMeasure, std::size_t> dropped;
  DivergenceReport divergence;
  // normality of the divergence-source scores; empty when n is out of range
  std::optional<NormalityResult> normality_stereo;
  std::optional<NormalityResult> normality_anti;
  std::optional<GroupDeltas> deltas;
};

struct MeasureReport
{
  DatasetKind dataset_kind = DatasetKind::CrowsPairs;
  std::size_t dataset_pairs = 0;
  std::map<std::string, std::size_t> type_counts;
  ScoreMeasure divergence_source = ScoreMeasure::AUL;
  std::vector<ModelReport> models;
  // over (model, bias type) cells: per-type indicators, KLS and JSS
  MeasureMatrix correlation;
  MeasureMatrix mutual_information;
  // per model, over pairs: score differences of each score function
  std::map<std::string, MeasureMatrix> pair_difference_correlation;
  std::map<std::string, MeasureMatrix> pair_difference_mi;
};

MeasureReport build_measure_report(const LoadedInputs& inputs, const RunConfig& config);

std::string report_json(const MeasureReport& report);
std::string report_csv(const MeasureReport& report);
std::string report_markdown(const MeasureReport& report);

// Loads inputs, builds the report and writes report.{json,csv,md} for the
// requested formats.
MeasureReport run_evaluate(const RunConfig& config);

struct RobustnessRun
{
  std::vector<RobustnessReport> experiments;
};

std::string robustness_csv(const RobustnessRun& run);
std::string robustness_json(const RobustnessRun& run);

// One experiment per score function shared by all models; KLS and JSS are
// added for the divergence source. Writes robustness.csv and robustness.json.
RobustnessRun run_robustness(const RunConfig& config);

struct SideNormality
{
  std::string model_id;
  std::string side;
  NormalityResult normality;
  GaussianSummary fit;
  DensityCurve curve;
  std::filesystem::path curve_file;
};

// Shapiro-Wilk and KDE of the stereotypical and anti-stereotypical scores of
// every model. Writes kde_<model>_<side>.csv (grid, density, gaussian) and
// normality.json.
std::vector<SideNormality> run_normality(const RunConfig& config);

std::string normality_json(const std::vector<SideNormality>& results);

// Whole file as bytes; ConfigError when it cannot be opened.
std::string read_text(const std::filesystem::path& path);

// File-name-safe form of a model id.
std::string sanitize_name(std::string_view text);

// %.6g
std::string format_number(double value);

} // namespace biaseval
