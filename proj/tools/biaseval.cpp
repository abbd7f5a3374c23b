// biaseval: bias measures for masked language models from precomputed
// pseudo-log-likelihood scores.
#include "biaseval/error.hpp"
#include "biaseval/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace biaseval;

namespace {

enum ExitCode
{
  kOk = 0,
  kConfig = 1,
  kData = 2,
  kNumerical = 3,
};

struct Options
{
  std::string dataset;
  std::string dataset_kind = "crowspairs";
  std::vector<std::string> scores;
  std::string divergence_source = "aul";
  std::vector<double> rates;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  bool stratified = false;
  std::string out = ".";
  std::vector<std::string> formats;
  std::size_t grid_size = 512;
  std::size_t mi_k = 3;
};

RunConfig to_config(const Options& opt)
{
  RunConfig config;
  config.dataset_path = opt.dataset;
  config.dataset_kind = dataset_kind_from_string(opt.dataset_kind);
  for (const auto& s : opt.scores)
    config.score_paths.emplace_back(s);
  try {
    config.divergence_source = score_measure_from_string(opt.divergence_source);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  if (!opt.rates.empty())
    config.plan.rates = opt.rates;
  config.plan.repeats = opt.repeats;
  config.plan.seed = opt.seed;
  config.plan.stratified = opt.stratified;
  config.output_dir = opt.out;
  if (!opt.formats.empty()) {
    config.formats.clear();
    for (const auto& f : opt.formats)
      config.formats.insert(report_format_from_string(f));
  }
  config.kde_grid = opt.grid_size;
  config.mi_neighbors = opt.mi_k;
  return config;
}

void add_input_flags(CLI::App* cmd, Options& opt, bool scores_required)
{
  cmd->add_option("--dataset", opt.dataset, "dataset file")->required(scores_required);
  cmd->add_option("--dataset-kind", opt.dataset_kind, "stereoset, crowspairs or canonical")
    ->capture_default_str();
  auto* scores = cmd->add_option("--scores", opt.scores, "score file (JSON Lines), repeatable");
  scores->allow_extra_args(false);
  cmd->add_option("--divergence-source", opt.divergence_source,
                  "score function feeding KLS and JSS: sss, cps or aul")
    ->capture_default_str();
  cmd->add_option("--out", opt.out, "output directory")->capture_default_str();
}

int run_validate(const Options& opt)
{
  if (opt.dataset.empty() && opt.scores.empty())
    throw ConfigError("nothing to validate (give --dataset and/or --scores)");
  std::optional<BiasDataset> dataset;
  if (!opt.dataset.empty()) {
    dataset = load_dataset(opt.dataset, dataset_kind_from_string(opt.dataset_kind));
    for (const auto& pair : dataset->pairs) {
      try {
        diff_tokens(pair);
      } catch (const DataError& e) {
        throw DataError(opt.dataset + ": pair " + pair.pair_id + ": " + e.what());
      }
    }
    std::cout << opt.dataset << ": " << dataset->size() << " pairs from "
              << to_string(dataset->source) << "\n";
    for (const auto& [type, count] : dataset->type_counts)
      std::cout << "  " << type << " " << count << "\n";
    if (opt.out != ".") {
      std::filesystem::create_directories(opt.out);
      const auto target = std::filesystem::path(opt.out) / "dataset.jsonl";
      std::FILE* f = std::fopen(target.string().c_str(), "wb");
      if (!f)
        throw ConfigError("cannot write " + target.string());
      const auto text = serialize_dataset(*dataset);
      std::fwrite(text.data(), 1, text.size(), f);
      std::fclose(f);
      std::cout << "wrote " << target.string() << "\n";
    }
  }
  for (const auto& path : opt.scores) {
    ScoreSet scores = [&] {
      try {
        return load_scores(read_text(path));
      } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
      }
    }();
    std::cout << path << ": " << scores.size() << " " << to_string(scores.measure())
              << " scores for " << scores.model_id();
    if (dataset) {
      try {
        const auto joined = join_with_dataset(scores, *dataset);
        std::cout << ", " << joined.scores.size() << " joined, " << joined.dropped
                  << " dropped";
      } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
      }
    }
    std::cout << "\n";
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Bias evaluation of masked language models from PLL scores" };
  app.require_subcommand(1);
  Options opt;

  auto* evaluate = app.add_subcommand("evaluate", "Indicator, KLS and JSS report");
  add_input_flags(evaluate, opt, true);
  evaluate->add_option("--format", opt.formats, "json, csv and/or markdown (default all)");
  evaluate->add_option("--mi-k", opt.mi_k, "neighbours for mutual information")
    ->capture_default_str();

  auto* robustness = app.add_subcommand("robustness", "rankings under random subsampling");
  add_input_flags(robustness, opt, true);
  robustness->add_option("--rates", opt.rates, "sampling rates (default 0.3 .. 0.8)")
    ->delimiter(',');
  robustness->add_option("--repeats", opt.repeats, "samples per rate")->capture_default_str();
  robustness->add_option("--seed", opt.seed, "random seed")->capture_default_str();
  robustness->add_flag("--stratified", opt.stratified, "sample each bias type separately");

  auto* normality = app.add_subcommand("normality", "Shapiro-Wilk tests and KDE curves");
  add_input_flags(normality, opt, true);
  normality->add_option("--grid-size", opt.grid_size, "minimum KDE grid points")
    ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "check dataset and score files");
  add_input_flags(validate, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*validate)
      return run_validate(opt);
    const auto config = to_config(opt);
    if (*evaluate) {
      const auto report = run_evaluate(config);
      std::cout << "evaluated " << report.models.size() << " model(s); reports in "
                << config.output_dir.string() << "\n";
    } else if (*robustness) {
      const auto run = run_robustness(config);
      std::cout << "robustness: " << run.experiments.size() << " experiment(s); wrote "
                << (config.output_dir / "robustness.csv").string() << "\n";
    } else if (*normality) {
      const auto results = run_normality(config);
      for (const auto& r : results)
        std::cout << r.model_id << " " << r.side << ": W=" << format_number(r.normality.w)
                  << " p=" << format_number(r.normality.p_value) << " -> "
                  << r.curve_file.string() << "\n";
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  }
}
