#include "biaseval/report.hpp"

#include "biaseval/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace biaseval {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void write_file(const fs::path& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out)
    throw ConfigError("failed writing " + path.string());
}

// Re-raises a library error with the offending file prepended, keeping its
// category (and therefore the CLI exit code).
template<class F>
auto with_context(const std::string& context, F&& body)
{
  try {
    return body();
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(context + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  }
}

double round6(double value)
{
  return std::strtod(format_number(value).c_str(), nullptr);
}

ordered_json number(double value)
{
  return round6(value);
}

ordered_json optional_number(const std::optional<double>& value)
{
  return value ? number(*value) : ordered_json(nullptr);
}

std::string fixed2(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string fixed4(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string indicator_label(ScoreMeasure measure)
{
  return "indicator_" + to_string(measure);
}

template<class Stat>
MeasureMatrix pairwise(const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& columns,
                       Stat&& stat)
{
  MeasureMatrix matrix;
  matrix.labels = labels;
  matrix.samples = columns.empty() ? 0 : columns.front().size();
  matrix.values.assign(labels.size(), std::vector<std::optional<double>>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < labels.size(); ++j) {
      try {
        matrix.values[i][j] = stat(columns[i], columns[j]);
      } catch (const NumericalError&) {
        matrix.values[i][j].reset();
      } catch (const DataError&) {
        matrix.values[i][j].reset();
      }
    }
  return matrix;
}

ordered_json matrix_json(const MeasureMatrix& matrix)
{
  ordered_json out;
  out["labels"] = matrix.labels;
  out["samples"] = matrix.samples;
  ordered_json rows = ordered_json::array();
  for (const auto& row : matrix.values) {
    ordered_json r = ordered_json::array();
    for (const auto& v : row)
      r.push_back(optional_number(v));
    rows.push_back(std::move(r));
  }
  out["values"] = std::move(rows);
  return out;
}

ordered_json normality_json_entry(const std::optional<NormalityResult>& result)
{
  if (!result)
    return nullptr;
  ordered_json out;
  out["w"] = number(result->w);
  out["p_value"] = number(result->p_value);
  out["n"] = result->n;
  return out;
}

ordered_json gaussian_json(const GaussianSummary& g)
{
  ordered_json out;
  out["mu"] = number(g.mu);
  out["sigma"] = number(g.sigma);
  out["n"] = g.n;
  return out;
}

std::string markdown_matrix(const MeasureMatrix& matrix)
{
  std::string out = "|";
  for (const auto& label : matrix.labels)
    out += " | " + label;
  out += " |\n|---";
  for (std::size_t i = 0; i < matrix.labels.size(); ++i)
    out += "|---:";
  out += "|\n";
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    out += "| " + matrix.labels[i];
    for (const auto& v : matrix.values[i])
      out += " | " + (v ? fixed2(*v) : std::string("n/a"));
    out += " |\n";
  }
  return out;
}

std::string robustness_label(const RobustnessReport& experiment, MeasureKind kind)
{
  return kind == MeasureKind::Indicator ? indicator_label(experiment.score_measure)
                                        : to_string(kind);
}

} // namespace

std::string read_text(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string format_number(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string sanitize_name(std::string_view text)
{
  std::string out;
  for (char c : text) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
    out += keep ? c : '_';
  }
  return out.empty() ? "_" : out;
}

DatasetKind dataset_kind_from_string(std::string_view text)
{
  if (text == "stereoset")
    return DatasetKind::StereoSet;
  if (text == "crowspairs")
    return DatasetKind::CrowsPairs;
  if (text == "canonical")
    return DatasetKind::Canonical;
  throw ConfigError("unknown dataset kind '" + std::string(text) +
                    "' (expected stereoset, crowspairs or canonical)");
}

std::string to_string(DatasetKind kind)
{
  switch (kind) {
    case DatasetKind::StereoSet:
      return "stereoset";
    case DatasetKind::CrowsPairs:
      return "crowspairs";
    case DatasetKind::Canonical:
      return "canonical";
  }
  return "canonical";
}

ReportFormat report_format_from_string(std::string_view text)
{
  if (text == "json")
    return ReportFormat::Json;
  if (text == "csv")
    return ReportFormat::Csv;
  if (text == "markdown" || text == "md")
    return ReportFormat::Markdown;
  throw ConfigError("unknown report format '" + std::string(text) + "'");
}

void RunConfig::validate() const
{
  if (score_paths.empty())
    throw ConfigError("no score files given (use --scores)");
  if (dataset_path.empty())
    throw ConfigError("no dataset given (use --dataset)");
  if (!fs::exists(dataset_path))
    throw ConfigError("dataset " + dataset_path.string() + " does not exist");
  for (const auto& path : score_paths)
    if (!fs::exists(path))
      throw ConfigError("score file " + path.string() + " does not exist");
  plan.validate();
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec || !fs::is_directory(output_dir))
    throw ConfigError("output directory " + output_dir.string() + " is not usable");
  const auto probe = output_dir / ".biaseval_write_probe";
  {
    std::ofstream out(probe);
    if (!out)
      throw ConfigError("output directory " + output_dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

BiasDataset load_dataset(const fs::path& path, DatasetKind kind)
{
  const auto text = read_text(path);
  return with_context(path.string(), [&] {
    switch (kind) {
      case DatasetKind::StereoSet:
        return parse_stereoset(text);
      case DatasetKind::CrowsPairs:
        return parse_crowspairs(text);
      case DatasetKind::Canonical:
        break;
    }
    return parse_canonical(text);
  });
}

LoadedInputs load_inputs(const RunConfig& config)
{
  config.validate();
  LoadedInputs inputs;
  inputs.dataset = load_dataset(config.dataset_path, config.dataset_kind);
  for (const auto& path : config.score_paths) {
    const auto text = read_text(path);
    auto joined = with_context(path.string(), [&] {
      return join_with_dataset(load_scores(text), inputs.dataset);
    });
    const auto model = joined.scores.model_id();
    const auto measure = joined.scores.measure();
    auto& by_measure = inputs.scores[model];
    if (by_measure.contains(measure))
      throw DataError(path.string() + ": a second " + to_string(measure) +
                      " score file for model " + model);
    by_measure.emplace(measure, std::move(joined.scores));
    inputs.dropped[model][measure] = joined.dropped;
  }
  return inputs;
}

MeasureReport build_measure_report(const LoadedInputs& inputs, const RunConfig& config)
{
  MeasureReport report;
  report.dataset_kind = config.dataset_kind;
  report.dataset_pairs = inputs.dataset.size();
  report.type_counts = inputs.dataset.type_counts;
  report.divergence_source = config.divergence_source;

  for (const auto& [model, by_measure] : inputs.scores) {
    auto source = by_measure.find(config.divergence_source);
    if (source == by_measure.end())
      throw ConfigError("model " + model + " has no " +
                        to_string(config.divergence_source) +
                        " scores; pass them or change --divergence-source");
    ModelReport row;
    row.model_id = model;
    for (const auto& [measure, scores] : by_measure) {
      const std::string context = model + "/" + to_string(measure);
      with_context(context, [&] {
        row.indicator[measure] = indicator_bias_score(scores).value;
        for (const auto& [type, subset] : split_by_type(scores))
          row.indicator_by_type[measure][type] = indicator_bias_score(subset).value;
      });
      row.pairs[measure] = scores.size();
      row.dropped[measure] = inputs.dropped.at(model).at(measure);
    }
    const ScoreSet& scores = source->second;
    const std::string context = model + "/" + to_string(config.divergence_source);
    row.divergence = with_context(context, [&] { return divergence_measures(scores); });
    const auto stereo = scores.stereo_scores();
    const auto anti = scores.anti_scores();
    if (scores.size() >= 3 && scores.size() <= 5000) {
      row.normality_stereo =
        with_context(context + " stereo", [&] { return shapiro_wilk(stereo); });
      row.normality_anti =
        with_context(context + " anti", [&] { return shapiro_wilk(anti); });
    }
    try {
      row.deltas = group_deltas(scores);
    } catch (const EmptyGroup&) {
      row.deltas.reset();
    }
    report.models.push_back(std::move(row));
  }

  // per-type measure vectors over (model, bias type) cells
  std::vector<ScoreMeasure> shared_measures;
  for (auto measure : { ScoreMeasure::SSS, ScoreMeasure::CPS, ScoreMeasure::AUL }) {
    bool everywhere = true;
    for (const auto& row : report.models)
      everywhere = everywhere && row.indicator.contains(measure);
    if (everywhere)
      shared_measures.push_back(measure);
  }
  std::vector<std::string> labels;
  std::vector<std::vector<double>> columns(shared_measures.size() + 2);
  for (auto measure : shared_measures)
    labels.push_back(indicator_label(measure));
  labels.push_back("kls");
  labels.push_back("jss");
  for (const auto& row : report.models)
    for (const auto& [type, divergence] : row.divergence.per_type) {
      bool complete = true;
      for (auto measure : shared_measures)
        complete = complete && row.indicator_by_type.at(measure).contains(type);
      if (!complete)
        continue;
      for (std::size_t m = 0; m < shared_measures.size(); ++m)
        columns[m].push_back(row.indicator_by_type.at(shared_measures[m]).at(type));
      columns[shared_measures.size()].push_back(divergence.kls);
      columns[shared_measures.size() + 1].push_back(divergence.jss);
    }
  report.correlation = pairwise(labels, columns, [](const auto& x, const auto& y) {
    return pearson(x, y);
  });
  const std::size_t k = config.mi_neighbors;
  report.mutual_information = pairwise(labels, columns, [k](const auto& x, const auto& y) {
    return mutual_information(x, y, k);
  });

  // per-pair score differences, for models scored with several functions
  for (const auto& [model, by_measure] : inputs.scores) {
    if (by_measure.size() < 2)
      continue;
    std::vector<std::string> ids;
    for (const auto& e : by_measure.begin()->second.entries())
      ids.push_back(e.pair_id);
    std::sort(ids.begin(), ids.end());
    for (const auto& [measure, scores] : by_measure) {
      std::vector<std::string> own;
      for (const auto& e : scores.entries())
        own.push_back(e.pair_id);
      std::sort(own.begin(), own.end());
      std::vector<std::string> common;
      std::set_intersection(ids.begin(), ids.end(), own.begin(), own.end(),
                            std::back_inserter(common));
      ids = std::move(common);
    }
    std::vector<std::string> diff_labels;
    std::vector<std::vector<double>> diffs;
    for (const auto& [measure, scores] : by_measure) {
      diff_labels.push_back(to_string(measure));
      std::map<std::string, double> by_id;
      for (const auto& e : scores.entries())
        by_id[e.pair_id] = e.score_stereo - e.score_anti;
      std::vector<double> column;
      column.reserve(ids.size());
      for (const auto& id : ids)
        column.push_back(by_id.at(id));
      diffs.push_back(std::move(column));
    }
    report.pair_difference_correlation[model] =
      pairwise(diff_labels, diffs, [](const auto& x, const auto& y) { return pearson(x, y); });
    report.pair_difference_mi[model] =
      pairwise(diff_labels, diffs, [k](const auto& x, const auto& y) {
        return mutual_information(x, y, k);
      });
  }
  return report;
}

std::string report_json(const MeasureReport& report)
{
  ordered_json root;
  root["dataset"] = {
    { "kind", to_string(report.dataset_kind) },
    { "pairs", report.dataset_pairs },
    { "type_counts", report.type_counts },
  };
  root["divergence_source"] = to_string(report.divergence_source);
  ordered_json models = ordered_json::array();
  for (const auto& row : report.models) {
    ordered_json m;
    m["model_id"] = row.model_id;
    ordered_json indicator;
    for (const auto& [measure, value] : row.indicator)
      indicator[to_string(measure)] = number(value);
    m["indicator"] = std::move(indicator);
    m["kls"] = number(row.divergence.kls.value);
    m["jss"] = number(row.divergence.jss.value);
    ordered_json pairs;
    for (const auto& [measure, count] : row.pairs)
      pairs[to_string(measure)] = { { "scored", count }, { "dropped", row.dropped.at(measure) } };
    m["pairs"] = std::move(pairs);
    ordered_json types = ordered_json::array();
    for (const auto& [type, d] : row.divergence.per_type) {
      ordered_json t;
      t["bias_type"] = type;
      t["count"] = d.count;
      t["kls"] = number(d.kls);
      t["jss"] = number(d.jss);
      t["stereo"] = gaussian_json(d.stereo);
      t["anti"] = gaussian_json(d.anti);
      ordered_json ind;
      for (const auto& [measure, by_type] : row.indicator_by_type)
        if (by_type.contains(type))
          ind[to_string(measure)] = number(by_type.at(type));
      t["indicator"] = std::move(ind);
      types.push_back(std::move(t));
    }
    m["per_type"] = std::move(types);
    m["normality"] = {
      { "stereo", normality_json_entry(row.normality_stereo) },
      { "anti", normality_json_entry(row.normality_anti) },
    };
    if (row.deltas) {
      const auto& g = *row.deltas;
      m["group_deltas"] = {
        { "avg_st_in_stereo_group", number(g.avg_st_in_stereo_group) },
        { "avg_at_in_stereo_group", number(g.avg_at_in_stereo_group) },
        { "delta_st", number(g.delta_st) },
        { "avg_st_in_anti_group", number(g.avg_st_in_anti_group) },
        { "avg_at_in_anti_group", number(g.avg_at_in_anti_group) },
        { "delta_at", number(g.delta_at) },
        { "imbalance", number(g.imbalance) },
      };
    } else {
      m["group_deltas"] = nullptr;
    }
    models.push_back(std::move(m));
  }
  root["models"] = std::move(models);
  root["correlation"] = matrix_json(report.correlation);
  root["mutual_information"] = matrix_json(report.mutual_information);
  ordered_json pair_diff;
  for (const auto& [model, matrix] : report.pair_difference_correlation)
    pair_diff[model] = { { "correlation", matrix_json(matrix) },
                         { "mutual_information",
                           matrix_json(report.pair_difference_mi.at(model)) } };
  root["pair_difference"] = pair_diff.is_null() ? ordered_json::object() : pair_diff;
  return root.dump(2) + "\n";
}

std::string report_csv(const MeasureReport& report)
{
  std::string out = "model_id,scope,metric,value,count\n";
  auto row = [&](const std::string& model, const std::string& scope,
                 const std::string& metric, double value, std::size_t count) {
    out += model + "," + scope + "," + metric + "," + format_number(value) + "," +
           std::to_string(count) + "\n";
  };
  for (const auto& m : report.models) {
    for (const auto& [measure, value] : m.indicator)
      row(m.model_id, "overall", indicator_label(measure), value, m.pairs.at(measure));
    const std::size_t n = m.pairs.at(report.divergence_source);
    row(m.model_id, "overall", "kls", m.divergence.kls.value, n);
    row(m.model_id, "overall", "jss", m.divergence.jss.value, n);
    for (const auto& [type, d] : m.divergence.per_type) {
      for (const auto& [measure, by_type] : m.indicator_by_type)
        if (by_type.contains(type))
          row(m.model_id, type, indicator_label(measure), by_type.at(type), d.count);
      row(m.model_id, type, "kls", d.kls, d.count);
      row(m.model_id, type, "jss", d.jss, d.count);
    }
  }
  return out;
}

std::string report_markdown(const MeasureReport& report)
{
  std::string out = "# Bias evaluation report\n\n";
  out += "Dataset: " + to_string(report.dataset_kind) + ", " +
         std::to_string(report.dataset_pairs) + " pairs. KLS/JSS computed from " +
         to_string(report.divergence_source) + " scores.\n\n";

  std::vector<ScoreMeasure> measures;
  for (const auto& m : report.models)
    for (const auto& [measure, value] : m.indicator)
      if (std::find(measures.begin(), measures.end(), measure) == measures.end())
        measures.push_back(measure);
  std::sort(measures.begin(), measures.end());

  out += "## Overall\n\n| Model";
  for (auto measure : measures)
    out += " | " + indicator_label(measure);
  out += " | KLS | JSS |\n|---";
  for (std::size_t i = 0; i < measures.size() + 2; ++i)
    out += "|---:";
  out += "|\n";
  for (const auto& m : report.models) {
    out += "| " + m.model_id;
    for (auto measure : measures)
      out += " | " + (m.indicator.contains(measure) ? fixed2(m.indicator.at(measure))
                                                    : std::string("n/a"));
    out += " | " + fixed2(m.divergence.kls.value) + " | " + fixed2(m.divergence.jss.value) +
           " |\n";
  }

  out += "\n## Per bias type (KLS / JSS)\n\n| Bias type | Count";
  for (const auto& m : report.models)
    out += " | " + m.model_id;
  out += " |\n|---|---:";
  for (std::size_t i = 0; i < report.models.size(); ++i)
    out += "|---:";
  out += "|\n";
  for (const auto& [type, count] : report.type_counts) {
    out += "| " + type + " | " + std::to_string(count);
    for (const auto& m : report.models) {
      auto it = m.divergence.per_type.find(type);
      out += " | " + (it == m.divergence.per_type.end()
                        ? std::string("n/a")
                        : fixed2(it->second.kls) + " / " + fixed2(it->second.jss));
    }
    out += " |\n";
  }

  out += "\n## Normality (Shapiro-Wilk W / p)\n\n| Model | Stereotypical | Anti-stereotypical |\n"
         "|---|---:|---:|\n";
  auto sw = [](const std::optional<NormalityResult>& r) {
    return r ? fixed2(r->w) + " / " + fixed2(r->p_value) : std::string("n/a");
  };
  for (const auto& m : report.models)
    out += "| " + m.model_id + " | " + sw(m.normality_stereo) + " | " +
           sw(m.normality_anti) + " |\n";

  out += "\n## Sample group deltas\n\n| Model | delta_st | delta_at | imbalance |\n"
         "|---|---:|---:|---:|\n";
  for (const auto& m : report.models) {
    if (!m.deltas)
      continue;
    out += "| " + m.model_id + " | " + fixed4(m.deltas->delta_st) + " | " +
           fixed4(m.deltas->delta_at) + " | " + fixed4(m.deltas->imbalance) + " |\n";
  }

  out += "\n## Pearson correlation over (model, bias type) cells\n\n";
  out += markdown_matrix(report.correlation);
  out += "\n## Mutual information (nats)\n\n";
  out += markdown_matrix(report.mutual_information);
  return out;
}

MeasureReport run_evaluate(const RunConfig& config)
{
  const auto inputs = load_inputs(config);
  auto report = build_measure_report(inputs, config);
  if (config.formats.contains(ReportFormat::Json))
    write_file(config.output_dir / "report.json", report_json(report));
  if (config.formats.contains(ReportFormat::Csv))
    write_file(config.output_dir / "report.csv", report_csv(report));
  if (config.formats.contains(ReportFormat::Markdown))
    write_file(config.output_dir / "report.md", report_markdown(report));
  return report;
}

std::string robustness_csv(const RobustnessRun& run)
{
  std::string out = "rate,repeat_mean,model_id,measure,score,rank_flag,delta_sp\n";
  for (const auto& experiment : run.experiments) {
    const char* repeat_mean = experiment.plan.repeats > 1 ? "1" : "0";
    for (const auto& rate : experiment.rates)
      for (const auto& [model, by_kind] : rate.mean_scores)
        for (const auto& [kind, score] : by_kind)
          out += format_number(rate.rate) + "," + repeat_mean + "," + model + "," +
                 robustness_label(experiment, kind) + "," + format_number(score) + "," +
                 (rate.rank_flag.at(kind) ? "1" : "0") + "," +
                 format_number(rate.delta_sp.at(model)) + "\n";
  }
  return out;
}

std::string robustness_json(const RobustnessRun& run)
{
  ordered_json root = ordered_json::array();
  for (const auto& experiment : run.experiments) {
    ordered_json e;
    e["score_measure"] = to_string(experiment.score_measure);
    e["plan"] = {
      { "rates", experiment.plan.rates },
      { "repeats", experiment.plan.repeats },
      { "seed", experiment.plan.seed },
      { "stratified", experiment.plan.stratified },
    };
    ordered_json full;
    for (const auto& [model, by_kind] : experiment.full_scores) {
      ordered_json m;
      for (const auto& [kind, score] : by_kind)
        m[robustness_label(experiment, kind)] = number(score);
      m["imbalance"] = number(experiment.full_deltas.at(model).imbalance);
      full[model] = std::move(m);
    }
    e["full"] = std::move(full);
    ordered_json full_ranking;
    for (const auto& [kind, order] : experiment.full_ranking)
      full_ranking[robustness_label(experiment, kind)] = order;
    e["full_ranking"] = std::move(full_ranking);
    ordered_json rates = ordered_json::array();
    for (const auto& rate : experiment.rates) {
      ordered_json r;
      r["rate"] = number(rate.rate);
      ordered_json flags;
      ordered_json ranking;
      for (const auto& [kind, flag] : rate.rank_flag) {
        flags[robustness_label(experiment, kind)] = flag;
        ranking[robustness_label(experiment, kind)] = rate.ranking.at(kind);
      }
      r["rank_flags"] = std::move(flags);
      r["ranking"] = std::move(ranking);
      ordered_json delta_sp;
      for (const auto& [model, d] : rate.delta_sp)
        delta_sp[model] = number(d);
      r["delta_sp"] = std::move(delta_sp);
      rates.push_back(std::move(r));
    }
    e["rates"] = std::move(rates);
    root.push_back(std::move(e));
  }
  return root.dump(2) + "\n";
}

RobustnessRun run_robustness(const RunConfig& config)
{
  const auto inputs = load_inputs(config);
  if (inputs.scores.size() < 2)
    throw ConfigError("robustness needs score files for at least two models, got " +
                      std::to_string(inputs.scores.size()));
  RobustnessRun run;
  for (auto measure : { ScoreMeasure::SSS, ScoreMeasure::CPS, ScoreMeasure::AUL }) {
    std::map<std::string, ScoreSet> sets;
    for (const auto& [model, by_measure] : inputs.scores) {
      auto it = by_measure.find(measure);
      if (it != by_measure.end())
        sets.emplace(model, it->second);
    }
    if (sets.size() != inputs.scores.size())
      continue;
    std::set<MeasureKind> kinds = { MeasureKind::Indicator };
    if (measure == config.divergence_source) {
      kinds.insert(MeasureKind::KLS);
      kinds.insert(MeasureKind::JSS);
    }
    run.experiments.push_back(with_context(
      "robustness on " + to_string(measure) + " scores",
      [&] { return robustness_experiment(sets, config.plan, kinds); }));
  }
  if (run.experiments.empty())
    throw ConfigError("no score function is shared by all models");
  write_file(config.output_dir / "robustness.csv", robustness_csv(run));
  write_file(config.output_dir / "robustness.json", robustness_json(run));
  return run;
}

std::string normality_json(const std::vector<SideNormality>& results)
{
  ordered_json root = ordered_json::array();
  for (const auto& r : results) {
    ordered_json entry;
    entry["model_id"] = r.model_id;
    entry["side"] = r.side;
    entry["w"] = number(r.normality.w);
    entry["p_value"] = number(r.normality.p_value);
    entry["n"] = r.normality.n;
    entry["fit"] = gaussian_json(r.fit);
    entry["bandwidth"] = number(r.curve.bandwidth);
    entry["curve_file"] = r.curve_file.filename().string();
    root.push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

std::vector<SideNormality> run_normality(const RunConfig& config)
{
  const auto inputs = load_inputs(config);
  std::vector<SideNormality> results;
  for (const auto& [model, by_measure] : inputs.scores) {
    auto source = by_measure.find(config.divergence_source);
    if (source == by_measure.end())
      throw ConfigError("model " + model + " has no " +
                        to_string(config.divergence_source) + " scores");
    for (const std::string side : { "stereo", "anti" }) {
      const auto values = side == "stereo" ? source->second.stereo_scores()
                                           : source->second.anti_scores();
      SideNormality result;
      result.model_id = model;
      result.side = side;
      with_context(model + " (" + side + " scores)", [&] {
        result.normality = shapiro_wilk(values);
        result.curve = kde(values, config.kde_grid);
        result.fit = fit_gaussian(values);
      });
      std::vector<double> overlay;
      overlay.reserve(result.curve.grid.size());
      for (double x : result.curve.grid)
        overlay.push_back(result.fit.density(x));
      result.curve_file =
        config.output_dir / ("kde_" + sanitize_name(model) + "_" + side + ".csv");
      write_file(result.curve_file, to_csv(result.curve, &overlay));
      results.push_back(std::move(result));
    }
  }
  write_file(config.output_dir / "normality.json", normality_json(results));
  return results;
}

} // namespace biaseval
