// indagg -- anomaly classification over aggregated binary indicators.
//
// Pipeline commands communicate only through files:
//   simulate -> featurize -> split -> rank -> train / sweep / select / report
// `experiment` chains the whole protocol for one dataset variant with pinned
// seeds. Every command writes a run manifest (<output>.manifest.json) with
// seeds and input/output digests.
//
// Exit codes: 0 success, 2 usage error, 3 input/schema error, 4 runtime error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "indagg/dataset_io.hpp"
#include "indagg/experiment.hpp"
#include "indagg/grid_io.hpp"
#include "indagg/io_util.hpp"
#include "indagg/rng.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int default_jobs() {
  if (const char* env = std::getenv("INDAGG_JOBS"); env != nullptr) {
    const int jobs = std::atoi(env);
    if (jobs >= 1) return jobs;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Records one command run next to its primary output.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& argv) : command_(std::move(command)) {
    doc_["tool"] = "indagg";
    doc_["version"] = kVersion;
    doc_["command"] = command_;
    doc_["argv"] = argv;
    const auto now = std::chrono::system_clock::now();
    doc_["started_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  }

  void seed(const std::string& name, std::uint64_t value) { doc_["seeds"][name] = value; }
  void note(const std::string& key, const nlohmann::json& value) { doc_[key] = value; }

  void input(const std::filesystem::path& path) {
    doc_["inputs"].push_back({{"path", path.string()}, {"fnv1a64", indagg::fnv1a64_file(path)}});
  }
  void output(const std::filesystem::path& path) {
    doc_["outputs"].push_back({{"path", path.string()}, {"fnv1a64", indagg::fnv1a64_file(path)}});
  }

  void write(const std::filesystem::path& primary_output) {
    const auto now = std::chrono::system_clock::now();
    doc_["finished_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    indagg::write_file_atomic(primary_output.string() + ".manifest.json", doc_.dump(2) + "\n");
  }

 private:
  std::string command_;
  nlohmann::json doc_;
};

std::vector<std::string> collect_argv(int argc, char** argv) {
  return std::vector<std::string>(argv, argv + argc);
}

void add_simulate(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("simulate", "Generate a labelled dataset (JSON Lines)");
  auto variant = std::make_shared<std::string>("A");
  auto normal = std::make_shared<int>(3000);
  auto per_anomaly = std::make_shared<int>(1000);
  auto seed = std::make_shared<std::uint64_t>(1);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--variant", *variant, "Dataset variant: A or B")->check(CLI::IsMember({"A", "B", "a", "b"}));
  cmd->add_option("--normal", *normal, "Signals with no anomaly")->check(CLI::NonNegativeNumber);
  cmd->add_option("--per-anomaly", *per_anomaly, "Signals per anomaly class")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", *seed, "Dataset seed");
  cmd->add_option("-o,--output", *out, "Output dataset file")->required();
  cmd->callback([=]() {
    indagg::DatasetConfig config;
    config.variant = indagg::variant_from_string(*variant);
    config.n_normal = *normal;
    config.n_per_anomaly = *per_anomaly;
    config.seed = *seed;
    const auto dataset = indagg::generate_dataset(config);
    indagg::write_dataset_jsonl(*out, dataset);
    Manifest manifest("simulate", argv);
    manifest.seed("dataset", *seed);
    manifest.output(*out);
    manifest.write(*out);
    std::cerr << "wrote " << dataset.size() << " signals to " << *out << "\n";
  });
}

void add_grid(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("grid", "Write the default indicator grid as a config file");
  auto out = std::make_shared<std::string>();
  cmd->add_option("-o,--output", *out, "Output grid config (JSON)")->required();
  cmd->callback([=]() {
    indagg::write_grid_json(*out, indagg::default_grid());
    Manifest manifest("grid", argv);
    manifest.output(*out);
    manifest.write(*out);
  });
}

void add_featurize(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("featurize", "Evaluate the indicator grid on every signal");
  auto dataset_path = std::make_shared<std::string>();
  auto grid_path = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto jobs = std::make_shared<int>(default_jobs());
  auto quiet = std::make_shared<bool>(false);
  cmd->add_option("--dataset", *dataset_path, "Input dataset (JSON Lines)")->required();
  cmd->add_option("--grid", *grid_path, "Grid config JSON (default: built-in 810-indicator grid)");
  cmd->add_option("--jobs", *jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", *quiet, "Suppress progress output");
  cmd->add_option("-o,--output", *out, "Output indicator matrix (CSV)")->required();
  cmd->callback([=]() {
    const auto dataset = indagg::read_dataset_jsonl(*dataset_path);
    const indagg::IndicatorGrid grid =
        grid_path->empty() ? indagg::default_grid() : indagg::read_grid_json(*grid_path);
    indagg::GridDiagnostics diagnostics;
    const std::size_t total = dataset.size();
    std::size_t last_decile = 0;
    auto progress = [&](std::size_t done) {
      if (*quiet || total == 0) return;
      const std::size_t decile = done * 10 / total;
      if (decile > last_decile) {
        last_decile = decile;
        std::cerr << "featurize: " << done << "/" << total << " signals\n";
      }
    };
    const auto matrix = indagg::featurize(dataset, grid, *jobs, &diagnostics, progress);
    indagg::write_matrix_csv(*out, matrix);
    for (const auto& message : diagnostics.messages) std::cerr << "warning: " << message << "\n";
    if (diagnostics.scan_errors > 0) {
      std::cerr << "warning: " << diagnostics.scan_errors
                << " spec evaluations failed (bits set to 0)\n";
    }
    Manifest manifest("featurize", argv);
    manifest.input(*dataset_path);
    if (!grid_path->empty()) manifest.input(*grid_path);
    manifest.note("scan_errors", diagnostics.scan_errors);
    manifest.output(*out);
    manifest.write(*out);
    std::cerr << "wrote " << matrix.rows() << " x " << matrix.cols() << " matrix to " << *out
              << "\n";
  });
}

void add_split(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("split", "Balanced learning/test split plus test subsets");
  auto matrix_path = std::make_shared<std::string>();
  auto prefix = std::make_shared<std::string>();
  auto learn_per_class = std::make_shared<int>(250);
  auto subsets = std::make_shared<int>(10);
  auto subset_size = std::make_shared<int>(500);
  auto seed = std::make_shared<std::uint64_t>(0);
  cmd->add_option("--matrix", *matrix_path, "Input indicator matrix (CSV)")->required();
  cmd->add_option("--learn-per-class", *learn_per_class)->check(CLI::PositiveNumber);
  cmd->add_option("--subsets", *subsets, "Number of balanced test subsets")->check(CLI::NonNegativeNumber);
  cmd->add_option("--subset-size", *subset_size)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", *seed, "Split seed");
  cmd->add_option("--out-prefix", *prefix, "Prefix for .learn.csv, .test.csv, .split.json")->required();
  cmd->callback([=]() {
    const auto matrix = indagg::read_matrix_csv(*matrix_path);
    indagg::SplitSpec spec{*learn_per_class, *subsets, *subset_size, *seed};
    const auto result = indagg::split(matrix.labels, spec);
    const std::string learn_path = *prefix + ".learn.csv";
    const std::string test_path = *prefix + ".test.csv";
    const std::string split_path = *prefix + ".split.json";
    indagg::write_matrix_csv(learn_path, indagg::select_rows(matrix, result.learn_rows));
    indagg::write_matrix_csv(test_path, indagg::select_rows(matrix, result.test_rows));
    indagg::write_split_json(split_path, result, matrix);
    Manifest manifest("split", argv);
    manifest.input(*matrix_path);
    manifest.seed("split", *seed);
    manifest.output(learn_path);
    manifest.output(test_path);
    manifest.output(split_path);
    manifest.write(split_path);
    std::cerr << "learn " << result.learn_rows.size() << ", test " << result.test_rows.size()
              << ", " << result.subsets.size() << " subsets\n";
  });
}

void add_rank(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("rank", "mRMR forward ranking of indicators");
  auto matrix_path = std::make_shared<std::string>();
  auto count = std::make_shared<int>(100);
  auto jobs = std::make_shared<int>(default_jobs());
  auto out = std::make_shared<std::string>();
  cmd->add_option("--matrix", *matrix_path, "Learning matrix (CSV)")->required();
  cmd->add_option("--count", *count, "Indicators to rank")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", *jobs)->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", *out, "Output ranking (CSV)")->required();
  cmd->callback([=]() {
    const auto matrix = indagg::read_matrix_csv(*matrix_path);
    const auto ranking = indagg::mrmr_rank(matrix, static_cast<std::size_t>(*count), *jobs);
    indagg::write_ranking_csv(*out, ranking);
    Manifest manifest("rank", argv);
    manifest.input(*matrix_path);
    manifest.output(*out);
    manifest.write(*out);
  });
}

void add_train(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("train", "Train a classifier on an indicator matrix");
  auto matrix_path = std::make_shared<std::string>();
  auto classifier = std::make_shared<std::string>("nb");
  auto trees = std::make_shared<int>(500);
  auto mtry = std::make_shared<int>(0);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto jobs = std::make_shared<int>(default_jobs());
  auto ranking_path = std::make_shared<std::string>();
  auto top = std::make_shared<int>(0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--matrix", *matrix_path, "Learning matrix (CSV)")->required();
  cmd->add_option("--classifier", *classifier, "nb or rf")->check(CLI::IsMember({"nb", "rf"}));
  cmd->add_option("--trees", *trees, "Forest size (rf)")->check(CLI::PositiveNumber);
  cmd->add_option("--mtry", *mtry, "Columns tried per split; 0 = floor(sqrt(p)) (rf)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", *seed, "Forest seed (rf)");
  cmd->add_option("--jobs", *jobs)->check(CLI::PositiveNumber);
  cmd->add_option("--ranking", *ranking_path, "Restrict to the top ranked indicators (CSV)");
  cmd->add_option("--top", *top, "How many ranked indicators to keep (with --ranking)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", *out, "Output model (JSON)")->required();
  cmd->callback([=]() {
    indagg::IndicatorMatrix matrix = indagg::read_matrix_csv(*matrix_path);
    if (!ranking_path->empty()) {
      const auto ranking = indagg::read_ranking_csv(*ranking_path);
      const std::size_t keep = *top > 0 ? static_cast<std::size_t>(*top) : ranking.size();
      if (keep > ranking.size()) throw indagg::InputError("--top exceeds ranking length");
      matrix = indagg::select_columns(
          matrix, std::span<const std::string>(ranking.ordered_ids.data(), keep));
    }
    Manifest manifest("train", argv);
    manifest.input(*matrix_path);
    if (!ranking_path->empty()) manifest.input(*ranking_path);
    if (*classifier == "nb") {
      indagg::write_nb_model(*out, indagg::nb_train(matrix));
    } else {
      indagg::ForestParams params;
      params.n_trees = *trees;
      params.mtry = *mtry;
      params.seed = *seed;
      params.jobs = *jobs;
      const auto model = indagg::rf_train(matrix, params);
      indagg::write_forest_model(*out, model);
      manifest.seed("forest", *seed);
      manifest.note("oob_accuracy", model.oob_accuracy);
      std::cerr << "oob accuracy " << model.oob_accuracy << "\n";
    }
    manifest.output(*out);
    manifest.write(*out);
  });
}

void add_sweep(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("sweep", "Train/evaluate on 1..max ranked indicators");
  auto learn_path = std::make_shared<std::string>();
  auto test_path = std::make_shared<std::string>();
  auto split_path = std::make_shared<std::string>();
  auto ranking_path = std::make_shared<std::string>();
  auto classifier = std::make_shared<std::string>("nb");
  auto max = std::make_shared<int>(100);
  auto trees = std::make_shared<int>(500);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto jobs = std::make_shared<int>(default_jobs());
  auto prefix = std::make_shared<std::string>();
  cmd->add_option("--learn", *learn_path, "Learning matrix (CSV)")->required();
  cmd->add_option("--test", *test_path, "Test matrix (CSV)")->required();
  cmd->add_option("--split", *split_path, "Split file (JSON), source of the test subsets")->required();
  cmd->add_option("--ranking", *ranking_path, "Ranking (CSV)")->required();
  cmd->add_option("--classifier", *classifier, "nb or rf")->check(CLI::IsMember({"nb", "rf"}));
  cmd->add_option("--max", *max, "Largest indicator count")->check(CLI::PositiveNumber);
  cmd->add_option("--trees", *trees)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", *seed, "Sweep seed (per-m forest streams)");
  cmd->add_option("--jobs", *jobs)->check(CLI::PositiveNumber);
  cmd->add_option("--out-prefix", *prefix, "Prefix for .sweep.csv and .points.csv")->required();
  cmd->callback([=]() {
    const auto learn = indagg::read_matrix_csv(*learn_path);
    const auto test = indagg::read_matrix_csv(*test_path);
    const auto ranking = indagg::read_ranking_csv(*ranking_path);
    indagg::SweepParams params;
    params.n_trees = *trees;
    params.seed = *seed;
    params.jobs = *jobs;
    // subset ids from the split file, resolved against the test matrix rows
    const auto subsets = [&] {
      nlohmann::json doc = nlohmann::json::parse(indagg::read_file(*split_path), nullptr, false);
      if (doc.is_discarded()) throw indagg::InputError(*split_path + ": invalid JSON");
      std::unordered_map<std::int64_t, std::size_t> pos;
      for (std::size_t r = 0; r < test.rows(); ++r) pos.emplace(test.signal_ids[r], r);
      std::vector<std::vector<std::size_t>> out;
      for (const auto& subset_ids : doc.at("subsets")) {
        std::vector<std::size_t> subset;
        for (const auto& id : subset_ids) {
          const auto it = pos.find(id.get<std::int64_t>());
          if (it == pos.end()) {
            throw indagg::InputError(*split_path + ": subset id " + id.dump() +
                                     " not in the test matrix");
          }
          subset.push_back(it->second);
        }
        out.push_back(std::move(subset));
      }
      return out;
    }();
    const auto sweep =
        indagg::forward_sweep(learn, test, subsets, ranking, *max,
                              indagg::classifier_from_string(*classifier), params);
    const std::string sweep_path = *prefix + ".sweep.csv";
    const std::string points_path = *prefix + ".points.csv";
    indagg::write_sweep_csv(sweep_path, sweep);
    indagg::write_sweep_points_csv(points_path, sweep);
    Manifest manifest("sweep", argv);
    manifest.input(*learn_path);
    manifest.input(*test_path);
    manifest.input(*split_path);
    manifest.input(*ranking_path);
    manifest.seed("sweep", *seed);
    manifest.output(sweep_path);
    manifest.output(points_path);
    manifest.write(sweep_path);
  });
}

void add_select(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand(
      "select", "Pick the best indicator count from a sweep (train acc for nb, oob for rf)");
  auto sweep_path = std::make_shared<std::string>();
  auto max = std::make_shared<int>(30);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--sweep", *sweep_path, "Sweep file (CSV)")->required();
  cmd->add_option("--max", *max, "Largest admissible count")->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", *out, "Optional JSON output");
  cmd->callback([=]() {
    const auto sweep = indagg::read_sweep_csv(*sweep_path);
    const int m = indagg::select_optimal(sweep, *max);
    std::cout << m << "\n";
    if (!out->empty()) {
      nlohmann::json doc;
      doc["selected_m"] = m;
      doc["max_allowed"] = *max;
      indagg::write_file_atomic(*out, doc.dump(2) + "\n");
      Manifest manifest("select", argv);
      manifest.input(*sweep_path);
      manifest.output(*out);
      manifest.write(*out);
    }
  });
}

void add_report(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand("report", "Evaluation report or conditional-probability table");
  auto model_path = std::make_shared<std::string>();
  auto learn_path = std::make_shared<std::string>();
  auto test_path = std::make_shared<std::string>();
  auto split_path = std::make_shared<std::string>();
  auto cond_probs = std::make_shared<bool>(false);
  auto ranking_path = std::make_shared<std::string>();
  auto top = std::make_shared<int>(23);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--model", *model_path, "Model file (JSON)")->required();
  cmd->add_option("--learn", *learn_path, "Learning matrix (CSV)");
  cmd->add_option("--test", *test_path, "Test matrix (CSV)");
  cmd->add_option("--split", *split_path, "Split file (JSON)");
  cmd->add_flag("--cond-probs", *cond_probs,
                "Emit P(bit=1 | class) rows for ranked indicators instead of an accuracy report");
  cmd->add_option("--ranking", *ranking_path, "Ranking (CSV), required with --cond-probs");
  cmd->add_option("--top", *top, "Rows of the conditional-probability table");
  cmd->add_option("-o,--output", *out, "Output file")->required();
  cmd->callback([=]() {
    Manifest manifest("report", argv);
    manifest.input(*model_path);
    if (*cond_probs) {
      if (ranking_path->empty()) {
        throw CLI::ValidationError("report", "--cond-probs requires --ranking");
      }
      const auto model = indagg::read_nb_model(*model_path);
      const auto ranking = indagg::read_ranking_csv(*ranking_path);
      const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(*top), ranking.size());
      const auto table = indagg::conditional_probability_report(
          model, std::span<const std::string>(ranking.ordered_ids.data(), keep));
      indagg::write_probability_table_csv(*out, table);
      manifest.input(*ranking_path);
    } else {
      if (learn_path->empty() || test_path->empty() || split_path->empty()) {
        throw CLI::ValidationError("report", "accuracy report requires --learn, --test, --split");
      }
      const auto learn = indagg::read_matrix_csv(*learn_path);
      const auto test = indagg::read_matrix_csv(*test_path);
      const auto subsets = [&] {
        nlohmann::json doc = nlohmann::json::parse(indagg::read_file(*split_path), nullptr, false);
        if (doc.is_discarded()) throw indagg::InputError(*split_path + ": invalid JSON");
        std::unordered_map<std::int64_t, std::size_t> pos;
        for (std::size_t r = 0; r < test.rows(); ++r) pos.emplace(test.signal_ids[r], r);
        std::vector<std::vector<std::size_t>> result;
        for (const auto& subset_ids : doc.at("subsets")) {
          std::vector<std::size_t> subset;
          for (const auto& id : subset_ids) {
            const auto it = pos.find(id.get<std::int64_t>());
            if (it == pos.end()) {
              throw indagg::InputError(*split_path + ": subset id " + id.dump() +
                                       " not in the test matrix");
            }
            subset.push_back(it->second);
          }
          result.push_back(std::move(subset));
        }
        return result;
      }();
      indagg::EvalReport report;
      const std::string kind = [&] {
        nlohmann::json doc = nlohmann::json::parse(indagg::read_file(*model_path), nullptr, false);
        if (doc.is_discarded()) throw indagg::InputError(*model_path + ": invalid JSON");
        return doc.value("kind", std::string());
      }();
      if (kind == "naive_bayes") {
        report = indagg::evaluate(indagg::read_nb_model(*model_path), learn, test, subsets);
      } else if (kind == "random_forest") {
        const auto model = indagg::read_forest_model(*model_path);
        report = indagg::evaluate(model, learn, test, subsets);
        report.oob_accuracy = model.oob_accuracy;
      } else {
        throw indagg::InputError(*model_path + ": unknown model kind '" + kind + "'");
      }
      indagg::write_report_json(*out, report);
      manifest.input(*learn_path);
      manifest.input(*test_path);
      manifest.input(*split_path);
    }
    manifest.output(*out);
    manifest.write(*out);
  });
}

void add_experiment(CLI::App& app, const std::vector<std::string>& argv) {
  auto cmd = app.add_subcommand(
      "experiment", "Full protocol for one variant: simulate, featurize, split, train, sweep, report");
  auto variant = std::make_shared<std::string>("A");
  auto out_dir = std::make_shared<std::string>("experiment-out");
  auto jobs = std::make_shared<int>(default_jobs());
  auto config = std::make_shared<indagg::ExperimentConfig>();
  cmd->add_option("--variant", *variant)->check(CLI::IsMember({"A", "B", "a", "b"}));
  cmd->add_option("--out-dir", *out_dir, "Output directory");
  cmd->add_option("--normal", config->n_normal)->check(CLI::NonNegativeNumber);
  cmd->add_option("--per-anomaly", config->n_per_anomaly)->check(CLI::NonNegativeNumber);
  cmd->add_option("--dataset-seed", config->dataset_seed);
  cmd->add_option("--split-seed", config->split_seed);
  cmd->add_option("--forest-seed", config->forest_seed);
  cmd->add_option("--sweep-seed", config->sweep_seed);
  cmd->add_option("--trees", config->n_trees)->check(CLI::PositiveNumber);
  cmd->add_option("--rank-count", config->rank_count)->check(CLI::PositiveNumber);
  cmd->add_option("--select-max", config->select_max)->check(CLI::PositiveNumber);
  cmd->add_option("--report-top", config->report_top)->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", *jobs)->check(CLI::PositiveNumber);
  cmd->callback([=]() {
    config->variant = indagg::variant_from_string(*variant);
    config->jobs = *jobs;
    const std::filesystem::path dir(*out_dir);
    std::filesystem::create_directories(dir);
    const auto result = indagg::run_experiment(
        *config, [](const std::string& line) { std::cerr << line << "\n"; });

    const std::string tag = *variant == "a" || *variant == "A" ? "A" : "B";
    indagg::write_matrix_csv(dir / ("set" + tag + ".learn.csv"), result.learn);
    indagg::write_matrix_csv(dir / ("set" + tag + ".test.csv"), result.test);
    indagg::write_ranking_csv(dir / ("set" + tag + ".ranking.csv"), result.ranking);
    indagg::write_report_json(dir / ("set" + tag + ".rf_full.json"), result.rf_full);
    indagg::write_report_json(dir / ("set" + tag + ".nb_full.json"), result.nb_full);
    indagg::write_sweep_csv(dir / ("set" + tag + ".nb.sweep.csv"), result.nb_sweep);
    indagg::write_sweep_points_csv(dir / ("set" + tag + ".nb.points.csv"), result.nb_sweep);
    indagg::write_sweep_csv(dir / ("set" + tag + ".rf.sweep.csv"), result.rf_sweep);
    indagg::write_sweep_points_csv(dir / ("set" + tag + ".rf.points.csv"), result.rf_sweep);
    indagg::write_report_json(dir / ("set" + tag + ".nb_selected.json"), result.nb_selected);
    indagg::write_nb_model(dir / ("set" + tag + ".nb_selected.model.json"),
                           result.nb_selected_model);
    indagg::write_probability_table_csv(dir / ("set" + tag + ".cond_probs.csv"),
                                        result.top_table);

    nlohmann::json summary;
    summary["variant"] = tag;
    summary["rf_full"] = {{"test_mean", result.rf_full.test_mean_accuracy},
                          {"test_sd", result.rf_full.test_accuracy_sd},
                          {"train", result.rf_full.train_accuracy},
                          {"oob", *result.rf_full.oob_accuracy}};
    summary["nb_full"] = {{"test_mean", result.nb_full.test_mean_accuracy},
                          {"test_sd", result.nb_full.test_accuracy_sd},
                          {"train", result.nb_full.train_accuracy}};
    summary["nb_selected"] = {{"m", result.selected_m},
                              {"test_mean", result.nb_selected.test_mean_accuracy},
                              {"test_sd", result.nb_selected.test_accuracy_sd},
                              {"train", result.nb_selected.train_accuracy}};
    const std::string summary_path = (dir / ("set" + tag + ".summary.json")).string();
    indagg::write_file_atomic(summary_path, summary.dump(2) + "\n");

    Manifest manifest("experiment", argv);
    manifest.seed("dataset", config->dataset_seed);
    manifest.seed("split", config->split_seed);
    manifest.seed("forest", config->forest_seed);
    manifest.seed("sweep", config->sweep_seed);
    manifest.output(summary_path);
    manifest.write(summary_path);
    std::cout << summary.dump(2) << "\n";
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anomaly classification over aggregated binary indicators"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.footer(
      "Files: datasets are JSON Lines {id,label,change_point,shift_param,values[]};\n"
      "matrices are CSV with header signal_id,label,<indicator ids>; grids, splits,\n"
      "models and reports are JSON; rankings, sweeps and probability tables are CSV.\n"
      "See README.md for the exact schemas. Every command writes\n"
      "<output>.manifest.json with seeds and input/output digests.");
  const auto argv_copy = collect_argv(argc, argv);
  add_simulate(app, argv_copy);
  add_grid(app, argv_copy);
  add_featurize(app, argv_copy);
  add_split(app, argv_copy);
  add_rank(app, argv_copy);
  add_train(app, argv_copy);
  add_sweep(app, argv_copy);
  add_select(app, argv_copy);
  add_report(app, argv_copy);
  add_experiment(app, argv_copy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  } catch (const indagg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    // bad values reaching a library precondition (sizes, ranges) are input errors too
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
