#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "indagg/eval.hpp"
#include "indagg/sim.hpp"

namespace indagg {

/// Full single-variant protocol: simulate, featurize with the default grid,
/// balanced split, full-grid forest and Naive Bayes, mRMR ranking on the
/// learning set, forward sweeps for both classifiers, and the selected-subset
/// Naive Bayes with its conditional-probability table.
struct ExperimentConfig {
  Variant variant = Variant::a;
  int n_normal = 3000;
  int n_per_anomaly = 1000;
  std::uint64_t dataset_seed = 11;
  std::uint64_t split_seed = 33;
  std::uint64_t forest_seed = 44;
  std::uint64_t sweep_seed = 55;
  int learn_per_class = 250;
  int test_subsets = 10;
  int subset_size = 500;
  int rank_count = 100;   // indicators to rank / sweep over
  int select_max = 30;    // cap for the selected subset size
  int report_top = 23;    // rows of the conditional-probability table
  int n_trees = 500;
  int jobs = 1;
};

struct ExperimentResult {
  IndicatorMatrix learn;
  IndicatorMatrix test;
  SplitResult split;
  RankingResult ranking;
  EvalReport rf_full;
  EvalReport nb_full;
  SweepResult nb_sweep;
  SweepResult rf_sweep;
  int selected_m = 0;
  EvalReport nb_selected;
  NaiveBayesModel nb_selected_model;
  ConditionalProbabilityTable top_table;  // first report_top ranked indicators
  NaiveBayesModel nb_top_model;           // trained on those indicators
};

/// `log`, when set, receives one line per finished stage.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::function<void(const std::string&)>& log = {});

}  // namespace indagg
