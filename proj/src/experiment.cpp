#include "indagg/experiment.hpp"

#include "indagg/rng.hpp"

namespace indagg {

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::function<void(const std::string&)>& log) {
  const auto say = [&](const std::string& line) {
    if (log) log(line);
  };

  DatasetConfig dataset_config{config.variant, config.n_normal, config.n_per_anomaly,
                               config.dataset_seed};
  const std::vector<Signal> dataset = generate_dataset(dataset_config);
  say("simulated " + std::to_string(dataset.size()) + " signals (variant " +
      std::string(to_string(config.variant)) + ")");

  const IndicatorGrid grid = default_grid();
  const IndicatorMatrix matrix = featurize(dataset, grid, config.jobs);
  say("featurized " + std::to_string(matrix.rows()) + " x " + std::to_string(matrix.cols()));

  ExperimentResult result;
  SplitSpec split_spec{config.learn_per_class, config.test_subsets, config.subset_size,
                       config.split_seed};
  result.split = split(matrix.labels, split_spec);
  result.learn = select_rows(matrix, result.split.learn_rows);
  result.test = select_rows(matrix, result.split.test_rows);
  say("split: learn " + std::to_string(result.learn.rows()) + ", test " +
      std::to_string(result.test.rows()));

  {
    ForestParams params;
    params.n_trees = config.n_trees;
    params.seed = config.forest_seed;
    params.jobs = config.jobs;
    const ForestModel forest = rf_train(result.learn, params);
    result.rf_full = evaluate(forest, result.learn, result.test, result.split.subsets);
    result.rf_full.oob_accuracy = forest.oob_accuracy;
    say("forest, all indicators: test mean " + std::to_string(result.rf_full.test_mean_accuracy) +
        ", oob " + std::to_string(forest.oob_accuracy));
  }
  {
    const NaiveBayesModel nb = nb_train(result.learn);
    result.nb_full = evaluate(nb, result.learn, result.test, result.split.subsets);
    say("naive Bayes, all indicators: test mean " +
        std::to_string(result.nb_full.test_mean_accuracy));
  }

  result.ranking = mrmr_rank(result.learn, static_cast<std::size_t>(config.rank_count),
                             config.jobs);
  say("ranked top " + std::to_string(result.ranking.size()) + " indicators");

  SweepParams sweep_params;
  sweep_params.n_trees = config.n_trees;
  sweep_params.seed = config.sweep_seed;
  sweep_params.jobs = config.jobs;
  result.nb_sweep = forward_sweep(result.learn, result.test, result.split.subsets, result.ranking,
                                  config.rank_count, ClassifierKind::naive_bayes, sweep_params);
  say("naive Bayes sweep done");
  result.rf_sweep = forward_sweep(result.learn, result.test, result.split.subsets, result.ranking,
                                  config.rank_count, ClassifierKind::random_forest, sweep_params);
  say("forest sweep done");

  result.selected_m = select_optimal(result.nb_sweep, config.select_max);
  {
    const std::span<const std::string> ids(result.ranking.ordered_ids.data(),
                                           static_cast<std::size_t>(result.selected_m));
    const IndicatorMatrix learn_m = select_columns(result.learn, ids);
    const IndicatorMatrix test_m = select_columns(result.test, ids);
    result.nb_selected_model = nb_train(learn_m);
    result.nb_selected =
        evaluate(result.nb_selected_model, learn_m, test_m, result.split.subsets);
    say("selected m=" + std::to_string(result.selected_m) + ": test mean " +
        std::to_string(result.nb_selected.test_mean_accuracy));
  }
  {
    const int top = std::min<int>(config.report_top, static_cast<int>(result.ranking.size()));
    const std::span<const std::string> ids(result.ranking.ordered_ids.data(),
                                           static_cast<std::size_t>(top));
    const IndicatorMatrix learn_top = select_columns(result.learn, ids);
    result.nb_top_model = nb_train(learn_top);
    result.top_table = conditional_probability_report(result.nb_top_model, ids);
  }
  return result;
}

}  // namespace indagg
