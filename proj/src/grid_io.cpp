#include "indagg/grid_io.hpp"

#include <unordered_set>

#include <json.hpp>

#include "indagg/io_util.hpp"

namespace indagg {

namespace {

nlohmann::json spec_to_json(const IndicatorSpec& spec) {
  nlohmann::json doc;
  doc["test"] = to_string(spec.test);
  switch (spec.window) {
    case WindowSize::w30: doc["window"] = 30; break;
    case WindowSize::w50: doc["window"] = 50; break;
    case WindowSize::adaptive: doc["window"] = "adaptive"; break;
  }
  doc["level"] = spec.level;
  switch (spec.family.kind) {
    case FamilyKind::rate:
      doc["family"] = "rate";
      doc["beta"] = spec.family.beta;
      break;
    case FamilyKind::longest_run:
      doc["family"] = "longest_run";
      doc["beta"] = spec.family.beta;
      break;
    case FamilyKind::k_of_n:
      doc["family"] = "k_of_n";
      doc["k"] = spec.family.k;
      doc["n_windows"] = spec.family.n_windows;
      break;
  }
  switch (spec.overlap) {
    case OverlapKind::full: doc["overlap"] = "full"; break;
    case OverlapKind::five: doc["overlap"] = 5; break;
    case OverlapKind::ten: doc["overlap"] = 10; break;
  }
  doc["smoothed"] = spec.smoothed;
  return doc;
}

IndicatorSpec spec_from_json(const nlohmann::json& doc, const std::string& where) {
  IndicatorSpec spec;
  spec.test = test_from_string(doc.at("test").get<std::string>());

  const auto& window = doc.at("window");
  if (window.is_string() && window.get<std::string>() == "adaptive") {
    spec.window = WindowSize::adaptive;
  } else if (window.is_number_integer() && window.get<int>() == 30) {
    spec.window = WindowSize::w30;
  } else if (window.is_number_integer() && window.get<int>() == 50) {
    spec.window = WindowSize::w50;
  } else {
    throw InputError(where + ": window must be 30, 50 or \"adaptive\"");
  }

  spec.level = doc.at("level").get<double>();
  if (!(spec.level > 0.0 && spec.level < 1.0)) {
    throw InputError(where + ": level must be in (0, 1)");
  }

  const std::string family = doc.at("family").get<std::string>();
  if (family == "rate" || family == "longest_run") {
    spec.family.kind = family == "rate" ? FamilyKind::rate : FamilyKind::longest_run;
    spec.family.beta = doc.at("beta").get<double>();
    if (!(spec.family.beta > 0.0 && spec.family.beta <= 1.0)) {
      throw InputError(where + ": beta must be in (0, 1]");
    }
  } else if (family == "k_of_n") {
    spec.family.kind = FamilyKind::k_of_n;
    spec.family.k = doc.at("k").get<int>();
    spec.family.n_windows = doc.at("n_windows").get<int>();
    if (spec.family.k < 1 || spec.family.k > spec.family.n_windows) {
      throw InputError(where + ": need 1 <= k <= n_windows");
    }
  } else {
    throw InputError(where + ": unknown family '" + family + "'");
  }

  const auto& overlap = doc.at("overlap");
  if (overlap.is_string() && overlap.get<std::string>() == "full") {
    spec.overlap = OverlapKind::full;
  } else if (overlap.is_number_integer() && overlap.get<int>() == 5) {
    spec.overlap = OverlapKind::five;
  } else if (overlap.is_number_integer() && overlap.get<int>() == 10) {
    spec.overlap = OverlapKind::ten;
  } else {
    throw InputError(where + ": overlap must be \"full\", 5 or 10");
  }

  spec.smoothed = doc.at("smoothed").get<bool>();
  return spec;
}

}  // namespace

void write_grid_json(const std::filesystem::path& path, const IndicatorGrid& grid) {
  nlohmann::json doc;
  nlohmann::json specs = nlohmann::json::array();
  for (const auto& spec : grid.specs) specs.push_back(spec_to_json(spec));
  doc["specs"] = std::move(specs);
  write_file_atomic(path, doc.dump(1) + "\n");
}

IndicatorGrid read_grid_json(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw InputError(path.string() + ": invalid JSON");
  IndicatorGrid grid;
  try {
    const auto& specs = doc.at("specs");
    std::size_t i = 0;
    for (const auto& spec_doc : specs) {
      grid.specs.push_back(
          spec_from_json(spec_doc, path.string() + ": specs[" + std::to_string(i) + "]"));
      ++i;
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  if (grid.specs.empty()) throw InputError(path.string() + ": grid has no specs");
  std::unordered_set<std::string> seen;
  for (const auto& spec : grid.specs) {
    if (!seen.insert(spec.id()).second) {
      throw InputError(path.string() + ": duplicate indicator id " + spec.id());
    }
  }
  return grid;
}

}  // namespace indagg
