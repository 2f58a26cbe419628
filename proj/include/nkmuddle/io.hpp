#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nkmuddle/experiments.hpp"
#include "nkmuddle/landscape.hpp"
#include "nkmuddle/version.hpp"

namespace nkmuddle {

using Json = nlohmann::ordered_json;

// Fixed-width round-trip formatting; used for every double in CSV output so
// files are byte-stable across runs and worker counts.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- landscape JSON -------------------------------------------------------

inline Json landscape_to_json(const Landscape& land) {
  Json j;
  j["seed"] = land.seed;
  j["n"] = land.n;
  j["k"] = land.k;
  j["scheme"] = to_string(land.scheme);
  j["neighbors"] = land.neighbors;
  Json matrix = Json::array();
  for (std::uint64_t r = 0; r < land.rows(); ++r) {
    Json row = Json::array();
    for (std::uint32_t col = 0; col < land.n; ++col) row.push_back(land.tables[col][r]);
    matrix.push_back(std::move(row));
  }
  j["fitness_matrix"] = std::move(matrix);
  return j;
}

inline Landscape landscape_from_json(const Json& j) {
  try {
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto n = j.at("n").get<std::uint32_t>();
    const auto k = j.at("k").get<std::uint32_t>();
    const auto scheme = scheme_from_string(j.at("scheme").get<std::string>());
    auto neighbors = j.at("neighbors").get<std::vector<std::vector<std::uint32_t>>>();
    const auto matrix = j.at("fitness_matrix").get<std::vector<std::vector<double>>>();
    return landscape_from_parts(seed, n, k, scheme, std::move(neighbors), matrix);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed landscape document: ") + e.what());
  }
}

// ---- experiment spec JSON -------------------------------------------------

inline Json spec_to_json(const ExperimentSpec& spec) {
  Json j;
  j["n"] = spec.n;
  j["k_values"] = spec.k_values;
  Json algs = Json::array();
  for (const auto& alg : spec.algorithms) algs.push_back(alg.id);
  j["algorithms"] = std::move(algs);
  j["replications"] = spec.replications;
  j["budget"] = spec.budget.max_steps;
  j["master_seed"] = spec.master_seed;
  j["scheme"] = to_string(spec.scheme);
  return j;
}

// Documented defaults are filled in; unknown keys are rejected.
inline ExperimentSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment spec must be a JSON object");
  static const char* known[] = {"n",      "k_values",    "algorithms", "replications",
                                "budget", "master_seed", "scheme"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || key == name;
    if (!ok) throw std::invalid_argument("unknown key '" + key + "' in experiment spec");
  }
  for (const char* required : {"k_values", "algorithms", "master_seed"})
    if (!j.contains(required))
      throw std::invalid_argument(std::string("experiment spec is missing '") + required + "'");

  ExperimentSpec spec;
  try {
    spec.n = j.value("n", 20u);
    spec.k_values = j.at("k_values").get<std::vector<std::uint32_t>>();
    spec.replications = j.value("replications", 500u);
    spec.budget.max_steps = j.value("budget", 1000u);
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    spec.scheme = scheme_from_string(j.value("scheme", std::string("random")));
    for (const auto& item : j.at("algorithms"))
      spec.algorithms.push_back(parse_algorithm(item.get<std::string>()));
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed experiment spec: ") + e.what());
  }
  validate_spec(spec);
  return spec;
}

inline ExperimentSpec load_spec(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw std::invalid_argument("cannot parse '" + path + "': " + e.what());
  }
  return spec_from_json(j);
}

// ---- result emission ------------------------------------------------------

inline std::string records_to_csv(const std::vector<ReplicationRecord>& records) {
  std::string out =
      "replication,k,algorithm,landscape_seed,best_fitness,hamming,evaluations,steps,"
      "termination\n";
  for (const auto& r : records) {
    out += std::to_string(r.replication);
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += r.algorithm;
    out += ',';
    out += std::to_string(r.landscape_seed);
    out += ',';
    out += format_double(r.best_fitness);
    out += ',';
    out += std::to_string(r.hamming);
    out += ',';
    out += std::to_string(r.evaluations);
    out += ',';
    out += std::to_string(r.steps);
    out += ',';
    out += to_string(r.termination);
    out += '\n';
  }
  return out;
}

inline std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
  const bool has_norm = !rows.empty() && rows.front().has_norm;
  std::string out =
      "k,algorithm,count,mean_fitness,se_fitness,mean_hamming,se_hamming,mean_evaluations,"
      "se_evaluations";
  if (has_norm) out += ",mean_norm_fitness,se_norm_fitness";
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += r.algorithm;
    out += ',';
    out += std::to_string(r.count);
    for (double v : {r.mean_fitness, r.se_fitness, r.mean_hamming, r.se_hamming,
                     r.mean_evaluations, r.se_evaluations}) {
      out += ',';
      out += format_double(v);
    }
    if (has_norm) {
      out += ',';
      out += format_double(r.mean_norm_fitness);
      out += ',';
      out += format_double(r.se_norm_fitness);
    }
    out += '\n';
  }
  return out;
}

inline Json aggregates_to_json(const std::vector<AggregateRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["k"] = r.k;
    j["algorithm"] = r.algorithm;
    j["count"] = r.count;
    j["mean_fitness"] = r.mean_fitness;
    j["se_fitness"] = r.se_fitness;
    j["mean_hamming"] = r.mean_hamming;
    j["se_hamming"] = r.se_hamming;
    j["mean_evaluations"] = r.mean_evaluations;
    j["se_evaluations"] = r.se_evaluations;
    if (r.has_norm) {
      j["mean_norm_fitness"] = r.mean_norm_fitness;
      j["se_norm_fitness"] = r.se_norm_fitness;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

inline std::vector<AggregateRow> aggregates_from_json(const Json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("aggregates document must be a JSON array");
  std::vector<AggregateRow> rows;
  try {
    for (const auto& j : arr) {
      AggregateRow r;
      r.k = j.at("k").get<std::uint32_t>();
      r.algorithm = j.at("algorithm").get<std::string>();
      r.count = j.at("count").get<std::uint64_t>();
      r.mean_fitness = j.at("mean_fitness").get<double>();
      r.se_fitness = j.at("se_fitness").get<double>();
      r.mean_hamming = j.at("mean_hamming").get<double>();
      r.se_hamming = j.at("se_hamming").get<double>();
      r.mean_evaluations = j.at("mean_evaluations").get<double>();
      r.se_evaluations = j.at("se_evaluations").get<double>();
      if (j.contains("mean_norm_fitness")) {
        r.has_norm = true;
        r.mean_norm_fitness = j.at("mean_norm_fitness").get<double>();
        r.se_norm_fitness = j.value("se_norm_fitness", 0.0);
      }
      rows.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed aggregates document: ") + e.what());
  }
  return rows;
}

inline Json oracle_rows_to_json(const std::vector<OracleRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["replication"] = r.replication;
    j["k"] = r.k;
    j["landscape_seed"] = r.landscape_seed;
    j["global_max_fitness"] = r.global_max_fitness;
    j["local_optima_count"] = r.local_optima_count;
    j["global_max_config"] = r.global_max_config;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline std::string traces_to_csv(const std::vector<TraceBundle>& bundles) {
  std::string out =
      "replication,k,algorithm,step,proposal,accepted,current_fitness,best_fitness\n";
  for (const auto& bundle : bundles)
    for (const auto& row : bundle.rows) {
      out += std::to_string(bundle.replication);
      out += ',';
      out += std::to_string(bundle.k);
      out += ',';
      out += bundle.algorithm;
      out += ',';
      out += std::to_string(row.step);
      out += ',';
      out += row.proposal;
      out += ',';
      out += row.accepted ? '1' : '0';
      out += ',';
      out += format_double(row.current_fitness);
      out += ',';
      out += format_double(row.best_fitness);
      out += '\n';
    }
  return out;
}

// The only file that may carry nondeterministic content; wall time lives
// here, clearly labeled, and nowhere else.
inline Json experiment_metadata(const ExperimentSpec& spec, unsigned worker_count,
                                const RunOptions& options, double wall_time_seconds) {
  Json j;
  j["spec"] = spec_to_json(spec);
  j["version"] = std::string(kVersion);
  j["worker_count"] = worker_count;
  j["normalize"] = options.normalize;
  j["trace"] = options.capture_trace;
  j["wall_time_seconds"] = wall_time_seconds;
  return j;
}

}  // namespace nkmuddle
