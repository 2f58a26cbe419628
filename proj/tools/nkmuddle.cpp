#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nkmuddle/io.hpp"
#include "nkmuddle/oracle.hpp"
#include "nkmuddle/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace nkmuddle;

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("NK_MUDDLE_OUT_DIR");
  return env && *env ? env : ".";
}

void write_and_report(const fs::path& path, const std::string& content) {
  write_text_file(path.string(), content);
  std::cout << "wrote " << path.string() << "\n";
}

int cmd_run(const std::string& spec_path, unsigned workers, std::uint32_t replications_override,
            const std::string& out_dir, bool normalize, bool trace) {
  ExperimentSpec spec = load_spec(spec_path);
  if (replications_override > 0) spec.replications = replications_override;
  fs::create_directories(out_dir);

  RunOptions options;
  options.normalize = normalize;
  options.capture_trace = trace;

  const auto start = std::chrono::steady_clock::now();
  const auto progress = [](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r%zu/%zu replications", done, total);
    if (done == total) std::fputc('\n', stderr);
    std::fflush(stderr);
  };
  const ExperimentResult result = run_experiment(spec, workers, options, progress);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir(out_dir);
  write_and_report(dir / "records.csv", records_to_csv(result.records));
  write_and_report(dir / "aggregates.csv", aggregates_to_csv(result.aggregates));
  write_and_report(dir / "aggregates.json", aggregates_to_json(result.aggregates).dump(2) + "\n");
  if (normalize)
    write_and_report(dir / "oracle.json", oracle_rows_to_json(result.oracle_rows).dump(2) + "\n");
  if (trace) write_and_report(dir / "trace.csv", traces_to_csv(result.traces));
  write_and_report(dir / "metadata.json",
                   experiment_metadata(spec, workers, options, wall).dump(2) + "\n");
  return 0;
}

int cmd_plot(const std::string& input, const std::string& metric, const std::string& series_csv,
             const std::string& output) {
  Json doc;
  try {
    doc = Json::parse(read_text_file(input));
  } catch (const Json::exception& e) {
    throw std::invalid_argument("cannot parse '" + input + "': " + e.what());
  }
  PlotSpec plot;
  plot.metric = metric;
  if (!series_csv.empty())
    for (const auto& id : detail::split(series_csv, ','))
      if (!id.empty()) plot.series.push_back(id);
  write_and_report(output, render_plot_svg(aggregates_from_json(doc), plot));
  return 0;
}

int cmd_oracle(std::uint64_t seed, std::uint32_t n, std::uint32_t k, const std::string& scheme,
               const std::string& out) {
  const Landscape land = build_landscape(seed, n, k, scheme_from_string(scheme));
  const OracleReport report = brute_force_optimum(land);
  Json j;
  j["seed"] = seed;
  j["n"] = n;
  j["k"] = k;
  j["scheme"] = scheme;
  j["global_max_fitness"] = report.global_max_fitness;
  j["global_max_config"] = config_to_string(report.global_max_config);
  j["local_optima_count"] = report.local_optima_count;
  j["n_enumerated"] = report.n_enumerated;
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_and_report(out, j.dump(2) + "\n");
  return 0;
}

int cmd_landscape_export(std::uint64_t seed, std::uint32_t n, std::uint32_t k,
                         const std::string& scheme, const std::string& out) {
  const Landscape land = build_landscape(seed, n, k, scheme_from_string(scheme));
  const std::string doc = landscape_to_json(land).dump(2) + "\n";
  if (out.empty())
    std::cout << doc;
  else
    write_and_report(out, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NK fitness landscape search: steepest ascent, centralized search,\n"
               "parallel updating and muddling through, with a replication harness."};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment spec, write records and aggregates");
  std::string spec_path;
  run->add_option("spec", spec_path, "experiment spec JSON file")->required();
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  run->add_option("--workers", workers, "worker thread count");
  std::uint32_t replications_override = 0;
  run->add_option("--replications", replications_override, "override the spec's replication count");
  std::string out_dir = default_out_dir();
  run->add_option("--out-dir", out_dir, "output directory (default $NK_MUDDLE_OUT_DIR or '.')");
  bool normalize = false;
  run->add_flag("--normalize", normalize,
                "attach brute-force oracle reports and normalized fitness (n <= 24)");
  bool trace = false;
  run->add_flag("--trace", trace, "emit per-step trace rows to trace.csv");

  auto* plot = app.add_subcommand("plot", "render an SVG chart from an aggregates JSON file");
  std::string plot_input, plot_metric = "fitness", plot_series, plot_out;
  plot->add_option("--input", plot_input, "aggregates JSON file")->required();
  plot->add_option("--metric", plot_metric, "fitness | hamming | evaluations");
  plot->add_option("--series", plot_series, "comma-separated algorithm ids (default: all)");
  plot->add_option("--out", plot_out, "output SVG path")->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force report for one generated landscape");
  std::uint64_t seed = 0;
  std::uint32_t n = 20, k = 0;
  std::string scheme = "random", oracle_out;
  oracle->add_option("--seed", seed, "landscape seed")->required();
  oracle->add_option("--n", n, "number of nodes")->required();
  oracle->add_option("--k", k, "interaction partners per node")->required();
  oracle->add_option("--scheme", scheme, "random | adjacent");
  oracle->add_option("--out", oracle_out, "output path (default: stdout)");

  auto* landscape_cmd = app.add_subcommand("landscape", "landscape utilities");
  landscape_cmd->require_subcommand(1);
  auto* exp = landscape_cmd->add_subcommand("export", "write a generated instance as JSON");
  std::uint64_t ls_seed = 0;
  std::uint32_t ls_n = 20, ls_k = 0;
  std::string ls_scheme = "random", ls_out;
  exp->add_option("--seed", ls_seed, "landscape seed")->required();
  exp->add_option("--n", ls_n, "number of nodes")->required();
  exp->add_option("--k", ls_k, "interaction partners per node")->required();
  exp->add_option("--scheme", ls_scheme, "random | adjacent");
  exp->add_option("--out", ls_out, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return cmd_run(spec_path, workers, replications_override, out_dir, normalize, trace);
    if (*plot) return cmd_plot(plot_input, plot_metric, plot_series, plot_out);
    if (*oracle) return cmd_oracle(seed, n, k, scheme, oracle_out);
    if (*exp) return cmd_landscape_export(ls_seed, ls_n, ls_k, ls_scheme, ls_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
