#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stochform/app/config.hpp"
#include "stochform/app/experiments.hpp"
#include "stochform/app/suite.hpp"
#include "stochform/parallel.hpp"
#include "stochform/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stochform;
using namespace stochform::app;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriteriaFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;
constexpr const char* kVersion = "0.1.0";

struct Flags {
  std::string config;
  unsigned threads = 1;
  bool quick = false;
  std::string out;
  std::string convention;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
}

void write_artifacts(const fs::path& dir, const ExperimentConfig& cfg, const std::vector<Artifact>& arts,
                     const std::string& prefix) {
  for (const auto& a : arts) {
    if (cfg.write_csv) {
      std::ofstream os(dir / (prefix + a.stem + ".csv"), std::ios::binary);
      write_csv(os, a.table);
    }
    if (cfg.write_plots && a.plot) write_text(dir / (prefix + a.stem + ".svg"), render_svg(a.table, *a.plot));
  }
}

int run(const std::string& subcommand, const Flags& flags) {
  ExperimentConfig cfg;
  bool both = false;
  try {
    if (!flags.config.empty()) {
      cfg = load_config(flags.config);
      if (subcommand != "run" && cfg.experiment != subcommand)
        throw ConfigError("config describes '" + cfg.experiment + "' but the subcommand is '" + subcommand + "'");
    } else {
      if (subcommand == "run") throw ConfigError("run requires --config");
      cfg = parse_config(default_config(subcommand));
    }
    if (!flags.out.empty()) cfg.output_dir = flags.out;
    if (flags.quick) cfg = apply_quick(cfg);
    if (flags.convention == "both")
      both = cfg.experiment != "paper-suite";
    else if (!flags.convention.empty())
      cfg.diffusion.convention = parse_convention(flags.convention);
    resolve_names(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }

  const unsigned threads = resolve_threads(flags.threads);
  RunOptions opts{threads, flags.quick, {}};
  opts.progress = [](const std::string& line) { std::cout << line << std::endl; };
  const auto start = std::chrono::steady_clock::now();
  try {
    json result;
    json extra = json::object();
    bool ok = true;
    std::vector<std::pair<std::string, ExperimentResult>> runs;
    if (both) {
      for (Convention c : {Convention::Half, Convention::Unit}) {
        ExperimentConfig one = cfg;
        one.diffusion.convention = c;
        runs.emplace_back(to_string(c) + "_", run_experiment(one, opts));
      }
      result = {{"half", runs[0].second.result}, {"unit", runs[1].second.result}};
    } else {
      runs.emplace_back("", run_experiment(cfg, opts));
      result = runs[0].second.result;
      extra = runs[0].second.meta;
    }
    for (const auto& [_, r] : runs) ok = ok && r.ok;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json config = cfg.to_json();
    config["output"].erase("dir");
    if (both) config["diffusion"]["convention"] = "both";
    const json report = {{"schema_version", kSchemaVersion},
                         {"experiment", cfg.experiment},
                         {"base_seed", cfg.ensemble.base_seed},
                         {"quick", flags.quick},
                         {"config", config},
                         {"result", result}};
    json meta = {{"schema_version", kSchemaVersion},
                 {"tool", "stochform"},
                 {"version", kVersion},
                 {"compiler", __VERSION__},
                 {"rng", std::string(kRngAlgorithm)},
                 {"base_seed", cfg.ensemble.base_seed},
                 {"convention", both ? std::string("both") : to_string(cfg.diffusion.convention)},
                 {"threads", threads},
                 {"timing", {{"wall_seconds", seconds}}}};
    meta["timing"].update(extra);

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_text(dir / "report.json", report.dump(2) + "\n");
    write_text(dir / "meta.json", meta.dump(2) + "\n");
    for (const auto& [prefix, r] : runs) write_artifacts(dir, cfg, r.artifacts, prefix);
    std::cout << "wrote " << (dir / "report.json").string() << '\n';
    return ok ? kExitOk : kExitCriteriaFailed;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic 1-form experiments on the torus and spheres"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "JSON experiment config");
  app.add_option("--threads", flags.threads, "worker threads, 0 = all cores");
  app.add_flag("--quick", flags.quick, "reduced ensembles (at most 500 paths)");
  app.add_option("--out", flags.out, "output directory (overrides output.dir)");
  app.add_option("--convention", flags.convention, "generator convention")
      ->check(CLI::IsMember({"half", "unit", "both"}));

  std::vector<std::string> names = experiment_kinds();
  names.push_back("run");
  for (const auto& n : names) {
    auto* sub = app.add_subcommand(n, n == "run" ? "run the experiment named in --config" : "run " + n);
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  return run(subcommand, flags);
}
