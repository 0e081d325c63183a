#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gibbs/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weighted preimage equidistribution experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gibbs::cli::kVersion);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool force = false;

  for (const auto& kind : gibbs::cli::experiment_kinds()) {
    auto* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    sub->add_option("--config", config_path, "JSON config or a previous manifest.json")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads for tree expansion")->check(CLI::PositiveNumber);
    sub->add_flag("--force", force, "lift the enumeration cap");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gibbs::cli::kBadConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  gibbs::cli::Overrides ov;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--threads")) ov.threads = threads;
  ov.force = force;

  nlohmann::ordered_json cfg;
  try {
    std::ifstream in(config_path);
    cfg = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return gibbs::cli::kBadConfig;
  }
  return gibbs::cli::run(cfg, sub->get_name(), out_dir, ov);
}
