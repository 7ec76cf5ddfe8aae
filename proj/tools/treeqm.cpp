// treeqm: median quasimorphisms of groups acting on trees.
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "treeqm/commands.hpp"

int main(int argc, char** argv) {
  using namespace treeqm;
  CLI::App app{"Median quasimorphisms for amalgams and free groups acting on trees"};
  app.require_subcommand(1);

  RunConfig   config;
  std::string instance;
  std::string view   = "suppressed";
  std::string root   = "A";
  std::string format = "json";
  std::string window = "orbit";
  std::string out;
  double      budget = static_cast<double>(config.budget);
  std::string cache_dir;
  bool        no_cache     = false;
  bool        large_families = false;
  std::size_t sample       = 0;

  std::map<std::string, std::string> const about{
      {"inspect", "tree statistics, orbit counts and double cosets"},
      {"classify", "run the case analysis and print the certificate"},
      {"qm", "evaluate the median quasimorphism on elements"},
      {"defect", "scan the defect over a ball"},
      {"witness", "build witness families and the independence matrix"}};
  for (auto const& [name, text] : about) {
    auto* sub = app.add_subcommand(name, text);
    sub->add_option("instance", instance, "instance JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--kmax", config.kmax, "largest window size searched")->capture_default_str();
    sub->add_option("--radius", config.radius, "ball radius")->capture_default_str();
    sub->add_option("--zmax", config.zmax, "largest power in the matrix")->capture_default_str();
    sub->add_option("--v0", config.words.v0, "word family base exponent factor")->capture_default_str();
    sub->add_option("--blocks", config.words.blocks, "blocks per family word")->capture_default_str();
    sub->add_option("--budget", budget, "node budget for enumerations")->capture_default_str();
    sub->add_option("--mode", view, "tree view")
        ->check(CLI::IsMember({"raw", "suppressed"}))->capture_default_str();
    sub->add_option("--root", root, "base vertex type")
        ->check(CLI::IsMember({"A", "B"}))->capture_default_str();
    sub->add_option("--threads", config.threads, "worker threads (0: all cores)");
    sub->add_option("--seed", config.seed, "seed for sampling")->capture_default_str();
    sub->add_option("--out", out, "write the report here instead of stdout");
    sub->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--segment", config.segment, "element g; the spec is the orbit of [v, gv]");
    sub->add_option("--window", window, "window mode for qm and defect")
        ->check(CLI::IsMember({"metric", "orbit"}))->capture_default_str();
    sub->add_option("--element", config.elements, "element to evaluate (repeatable)");
    sub->add_option("--count", config.count, "number of witness families")->capture_default_str();
    sub->add_option("--sample", sample, "defect: number of random pairs (0: all)");
    sub->add_option("--cache-dir", cache_dir, "orbit cache directory (default: TREEQM_CACHE)");
    sub->add_flag("--no-cache", no_cache, "do not read or write the orbit cache");
    sub->add_flag("--large-families", large_families,
                  "word families with v0 = blocks = 100 (exponent check relaxed)");
  }

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : exit_code::input;
  }
  if (budget < 1) {
    std::cerr << "--budget must be positive\n";
    return exit_code::input;
  }

  config.instance_path = instance;
  config.view          = view == "raw" ? ViewMode::raw : ViewMode::suppressed;
  config.root_b        = root == "B";
  config.format        = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  config.window        = window == "metric" ? WindowMode::metric : WindowMode::orbit;
  config.budget        = static_cast<std::size_t>(budget);
  config.use_cache     = !no_cache;
  if (!cache_dir.empty()) config.cache_dir = cache_dir;
  if (sample > 0) config.sample = sample;
  if (large_families) config.words = WordFamilyParams{100, 100, false};

  CommandResult const r = run_command(app.get_subcommands().front()->get_name(), config);
  if (out.empty()) {
    std::cout << r.text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!(f << r.text)) {
      std::cerr << "cannot write " << out << "\n";
      return exit_code::input;
    }
  }
  return r.exit_code;
}
