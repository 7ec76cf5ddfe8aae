#ifndef TREEQM_COMMANDS_HPP_
#define TREEQM_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "treeqm/tree.hpp"
#include "treeqm/witness.hpp"

namespace treeqm {

  enum class OutputFormat { json, csv };

  struct RunConfig {
    std::filesystem::path instance_path;
    std::size_t           kmax   = 8;
    std::size_t           radius = 2;
    std::size_t           zmax   = 4;
    WordFamilyParams      words;
    std::size_t           budget = kDefaultBudget;
    ViewMode              view   = ViewMode::suppressed;
    // base vertex [B] instead of [A]
    bool                  root_b = false;
    // 0: hardware concurrency
    std::size_t           threads = 0;
    std::uint64_t         seed    = 0;
    OutputFormat          format  = OutputFormat::json;
    bool                  use_cache = true;
    // unset: OrbitCache::default_directory()
    std::optional<std::filesystem::path> cache_dir;

    // qm / defect: s = [v, g v] for g = segment, else the first o-edge at v
    std::optional<std::string> segment;
    WindowMode                 window = WindowMode::orbit;
    // qm: elements to evaluate, else the ball of the given radius
    std::vector<std::string>   elements;
    // defect: scan this many random pairs instead of all
    std::optional<std::size_t> sample;
    // witness: number of families
    std::size_t                count = 2;
  };

  struct CommandResult {
    std::string text;
    int         exit_code = 0;
  };

  namespace exit_code {
    inline constexpr int ok           = 0;
    inline constexpr int fail         = 2;
    inline constexpr int inconclusive = 3;
    inline constexpr int input        = 4;
  }  // namespace exit_code

  // Each command returns the report text; library errors are caught and
  // turned into an error report with the matching exit code.
  CommandResult cmd_inspect(RunConfig const& config);
  CommandResult cmd_classify(RunConfig const& config);
  CommandResult cmd_qm(RunConfig const& config);
  CommandResult cmd_defect(RunConfig const& config);
  CommandResult cmd_witness(RunConfig const& config);

  // Dispatch by name; unknown names give exit_code::input.
  CommandResult run_command(std::string const& name, RunConfig const& config);

}  // namespace treeqm

#endif  // TREEQM_COMMANDS_HPP_
