#ifndef TREEQM_INSTANCE_IO_HPP_
#define TREEQM_INSTANCE_IO_HPP_

#include <filesystem>
#include <string_view>

#include "treeqm/instance.hpp"

namespace treeqm {

  // Instance files are JSON:
  //
  //   {"kind": "free", "rank": 2, "generators": ["x", "y"]}
  //   {"kind": "amalgam",
  //    "A": "sym:3", "B": "cyclic:4", "C": "cyclic:2",
  //    "embedA": {"0": "012", "1": "102"}, "embedB": {"0": "0", "1": "2"}}
  //
  // A, B, C are builtin names or {"elements": [...], "table": [[...], ...]}
  // with table entries given as element names. "generators" is optional.
  // All failures are reported as Error{ParseError} or the validation error
  // of the offending group / embedding.
  Instance parse_instance(std::string_view json_text);
  Instance load_instance(std::filesystem::path const& path);

}  // namespace treeqm

#endif  // TREEQM_INSTANCE_IO_HPP_
