#ifndef TREEQM_ORBIT_CACHE_HPP_
#define TREEQM_ORBIT_CACHE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "treeqm/tree.hpp"

namespace treeqm {

  // On-disk orbit tables, one file per (instance hash, view, window mode, n).
  //
  // Layout: "TQMO", u32 version, u64 instance hash, u8 view, u8 mode, u32 n,
  // u64 record count, then per record: u32 key length, key bytes, and for
  // each endpoint u32 step count followed by i32 steps. Little endian.
  // Files whose header does not match are ignored and rewritten.
  class OrbitCache {
   public:
    static constexpr std::uint32_t kVersion = 1;

    explicit OrbitCache(std::filesystem::path directory);

    // TREEQM_CACHE if set, else $XDG_CACHE_HOME/treeqm or ~/.cache/treeqm.
    static std::filesystem::path default_directory();

    [[nodiscard]] std::filesystem::path const& directory() const noexcept {
      return _dir;
    }
    [[nodiscard]] std::filesystem::path file_for(TreeView const& view,
                                                 std::size_t     n,
                                                 WindowMode      mode) const;

    [[nodiscard]] std::optional<OrbitTable> load(TreeView const& view,
                                                 std::size_t     n,
                                                 WindowMode      mode) const;
    // Throws Error{CacheError} if the file cannot be written.
    void store(TreeView const&   view,
               std::size_t       n,
               WindowMode        mode,
               OrbitTable const& table) const;

   private:
    std::filesystem::path _dir;
  };

}  // namespace treeqm

#endif  // TREEQM_ORBIT_CACHE_HPP_
