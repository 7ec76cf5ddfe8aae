#include "treeqm/orbit_cache.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>

#include "treeqm/error.hpp"

namespace treeqm {

  namespace {
    template <typename T>
    void put(std::ostream& os, T x) {
      unsigned char buf[sizeof(T)];
      auto          u = static_cast<std::make_unsigned_t<T>>(x);
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        buf[i] = static_cast<unsigned char>(u >> (8 * i));
      }
      os.write(reinterpret_cast<char const*>(buf), sizeof(T));
    }

    template <typename T>
    bool get(std::istream& is, T& x) {
      unsigned char buf[sizeof(T)];
      if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
        return false;
      }
      std::make_unsigned_t<T> u = 0;
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        u |= static_cast<std::make_unsigned_t<T>>(buf[i]) << (8 * i);
      }
      x = static_cast<T>(u);
      return true;
    }

    void put_vertex(std::ostream& os, Vertex const& v) {
      put<std::uint32_t>(os, static_cast<std::uint32_t>(v.steps.size()));
      for (auto s : v.steps) {
        put<std::int32_t>(os, s);
      }
    }

    bool get_vertex(std::istream& is, Vertex& v) {
      std::uint32_t n = 0;
      if (!get(is, n) || n > (1u << 24)) {
        return false;
      }
      v.steps.resize(n);
      for (auto& s : v.steps) {
        if (!get(is, s)) {
          return false;
        }
      }
      return true;
    }
  }  // namespace

  OrbitCache::OrbitCache(std::filesystem::path directory) : _dir(std::move(directory)) {}

  std::filesystem::path OrbitCache::default_directory() {
    if (char const* env = std::getenv("TREEQM_CACHE"); env != nullptr && *env != '\0') {
      return env;
    }
    if (char const* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
      return std::filesystem::path(xdg) / "treeqm";
    }
    if (char const* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
      return std::filesystem::path(home) / ".cache" / "treeqm";
    }
    return ".treeqm-cache";
  }

  std::filesystem::path OrbitCache::file_for(TreeView const& view,
                                             std::size_t     n,
                                             WindowMode      mode) const {
    std::string name = "orbits-" + view.instance().hash_hex() + "-"
                       + std::string(to_string(view.mode())) + "-"
                       + std::string(to_string(mode)) + "-" + std::to_string(n) + ".bin";
    return _dir / name;
  }

  std::optional<OrbitTable> OrbitCache::load(TreeView const& view,
                                             std::size_t     n,
                                             WindowMode      mode) const {
    std::ifstream is(file_for(view, n, mode), std::ios::binary);
    if (!is) {
      return std::nullopt;
    }
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TQMO", 4) != 0) {
      return std::nullopt;
    }
    std::uint32_t version = 0, nn = 0;
    std::uint64_t hash = 0, count = 0;
    std::uint8_t  vm = 0, wm = 0;
    if (!get(is, version) || version != kVersion || !get(is, hash)
        || hash != view.instance().hash() || !get(is, vm)
        || vm != static_cast<std::uint8_t>(view.mode()) || !get(is, wm)
        || wm != static_cast<std::uint8_t>(mode) || !get(is, nn) || nn != n
        || !get(is, count)) {
      return std::nullopt;
    }
    OrbitTable table;
    for (std::uint64_t r = 0; r < count; ++r) {
      std::uint32_t len = 0;
      if (!get(is, len) || len > (1u << 24)) {
        return std::nullopt;
      }
      OrbitKey key;
      key.text.resize(len);
      if (!is.read(key.text.data(), len)) {
        return std::nullopt;
      }
      OrientedPath p;
      if (!get_vertex(is, p.from) || !get_vertex(is, p.to)) {
        return std::nullopt;
      }
      table.emplace(std::move(key), std::move(p));
    }
    return table;
  }

  void OrbitCache::store(TreeView const&   view,
                         std::size_t       n,
                         WindowMode        mode,
                         OrbitTable const& table) const {
    std::error_code ec;
    std::filesystem::create_directories(_dir, ec);
    auto const target = file_for(view, n, mode);
    auto       tmp    = target;
    tmp += ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) {
        throw Error(ErrorKind::CacheError, "cannot write " + tmp.string());
      }
      os.write("TQMO", 4);
      put<std::uint32_t>(os, kVersion);
      put<std::uint64_t>(os, view.instance().hash());
      put<std::uint8_t>(os, static_cast<std::uint8_t>(view.mode()));
      put<std::uint8_t>(os, static_cast<std::uint8_t>(mode));
      put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
      put<std::uint64_t>(os, table.size());
      for (auto const& [key, p] : table) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(key.text.size()));
        os.write(key.text.data(), static_cast<std::streamsize>(key.text.size()));
        put_vertex(os, p.from);
        put_vertex(os, p.to);
      }
      if (!os) {
        throw Error(ErrorKind::CacheError, "short write to " + tmp.string());
      }
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
      throw Error(ErrorKind::CacheError, "cannot rename " + tmp.string() + ": " + ec.message());
    }
  }

}  // namespace treeqm
