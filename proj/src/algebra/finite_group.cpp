#include "treeqm/finite_group.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include "treeqm/error.hpp"

namespace treeqm {

  std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
      case ErrorKind::NotLatinSquare: return "NotLatinSquare";
      case ErrorKind::NoIdentity: return "NoIdentity";
      case ErrorKind::NonAssociative: return "NonAssociative";
      case ErrorKind::NotASubgroup: return "NotASubgroup";
      case ErrorKind::InvalidEmbedding: return "InvalidEmbedding";
      case ErrorKind::ImproperAmalgam: return "ImproperAmalgam";
      case ErrorKind::UnknownLetter: return "UnknownLetter";
      case ErrorKind::ParseError: return "ParseError";
      case ErrorKind::InvalidPath: return "InvalidPath";
      case ErrorKind::DegenerateTree: return "DegenerateTree";
      case ErrorKind::EllipticElement: return "EllipticElement";
      case ErrorKind::EllipticProduct: return "EllipticProduct";
      case ErrorKind::NoOrbitVertexOnAxis: return "NoOrbitVertexOnAxis";
      case ErrorKind::PreconditionViolated: return "PreconditionViolated";
      case ErrorKind::ResourceLimit: return "ResourceLimit";
      case ErrorKind::Inconclusive: return "Inconclusive";
      case ErrorKind::RealizationFailed: return "RealizationFailed";
      case ErrorKind::ParamsTooSmall: return "ParamsTooSmall";
      case ErrorKind::UndefinedInverseLabel: return "UndefinedInverseLabel";
      case ErrorKind::CacheError: return "CacheError";
    }
    return "Unknown";
  }

  FiniteGroup FiniteGroup::from_table(std::vector<std::string>        elements,
                                      std::vector<std::vector<int>> const& table) {
    std::size_t const n = elements.size();
    if (n == 0) {
      throw Error(ErrorKind::NoIdentity, "empty group");
    }
    if (table.size() != n) {
      throw Error(ErrorKind::NotLatinSquare,
                  "table has " + std::to_string(table.size()) + " rows, expected "
                      + std::to_string(n));
    }
    {
      std::set<std::string> seen(elements.begin(), elements.end());
      if (seen.size() != n) {
        throw Error(ErrorKind::ParseError, "duplicate element names");
      }
    }
    FiniteGroup g;
    g._names = std::move(elements);
    g._table.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (table[i].size() != n) {
        throw Error(ErrorKind::NotLatinSquare,
                    "row " + g._names[i] + " has wrong length");
      }
      std::vector<bool> row_seen(n, false);
      for (std::size_t j = 0; j < n; ++j) {
        int const x = table[i][j];
        if (x < 0 || static_cast<std::size_t>(x) >= n) {
          throw Error(ErrorKind::NotLatinSquare,
                      "row " + g._names[i] + " has an out-of-range entry");
        }
        if (row_seen[static_cast<std::size_t>(x)]) {
          throw Error(ErrorKind::NotLatinSquare,
                      "row " + g._names[i] + " repeats " + g._names[x]);
        }
        row_seen[static_cast<std::size_t>(x)] = true;
        g._table[i * n + j] = x;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<bool> col_seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        auto const x = static_cast<std::size_t>(g._table[i * n + j]);
        if (col_seen[x]) {
          throw Error(ErrorKind::NotLatinSquare,
                      "column " + g._names[j] + " repeats " + g._names[x]);
        }
        col_seen[x] = true;
      }
    }
    // identity: e*x = x*e = x for all x
    std::optional<int> identity;
    for (std::size_t e = 0; e < n && !identity; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) {
        ok = g._table[e * n + x] == static_cast<int>(x)
             && g._table[x * n + e] == static_cast<int>(x);
      }
      if (ok) {
        identity = static_cast<int>(e);
      }
    }
    if (!identity) {
      throw Error(ErrorKind::NoIdentity, "no two-sided identity in table");
    }
    g._identity = *identity;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        auto const xy = static_cast<std::size_t>(g._table[x * n + y]);
        for (std::size_t z = 0; z < n; ++z) {
          auto const yz = static_cast<std::size_t>(g._table[y * n + z]);
          if (g._table[xy * n + z] != g._table[x * n + yz]) {
            throw Error(ErrorKind::NonAssociative,
                        "(" + g._names[x] + "*" + g._names[y] + ")*" + g._names[z]
                            + " != " + g._names[x] + "*(" + g._names[y] + "*"
                            + g._names[z] + ")");
          }
        }
      }
    }
    g._inverse.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (g._table[x * n + y] == g._identity) {
          g._inverse[x] = static_cast<int>(y);
          break;
        }
      }
    }
    return g;
  }

  FiniteGroup FiniteGroup::cyclic(int n) {
    if (n < 1) {
      throw Error(ErrorKind::ParseError, "cyclic group order must be positive");
    }
    std::vector<std::string>      names;
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      names.push_back(std::to_string(i));
      for (int j = 0; j < n; ++j) {
        table[static_cast<std::size_t>(i)].push_back((i + j) % n);
      }
    }
    return from_table(std::move(names), table);
  }

  FiniteGroup FiniteGroup::symmetric(int n) {
    if (n < 1 || n > 6) {
      throw Error(ErrorKind::ParseError, "sym:N supports 1 <= N <= 6");
    }
    std::vector<std::vector<int>> perms;
    std::vector<int>              p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    std::vector<std::string> names;
    for (auto const& q : perms) {
      std::string s;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (n > 9 && i > 0) {
          s += '.';
        }
        s += std::to_string(q[i]);
      }
      names.push_back(std::move(s));
    }
    auto index_of = [&perms](std::vector<int> const& q) {
      return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q)
                              - perms.begin());
    };
    std::vector<std::vector<int>> table(perms.size());
    for (std::size_t i = 0; i < perms.size(); ++i) {
      for (std::size_t j = 0; j < perms.size(); ++j) {
        std::vector<int> r(static_cast<std::size_t>(n));
        for (std::size_t x = 0; x < r.size(); ++x) {
          r[x] = perms[i][static_cast<std::size_t>(perms[j][x])];
        }
        table[i].push_back(index_of(r));
      }
    }
    return from_table(std::move(names), table);
  }

  FiniteGroup FiniteGroup::builtin(std::string const& spec) {
    auto const colon = spec.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorKind::ParseError, "unknown builtin group '" + spec + "'");
    }
    std::string const family = spec.substr(0, colon);
    std::string const arg    = spec.substr(colon + 1);
    int               n      = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw Error(ErrorKind::ParseError, "bad builtin group order in '" + spec + "'");
    }
    if (family == "cyclic") {
      return cyclic(n);
    }
    if (family == "sym") {
      return symmetric(n);
    }
    throw Error(ErrorKind::ParseError, "unknown builtin group '" + spec + "'");
  }

  std::optional<int> FiniteGroup::find(std::string const& name) const {
    auto it = std::find(_names.begin(), _names.end(), name);
    if (it == _names.end()) {
      return std::nullopt;
    }
    return static_cast<int>(it - _names.begin());
  }

  void FiniteGroup::check_subgroup(std::span<int const> subset) const {
    if (subset.empty()) {
      throw Error(ErrorKind::NotASubgroup, "empty subset");
    }
    std::vector<bool> member(order(), false);
    for (int x : subset) {
      if (x < 0 || static_cast<std::size_t>(x) >= order()) {
        throw Error(ErrorKind::NotASubgroup, "element index out of range");
      }
      member[static_cast<std::size_t>(x)] = true;
    }
    for (int x : subset) {
      for (int y : subset) {
        if (!member[static_cast<std::size_t>(mul(x, y))]) {
          throw Error(ErrorKind::NotASubgroup,
                      name(x) + "*" + name(y) + " = " + name(mul(x, y))
                          + " leaves the subset");
        }
      }
    }
  }

  Embedding Embedding::checked(FiniteGroup const& source,
                               FiniteGroup const& target,
                               std::vector<int>   map) {
    if (map.size() != source.order()) {
      throw Error(ErrorKind::InvalidEmbedding, "map does not cover the source group");
    }
    std::set<int> image;
    for (int y : map) {
      if (y < 0 || static_cast<std::size_t>(y) >= target.order()) {
        throw Error(ErrorKind::InvalidEmbedding, "image index out of range");
      }
      image.insert(y);
    }
    if (image.size() != map.size()) {
      throw Error(ErrorKind::InvalidEmbedding, "map is not injective");
    }
    auto const n = static_cast<int>(source.order());
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        auto const lhs = map[static_cast<std::size_t>(source.mul(x, y))];
        auto const rhs = target.mul(map[static_cast<std::size_t>(x)],
                                    map[static_cast<std::size_t>(y)]);
        if (lhs != rhs) {
          throw Error(ErrorKind::InvalidEmbedding,
                      "map(" + source.name(x) + "*" + source.name(y)
                          + ") != map(" + source.name(x) + ")*map(" + source.name(y)
                          + ")");
        }
      }
    }
    return Embedding{std::move(map)};
  }

  std::size_t double_coset_count(FiniteGroup const&  group,
                                 std::span<int const> h1,
                                 std::span<int const> h2) {
    group.check_subgroup(h1);
    group.check_subgroup(h2);
    std::vector<bool> seen(group.order(), false);
    std::size_t       count = 0;
    for (std::size_t g = 0; g < group.order(); ++g) {
      if (seen[g]) {
        continue;
      }
      ++count;
      for (int a : h1) {
        for (int b : h2) {
          seen[static_cast<std::size_t>(
              group.mul(group.mul(a, static_cast<int>(g)), b))]
              = true;
        }
      }
    }
    return count;
  }

}  // namespace treeqm
