// Shared helpers for the unit tests: instance loading, random generators and
// an independent model of the amalgam action used as an oracle.
#ifndef TREEQM_TESTS_SUPPORT_HPP_
#define TREEQM_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treeqm/instance.hpp"
#include "treeqm/instance_io.hpp"
#include "treeqm/tree.hpp"

namespace testing {

  using namespace treeqm;

  inline std::shared_ptr<Instance const> load(std::string const& name) {
    return std::make_shared<Instance const>(
        load_instance(std::string(TREEQM_INSTANCE_DIR) + "/" + name + ".json"));
  }

  inline std::shared_ptr<Instance const> f2() {
    static auto inst = load("f2");
    return inst;
  }
  inline std::shared_ptr<Instance const> s3z4() {
    static auto inst = load("s3_z2_z4");
    return inst;
  }
  inline std::shared_ptr<Instance const> z5z2() {
    static auto inst = load("z5_z2");
    return inst;
  }

  // Random word over A u B (amalgam) or the signed generators (free).
  inline Word random_word(Instance const& inst, std::mt19937_64& rng, std::size_t len) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) {
      if (inst.is_amalgam()) {
        int const f = static_cast<int>(rng() % 2);
        int const x = static_cast<int>(rng() % inst.group(f).order());
        w.push_back({f, x});
      } else {
        int const g = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(inst.rank()));
        w.push_back({-1, rng() % 2 == 0 ? g : -g});
      }
    }
    return w;
  }

  inline Element random_element(Instance const& inst, std::mt19937_64& rng, std::size_t max_len) {
    return inst.normal_form(random_word(inst, rng, rng() % (max_len + 1)));
  }

  // Amalgam vertex as in the oracle: alternating (factor, coset minimum)
  // pairs followed by the vertex type. Written from scratch, pushing a
  // letter through from the left rather than multiplying normal forms.
  struct OVertex {
    std::vector<std::pair<int, int>> seq;
    int                              type = 0;
    auto operator<=>(OVertex const&) const = default;
  };

  class ActionOracle {
   public:
    explicit ActionOracle(Instance const& inst) : _inst(inst) {}

    // smallest index in x*C, and the c with x = min * c
    std::pair<int, int> split(int f, int x) const {
      auto const& G = _inst.group(f);
      auto const& C = _inst.group(kFactorC);
      int         best = -1, bc = -1;
      for (int c = 0; c < static_cast<int>(C.order()); ++c) {
        int y = G.mul(x, _inst.embed(f, C.inv(c)));
        if (best < 0 || y < best) {
          best = y;
          bc   = c;
        }
      }
      return {best, bc};
    }

    bool in_c(int f, int x) const {
      return split(f, x).first == _inst.group(f).identity();
    }

    // x in factor f acting on the left
    OVertex act(int f, int x, OVertex v) const {
      auto const& C = _inst.group(kFactorC);
      int         carry;
      std::size_t start;
      if (!v.seq.empty() && v.seq[0].first == f) {
        auto [r, c] = split(f, _inst.group(f).mul(x, v.seq[0].second));
        carry       = c;
        if (r == _inst.group(f).identity()) {
          v.seq.erase(v.seq.begin());
          start = 0;
        } else {
          v.seq[0].second = r;
          start           = 1;
        }
      } else {
        auto [r, c] = split(f, x);
        carry       = c;
        if (r != _inst.group(f).identity() && !(v.seq.empty() && v.type == f)) {
          v.seq.insert(v.seq.begin(), {f, r});
          start = 1;
        } else {
          start = 0;
        }
      }
      for (std::size_t i = start; i < v.seq.size(); ++i) {
        auto& [g, r] = v.seq[i];
        auto [r2, c2] = split(g, _inst.group(g).mul(_inst.embed(g, carry), r));
        r             = r2;
        carry         = c2;
      }
      (void) C;
      return v;
    }

    OVertex act_word(Word const& w, OVertex v) const {
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (it->factor == kFactorC) {
          v = act(kFactorA, _inst.embed(kFactorA, it->value), v);
        } else {
          v = act(it->factor, it->value, v);
        }
      }
      return v;
    }

    // Word spelling a normal form: its letters, then c.
    Word word_of(Element const& g) const {
      Word w;
      for (auto l : g.letters) {
        w.push_back({letter_factor(l), _inst.transversal(letter_factor(l))[letter_rep(l)]});
      }
      w.push_back({kFactorC, g.c});
      return w;
    }

    // Vertices reached from [A] and [B] by words of length <= radius.
    std::vector<OVertex> ball(std::size_t radius) const {
      std::set<OVertex> seen{OVertex{{}, 0}, OVertex{{}, 1}};
      std::vector<OVertex> frontier(seen.begin(), seen.end());
      for (std::size_t r = 0; r < radius; ++r) {
        std::vector<OVertex> next;
        for (auto const& v : frontier) {
          for (int f : {0, 1}) {
            for (int x = 0; x < static_cast<int>(_inst.group(f).order()); ++x) {
              auto u = act(f, x, v);
              if (seen.insert(u).second) {
                next.push_back(u);
              }
            }
          }
        }
        frontier = std::move(next);
      }
      return {seen.begin(), seen.end()};
    }

    bool equal(Word const& u, Word const& w, std::vector<OVertex> const& ball) const {
      for (auto const& v : ball) {
        if (act_word(u, v) != act_word(w, v)) {
          return false;
        }
      }
      return true;
    }

    OVertex from_library(Vertex const& x) const {
      OVertex v;
      v.type = static_cast<int>(x.steps.size() % 2);
      for (std::size_t d = 0; d < x.steps.size(); ++d) {
        int const f = static_cast<int>(d % 2);
        if (x.steps[d] != 0) {
          v.seq.emplace_back(f, _inst.transversal(f)[x.steps[d]]);
        }
      }
      return v;
    }

   private:
    Instance const& _inst;
  };

  // Distances by breadth-first search over a view's adjacency.
  inline std::map<Vertex, std::size_t> bfs(TreeView const& view,
                                           Vertex const&   source,
                                           std::size_t     radius) {
    std::map<Vertex, std::size_t> dist{{source, 0}};
    std::vector<Vertex>           frontier{source};
    for (std::size_t r = 1; r <= radius; ++r) {
      std::vector<Vertex> next;
      for (auto const& x : frontier) {
        for (auto const& y : view.neighbors(x)) {
          if (dist.emplace(y, r).second) {
            next.push_back(y);
          }
        }
      }
      frontier = std::move(next);
    }
    return dist;
  }

}  // namespace testing

#endif  // TREEQM_TESTS_SUPPORT_HPP_
