#include "treeqm/witness.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>

#include "treeqm/error.hpp"

namespace treeqm {

  std::string word_family(std::size_t n, std::size_t i, WordFamilyParams const& params) {
    if (n == 0 || i < 1 || i > 3) {
      throw Error(ErrorKind::PreconditionViolated, "need n >= 1 and i in {1, 2, 3}");
    }
    std::size_t const V = params.v0 * (3 * n + i);
    if (V < 2) {
      throw Error(ErrorKind::ParamsTooSmall, "exponent V = " + std::to_string(V) + " is below 2");
    }
    std::string w;
    for (std::size_t j = 0; j <= params.blocks; ++j) {
      w += 'a';
      w.append(V + j, 'b');
    }
    return w;
  }

  void check_exponents(std::vector<std::pair<std::size_t, std::size_t>> const& requests,
                       WordFamilyParams const&                                 params) {
    if (!params.strict) {
      return;
    }
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> owner;
    for (auto const& [n, i] : requests) {
      std::size_t const V = params.v0 * (3 * n + i);
      for (std::size_t e = V; e <= V + params.blocks; ++e) {
        auto [it, fresh] = owner.try_emplace(e, n, i);
        if (!fresh && it->second != std::pair{n, i}) {
          throw Error(ErrorKind::ParamsTooSmall,
                      "w(" + std::to_string(it->second.first) + ","
                          + std::to_string(it->second.second) + ") and w(" + std::to_string(n)
                          + "," + std::to_string(i) + ") both use b^" + std::to_string(e)
                          + "; increase v0 or lower blocks");
        }
      }
    }
  }

  std::string word_reverse(std::string_view w) {
    return {w.rbegin(), w.rend()};
  }

  std::string word_inverse(TreeView const& view, Labelling const& lab, std::string_view w) {
    std::map<char, std::set<char>> image;
    for (auto const& [key, letter] : lab.labels) {
      auto it = lab.representatives.find(key);
      if (it != lab.representatives.end()) {
        image[letter].insert(lab.letter(view.orbit_key(it->second.reversed())));
      }
    }
    std::string out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      auto const& targets = image[*it];
      if (targets.size() != 1) {
        throw Error(ErrorKind::UndefinedInverseLabel,
                    std::string("orbits labelled ") + *it
                        + " do not reverse to a single label");
      }
      out += *targets.begin();
    }
    return out;
  }

  std::size_t longest_common_subword(std::string_view u, std::string_view w) {
    std::vector<std::size_t> prev(w.size() + 1, 0), cur(w.size() + 1, 0);
    std::size_t              best = 0;
    for (std::size_t i = 1; i <= u.size(); ++i) {
      for (std::size_t j = 1; j <= w.size(); ++j) {
        cur[j] = u[i - 1] == w[j - 1] ? prev[j - 1] + 1 : 0;
        best   = std::max(best, cur[j]);
      }
      std::swap(prev, cur);
    }
    return best;
  }

  WitnessSet build_witness(TreeView const&         view,
                           Labelling const&        lab,
                           std::size_t             n,
                           WordFamilyParams const& params,
                           std::size_t             budget) {
    auto const& inst = view.instance();
    check_exponents({{n, 1}, {n, 2}, {n, 3}}, params);
    WitnessSet out;
    out.n = n;
    for (std::size_t i = 0; i < 3; ++i) {
      out.words[i] = word_family(n, i + 1, params);
      out.paths[i] = realize_word(view, lab, out.words[i], budget);
      out.g[i]     = view.representative(out.paths[i].to);
    }
    out.product = inst.multiply(out.g[0], out.g[2]);
    out.eta     = inst.multiply(out.g[0], out.g[1]);
    out.h       = inst.multiply(inst.invert(out.g[1]), out.g[2]);
    if (translation_length(view, out.product) <= 0) {
      throw Error(ErrorKind::EllipticProduct,
                  "g_" + std::to_string(n) + "1 g_" + std::to_string(n) + "3 fixes a vertex");
    }
    out.s    = axis_segment(view, out.product);
    out.spec = make_spec(view, out.s, WindowMode::orbit);
    // the w_n1 part of [v, gv] ends where it leaves [v, g_n1 v]; back up to
    // the last o-vertex before that point
    Vertex const v   = view.base();
    Vertex const g1v = view.act(out.g[0], v);
    Vertex const gv  = view.act(out.product, v);
    OrientedPath const vgp = view.geodesic(v, gv);
    Geodesic const     vg(view, vgp);
    Vertex const   m = view.median(v, g1v, gv);
    std::size_t    end = 0;
    while (end < vg.raw_length() && vg.vertex_at(end) != m) ++end;
    Vertex junction = v;
    for (auto pos : vg.o_positions()) {
      if (pos <= end) junction = vg.vertex_at(pos);
    }
    out.junction_ok = junction == out.s.from || junction == out.s.to
                      || view.interior_contains(out.s, junction);
    return out;
  }

  std::size_t longest_common_o_subgeodesic(TreeView const&     view,
                                           OrientedPath const& gamma1,
                                           OrientedPath const& gamma2) {
    Geodesic const  a(view, gamma1);
    std::set<Vertex> on_a;
    for (auto p : a.o_positions()) {
      on_a.insert(a.vertex_at(p));
    }
    Geodesic const b(view, gamma2);
    std::size_t    shared = 0;
    for (auto p : b.o_positions()) {
      shared += on_a.count(b.vertex_at(p));
    }
    return shared <= 1 ? 0 : shared - 1;
  }

  std::size_t max_translate_overlap(TreeView const&     view,
                                    OrientedPath const& gamma1,
                                    OrientedPath const& gamma2,
                                    std::size_t         budget) {
    Geodesic const a(view, gamma1);
    Geodesic const b(view, gamma2);
    std::size_t    used = 0;
    auto tick = [&] {
      if (++used > budget) {
        throw Error(ErrorKind::ResourceLimit, "overlap search exceeded its budget");
      }
    };
    auto shares = [&](std::size_t L) {
      std::set<OrbitKey> keys;
      for (auto [i, j] : a.windows(L, WindowMode::orbit)) {
        tick();
        keys.insert(a.key(i, j));
      }
      for (auto [i, j] : b.windows(L, WindowMode::orbit)) {
        tick();
        if (keys.count(b.key(i, j)) > 0 || keys.count(b.reverse_key(i, j)) > 0) {
          return true;
        }
      }
      return false;
    };
    std::size_t lo = 0;
    std::size_t hi = std::min(a.o_positions().size(), b.o_positions().size());
    hi             = hi == 0 ? 0 : hi - 1;
    // sharing an o(L)-window implies sharing all shorter ones
    while (lo < hi) {
      std::size_t const mid = (lo + hi + 1) / 2;
      if (shares(mid)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return lo;
  }

  IndependenceReport independence_matrix(TreeView const&                view,
                                         std::vector<WitnessSet> const& witnesses,
                                         std::size_t                    zmax,
                                         std::size_t                    threads) {
    auto const&        inst = view.instance();
    IndependenceReport out;
    out.zmax = zmax;
    std::size_t const M = witnesses.size();
    out.entries.resize(M * M * zmax);
    for (std::size_t n = 0; n < M; ++n) {
      for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t z = 1; z <= zmax; ++z) {
          auto& e = out.entries[(n * M + m) * zmax + (z - 1)];
          e.n     = witnesses[n].n;
          e.m     = witnesses[m].n;
          e.z     = z;
        }
      }
    }
    // powers are shared by every row
    std::vector<std::array<std::vector<Element>, 3>> powers(M);
    for (std::size_t m = 0; m < M; ++m) {
      std::array<Element, 3> base{witnesses[m].eta, witnesses[m].h, witnesses[m].product};
      for (std::size_t t = 0; t < 3; ++t) {
        Element p = inst.identity();
        for (std::size_t z = 1; z <= zmax; ++z) {
          p = inst.multiply(p, base[t]);
          powers[m][t].push_back(p);
        }
      }
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t idx; (idx = next.fetch_add(1)) < out.entries.size();) {
        auto&             e    = out.entries[idx];
        std::size_t const n    = idx / (M * zmax);
        std::size_t const m    = (idx / zmax) % M;
        auto const&       spec = witnesses[n].spec;
        e.eta                  = median_qm(view, spec, powers[m][0][e.z - 1]);
        e.h                    = median_qm(view, spec, powers[m][1][e.z - 1]);
        e.product              = median_qm(view, spec, powers[m][2][e.z - 1]);
      }
    };
    std::size_t const nthreads = std::max<std::size_t>(1, threads);
    if (nthreads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back(work);
      }
      for (auto& th : pool) {
        th.join();
      }
    }

    out.pass = true;
    for (auto const& e : out.entries) {
      std::string where = "c_" + std::to_string(e.n) + " at m=" + std::to_string(e.m)
                          + ", z=" + std::to_string(e.z);
      std::string bad;
      if (e.eta != 0) {
        bad = "eta power gives " + std::to_string(e.eta);
      } else if (e.h != 0) {
        bad = "h power gives " + std::to_string(e.h);
      } else if (e.n != e.m && e.product != 0) {
        bad = "off-diagonal product gives " + std::to_string(e.product);
      } else if (e.n == e.m && e.product < static_cast<std::int64_t>(e.z) - 1) {
        bad = "diagonal product " + std::to_string(e.product) + " < z - 1";
      }
      if (!bad.empty()) {
        out.pass    = false;
        out.failure = where + ": " + bad;
        break;
      }
    }
    for (auto const& w : witnesses) {
      out.diagonal.push_back(homogenize(view, w.spec, w.product, std::max<std::size_t>(zmax, 3)));
    }
    return out;
  }

}  // namespace treeqm
