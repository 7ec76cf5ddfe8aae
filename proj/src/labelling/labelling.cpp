#include "treeqm/labelling.hpp"

#include <algorithm>
#include <set>

#include "treeqm/error.hpp"
#include "treeqm/orbit_cache.hpp"

namespace treeqm {

  std::string_view to_string(Verdict v) noexcept {
    switch (v) {
      case Verdict::CaseI: return "CaseI";
      case Verdict::CaseII: return "CaseII";
      case Verdict::CaseIII: return "CaseIII";
      case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
  }

  char Labelling::letter(OrbitKey const& key) const {
    auto it = labels.find(key);
    return it == labels.end() ? 'c' : it->second;
  }

  std::vector<OrbitKey> Labelling::keys_with(char l) const {
    std::vector<OrbitKey> out;
    for (auto const& [key, x] : labels) {
      if (x == l) {
        out.push_back(key);
      }
    }
    return out;
  }

  std::string label_of_path(TreeView const& view, Labelling const& lab, OrientedPath const& p) {
    Geodesic    geo(view, p);
    std::string out;
    for (auto [i, j] : geo.windows(lab.k, WindowMode::orbit)) {
      out += lab.letter(geo.key(i, j));
    }
    return out;
  }

  bool reversal_compatible(TreeView const& view, Labelling const& lab) {
    auto const as = lab.keys_with('a');
    auto const bs = lab.keys_with('b');
    if (as.size() == 1 && bs.size() == 1) {
      return true;
    }
    for (auto const& key : as) {
      auto it = lab.representatives.find(key);
      if (it == lab.representatives.end()) {
        return false;
      }
      if (lab.letter(view.orbit_key(it->second.reversed())) == 'b') {
        return false;
      }
    }
    return true;
  }

  bool is_good_word(std::string_view w) {
    if (w.empty() || w.front() != 'a') {
      return false;
    }
    std::size_t i = 0;
    while (i < w.size()) {
      if (w[i] != 'a') {
        return false;
      }
      std::size_t j = i + 1;
      while (j < w.size() && w[j] == 'b') {
        ++j;
      }
      if (j - i - 1 < 2) {
        return false;
      }
      i = j;
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // realize_word
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Moves from an o-vertex to the o-vertices one o-step further from v,
    // as lists of steps to append. Since paths start at the root v they only
    // ever descend.
    std::vector<std::vector<std::int32_t>> o_children(Instance const& inst, Vertex const& x) {
      std::vector<std::vector<std::int32_t>> out;
      if (!inst.is_amalgam()) {
        for (int gen = 1; gen <= inst.rank(); ++gen) {
          for (int sign : {1, -1}) {
            std::int32_t const s = gen * sign;
            if (x.steps.empty() || x.steps.back() != -s) {
              out.push_back({s});
            }
          }
        }
        return out;
      }
      int const first = x.steps.empty() ? 0 : 1;
      for (int r = first; r < inst.index(kFactorA); ++r) {
        for (int q = 1; q < inst.index(kFactorB); ++q) {
          out.push_back({r, q});
        }
      }
      return out;
    }
  }  // namespace

  OrientedPath realize_word(TreeView const&  view,
                            Labelling const& lab,
                            std::string_view w,
                            std::size_t      budget) {
    auto const&       inst   = view.instance();
    std::size_t const k      = lab.k;
    // number of o-steps needed; the empty word wants a stub of o-length k-1
    std::size_t const target = w.size() + k - 1;

    Vertex                   cur;
    // depth of the m-th o-vertex in cur
    std::vector<std::size_t> depth{0};
    struct Frame {
      std::vector<std::vector<std::int32_t>> moves;
      std::size_t                            next = 0;
    };
    std::vector<Frame> stack;
    std::size_t        nodes = 0, deepest = 0;

    auto fail = [&](std::string const& why) {
      throw Error(ErrorKind::RealizationFailed,
                  why + " realising '" + std::string(w) + "' (reached letter "
                      + std::to_string(deepest + 1 > k ? deepest + 1 - k : 0) + " of "
                      + std::to_string(w.size()) + ")");
    };

    if (target == 0) {
      return OrientedPath{cur, cur};
    }
    stack.push_back({o_children(inst, cur), 0});
    while (!stack.empty()) {
      auto& top = stack.back();
      if (top.next == top.moves.size()) {
        // no continuation: undo the o-step into this vertex
        stack.pop_back();
        if (stack.empty()) {
          break;
        }
        auto const undo = depth.back() - depth[depth.size() - 2];
        cur.steps.resize(cur.steps.size() - undo);
        depth.pop_back();
        continue;
      }
      if (++nodes > budget) {
        fail("node budget exhausted");
      }
      auto const& move = top.moves[top.next++];
      cur.steps.insert(cur.steps.end(), move.begin(), move.end());
      std::size_t const m = depth.size();  // index of the new o-vertex
      bool              ok = true;
      if (m >= k) {
        std::size_t const a = depth[m - k];
        Element const     rel
            = view.slice_element(std::span<std::int32_t const>(cur.steps).subspan(a), a);
        ok = lab.letter(view.relative_key(kFactorA, kFactorA, rel)) == w[m - k];
      }
      if (!ok) {
        cur.steps.resize(cur.steps.size() - move.size());
        continue;
      }
      depth.push_back(cur.steps.size());
      deepest = std::max(deepest, m);
      if (m == target) {
        return OrientedPath{Vertex{}, cur};
      }
      stack.push_back({o_children(inst, cur), 0});
    }
    fail("no o-geodesic carries this label");
    return {};
  }

  ////////////////////////////////////////////////////////////////////////
  // chainability and the graph Lambda
  ////////////////////////////////////////////////////////////////////////

  Chainability chainable(TreeView const&     view,
                         OrientedPath const& gamma1,
                         OrientedPath const& gamma2) {
    auto const& inst = view.instance();
    if (!view.is_o_vertex(gamma1.to) || !view.is_o_vertex(gamma2.from)
        || gamma1.from == gamma1.to || gamma2.from == gamma2.to) {
      throw Error(ErrorKind::PreconditionViolated, "chainability needs nontrivial o-geodesics");
    }
    Geodesic const g1(view, gamma1);
    Vertex const   before = g1.vertex_at(g1.raw_length() - 1);
    Element const  ru     = view.representative(gamma1.to);
    Element const  r2inv  = inst.invert(view.representative(gamma2.from));
    Chainability   out;
    out.xi = inst.identity();
    int const order = inst.is_amalgam() ? static_cast<int>(inst.group(kFactorA).order()) : 1;
    for (int s = 0; s < order; ++s) {
      Element g = inst.is_amalgam() ? inst.multiply(ru, inst.element_of(kFactorA, s)) : ru;
      g         = inst.multiply(g, r2inv);
      OrientedPath const moved = view.act(g, gamma2);
      Geodesic const     g2(view, moved);
      if (g2.vertex_at(1) != before) {
        out.chainable = true;
        out.g         = std::move(g);
        return out;
      }
    }
    out.g = inst.identity();
    return out;
  }

  std::size_t LambdaGraph::out_degree(std::size_t i) const {
    return static_cast<std::size_t>(std::count(edge[i].begin(), edge[i].end(), true));
  }

  namespace {
    Vertex first_raw_step(TreeView const& view, OrientedPath const& p) {
      Geodesic const geo(view, p);
      return geo.vertex_at(1);
    }
  }  // namespace

  LambdaGraph build_lambda(TreeView const&     view,
                           OrientedPath const& e1,
                           OrientedPath const& e2,
                           OrientedPath const& e3) {
    std::array<OrientedPath const*, 3> e{&e1, &e2, &e3};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        auto const names = "e" + std::to_string(i + 1) + " and e" + std::to_string(j + 1);
        if (view.orbit_key(*e[i]) == view.orbit_key(*e[j])) {
          throw Error(ErrorKind::PreconditionViolated, names + " lie in the same orbit");
        }
        if (e[i]->from != e[j]->from
            || first_raw_step(view, *e[i]) == first_raw_step(view, *e[j])) {
          throw Error(ErrorKind::PreconditionViolated,
                      names + " share more than their starting vertex");
        }
      }
    }
    LambdaGraph out;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        out.edge[i][j] = chainable(view, *e[i], *e[j]).chainable;
      }
    }
    return out;
  }

  LambdaCase lambda_case(LambdaGraph const& lambda) {
    auto const& E = lambda.edge;
    static constexpr std::array<std::pair<std::size_t, std::size_t>, 6> order{
        {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}};
    for (auto [i, j] : order) {
      if (E[i][j] && E[j][i] && E[j][j]) {
        return {"1a", i, j};
      }
    }
    bool all_loops = E[0][0] && E[1][1] && E[2][2];
    bool no_loops  = !E[0][0] && !E[1][1] && !E[2][2];
    bool enough    = lambda.out_degree(0) >= 2 && lambda.out_degree(1) >= 2
                  && lambda.out_degree(2) >= 2;
    if (all_loops && enough) {
      return {"1b", 0, 0};
    }
    if (no_loops && enough) {
      return {"1c", 0, 0};
    }
    return {};
  }

  OrbitCounts minimal_nontransitive_k(TreeView const&   view,
                                      std::size_t       kmax,
                                      std::size_t       budget,
                                      OrbitCache const* cache) {
    if (kmax == 0) {
      throw Error(ErrorKind::PreconditionViolated, "kmax must be at least 1");
    }
    OrbitCounts out;
    for (std::size_t n = 1; n <= kmax; ++n) {
      out.counts.push_back(view.enumerate_orbits(n, WindowMode::orbit, budget, cache).size());
      if (out.counts.back() >= 2) {
        out.k = n;
        break;
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // orientation for a fixed end
  ////////////////////////////////////////////////////////////////////////

  Orientation orient_edges(std::vector<SignedOEdge> const& o_edges,
                           std::vector<int> const&         interior) {
    Orientation                  out;
    std::set<int> const          inner(interior.begin(), interior.end());
    // undirected edge {min, max} -> +1 if min -> max, -1 if max -> min
    std::map<std::pair<int, int>, int> dir;
    std::set<std::pair<int, int>>      met;
    for (auto const& e : o_edges) {
      for (std::size_t t = 0; t + 1 < e.vertices.size(); ++t) {
        int const  u = e.vertices[t], w = e.vertices[t + 1];
        auto const key = std::minmax(u, w);
        met.insert(key);
        if (e.sign == 0) {
          continue;
        }
        // direction of travel, flipped for negative o-edges
        int const d = (u < w ? 1 : -1) * (e.sign > 0 ? 1 : -1);
        auto [it, fresh] = dir.try_emplace(key, d);
        if (!fresh && it->second != d) {
          out.failure = "edge {" + std::to_string(key.first) + "," + std::to_string(key.second)
                        + "} is oriented both ways";
          return out;
        }
      }
    }
    std::map<int, int> incoming;
    for (auto const& key : met) {
      bool const touches = inner.count(key.first) > 0 || inner.count(key.second) > 0;
      auto       it      = dir.find(key);
      if (it == dir.end()) {
        if (touches) {
          out.failure = "edge {" + std::to_string(key.first) + "," + std::to_string(key.second)
                        + "} lies in no signed o-edge";
          return out;
        }
        continue;
      }
      auto const [tail, head] = it->second > 0 ? key : std::pair{key.second, key.first};
      out.edges.emplace_back(tail, head);
      ++incoming[head];
    }
    for (int x : interior) {
      if (incoming[x] != 1) {
        out.failure = "vertex " + std::to_string(x) + " has " + std::to_string(incoming[x])
                      + " incoming edges";
        out.edges.clear();
        return out;
      }
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.ok = true;
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // classify
  ////////////////////////////////////////////////////////////////////////

  namespace {
    struct OEdgeAtV {
      OrientedPath path;
      Vertex       first;
    };

    Labelling make_labelling(std::size_t                   k,
                             OrbitTable const&             table,
                             std::vector<OrbitKey> const&  as,
                             std::vector<OrbitKey> const&  bs,
                             std::string                   provenance) {
      Labelling lab;
      lab.k               = k;
      lab.provenance      = std::move(provenance);
      lab.representatives = table;
      for (auto const& [key, p] : table) {
        lab.labels[key] = 'c';
      }
      for (auto const& key : as) {
        lab.labels[key] = 'a';
      }
      for (auto const& key : bs) {
        lab.labels[key] = 'b';
      }
      return lab;
    }

    void finish_case3(TreeView const& view, Certificate& cert, Labelling lab) {
      cert.provenance = lab.provenance;
      if (!reversal_compatible(view, lab)) {
        cert.verdict = Verdict::Inconclusive;
        cert.note    = "labelling " + lab.provenance + " violates the inverse condition";
      } else {
        cert.verdict = Verdict::CaseIII;
      }
      cert.labelling = std::move(lab);
    }

    void case_2c(TreeView const&        view,
                 Certificate&           cert,
                 OrientedPath const&    e1,
                 ClassifyOptions const& options) {
      TreeView const    raw(view.instance_ptr(), ViewMode::raw);
      OrbitKey const    plus  = view.orbit_key(e1);
      OrbitKey const    minus = view.orbit_key(e1.reversed());
      std::size_t const R     = options.orient_radius;
      std::size_t const L     = raw.length(e1);
      std::map<Vertex, int>    ids;
      auto id = [&ids](Vertex const& x) {
        return ids.try_emplace(x, static_cast<int>(ids.size())).first->second;
      };
      std::vector<SignedOEdge> signed_edges;
      std::vector<int>         interior;
      for (auto const& x : raw.o_ball(R, options.budget)) {
        if (raw.distance(raw.base(), x) + L <= R) {
          interior.push_back(id(x));
        }
        for (auto const& p : raw.paths_from(x, 1, WindowMode::orbit, options.budget)) {
          SignedOEdge e;
          auto const  key = view.orbit_key(p);
          e.sign          = key == plus ? 1 : (key == minus ? -1 : 0);
          for (auto const& y : raw.vertices(p)) {
            e.vertices.push_back(id(y));
          }
          signed_edges.push_back(std::move(e));
        }
      }
      auto orientation = orient_edges(signed_edges, interior);
      cert.ball_radius = R;
      if (orientation.ok) {
        cert.verdict    = Verdict::CaseII;
        cert.provenance = "2c";
        cert.note       = "invariant orientation verified on the raw ball of radius "
                    + std::to_string(R);
      } else {
        cert.verdict = Verdict::Inconclusive;
        cert.note    = "case 2c: " + orientation.failure;
      }
      cert.orientation = std::move(orientation);
    }
  }  // namespace

  Certificate classify(TreeView const& view, std::size_t kmax, ClassifyOptions const& options) {
    auto const& inst = view.instance();
    if (inst.is_amalgam() && view.mode() == ViewMode::raw
        && (inst.index(kFactorA) == 2 || inst.index(kFactorB) == 2)) {
      throw Error(ErrorKind::PreconditionViolated,
                  "the raw tree has vertices of valence 2; classify the suppressed view");
    }
    Certificate cert;
    cert.kmax   = kmax;
    auto counts = minimal_nontransitive_k(view, kmax, options.budget, options.cache);
    cert.orbit_counts = counts.counts;

    if (!counts.k) {
      auto const  table = view.enumerate_orbits(1, WindowMode::orbit, options.budget, options.cache);
      std::size_t const len = view.length(table.begin()->second);
      if (len <= 2) {
        cert.verdict = Verdict::CaseI;
        cert.l       = len;
        cert.note    = "transitive on o(n)-geodesics for n <= " + std::to_string(kmax)
                    + "; bounded check, not a proof for all n; increase kmax to search further";
      } else {
        cert.note = "transitive up to kmax but o-edges have length " + std::to_string(len);
      }
      return cert;
    }

    std::size_t const k     = *counts.k;
    cert.k                  = k;
    auto const        table = view.enumerate_orbits(k, WindowMode::orbit, options.budget, options.cache);

    if (k > 1) {
      auto it = table.begin();
      auto a  = it->first;
      auto b  = (++it)->first;
      finish_case3(view, cert, make_labelling(k, table, {a}, {b}, "3a"));
      return cert;
    }

    // k = 1: o-edges at v grouped by orbit
    std::map<OrbitKey, std::vector<OEdgeAtV>> at_v;
    for (auto& p : view.paths_from(view.base(), 1, WindowMode::orbit, options.budget)) {
      auto key   = view.orbit_key(p);
      auto first = first_raw_step(view, p);
      at_v[key].push_back({std::move(p), std::move(first)});
    }
    std::vector<OrbitKey> keys;
    for (auto const& [key, list] : at_v) {
      keys.push_back(key);
    }

    // Case 1: the first triple of distinct orbits meeting only at v
    for (std::size_t i = 0; i < keys.size(); ++i) {
      for (std::size_t j = i + 1; j < keys.size(); ++j) {
        for (std::size_t l = j + 1; l < keys.size(); ++l) {
          for (auto const& x : at_v[keys[i]]) {
            for (auto const& y : at_v[keys[j]]) {
              if (y.first == x.first) {
                continue;
              }
              for (auto const& z : at_v[keys[l]]) {
                if (z.first == x.first || z.first == y.first) {
                  continue;
                }
                cert.witnesses = {x.path, y.path, z.path};
                auto lambda    = build_lambda(view, x.path, y.path, z.path);
                cert.lambda    = lambda;
                auto which     = lambda_case(lambda);
                std::array<OrbitKey, 3> const e{keys[i], keys[j], keys[l]};
                if (which.which == "1a") {
                  finish_case3(view, cert, make_labelling(1, table, {e[which.i]}, {e[which.j]}, "1a"));
                } else if (which.which == "1b" || which.which == "1c") {
                  finish_case3(view, cert, make_labelling(1, table, {e[0]}, {e[1], e[2]}, which.which));
                } else {
                  cert.note = "the chainability graph fits none of the expected shapes";
                }
                return cert;
              }
            }
          }
        }
      }
    }

    // Case 2: e1, e1' in one orbit and e2 in another, pairwise meeting at v
    for (auto const& k1 : keys) {
      auto const& list = at_v[k1];
      for (std::size_t p = 0; p < list.size(); ++p) {
        for (std::size_t q = p + 1; q < list.size(); ++q) {
          if (list[p].first == list[q].first) {
            continue;
          }
          for (auto const& k2 : keys) {
            if (k2 == k1) {
              continue;
            }
            for (auto const& r : at_v[k2]) {
              if (r.first == list[p].first || r.first == list[q].first) {
                continue;
              }
              auto const& e1 = list[p].path;
              auto const& e2 = r.path;
              cert.witnesses = {e1, list[q].path, e2};
              if (chainable(view, e1, e2).chainable) {
                finish_case3(view, cert, make_labelling(1, table, {k2}, {k1}, "2a"));
              } else if (chainable(view, e1, e1.reversed()).chainable) {
                cert.provenance = "2b";
                cert.note       = "case 2b reached, which the case analysis rules out";
              } else {
                case_2c(view, cert, e1, options);
              }
              return cert;
            }
          }
        }
      }
    }
    cert.note = "no triple of o-edges at v as required by cases 1 or 2";
    return cert;
  }

}  // namespace treeqm
