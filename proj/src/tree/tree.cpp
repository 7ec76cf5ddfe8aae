#include "treeqm/tree.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "treeqm/error.hpp"
#include "treeqm/orbit_cache.hpp"

namespace treeqm {

  std::string_view to_string(ViewMode mode) noexcept {
    return mode == ViewMode::raw ? "raw" : "suppressed";
  }

  std::string_view to_string(WindowMode mode) noexcept {
    return mode == WindowMode::metric ? "metric" : "orbit";
  }

  namespace {
    std::size_t common_prefix(Vertex const& x, Vertex const& y) {
      auto const n = std::min(x.steps.size(), y.steps.size());
      std::size_t i = 0;
      while (i < n && x.steps[i] == y.steps[i]) {
        ++i;
      }
      return i;
    }

    Vertex prefix(Vertex const& x, std::size_t len) {
      return Vertex{{x.steps.begin(), x.steps.begin() + static_cast<std::ptrdiff_t>(len)}};
    }

    void append_free_step(std::string& out, std::int32_t s) {
      out += std::to_string(s > 0 ? s : -s);
      out += s > 0 ? '+' : '-';
    }

    struct BudgetCounter {
      std::size_t budget;
      std::size_t used = 0;
      void        tick() {
        if (++used > budget) {
          throw Error(ErrorKind::ResourceLimit,
                      "node budget of " + std::to_string(budget) + " exhausted");
        }
      }
    };
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // TreeView
  ////////////////////////////////////////////////////////////////////////

  TreeView::TreeView(std::shared_ptr<Instance const> instance, ViewMode mode)
      : _instance(std::move(instance)), _mode(mode), _hidden() {
    if (_mode == ViewMode::raw || !_instance->is_amalgam()) {
      return;
    }
    int const ia = _instance->index(kFactorA);
    int const ib = _instance->index(kFactorB);
    if (ia == 2 && ib == 2) {
      throw Error(ErrorKind::DegenerateTree,
                  "both vertex types have valence 2, the tree is a line");
    }
    if (ia == 2) {
      throw Error(ErrorKind::DegenerateTree,
                  "the base vertex [A] has valence 2 and would be merged away; "
                  "use --root B");
    }
    if (ib == 2) {
      _hidden = kFactorB;
    }
  }

  TreeView suppress_valence2(std::shared_ptr<Instance const> instance) {
    return TreeView(std::move(instance), ViewMode::suppressed);
  }

  int TreeView::type_at_depth(std::size_t depth) const noexcept {
    if (!_instance->is_amalgam()) {
      return kFactorA;
    }
    return static_cast<int>(depth % 2);
  }

  std::vector<int> TreeView::visible_types() const {
    if (!_instance->is_amalgam()) {
      return {kFactorA};
    }
    std::vector<int> out;
    for (int t : {kFactorA, kFactorB}) {
      if (visible_type(t)) {
        out.push_back(t);
      }
    }
    return out;
  }

  Vertex TreeView::base_of_type(int t) const {
    if (t == kFactorB) {
      if (!_instance->is_amalgam()) {
        throw Error(ErrorKind::PreconditionViolated, "free groups have one vertex type");
      }
      return Vertex{{0}};
    }
    return Vertex{};
  }

  std::vector<Vertex> TreeView::raw_neighbors(Vertex const& x) const {
    std::vector<Vertex> out;
    auto const&         s = x.steps;
    if (!_instance->is_amalgam()) {
      for (int gen = 1; gen <= _instance->rank(); ++gen) {
        for (int sign : {1, -1}) {
          std::int32_t const letter = gen * sign;
          if (!s.empty() && s.back() == -letter) {
            out.push_back(prefix(x, s.size() - 1));
          } else {
            Vertex y = x;
            y.steps.push_back(letter);
            out.push_back(std::move(y));
          }
        }
      }
      return out;
    }
    int const f = type(x);
    // transversal index 0 is the parent, except at the root where it is [B]
    if (s.empty()) {
      for (int r = 0; r < _instance->index(f); ++r) {
        out.push_back(Vertex{{r}});
      }
      return out;
    }
    out.push_back(prefix(x, s.size() - 1));
    for (int r = 1; r < _instance->index(f); ++r) {
      Vertex y = x;
      y.steps.push_back(r);
      out.push_back(std::move(y));
    }
    return out;
  }

  std::vector<Vertex> TreeView::neighbors(Vertex const& x) const {
    auto raw = raw_neighbors(x);
    if (!_hidden) {
      return raw;
    }
    std::vector<Vertex> out;
    for (auto const& y : raw) {
      for (auto& z : raw_neighbors(y)) {
        if (z != x) {
          out.push_back(std::move(z));
        }
      }
    }
    return out;
  }

  OrientedPath TreeView::geodesic(Vertex const& x, Vertex const& y) const {
    return OrientedPath{x, y};
  }

  OrientedPath TreeView::path_from_vertices(std::span<Vertex const> seq) const {
    if (seq.empty()) {
      throw Error(ErrorKind::InvalidPath, "empty vertex sequence");
    }
    for (auto const& x : seq) {
      if (!visible(x)) {
        throw Error(ErrorKind::InvalidPath, "vertex is not in this view");
      }
    }
    for (std::size_t i = 1; i < seq.size(); ++i) {
      auto nb = neighbors(seq[i - 1]);
      if (std::find(nb.begin(), nb.end(), seq[i]) == nb.end()) {
        throw Error(ErrorKind::InvalidPath,
                    "vertices " + std::to_string(i - 1) + " and " + std::to_string(i)
                        + " are not adjacent");
      }
      if (i >= 2 && seq[i] == seq[i - 2]) {
        throw Error(ErrorKind::InvalidPath,
                    "path backtracks at vertex " + std::to_string(i));
      }
    }
    return OrientedPath{seq.front(), seq.back()};
  }

  std::vector<Vertex> TreeView::vertices(OrientedPath const& p) const {
    Geodesic            g(*this, p);
    std::vector<Vertex> out;
    for (auto pos : g.visible_positions()) {
      out.push_back(g.vertex_at(pos));
    }
    return out;
  }

  std::size_t TreeView::length(OrientedPath const& p) const {
    return Geodesic(*this, p).visible_positions().size() - 1;
  }

  std::size_t TreeView::distance(Vertex const& x, Vertex const& y) const {
    return length(OrientedPath{x, y});
  }

  std::optional<std::size_t> TreeView::o_length(OrientedPath const& p) const {
    auto pos = Geodesic(*this, p).o_positions();
    if (pos.empty()) {
      return std::nullopt;
    }
    return pos.size() - 1;
  }

  Vertex TreeView::median(Vertex const& x, Vertex const& y, Vertex const& z) const {
    // in a rooted tree the median is the deepest pairwise meet
    auto const xy = common_prefix(x, y);
    auto const yz = common_prefix(y, z);
    auto const xz = common_prefix(x, z);
    if (xy >= yz && xy >= xz) {
      return prefix(x, xy);
    } else if (yz >= xz) {
      return prefix(y, yz);
    }
    return prefix(x, xz);
  }

  bool TreeView::interior_contains(OrientedPath const& p, Vertex const& m) const {
    if (m == p.from || m == p.to) {
      return false;
    }
    // m is on [x, y] iff it is an ancestor of one endpoint and a descendant
    // of their meet
    auto const lca = common_prefix(p.from, p.to);
    if (m.steps.size() < lca) {
      return false;
    }
    auto const a = common_prefix(m, p.from);
    auto const b = common_prefix(m, p.to);
    return a == m.steps.size() || b == m.steps.size();
  }

  OrbitKey TreeView::orbit_key(OrientedPath const& p) const {
    Geodesic g(*this, p);
    return g.key(0, g.raw_length());
  }

  Element TreeView::slice_element(std::span<std::int32_t const> slice,
                                  std::size_t                   offset) const {
    Element out = _instance->identity();
    if (!_instance->is_amalgam()) {
      out.letters.assign(slice.begin(), slice.end());
      return out;
    }
    out.letters.reserve(slice.size());
    for (std::size_t k = 0; k < slice.size(); ++k) {
      if (slice[k] != 0) {
        out.letters.push_back(
            make_letter(slice[k], static_cast<int>((offset + k) % 2)));
      }
    }
    return out;
  }

  Element TreeView::representative(Vertex const& x) const {
    return slice_element(x.steps, 0);
  }

  Vertex TreeView::vertex_of(Element const& g, int vertex_type) const {
    Vertex out;
    if (!_instance->is_amalgam()) {
      out.steps = g.letters;
      return out;
    }
    auto const& l = g.letters;
    std::size_t n = l.size();
    if (n > 0 && letter_factor(l[n - 1]) == vertex_type) {
      --n;
    }
    if (n == 0) {
      if (vertex_type == kFactorB) {
        out.steps.push_back(0);
      }
      return out;
    }
    out.steps.reserve(n + 1);
    if (letter_factor(l[0]) == kFactorB) {
      out.steps.push_back(0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.steps.push_back(letter_rep(l[i]));
    }
    return out;
  }

  Vertex TreeView::act(Element const& g, Vertex const& x) const {
    return vertex_of(_instance->multiply(g, representative(x)), type(x));
  }

  OrientedPath TreeView::act(Element const& g, OrientedPath const& p) const {
    return OrientedPath{act(g, p.from), act(g, p.to)};
  }

  std::vector<Element> TreeView::stabilizer(Vertex const& x) const {
    auto const& inst = *_instance;
    if (!inst.is_amalgam()) {
      return {inst.identity()};
    }
    int const            t    = type(x);
    Element const        r    = representative(x);
    Element const        rinv = inst.invert(r);
    std::vector<Element> out;
    for (int s = 0; std::cmp_less(s, inst.group(t).order()); ++s) {
      out.push_back(inst.multiply(inst.multiply(r, inst.element_of(t, s)), rinv));
    }
    return out;
  }

  std::vector<Vertex> TreeView::sphere(Vertex const& x0,
                                       std::size_t   n,
                                       std::size_t   budget) const {
    BudgetCounter       counter{budget};
    std::vector<Vertex> out;
    // depth-first, never stepping back to the previous vertex
    auto rec = [&](auto& self, Vertex const& prev, Vertex const& cur, std::size_t d) -> void {
      counter.tick();
      if (d == n) {
        out.push_back(cur);
        return;
      }
      for (auto const& y : neighbors(cur)) {
        if (d == 0 || y != prev) {
          self(self, cur, y, d + 1);
        }
      }
    };
    rec(rec, x0, x0, 0);
    return out;
  }

  bool TreeView::sphere_transitivity(Vertex const& x0,
                                     std::size_t   n,
                                     std::size_t   budget) const {
    auto sph = sphere(x0, n, budget);
    if (sph.size() <= 1) {
      return true;
    }
    std::set<Vertex> orbit;
    for (auto const& s : stabilizer(x0)) {
      orbit.insert(act(s, sph.front()));
    }
    return orbit.size() == sph.size();
  }

  std::size_t TreeView::pointwise_stabilizer_order(Vertex const& u, Vertex const& w) const {
    std::size_t count = 0;
    for (auto const& s : stabilizer(u)) {
      if (act(s, w) == w) {
        ++count;
      }
    }
    return count;
  }

  std::vector<OrientedPath> TreeView::paths_from(Vertex const& start,
                                                 std::size_t   n,
                                                 WindowMode    mode,
                                                 std::size_t   budget) const {
    BudgetCounter             counter{budget};
    std::vector<OrientedPath> out;
    if (mode == WindowMode::orbit && !is_o_vertex(start)) {
      throw Error(ErrorKind::PreconditionViolated, "o(n)-geodesics start at an o-vertex");
    }
    auto rec = [&](auto&         self,
                   Vertex const& prev,
                   Vertex const& cur,
                   std::size_t   d,
                   std::size_t   o) -> void {
      counter.tick();
      bool const done = mode == WindowMode::metric ? d == n : (o == n && is_o_vertex(cur));
      if (done) {
        out.push_back(OrientedPath{start, cur});
        return;
      }
      for (auto const& y : neighbors(cur)) {
        if (d == 0 || y != prev) {
          self(self, cur, y, d + 1, o + (is_o_vertex(y) ? 1 : 0));
        }
      }
    };
    rec(rec, start, start, 0, 0);
    return out;
  }

  OrbitTable TreeView::enumerate_orbits(std::size_t       n,
                                        WindowMode        mode,
                                        std::size_t       budget,
                                        OrbitCache const* cache) const {
    if (n == 0) {
      throw Error(ErrorKind::PreconditionViolated, "n must be at least 1");
    }
    if (cache != nullptr) {
      if (auto hit = cache->load(*this, n, mode)) {
        return std::move(*hit);
      }
    }
    OrbitTable       table;
    std::vector<int> starts;
    if (mode == WindowMode::orbit) {
      starts = {kFactorA};
    } else {
      starts = visible_types();
    }
    std::size_t remaining = budget;
    for (int t : starts) {
      auto paths = paths_from(base_of_type(t), n, mode, remaining);
      remaining -= std::min(remaining, paths.size());
      for (auto& p : paths) {
        auto key = orbit_key(p);
        table.try_emplace(std::move(key), std::move(p));
      }
    }
    if (cache != nullptr) {
      cache->store(*this, n, mode, table);
    }
    return table;
  }

  std::vector<Vertex> TreeView::o_ball(std::size_t radius, std::size_t budget) const {
    BudgetCounter       counter{budget};
    std::vector<Vertex> out;
    auto rec = [&](auto& self, Vertex const& prev, Vertex const& cur, std::size_t d) -> void {
      counter.tick();
      if (is_o_vertex(cur)) {
        out.push_back(cur);
      }
      if (d == radius) {
        return;
      }
      for (auto const& y : neighbors(cur)) {
        if (d == 0 || y != prev) {
          self(self, cur, y, d + 1);
        }
      }
    };
    rec(rec, base(), base(), 0);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Element> TreeView::element_ball(std::size_t radius, std::size_t budget) const {
    auto const&          inst = *_instance;
    std::vector<Element> out;
    for (auto const& x : o_ball(radius, budget)) {
      Element const r = representative(x);
      if (!inst.is_amalgam()) {
        out.push_back(r);
        continue;
      }
      for (int s = 0; std::cmp_less(s, inst.group(kFactorA).order()); ++s) {
        out.push_back(inst.multiply(r, inst.element_of(kFactorA, s)));
      }
    }
    return out;
  }

  OrbitKey TreeView::relative_key(int from_type, int to_type, Element const& rel) const {
    auto const& inst = *_instance;
    OrbitKey    key;
    if (!inst.is_amalgam()) {
      key.text = "F>";
      for (std::size_t i = 0; i < rel.letters.size(); ++i) {
        if (i > 0) {
          key.text += '.';
        }
        append_free_step(key.text, rel.letters[i]);
      }
      return key;
    }
    std::string best;
    bool        first = true;
    std::string cand;
    for (int s = 0; std::cmp_less(s, inst.group(from_type).order()); ++s) {
      Element g = inst.element_of(from_type, s);
      g         = inst.multiply(g, rel);
      Vertex const y = vertex_of(g, to_type);
      cand.clear();
      cand += from_type == kFactorA ? 'A' : 'B';
      cand += '>';
      for (std::size_t i = 0; i < y.steps.size(); ++i) {
        if (i > 0) {
          cand += '.';
        }
        cand += std::to_string(y.steps[i]);
      }
      if (first || cand < best) {
        best  = cand;
        first = false;
      }
    }
    key.text = std::move(best);
    return key;
  }

  ////////////////////////////////////////////////////////////////////////
  // Geodesic
  ////////////////////////////////////////////////////////////////////////

  Geodesic::Geodesic(TreeView const& view, OrientedPath const& path)
      : _view(view),
        _from(path.from),
        _to(path.to),
        _lca(common_prefix(path.from, path.to)),
        _up(path.from.steps.size() - _lca),
        _down(path.to.steps.size() - _lca) {}

  Vertex Geodesic::vertex_at(std::size_t pos) const {
    if (pos <= _up) {
      return prefix(_from, _from.steps.size() - pos);
    }
    return prefix(_to, _lca + (pos - _up));
  }

  std::vector<std::size_t> Geodesic::visible_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p <= raw_length(); ++p) {
      if (_view.visible_type(type_at(p))) {
        out.push_back(p);
      }
    }
    return out;
  }

  std::vector<std::size_t> Geodesic::o_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p <= raw_length(); ++p) {
      if (_view.o_type(type_at(p))) {
        out.push_back(p);
      }
    }
    return out;
  }

  std::vector<std::pair<std::size_t, std::size_t>> Geodesic::windows(std::size_t n,
                                                                     WindowMode  mode) const {
    auto const pos = mode == WindowMode::metric ? visible_positions() : o_positions();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i + n < pos.size(); ++i) {
      out.emplace_back(pos[i], pos[i + n]);
    }
    return out;
  }

  Element Geodesic::relative(std::size_t i, std::size_t j) const {
    auto const& inst = _view.instance();
    auto const  di   = depth_at(i);
    auto const  dj   = depth_at(j);
    auto        span_of = [](Vertex const& x, std::size_t lo, std::size_t hi) {
      return std::span<std::int32_t const>(x.steps.data() + lo, hi - lo);
    };
    // positions i < j: rep(x_i) = P X', rep(x_j) = P Y' with P the steps
    // up to the meet of x_i and x_j
    if (j <= _up) {
      // x_j is an ancestor of x_i
      return inst.invert(_view.slice_element(span_of(_from, dj, di), dj));
    }
    if (i >= _up) {
      // x_i is an ancestor of x_j
      return _view.slice_element(span_of(_to, di, dj), di);
    }
    return inst.multiply(inst.invert(_view.slice_element(span_of(_from, _lca, di), _lca)),
                         _view.slice_element(span_of(_to, _lca, dj), _lca));
  }

  OrbitKey Geodesic::key(std::size_t i, std::size_t j) const {
    return _view.relative_key(type_at(i), type_at(j), relative(i, j));
  }

  OrbitKey Geodesic::reverse_key(std::size_t i, std::size_t j) const {
    return _view.relative_key(
        type_at(j), type_at(i), _view.instance().invert(relative(i, j)));
  }

}  // namespace treeqm
