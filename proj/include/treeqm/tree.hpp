#ifndef TREEQM_TREE_HPP_
#define TREEQM_TREE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treeqm/instance.hpp"

namespace treeqm {

  class OrbitCache;

  // A vertex of the tree, written as the sequence of child choices from the
  // root [A] (amalgam) or the identity (free group). Ancestors are prefixes.
  //
  // Amalgam: step d picks a left-coset representative of C in A (d even) or
  // B (d odd). Only step 0 may be the identity representative; the vertex
  // (0) is [B]. The type of a vertex is the parity of its depth (even = A).
  // Free group: the freely reduced word of the vertex.
  struct Vertex {
    std::vector<std::int32_t> steps;

    auto operator<=>(Vertex const&) const = default;
    bool operator==(Vertex const&) const  = default;
  };

  // An oriented geodesic. In a tree the geodesic is determined by its
  // endpoints, so only those are stored; TreeView::vertices() expands it.
  struct OrientedPath {
    Vertex from;
    Vertex to;

    [[nodiscard]] OrientedPath reversed() const {
      return {to, from};
    }
    auto operator<=>(OrientedPath const&) const = default;
    bool operator==(OrientedPath const&) const  = default;
  };

  // Canonical representative of the orbit of an oriented geodesic: the start
  // type, then the steps of the end vertex after translating the start to
  // its base vertex, minimised lexicographically over the stabiliser of that
  // base vertex. Free-group steps are written "1+", "1-", "2+", ... so that
  // generators sort before their inverses.
  struct OrbitKey {
    std::string text;

    auto operator<=>(OrbitKey const&) const = default;
    bool operator==(OrbitKey const&) const  = default;
  };

  enum class ViewMode { raw, suppressed };
  enum class WindowMode { metric, orbit };

  std::string_view to_string(ViewMode mode) noexcept;
  std::string_view to_string(WindowMode mode) noexcept;

  using OrbitTable = std::map<OrbitKey, OrientedPath>;

  inline constexpr std::size_t kDefaultBudget = 2'000'000;

  class Geodesic;

  // The tree of an instance, either as is (raw) or with every vertex of
  // valence 2 merged into the edge through it (suppressed). The base vertex
  // v is [A] (amalgam) or the identity (free). Immutable.
  class TreeView {
   public:
    TreeView(std::shared_ptr<Instance const> instance, ViewMode mode);

    [[nodiscard]] Instance const& instance() const noexcept {
      return *_instance;
    }
    [[nodiscard]] std::shared_ptr<Instance const> const& instance_ptr() const noexcept {
      return _instance;
    }
    [[nodiscard]] ViewMode mode() const noexcept {
      return _mode;
    }
    // Vertex type merged away in this view, if any (only ever B).
    [[nodiscard]] std::optional<int> hidden_type() const noexcept {
      return _hidden;
    }

    [[nodiscard]] int  type_at_depth(std::size_t depth) const noexcept;
    [[nodiscard]] int  type(Vertex const& x) const noexcept {
      return type_at_depth(x.steps.size());
    }
    [[nodiscard]] bool visible_type(int t) const noexcept {
      return !_hidden || *_hidden != t;
    }
    [[nodiscard]] bool visible(Vertex const& x) const noexcept {
      return visible_type(type(x));
    }
    // Vertices in the orbit of the base vertex.
    [[nodiscard]] bool o_type(int t) const noexcept {
      return t == kFactorA;
    }
    [[nodiscard]] bool is_o_vertex(Vertex const& x) const noexcept {
      return o_type(type(x));
    }
    // Vertex types present in this view (A, and B unless hidden).
    [[nodiscard]] std::vector<int> visible_types() const;

    [[nodiscard]] Vertex base() const {
      return Vertex{};
    }
    // [A] or [B].
    [[nodiscard]] Vertex base_of_type(int t) const;

    // Raw neighbours are ordered by transversal index (amalgam) or by
    // generator x, x^-1, y, y^-1, ... (free); merged neighbours follow the
    // same order through each hidden vertex.
    [[nodiscard]] std::vector<Vertex> neighbors(Vertex const& x) const;
    [[nodiscard]] std::vector<Vertex> raw_neighbors(Vertex const& x) const;

    [[nodiscard]] OrientedPath geodesic(Vertex const& x, Vertex const& y) const;
    // Builds a path from consecutive view vertices; throws Error{InvalidPath}
    // if they are not adjacent or the sequence backtracks.
    [[nodiscard]] OrientedPath path_from_vertices(std::span<Vertex const> seq) const;
    [[nodiscard]] std::vector<Vertex> vertices(OrientedPath const& p) const;
    [[nodiscard]] std::size_t         length(OrientedPath const& p) const;
    [[nodiscard]] std::size_t         distance(Vertex const& x, Vertex const& y) const;
    // Number of o-vertices on p minus one; nullopt when p has none.
    [[nodiscard]] std::optional<std::size_t> o_length(OrientedPath const& p) const;
    [[nodiscard]] Vertex median(Vertex const& x, Vertex const& y, Vertex const& z) const;
    // True iff m lies on p strictly between its endpoints.
    [[nodiscard]] bool interior_contains(OrientedPath const& p, Vertex const& m) const;

    [[nodiscard]] OrbitKey orbit_key(OrientedPath const& p) const;

    // Group action.
    [[nodiscard]] Element      representative(Vertex const& x) const;
    [[nodiscard]] Vertex       vertex_of(Element const& g, int vertex_type) const;
    [[nodiscard]] Vertex       act(Element const& g, Vertex const& x) const;
    [[nodiscard]] OrientedPath act(Element const& g, OrientedPath const& p) const;
    [[nodiscard]] std::vector<Element> stabilizer(Vertex const& x) const;

    // Vertices at view distance exactly n from x0. Throws ResourceLimit.
    [[nodiscard]] std::vector<Vertex> sphere(Vertex const& x0,
                                             std::size_t   n,
                                             std::size_t   budget = kDefaultBudget) const;
    [[nodiscard]] bool sphere_transitivity(Vertex const& x0,
                                           std::size_t   n,
                                           std::size_t   budget = kDefaultBudget) const;
    [[nodiscard]] std::size_t pointwise_stabilizer_order(Vertex const& u,
                                                         Vertex const& w) const;

    // All geodesics from start of length n (metric) or o-length n ending at
    // an o-vertex (orbit), in depth-first neighbour order.
    [[nodiscard]] std::vector<OrientedPath> paths_from(Vertex const& start,
                                                       std::size_t   n,
                                                       WindowMode    mode,
                                                       std::size_t budget
                                                       = kDefaultBudget) const;

    // One representative per orbit of oriented geodesics of length n
    // (metric: anchored at each visible base vertex) or of o(n)-geodesics
    // (orbit: anchored at v). Throws ResourceLimit.
    [[nodiscard]] OrbitTable enumerate_orbits(std::size_t n,
                                              WindowMode  mode,
                                              std::size_t budget = kDefaultBudget,
                                              OrbitCache const* cache = nullptr) const;

    // o-vertices within view distance radius of v, sorted.
    [[nodiscard]] std::vector<Vertex> o_ball(std::size_t radius,
                                             std::size_t budget = kDefaultBudget) const;
    // All g with d(v, gv) <= radius, i.e. representative(x) * Stab(v) over
    // the o-ball.
    [[nodiscard]] std::vector<Element> element_ball(std::size_t radius,
                                                    std::size_t budget
                                                    = kDefaultBudget) const;

    // Key of the path from base [from_type] to the vertex rel * [to_type].
    [[nodiscard]] OrbitKey relative_key(int from_type, int to_type, Element const& rel) const;
    // Element of the steps slice [offset, offset + slice.size()).
    [[nodiscard]] Element slice_element(std::span<std::int32_t const> slice,
                                        std::size_t offset) const;

   private:
    std::shared_ptr<Instance const> _instance;
    ViewMode                        _mode;
    std::optional<int>              _hidden;
  };

  // Suppressed view; throws Error{DegenerateTree} when the merged tree is a
  // point, an edge or a line, or when the base vertex itself has valence 2.
  TreeView suppress_valence2(std::shared_ptr<Instance const> instance);

  // Random access along one geodesic without expanding every vertex. Raw
  // positions run 0..raw_length(); position i is the i-th raw vertex.
  class Geodesic {
   public:
    Geodesic(TreeView const& view, OrientedPath const& path);
    Geodesic(TreeView const&, OrientedPath&&) = delete;
    Geodesic(TreeView&&, OrientedPath const&)  = delete;

    [[nodiscard]] std::size_t raw_length() const noexcept {
      return _up + _down;
    }
    [[nodiscard]] std::size_t depth_at(std::size_t pos) const noexcept {
      return pos <= _up ? _from.steps.size() - pos : _lca + (pos - _up);
    }
    [[nodiscard]] int type_at(std::size_t pos) const noexcept {
      return _view.type_at_depth(depth_at(pos));
    }
    [[nodiscard]] Vertex vertex_at(std::size_t pos) const;
    // Raw positions of view vertices and of o-vertices.
    [[nodiscard]] std::vector<std::size_t> visible_positions() const;
    [[nodiscard]] std::vector<std::size_t> o_positions() const;
    // Window endpoints as raw positions, in order along the path.
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>>
    windows(std::size_t n, WindowMode mode) const;

    // Orbit key of the subpath between raw positions i < j, and of its
    // reverse.
    [[nodiscard]] OrbitKey key(std::size_t i, std::size_t j) const;
    [[nodiscard]] OrbitKey reverse_key(std::size_t i, std::size_t j) const;
    [[nodiscard]] OrientedPath subpath(std::size_t i, std::size_t j) const {
      return {vertex_at(i), vertex_at(j)};
    }

   private:
    // rep(vertex_at(i))^-1 * rep(vertex_at(j))
    [[nodiscard]] Element relative(std::size_t i, std::size_t j) const;

    TreeView const& _view;
    Vertex const&   _from;
    Vertex const&   _to;
    std::size_t     _lca;
    std::size_t     _up;
    std::size_t     _down;
  };

}  // namespace treeqm

#endif  // TREEQM_TREE_HPP_
