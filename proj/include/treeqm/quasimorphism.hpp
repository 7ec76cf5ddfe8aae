#ifndef TREEQM_QUASIMORPHISM_HPP_
#define TREEQM_QUASIMORPHISM_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treeqm/instance.hpp"
#include "treeqm/tree.hpp"

namespace treeqm {

  // Finitely supported integer function on concrete oriented geodesics.
  // Zero entries are never stored.
  class SparseChain {
   public:
    void add(OrientedPath const& p, std::int64_t value);

    [[nodiscard]] std::int64_t at(OrientedPath const& p) const;
    [[nodiscard]] std::int64_t l1() const;
    [[nodiscard]] bool         empty() const noexcept {
      return _entries.empty();
    }
    [[nodiscard]] std::size_t size() const noexcept {
      return _entries.size();
    }
    [[nodiscard]] std::map<OrientedPath, std::int64_t> const& entries() const noexcept {
      return _entries;
    }

    SparseChain& operator+=(SparseChain const& other);
    SparseChain& operator-=(SparseChain const& other);
    bool         operator==(SparseChain const&) const = default;

   private:
    std::map<OrientedPath, std::int64_t> _entries;
  };

  // The characteristic function of one orbit of windows.
  struct QmSpec {
    OrbitKey    orbit;
    WindowMode  mode = WindowMode::orbit;
    std::size_t n    = 1;
  };

  // Spec of the orbit of s; n is its length (metric) or o-length (orbit).
  // Throws PreconditionViolated if s is trivial or, in orbit mode, does not
  // start and end at o-vertices.
  QmSpec make_spec(TreeView const& view, OrientedPath const& s, WindowMode mode);

  // Subsegments of [x, y] of length n (metric) or of o-length n between
  // o-vertices (orbit), oriented as [x, y], in order.
  std::vector<OrientedPath> windows(TreeView const& view,
                                    Vertex const&   x,
                                    Vertex const&   y,
                                    std::size_t     n,
                                    WindowMode      mode);

  // +1 on the windows of [v, gv], -1 on those of [gv, v].
  SparseChain omega(TreeView const& view, Element const& g, std::size_t n, WindowMode mode);

  // pi(g): translate every supported geodesic by g.
  SparseChain translate(TreeView const& view, Element const& g, SparseChain const& chain);

  // pi(g) omega(h) - omega(gh) + omega(g)
  SparseChain coboundary_chain(TreeView const& view,
                               Element const&  g,
                               Element const&  h,
                               std::size_t     n,
                               WindowMode      mode);

  // Windows of [v, gv] in the spec orbit minus windows of [gv, v] in it.
  std::int64_t median_qm(TreeView const& view, QmSpec const& spec, Element const& g);

  // median_qm for every orbit of size n at once; zero values are omitted.
  std::map<OrbitKey, std::int64_t> orbit_profile(TreeView const& view,
                                                 Element const&  g,
                                                 std::size_t     n,
                                                 WindowMode      mode);

  struct DefectOptions {
    std::size_t                threads = 1;
    // scan this many uniformly drawn pairs instead of all pairs
    std::optional<std::size_t> sample;
    std::uint64_t              seed   = 0;
    std::size_t                budget = kDefaultBudget;
  };

  struct DefectResult {
    std::int64_t max_defect = 0;
    Element      g;
    Element      h;
    std::size_t  elements = 0;
    std::size_t  pairs    = 0;
  };

  // max |f(g) + f(h) - f(gh)| over g, h with d(v, gv), d(v, hv) <= 2 radius
  // (or a seeded sample of such pairs). Ties go to the first pair in ball
  // order. Throws ResourceLimit if the ball exceeds the budget.
  DefectResult defect_scan(TreeView const&      view,
                           QmSpec const&        spec,
                           std::size_t          radius,
                           DefectOptions const& options = {});

  struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] double      to_double() const noexcept {
      return static_cast<double>(num) / static_cast<double>(den);
    }
    bool operator==(Rational const&) const = default;
  };

  struct Homogenization {
    Rational                  limit;
    bool                      stabilized = false;
    // f(g^z) for z = 1..zmax
    std::vector<std::int64_t> values;
  };

  // Throws PreconditionViolated if zmax < 3.
  Homogenization homogenize(TreeView const& view,
                            QmSpec const&   spec,
                            Element const&  g,
                            std::size_t     zmax);

  // d(v, g^2 v) - d(v, gv) in the view; <= 0 iff g is elliptic.
  std::int64_t translation_length(TreeView const& view, Element const& g);

  // [p, gp] for p the o-vertex on the axis of g closest to v, ties broken
  // toward gv. Throws EllipticElement or NoOrbitVertexOnAxis.
  OrientedPath axis_segment(TreeView const& view, Element const& g);

}  // namespace treeqm

#endif  // TREEQM_QUASIMORPHISM_HPP_
