#ifndef TREEQM_LABELLING_HPP_
#define TREEQM_LABELLING_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treeqm/instance.hpp"
#include "treeqm/tree.hpp"

namespace treeqm {

  class OrbitCache;

  // Labels in {a, b, c} on the orbits of o(k)-geodesics.
  struct Labelling {
    std::size_t                 k = 1;
    std::map<OrbitKey, char>    labels;
    // one representative per labelled orbit
    OrbitTable                  representatives;
    // 1a, 1b, 1c, 2a or 3a
    std::string                 provenance;

    [[nodiscard]] char letter(OrbitKey const& key) const;
    [[nodiscard]] std::vector<OrbitKey> keys_with(char letter) const;
  };

  // Label of each o(k)-window of p, in order; empty if o-length < k.
  std::string label_of_path(TreeView const& view, Labelling const& lab, OrientedPath const& p);

  // Either a and b each label exactly one orbit, or no orbit labelled b is
  // the reverse of an orbit labelled a.
  bool reversal_compatible(TreeView const& view, Labelling const& lab);

  // True iff w is a nonempty concatenation of blocks a b^N with N >= 2.
  bool is_good_word(std::string_view w);

  // An o-geodesic from v whose label is w, found depth first over the
  // children in neighbour order. The empty word gives an unlabelled stub of
  // o-length k - 1. Throws Error{RealizationFailed} naming the deepest
  // position reached when the node budget runs out or no extension exists.
  OrientedPath realize_word(TreeView const&  view,
                            Labelling const& lab,
                            std::string_view w,
                            std::size_t      budget = kDefaultBudget);

  struct Chainability {
    bool    chainable = false;
    Element xi;
    Element g;
  };

  // Whether some xi gamma1 and g gamma2 meet exactly in the end of the
  // first, which is the start of the second. Only translates through the
  // end of gamma1 need checking (xi = e), and those are indexed by
  // Stab(v).
  Chainability chainable(TreeView const& view, OrientedPath const& gamma1, OrientedPath const& gamma2);

  struct LambdaGraph {
    // edge[i][j]: e_(i+1) is chainable with e_(j+1)
    std::array<std::array<bool, 3>, 3> edge{};

    [[nodiscard]] std::size_t out_degree(std::size_t i) const;
    [[nodiscard]] bool        operator==(LambdaGraph const&) const = default;
  };

  // Throws PreconditionViolated if two of the o-edges share an orbit or
  // more than their common start.
  LambdaGraph build_lambda(TreeView const&     view,
                           OrientedPath const& e1,
                           OrientedPath const& e2,
                           OrientedPath const& e3);

  struct LambdaCase {
    // "1a", "1b", "1c", or empty if the graph fits none of them
    std::string which;
    // for 1a: the bigon-loop i <-> j with a loop at j (0-based)
    std::size_t i = 0;
    std::size_t j = 0;
  };

  LambdaCase lambda_case(LambdaGraph const& lambda);

  struct OrbitCounts {
    // first n with more than one orbit of o(n)-geodesics
    std::optional<std::size_t> k;
    // counts[n - 1] for n = 1.. as far as computed
    std::vector<std::size_t>   counts;
  };

  OrbitCounts minimal_nontransitive_k(TreeView const&   view,
                                      std::size_t       kmax,
                                      std::size_t       budget = kDefaultBudget,
                                      OrbitCache const* cache  = nullptr);

  // Orientation of the edges of a finite piece of tree from signed o-edges.
  // Vertices are integers; each o-edge is its vertex sequence with sign +1
  // (orients its edges forward) or -1 (backward). Every edge met must get
  // exactly one direction and each listed interior vertex exactly one
  // incoming edge.
  struct SignedOEdge {
    std::vector<int> vertices;
    int              sign = 1;
  };

  struct Orientation {
    bool                             ok = false;
    // directed edges (tail, head), sorted
    std::vector<std::pair<int, int>> edges;
    std::string                      failure;
  };

  Orientation orient_edges(std::vector<SignedOEdge> const& o_edges,
                           std::vector<int> const&         interior);

  enum class Verdict { CaseI, CaseII, CaseIII, Inconclusive };
  std::string_view to_string(Verdict v) noexcept;

  struct Certificate {
    Verdict                    verdict = Verdict::Inconclusive;
    std::string                provenance;
    std::size_t                kmax = 0;
    std::size_t                k    = 0;
    // CaseI: metric length of o-edges
    std::size_t                l = 0;
    std::vector<std::size_t>   orbit_counts;
    std::optional<Labelling>   labelling;
    // e1, e2, e3 (Case 1) or e1, e1', e2 (Case 2)
    std::vector<OrientedPath>  witnesses;
    std::optional<LambdaGraph> lambda;
    // CaseII
    std::size_t                ball_radius = 0;
    std::optional<Orientation> orientation;
    std::string                note;
  };

  struct ClassifyOptions {
    std::size_t       budget         = kDefaultBudget;
    OrbitCache const* cache          = nullptr;
    // radius of the ball on which a fixed end is certified
    std::size_t       orient_radius  = 6;
  };

  // Runs the case analysis. Never guesses: searches that cannot complete
  // give Verdict::Inconclusive with a note. ResourceLimit propagates.
  Certificate classify(TreeView const& view, std::size_t kmax, ClassifyOptions const& options = {});

}  // namespace treeqm

#endif  // TREEQM_LABELLING_HPP_
