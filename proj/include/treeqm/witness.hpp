#ifndef TREEQM_WITNESS_HPP_
#define TREEQM_WITNESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treeqm/error.hpp"
#include "treeqm/labelling.hpp"
#include "treeqm/quasimorphism.hpp"

namespace treeqm {

  struct WordFamilyParams {
    std::size_t v0     = 6;
    std::size_t blocks = 4;
    // reject families whose words share a b-exponent
    bool        strict = true;
  };

  // a b^V a b^(V+1) ... a b^(V+blocks) with V = v0 (3n + i).
  // Throws ParamsTooSmall if V < 2.
  std::string word_family(std::size_t n, std::size_t i, WordFamilyParams const& params);

  // Throws ParamsTooSmall naming two requested (n, i) whose words share a
  // b-exponent. No-op unless params.strict.
  void check_exponents(std::vector<std::pair<std::size_t, std::size_t>> const& requests,
                       WordFamilyParams const&                                 params);

  std::string word_reverse(std::string_view w);
  // Reverse w and replace each letter by the label of the reversed orbits
  // carrying it. Throws UndefinedInverseLabel when orbits sharing a letter
  // reverse to orbits with different labels.
  std::string word_inverse(TreeView const& view, Labelling const& lab, std::string_view w);

  // Length of the longest common factor of two words.
  std::size_t longest_common_subword(std::string_view u, std::string_view w);

  struct WitnessSet {
    std::size_t                 n = 0;
    std::array<std::string, 3>  words;
    std::array<OrientedPath, 3> paths;
    std::array<Element, 3>      g;
    // g_n1 g_n3 = eta h
    Element                     product;
    Element                     eta;
    Element                     h;
    OrientedPath                s;
    QmSpec                      spec;
    // s contains g_n1 v, the end of the w_n1 part of [v, g_n1 g_n3 v]
    bool                        junction_ok = false;
  };

  // Throws RealizationFailed, EllipticProduct or ParamsTooSmall.
  WitnessSet build_witness(TreeView const&         view,
                           Labelling const&        lab,
                           std::size_t             n,
                           WordFamilyParams const& params,
                           std::size_t             budget = kDefaultBudget);

  // o-length of the intersection of two concrete o-geodesics (0 when they
  // share at most one o-vertex).
  std::size_t longest_common_o_subgeodesic(TreeView const&     view,
                                           OrientedPath const& gamma1,
                                           OrientedPath const& gamma2);

  // Largest L such that an o(L)-window of gamma1 lies in the orbit of an
  // o(L)-window of gamma2 or of its reverse, i.e. the longest overlap of
  // gamma1 with a translate of gamma2 or of its reverse. Throws
  // ResourceLimit after budget window keys.
  std::size_t max_translate_overlap(TreeView const&     view,
                                    OrientedPath const& gamma1,
                                    OrientedPath const& gamma2,
                                    std::size_t         budget = kDefaultBudget);

  struct MatrixEntry {
    std::size_t  n = 0;  // quasimorphism c_n
    std::size_t  m = 0;  // witness index
    std::size_t  z = 0;
    std::int64_t eta     = 0;  // c_n(eta_m^z)
    std::int64_t h       = 0;  // c_n(h_m^z)
    std::int64_t product = 0;  // c_n((eta_m h_m)^z)
  };

  struct IndependenceReport {
    std::size_t                 zmax = 0;
    std::vector<MatrixEntry>    entries;
    bool                        pass = false;
    std::string                 failure;
    // homogenisation of c_n on eta_n h_n
    std::vector<Homogenization> diagonal;
  };

  IndependenceReport independence_matrix(TreeView const&                view,
                                         std::vector<WitnessSet> const& witnesses,
                                         std::size_t                    zmax,
                                         std::size_t                    threads = 1);

}  // namespace treeqm

#endif  // TREEQM_WITNESS_HPP_
