#ifndef TREEQM_FINITE_GROUP_HPP_
#define TREEQM_FINITE_GROUP_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treeqm {

  // A finite group given by a multiplication table over named elements.
  // table[i][j] is the index of elements[i] * elements[j].
  class FiniteGroup {
   public:
    // Validates the table: Latin square, two-sided identity, associativity.
    // Throws Error{NotLatinSquare | NoIdentity | NonAssociative}.
    static FiniteGroup from_table(std::vector<std::string>        elements,
                                  std::vector<std::vector<int>> const& table);

    // Integers mod n, elements named "0".."n-1".
    static FiniteGroup cyclic(int n);

    // Permutations of {0..n-1} in lexicographic order of their one-line
    // notation, so index 0 is the identity. Names are the images joined
    // ("102" for n <= 9, "1.0.2" above). Product p*q is p after q.
    static FiniteGroup symmetric(int n);

    // "cyclic:N" or "sym:N".
    static FiniteGroup builtin(std::string const& spec);

    [[nodiscard]] std::size_t order() const noexcept {
      return _names.size();
    }
    [[nodiscard]] int identity() const noexcept {
      return _identity;
    }
    [[nodiscard]] int mul(int x, int y) const noexcept {
      return _table[static_cast<std::size_t>(x) * order()
                    + static_cast<std::size_t>(y)];
    }
    [[nodiscard]] int inv(int x) const noexcept {
      return _inverse[static_cast<std::size_t>(x)];
    }
    [[nodiscard]] std::string const& name(int x) const {
      return _names.at(static_cast<std::size_t>(x));
    }
    [[nodiscard]] std::vector<std::string> const& names() const noexcept {
      return _names;
    }
    [[nodiscard]] std::optional<int> find(std::string const& name) const;

    // Checks closure under the table (a nonempty finite subset closed under
    // multiplication is a subgroup). Throws Error{NotASubgroup}.
    void check_subgroup(std::span<int const> subset) const;

   private:
    FiniteGroup() = default;

    std::vector<std::string> _names;
    std::vector<int>         _table;
    std::vector<int>         _inverse;
    int                      _identity = 0;
  };

  // An injective homomorphism source -> target given on element indices.
  struct Embedding {
    std::vector<int> map;

    // Throws Error{InvalidEmbedding} unless map is an injective homomorphism.
    static Embedding checked(FiniteGroup const& source,
                             FiniteGroup const& target,
                             std::vector<int>   map);
  };

  // Number of double cosets H1\G/H2. Throws Error{NotASubgroup}.
  std::size_t double_coset_count(FiniteGroup const&  group,
                                 std::span<int const> h1,
                                 std::span<int const> h2);

}  // namespace treeqm

#endif  // TREEQM_FINITE_GROUP_HPP_
