#ifndef TREEQM_INSTANCE_HPP_
#define TREEQM_INSTANCE_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeqm/finite_group.hpp"

namespace treeqm {

  enum class InstanceKind { amalgam, free };

  // Factor indices used throughout: the two vertex groups and the edge group.
  inline constexpr int kFactorA = 0;
  inline constexpr int kFactorB = 1;
  inline constexpr int kFactorC = 2;

  // A group element in normal form.
  //
  // Amalgam: g = t_1 t_2 ... t_k c where the t_i are nontrivial left-coset
  // representatives of C, alternating between A and B, and c is in C. Each
  // letter is encoded as rep_index * 2 + factor.
  //
  // Free group: a freely reduced word of signed 1-based generator indices;
  // c is unused and stays 0.
  struct Element {
    std::vector<std::int32_t> letters;
    std::int32_t              c = 0;

    auto operator<=>(Element const&) const = default;
    bool operator==(Element const&) const  = default;
  };

  inline constexpr int letter_factor(std::int32_t letter) noexcept {
    return letter & 1;
  }
  inline constexpr int letter_rep(std::int32_t letter) noexcept {
    return letter >> 1;
  }
  inline constexpr std::int32_t make_letter(int rep, int factor) noexcept {
    return static_cast<std::int32_t>(rep * 2 + factor);
  }

  // A letter of an input word: an element of A, B or C, or a signed free
  // generator (factor == -1).
  struct WordLetter {
    int factor = -1;
    int value  = 0;
  };
  using Word = std::vector<WordLetter>;

  // A group acting on a simplicial tree: either an amalgam A *_C B of finite
  // groups acting on its Bass-Serre tree, or a free group acting on its
  // Cayley tree. Immutable after construction.
  class Instance {
   public:
    // Throws Error{ImproperAmalgam} unless C is a proper subgroup of both.
    static Instance amalgam(FiniteGroup a,
                            FiniteGroup b,
                            FiniteGroup c,
                            Embedding   embed_a,
                            Embedding   embed_b);

    // Generator names default to x, y (rank 2), x, y, z (rank 3), x1..xr.
    static Instance free(int rank, std::vector<std::string> generator_names = {});

    [[nodiscard]] InstanceKind kind() const noexcept {
      return _kind;
    }
    [[nodiscard]] bool is_amalgam() const noexcept {
      return _kind == InstanceKind::amalgam;
    }
    [[nodiscard]] int rank() const noexcept {
      return _rank;
    }
    [[nodiscard]] std::vector<std::string> const& generator_names() const noexcept {
      return _generator_names;
    }

    [[nodiscard]] FiniteGroup const& group(int factor) const;
    // Image of C-element c in factor A or B.
    [[nodiscard]] int embed(int factor, int c) const {
      return _embed[factor][static_cast<std::size_t>(c)];
    }
    // Preimage in C of an element of A or B, if any.
    [[nodiscard]] std::optional<int> preimage(int factor, int x) const;
    // Left-coset representatives of C in A or B; entry 0 is the identity.
    [[nodiscard]] std::vector<int> const& transversal(int factor) const {
      return _reps[factor];
    }
    // |A/C| or |B/C|.
    [[nodiscard]] int index(int factor) const {
      return static_cast<int>(_reps[factor].size());
    }
    // x = transversal(factor)[rep] * embed(factor, c).
    [[nodiscard]] std::pair<int, int> split(int factor, int x) const {
      return _split[factor][static_cast<std::size_t>(x)];
    }
    // The images of C in factor A or B.
    [[nodiscard]] std::vector<int> subgroup_image(int factor) const;

    [[nodiscard]] Element identity() const;
    // The element of A or B (or C) as a normal form.
    [[nodiscard]] Element element_of(int factor, int x) const;

    // Throws Error{UnknownLetter} on letters outside the generating data.
    [[nodiscard]] Element normal_form(Word const& word) const;
    [[nodiscard]] Element multiply(Element const& a, Element const& b) const;
    [[nodiscard]] Element invert(Element const& a) const;
    [[nodiscard]] Element power(Element const& a, int exponent) const;

    // In-place right multiplication by one element of A or B (amalgam) or
    // one signed generator (free, factor ignored).
    void mul_letter(Element& g, int factor, int x) const;

    // Words: tokens separated by blanks or '*'. Amalgam tokens are
    // "A:name", "B:name" or "C:name"; free tokens are generator names. Any
    // token may carry an integer exponent "^k"; "e" is the identity.
    [[nodiscard]] Word    parse_word(std::string_view text) const;
    [[nodiscard]] Element parse_element(std::string_view text) const {
      return normal_form(parse_word(text));
    }
    // Inverse of parse_element up to normal form.
    [[nodiscard]] std::string format(Element const& g) const;

    // The same amalgam with A and B exchanged, so that the base vertex becomes
    // the former [B]. Free instances are returned unchanged.
    [[nodiscard]] Instance rerooted() const;

    // Canonical text from which the instance hash is computed.
    [[nodiscard]] std::string const& canonical_description() const noexcept {
      return _description;
    }
    [[nodiscard]] std::uint64_t hash() const noexcept {
      return _hash;
    }
    [[nodiscard]] std::string hash_hex() const;

   private:
    Instance() = default;
    void finish();

    InstanceKind             _kind = InstanceKind::free;
    int                      _rank = 0;
    std::vector<std::string> _generator_names;

    // A, B, C
    std::vector<FiniteGroup>                       _groups;
    std::vector<int>                               _embed[2];
    std::vector<int>                               _preimage[2];
    std::vector<int>                               _reps[2];
    std::vector<std::pair<int, int>>               _split[2];
    std::string                                    _description;
    std::uint64_t                                  _hash = 0;
  };

}  // namespace treeqm

#endif  // TREEQM_INSTANCE_HPP_
