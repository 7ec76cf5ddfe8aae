#ifndef TREEQM_ERROR_HPP_
#define TREEQM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace treeqm {

  enum class ErrorKind {
    NotLatinSquare,
    NoIdentity,
    NonAssociative,
    NotASubgroup,
    InvalidEmbedding,
    ImproperAmalgam,
    UnknownLetter,
    ParseError,
    InvalidPath,
    DegenerateTree,
    EllipticElement,
    EllipticProduct,
    NoOrbitVertexOnAxis,
    PreconditionViolated,
    ResourceLimit,
    Inconclusive,
    RealizationFailed,
    ParamsTooSmall,
    UndefinedInverseLabel,
    CacheError,
  };

  std::string_view to_string(ErrorKind kind) noexcept;

  // Every failure raised by the library carries a kind so that callers (and
  // the CLI exit-code mapping) can branch on it without parsing messages.
  class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          _kind(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept {
      return _kind;
    }

   private:
    ErrorKind _kind;
  };

}  // namespace treeqm

#endif  // TREEQM_ERROR_HPP_
