#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fusion {

/// Base of every error raised by the library. `code()` is a stable
/// machine-readable tag, reused verbatim by the HTTP service.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define FUSION_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

FUSION_DEFINE_ERROR(ParseError)
FUSION_DEFINE_ERROR(EmptyTree)
FUSION_DEFINE_ERROR(NotPositive)
FUSION_DEFINE_ERROR(IllegalPrefix)
FUSION_DEFINE_ERROR(IllegalStrategy)
FUSION_DEFINE_ERROR(ConditionNotMet)
FUSION_DEFINE_ERROR(IncompatibleUnion)
FUSION_DEFINE_ERROR(NoSuchM)
FUSION_DEFINE_ERROR(Stuck)
FUSION_DEFINE_ERROR(BadParams)
FUSION_DEFINE_ERROR(NotYourTurn)
FUSION_DEFINE_ERROR(UnknownSession)

#undef FUSION_DEFINE_ERROR

/// A failed rule check: which clause, and a human-readable detail.
struct Violation {
  std::string clause;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// nullopt means the check passed.
using CheckResult = std::optional<Violation>;

}  // namespace fusion
