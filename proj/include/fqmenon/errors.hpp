#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fqmenon {

// Malformed text input (field specs, polynomials, instance files).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A brute-force enumeration would exceed the configured term budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t requested,
                 std::uint64_t limit)
      : std::runtime_error(what + ": " + std::to_string(requested) +
                           " terms requested, budget is " +
                           std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  std::uint64_t requested() const { return requested_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t requested_;
  std::uint64_t limit_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

// Upper bound on loop iterations for any brute-force count.
class Budget {
 public:
  static constexpr std::uint64_t kDefaultLimit = 100'000'000;

  constexpr Budget() = default;
  constexpr explicit Budget(std::uint64_t limit) : limit_(limit) {}

  // Default limit, overridden by FQMENON_BUDGET when that parses as an integer.
  static Budget from_env() {
    if (const char* env = std::getenv("FQMENON_BUDGET")) {
      try {
        std::size_t used = 0;
        const std::string text(env);
        const unsigned long long value = std::stoull(text, &used);
        if (used == text.size()) return Budget(value);
      } catch (const std::exception&) {
      }
    }
    return Budget();
  }

  constexpr std::uint64_t limit() const { return limit_; }

  // `terms` is saturated at UINT64_MAX by callers that overflow.
  void charge(std::uint64_t terms, const std::string& what) const {
    if (terms > limit_) throw BudgetExceeded(what, terms, limit_);
  }

 private:
  std::uint64_t limit_ = kDefaultLimit;
};

// a^b saturating at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) return UINT64_MAX;
    result *= base;
  }
  return result;
}

}  // namespace fqmenon
