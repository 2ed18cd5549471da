#pragma once

#include <stdexcept>
#include <string>

namespace m2o {

/* Contract errors carry a stable name so callers can branch on the failure
 * mode without parsing message text. */
class Error : public std::runtime_error {
 public:
  Error(const char* name, const std::string& what)
      : std::runtime_error(what), name_(name) {}
  const char* name() const noexcept { return name_; }

 private:
  const char* name_;
};

#define M2O_DEFINE_ERROR(NAME)                                       \
  class NAME : public Error {                                        \
   public:                                                           \
    explicit NAME(const std::string& what) : Error(#NAME, what) {}   \
  }

M2O_DEFINE_ERROR(NegativeArgument);   // cap() called with x < 0
M2O_DEFINE_ERROR(KTooSmall);          // constants defined for K >= 3 only
M2O_DEFINE_ERROR(DegenerateSweep);    // fewer than 3 sweep points
M2O_DEFINE_ERROR(PointNotInCodebook); // encode() input is not a fine-lattice point
M2O_DEFINE_ERROR(StateSpaceTooLarge); // exact enumeration would exceed the state guard
M2O_DEFINE_ERROR(CodebookTooLarge);   // nearest-point search guard q^N exceeded
M2O_DEFINE_ERROR(UserInactive);       // per-user simulation of a user with no layers
M2O_DEFINE_ERROR(ConfigError);        // config failed parsing or validation

#undef M2O_DEFINE_ERROR

}  // namespace m2o
