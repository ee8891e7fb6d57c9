#ifndef RICCI_TESTS_CHECKS_HPP
#define RICCI_TESTS_CHECKS_HPP

#include <functional>
#include <optional>

#include "ricci/errors.hpp"

namespace ricci::testing {

/// Runs f and reports the kind of the RicciError it throws, if any.
inline std::optional<ErrorKind> thrown_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const RicciError& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace ricci::testing

#endif
