#pragma once
// Internal consistency checks that stay on in release builds. A failed check
// means a bug in the engine itself (a protocol invariant broke), never bad
// user input, so it throws std::logic_error with the failing expression.

#include <sstream>
#include <stdexcept>
#include <string>

namespace gossipmab::detail {

[[noreturn]] inline void check_failed(const char* expr, const char* file, int line) {
  std::ostringstream os;
  os << "internal invariant violated: " << expr << " (" << file << ":" << line << ")";
  throw std::logic_error(os.str());
}

}  // namespace gossipmab::detail

#define GOSSIPMAB_CHECK(expr) \
  ((expr) ? static_cast<void>(0) : ::gossipmab::detail::check_failed(#expr, __FILE__, __LINE__))
