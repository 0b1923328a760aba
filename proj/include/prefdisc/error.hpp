#pragma once

#include <stdexcept>
#include <string>

namespace prefdisc {

inline constexpr const char* kVersion = "0.1.0";

enum class errc {
  invalid_argument,      // bad value, bad shape, alternative not in menu, ...
  unsupported_size,      // operation needs a larger universe
  missing_data,          // a required (t, menu) table is absent
  degenerate_odds,       // a probability at or below the positivity floor
  not_softmax,           // identification ran into an impossible noise value
  numeric_precondition,  // e.g. intransitive initial condition
  runaway,               // step budget exhausted in a sampler
  nonconvergence,        // iterative solver did not reach tolerance
  io_error,
  schema_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace prefdisc
