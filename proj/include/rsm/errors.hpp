#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rsm {

// A grid violated the tiling or regularity contract while an operation
// depended on it (broken tiling discovered during a neighbor search, etc).
struct InconsistentGridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field transfer target is not reachable from the source grid by pure
// refinement (project_up) or pure coarsening (project_down).
struct GridMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Euler state with rho <= 0 or p <= 0; carries the offending matrix line.
struct NonphysicalStateError : std::runtime_error {
  NonphysicalStateError(const std::string& what, std::uint32_t line)
      : std::runtime_error(what), line(line) {}
  std::uint32_t line = 0;
};

// A solver value crossed the configured blow-up guard.
struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rsm
