#pragma once

#include <cstddef>
#include <cstdint>

namespace awb {

/// Caps on every exhaustive computation. Exceeding one raises ResourceError.
struct Budget {
  std::size_t max_window = 24;        // width of an enumerated window
  std::size_t max_results = 1u << 20; // sets or points produced by an enumeration
  std::size_t max_support = 20;       // support size for exhaustive certificate checks
  std::size_t max_evaluations = 4096; // norm evaluations in estimators
  unsigned threads = 1;               // worker threads for verification
  std::uint64_t seed = 0;             // 0 = fully deterministic order
};

}  // namespace awb
