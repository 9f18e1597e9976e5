#pragma once

#include <stdexcept>

namespace pcl {

// A structurally valid request that the process cannot satisfy (e.g. a table
// allocation past available memory). Distinct from std::invalid_argument so
// callers can map the two to different diagnostics.
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sieve cache file that fails magic/size validation or the load-time
// spot-check against recomputed entries.
class cache_format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcl
