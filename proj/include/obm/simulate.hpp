#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "obm/model.hpp"

namespace obm {

struct SimConfig {
  ModelParams params;
  double T = 1.0;
  std::size_t N = 1;
  std::size_t substeps = 1;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidConfig) on T <= 0, N < 1, substeps < 1, or
  /// invalid params.
  void validate() const;
};

/// Observation of one trajectory at times iT/N, i = 0..N.
struct PathGrid {
  double T = 0.0;
  std::size_t N = 0;
  std::vector<double> values;  // N + 1 entries

  double dt() const noexcept { return T / static_cast<double>(N); }
  double time(std::size_t i) const noexcept {
    return T * static_cast<double>(i) / static_cast<double>(N);
  }
  double front() const { return values.front(); }
  double back() const { return values.back(); }

  /// Throws Error(InvalidConfig) if the shape or values are inconsistent.
  void validate() const;

  friend bool operator==(const PathGrid&, const PathGrid&) = default;
};

/// Euler–Maruyama on N·substeps steps of size T/(N·substeps), coefficients
/// frozen at the left point, keeping every substeps-th value.
PathGrid simulate_path(const SimConfig& cfg);

/// Replication i is simulate_path with seed rng::split(cfg.seed, i).
/// Output does not depend on `threads` (0 = default_thread_count()).
std::vector<PathGrid> simulate_batch(const SimConfig& cfg, std::size_t replications,
                                     unsigned threads = 0);

/// CSV with header `t,x`, 17 significant digits.
void write_path_csv(std::ostream& out, const PathGrid& path);

/// Parses `t,x` CSV. Throws Error(ParseError) on malformed input and
/// Error(NonUniformGrid) when time steps differ from (t_N − t_0)/N by more
/// than 1e−9 relative.
PathGrid read_path_csv(std::istream& in);

}  // namespace obm
