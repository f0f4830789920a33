#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "subsetq/group_testing.hpp"
#include "subsetq/nonadaptive.hpp"
#include "subsetq/oracle.hpp"

namespace subsetq {

/// Group-testing algorithm with query size at most s.
struct Alg3Params {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t s = 2;
  double delta = 0.1;
  double scale = 1.0;

  /// Throws std::invalid_argument unless 1 <= k <= n, 2 <= s <= n, 0 < delta < 1.
  void validate() const;
};

struct Alg3Plan {
  QueryPlan plan;
  PointSet universe;
  std::vector<SupportRecoverProbe> probes;
};

Alg3Plan alg3_plan(const Alg3Params& params, std::uint64_t seed);
/// Keeps every recovered cluster once. Succeeds only if the distinct sets
/// partition the universe into exactly k clusters.
ReconstructionResult alg3_reconstruct(const Alg3Params& params, const Alg3Plan& built,
                                      const AnswerMap& answers);

/// Pair-graph algorithm with query size at most ceil(n^(1/r)).
struct Alg4Params {
  std::size_t n = 0;
  std::size_t k = 0;
  double r = 2.0;
  double delta = 0.1;
  double scale = 1.0;

  /// r = log n / log s.
  static Alg4Params from_size_bound(std::size_t n, std::size_t k, std::size_t s, double delta,
                                    double scale = 1.0);
  /// Throws std::invalid_argument unless 1 <= k <= n, n >= 4 and 2 <= r <= log2 n.
  void validate() const;
  /// ceil(n^(1/r)).
  std::size_t size_bound() const;
  /// max(1, ceil(log_r log2 n)).
  std::size_t phase_count() const;
};

PhasedPlan alg4_plan(const Alg4Params& params, std::uint64_t seed);
ReconstructionResult alg4_reconstruct(const Alg4Params& params, const PhasedPlan& built,
                                      const AnswerMap& answers);

/// Reference line max(ceil(n^2 / s^2), n). Throws std::invalid_argument
/// unless 2 <= s <= n.
std::uint64_t lower_bound_curve(std::uint64_t n, std::uint64_t s);

}  // namespace subsetq
