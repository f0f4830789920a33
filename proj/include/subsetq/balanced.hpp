#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "subsetq/nonadaptive.hpp"
#include "subsetq/oracle.hpp"
#include "subsetq/phases.hpp"

namespace subsetq {

struct BalancedParams {
  std::size_t n = 0;
  std::size_t k = 0;
  double B = 1.0;
  double delta = 0.1;
  double scale = 1.0;

  /// Throws std::invalid_argument unless 1 <= k <= n, B >= 1, 0 < delta < 1.
  void validate() const;
  /// ceil(k / B), the sample count of every sampled set.
  std::size_t set_samples() const;
};

/// ceil(scale * 2e * B^2 * ln(2k^2 / delta)).
std::size_t alg5_set_count(const BalancedParams& params);
/// ceil(scale * e * B^2 * ln(k / delta)).
std::size_t alg6_set_count(const BalancedParams& params);

struct Alg5Plan {
  QueryPlan plan;
  std::vector<SliceId> sets;  // the T_i
  PointSet sampled;           // union of the T_i
  PhaseLayout nested;         // the main algorithm run on `sampled`
  QueryId probe_first = 0;    // T_i, then T_i + x for every x, per set
};

Alg5Plan alg5_plan(const BalancedParams& params, std::uint64_t seed);
ReconstructionResult alg5_reconstruct(const BalancedParams& params, const Alg5Plan& built,
                                      const AnswerMap& answers);

struct Alg6Plan {
  QueryPlan plan;
  StarPhase star;  // one findrep table per R_i, probes = universe
};

Alg6Plan alg6_plan(const BalancedParams& params, std::uint64_t seed);
ReconstructionResult alg6_reconstruct(const BalancedParams& params, const Alg6Plan& built,
                                      const AnswerMap& answers);

}  // namespace subsetq
