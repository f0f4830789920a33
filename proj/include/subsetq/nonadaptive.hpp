#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "subsetq/core.hpp"
#include "subsetq/oracle.hpp"
#include "subsetq/phases.hpp"

namespace subsetq {

struct NonAdaptiveParams {
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0.1;
  double scale = 1.0;

  /// Throws std::invalid_argument unless 1 <= k <= n, 0 < delta < 1, scale > 0.
  void validate() const;
};

using Phase = std::variant<StarPhase, PairPhase, SingletonPhase>;

struct PhaseLayout {
  PointSet universe;
  std::size_t k = 0;
  std::vector<Phase> phases;
};

/// A built plan plus the bookkeeping its reconstructor needs. The layout
/// only records where queries sit; it never sees answers.
struct PhasedPlan {
  QueryPlan plan;
  PhaseLayout layout;
};

/// Applies every phase in order, extending `labels`.
void apply_phases(const QueryPlan& plan, const PhaseLayout& layout, const AnswerMap& answers,
                  PartialLabels& labels);

/// Phase threshold for the findrep-star strategy: p <= log2(k^2 log2(n/delta)).
double alg1_star_limit(std::size_t n, std::size_t k, double delta);
/// Phase threshold for the singleton strategy: p <= log2 log2(n/delta).
double alg2_singleton_limit(std::size_t n, double delta);

/// Appends the main unbounded algorithm's queries over `universe` to `plan`.
/// Used directly for nested runs on a sub-universe.
PhaseLayout alg1_append(QueryPlan& plan, std::span<const Point> universe, std::size_t k,
                        double delta, double scale, Rng& rng);

PhasedPlan alg1_plan(const NonAdaptiveParams& params, std::uint64_t seed);
ReconstructionResult alg1_reconstruct(const NonAdaptiveParams& params, const PhasedPlan& built,
                                      const AnswerMap& answers);

PhasedPlan alg2_plan(const NonAdaptiveParams& params, std::uint64_t seed);
ReconstructionResult alg2_reconstruct(const NonAdaptiveParams& params, const PhasedPlan& built,
                                      const AnswerMap& answers);

/// ceil(x) for repeat counts, with a floor of 1.
std::size_t repeat_count(double x);

}  // namespace subsetq
