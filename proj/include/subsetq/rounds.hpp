#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subsetq/group_testing.hpp"
#include "subsetq/oracle.hpp"

namespace subsetq {

/// Raised when answers contradict what a routine's inputs guarantee.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Points of `order` at which the prefix count steps up. `prefix_counts[t]`
/// is count of the first t + 1 points. Throws PreconditionError unless the
/// counts start at 1 and each step is 0 or 1.
PointSet prefix_representatives(std::span<const std::uint32_t> prefix_counts,
                                std::span<const Point> order);

/// Edges of the same-cluster matching between S and T, from three counts.
std::size_t matching_size(std::size_t count_s, std::size_t count_t, std::size_t count_union);

using Matching = std::vector<std::pair<Point, Point>>;  // (a, representative)

/// Appends findrep probes for every a in `independent` against `reps`.
QueryId is_match_plan(QueryPlan& plan, const FindrepTable& reps, std::span<const Point> independent);
/// Throws PreconditionError if some a has no unique representative.
Matching is_match_decode(const AnswerMap& answers, const FindrepTable& reps,
                         std::span<const Point> independent, QueryId first);

/// Two rounds: all n prefixes, then findrep of every point against the
/// representatives. Needs a budget of at least two rounds.
ReconstructionResult alg7(Oracle& oracle);

struct Alg8Params {
  std::size_t k = 0;
  double B = 1.0;
  double delta = 0.1;
  std::optional<double> tau;  // default max(2, ln k)
  double scale = 1.0;

  void validate(std::size_t n) const;
  double tau_value() const;
  /// ceil(sqrt(k / (10 B))).
  std::size_t independent_set_samples() const;
  /// ceil(scale * 10 * sqrt(B / k) * n * ln(tau / delta)).
  std::size_t independent_set_count(std::size_t n) const;
};

/// Two rounds. Falls back to alg7 when the independent sets would hold fewer
/// than two samples.
ReconstructionResult alg8(Oracle& oracle, const Alg8Params& params, std::uint64_t seed);

/// Fully adaptive binary search, one query per round. When `per_item` is
/// given it receives the number of queries spent on each point.
ReconstructionResult adaptive_baseline(Oracle& oracle,
                                       std::vector<std::size_t>* per_item = nullptr);

/// One round with every pair queried.
ReconstructionResult pairwise_baseline(Oracle& oracle);

}  // namespace subsetq
