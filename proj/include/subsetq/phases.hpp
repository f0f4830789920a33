#pragma once

// Reconstruction phases shared by the non-adaptive algorithms. Each phase
// records where its queries sit in a plan; the matching reconstruct call
// extends a PartialLabels using only the plan and the answers.

#include <cstddef>
#include <vector>

#include "subsetq/core.hpp"
#include "subsetq/group_testing.hpp"
#include "subsetq/oracle.hpp"

namespace subsetq {

/// Findrep of every probe point against several reference sets. Edges x-y
/// for one(y) outcomes form a bipartite graph; left-side components of at
/// least `promote_at` points become clusters.
struct StarPhase {
  std::vector<FindrepTable> tables;
  PointSet probes;
  QueryId first = 0;
  std::size_t per_probe = 0;  // queries per (probe, table) pair
  double promote_at = 0;

  /// Probe-major layout: for each probe, one findrep per table.
  void add_queries(QueryPlan& plan);
  void reconstruct(const AnswerMap& answers, PartialLabels& labels) const;
};

/// Sampled sets queried alone. A set with exactly two unlabeled points yields
/// that pair's count by subtracting the known labels; same-cluster pairs form
/// a graph whose large components become clusters.
struct PairPhase {
  std::vector<SliceId> sets;
  PointSet universe;
  QueryId first = 0;
  double promote_at = 0;

  void add_queries(QueryPlan& plan);
  void reconstruct(const QueryPlan& plan, const AnswerMap& answers, PartialLabels& labels) const;
};

/// Sampled sets T queried alone and together with every probe. A set with a
/// single unlabeled point z reveals z's whole cluster among the probes.
struct SingletonPhase {
  std::vector<SliceId> sets;
  PointSet probes;
  QueryId first = 0;

  std::size_t stride() const { return 1 + probes.size(); }
  void add_queries(QueryPlan& plan);
  void reconstruct(const QueryPlan& plan, const AnswerMap& answers, PartialLabels& labels) const;
};

/// Success iff every point of `universe` is labeled with at most `k` clusters.
/// The clustering is built over the whole label space, so this is meant for
/// runs whose universe is [0, n).
ReconstructionResult finish_reconstruction(const PartialLabels& labels,
                                           std::span<const Point> universe, std::size_t k);

/// 0, 1, ..., n-1.
PointSet full_universe(std::size_t n);

}  // namespace subsetq
