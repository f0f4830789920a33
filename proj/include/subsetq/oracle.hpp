#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "subsetq/core.hpp"

namespace subsetq {

using QueryId = std::uint32_t;
using SliceId = std::uint32_t;

/// An ordered batch of subset queries.
///
/// Point sets live in a shared pool as slices; a query names one slice and an
/// optional extra point, so "T" and "T plus x" for many x share storage. Query
/// ids are positions, hence unique. Builders must not attach an extra that is
/// already a member of the slice; the oracle still answers such queries
/// correctly, but the plan would then contain a redundant query.
class QueryPlan {
 public:
  static constexpr std::uint32_t kNoExtra = std::numeric_limits<std::uint32_t>::max();

  /// Copies `points` into the pool.
  SliceId add_set(std::span<const Point> points);
  /// A new slice naming the first `len` points of `base` without copying.
  SliceId add_prefix(SliceId base, std::size_t len);
  QueryId add_query(SliceId slice);
  QueryId add_query(SliceId slice, Point extra);

  std::size_t size() const { return queries_.size(); }
  std::size_t slice_count() const { return slices_.size(); }
  std::span<const Point> slice(SliceId s) const;
  SliceId slice_of(QueryId id) const { return queries_[id].slice; }
  std::optional<Point> extra(QueryId id) const;
  /// Points of the base slice of query `id`, excluding the extra point.
  std::span<const Point> base_set(QueryId id) const { return slice(slice_of(id)); }
  /// The full queried set, in slice order with the extra point last.
  PointSet materialize(QueryId id) const;

  /// Canonical byte encoding; equal plans serialize identically.
  std::string serialize() const;
  std::uint64_t fingerprint() const;

 private:
  struct Slice {
    std::uint32_t offset;
    std::uint32_t len;
  };
  struct Query {
    SliceId slice;
    std::uint32_t extra;
  };
  std::vector<Point> pool_;
  std::vector<Slice> slices_;
  std::vector<Query> queries_;
};

/// Oracle answers indexed by query id.
class AnswerMap {
 public:
  AnswerMap() = default;
  explicit AnswerMap(std::vector<std::uint32_t> values) : values_(std::move(values)) {}
  std::uint32_t operator[](QueryId id) const { return values_[id]; }
  std::uint32_t at(QueryId id) const { return values_.at(id); }
  std::size_t size() const { return values_.size(); }
  std::span<const std::uint32_t> values() const { return values_; }
  friend bool operator==(const AnswerMap&, const AnswerMap&) = default;

 private:
  std::vector<std::uint32_t> values_;
};

struct OracleStats {
  std::uint64_t total_queries = 0;
  std::uint64_t max_query_size = 0;
  std::uint64_t rounds_used = 0;
  friend bool operator==(const OracleStats&, const OracleStats&) = default;
};

struct RoundBudget {
  std::uint64_t max_rounds = 1;
  std::optional<std::size_t> max_query_size;

  static RoundBudget non_adaptive(std::optional<std::size_t> size_bound = std::nullopt) {
    return {1, size_bound};
  }
  static RoundBudget rounds(std::uint64_t r) { return {r, std::nullopt}; }
  static RoundBudget unlimited() { return {std::numeric_limits<std::uint64_t>::max(), std::nullopt}; }
};

/// Raised when a caller breaks the round or size contract.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Oracle {
 public:
  Oracle(const Clustering& truth, RoundBudget budget);

  /// Answers every query of `plan` as one round. Validation happens before
  /// any stats are committed, so a rejected round leaves the oracle intact.
  AnswerMap submit_round(const QueryPlan& plan);

  const OracleStats& stats() const { return stats_; }
  const RoundBudget& budget() const { return budget_; }
  std::size_t n() const { return labels_.size(); }
  /// Fingerprint of each submitted plan, in round order.
  const std::vector<std::uint64_t>& round_fingerprints() const { return fingerprints_; }
  /// When set, every answered query is written as one JSON line.
  void set_query_log(std::ostream* out) { log_ = out; }

 private:
  std::vector<Label> labels_;
  std::size_t k_;
  RoundBudget budget_;
  OracleStats stats_;
  std::vector<std::uint64_t> fingerprints_;
  std::ostream* log_ = nullptr;
  std::vector<std::uint32_t> label_stamp_;
  std::vector<std::uint32_t> point_stamp_;
  std::uint32_t generation_ = 0;
};

/// Labels learned so far by a reconstructor. Not thread-safe: distinct-label
/// queries reuse internal scratch space.
class PartialLabels {
 public:
  static constexpr Label kUnknown = std::numeric_limits<Label>::max();

  explicit PartialLabels(std::size_t n);

  /// Labels `members` as a new cluster and returns its label. Throws
  /// std::logic_error if any member is already labeled.
  Label add_cluster(std::span<const Point> members);
  /// Adds one point to an existing cluster.
  void assign(Point x, Label label);

  bool known(Point x) const { return labels_[x] != kUnknown; }
  Label label(Point x) const { return labels_[x]; }
  std::size_t n() const { return labels_.size(); }
  std::size_t cluster_count() const { return clusters_; }
  std::size_t labeled_count() const { return labeled_; }

  /// Distinct labels among the labeled points of `set`; unlabeled points are ignored.
  std::size_t distinct_known(std::span<const Point> set) const;
  /// Points of `universe` with no label.
  PointSet unlabeled(std::span<const Point> universe) const;

  /// The full clustering, if every point is labeled.
  std::optional<Clustering> to_clustering() const;

 private:
  std::vector<Label> labels_;
  std::size_t clusters_ = 0;
  std::size_t labeled_ = 0;
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t generation_ = 0;
};

/// count(S) computed from already-known labels. Consumes no oracle budget.
/// Throws std::invalid_argument if a point of S is unlabeled.
std::size_t derived_count(std::span<const Point> set, const PartialLabels& known);

struct ReconstructionResult {
  std::optional<Clustering> clustering;
  /// The algorithm output "fail" instead of a clustering.
  bool declared_fail = false;
  std::string failure;
  PointSet unlabeled;
  OracleStats stats;

  bool ok() const { return clustering.has_value(); }

  static ReconstructionResult fail(std::string why, PointSet unlabeled = {});
};

}  // namespace subsetq
