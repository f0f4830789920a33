#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "subsetq/core.hpp"
#include "subsetq/oracle.hpp"

namespace subsetq {

/// Rows of the identification matrix over m columns: max(1, ceil(log2 m)).
std::size_t bit_rows(std::size_t m);

/// Row j holds the column indices whose bit j is set (`ones`) and the rest
/// (`zeros`). Column c therefore spells c in binary down its rows.
struct BitMatrixPlan {
  std::size_t m = 0;
  std::size_t rows = 0;
  std::vector<std::vector<std::uint32_t>> ones;
  std::vector<std::vector<std::uint32_t>> zeros;
};

/// `rows` = 0 picks bit_rows(m). Throws std::invalid_argument if m = 0 or
/// the requested rows cannot index m columns.
BitMatrixPlan make_bit_matrix(std::size_t m, std::size_t rows = 0);

enum class RepKind { zero, one, many };

struct RepOutcome {
  RepKind kind = RepKind::zero;
  std::size_t index = 0;  // meaningful only for RepKind::one
  friend bool operator==(const RepOutcome&, const RepOutcome&) = default;
};

/// Decodes the OR answers of the matrix rows (`m_bits`) and of the
/// complement rows (`z_bits`) over m columns. Throws std::invalid_argument on
/// answers no vector could produce.
RepOutcome decode_cert_one(std::span<const std::uint8_t> m_bits,
                           std::span<const std::uint8_t> z_bits, std::size_t m);

/// Cert-one outcome mapped back to a point of the reference set.
struct RepResult {
  RepKind kind = RepKind::zero;
  Point rep = 0;
  friend bool operator==(const RepResult&, const RepResult&) = default;
};

/// FINDREP against one ordered reference set R. The row slices are registered
/// once; each probe then costs exactly 4 * rows subset queries, issued per row
/// as: ones Q, ones Q+x, zeros Q, zeros Q+x.
class FindrepTable {
 public:
  FindrepTable(QueryPlan& plan, PointSet reference, std::size_t rows = 0);

  QueryId add_probe(QueryPlan& plan, Point x) const;
  RepResult decode(const AnswerMap& answers, QueryId first) const;

  std::size_t rows() const { return rows_; }
  std::size_t queries_per_probe() const { return 4 * rows_; }
  const PointSet& reference() const { return reference_; }

 private:
  std::optional<std::size_t> position(Point x) const;

  PointSet reference_;
  std::vector<std::pair<Point, std::uint32_t>> sorted_;
  std::size_t rows_;
  std::vector<SliceId> ones_;
  std::vector<SliceId> zeros_;
};

/// Binding of one simulated OR query over T for probe x.
struct OrBinding {
  bool short_circuit = false;  // x in T: the answer is 1 and nothing was queried
  QueryId first = 0;           // ids first (T) and first + 1 (T + x)
};

OrBinding or_sim_plan(QueryPlan& plan, Point x, std::span<const Point> set);
bool or_sim_decode(const AnswerMap& answers, const OrBinding& binding);

/// ceil(|T| / s') consecutive blocks of at most s' points.
std::vector<PointSet> split_blocks(std::span<const Point> set, std::size_t block);

inline constexpr double kEuler = 2.718281828459045;

struct SupportRecoverParams {
  std::size_t t = 1;
  double alpha = 0.05;
  /// Largest subset query allowed. Sets are cut into blocks of size_bound - 1
  /// so both the block and the block plus x fit.
  std::optional<std::size_t> size_bound;
  double scale = 1.0;
};

/// Number of random OR tests: ceil(scale * e * t * ln(|scope| / alpha)).
std::size_t support_recover_tests(std::size_t scope_size, std::size_t t, double alpha,
                                  double scale = 1.0);

struct SupportRecoverProbe {
  Point x = 0;
  std::size_t t = 0;
  std::size_t tests = 0;
  std::size_t blocks_per_test = 0;
  QueryId first = 0;
  SliceId first_slice = 0;  // block slices are consecutive, test-major
  std::size_t query_count() const { return 2 * tests * blocks_per_test; }
};

/// Throws std::invalid_argument unless 1 <= t <= |scope|, 0 < alpha < 1 and
/// any size bound is at least 2.
SupportRecoverProbe support_recover_plan(QueryPlan& plan, Point x, std::span<const Point> scope,
                                         const SupportRecoverParams& params, Rng& rng);

struct SupportOutcome {
  bool exceeds = false;  // certified that the support is larger than t
  PointSet support;      // sorted; empty when `exceeds`
};

SupportOutcome support_recover_decode(const QueryPlan& plan, const AnswerMap& answers,
                                      const SupportRecoverProbe& probe,
                                      std::span<const Point> scope);

}  // namespace subsetq
