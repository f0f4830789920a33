#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subsetq {

using Point = std::uint32_t;
using Label = std::uint32_t;
using PointSet = std::vector<Point>;
using Rng = std::mt19937_64;

/// A partition of the universe {0, ..., n-1} into k nonempty clusters.
///
/// Labels are canonicalized on construction: cluster indices are assigned in
/// order of first occurrence, so two clusterings describing the same
/// partition have identical label sequences.
class Clustering {
 public:
  /// Throws std::invalid_argument on an empty label sequence.
  explicit Clustering(std::vector<Label> labels);

  /// Builds from explicit clusters; they must partition [0, n).
  static Clustering from_clusters(std::size_t n, const std::vector<PointSet>& clusters);

  std::size_t n() const { return labels_.size(); }
  std::size_t k() const { return sizes_.size(); }
  Label label(Point x) const { return labels_[x]; }
  std::span<const Label> labels() const { return labels_; }
  std::span<const std::size_t> sizes() const { return sizes_; }

  /// Members of each cluster in increasing point order, indexed by label.
  std::vector<PointSet> clusters() const;

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<Label> labels_;
  std::vector<std::size_t> sizes_;
};

/// Number of distinct clusters intersecting `set`. count(empty) is 0.
/// Throws std::invalid_argument on an out-of-range point.
std::size_t count_ground_truth(const Clustering& clustering, std::span<const Point> set);

/// True iff both describe the same partition, up to relabeling.
/// Throws std::invalid_argument if the universes differ in size.
bool clusterings_equal(std::span<const Label> a, std::span<const Label> b);
bool clusterings_equal(const Clustering& a, const Clustering& b);

struct InstanceProfile {
  enum class Kind { uniform_random, balanced, geometric, planted_pair };

  Kind kind = Kind::uniform_random;
  double balance = 1.0;  // B, for balanced
  double ratio = 2.0;    // for geometric

  static InstanceProfile uniform() { return {}; }
  static InstanceProfile balanced_by(double b) { return {Kind::balanced, b, 2.0}; }
  static InstanceProfile geometric_by(double r) { return {Kind::geometric, 1.0, r}; }
  static InstanceProfile planted_pair() { return {Kind::planted_pair, 1.0, 2.0}; }

  /// Parses "uniform", "balanced", "balanced:B", "geometric", "geometric:R",
  /// "planted-pair". `balance` supplies B when the name carries none.
  static InstanceProfile parse(std::string_view name, double balance = 1.0);
  std::string name() const;
};

/// Deterministic in (n, k, profile, seed). Throws std::invalid_argument when
/// the profile cannot produce k nonempty clusters on n points.
Clustering generate_instance(std::size_t n, std::size_t k, const InstanceProfile& profile,
                             std::uint64_t seed);

/// Cluster sizes the geometric profile uses: largest-remainder rounding of
/// the ratio^(k-1), ..., ratio, 1 proportions, then fixed up to be nonempty.
std::vector<std::size_t> geometric_sizes(std::size_t n, std::size_t k, double ratio);

/// Checks n/(Bk) <= |C| <= Bn/k for every cluster.
bool is_balanced(const Clustering& clustering, double balance);

/// Union-find with union by size and path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct UndirectedGraph {
  PointSet vertices;
  std::vector<std::pair<Point, Point>> edges;

  /// Throws std::invalid_argument on a self-loop, an edge to an unlisted
  /// vertex, or a repeated vertex.
  void validate() const;
};

/// Maximal connected components. Each component is sorted; components are
/// ordered by their smallest vertex.
std::vector<PointSet> connected_components(const UndirectedGraph& graph);

/// Mixes a base seed with a stream name so independent consumers of one
/// master seed draw from unrelated sequences.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream);

/// Draws `count` points uniformly with replacement from `universe`, then
/// drops repeats. The result is sorted.
PointSet sample_distinct(std::span<const Point> universe, std::size_t count, Rng& rng);
/// Same draw into a reused buffer.
void sample_distinct(std::span<const Point> universe, std::size_t count, Rng& rng, PointSet& out);

/// ceil(log2(m)) for m >= 1.
std::size_t ceil_log2(std::size_t m);

}  // namespace subsetq
