#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "subsetq/core.hpp"

namespace subsetq {

enum class Algorithm { alg1, alg2, alg3, alg4, alg5, alg6, alg7, alg8, adaptive, pairwise };

std::string_view algorithm_name(Algorithm alg);
/// Throws UsageError on an unknown name.
Algorithm parse_algorithm(std::string_view name);
bool is_non_adaptive(Algorithm alg);

/// Invalid experiment configuration.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  Algorithm alg = Algorithm::alg1;
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0.1;
  std::optional<double> B;  // balanced algorithms; defaults to 1
  std::optional<std::size_t> s;
  std::optional<double> r;
  std::optional<double> tau;
  double scale = 1.0;
  InstanceProfile profile;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 picks the hardware concurrency

  /// Throws UsageError when parameters do not fit the algorithm.
  void validate() const;
};

struct ExperimentRecord {
  std::string alg;
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0;
  std::optional<double> B;
  std::optional<std::size_t> s;
  std::optional<double> r;
  std::optional<double> tau;
  double scale = 1.0;
  std::string profile;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  bool declared_fail = false;
  std::uint64_t queries = 0;
  std::uint64_t max_size = 0;
  std::uint64_t rounds = 0;
  double ms = 0;
  /// Reason for failure, if any. Not part of the CSV.
  std::string note;

  /// Field-wise equality over the CSV columns.
  bool same_row(const ExperimentRecord& other) const;
};

/// One trial with seed `config.seed + trial`. Algorithm failures and
/// exceptions become unsuccessful records; success is judged against the
/// hidden clustering.
ExperimentRecord run_trial(const ExperimentConfig& config, std::size_t trial);

/// `config.trials` records ordered by trial index.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

struct Summary {
  std::string alg;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t declared_fails = 0;
  double success_rate = 0;
  double mean_queries = 0;
  std::uint64_t max_queries = 0;
  std::uint64_t max_size = 0;
  std::uint64_t max_rounds = 0;
  /// max(n^2/s^2, n) for size-bounded runs.
  std::optional<std::uint64_t> lower_bound;
};

/// Throws std::invalid_argument on empty input.
Summary summarize(std::span<const ExperimentRecord> records);

inline constexpr std::string_view kCsvHeader =
    "alg,n,k,delta,B,s,r,tau,scale,profile,trial,seed,success,declared_fail,queries,max_size,rounds,ms";

void write_csv(std::ostream& out, std::span<const ExperimentRecord> records);
/// Throws std::invalid_argument on a malformed header or row.
std::vector<ExperimentRecord> parse_csv(std::istream& in);
void write_json(std::ostream& out, std::span<const ExperimentRecord> records, const Summary& summary);

void write_instance(std::ostream& out, const Clustering& clustering);
/// Throws std::invalid_argument when n, k and labels disagree.
Clustering read_instance(std::istream& in);

/// Edge probability at which G(N, p) is connected with probability >= 1 - alpha.
double er_threshold(std::size_t N, double alpha);
/// Fraction of `trials` samples of G(N, p) that are connected.
double er_connectivity_sanity(std::size_t N, double p, std::size_t trials, std::uint64_t seed);

}  // namespace subsetq
