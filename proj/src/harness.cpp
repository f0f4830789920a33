#include "subsetq/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "subsetq/balanced.hpp"
#include "subsetq/bounded.hpp"
#include "subsetq/nonadaptive.hpp"
#include "subsetq/oracle.hpp"
#include "subsetq/rounds.hpp"

namespace subsetq {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 10> kNames{{
    {Algorithm::alg1, "alg1"},
    {Algorithm::alg2, "alg2"},
    {Algorithm::alg3, "alg3"},
    {Algorithm::alg4, "alg4"},
    {Algorithm::alg5, "alg5"},
    {Algorithm::alg6, "alg6"},
    {Algorithm::alg7, "alg7"},
    {Algorithm::alg8, "alg8"},
    {Algorithm::adaptive, "adaptive"},
    {Algorithm::pairwise, "pairwise"},
}};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string format_optional(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
T parse_number(std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number in CSV: '" + std::string(text) + "'");
  }
  return v;
}

template <typename T>
std::optional<T> parse_optional(std::string_view text) {
  if (text.empty()) return std::nullopt;
  return parse_number<T>(text);
}

bool parse_flag(std::string_view text) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw std::invalid_argument("bad flag in CSV: '" + std::string(text) + "'");
}

template <typename Built, typename Reconstruct>
ReconstructionResult run_planned(const Clustering& truth, RoundBudget budget, const Built& built,
                                 Reconstruct&& reconstruct) {
  Oracle oracle(truth, budget);
  AnswerMap answers = oracle.submit_round(built.plan);
  ReconstructionResult r = reconstruct(built, answers);
  r.stats = oracle.stats();
  return r;
}

ReconstructionResult dispatch(const ExperimentConfig& c, const Clustering& truth, std::uint64_t seed) {
  const double B = c.B.value_or(1.0);
  switch (c.alg) {
    case Algorithm::alg1:
    case Algorithm::alg2: {
      NonAdaptiveParams p{c.n, c.k, c.delta, c.scale};
      if (c.alg == Algorithm::alg1) {
        return run_planned(truth, RoundBudget::non_adaptive(), alg1_plan(p, seed),
                           [&](const auto& b, const auto& a) { return alg1_reconstruct(p, b, a); });
      }
      return run_planned(truth, RoundBudget::non_adaptive(), alg2_plan(p, seed),
                         [&](const auto& b, const auto& a) { return alg2_reconstruct(p, b, a); });
    }
    case Algorithm::alg3: {
      Alg3Params p{c.n, c.k, *c.s, c.delta, c.scale};
      return run_planned(truth, RoundBudget::non_adaptive(p.s), alg3_plan(p, seed),
                         [&](const auto& b, const auto& a) { return alg3_reconstruct(p, b, a); });
    }
    case Algorithm::alg4: {
      Alg4Params p = c.r ? Alg4Params{c.n, c.k, *c.r, c.delta, c.scale}
                         : Alg4Params::from_size_bound(c.n, c.k, *c.s, c.delta, c.scale);
      return run_planned(truth, RoundBudget::non_adaptive(p.size_bound()), alg4_plan(p, seed),
                         [&](const auto& b, const auto& a) { return alg4_reconstruct(p, b, a); });
    }
    case Algorithm::alg5: {
      BalancedParams p{c.n, c.k, B, c.delta, c.scale};
      return run_planned(truth, RoundBudget::non_adaptive(), alg5_plan(p, seed),
                         [&](const auto& b, const auto& a) { return alg5_reconstruct(p, b, a); });
    }
    case Algorithm::alg6: {
      BalancedParams p{c.n, c.k, B, c.delta, c.scale};
      return run_planned(truth, RoundBudget::non_adaptive(), alg6_plan(p, seed),
                         [&](const auto& b, const auto& a) { return alg6_reconstruct(p, b, a); });
    }
    case Algorithm::alg7: {
      Oracle oracle(truth, RoundBudget::rounds(2));
      return alg7(oracle);
    }
    case Algorithm::alg8: {
      Oracle oracle(truth, RoundBudget::rounds(2));
      return alg8(oracle, Alg8Params{c.k, B, c.delta, c.tau, c.scale}, seed);
    }
    case Algorithm::adaptive: {
      Oracle oracle(truth, RoundBudget::unlimited());
      return adaptive_baseline(oracle);
    }
    case Algorithm::pairwise: {
      Oracle oracle(truth, RoundBudget::non_adaptive());
      return pairwise_baseline(oracle);
    }
  }
  throw UsageError("unknown algorithm");
}

}  // namespace

std::string_view algorithm_name(Algorithm alg) {
  for (auto [a, name] : kNames) {
    if (a == alg) return name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto [a, n] : kNames) {
    if (n == name) return a;
  }
  throw UsageError("unknown algorithm: " + std::string(name));
}

bool is_non_adaptive(Algorithm alg) {
  switch (alg) {
    case Algorithm::alg7:
    case Algorithm::alg8:
    case Algorithm::adaptive: return false;
    default: return true;
  }
}

void ExperimentConfig::validate() const {
  if (n == 0) throw UsageError("--n must be positive");
  if (k == 0 || k > n) throw UsageError("--k must lie in [1, n]");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
  if (!(scale > 0.0)) throw UsageError("--scale must be positive");
  if (trials == 0) throw UsageError("--trials must be positive");
  if (B && !(*B >= 1.0)) throw UsageError("--B must be at least 1");
  if (tau && !(*tau > 1.0)) throw UsageError("--tau must exceed 1");
  if (s && r) throw UsageError("give at most one of --s and --r");
  switch (alg) {
    case Algorithm::alg3:
      if (!s) throw UsageError("alg3 needs --s");
      if (*s < 2 || *s > n) throw UsageError("--s must lie in [2, n]");
      break;
    case Algorithm::alg4: {
      if (!s && !r) throw UsageError("alg4 needs --s or --r");
      if (s && (*s < 2 || *s > n)) throw UsageError("--s must lie in [2, n]");
      Alg4Params p = r ? Alg4Params{n, k, *r, delta, scale}
                       : Alg4Params::from_size_bound(n, k, *s, delta, scale);
      try {
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("alg4: ") + e.what());
      }
      break;
    }
    default:
      if (s || r) throw UsageError(std::string(algorithm_name(alg)) + " takes no --s or --r");
      break;
  }
}

bool ExperimentRecord::same_row(const ExperimentRecord& o) const {
  return alg == o.alg && n == o.n && k == o.k && delta == o.delta && B == o.B && s == o.s &&
         r == o.r && tau == o.tau && scale == o.scale && profile == o.profile && trial == o.trial &&
         seed == o.seed && success == o.success && declared_fail == o.declared_fail &&
         queries == o.queries && max_size == o.max_size && rounds == o.rounds && ms == o.ms;
}

ExperimentRecord run_trial(const ExperimentConfig& config, std::size_t trial) {
  ExperimentRecord rec;
  rec.alg = std::string(algorithm_name(config.alg));
  rec.n = config.n;
  rec.k = config.k;
  rec.delta = config.delta;
  rec.B = config.B;
  rec.s = config.s;
  rec.r = config.r;
  rec.tau = config.tau;
  rec.scale = config.scale;
  rec.profile = config.profile.name();
  rec.trial = trial;
  rec.seed = config.seed + trial;

  const auto start = std::chrono::steady_clock::now();
  try {
    Clustering truth = generate_instance(config.n, config.k, config.profile, rec.seed);
    ReconstructionResult result = dispatch(config, truth, derive_seed(rec.seed, "algorithm"));
    rec.declared_fail = result.declared_fail;
    rec.queries = result.stats.total_queries;
    rec.max_size = result.stats.max_query_size;
    rec.rounds = result.stats.rounds_used;
    rec.success = result.clustering && clusterings_equal(*result.clustering, truth);
    if (!rec.success) rec.note = result.clustering ? "wrong clustering" : result.failure;
  } catch (const std::exception& e) {
    rec.success = false;
    rec.note = e.what();
  }
  rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ExperimentRecord> records(config.trials);
  unsigned threads = config.threads != 0 ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < config.trials; t = next++) records[t] = run_trial(config, t);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return records;
}

Summary summarize(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("cannot summarize zero records");
  Summary s;
  s.alg = records.front().alg;
  s.n = records.front().n;
  s.k = records.front().k;
  s.trials = records.size();
  double total = 0;
  for (const auto& r : records) {
    s.successes += r.success;
    s.declared_fails += r.declared_fail;
    total += static_cast<double>(r.queries);
    s.max_queries = std::max(s.max_queries, r.queries);
    s.max_size = std::max(s.max_size, r.max_size);
    s.max_rounds = std::max(s.max_rounds, r.rounds);
  }
  s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
  s.mean_queries = total / static_cast<double>(s.trials);

  const auto& first = records.front();
  std::optional<std::uint64_t> bound;
  if (first.alg == "alg3" && first.s) {
    bound = first.s;
  } else if (first.alg == "alg4") {
    if (first.s) {
      bound = first.s;
    } else if (first.r && first.n >= 4) {
      bound = Alg4Params{first.n, first.k, *first.r, first.delta, first.scale}.size_bound();
    }
  }
  if (bound && *bound >= 2 && *bound <= first.n) s.lower_bound = lower_bound_curve(first.n, *bound);
  return s;
}

void write_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.alg << ',' << r.n << ',' << r.k << ',' << format_double(r.delta) << ','
        << format_optional(r.B) << ',' << format_optional(r.s) << ',' << format_optional(r.r) << ','
        << format_optional(r.tau) << ',' << format_double(r.scale) << ',' << r.profile << ','
        << r.trial << ',' << r.seed << ',' << (r.success ? 1 : 0) << ',' << (r.declared_fail ? 1 : 0)
        << ',' << r.queries << ',' << r.max_size << ',' << r.rounds << ',' << format_double(r.ms)
        << '\n';
  }
}

std::vector<ExperimentRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (;;) {
      auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 18) throw std::invalid_argument("CSV row needs 18 fields");
    ExperimentRecord r;
    r.alg = std::string(f[0]);
    r.n = parse_number<std::size_t>(f[1]);
    r.k = parse_number<std::size_t>(f[2]);
    r.delta = parse_number<double>(f[3]);
    r.B = parse_optional<double>(f[4]);
    r.s = parse_optional<std::size_t>(f[5]);
    r.r = parse_optional<double>(f[6]);
    r.tau = parse_optional<double>(f[7]);
    r.scale = parse_number<double>(f[8]);
    r.profile = std::string(f[9]);
    r.trial = parse_number<std::size_t>(f[10]);
    r.seed = parse_number<std::uint64_t>(f[11]);
    r.success = parse_flag(f[12]);
    r.declared_fail = parse_flag(f[13]);
    r.queries = parse_number<std::uint64_t>(f[14]);
    r.max_size = parse_number<std::uint64_t>(f[15]);
    r.rounds = parse_number<std::uint64_t>(f[16]);
    r.ms = parse_number<double>(f[17]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_json(std::ostream& out, std::span<const ExperimentRecord> records, const Summary& summary) {
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    rows.push_back({{"alg", r.alg},           {"n", r.n},
                    {"k", r.k},               {"delta", r.delta},
                    {"B", opt(r.B)},          {"s", opt(r.s)},
                    {"r", opt(r.r)},          {"tau", opt(r.tau)},
                    {"scale", r.scale},       {"profile", r.profile},
                    {"trial", r.trial},       {"seed", r.seed},
                    {"success", r.success},   {"declared_fail", r.declared_fail},
                    {"queries", r.queries},   {"max_size", r.max_size},
                    {"rounds", r.rounds},     {"ms", r.ms}});
  }
  nlohmann::json sum = {{"alg", summary.alg},
                        {"n", summary.n},
                        {"k", summary.k},
                        {"trials", summary.trials},
                        {"successes", summary.successes},
                        {"declared_fails", summary.declared_fails},
                        {"success_rate", summary.success_rate},
                        {"mean_queries", summary.mean_queries},
                        {"max_queries", summary.max_queries},
                        {"max_size", summary.max_size},
                        {"max_rounds", summary.max_rounds},
                        {"lower_bound", opt(summary.lower_bound)}};
  out << nlohmann::json{{"records", rows}, {"summary", sum}}.dump(2) << '\n';
}

double er_threshold(std::size_t N, double alpha) {
  const double nn = static_cast<double>(N);
  return 1.0 - std::pow(alpha / (3.0 * nn), 2.0 / nn);
}

double er_connectivity_sanity(std::size_t N, double p, std::size_t trials, std::uint64_t seed) {
  if (N == 0) throw std::invalid_argument("need N >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("need 0 <= p <= 1");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  Rng rng(derive_seed(seed, "er"));
  std::bernoulli_distribution edge(p);
  std::size_t connected = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    DisjointSets sets(N);
    std::size_t components = N;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i + 1; j < N; ++j) {
        if (edge(rng) && sets.unite(i, j)) --components;
      }
    }
    connected += components == 1;
  }
  return static_cast<double>(connected) / static_cast<double>(trials);
}

}  // namespace subsetq
