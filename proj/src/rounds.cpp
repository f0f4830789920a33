#include "subsetq/rounds.hpp"

#include <algorithm>
#include <cmath>

#include "subsetq/nonadaptive.hpp"
#include "subsetq/phases.hpp"

namespace subsetq {

namespace {

struct PrefixRound {
  PointSet order;
  QueryId first = 0;
};

PrefixRound add_prefix_queries(QueryPlan& plan, std::size_t n) {
  PrefixRound r{full_universe(n), static_cast<QueryId>(plan.size())};
  SliceId all = plan.add_set(r.order);
  for (std::size_t t = 1; t <= n; ++t) plan.add_query(plan.add_prefix(all, t));
  return r;
}

PointSet decode_prefixes(const AnswerMap& answers, const PrefixRound& round) {
  std::vector<std::uint32_t> counts(round.order.size());
  for (std::size_t t = 0; t < counts.size(); ++t) counts[t] = answers[round.first + static_cast<QueryId>(t)];
  return prefix_representatives(counts, round.order);
}

ReconstructionResult with_stats(ReconstructionResult r, const Oracle& oracle) {
  r.stats = oracle.stats();
  return r;
}

}  // namespace

PointSet prefix_representatives(std::span<const std::uint32_t> prefix_counts,
                                std::span<const Point> order) {
  if (prefix_counts.size() != order.size()) throw std::invalid_argument("one count per prefix");
  PointSet reps;
  std::uint32_t prev = 0;
  for (std::size_t t = 0; t < order.size(); ++t) {
    const std::uint32_t c = prefix_counts[t];
    if (c < prev || c > prev + 1 || (t == 0 && c != 1)) {
      throw PreconditionError("prefix counts are not a valid count sequence");
    }
    if (c == prev + 1) reps.push_back(order[t]);
    prev = c;
  }
  return reps;
}

std::size_t matching_size(std::size_t count_s, std::size_t count_t, std::size_t count_union) {
  if (count_union > count_s + count_t) throw std::invalid_argument("count of a union cannot exceed the sum");
  return count_s + count_t - count_union;
}

QueryId is_match_plan(QueryPlan& plan, const FindrepTable& reps, std::span<const Point> independent) {
  QueryId first = static_cast<QueryId>(plan.size());
  for (Point a : independent) reps.add_probe(plan, a);
  return first;
}

Matching is_match_decode(const AnswerMap& answers, const FindrepTable& reps,
                         std::span<const Point> independent, QueryId first) {
  Matching out;
  out.reserve(independent.size());
  QueryId id = first;
  for (Point a : independent) {
    RepResult r = reps.decode(answers, id);
    id += static_cast<QueryId>(reps.queries_per_probe());
    if (r.kind != RepKind::one) {
      throw PreconditionError("point " + std::to_string(a) + " has no unique representative");
    }
    out.emplace_back(a, r.rep);
  }
  return out;
}

ReconstructionResult alg7(Oracle& oracle) {
  const std::size_t n = oracle.n();
  QueryPlan first_round;
  PrefixRound prefixes = add_prefix_queries(first_round, n);
  PointSet reps = decode_prefixes(oracle.submit_round(first_round), prefixes);

  QueryPlan second_round;
  FindrepTable table(second_round, reps);
  const PointSet& universe = prefixes.order;
  QueryId first = is_match_plan(second_round, table, universe);
  AnswerMap answers = oracle.submit_round(second_round);

  Matching match;
  try {
    match = is_match_decode(answers, table, universe, first);
  } catch (const PreconditionError& e) {
    return with_stats(ReconstructionResult::fail(e.what()), oracle);
  }
  std::vector<Label> rep_label(n, 0);
  for (std::size_t i = 0; i < reps.size(); ++i) rep_label[reps[i]] = static_cast<Label>(i);
  std::vector<Label> labels(n);
  for (auto [x, y] : match) labels[x] = rep_label[y];
  ReconstructionResult r;
  r.clustering = Clustering(std::move(labels));
  return with_stats(std::move(r), oracle);
}

void Alg8Params::validate(std::size_t n) const {
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (!(B >= 1.0)) throw std::invalid_argument("need B >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("need 0 < delta < 1");
  if (tau && !(*tau > 1.0)) throw std::invalid_argument("need tau > 1");
  if (!(scale > 0.0)) throw std::invalid_argument("constant scale must be positive");
}

double Alg8Params::tau_value() const {
  return tau.value_or(std::max(2.0, std::log(static_cast<double>(k))));
}

std::size_t Alg8Params::independent_set_samples() const {
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k) / (10.0 * B)) - 1e-9));
}

std::size_t Alg8Params::independent_set_count(std::size_t n) const {
  return repeat_count(scale * 10.0 * std::sqrt(B / static_cast<double>(k)) *
                      static_cast<double>(n) * std::log(tau_value() / delta));
}

ReconstructionResult alg8(Oracle& oracle, const Alg8Params& params, std::uint64_t seed) {
  const std::size_t n = oracle.n();
  params.validate(n);
  const std::size_t samples = params.independent_set_samples();
  if (samples < 2) return alg7(oracle);

  Rng rng(derive_seed(seed, "alg8"));
  QueryPlan first_round;
  PrefixRound prefixes = add_prefix_queries(first_round, n);
  const PointSet& universe = prefixes.order;
  const std::size_t count = params.independent_set_count(n);
  std::vector<SliceId> sets;
  sets.reserve(count);
  const QueryId set_first = static_cast<QueryId>(first_round.size());
  for (std::size_t i = 0; i < count; ++i) {
    sets.push_back(first_round.add_set(sample_distinct(universe, samples, rng)));
    first_round.add_query(sets.back());
  }
  AnswerMap round1 = oracle.submit_round(first_round);
  PointSet reps = decode_prefixes(round1, prefixes);

  std::vector<std::size_t> independent;
  std::vector<std::uint8_t> in_v(n, 0);
  std::size_t v_size = 0;
  for (std::size_t i = 0; i < count; ++i) {
    auto set = first_round.slice(sets[i]);
    if (round1[set_first + static_cast<QueryId>(i)] != set.size()) continue;
    independent.push_back(i);
    for (Point x : set) {
      if (!in_v[x]) {
        in_v[x] = 1;
        ++v_size;
      }
    }
  }
  const double tau = params.tau_value();
  if (static_cast<double>(v_size) < static_cast<double>(n) * (1.0 - 1.0 / tau)) {
    return with_stats(ReconstructionResult::fail("only " + std::to_string(v_size) +
                                                 " points lie in an independent set"),
                      oracle);
  }

  QueryPlan second_round;
  FindrepTable table(second_round, reps);
  std::vector<QueryId> match_first;
  for (std::size_t i : independent) {
    match_first.push_back(is_match_plan(second_round, table, first_round.slice(sets[i])));
  }
  PointSet outside;
  for (Point x = 0; x < n; ++x) {
    if (!in_v[x]) outside.push_back(x);
  }
  const QueryId outside_first = is_match_plan(second_round, table, outside);
  AnswerMap round2 = oracle.submit_round(second_round);

  std::vector<Label> rep_label(n, 0);
  for (std::size_t i = 0; i < reps.size(); ++i) rep_label[reps[i]] = static_cast<Label>(i);
  std::vector<Label> labels(n, PartialLabels::kUnknown);
  try {
    // Each point of V takes its label from the first independent set holding it.
    for (std::size_t j = 0; j < independent.size(); ++j) {
      auto set = first_round.slice(sets[independent[j]]);
      for (auto [x, y] : is_match_decode(round2, table, set, match_first[j])) {
        if (labels[x] == PartialLabels::kUnknown) labels[x] = rep_label[y];
      }
    }
    for (auto [x, y] : is_match_decode(round2, table, outside, outside_first)) labels[x] = rep_label[y];
  } catch (const PreconditionError& e) {
    return with_stats(ReconstructionResult::fail(e.what()), oracle);
  }
  ReconstructionResult r;
  r.clustering = Clustering(std::move(labels));
  return with_stats(std::move(r), oracle);
}

ReconstructionResult adaptive_baseline(Oracle& oracle, std::vector<std::size_t>* per_item) {
  const std::size_t n = oracle.n();
  PointSet reps;  // insertion order
  std::vector<Label> labels(n);
  if (per_item) per_item->assign(n, 0);

  auto ask = [&](std::span<const Point> set, Point y) {
    QueryPlan plan;
    plan.add_query(plan.add_set(set), y);
    if (per_item) ++(*per_item)[y];
    return oracle.submit_round(plan)[0];
  };

  for (Point y = 0; y < n; ++y) {
    if (reps.empty() || ask(reps, y) == reps.size() + 1) {
      labels[y] = static_cast<Label>(reps.size());
      reps.push_back(y);
      continue;
    }
    std::size_t lo = 0;
    std::size_t hi = reps.size();
    while (hi - lo > 1) {
      const std::size_t half = (hi - lo + 1) / 2;
      std::span<const Point> lower(reps.data() + lo, half);
      if (ask(lower, y) == half) {
        hi = lo + half;
      } else {
        lo += half;
      }
    }
    labels[y] = static_cast<Label>(lo);
  }
  ReconstructionResult r;
  r.clustering = Clustering(std::move(labels));
  return with_stats(std::move(r), oracle);
}

ReconstructionResult pairwise_baseline(Oracle& oracle) {
  const std::size_t n = oracle.n();
  QueryPlan plan;
  std::vector<SliceId> single(n);
  for (Point i = 0; i < n; ++i) {
    const Point one[] = {i};
    single[i] = plan.add_set(one);
  }
  for (Point i = 0; i < n; ++i) {
    for (Point j = i + 1; j < n; ++j) plan.add_query(single[i], j);
  }
  AnswerMap answers = oracle.submit_round(plan);
  DisjointSets sets(n);
  QueryId id = 0;
  for (Point i = 0; i < n; ++i) {
    for (Point j = i + 1; j < n; ++j, ++id) {
      if (answers[id] == 1) sets.unite(i, j);
    }
  }
  std::vector<Label> labels(n);
  for (Point i = 0; i < n; ++i) labels[i] = static_cast<Label>(sets.find(i));
  ReconstructionResult r;
  r.clustering = Clustering(std::move(labels));
  return with_stats(std::move(r), oracle);
}

}  // namespace subsetq
