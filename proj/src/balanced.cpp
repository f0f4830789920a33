#include "subsetq/balanced.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "subsetq/group_testing.hpp"

namespace subsetq {

void BalancedParams::validate() const {
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (!(B >= 1.0)) throw std::invalid_argument("need B >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("need 0 < delta < 1");
  if (!(scale > 0.0)) throw std::invalid_argument("constant scale must be positive");
}

std::size_t BalancedParams::set_samples() const {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(static_cast<double>(k) / B - 1e-9)));
}

std::size_t alg5_set_count(const BalancedParams& p) {
  const double kk = static_cast<double>(p.k);
  return repeat_count(p.scale * 2.0 * kEuler * p.B * p.B * std::log(2.0 * kk * kk / p.delta));
}

std::size_t alg6_set_count(const BalancedParams& p) {
  return repeat_count(p.scale * kEuler * p.B * p.B * std::log(static_cast<double>(p.k) / p.delta));
}

Alg5Plan alg5_plan(const BalancedParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, "alg5"));
  Alg5Plan out;
  const PointSet universe = full_universe(params.n);
  const std::size_t q = alg5_set_count(params);

  for (std::size_t i = 0; i < q; ++i) {
    PointSet t = sample_distinct(universe, params.set_samples(), rng);
    out.sampled.insert(out.sampled.end(), t.begin(), t.end());
    out.sets.push_back(out.plan.add_set(t));
  }
  std::sort(out.sampled.begin(), out.sampled.end());
  out.sampled.erase(std::unique(out.sampled.begin(), out.sampled.end()), out.sampled.end());

  out.nested = alg1_append(out.plan, out.sampled, params.k, params.delta / 2.0, params.scale, rng);

  out.probe_first = static_cast<QueryId>(out.plan.size());
  for (SliceId s : out.sets) {
    auto t = out.plan.slice(s);
    out.plan.add_query(s);
    for (Point x : universe) {
      std::binary_search(t.begin(), t.end(), x) ? out.plan.add_query(s) : out.plan.add_query(s, x);
    }
  }
  return out;
}

ReconstructionResult alg5_reconstruct(const BalancedParams& params, const Alg5Plan& built,
                                      const AnswerMap& answers) {
  PartialLabels labels(params.n);
  apply_phases(built.plan, built.nested, answers, labels);
  PointSet missing = labels.unlabeled(built.sampled);
  if (!missing.empty() || labels.cluster_count() > params.k) {
    return ReconstructionResult::fail("clustering of the sampled points was not recovered",
                                      std::move(missing));
  }

  // Bitmask of recovered cluster indices each T_i hits.
  const std::size_t words = (params.k + 63) / 64;
  const std::size_t q = built.sets.size();
  std::vector<std::uint64_t> hits(q * words, 0);
  for (std::size_t i = 0; i < q; ++i) {
    for (Point y : built.plan.slice(built.sets[i])) {
      Label l = labels.label(y);
      hits[i * words + l / 64] |= std::uint64_t{1} << (l % 64);
    }
  }

  const std::size_t known_clusters = labels.cluster_count();
  const std::size_t stride = 1 + params.n;
  std::vector<std::uint64_t> excluded(words);
  std::optional<Label> phantom;  // a cluster the samples missed entirely
  for (Point x = 0; x < params.n; ++x) {
    std::fill(excluded.begin(), excluded.end(), 0);
    for (std::size_t i = 0; i < q; ++i) {
      const QueryId base = built.probe_first + static_cast<QueryId>(i * stride);
      if (answers[base] != answers[base + 1 + x]) {
        for (std::size_t w = 0; w < words; ++w) excluded[w] |= hits[i * words + w];
      }
    }
    std::size_t excluded_count = 0;
    for (auto w : excluded) excluded_count += static_cast<std::size_t>(std::popcount(w));
    if (excluded_count != params.k - 1) {
      return ReconstructionResult::fail("point " + std::to_string(x) + " was ruled out of " +
                                        std::to_string(excluded_count) + " clusters, not k - 1");
    }
    std::size_t j = 0;
    while (excluded[j / 64] >> (j % 64) & 1U) ++j;

    if (j < known_clusters) {
      if (labels.known(x)) {
        if (labels.label(x) != j) return ReconstructionResult::fail("elimination contradicts sampled labels");
      } else {
        labels.assign(x, static_cast<Label>(j));
      }
    } else {
      if (labels.known(x)) return ReconstructionResult::fail("elimination contradicts sampled labels");
      if (phantom) {
        labels.assign(x, *phantom);
      } else {
        const Point single[] = {x};
        phantom = labels.add_cluster(single);
      }
    }
  }
  return finish_reconstruction(labels, full_universe(params.n), params.k);
}

Alg6Plan alg6_plan(const BalancedParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, "alg6"));
  Alg6Plan out;
  const PointSet universe = full_universe(params.n);
  const std::size_t samples = params.set_samples();
  // Rows follow the nominal sample count so every probe costs the same.
  const std::size_t rows = bit_rows(samples);
  const std::size_t q = alg6_set_count(params);
  for (std::size_t i = 0; i < q; ++i) {
    out.star.tables.emplace_back(out.plan, sample_distinct(universe, samples, rng), rows);
  }
  out.star.probes = universe;
  out.star.add_queries(out.plan);
  return out;
}

ReconstructionResult alg6_reconstruct(const BalancedParams& params, const Alg6Plan& built,
                                      const AnswerMap& answers) {
  const StarPhase& star = built.star;
  const std::size_t n = params.n;
  DisjointSets graph(2 * n);  // [0, n) reference side, [n, 2n) probe side
  std::vector<std::uint8_t> touched(n, 0);
  QueryId id = star.first;
  for (Point x : star.probes) {
    for (const auto& table : star.tables) {
      RepResult r = table.decode(answers, id);
      id += static_cast<QueryId>(star.per_probe);
      if (r.kind == RepKind::one) {
        graph.unite(n + x, r.rep);
        touched[x] = 1;
      }
    }
  }
  PointSet isolated;
  for (Point x = 0; x < n; ++x) {
    if (!touched[x]) isolated.push_back(x);
  }
  if (!isolated.empty()) {
    return ReconstructionResult::fail(std::to_string(isolated.size()) + " point(s) had no representative",
                                      std::move(isolated));
  }
  std::unordered_map<std::size_t, Label> component;
  std::vector<Label> out(n);
  for (Point x = 0; x < n; ++x) {
    auto [it, fresh] = component.try_emplace(graph.find(n + x), static_cast<Label>(component.size()));
    out[x] = it->second;
  }
  if (component.size() > params.k) {
    return ReconstructionResult::fail("found " + std::to_string(component.size()) +
                                      " components, more than k = " + std::to_string(params.k));
  }
  ReconstructionResult r;
  r.clustering = Clustering(std::move(out));
  return r;
}

}  // namespace subsetq
