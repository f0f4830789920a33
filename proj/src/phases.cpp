#include "subsetq/phases.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace subsetq {

void StarPhase::add_queries(QueryPlan& plan) {
  first = static_cast<QueryId>(plan.size());
  per_probe = tables.empty() ? 0 : tables.front().queries_per_probe();
  for (Point x : probes) {
    for (const auto& table : tables) table.add_probe(plan, x);
  }
}

void StarPhase::reconstruct(const AnswerMap& answers, PartialLabels& labels) const {
  if (probes.empty() || tables.empty()) return;
  // Nodes [0, n) are reference-side copies of points; n + i is probe i.
  const std::size_t n = labels.n();
  DisjointSets sets(n + probes.size());
  QueryId id = first;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (const auto& table : tables) {
      RepResult r = table.decode(answers, id);
      id += static_cast<QueryId>(per_probe);
      if (r.kind == RepKind::one) sets.unite(n + i, r.rep);
    }
  }

  std::unordered_map<std::size_t, PointSet> components;
  std::unordered_map<std::size_t, bool> touches_known;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    std::size_t root = sets.find(n + i);
    components[root].push_back(probes[i]);
    if (labels.known(probes[i])) touches_known[root] = true;
  }
  for (const auto& table : tables) {
    for (Point y : table.reference()) {
      if (labels.known(y)) touches_known[sets.find(y)] = true;
    }
  }
  // Promote in order of smallest member so label numbering is reproducible.
  std::vector<const PointSet*> ordered;
  for (auto& [root, members] : components) {
    if (touches_known.count(root) || static_cast<double>(members.size()) < promote_at) continue;
    ordered.push_back(&members);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const PointSet* a, const PointSet* b) { return a->front() < b->front(); });
  for (const PointSet* c : ordered) labels.add_cluster(*c);
}

void PairPhase::add_queries(QueryPlan& plan) {
  first = static_cast<QueryId>(plan.size());
  for (SliceId s : sets) plan.add_query(s);
}

void PairPhase::reconstruct(const QueryPlan& plan, const AnswerMap& answers,
                            PartialLabels& labels) const {
  DisjointSets graph(labels.n());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto t = plan.slice(sets[i]);
    Point pair[2];
    std::size_t fresh = 0;
    for (Point x : t) {
      if (labels.known(x)) continue;
      if (fresh < 2) pair[fresh] = x;
      if (++fresh > 2) break;
    }
    if (fresh != 2) continue;
    std::size_t answer = answers[first + static_cast<QueryId>(i)];
    if (answer - labels.distinct_known(t) == 1) graph.unite(pair[0], pair[1]);
  }

  std::unordered_map<std::size_t, PointSet> components;
  for (Point x : universe) {
    if (!labels.known(x)) components[graph.find(x)].push_back(x);
  }
  std::vector<const PointSet*> ordered;
  for (auto& [root, members] : components) {
    if (static_cast<double>(members.size()) >= promote_at) ordered.push_back(&members);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const PointSet* a, const PointSet* b) { return a->front() < b->front(); });
  for (const PointSet* c : ordered) labels.add_cluster(*c);
}

void SingletonPhase::add_queries(QueryPlan& plan) {
  first = static_cast<QueryId>(plan.size());
  for (SliceId s : sets) {
    plan.add_query(s);
    auto t = plan.slice(s);
    for (Point x : probes) {
      std::find(t.begin(), t.end(), x) != t.end() ? plan.add_query(s) : plan.add_query(s, x);
    }
  }
}

void SingletonPhase::reconstruct(const QueryPlan& plan, const AnswerMap& answers,
                                 PartialLabels& labels) const {
  // Only points unlabeled when the phase starts are eligible.
  std::vector<std::uint8_t> eligible(labels.n(), 0);
  for (Point x : probes) eligible[x] = !labels.known(x);

  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto t = plan.slice(sets[i]);
    Point z = 0;
    std::size_t fresh = 0;
    for (Point x : t) {
      if (eligible[x]) {
        z = x;
        if (++fresh > 1) break;
      }
    }
    if (fresh != 1 || labels.known(z)) continue;
    const QueryId base = first + static_cast<QueryId>(i * stride());
    PointSet cluster;
    for (std::size_t j = 0; j < probes.size(); ++j) {
      Point x = probes[j];
      if (eligible[x] && answers[base] == answers[base + 1 + static_cast<QueryId>(j)]) {
        cluster.push_back(x);
      }
    }
    labels.add_cluster(cluster);
  }
}

ReconstructionResult finish_reconstruction(const PartialLabels& labels,
                                           std::span<const Point> universe, std::size_t k) {
  PointSet missing = labels.unlabeled(universe);
  if (!missing.empty()) {
    return ReconstructionResult::fail(std::to_string(missing.size()) + " point(s) left unlabeled",
                                      std::move(missing));
  }
  if (labels.cluster_count() > k) {
    return ReconstructionResult::fail("recovered " + std::to_string(labels.cluster_count()) +
                                      " clusters, more than k = " + std::to_string(k));
  }
  ReconstructionResult r;
  r.clustering = labels.to_clustering();
  if (!r.clustering) return ReconstructionResult::fail("labels do not cover the universe");
  return r;
}

PointSet full_universe(std::size_t n) {
  PointSet u(n);
  std::iota(u.begin(), u.end(), Point{0});
  return u;
}

}  // namespace subsetq
