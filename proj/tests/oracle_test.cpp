#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "json.hpp"
#include "subsetq/core.hpp"
#include "subsetq/nonadaptive.hpp"
#include "subsetq/oracle.hpp"

namespace subsetq {
namespace {

QueryPlan three_queries() {
  QueryPlan plan;
  SliceId a = plan.add_set(PointSet{0, 1});
  SliceId b = plan.add_set(PointSet{2, 3, 4});
  plan.add_query(a);
  plan.add_query(a, 5);
  plan.add_query(b);
  return plan;
}

TEST(SubmitRound, AnswersEveryQuery) {
  Clustering c({0, 0, 1, 1, 2, 0});
  Oracle oracle(c, RoundBudget::non_adaptive());
  QueryPlan plan = three_queries();
  AnswerMap answers = oracle.submit_round(plan);
  ASSERT_EQ(answers.size(), 3u);
  for (QueryId id = 0; id < plan.size(); ++id) {
    EXPECT_EQ(answers[id], count_ground_truth(c, plan.materialize(id)));
  }
  EXPECT_EQ(oracle.stats(), (OracleStats{3, 3, 1}));
}

TEST(SubmitRound, SecondRoundRejectedWhenNonAdaptive) {
  Clustering c({0, 1, 2, 3, 4, 5});
  Oracle oracle(c, RoundBudget::non_adaptive());
  oracle.submit_round(three_queries());
  EXPECT_THROW(oracle.submit_round(three_queries()), ProtocolError);
  EXPECT_EQ(oracle.stats().rounds_used, 1u);
  EXPECT_EQ(oracle.stats().total_queries, 3u);
}

TEST(SubmitRound, SizeBoundEnforced) {
  Clustering c({0, 1, 2, 3, 4, 5});
  Oracle oracle(c, RoundBudget::non_adaptive(2));
  // {0,1} + 5 has three points.
  EXPECT_THROW(oracle.submit_round(three_queries()), ProtocolError);
  // A rejected round leaves the stats untouched.
  EXPECT_EQ(oracle.stats(), OracleStats{});
  QueryPlan ok;
  ok.add_query(ok.add_set(PointSet{4}), 3);
  EXPECT_NO_THROW(oracle.submit_round(ok));
  EXPECT_EQ(oracle.stats().max_query_size, 2u);
}

TEST(SubmitRound, ExtraPointAlreadyInSliceIsNotCountedTwice) {
  Clustering c({0, 1, 2});
  Oracle oracle(c, RoundBudget::non_adaptive(2));
  QueryPlan plan;
  plan.add_query(plan.add_set(PointSet{0, 1}), 1);
  AnswerMap a = oracle.submit_round(plan);
  EXPECT_EQ(a[0], 2u);
  EXPECT_EQ(oracle.stats().max_query_size, 2u);
}

TEST(SubmitRound, EmptySetCountsZero) {
  Clustering c({0, 1});
  Oracle oracle(c, RoundBudget::non_adaptive());
  QueryPlan plan;
  SliceId e = plan.add_set(PointSet{});
  plan.add_query(e);
  plan.add_query(e, 1);
  AnswerMap a = oracle.submit_round(plan);
  EXPECT_EQ(a[0], 0u);
  EXPECT_EQ(a[1], 1u);
}

TEST(SubmitRound, OutOfRangePointRejected) {
  Clustering c({0, 1});
  Oracle oracle(c, RoundBudget::non_adaptive());
  QueryPlan plan;
  plan.add_query(plan.add_set(PointSet{0, 7}));
  EXPECT_THROW(oracle.submit_round(plan), std::invalid_argument);
}

TEST(SubmitRound, StatsExactAcrossRounds) {
  Clustering c = generate_instance(50, 5, InstanceProfile::uniform(), 4);
  Oracle oracle(c, RoundBudget::rounds(4));
  Rng rng(9);
  std::uint64_t total = 0;
  std::uint64_t biggest = 0;
  PointSet u = full_universe(50);
  for (int r = 0; r < 4; ++r) {
    QueryPlan plan;
    for (int i = 0; i < 20; ++i) {
      PointSet s = sample_distinct(u, 1 + (i * 7 + r) % 30, rng);
      biggest = std::max<std::uint64_t>(biggest, s.size());
      plan.add_query(plan.add_set(s));
    }
    total += plan.size();
    AnswerMap a = oracle.submit_round(plan);
    for (QueryId id = 0; id < plan.size(); ++id) {
      ASSERT_EQ(a[id], count_ground_truth(c, plan.materialize(id)));
    }
  }
  EXPECT_EQ(oracle.stats(), (OracleStats{total, biggest, 4}));
}

TEST(SubmitRound, AnswerPurity) {
  Clustering c = generate_instance(40, 6, InstanceProfile::uniform(), 2);
  NonAdaptiveParams params{40, 6, 0.2, 0.05};
  PhasedPlan built = alg1_plan(params, 17);
  Oracle a(c, RoundBudget::non_adaptive());
  Oracle b(c, RoundBudget::non_adaptive());
  EXPECT_EQ(a.submit_round(built.plan), b.submit_round(built.plan));
}

TEST(SubmitRound, DuplicateSetsCountAsSeparateQueries) {
  Clustering c({0, 0, 1});
  Oracle oracle(c, RoundBudget::non_adaptive());
  QueryPlan plan;
  plan.add_query(plan.add_set(PointSet{0, 2}));
  plan.add_query(plan.add_set(PointSet{0, 2}));
  oracle.submit_round(plan);
  EXPECT_EQ(oracle.stats().total_queries, 2u);
}

TEST(QueryLog, OneJsonLinePerQuery) {
  Clustering c({0, 0, 1, 1, 2, 0});
  Oracle oracle(c, RoundBudget::non_adaptive());
  std::ostringstream log;
  oracle.set_query_log(&log);
  QueryPlan plan = three_queries();
  oracle.submit_round(plan);
  std::istringstream in(log.str());
  std::string line;
  QueryId id = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["round"], 1);
    EXPECT_EQ(j["id"], id);
    EXPECT_EQ(j["set"].get<PointSet>(), plan.materialize(id));
    EXPECT_EQ(j["answer"], count_ground_truth(c, plan.materialize(id)));
    ++id;
  }
  EXPECT_EQ(id, 3u);
}

TEST(PlanIndependence, NonAdaptivePlansIgnoreTheHiddenClustering) {
  // Builders take no oracle, so two different hidden clusterings see the same plan bytes.
  NonAdaptiveParams params{64, 4, 0.1, 0.02};
  Clustering c1 = generate_instance(64, 4, InstanceProfile::uniform(), 1);
  Clustering c2 = generate_instance(64, 4, InstanceProfile::geometric_by(2.0), 2);
  ASSERT_NE(c1, c2);
  PhasedPlan p1 = alg1_plan(params, 77);
  PhasedPlan p2 = alg1_plan(params, 77);
  Oracle o1(c1, RoundBudget::non_adaptive());
  Oracle o2(c2, RoundBudget::non_adaptive());
  o1.submit_round(p1.plan);
  o2.submit_round(p2.plan);
  EXPECT_EQ(p1.plan.serialize(), p2.plan.serialize());
  EXPECT_EQ(o1.round_fingerprints(), o2.round_fingerprints());
  EXPECT_NE(alg1_plan(params, 78).plan.serialize(), p1.plan.serialize());
}

TEST(QueryPlan, PrefixSharesPool) {
  QueryPlan plan;
  SliceId base = plan.add_set(PointSet{4, 5, 6, 7});
  SliceId pre = plan.add_prefix(base, 2);
  QueryId q = plan.add_query(pre, 9);
  EXPECT_EQ(plan.materialize(q), (PointSet{4, 5, 9}));
  EXPECT_THROW(plan.add_prefix(base, 5), std::invalid_argument);
  EXPECT_THROW(plan.add_query(99), std::out_of_range);
}

TEST(DerivedCount, Examples) {
  PartialLabels known(6);
  Label a = known.add_cluster(PointSet{0, 1});
  known.add_cluster(PointSet{2});
  EXPECT_EQ(derived_count(PointSet{0, 2}, known), 2u);
  EXPECT_EQ(derived_count(PointSet{}, known), 0u);

  PartialLabels same(5);
  same.add_cluster(PointSet{0, 1, 2, 3, 4});
  EXPECT_EQ(derived_count(PointSet{0, 1, 2, 3, 4}, same), 1u);

  EXPECT_THROW(derived_count(PointSet{0, 3}, known), std::invalid_argument);
  known.assign(3, a);
  EXPECT_EQ(derived_count(PointSet{0, 3}, known), 1u);
}

TEST(DerivedCount, AgreesWithGroundTruthOnLabeledSubsets) {
  Clustering c = generate_instance(30, 5, InstanceProfile::uniform(), 6);
  PartialLabels known(30);
  for (const auto& cl : c.clusters()) known.add_cluster(cl);
  Rng rng(5);
  PointSet u = full_universe(30);
  for (int i = 0; i < 200; ++i) {
    PointSet s = sample_distinct(u, 1 + i % 30, rng);
    ASSERT_EQ(derived_count(s, known), count_ground_truth(c, s));
  }
}

TEST(PartialLabels, RejectsRelabeling) {
  PartialLabels l(4);
  l.add_cluster(PointSet{0, 1});
  EXPECT_THROW(l.add_cluster(PointSet{1, 2}), std::logic_error);
  EXPECT_THROW(l.assign(0, 0), std::logic_error);
  EXPECT_THROW(l.assign(2, 5), std::out_of_range);
  EXPECT_FALSE(l.to_clustering().has_value());
  EXPECT_EQ(l.unlabeled(full_universe(4)), (PointSet{2, 3}));
}

}  // namespace
}  // namespace subsetq
