#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "subsetq/harness.hpp"

namespace subsetq {
namespace {

ExperimentConfig small_config(Algorithm alg) {
  ExperimentConfig cfg;
  cfg.alg = alg;
  cfg.n = 60;
  cfg.k = 4;
  cfg.trials = 10;
  cfg.seed = 42;
  cfg.threads = 2;
  return cfg;
}

TEST(RunExperiment, OneRecordPerTrialWithSequentialSeeds) {
  auto records = run_experiment(small_config(Algorithm::alg7));
  ASSERT_EQ(records.size(), 10u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].trial, i);
    EXPECT_EQ(records[i].seed, 42 + i);
    EXPECT_TRUE(records[i].success);
    EXPECT_EQ(records[i].rounds, 2u);
  }
  EXPECT_DOUBLE_EQ(summarize(records).success_rate, 1.0);
}

TEST(RunExperiment, DeterministicAcrossRunsAndThreadCounts) {
  for (Algorithm alg : {Algorithm::alg1, Algorithm::alg2, Algorithm::adaptive, Algorithm::pairwise}) {
    ExperimentConfig cfg = small_config(alg);
    cfg.scale = 0.2;
    auto a = run_experiment(cfg);
    cfg.threads = 1;
    auto b = run_experiment(cfg);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      b[i].ms = a[i].ms;  // wall time is the one column allowed to differ
      EXPECT_TRUE(a[i].same_row(b[i])) << algorithm_name(alg);
    }
  }
}

TEST(RunExperiment, FailuresBecomeRecords) {
  // Far too few queries: the run must end in a declared failure, not a crash.
  ExperimentConfig cfg = small_config(Algorithm::alg2);
  cfg.n = 200;
  cfg.k = 10;
  cfg.profile = InstanceProfile::geometric_by(3.0);
  cfg.scale = 0.001;
  auto records = run_experiment(cfg);
  for (const auto& r : records) {
    EXPECT_FALSE(r.success);
    EXPECT_TRUE(r.declared_fail);
    EXPECT_FALSE(r.note.empty());
  }
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig cfg = small_config(Algorithm::alg3);
  EXPECT_THROW(cfg.validate(), UsageError);
  EXPECT_THROW(run_experiment(cfg), UsageError);
  cfg.s = 8;
  EXPECT_NO_THROW(cfg.validate());
  cfg.alg = Algorithm::alg4;
  cfg.r = 2.0;
  EXPECT_THROW(cfg.validate(), UsageError);  // both s and r
  cfg.s.reset();
  EXPECT_NO_THROW(cfg.validate());
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), UsageError);
  ExperimentConfig bad = small_config(Algorithm::alg1);
  bad.k = 100;
  EXPECT_THROW(bad.validate(), UsageError);
  EXPECT_THROW(parse_algorithm("alg9"), UsageError);
  EXPECT_EQ(parse_algorithm("adaptive"), Algorithm::adaptive);
  EXPECT_EQ(algorithm_name(Algorithm::alg5), "alg5");
}

TEST(Summarize, RatesAndReferenceCurve) {
  std::vector<ExperimentRecord> records(10);
  for (std::size_t i = 0; i < 10; ++i) {
    records[i].alg = "alg3";
    records[i].n = 100;
    records[i].k = 3;
    records[i].s = 10;
    records[i].success = i != 4;
    records[i].declared_fail = i == 4;
    records[i].queries = 100 + i;
    records[i].max_size = 10;
    records[i].rounds = 1;
  }
  Summary s = summarize(records);
  EXPECT_DOUBLE_EQ(s.success_rate, 0.9);
  EXPECT_EQ(s.successes, 9u);
  EXPECT_EQ(s.declared_fails, 1u);
  EXPECT_DOUBLE_EQ(s.mean_queries, 104.5);
  EXPECT_EQ(s.max_queries, 109u);
  ASSERT_TRUE(s.lower_bound.has_value());
  EXPECT_EQ(*s.lower_bound, 100u);
  EXPECT_THROW(summarize(std::vector<ExperimentRecord>{}), std::invalid_argument);
}

TEST(Summarize, BoundedRunCarriesReference) {
  ExperimentConfig cfg = small_config(Algorithm::alg4);
  cfg.n = 64;
  cfg.k = 2;
  cfg.trials = 2;
  cfg.r = 3.0;
  Summary s = summarize(run_experiment(cfg));
  ASSERT_TRUE(s.lower_bound.has_value());
  EXPECT_EQ(*s.lower_bound, 256u);  // s = ceil(64^(1/3)) = 4, 64^2 / 16
}

TEST(Csv, RoundTrip) {
  ExperimentConfig cfg = small_config(Algorithm::alg3);
  cfg.s = 9;
  cfg.scale = 0.3;
  cfg.trials = 4;
  auto records = run_experiment(cfg);
  std::stringstream ss;
  write_csv(ss, records);
  std::string header;
  std::getline(std::istringstream(ss.str()) >> std::ws, header);
  EXPECT_EQ(header, kCsvHeader);
  auto parsed = parse_csv(ss);
  ASSERT_EQ(parsed.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_TRUE(parsed[i].same_row(records[i]));

  std::stringstream bad("alg,n\nalg1,5\n");
  EXPECT_THROW(parse_csv(bad), std::invalid_argument);
}

TEST(Json, ContainsRecordsAndSummary) {
  auto records = run_experiment(small_config(Algorithm::pairwise));
  std::stringstream ss;
  write_json(ss, records, summarize(records));
  auto j = nlohmann::json::parse(ss.str());
  EXPECT_EQ(j["records"].size(), 10u);
  EXPECT_DOUBLE_EQ(j["summary"]["success_rate"].get<double>(), 1.0);
}

TEST(ErSanity, Examples) {
  EXPECT_DOUBLE_EQ(er_connectivity_sanity(20, 1.0, 50, 1), 1.0);
  EXPECT_DOUBLE_EQ(er_connectivity_sanity(1, 0.0, 50, 1), 1.0);
  EXPECT_DOUBLE_EQ(er_connectivity_sanity(5, 0.0, 50, 1), 0.0);
  const double p = er_threshold(64, 0.05);
  EXPECT_NEAR(p, 1 - std::pow(0.05 / (3 * 64), 2.0 / 64), 1e-12);
  EXPECT_GE(er_connectivity_sanity(64, p, 1000, 7), 0.95);
}

}  // namespace
}  // namespace subsetq
