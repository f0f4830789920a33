#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "subsetq/core.hpp"
#include "subsetq/harness.hpp"

namespace subsetq {
namespace {

// Independent count: distinct labels via std::set.
std::size_t brute_count(std::span<const Label> labels, std::span<const Point> s) {
  std::set<Label> seen;
  for (Point x : s) seen.insert(labels[x]);
  return seen.size();
}

Clustering random_clustering(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<Label> pick(0, static_cast<Label>(n - 1));
  std::vector<Label> labels(n);
  for (auto& l : labels) l = pick(rng);
  return Clustering(labels);
}

TEST(CountGroundTruth, Examples) {
  Clustering c({0, 0, 0, 1, 1, 2});
  EXPECT_EQ(count_ground_truth(c, PointSet{0, 3, 5}), 3u);
  EXPECT_EQ(count_ground_truth(c, PointSet{0, 1}), 1u);
  EXPECT_EQ(count_ground_truth(c, PointSet{}), 0u);
}

TEST(CountGroundTruth, OutOfRangeThrows) {
  Clustering c({0, 1});
  EXPECT_THROW(count_ground_truth(c, PointSet{2}), std::invalid_argument);
}

TEST(CountGroundTruth, BoundsAndMonotonicityExhaustive) {
  Rng rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rep % 8;
    Clustering c = random_clustering(n, rng);
    std::vector<std::size_t> counts(std::size_t{1} << n);
    for (std::uint32_t mask = 0; mask < counts.size(); ++mask) {
      PointSet s;
      for (Point x = 0; x < n; ++x) {
        if (mask >> x & 1U) s.push_back(x);
      }
      counts[mask] = count_ground_truth(c, s);
      ASSERT_EQ(counts[mask], brute_count(c.labels(), s));
      ASSERT_LE(counts[mask], std::min(s.size(), c.k()));
    }
    EXPECT_EQ(counts.back(), c.k());
    for (std::uint32_t a = 0; a < counts.size(); ++a) {
      for (std::uint32_t b = 0; b < counts.size(); b += 3) {
        ASSERT_LE(counts[a | b], counts[a] + counts[b]);
        if ((a & b) == a) ASSERT_LE(counts[a], counts[b]);
      }
    }
  }
}

TEST(Clustering, CanonicalizesLabels) {
  Clustering c({5, 5, 2, 9, 2});
  EXPECT_EQ(std::vector<Label>(c.labels().begin(), c.labels().end()), (std::vector<Label>{0, 0, 1, 2, 1}));
  EXPECT_EQ(c.k(), 3u);
  EXPECT_EQ(std::vector<std::size_t>(c.sizes().begin(), c.sizes().end()), (std::vector<std::size_t>{2, 2, 1}));
}

TEST(Clustering, FromClustersValidates) {
  EXPECT_THROW(Clustering::from_clusters(3, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(Clustering::from_clusters(3, {{0, 1}, {1, 2}}), std::invalid_argument);
  Clustering c = Clustering::from_clusters(3, {{2}, {0, 1}});
  EXPECT_TRUE(clusterings_equal(c, Clustering({1, 1, 0})));
}

TEST(GenerateInstance, BalancedBOneForcesEqualSizes) {
  Clustering c = generate_instance(8, 4, InstanceProfile::balanced_by(1.0), 7);
  EXPECT_EQ(c.k(), 4u);
  for (auto s : c.sizes()) EXPECT_EQ(s, 2u);
}

TEST(GenerateInstance, GeometricLargestRemainder) {
  // 7 points in proportion 4:2:1 round exactly to 4, 2, 1.
  Clustering c = generate_instance(7, 3, InstanceProfile::geometric_by(2.0), 1);
  std::vector<std::size_t> sizes(c.sizes().begin(), c.sizes().end());
  std::sort(sizes.rbegin(), sizes.rend());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{4, 2, 1}));
}

TEST(GenerateInstance, GeometricSizesMatchHandRounding) {
  // 10 points, weights 4:2:1 -> quotas 5.714, 2.857, 1.429 -> floors 5,2,1;
  // two leftovers go to remainders .857 and .714 -> 6,3,1.
  EXPECT_EQ(geometric_sizes(10, 3, 2.0), (std::vector<std::size_t>{6, 3, 1}));
  // Tiny clusters would round to zero; the fix-up keeps every cluster nonempty.
  auto sizes = geometric_sizes(6, 5, 4.0);
  EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), 6u);
  for (auto s : sizes) EXPECT_GE(s, 1u);
}

TEST(GenerateInstance, Deterministic) {
  for (auto profile : {InstanceProfile::uniform(), InstanceProfile::balanced_by(2.0),
                       InstanceProfile::geometric_by(3.0)}) {
    Clustering a = generate_instance(100, 7, profile, 99);
    Clustering b = generate_instance(100, 7, profile, 99);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.k(), 7u);
  }
}

TEST(GenerateInstance, BalancedAlwaysPassesCheck) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t k = 1 + seed % 9;
    // Multiples of k so that B = 1 is feasible too.
    const std::size_t n = k * (5 + seed);
    const double b = 1.0 + static_cast<double>(seed % 4) * 0.5;
    Clustering c = generate_instance(n, k, InstanceProfile::balanced_by(b), seed);
    EXPECT_TRUE(is_balanced(c, b)) << "n=" << n << " k=" << k << " B=" << b;
    EXPECT_EQ(c.k(), k);
  }
}

TEST(GenerateInstance, InfeasibleThrows) {
  EXPECT_THROW(generate_instance(5, 6, InstanceProfile::uniform(), 0), std::invalid_argument);
  EXPECT_THROW(generate_instance(7, 2, InstanceProfile::balanced_by(1.0), 0), std::invalid_argument);
  EXPECT_THROW(generate_instance(10, 4, InstanceProfile::planted_pair(), 0), std::invalid_argument);
}

TEST(GenerateInstance, PlantedPair) {
  Clustering c = generate_instance(20, 3, InstanceProfile::planted_pair(), 5);
  std::vector<std::size_t> sizes(c.sizes().begin(), c.sizes().end());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 1, 18}));
}

TEST(InstanceProfile, ParseAndName) {
  EXPECT_EQ(InstanceProfile::parse("uniform").kind, InstanceProfile::Kind::uniform_random);
  EXPECT_DOUBLE_EQ(InstanceProfile::parse("balanced:1.5").balance, 1.5);
  EXPECT_DOUBLE_EQ(InstanceProfile::parse("balanced", 2.0).balance, 2.0);
  EXPECT_DOUBLE_EQ(InstanceProfile::parse("geometric:3").ratio, 3.0);
  EXPECT_EQ(InstanceProfile::parse("planted-pair").kind, InstanceProfile::Kind::planted_pair);
  EXPECT_THROW(InstanceProfile::parse("balanced:0.5"), std::invalid_argument);
  EXPECT_THROW(InstanceProfile::parse("geometric:1"), std::invalid_argument);
  EXPECT_THROW(InstanceProfile::parse("zipf"), std::invalid_argument);
  EXPECT_EQ(InstanceProfile::parse(InstanceProfile::geometric_by(2.5).name()).ratio, 2.5);
}

TEST(ConnectedComponents, Examples) {
  UndirectedGraph path{{0, 1, 2, 3}, {{0, 1}, {1, 2}}};
  EXPECT_EQ(connected_components(path), (std::vector<PointSet>{{0, 1, 2}, {3}}));

  UndirectedGraph empty{{0, 1, 2}, {}};
  EXPECT_EQ(connected_components(empty), (std::vector<PointSet>{{0}, {1}, {2}}));

  UndirectedGraph complete{{0, 1, 2, 3, 4}, {}};
  for (Point a = 0; a < 5; ++a) {
    for (Point b = a + 1; b < 5; ++b) complete.edges.emplace_back(a, b);
  }
  EXPECT_EQ(connected_components(complete), (std::vector<PointSet>{{0, 1, 2, 3, 4}}));
}

TEST(ConnectedComponents, RejectsInvalidGraphs) {
  EXPECT_THROW(connected_components({{0, 1}, {{0, 0}}}), std::invalid_argument);
  EXPECT_THROW(connected_components({{0, 1}, {{0, 2}}}), std::invalid_argument);
}

TEST(ConnectedComponents, MatchesReachabilityOnRandomGraphs) {
  Rng rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const Point n = 12;
    UndirectedGraph g;
    for (Point v = 0; v < n; ++v) g.vertices.push_back(v);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    std::bernoulli_distribution coin(0.12);
    for (Point a = 0; a < n; ++a) {
      for (Point b = a + 1; b < n; ++b) {
        if (coin(rng)) {
          g.edges.emplace_back(a, b);
          adj[a][b] = adj[b][a] = true;
        }
      }
    }
    // Floyd-Warshall closure as the oracle.
    for (Point m = 0; m < n; ++m) {
      for (Point a = 0; a < n; ++a) {
        for (Point b = 0; b < n; ++b) adj[a][b] = adj[a][b] || (adj[a][m] && adj[m][b]);
      }
    }
    for (const auto& comp : connected_components(g)) {
      for (Point a : comp) {
        for (Point b = 0; b < n; ++b) {
          bool same = std::find(comp.begin(), comp.end(), b) != comp.end();
          ASSERT_EQ(same, a == b || adj[a][b]);
        }
      }
    }
  }
}

TEST(ClusteringsEqual, Examples) {
  EXPECT_TRUE(clusterings_equal(std::vector<Label>{0, 0, 1}, std::vector<Label>{1, 1, 0}));
  EXPECT_FALSE(clusterings_equal(std::vector<Label>{0, 0, 1}, std::vector<Label>{0, 1, 1}));
  Clustering x({0, 1, 0, 2});
  EXPECT_TRUE(clusterings_equal(x, x));
  EXPECT_THROW(clusterings_equal(std::vector<Label>{0}, std::vector<Label>{0, 0}), std::invalid_argument);
}

TEST(ClusteringsEqual, IsAnEquivalenceRelation) {
  Rng rng(21);
  std::vector<std::vector<Label>> pool;
  std::uniform_int_distribution<Label> pick(0, 2);
  for (int i = 0; i < 40; ++i) {
    std::vector<Label> l(5);
    for (auto& v : l) v = pick(rng);
    pool.push_back(l);
  }
  for (const auto& a : pool) {
    EXPECT_TRUE(clusterings_equal(a, a));
    for (const auto& b : pool) {
      ASSERT_EQ(clusterings_equal(a, b), clusterings_equal(b, a));
      for (const auto& c : pool) {
        if (clusterings_equal(a, b) && clusterings_equal(b, c)) ASSERT_TRUE(clusterings_equal(a, c));
      }
    }
  }
}

TEST(DisjointSets, UnionFind) {
  DisjointSets d(5);
  EXPECT_TRUE(d.unite(0, 1));
  EXPECT_FALSE(d.unite(1, 0));
  d.unite(3, 4);
  EXPECT_EQ(d.find(0), d.find(1));
  EXPECT_NE(d.find(0), d.find(3));
  EXPECT_EQ(d.size_of(4), 2u);
}

TEST(Sampling, DistinctSortedAndSeeded) {
  PointSet u{3, 5, 7, 9};
  Rng a(1), b(1);
  PointSet s = sample_distinct(u, 10, a);
  EXPECT_EQ(s, sample_distinct(u, 10, b));
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  for (Point x : s) EXPECT_NE(std::find(u.begin(), u.end(), x), u.end());
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
}

TEST(InstanceIo, RoundTrip) {
  Clustering c = generate_instance(30, 4, InstanceProfile::uniform(), 8);
  std::stringstream ss;
  write_instance(ss, c);
  EXPECT_EQ(read_instance(ss), c);
  std::stringstream bad(R"({"n": 2, "k": 3, "labels": [0, 1]})");
  EXPECT_THROW(read_instance(bad), std::invalid_argument);
}

}  // namespace
}  // namespace subsetq
