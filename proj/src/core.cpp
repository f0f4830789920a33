#include "subsetq/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace subsetq {

namespace {

constexpr Label kUnset = std::numeric_limits<Label>::max();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Clustering assign_sizes(std::size_t n, const std::vector<std::size_t>& sizes, Rng& rng) {
  std::vector<Point> order(n);
  std::iota(order.begin(), order.end(), Point{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Label> labels(n);
  std::size_t at = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) labels[order[at++]] = static_cast<Label>(c);
  }
  return Clustering(std::move(labels));
}

}  // namespace

Clustering::Clustering(std::vector<Label> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("clustering needs at least one point");
  std::unordered_map<Label, Label> remap;
  for (auto& l : labels_) {
    auto [it, inserted] = remap.try_emplace(l, static_cast<Label>(remap.size()));
    if (inserted) sizes_.push_back(0);
    l = it->second;
    ++sizes_[l];
  }
}

Clustering Clustering::from_clusters(std::size_t n, const std::vector<PointSet>& clusters) {
  std::vector<Label> labels(n, kUnset);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) throw std::invalid_argument("empty cluster");
    for (Point x : clusters[c]) {
      if (x >= n) throw std::invalid_argument("cluster member out of range");
      if (labels[x] != kUnset) throw std::invalid_argument("clusters overlap");
      labels[x] = static_cast<Label>(c);
    }
  }
  if (std::find(labels.begin(), labels.end(), kUnset) != labels.end()) {
    throw std::invalid_argument("clusters do not cover the universe");
  }
  return Clustering(std::move(labels));
}

std::vector<PointSet> Clustering::clusters() const {
  std::vector<PointSet> out(k());
  for (std::size_t c = 0; c < k(); ++c) out[c].reserve(sizes_[c]);
  for (Point x = 0; x < n(); ++x) out[labels_[x]].push_back(x);
  return out;
}

std::size_t count_ground_truth(const Clustering& clustering, std::span<const Point> set) {
  std::vector<bool> seen(clustering.k(), false);
  std::size_t distinct = 0;
  for (Point x : set) {
    if (x >= clustering.n()) throw std::invalid_argument("point out of range");
    Label l = clustering.label(x);
    if (!seen[l]) {
      seen[l] = true;
      ++distinct;
    }
  }
  return distinct;
}

bool clusterings_equal(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw std::invalid_argument("clusterings over different universes");
  std::unordered_map<Label, Label> forward;
  std::unordered_map<Label, Label> backward;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, fnew] = forward.try_emplace(a[i], b[i]);
    auto [g, gnew] = backward.try_emplace(b[i], a[i]);
    if (f->second != b[i] || g->second != a[i]) return false;
  }
  return true;
}

bool clusterings_equal(const Clustering& a, const Clustering& b) {
  return clusterings_equal(a.labels(), b.labels());
}

InstanceProfile InstanceProfile::parse(std::string_view name, double balance) {
  auto colon = name.find(':');
  std::string_view head = name.substr(0, colon);
  std::optional<double> arg;
  if (colon != std::string_view::npos) {
    double v = 0;
    auto tail = name.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), v);
    if (ec != std::errc{} || ptr != tail.data() + tail.size()) {
      throw std::invalid_argument("bad profile parameter: " + std::string(name));
    }
    arg = v;
  }
  InstanceProfile p;
  if (head == "uniform" || head == "uniform-random") {
    p = uniform();
  } else if (head == "balanced") {
    p = balanced_by(arg.value_or(balance));
  } else if (head == "geometric") {
    p = geometric_by(arg.value_or(2.0));
  } else if (head == "planted-pair") {
    p = planted_pair();
  } else {
    throw std::invalid_argument("unknown profile: " + std::string(name));
  }
  if (p.kind == Kind::balanced && !(p.balance >= 1.0)) {
    throw std::invalid_argument("balanced profile needs B >= 1");
  }
  if (p.kind == Kind::geometric && !(p.ratio > 1.0)) {
    throw std::invalid_argument("geometric profile needs ratio > 1");
  }
  return p;
}

std::string InstanceProfile::name() const {
  auto num = [](double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  switch (kind) {
    case Kind::uniform_random: return "uniform";
    case Kind::balanced: return "balanced:" + num(balance);
    case Kind::geometric: return "geometric:" + num(ratio);
    case Kind::planted_pair: return "planted-pair";
  }
  return "unknown";
}

std::vector<std::size_t> geometric_sizes(std::size_t n, std::size_t k, double ratio) {
  if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (!(ratio > 1.0)) throw std::invalid_argument("geometric ratio must exceed 1");
  // Weights ratio^(k-1-i), normalized in log space so large k does not overflow.
  std::vector<double> quota(k);
  double total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    quota[i] = std::pow(ratio, -static_cast<double>(i));
    total += quota[i];
  }
  std::vector<std::size_t> sizes(k);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double exact = static_cast<double>(n) * quota[i] / total;
    sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    assigned += sizes[i];
    remainders.emplace_back(exact - static_cast<double>(sizes[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; assigned < n; ++j, ++assigned) ++sizes[remainders[j % k].second];
  // Fix-up: move single points from the largest cluster into empty ones.
  for (std::size_t i = 0; i < k; ++i) {
    if (sizes[i] > 0) continue;
    auto largest = std::max_element(sizes.begin(), sizes.end());
    --*largest;
    sizes[i] = 1;
  }
  return sizes;
}

Clustering generate_instance(std::size_t n, std::size_t k, const InstanceProfile& profile,
                             std::uint64_t seed) {
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  Rng rng(derive_seed(seed, "instance"));
  switch (profile.kind) {
    case InstanceProfile::Kind::uniform_random: {
      // The first k points of a random order seed the clusters; the rest are uniform.
      std::vector<Point> order(n);
      std::iota(order.begin(), order.end(), Point{0});
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<Label> labels(n);
      std::uniform_int_distribution<Label> pick(0, static_cast<Label>(k - 1));
      for (std::size_t i = 0; i < n; ++i) {
        labels[order[i]] = i < k ? static_cast<Label>(i) : pick(rng);
      }
      return Clustering(std::move(labels));
    }
    case InstanceProfile::Kind::balanced: {
      const double b = profile.balance;
      if (!(b >= 1.0)) throw std::invalid_argument("balanced profile needs B >= 1");
      const double nn = static_cast<double>(n);
      const double kk = static_cast<double>(k);
      auto lo = static_cast<std::size_t>(std::ceil(nn / (b * kk) - 1e-9));
      auto hi = static_cast<std::size_t>(std::floor(b * nn / kk + 1e-9));
      lo = std::max<std::size_t>(lo, 1);
      if (lo > hi || lo * k > n || hi * k < n) {
        throw std::invalid_argument("no B-balanced size vector for these n, k, B");
      }
      std::vector<std::size_t> sizes(k, lo);
      std::size_t left = n - lo * k;
      std::vector<std::size_t> open(k);
      std::iota(open.begin(), open.end(), std::size_t{0});
      while (left > 0) {
        std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
        std::size_t j = pick(rng);
        ++sizes[open[j]];
        --left;
        if (sizes[open[j]] == hi) {
          open[j] = open.back();
          open.pop_back();
        }
      }
      return assign_sizes(n, sizes, rng);
    }
    case InstanceProfile::Kind::geometric:
      return assign_sizes(n, geometric_sizes(n, k, profile.ratio), rng);
    case InstanceProfile::Kind::planted_pair: {
      if (k != 3 || n < 3) throw std::invalid_argument("planted-pair needs k = 3 and n >= 3");
      std::uniform_int_distribution<Point> pick(0, static_cast<Point>(n - 1));
      Point x = pick(rng);
      Point y = pick(rng);
      while (y == x) y = pick(rng);
      std::vector<Label> labels(n, 2);
      labels[x] = 0;
      labels[y] = 1;
      return Clustering(std::move(labels));
    }
  }
  throw std::invalid_argument("unknown profile");
}

bool is_balanced(const Clustering& clustering, double balance) {
  const double nn = static_cast<double>(clustering.n());
  const double kk = static_cast<double>(clustering.k());
  for (std::size_t s : clustering.sizes()) {
    double size = static_cast<double>(s);
    if (size < nn / (balance * kk) - 1e-9 || size > balance * nn / kk + 1e-9) return false;
  }
  return true;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

void UndirectedGraph::validate() const {
  std::unordered_map<Point, std::size_t> index;
  for (Point v : vertices) {
    if (!index.emplace(v, index.size()).second) throw std::invalid_argument("repeated vertex");
  }
  for (auto [a, b] : edges) {
    if (a == b) throw std::invalid_argument("self-loop");
    if (!index.contains(a) || !index.contains(b)) {
      throw std::invalid_argument("edge references an unlisted vertex");
    }
  }
}

std::vector<PointSet> connected_components(const UndirectedGraph& graph) {
  graph.validate();
  std::unordered_map<Point, std::size_t> index;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) index.emplace(graph.vertices[i], i);
  DisjointSets sets(graph.vertices.size());
  for (auto [a, b] : graph.edges) sets.unite(index.at(a), index.at(b));

  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<PointSet> out;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    auto [it, fresh] = slot.try_emplace(sets.find(i), out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(graph.vertices[i]);
  }
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end(), [](const PointSet& a, const PointSet& b) { return a[0] < b[0]; });
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view stream) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(base) ^ h);
}

void sample_distinct(std::span<const Point> universe, std::size_t count, Rng& rng, PointSet& out) {
  if (universe.empty()) throw std::invalid_argument("cannot sample from an empty universe");
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
  out.resize(count);
  for (auto& x : out) x = universe[pick(rng)];
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

PointSet sample_distinct(std::span<const Point> universe, std::size_t count, Rng& rng) {
  PointSet out;
  sample_distinct(universe, count, rng, out);
  return out;
}

std::size_t ceil_log2(std::size_t m) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < m) ++r;
  return r;
}

}  // namespace subsetq
