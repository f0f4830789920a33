#include "subsetq/oracle.hpp"

#include <algorithm>
#include <cstring>

#include "json.hpp"

namespace subsetq {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

template <typename T>
void append_raw(std::string& out, const std::vector<T>& v) {
  std::uint64_t n = v.size();
  out.append(reinterpret_cast<const char*>(&n), sizeof n);
  out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
}

// FNV-1a over 32-bit words rather than bytes; every stored type is a whole
// number of words.
template <typename T>
std::uint64_t fnv(std::uint64_t h, const std::vector<T>& v) {
  static_assert(sizeof(T) % sizeof(std::uint32_t) == 0);
  const std::size_t words = v.size() * sizeof(T) / sizeof(std::uint32_t);
  for (std::size_t i = 0; i < words; ++i) {
    std::uint32_t w;
    std::memcpy(&w, reinterpret_cast<const char*>(v.data()) + i * sizeof w, sizeof w);
    h ^= w;
    h *= kFnvPrime;
  }
  h ^= v.size();
  h *= kFnvPrime;
  return h;
}

}  // namespace

SliceId QueryPlan::add_set(std::span<const Point> points) {
  if (pool_.size() + points.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("query plan pool overflow");
  }
  Slice s{static_cast<std::uint32_t>(pool_.size()), static_cast<std::uint32_t>(points.size())};
  pool_.insert(pool_.end(), points.begin(), points.end());
  slices_.push_back(s);
  return static_cast<SliceId>(slices_.size() - 1);
}

SliceId QueryPlan::add_prefix(SliceId base, std::size_t len) {
  const Slice& b = slices_.at(base);
  if (len > b.len) throw std::invalid_argument("prefix longer than its base slice");
  slices_.push_back({b.offset, static_cast<std::uint32_t>(len)});
  return static_cast<SliceId>(slices_.size() - 1);
}

QueryId QueryPlan::add_query(SliceId slice) {
  if (slice >= slices_.size()) throw std::out_of_range("unknown slice");
  queries_.push_back({slice, kNoExtra});
  return static_cast<QueryId>(queries_.size() - 1);
}

QueryId QueryPlan::add_query(SliceId slice, Point extra) {
  if (slice >= slices_.size()) throw std::out_of_range("unknown slice");
  if (extra == kNoExtra) throw std::invalid_argument("reserved point id");
  queries_.push_back({slice, extra});
  return static_cast<QueryId>(queries_.size() - 1);
}

std::span<const Point> QueryPlan::slice(SliceId s) const {
  const Slice& sl = slices_.at(s);
  return std::span<const Point>(pool_.data() + sl.offset, sl.len);
}

std::optional<Point> QueryPlan::extra(QueryId id) const {
  std::uint32_t e = queries_.at(id).extra;
  if (e == kNoExtra) return std::nullopt;
  return e;
}

PointSet QueryPlan::materialize(QueryId id) const {
  auto base = base_set(id);
  PointSet out(base.begin(), base.end());
  if (auto e = extra(id)) out.push_back(*e);
  return out;
}

std::string QueryPlan::serialize() const {
  std::string out;
  out.reserve(pool_.size() * sizeof(Point) + slices_.size() * sizeof(Slice) +
              queries_.size() * sizeof(Query) + 32);
  append_raw(out, pool_);
  append_raw(out, slices_);
  append_raw(out, queries_);
  return out;
}

std::uint64_t QueryPlan::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  h = fnv(h, pool_);
  h = fnv(h, slices_);
  h = fnv(h, queries_);
  return h;
}

Oracle::Oracle(const Clustering& truth, RoundBudget budget)
    : labels_(truth.labels().begin(), truth.labels().end()),
      k_(truth.k()),
      budget_(budget),
      label_stamp_(truth.k(), 0),
      point_stamp_(truth.n(), 0) {
  if (budget_.max_rounds == 0) throw std::invalid_argument("round budget must be at least 1");
}

AnswerMap Oracle::submit_round(const QueryPlan& plan) {
  if (stats_.rounds_used >= budget_.max_rounds) {
    throw ProtocolError("round budget exhausted: " + std::to_string(budget_.max_rounds) +
                        " round(s) allowed");
  }
  const std::size_t q = plan.size();
  const std::size_t n = labels_.size();

  // Bucket queries by slice so each slice is scanned once however many
  // probes share it.
  std::vector<std::uint32_t> start(plan.slice_count() + 1, 0);
  for (QueryId id = 0; id < q; ++id) ++start[plan.slice_of(id) + 1];
  for (std::size_t s = 0; s < plan.slice_count(); ++s) start[s + 1] += start[s];
  std::vector<QueryId> order(q);
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (QueryId id = 0; id < q; ++id) order[fill[plan.slice_of(id)]++] = id;
  }

  std::vector<std::uint32_t> answers(q);
  std::uint64_t max_size = 0;
  for (SliceId s = 0; s < plan.slice_count(); ++s) {
    if (start[s] == start[s + 1]) continue;
    if (++generation_ == 0) {
      std::fill(label_stamp_.begin(), label_stamp_.end(), 0);
      std::fill(point_stamp_.begin(), point_stamp_.end(), 0);
      generation_ = 1;
    }
    const std::uint32_t g = generation_;
    std::uint32_t distinct = 0;
    std::uint32_t size = 0;
    for (Point x : plan.slice(s)) {
      if (x >= n) throw std::invalid_argument("query point out of range");
      if (point_stamp_[x] != g) {
        point_stamp_[x] = g;
        ++size;
      }
      Label l = labels_[x];
      if (label_stamp_[l] != g) {
        label_stamp_[l] = g;
        ++distinct;
      }
    }
    for (std::uint32_t j = start[s]; j < start[s + 1]; ++j) {
      QueryId id = order[j];
      std::uint32_t a = distinct;
      std::uint64_t sz = size;
      if (auto e = plan.extra(id)) {
        if (*e >= n) throw std::invalid_argument("query point out of range");
        if (point_stamp_[*e] != g) ++sz;
        if (label_stamp_[labels_[*e]] != g) ++a;
      }
      answers[id] = a;
      max_size = std::max(max_size, sz);
    }
  }
  if (budget_.max_query_size && max_size > *budget_.max_query_size) {
    throw ProtocolError("query of size " + std::to_string(max_size) + " exceeds bound " +
                        std::to_string(*budget_.max_query_size));
  }

  if (log_ != nullptr) {
    for (QueryId id = 0; id < q; ++id) {
      nlohmann::json line = {{"round", stats_.rounds_used + 1},
                             {"id", id},
                             {"set", plan.materialize(id)},
                             {"answer", answers[id]}};
      *log_ << line.dump() << '\n';
    }
  }

  ++stats_.rounds_used;
  stats_.total_queries += q;
  stats_.max_query_size = std::max(stats_.max_query_size, max_size);
  fingerprints_.push_back(plan.fingerprint());
  return AnswerMap(std::move(answers));
}

PartialLabels::PartialLabels(std::size_t n) : labels_(n, kUnknown), stamp_(n, 0) {}

Label PartialLabels::add_cluster(std::span<const Point> members) {
  for (Point x : members) {
    if (labels_.at(x) != kUnknown) throw std::logic_error("point already belongs to a cluster");
  }
  Label l = static_cast<Label>(clusters_++);
  for (Point x : members) {
    if (labels_[x] == kUnknown) ++labeled_;
    labels_[x] = l;
  }
  return l;
}

void PartialLabels::assign(Point x, Label label) {
  if (label >= clusters_) throw std::out_of_range("no such cluster");
  if (labels_.at(x) != kUnknown) throw std::logic_error("point already belongs to a cluster");
  labels_[x] = label;
  ++labeled_;
}

std::size_t PartialLabels::distinct_known(std::span<const Point> set) const {
  if (stamp_.size() < clusters_) stamp_.resize(clusters_, 0);
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  std::size_t distinct = 0;
  for (Point x : set) {
    Label l = labels_.at(x);
    if (l == kUnknown) continue;
    if (stamp_[l] != generation_) {
      stamp_[l] = generation_;
      ++distinct;
    }
  }
  return distinct;
}

PointSet PartialLabels::unlabeled(std::span<const Point> universe) const {
  PointSet out;
  for (Point x : universe) {
    if (!known(x)) out.push_back(x);
  }
  return out;
}

std::optional<Clustering> PartialLabels::to_clustering() const {
  if (labeled_ != labels_.size() || labels_.empty()) return std::nullopt;
  return Clustering(labels_);
}

std::size_t derived_count(std::span<const Point> set, const PartialLabels& known) {
  for (Point x : set) {
    if (x >= known.n() || !known.known(x)) {
      throw std::invalid_argument("derived_count needs every point labeled");
    }
  }
  return known.distinct_known(set);
}

ReconstructionResult ReconstructionResult::fail(std::string why, PointSet unlabeled) {
  ReconstructionResult r;
  r.declared_fail = true;
  r.failure = std::move(why);
  r.unlabeled = std::move(unlabeled);
  return r;
}

}  // namespace subsetq
