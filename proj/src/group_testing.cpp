#include "subsetq/group_testing.hpp"

#include <algorithm>
#include <stdexcept>

namespace subsetq {

std::size_t bit_rows(std::size_t m) { return std::max<std::size_t>(1, ceil_log2(m)); }

BitMatrixPlan make_bit_matrix(std::size_t m, std::size_t rows) {
  if (m == 0) throw std::invalid_argument("bit matrix needs at least one column");
  if (rows == 0) rows = bit_rows(m);
  if (rows < 64 && (std::size_t{1} << rows) < m) {
    throw std::invalid_argument("too few rows to index every column");
  }
  BitMatrixPlan plan{m, rows, std::vector<std::vector<std::uint32_t>>(rows),
                     std::vector<std::vector<std::uint32_t>>(rows)};
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t c = 0; c < m; ++c) {
      bool bit = j < 64 && ((c >> j) & 1U);
      (bit ? plan.ones : plan.zeros)[j].push_back(static_cast<std::uint32_t>(c));
    }
  }
  return plan;
}

RepOutcome decode_cert_one(std::span<const std::uint8_t> m_bits,
                           std::span<const std::uint8_t> z_bits, std::size_t m) {
  if (m_bits.size() != z_bits.size() || m_bits.empty()) {
    throw std::invalid_argument("row answer vectors must be nonempty and equally long");
  }
  // Row 0 and its complement cover every column, so both zero means no hit.
  if (!m_bits[0] && !z_bits[0]) return {RepKind::zero, 0};
  std::size_t index = 0;
  for (std::size_t j = 0; j < m_bits.size(); ++j) {
    if (m_bits[j] && z_bits[j]) return {RepKind::many, 0};
    if (!m_bits[j] && !z_bits[j]) throw std::invalid_argument("inconsistent row answers");
    if (m_bits[j]) index |= std::size_t{1} << j;
  }
  if (index >= m) throw std::invalid_argument("decoded column out of range");
  return {RepKind::one, index};
}

FindrepTable::FindrepTable(QueryPlan& plan, PointSet reference, std::size_t rows)
    : reference_(std::move(reference)) {
  if (reference_.empty()) throw std::invalid_argument("findrep needs a nonempty reference set");
  rows_ = rows == 0 ? bit_rows(reference_.size()) : rows;
  BitMatrixPlan matrix = make_bit_matrix(reference_.size(), rows_);
  PointSet buf;
  for (std::size_t j = 0; j < rows_; ++j) {
    buf.clear();
    for (auto c : matrix.ones[j]) buf.push_back(reference_[c]);
    ones_.push_back(plan.add_set(buf));
    buf.clear();
    for (auto c : matrix.zeros[j]) buf.push_back(reference_[c]);
    zeros_.push_back(plan.add_set(buf));
  }
  sorted_.reserve(reference_.size());
  for (std::size_t i = 0; i < reference_.size(); ++i) {
    sorted_.emplace_back(reference_[i], static_cast<std::uint32_t>(i));
  }
  std::sort(sorted_.begin(), sorted_.end());
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (sorted_[i].first == sorted_[i - 1].first) {
      throw std::invalid_argument("reference set has a repeated point");
    }
  }
}

std::optional<std::size_t> FindrepTable::position(Point x) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::make_pair(x, std::uint32_t{0}));
  if (it == sorted_.end() || it->first != x) return std::nullopt;
  return it->second;
}

QueryId FindrepTable::add_probe(QueryPlan& plan, Point x) const {
  const auto pos = position(x);
  QueryId first = static_cast<QueryId>(plan.size());
  for (std::size_t j = 0; j < rows_; ++j) {
    const bool in_ones = pos && j < 64 && ((*pos >> j) & 1U);
    const bool in_zeros = pos && !in_ones;
    plan.add_query(ones_[j]);
    in_ones ? plan.add_query(ones_[j]) : plan.add_query(ones_[j], x);
    plan.add_query(zeros_[j]);
    in_zeros ? plan.add_query(zeros_[j]) : plan.add_query(zeros_[j], x);
  }
  return first;
}

RepResult FindrepTable::decode(const AnswerMap& answers, QueryId first) const {
  std::vector<std::uint8_t> m_bits(rows_);
  std::vector<std::uint8_t> z_bits(rows_);
  for (std::size_t j = 0; j < rows_; ++j) {
    QueryId base = first + static_cast<QueryId>(4 * j);
    m_bits[j] = answers[base] == answers[base + 1];
    z_bits[j] = answers[base + 2] == answers[base + 3];
  }
  RepOutcome out = decode_cert_one(m_bits, z_bits, reference_.size());
  return {out.kind, out.kind == RepKind::one ? reference_[out.index] : Point{0}};
}

OrBinding or_sim_plan(QueryPlan& plan, Point x, std::span<const Point> set) {
  if (std::find(set.begin(), set.end(), x) != set.end()) return {true, 0};
  SliceId s = plan.add_set(set);
  QueryId first = plan.add_query(s);
  plan.add_query(s, x);
  return {false, first};
}

bool or_sim_decode(const AnswerMap& answers, const OrBinding& binding) {
  if (binding.short_circuit) return true;
  return answers[binding.first] == answers[binding.first + 1];
}

std::vector<PointSet> split_blocks(std::span<const Point> set, std::size_t block) {
  if (block == 0) throw std::invalid_argument("block size must be positive");
  std::vector<PointSet> out;
  for (std::size_t i = 0; i < set.size(); i += block) {
    auto end = std::min(set.size(), i + block);
    out.emplace_back(set.begin() + static_cast<std::ptrdiff_t>(i),
                     set.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

std::size_t support_recover_tests(std::size_t scope_size, std::size_t t, double alpha,
                                  double scale) {
  double m = scale * kEuler * static_cast<double>(t) *
             std::log(static_cast<double>(scope_size) / alpha);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(m - 1e-9)));
}

SupportRecoverProbe support_recover_plan(QueryPlan& plan, Point x, std::span<const Point> scope,
                                         const SupportRecoverParams& params, Rng& rng) {
  if (params.t < 1 || params.t > scope.size()) throw std::invalid_argument("need 1 <= t <= |scope|");
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) throw std::invalid_argument("need 0 < alpha < 1");
  if (params.size_bound && *params.size_bound < 2) {
    throw std::invalid_argument("size bound must allow a block plus the probe point");
  }
  const std::size_t samples = (scope.size() + params.t - 1) / params.t;
  const std::size_t block = params.size_bound ? std::min(*params.size_bound - 1, samples) : samples;

  SupportRecoverProbe probe;
  probe.x = x;
  probe.t = params.t;
  probe.tests = support_recover_tests(scope.size(), params.t, params.alpha, params.scale);
  probe.blocks_per_test = (samples + block - 1) / block;
  probe.first = static_cast<QueryId>(plan.size());
  probe.first_slice = static_cast<SliceId>(plan.slice_count());

  // Repeats inside a block are dropped with a stamp per point, keeping draw order.
  Point top = x;
  for (Point p : scope) top = std::max(top, p);
  std::vector<std::uint32_t> stamp(static_cast<std::size_t>(top) + 1, 0);
  std::uint32_t generation = 0;

  std::uniform_int_distribution<std::size_t> pick(0, scope.size() - 1);
  PointSet buf;
  for (std::size_t i = 0; i < probe.tests; ++i) {
    for (std::size_t b = 0; b < samples; b += block) {
      ++generation;
      buf.clear();
      const std::size_t len = std::min(samples, b + block) - b;
      for (std::size_t j = 0; j < len; ++j) {
        Point p = scope[pick(rng)];
        if (stamp[p] != generation) {
          stamp[p] = generation;
          buf.push_back(p);
        }
      }
      SliceId s = plan.add_set(buf);
      plan.add_query(s);
      stamp[x] == generation ? plan.add_query(s) : plan.add_query(s, x);
    }
  }
  return probe;
}

SupportOutcome support_recover_decode(const QueryPlan& plan, const AnswerMap& answers,
                                      const SupportRecoverProbe& probe,
                                      std::span<const Point> scope) {
  Point top = 0;
  for (Point p : scope) top = std::max(top, p);
  std::vector<std::uint8_t> removed(static_cast<std::size_t>(top) + 1, 0);

  for (std::size_t i = 0; i < probe.tests; ++i) {
    bool hit = false;
    for (std::size_t b = 0; b < probe.blocks_per_test && !hit; ++b) {
      QueryId q = probe.first + static_cast<QueryId>(2 * (i * probe.blocks_per_test + b));
      hit = answers[q] == answers[q + 1];
    }
    if (hit) continue;
    for (std::size_t b = 0; b < probe.blocks_per_test; ++b) {
      auto s = static_cast<SliceId>(probe.first_slice + i * probe.blocks_per_test + b);
      for (Point p : plan.slice(s)) removed[p] = 1;
    }
  }
  SupportOutcome out;
  for (Point p : scope) {
    if (!removed[p]) out.support.push_back(p);
  }
  std::sort(out.support.begin(), out.support.end());
  if (out.support.size() > probe.t) {
    out.exceeds = true;
    out.support.clear();
  }
  return out;
}

}  // namespace subsetq
