#include "subsetq/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subsetq {

void Alg3Params::validate() const {
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (s < 2 || s > n) throw std::invalid_argument("need 2 <= s <= n");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("need 0 < delta < 1");
  if (!(scale > 0.0)) throw std::invalid_argument("constant scale must be positive");
}

Alg3Plan alg3_plan(const Alg3Params& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, "alg3"));
  Alg3Plan out;
  out.universe = full_universe(params.n);
  const double kk = static_cast<double>(params.k);
  const std::size_t last = std::max<std::size_t>(1, ceil_log2(params.n));
  std::uniform_int_distribution<Point> pick(0, static_cast<Point>(params.n - 1));

  for (std::size_t p = 1; p <= last; ++p) {
    const std::size_t half = std::size_t{1} << (p - 1);
    const std::size_t reps =
        repeat_count(params.scale * static_cast<double>(2 * half) * std::log(2.0 * kk / params.delta));
    SupportRecoverParams sr;
    sr.t = std::max<std::size_t>(1, (params.n + half - 1) / half);
    sr.alpha = params.delta / (2.0 * kk);
    // Blocks of min(s - 1, 2^(p-1)) points keep the block plus x within s.
    sr.size_bound = std::min(params.s, half + 1);
    sr.scale = params.scale;
    for (std::size_t i = 0; i < reps; ++i) {
      Point x = pick(rng);
      out.probes.push_back(support_recover_plan(out.plan, x, out.universe, sr, rng));
    }
  }
  return out;
}

ReconstructionResult alg3_reconstruct(const Alg3Params& params, const Alg3Plan& built,
                                      const AnswerMap& answers) {
  std::vector<PointSet> found;
  for (const auto& probe : built.probes) {
    SupportOutcome r = support_recover_decode(built.plan, answers, probe, built.universe);
    if (!r.exceeds) found.push_back(std::move(r.support));
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  PartialLabels labels(params.n);
  for (const auto& c : found) {
    for (Point x : c) {
      if (labels.known(x)) return ReconstructionResult::fail("recovered clusters overlap");
    }
    labels.add_cluster(c);
  }
  PointSet missing = labels.unlabeled(built.universe);
  if (!missing.empty()) {
    return ReconstructionResult::fail(std::to_string(missing.size()) + " point(s) left unlabeled",
                                      std::move(missing));
  }
  if (labels.cluster_count() != params.k) {
    return ReconstructionResult::fail("recovered " + std::to_string(labels.cluster_count()) +
                                      " clusters, expected " + std::to_string(params.k));
  }
  ReconstructionResult out;
  out.clustering = labels.to_clustering();
  return out;
}

Alg4Params Alg4Params::from_size_bound(std::size_t n, std::size_t k, std::size_t s, double delta,
                                       double scale) {
  if (s < 2 || n < 2) throw std::invalid_argument("need s >= 2 and n >= 2");
  return {n, k, std::log(static_cast<double>(n)) / std::log(static_cast<double>(s)), delta, scale};
}

void Alg4Params::validate() const {
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (n < 4) throw std::invalid_argument("need n >= 4 so that 2 <= r <= log2 n is possible");
  if (!(r >= 2.0 - 1e-9 && r <= std::log2(static_cast<double>(n)) + 1e-9)) {
    throw std::invalid_argument("need 2 <= r <= log2 n");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("need 0 < delta < 1");
  if (!(scale > 0.0)) throw std::invalid_argument("constant scale must be positive");
}

std::size_t Alg4Params::size_bound() const {
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / r) - 1e-9));
}

std::size_t Alg4Params::phase_count() const {
  double phases = std::log(std::log2(static_cast<double>(n))) / std::log(r);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(phases - 1e-9)));
}

PhasedPlan alg4_plan(const Alg4Params& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, "alg4"));
  PhasedPlan out;
  out.layout.universe = full_universe(params.n);
  out.layout.k = params.k;
  const double nn = static_cast<double>(params.n);
  const double kk = static_cast<double>(params.k);
  const double r = params.r;
  const double log_n = std::log2(nn);
  const std::size_t cap = params.size_bound();
  PointSet buf;

  for (std::size_t p = 0; p < params.phase_count(); ++p) {
    const double rp = std::pow(r, static_cast<double>(p));
    // The integer phase count can overshoot log_r log2 n; the exponent stops at log2 n.
    const double e = std::min(rp * r, log_n);
    const auto size = std::min(
        static_cast<std::size_t>(std::ceil(std::pow(2.0, rp) - 1e-9)), cap);
    const std::size_t reps = repeat_count(params.scale * 20.0 * nn * kk *
                                          std::log(3.0 * nn * kk * kk / params.delta) *
                                          std::pow(2.0, e * (1.0 - 2.0 / r)));
    PairPhase phase;
    phase.universe = out.layout.universe;
    phase.promote_at = nn / kk * std::pow(2.0, -e);
    phase.sets.reserve(reps);
    for (std::size_t i = 0; i < reps; ++i) {
      sample_distinct(out.layout.universe, size, rng, buf);
      phase.sets.push_back(out.plan.add_set(buf));
    }
    phase.add_queries(out.plan);
    out.layout.phases.emplace_back(std::move(phase));
  }
  return out;
}

ReconstructionResult alg4_reconstruct(const Alg4Params& params, const PhasedPlan& built,
                                      const AnswerMap& answers) {
  PartialLabels labels(params.n);
  apply_phases(built.plan, built.layout, answers, labels);
  return finish_reconstruction(labels, built.layout.universe, params.k);
}

std::uint64_t lower_bound_curve(std::uint64_t n, std::uint64_t s) {
  if (s < 2 || s > n) throw std::invalid_argument("need 2 <= s <= n");
  const std::uint64_t sq = s * s;
  return std::max((n * n + sq - 1) / sq, n);
}

}  // namespace subsetq
