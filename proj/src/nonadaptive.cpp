#include "subsetq/nonadaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace subsetq {

namespace {

std::size_t pow2(std::size_t p) { return std::size_t{1} << p; }

}  // namespace

void NonAdaptiveParams::validate() const {
  if (n == 0 || k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("need 0 < delta < 1");
  if (!(scale > 0.0)) throw std::invalid_argument("constant scale must be positive");
}

std::size_t repeat_count(double x) {
  if (!(x >= 0.0)) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(x - 1e-9)));
}

double alg1_star_limit(std::size_t n, std::size_t k, double delta) {
  const double kk = static_cast<double>(k);
  return std::log2(kk * kk * std::log2(static_cast<double>(n) / delta));
}

double alg2_singleton_limit(std::size_t n, double delta) {
  return std::log2(std::log2(static_cast<double>(n) / delta));
}

void apply_phases(const QueryPlan& plan, const PhaseLayout& layout, const AnswerMap& answers,
                  PartialLabels& labels) {
  for (const Phase& phase : layout.phases) {
    std::visit(
        [&](const auto& ph) {
          using T = std::decay_t<decltype(ph)>;
          if constexpr (std::is_same_v<T, StarPhase>) {
            ph.reconstruct(answers, labels);
          } else {
            ph.reconstruct(plan, answers, labels);
          }
        },
        phase);
  }
}

PhaseLayout alg1_append(QueryPlan& plan, std::span<const Point> universe, std::size_t k,
                        double delta, double scale, Rng& rng) {
  PhaseLayout layout{PointSet(universe.begin(), universe.end()), k, {}};
  const std::size_t n = universe.size();
  if (n == 0) return layout;
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const std::size_t last = std::max<std::size_t>(1, ceil_log2(n));
  const double star_limit = alg1_star_limit(n, k, delta);
  const std::size_t star_sets = repeat_count(scale * 5.0 * std::log2(kk * kk / delta));
  PointSet buf;

  for (std::size_t p = 1; p <= last; ++p) {
    const double promote = nn / static_cast<double>(pow2(p));
    if (static_cast<double>(p) <= star_limit) {
      // Reference sets use 2^(p-1) samples, so phase 1 draws a single point.
      StarPhase star;
      star.probes = layout.universe;
      star.promote_at = promote;
      const std::size_t samples = pow2(p - 1);
      const std::size_t rows = std::max<std::size_t>(1, p - 1);
      for (std::size_t l = 0; l < star_sets; ++l) {
        star.tables.emplace_back(plan, sample_distinct(universe, samples, rng), rows);
      }
      star.add_queries(plan);
      layout.phases.emplace_back(std::move(star));
    } else {
      PairPhase pairs;
      pairs.universe = layout.universe;
      pairs.promote_at = promote;
      const std::size_t reps =
          repeat_count(scale * 40.0 * nn * kk * kk * std::log(3.0 * nn * kk * kk / delta) /
                       static_cast<double>(pow2(p)));
      const std::size_t samples = (pow2(p) + k - 1) / k;
      pairs.sets.reserve(reps);
      for (std::size_t i = 0; i < reps; ++i) {
        sample_distinct(universe, samples, rng, buf);
        pairs.sets.push_back(plan.add_set(buf));
      }
      pairs.add_queries(plan);
      layout.phases.emplace_back(std::move(pairs));
    }
  }
  return layout;
}

PhasedPlan alg1_plan(const NonAdaptiveParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, "alg1"));
  PhasedPlan out;
  PointSet universe = full_universe(params.n);
  out.layout = alg1_append(out.plan, universe, params.k, params.delta, params.scale, rng);
  return out;
}

ReconstructionResult alg1_reconstruct(const NonAdaptiveParams& params, const PhasedPlan& built,
                                      const AnswerMap& answers) {
  PartialLabels labels(params.n);
  apply_phases(built.plan, built.layout, answers, labels);
  return finish_reconstruction(labels, built.layout.universe, params.k);
}

PhasedPlan alg2_plan(const NonAdaptiveParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, "alg2"));
  PhasedPlan out;
  out.layout.universe = full_universe(params.n);
  out.layout.k = params.k;
  const PointSet& universe = out.layout.universe;
  QueryPlan& plan = out.plan;

  const double nn = static_cast<double>(params.n);
  const double kk = static_cast<double>(params.k);
  const double delta = params.delta;
  const std::size_t last = ceil_log2(params.n);
  const double small_limit = alg2_singleton_limit(params.n, delta);
  PointSet buf;

  for (std::size_t p = 0; p <= last; ++p) {
    const std::size_t samples = pow2(p);
    if (static_cast<double>(p) <= small_limit) {
      SingletonPhase phase;
      phase.probes = universe;
      const std::size_t reps = repeat_count(params.scale * 2.0 * kEuler * kk * std::log(kk * kk / delta));
      for (std::size_t i = 0; i < reps; ++i) {
        sample_distinct(universe, samples, rng, buf);
        phase.sets.push_back(plan.add_set(buf));
      }
      phase.add_queries(plan);
      out.layout.phases.emplace_back(std::move(phase));
    } else {
      PairPhase phase;
      phase.universe = universe;
      phase.promote_at = nn / (2.0 * kk * static_cast<double>(samples));
      const std::size_t reps = repeat_count(params.scale * 40.0 * nn * kk *
                                            std::log(3.0 * nn * kk * kk / delta) /
                                            static_cast<double>(samples));
      for (std::size_t i = 0; i < reps; ++i) {
        sample_distinct(universe, samples, rng, buf);
        phase.sets.push_back(plan.add_set(buf));
      }
      phase.add_queries(plan);
      out.layout.phases.emplace_back(std::move(phase));
    }
  }
  return out;
}

ReconstructionResult alg2_reconstruct(const NonAdaptiveParams& params, const PhasedPlan& built,
                                      const AnswerMap& answers) {
  PartialLabels labels(params.n);
  apply_phases(built.plan, built.layout, answers, labels);
  return finish_reconstruction(labels, built.layout.universe, params.k);
}

}  // namespace subsetq
