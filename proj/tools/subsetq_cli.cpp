// Command-line experiment runner.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "subsetq/harness.hpp"

namespace {

constexpr int kUsageError = 2;

struct RunArgs {
  std::string alg;
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0.1;
  std::optional<double> B;
  std::optional<std::size_t> s;
  std::optional<double> r;
  std::optional<double> tau;
  double scale = 1.0;
  std::string profile = "uniform";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
  unsigned threads = 0;
  std::optional<std::string> save_instance;
};

int run(const RunArgs& a) {
  subsetq::ExperimentConfig config;
  try {
    config.alg = subsetq::parse_algorithm(a.alg);
    config.n = a.n;
    config.k = a.k;
    config.delta = a.delta;
    config.B = a.B;
    config.s = a.s;
    config.r = a.r;
    config.tau = a.tau;
    config.scale = a.scale;
    config.profile = subsetq::InstanceProfile::parse(a.profile, a.B.value_or(1.0));
    config.trials = a.trials;
    config.seed = a.seed;
    config.threads = a.threads;
    config.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }

  if (a.save_instance) {
    std::ofstream f(*a.save_instance);
    subsetq::write_instance(f, subsetq::generate_instance(config.n, config.k, config.profile, config.seed));
  }

  auto records = subsetq::run_experiment(config);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (a.out != "-") {
    file.open(a.out);
    if (!file) {
      std::cerr << "error: cannot open " << a.out << '\n';
      return kUsageError;
    }
    out = &file;
  }
  auto summary = subsetq::summarize(records);
  if (a.format == "json") {
    subsetq::write_json(*out, records, summary);
  } else {
    subsetq::write_csv(*out, records);
  }
  std::cerr << summary.alg << " n=" << summary.n << " k=" << summary.k << ": " << summary.successes
            << "/" << summary.trials << " exact, mean queries " << summary.mean_queries
            << ", max size " << summary.max_size;
  if (summary.lower_bound) std::cerr << ", reference max(n^2/s^2, n) = " << *summary.lower_bound;
  std::cerr << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering with subset queries: experiment runner"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run_cmd = app.add_subcommand("run", "Run Monte-Carlo trials of one algorithm");
  run_cmd->add_option("--alg", args.alg, "alg1..alg8, adaptive or pairwise")
      ->required()
      ->check(CLI::IsMember({"alg1", "alg2", "alg3", "alg4", "alg5", "alg6", "alg7", "alg8",
                             "adaptive", "pairwise"}));
  run_cmd->add_option("--n", args.n, "Number of points")->required();
  run_cmd->add_option("--k", args.k, "Number of clusters")->required();
  run_cmd->add_option("--delta", args.delta, "Failure probability")->required();
  run_cmd->add_option("--B", args.B, "Balance factor");
  auto* s_opt = run_cmd->add_option("--s", args.s, "Maximum query size");
  auto* r_opt = run_cmd->add_option("--r", args.r, "Size exponent, s = n^(1/r)");
  s_opt->excludes(r_opt);
  run_cmd->add_option("--tau", args.tau, "Independent-set coverage parameter");
  run_cmd->add_option("--scale", args.scale, "Multiplier on every repeat-count constant");
  run_cmd->add_option("--profile", args.profile,
                      "uniform, balanced[:B], geometric[:ratio] or planted-pair")
      ->required();
  run_cmd->add_option("--trials", args.trials, "Number of trials")->required();
  run_cmd->add_option("--seed", args.seed, "Base seed; trial i uses seed + i")->required();
  run_cmd->add_option("--out", args.out, "Output path, or - for stdout")->required();
  run_cmd->add_option("--format", args.format, "Output format")
      ->required()
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--threads", args.threads, "Worker threads, 0 for all cores");
  run_cmd->add_option("--save-instance", args.save_instance, "Write the trial-0 instance as JSON");

  std::size_t er_n = 0;
  double er_alpha = 0.05;
  std::size_t er_trials = 1000;
  std::uint64_t er_seed = 0;
  auto* er_cmd = app.add_subcommand("sanity-er", "Monte-Carlo connectivity of G(N, p) at the threshold");
  er_cmd->add_option("--N", er_n, "Vertices")->required()->check(CLI::PositiveNumber);
  er_cmd->add_option("--alpha", er_alpha, "Target failure probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  er_cmd->add_option("--trials", er_trials, "Number of graphs")->required()->check(CLI::PositiveNumber);
  er_cmd->add_option("--seed", er_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run_cmd) return run(args);

    const double p = subsetq::er_threshold(er_n, er_alpha);
    const double rate = subsetq::er_connectivity_sanity(er_n, p, er_trials, er_seed);
    std::cout << "N=" << er_n << " alpha=" << er_alpha << " p=" << p << " connected=" << rate
              << " target>=" << 1.0 - er_alpha << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
