// holobench command-line front end.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holobench/dnnbuilder.hpp"
#include "holobench/error.hpp"
#include "holobench/harness.hpp"
#include "holobench/parallel.hpp"
#include "holobench/rng.hpp"
#include "holobench/sensing.hpp"
#include "holobench/serialization.hpp"
#include "holobench/solvers.hpp"
#include "holobench/theory.hpp"

namespace {

using namespace holo;

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  const std::filesystem::path dir =
      out.empty() ? std::filesystem::path("runs") / (cfg.name.empty() ? "run" : cfg.name)
                  : std::filesystem::path(out);
  std::cerr << "running '" << cfg.name << "' (" << cfg.regime.name() << ", "
            << cfg.m_schedule.size() << " sizes, " << thread_count() << " threads)\n";
  const ResultRecord rec = run_experiment(cfg);
  const auto manifest = save_results(rec, dir);
  std::cout << results_csv(rec);
  for (const auto& r : rec.rows)
    if (!r.ok()) std::cerr << "m=" << r.m << " failed: " << r.failure << "\n";
  std::cerr << "wrote " << manifest.string() << "\n";
  return 0;
}

int cmd_rates(const std::string& csv) {
  const CsvResults res = load_results_csv(csv);
  std::vector<double> ms, errs;
  for (std::size_t i = 0; i < res.m.size(); ++i)
    if (std::isfinite(res.error[i]) && res.error[i] > 0.0) {
      ms.push_back(res.m[i]);
      errs.push_back(res.error[i]);
    }
  const RateFit f = fit_rate(ms, errs);
  std::printf("points %zu\nslope %.6f\nintercept %.6f\nr2 %.6f\n", ms.size(), f.slope, f.intercept,
              f.r2);
  return 0;
}

std::vector<std::uint32_t> parse_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    require(!tok.empty(), ErrorKind::InvalidArgument, "empty entry in --nu");
    out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  }
  return out;
}

int cmd_emulate(const std::string& family, const std::string& nu_text, double delta,
                const std::string& activation, const std::string& out) {
  const auto dense = parse_list(nu_text);
  const MultiIndex nu = MultiIndex::from_dense(dense);
  std::vector<std::uint32_t> theta(std::max<std::size_t>(dense.size(), 1));
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = static_cast<std::uint32_t>(i + 1);
  const PolyNetwork pn =
      build_poly_network(parse_family(family), nu, delta, theta, Activation::parse(activation));
  save_network(pn.net, out);
  std::cout << certificate_to_json(pn.certificate) << "\n";
  const auto st = architecture_stats(pn.net);
  std::cerr << "width " << st.width << " depth " << st.depth << " size " << st.size << " -> " << out
            << "\n";
  return 0;
}

int cmd_diagnose_rip(const std::string& config_path) {
  const ExperimentConfig cfg = load_config(config_path);
  const TargetModel target = make_target(cfg);
  std::printf("m,L,n,N,k,delta_hat,sigma_min\n");
  for (std::size_t r = 0; r < cfg.m_schedule.size(); ++r) {
    const RowPlan plan = plan_row(cfg, target, cfg.m_schedule[r]);
    const IndexSet& lambda = plan.index_set;
    const CounterRng rng(cfg.seed);
    const PointSet pts = sample_points(cfg.family, cfg.m_schedule[r], std::max<std::size_t>(plan.dims, lambda.max_dim()), rng.split(2 * r + 1).next_u64());
    const MeasurementMatrix A = assemble_exact(pts, lambda, cfg.family);
    const RipEstimate est = estimate_rip_constant(A.entries, plan.k, intrinsic_weights(cfg.family, lambda),
                                                  200, rng.split(1000 + r).next_u64());
    double smin = std::nan("");
    if (A.rows() >= A.cols()) smin = full_case_stability(A.entries).sigma_min;
    std::printf("%zu,%.6g,%zu,%zu,%.6g,%.6g,%.6g\n", cfg.m_schedule[r], plan.L, plan.n, lambda.size(), plan.k,
                est.empty_sparsity ? 0.0 : est.delta_hat, smin);
  }
  return 0;
}

struct Check {
  std::string name;
  bool ok;
};

int cmd_selftest() {
  std::vector<Check> checks;
  auto add = [&](std::string name, auto&& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << "\n";
    }
    checks.push_back({std::move(name), ok});
  };

  add("hci(1) is {0}", [] { return hci_index_set(1).size() == 1; });
  add("hci(4) in 2 dims has 8 members", [] { return hci_index_set(4, 2).size() == 8; });
  add("Legendre P1 at 1 is sqrt(3)",
      [] { return std::abs(eval_univariate(Family::Legendre, 1, 1.0) - std::sqrt(3.0)) < 1e-14; });
  add("Chebyshev T1 at 1 is sqrt(2)",
      [] { return std::abs(eval_univariate(Family::Chebyshev, 1, 1.0) - std::sqrt(2.0)) < 1e-14; });
  add("lambda at m=L is 1/6", [] {
    return std::abs(lambda_param(10.0, 10.0, Regime::parse("unknown-hilbert")) - 1.0 / 6.0) < 1e-15;
  });
  add("rnsp constants at rho=0, gamma=1", [] {
    const auto c = rnsp_error_constants(0.0, 1.0);
    return c.C1 == 1.0 && c.C2 == 2.0 && c.C1p == 1.0 && c.C2p == 3.0;
  });
  add("exponent p=1/2 unknown-banach is -3/4", [] {
    return std::abs(approx_error_bound(100, 2, 0.5, Regime::parse("unknown-banach")).exponent + 0.75) < 1e-15;
  });
  add("1-D square-root lasso, lambda=1/2 keeps f", [] {
    Eigen::MatrixXd A(1, 1), f(1, 1);
    A << 1.0;
    f << 1.0;
    const auto r = solve_srlasso(A, f, Eigen::VectorXd::Ones(1), 0.5, DiscreteSpace(1));
    return std::abs(r.z(0, 0) - 1.0) < 1e-6;
  });
  add("1-D square-root lasso, lambda=2 gives 0", [] {
    Eigen::MatrixXd A(1, 1), f(1, 1);
    A << 1.0;
    f << 1.0;
    const auto r = solve_srlasso(A, f, Eigen::VectorXd::Ones(1), 2.0, DiscreteSpace(1));
    return std::abs(r.z(0, 0)) < 1e-6;
  });
  add("RePU product of 3 numbers", [] {
    const Network net = build_product_repu(2, 3);
    const std::vector<double> y{1.5, -2.0, 0.25};
    return std::abs(net.forward(y)(0) + 0.75) < 1e-12;
  });
  add("RePU poly network for nu=(2,1)", [] {
    const MultiIndex nu = MultiIndex::from_dense({2, 1});
    const auto pn = build_poly_network(Family::Legendre, nu, 0.0, {1, 2}, Activation::repu(2));
    const std::vector<double> y{0.3, -0.7};
    return std::abs(pn.net.forward(y)(0) - eval_tensor(Family::Legendre, nu, y)) < 1e-12;
  });
  add("network JSON round trip", [] {
    const auto pn = build_poly_network(Family::Chebyshev, MultiIndex::unit(1, 3), 1e-2, {1},
                                       Activation::relu());
    const Network back = network_from_json(network_to_json(pn.net));
    const std::vector<double> y{0.123};
    return back.forward(y)(0) == pn.net.forward(y)(0);
  });
  add("rate of exact m^-1 is -1", [] {
    const RateFit f = fit_rate({10, 20, 40, 80}, {0.1, 0.05, 0.025, 0.0125});
    return std::abs(f.slope + 1.0) < 1e-12;
  });

  int failed = 0;
  for (const auto& c : checks) {
    std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << "\n";
    failed += c.ok ? 0 : 1;
  }
  std::cout << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holobench: polynomial-emulating DNN experiments"};
  app.require_subcommand(1);

  std::string config, out, results, family = "legendre", nu, activation = "relu";
  std::uint64_t seed_value = 0;
  double delta = 1e-3;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed_value, "override the config seed");
  run->add_option("--out", out, "output directory");

  auto* rates = app.add_subcommand("rates", "fit log-log convergence rate of a results CSV");
  rates->add_option("--results", results, "results CSV")->required()->check(CLI::ExistingFile);

  auto* emulate = app.add_subcommand("emulate", "build and export one polynomial network");
  emulate->add_option("--family", family, "legendre or chebyshev");
  emulate->add_option("--nu", nu, "dense multi-index, e.g. \"1,2\"")->required();
  emulate->add_option("--delta", delta, "sup-norm accuracy (ignored for RePU)");
  emulate->add_option("--activation", activation, "relu, tanh or repuL");
  emulate->add_option("--out", out, "network JSON path")->required();

  auto* rip = app.add_subcommand("diagnose-rip", "empirical RIP and conditioning per m");
  rip->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);

  auto* self = app.add_subcommand("selftest", "run the analytic example suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return cmd_run(config, seed_opt->count() ? std::optional(seed_value) : std::nullopt, out);
    if (*rates) return cmd_rates(results);
    if (*emulate) return cmd_emulate(family, nu, delta, activation, out);
    if (*rip) return cmd_diagnose_rip(config);
    if (*self) return cmd_selftest();
  } catch (const holo::Error& e) {
    std::cerr << "error [" << holo::to_string(e.kind()) << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
