// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "holobench/banachspace.hpp"
#include "holobench/dnnbuilder.hpp"
#include "holobench/error.hpp"
#include "holobench/harness.hpp"
#include "holobench/multiindex.hpp"
#include "holobench/polybasis.hpp"
#include "holobench/rng.hpp"
#include "holobench/sensing.hpp"
#include "holobench/solvers.hpp"
#include "holobench/theory.hpp"

#ifndef HOLOBENCH_CONFIG_DIR
#define HOLOBENCH_CONFIG_DIR "configs"
#endif

using namespace holo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr Family kFamilies[] = {Family::Legendre, Family::Chebyshev};

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::MatrixXd M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = rng.normal();
  return M;
}

std::vector<std::uint32_t> first_dims(std::uint32_t n) {
  std::vector<std::uint32_t> t;
  for (std::uint32_t j = 1; j <= n; ++j) t.push_back(j);
  return t;
}

ExperimentConfig config(const char* file) {
  auto c = load_config(std::string(HOLOBENCH_CONFIG_DIR) + "/" + file);
  c.certify_eopt = false;
  return c;
}

// 1 ------------------------------------------------------------------------

std::set<MultiIndex> brute_hci(std::uint32_t n) {
  // Every nu with prod(nu_k + 1) <= n, built coordinate by coordinate.
  std::set<MultiIndex> out;
  std::function<void(std::uint32_t, std::uint32_t, MultiIndex)> rec = [&](std::uint32_t j, std::uint32_t prod,
                                                                          MultiIndex nu) {
    if (j > n) {
      out.insert(nu);
      return;
    }
    for (std::uint32_t v = 0; prod * (v + 1) <= n; ++v) rec(j + 1, prod * (v + 1), v ? nu.with(j, v) : nu);
  };
  rec(1, 1, MultiIndex());
  return out;
}

Outcome c1() {
  for (std::uint32_t n = 1; n <= 12; ++n) {
    const auto s = hci_index_set(n);
    const auto o = brute_hci(n);
    if (s.size() != o.size()) return {false, fmt("n=%u: %zu vs oracle %zu", n, s.size(), o.size())};
    for (const auto& nu : s)
      if (!o.count(nu)) return {false, fmt("n=%u: extra member", n)};
    if (static_cast<double>(s.size()) > hci_cardinality_bound(n)) return {false, fmt("bound fails at n=%u", n)};
  }
  return {true, fmt("n=1..12 exact, |hci(12)|=%zu", hci_index_set(12).size())};
}

// 2 ------------------------------------------------------------------------

Outcome c2() {
  const IndexSet lambda = hci_index_set(4);
  double worst = 0;
  for (auto f : kFamilies) {
    const auto rule = gauss_rule(f, 10);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lambda.size()), static_cast<Eigen::Index>(lambda.size()));
    std::vector<double> y(4);
    for (int it = 0; it < 10000; ++it) {
      double w = 1;
      for (int j = 0, r = it; j < 4; ++j, r /= 10) {
        y[static_cast<std::size_t>(j)] = rule.nodes[static_cast<std::size_t>(r % 10)];
        w *= rule.weights[static_cast<std::size_t>(r % 10)];
      }
      Eigen::VectorXd v(G.rows());
      for (std::size_t a = 0; a < lambda.size(); ++a) v[static_cast<Eigen::Index>(a)] = eval_tensor(f, lambda[a], y);
      G += w * v * v.transpose();
    }
    worst = std::max(worst, (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-10, fmt("N=%zu, max |G - I| = %.2e", lambda.size(), worst)};
}

// 3 ------------------------------------------------------------------------

Outcome c3() {
  CounterRng rng(3);
  double prod_worst = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    const Network net = build_product_repu(2, n);
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> y(n);
      double p = 1;
      for (auto& v : y) p *= (v = rng.uniform(-10.0, 10.0));
      prod_worst = std::max(prod_worst, std::abs(net.forward(y)(0) - p) / std::max(1.0, std::abs(p)));
    }
  }
  double poly_worst = 0;
  for (auto f : kFamilies)
    for (std::uint32_t nu = 0; nu <= 10; ++nu) {
      const auto pn = build_poly_network(f, MultiIndex::unit(1, nu), 0.0, {1}, Activation::repu(2));
      for (int i = 0; i <= 1000; ++i) {
        const double y = -1.0 + i / 500.0;
        poly_worst = std::max(poly_worst, std::abs(pn.net.forward(std::vector<double>{y})(0) - eval_univariate(f, nu, y)));
      }
    }
  return {prod_worst <= 1e-10 && poly_worst <= 1e-10,
          fmt("product rel err %.1e, polynomial err %.1e", prod_worst, poly_worst)};
}

// 4 ------------------------------------------------------------------------

Outcome c4() {
  std::vector<MultiIndex> nus;
  for (const auto& nu : hci_index_set(4))
    if (nu.l0() <= 2) nus.push_back(nu);
  const auto theta = first_dims(4);
  std::size_t builds = 0;
  double worst_ratio = 0, worst_gap = 0;
  for (const auto& act : {Activation::relu(), Activation::tanh()})
    for (double delta : {1e-1, 1e-2, 1e-3}) {
      std::vector<Network> nets;
      for (const auto& nu : nus) {
        const auto pn = build_poly_network(Family::Legendre, nu, delta, theta, act);
        ++builds;
        if (!pn.certificate.certified || pn.certificate.grid_error > delta)
          return {false, fmt("%s nu=%s delta=%g: grid error %.3e", act.name().c_str(), nu.to_string().c_str(), delta,
                             pn.certificate.grid_error)};
        worst_ratio = std::max(worst_ratio, pn.certificate.grid_error / delta);
        nets.push_back(pn.net);
      }
      const IndexSet lambda(nus);
      const Network stacked = stack_networks(nets);
      const PointSet y = sample_points(Family::Legendre, 100, 4, 40 + builds);
      try {
        const auto Ap = assemble_emulated(stacked, y, lambda, Family::Legendre, delta);
        worst_gap = std::max(worst_gap, Ap.emulation_gap / Ap.gap_bound);
      } catch (const Error& e) {
        return {false, e.what()};
      }
    }
  return {true, fmt("%zu builds, max grid/delta %.2f, max gap/bound %.3f", builds, worst_ratio, worst_gap)};
}

// 5 ------------------------------------------------------------------------

Outcome c5() {
  const auto one = [](double v) { return Eigen::MatrixXd::Constant(1, 1, v); };
  const Eigen::VectorXd u1 = Eigen::VectorXd::Ones(1);
  const double keep = solve_srlasso(one(1), one(2), u1, 0.5, DiscreteSpace(1)).z(0, 0);
  const double kill = solve_srlasso(one(1), one(2), u1, 2.0, DiscreteSpace(1)).z(0, 0);
  if (std::abs(keep - 2) > 1e-6 || std::abs(kill) > 1e-6) return {false, fmt("1-D cases %g, %g", keep, kill)};

  const Eigen::MatrixXd A = gaussian(30, 20, 6) / std::sqrt(30.0), f = gaussian(30, 2, 7);
  const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(20, 1.0, 3.0);
  SolverOptions o;
  o.record_history = true;
  const DiscreteSpace sp(2);
  const auto r = solve_srlasso(A, f, u, 0.05, sp, o);
  for (std::size_t i = 1; i < r.report.history.size(); ++i)
    if (r.report.history[i] > r.report.history[i - 1]) return {false, "objective history increases"};
  const double g = objective_srlasso(A, f, r.z, 0.05, u, sp);
  double best_gain = -INFINITY;
  CounterRng rng(8);
  for (int t = 0; t < 100; ++t) {
    Eigen::MatrixXd d = gaussian(20, 2, rng.split(static_cast<std::uint64_t>(t)).next_u64());
    d *= 1e-3 / d.norm();
    best_gain = std::max(best_gain, g - objective_srlasso(A, f, r.z + d, 0.05, u, sp));
  }
  if (best_gain > 1e-6) return {false, fmt("probe improved objective by %.2e", best_gain)};

  double ls_worst = 0;
  for (int t = 0; t < 30; ++t) {
    CounterRng q = rng.split(1000 + static_cast<std::uint64_t>(t));
    const auto N = static_cast<Eigen::Index>(1 + q.uniform_index(50));
    const auto m = N + static_cast<Eigen::Index>(q.uniform_index(static_cast<std::uint64_t>(201 - N)));
    const auto K = static_cast<Eigen::Index>(1 + q.uniform_index(8));
    const Eigen::MatrixXd B = gaussian(m, N, q.next_u64()), h = gaussian(m, K, q.next_u64());
    const Eigen::MatrixXd oracle = B.householderQr().solve(h);
    const auto res = solve_leastsquares(B, h, DiscreteSpace(K));
    ls_worst = std::max(ls_worst, (res.z - oracle).cwiseAbs().maxCoeff() / std::max(1.0, oracle.cwiseAbs().maxCoeff()));
  }
  return {ls_worst <= 1e-10, fmt("1-D ok, history monotone, probe gain %.1e, LS vs QR %.1e", best_gain, ls_worst)};
}

// 6 ------------------------------------------------------------------------

Outcome c6() {
  const IndexSet lambda = hci_index_set(6, 6);
  const auto N = static_cast<Eigen::Index>(lambda.size());
  const Eigen::VectorXd u = intrinsic_weights(Family::Legendre, lambda);
  const std::size_t m = 100;
  const double L = log_factor_L(static_cast<double>(m), 0.5, Regime{}, LMode::PlainLog);
  const double lam = lambda_param(static_cast<double>(m), L, Regime{});
  int good = 0;
  double worst = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    CounterRng rng(600 + t);
    // three blocks on the lowest-weight indices beyond the constant
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(N, 3);
    const Eigen::Index picks[3] = {0, lambda.position(MultiIndex::unit(1 + rng.uniform_index(3))),
                                   lambda.position(MultiIndex::unit(4 + rng.uniform_index(3)))};
    for (auto p : picks)
      for (int k = 0; k < 3; ++k) x(p, k) = rng.normal();
    const auto A = assemble_exact(sample_points(Family::Legendre, m, 6, 6000 + t), lambda, Family::Legendre);
    const auto r = solve_srlasso(A.entries, A.entries * x, u, lam, DiscreteSpace(3));
    const double rel = (r.z - x).norm() / x.norm();
    worst = std::max(worst, rel);
    good += rel <= 1e-3;
  }
  return {good >= 18, fmt("N=%ld, %d/20 trials at 1e-3, worst %.2e", static_cast<long>(N), good, worst)};
}

// 7 ------------------------------------------------------------------------

Outcome c7() {
  std::string detail;
  bool ok = true;
  for (auto f : kFamilies) {
    auto w = [f](const MultiIndex& nu) { return intrinsic_weight(f, nu); };
    auto score = [](const MultiIndex& nu) {
      double s = 0;
      for (const auto& [j, v] : nu.entries()) s += v * (0.5 + 0.5 * j);
      return s;
    };
    const IndexSet S = anchored_greedy(1000, 4, score, w, 20.0);
    const double k = weighted_cardinality(S, f);
    const auto m = static_cast<std::size_t>(full_case_sample_complexity(k, 0.4, 0.1));
    int good = 0;
    double lo = INFINITY;
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto A = assemble_exact(sample_points(f, m, 4, 7000 + t), S, f);
      const double s = full_case_stability(A.entries).sigma_min;
      lo = std::min(lo, s);
      good += s >= std::sqrt(0.6);
    }
    ok = ok && is_anchored(S) && good >= 45;
    detail += fmt("%s |S|=%zu k=%g m=%zu %d/50 min %.3f; ", std::string(to_string(f)).c_str(), S.size(), k, m, good, lo);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 8, 9, 10 -------------------------------------------------------------------

Outcome c8() {
  const auto cfg = config("diffusion_known.json");
  const auto rec = run_experiment(cfg);
  std::vector<double> ms, es;
  std::string line;
  bool decreasing = true;
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    const auto& r = rec.rows[i];
    if (!r.ok()) return {false, "row failed: " + r.failure};
    ms.push_back(static_cast<double>(r.m));
    es.push_back(r.error);
    line += fmt(" %.2e", r.error);
    if (i > 0) {
      const auto& p = rec.rows[i - 1];
      decreasing = decreasing && p.error - r.error > 2.0 * std::hypot(p.se, r.se);
    }
  }
  const auto fit = fit_rate(ms, es);
  return {fit.slope <= -1.0 && decreasing, fmt("slope %.3f (r2 %.3f), errors", fit.slope, fit.r2) + line};
}

Outcome c9() {
  auto h = config("diffusion_unknown.json");
  auto b = config("diffusion_unknown_l1.json");
  const auto rh = run_experiment(h, true);
  const auto rb = run_experiment(b, true);
  // compare both under the l2 norm of the Hilbert target
  const TargetModel t = make_target(h);
  VectorFunction truth = [&](std::span<const double> y) { return Eigen::VectorXd(t.f_fine(y)); };
  bool mono = true;
  double worst_ratio = 0;
  std::string line;
  for (std::size_t i = 0; i < rh.rows.size(); ++i) {
    const auto& r = rh.rows[i];
    if (!r.ok() || !rb.rows[i].ok()) return {false, "row failed: " + r.failure + rb.rows[i].failure};
    if (i > 0) mono = mono && r.error <= rh.rows[i - 1].error + 2.0 * std::hypot(r.se, rh.rows[i - 1].se);
    const Network& net = rb.networks[i];
    VectorFunction approx = [&](std::span<const double> y) { return Eigen::VectorXd(t.embed * net.forward(y)); };
    const auto e = evaluate_l2_error(truth, approx, t.fine_norm, h.family, 4, h.eval_samples, rh.eval_seed);
    const double ratio = std::max(e.estimate / r.error, r.error / e.estimate);
    worst_ratio = std::max(worst_ratio, ratio);
    line += fmt(" %zu:%.1e/%.1e", r.m, r.error, e.estimate);
  }
  return {mono && worst_ratio <= 10.0, fmt("monotone=%d, max l1/l2 ratio %.2f, m:l2/l1", mono, worst_ratio) + line};
}

Outcome c10() {
  auto cfg = config("diffusion_known.json");
  cfg.m_schedule = {200};
  const double etas[] = {0.0, 0.01, 0.05, 0.1};
  double mean[4] = {0, 0, 0, 0};
  for (std::uint64_t s = 0; s < 5; ++s)
    for (int i = 0; i < 4; ++i) {
      cfg.seed = 100 + s;
      cfg.noise = etas[i];
      const auto r = run_experiment(cfg).rows[0];
      if (!r.ok()) return {false, r.failure};
      mean[i] += r.error / 5.0;
    }
  bool ok = true;
  for (int i = 1; i < 4; ++i) ok = ok && mean[i] >= mean[i - 1] && mean[i] - mean[0] <= 20.0 * etas[i];
  return {ok, fmt("mean errors %.2e %.2e %.2e %.2e; increment/eta at 0.1 = %.2f", mean[0], mean[1], mean[2], mean[3],
                  (mean[3] - mean[0]) / 0.1)};
}

// 11 -----------------------------------------------------------------------

double brute_sigma(const Eigen::VectorXd& norms, const Eigen::VectorXd& w, double k, double p) {
  const auto n = norms.size();
  double best = INFINITY;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double card = 0, rest = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask >> i & 1)
        card += w[i] * w[i];
      else
        rest += std::pow(w[i], 2 - p) * std::pow(norms[i], p);
    }
    if (card <= k) best = std::min(best, std::pow(rest, 1 / p));
  }
  return best;
}

Outcome c11() {
  CounterRng rng(11);
  double worst = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    CounterRng r = rng.split(t);
    const auto n = static_cast<Eigen::Index>(1 + r.uniform_index(12));
    Eigen::VectorXd norms(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      norms[i] = r.uniform() < 0.15 ? 0.0 : r.uniform();
      w[i] = r.uniform() < 0.3 ? 1.0 : 1.0 + 4.0 * r.uniform();
    }
    const double k = r.uniform() * w.squaredNorm();
    for (double p : {1.0, 2.0}) {
      const auto res = best_kterm(norms, w, k, p);
      const double o = brute_sigma(norms, w, k, p);
      worst = std::max(worst, std::abs(res.residual - o) / std::max(1.0, o));
      if (res.greedy) return {false, "exact search fell back to greedy"};
    }
  }
  return {worst <= 1e-12, fmt("200 instances x 2 exponents, max deviation %.1e", worst)};
}

// 12 -----------------------------------------------------------------------

Outcome c12() {
  const IndexSet lambda = hci_index_set(6, 3);
  const auto theta = first_dims(3);
  const std::size_t m = 80;
  const PointSet y = sample_points(Family::Chebyshev, m, 3, 120);
  std::vector<Network> nets;
  for (const auto& nu : lambda) nets.push_back(build_poly_network(Family::Chebyshev, nu, 1e-3, theta, Activation::relu()).net);
  const Network body = stack_networks(nets);
  const auto Ap = assemble_emulated(body, y, lambda, Family::Chebyshev, 1e-3);
  const TargetModel t = [] {
    ExperimentConfig c;
    c.model.kind = "rational";
    c.model.b = {0.5, 0.3, 0.2};
    return make_target(c);
  }();
  const auto data = synthesize_data(t.f_fine, y, t.coarse_space, 0.0, 121);
  const auto z = solve_srlasso(Ap.entries, data.values, intrinsic_weights(Family::Chebyshev, lambda), 0.05,
                               t.coarse_space)
                     .z;
  const Network net = attach_head(body, z);
  CounterRng rng(122);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> p(3);
    for (auto& v : p) v = rng.uniform(-1.0, 1.0);
    Eigen::VectorXd expect = Eigen::VectorXd::Zero(z.cols());
    for (std::size_t j = 0; j < nets.size(); ++j) expect += nets[j].forward(p)(0) * z.row(static_cast<Eigen::Index>(j)).transpose();
    worst = std::max(worst, (net.forward(p) - expect).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-10, fmt("N=%zu, max deviation %.1e over 100 points", lambda.size(), worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"index-set oracle equivalence", c1},    {"orthonormality", c2},
      {"RePU exactness", c3},                  {"certified emulation", c4},
      {"solver correctness", c5},              {"noiseless sparse recovery", c6},
      {"full-case stability", c7},             {"rate reproduction (known, Hilbert)", c8},
      {"unknown-anisotropy sanity", c9},       {"noise robustness", c10},
      {"best s-term oracle", c11},             {"network equivalence", c12},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
