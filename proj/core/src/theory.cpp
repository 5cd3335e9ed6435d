#include "holobench/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "holobench/error.hpp"

namespace holo {

std::string Regime::name() const {
  return std::string(anisotropy == Anisotropy::Known ? "known" : "unknown") + "-" +
         (codomain == Codomain::Hilbert ? "hilbert" : "banach");
}

Regime Regime::parse(std::string_view name) {
  for (auto a : {Anisotropy::Known, Anisotropy::Unknown})
    for (auto c : {Codomain::Hilbert, Codomain::Banach}) {
      Regime r{a, c};
      if (r.name() == name) return r;
    }
  throw Error(ErrorKind::InvalidArgument, "unknown regime '" + std::string(name) + "'");
}

std::string_view to_string(LMode mode) {
  switch (mode) {
    case LMode::Auto: return "auto";
    case LMode::UnknownLog: return "unknown-log";
    case LMode::KnownLog: return "known-log";
    case LMode::PlainLog: return "plain-log";
  }
  return "auto";
}

LMode parse_lmode(std::string_view name) {
  for (auto m : {LMode::Auto, LMode::UnknownLog, LMode::KnownLog, LMode::PlainLog})
    if (to_string(m) == name) return m;
  throw Error(ErrorKind::InvalidArgument, "unknown L mode '" + std::string(name) + "'");
}

double log_factor_L(double m, double eps, const Regime& regime, LMode mode) {
  require(m >= 3.0, ErrorKind::InvalidArgument, "L(m, eps) needs m >= 3");
  require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidArgument, "eps must lie in (0,1)");
  if (mode == LMode::Auto)
    mode = regime.anisotropy == Anisotropy::Unknown ? LMode::UnknownLog : LMode::KnownLog;
  const double lm = std::log(m);
  switch (mode) {
    case LMode::UnknownLog: return std::pow(lm, 4) + std::log(1.0 / eps);
    case LMode::KnownLog: return lm + std::log(1.0 / eps);
    case LMode::PlainLog: return lm;
    case LMode::Auto: break;
  }
  return lm;
}

SparsityK sparsity_k(double m, double L, const Regime& regime, double c0, double known_constant) {
  require(m > 0.0 && L > 0.0 && c0 > 0.0 && known_constant > 0.0, ErrorKind::InvalidArgument,
          "sparsity needs positive m, L and constants");
  SparsityK out;
  if (regime.anisotropy == Anisotropy::Known)
    out.k = m / (known_constant * L);
  else if (regime.codomain == Codomain::Banach)
    out.k = std::sqrt(m / (c0 * L));
  else
    out.k = m / (c0 * L);
  out.below_one = out.k < 1.0;
  return out;
}

std::size_t active_dimension_n(double m, double L, double c0) {
  require(m > 0.0 && L > 0.0 && c0 > 0.0, ErrorKind::InvalidArgument, "n needs positive m, L, c0");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(m / (c0 * L))));
}

double lambda_param(double m, double L, const Regime& regime) {
  require(regime.anisotropy == Anisotropy::Unknown, ErrorKind::NotApplicable,
          "lambda is defined for unknown anisotropy only");
  require(m > 0.0 && L > 0.0, ErrorKind::InvalidArgument, "lambda needs positive m and L");
  return 1.0 / (6.0 * std::sqrt(m / L));
}

DeltaValue emulation_delta(double k, double N, double p, const Regime& regime) {
  require(p > 0.0 && p < 1.0, ErrorKind::InvalidArgument, "p must lie in (0,1)");
  require(k > 0.0 && N >= 1.0, ErrorKind::InvalidArgument, "delta needs k > 0 and N >= 1");
  const double kp = std::pow(k, 0.5 - 1.0 / p);
  double d = 0.0;
  if (regime.anisotropy == Anisotropy::Known) {
    d = std::min(std::sqrt(3.0) / (2.0 * std::sqrt(5.0) * std::sqrt(k)), kp);
  } else if (regime.codomain == Codomain::Banach) {
    d = std::min(2.0 / (3.0 * (3.0 + 4.0 * k) * std::sqrt(N)), kp / N);
  } else {
    d = std::min(2.0 / (3.0 * (3.0 + 4.0 * std::sqrt(k)) * std::sqrt(N)), kp / std::sqrt(N));
  }
  DeltaValue out{d, false};
  if (d < 1e-12) out = {1e-12, true};
  return out;
}

double wrip_sample_complexity(double k, double delta, double eps, double n, double c0) {
  require(k > 0.0 && n > 0.0 && c0 > 0.0, ErrorKind::InvalidArgument, "positive arguments required");
  require(delta > 0.0 && delta < 1.0 && eps > 0.0 && eps < 1.0, ErrorKind::InvalidArgument,
          "delta and eps must lie in (0,1)");
  const double a = std::log(k / delta);
  const double b = std::log(std::numbers::e * n);
  return std::ceil(c0 * k / (delta * delta) * (a * a * b * b + std::log(2.0 / eps)));
}

double full_case_sample_complexity(double k, double delta, double eps) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidArgument, "delta must lie in (0,1)");
  require(k > 0.0 && eps > 0.0, ErrorKind::InvalidArgument, "k and eps must be positive");
  const double pre = 1.0 / ((1.0 - delta) * std::log(1.0 - delta) + delta);
  return std::ceil(pre * k * std::log(k / eps));
}

RnspConstants rnsp_error_constants(double rho, double gamma) {
  require(rho >= 0.0 && rho < 1.0, ErrorKind::InvalidArgument, "rho must lie in [0,1)");
  require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
  const double q = 1.0 - rho;
  return {(1.0 + rho) / q, 2.0 * gamma / q, (1.0 + rho) * (1.0 + rho) / q, (3.0 + rho) * gamma / q};
}

ApproxBound approx_error_bound(double m, double L, double p, const Regime& regime, double pi_K,
                               double C) {
  require(p > 0.0 && p < 1.0, ErrorKind::InvalidArgument, "p must lie in (0,1)");
  require(m > 0.0 && L > 0.0, ErrorKind::InvalidArgument, "m and L must be positive");
  ApproxBound out;
  const bool banach = regime.codomain == Codomain::Banach;
  if (!banach) {
    out.exponent = 0.5 - 1.0 / p;
    out.theta = 0.0;
  } else if (regime.anisotropy == Anisotropy::Unknown) {
    out.exponent = 0.5 * (0.5 - 1.0 / p);
    out.theta = 0.25;
  } else {
    out.exponent = 1.0 - 1.0 / p;
    out.theta = 0.5;
  }
  out.value = C * pi_K * std::pow(m / L, out.exponent);
  return out;
}

ArchitectureShape architecture_bounds(double m, double p, const Regime& regime,
                                      const Activation& act) {
  require(m >= 3.0, ErrorKind::InvalidArgument, "architecture bounds need m >= 3");
  require(p > 0.0 && p < 1.0, ErrorKind::InvalidArgument, "p must lie in (0,1)");
  ArchitectureShape s;
  const double lm = std::log(m);
  const double l2 = std::log2(m);
  const bool unknown = regime.anisotropy == Anisotropy::Unknown;
  s.width = unknown ? std::pow(m, 3.0 + l2) : m * m;
  if (act.kind == ActivationKind::ReLU)
    s.depth = unknown ? lm * (lm * lm + lm / p + m) : lm * (lm / p + m);
  else
    s.depth = l2;
  return s;
}

std::vector<double> surrogate_log_radii(const std::vector<double>& b, double eps) {
  require(eps > 0.0, ErrorKind::InvalidArgument, "eps must be positive");
  double norm = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) norm += std::ldexp(1.0, -static_cast<int>(j + 1));
  std::vector<double> out(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    require(b[j] > 0.0, ErrorKind::InvalidArgument, "surrogate selection needs positive b_j");
    const double tau = std::ldexp(1.0, -static_cast<int>(j + 1)) / norm;
    const double t = eps * tau / b[j];
    out[j] = std::log((1.0 + t) + std::sqrt((1.0 + t) * (1.0 + t) - 1.0));
  }
  return out;
}

IndexSet anchored_greedy(std::size_t n, std::uint32_t dims,
                         const std::function<double(const MultiIndex&)>& score,
                         const std::function<double(const MultiIndex&)>& weight,
                         double max_weight) {
  require(n >= 1, ErrorKind::InvalidArgument, "selection needs n >= 1");
  std::set<MultiIndex> chosen{MultiIndex()};
  double used = weight ? weight(MultiIndex()) * weight(MultiIndex()) : 0.0;
  auto addable = [&](const MultiIndex& nu) {
    if (chosen.count(nu)) return false;
    for (auto j : nu.support())
      if (!chosen.count(nu.with(j, nu[j] - 1))) return false;
    if (nu.l0() == 1 && nu.l1() == 1 && nu.max_dim() > 1)
      return chosen.count(MultiIndex::unit(nu.max_dim() - 1)) > 0;
    return true;
  };
  while (chosen.size() < n) {
    std::set<MultiIndex> cands;
    for (const auto& mu : chosen)
      for (std::uint32_t j = 1; j <= dims; ++j) {
        MultiIndex nu = mu.with(j, mu[j] + 1);
        if (addable(nu)) cands.insert(nu);
      }
    const MultiIndex* best = nullptr;
    double best_score = std::numeric_limits<double>::infinity();
    for (const auto& nu : cands) {  // canonical order, strict improvement only
      const double s = score(nu);
      if (s < best_score) {
        best_score = s;
        best = &nu;
      }
    }
    if (!best) break;
    if (weight) {
      const double w = weight(*best);
      if (used + w * w > max_weight) break;
      used += w * w;
    }
    chosen.insert(*best);
  }
  return IndexSet(std::vector<MultiIndex>(chosen.begin(), chosen.end()));
}

IndexSet known_set_selection_surrogate(const std::vector<double>& b, double eps, std::size_t n,
                                       const std::function<double(const MultiIndex&)>& weight,
                                       double max_weight) {
  const std::vector<double> lr = surrogate_log_radii(b, eps);
  auto score = [&](const MultiIndex& nu) {
    double s = 0.0;
    for (const auto& [dim, val] : nu.entries()) s += val * lr[dim - 1];
    return s;
  };
  return anchored_greedy(n, static_cast<std::uint32_t>(b.size()), score, weight, max_weight);
}

IndexSet known_set_selection_oracle(const IndexSet& candidates,
                                    const std::vector<double>& coefficient_norms, std::size_t n,
                                    const std::function<double(const MultiIndex&)>& weight,
                                    double max_weight) {
  require(coefficient_norms.size() == candidates.size(), ErrorKind::DimensionMismatch,
          "coefficient norms and candidates are not aligned");
  // Majorant over the candidate set: c~_nu = max_{mu >= nu} ||c_mu||.
  std::vector<double> major(candidates.size(), 0.0);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = 0; j < candidates.size(); ++j)
      if (candidates[i].leq(candidates[j])) major[i] = std::max(major[i], coefficient_norms[j]);
  auto score = [&](const MultiIndex& nu) {
    const auto pos = candidates.position(nu);
    if (pos < 0) return std::numeric_limits<double>::infinity();
    const double c = major[static_cast<std::size_t>(pos)];
    return c > 0.0 ? -std::log(c) : std::numeric_limits<double>::max();
  };
  return anchored_greedy(n, candidates.max_dim(), score, weight, max_weight);
}

}  // namespace holo
