#include "holobench/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "holobench/dnnbuilder.hpp"
#include "holobench/error.hpp"
#include "holobench/models.hpp"
#include "holobench/parallel.hpp"
#include "holobench/rng.hpp"
#include "holobench/serialization.hpp"
#include "json.hpp"

namespace holo {

using nlohmann::json;

namespace {

std::string_view to_string(DeltaPolicy p) {
  switch (p) {
    case DeltaPolicy::Formula: return "formula";
    case DeltaPolicy::Fixed: return "fixed";
    case DeltaPolicy::ExactRepu: return "exact-repu";
  }
  return "exact-repu";
}

DeltaPolicy parse_delta_policy(const std::string& s) {
  for (auto p : {DeltaPolicy::Formula, DeltaPolicy::Fixed, DeltaPolicy::ExactRepu})
    if (to_string(p) == s) return p;
  throw Error(ErrorKind::InvalidArgument, "unknown delta policy '" + s + "'");
}

std::string_view to_string(KnownStrategy s) {
  switch (s) {
    case KnownStrategy::Surrogate: return "surrogate-score";
    case KnownStrategy::Oracle: return "oracle-coefficients";
    case KnownStrategy::Explicit: return "explicit";
  }
  return "surrogate-score";
}

KnownStrategy parse_known_strategy(const std::string& s) {
  for (auto k : {KnownStrategy::Surrogate, KnownStrategy::Oracle, KnownStrategy::Explicit})
    if (to_string(k) == s) return k;
  throw Error(ErrorKind::InvalidArgument, "unknown selection strategy '" + s + "'");
}

json model_to_json(const ModelSpec& m) {
  json terms = json::array();
  for (const auto& t : m.terms) terms.push_back({{"nu", t.nu}, {"block", t.block}});
  return {{"kind", m.kind},         {"d_active", m.d_active},   {"b", m.b},
          {"b_preset", m.b_preset}, {"beta", m.beta},           {"theta", m.theta},
          {"b_scale", m.b_scale},   {"grid_fine", m.grid_fine}, {"grid_coarse", m.grid_coarse},
          {"a0", m.a0},             {"forcing", m.forcing},     {"c0", m.c0},
          {"terms", terms}};
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ModelSpec model_from_json(const json& j) {
  ModelSpec m;
  read_opt(j, "kind", m.kind);
  read_opt(j, "d_active", m.d_active);
  read_opt(j, "b", m.b);
  read_opt(j, "b_preset", m.b_preset);
  read_opt(j, "beta", m.beta);
  read_opt(j, "theta", m.theta);
  read_opt(j, "b_scale", m.b_scale);
  read_opt(j, "grid_fine", m.grid_fine);
  read_opt(j, "grid_coarse", m.grid_coarse);
  read_opt(j, "a0", m.a0);
  read_opt(j, "forcing", m.forcing);
  read_opt(j, "c0", m.c0);
  if (j.contains("terms"))
    for (const auto& t : j.at("terms"))
      m.terms.push_back({t.at("nu").get<std::string>(), t.at("block").get<std::vector<double>>()});
  return m;
}

json config_json(const ExperimentConfig& c) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "experiment-config"},
          {"name", c.name},
          {"regime", c.regime.name()},
          {"family", std::string(to_string(c.family))},
          {"model", model_to_json(c.model)},
          {"vnorm", std::string(to_string(c.vnorm))},
          {"gram", c.gram},
          {"m_schedule", c.m_schedule},
          {"epsilon", c.epsilon},
          {"p", c.p},
          {"holo_eps", c.holo_eps},
          {"l_mode", std::string(to_string(c.l_mode))},
          {"c0", c.c0},
          {"known_constant", c.known_constant},
          {"budget_cap", c.budget_cap},
          {"dim_cap", c.dim_cap},
          {"known_strategy", std::string(to_string(c.known_strategy))},
          {"known_set", c.known_set},
          {"oracle_quadrature", c.oracle_quadrature},
          {"noise", c.noise},
          {"activation", c.activation.name()},
          {"delta_policy", std::string(to_string(c.delta_policy))},
          {"delta", c.delta},
          {"solver",
           {{"max_iters", c.solver.max_iters},
            {"rel_tol", c.solver.rel_tol},
            {"tau", c.solver.tau},
            {"sigma", c.solver.sigma},
            {"record_history", c.solver.record_history},
            {"iterative_least_squares", c.solver.iterative_least_squares}}},
          {"certify_eopt", c.certify_eopt},
          {"seed", c.seed},
          {"eval_samples", c.eval_samples},
          {"record_timing", c.record_timing},
          {"export_networks", c.export_networks}};
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("config does not parse: ") + e.what());
  }
  require(j.is_object() && j.contains("schema_version"), ErrorKind::SchemaMismatch,
          "config lacks schema_version");
  require(j.at("schema_version").get<int>() == kSchemaVersion, ErrorKind::SchemaMismatch,
          "unsupported config schema_version");
  ExperimentConfig c;
  try {
    read_opt(j, "name", c.name);
    if (j.contains("regime")) c.regime = Regime::parse(j.at("regime").get<std::string>());
    if (j.contains("family")) c.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("model")) c.model = model_from_json(j.at("model"));
    if (j.contains("vnorm")) c.vnorm = parse_block_norm(j.at("vnorm").get<std::string>());
    read_opt(j, "gram", c.gram);
    read_opt(j, "m_schedule", c.m_schedule);
    read_opt(j, "epsilon", c.epsilon);
    read_opt(j, "p", c.p);
    read_opt(j, "holo_eps", c.holo_eps);
    if (j.contains("l_mode")) c.l_mode = parse_lmode(j.at("l_mode").get<std::string>());
    read_opt(j, "c0", c.c0);
    read_opt(j, "known_constant", c.known_constant);
    read_opt(j, "budget_cap", c.budget_cap);
    read_opt(j, "dim_cap", c.dim_cap);
    if (j.contains("known_strategy"))
      c.known_strategy = parse_known_strategy(j.at("known_strategy").get<std::string>());
    read_opt(j, "known_set", c.known_set);
    read_opt(j, "oracle_quadrature", c.oracle_quadrature);
    read_opt(j, "noise", c.noise);
    if (j.contains("activation")) c.activation = Activation::parse(j.at("activation").get<std::string>());
    if (j.contains("delta_policy"))
      c.delta_policy = parse_delta_policy(j.at("delta_policy").get<std::string>());
    read_opt(j, "delta", c.delta);
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      read_opt(s, "max_iters", c.solver.max_iters);
      read_opt(s, "rel_tol", c.solver.rel_tol);
      read_opt(s, "tau", c.solver.tau);
      read_opt(s, "sigma", c.solver.sigma);
      read_opt(s, "record_history", c.solver.record_history);
      read_opt(s, "iterative_least_squares", c.solver.iterative_least_squares);
    }
    read_opt(j, "certify_eopt", c.certify_eopt);
    read_opt(j, "seed", c.seed);
    read_opt(j, "eval_samples", c.eval_samples);
    read_opt(j, "record_timing", c.record_timing);
    read_opt(j, "export_networks", c.export_networks);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("malformed config: ") + e.what());
  }
  require(!c.m_schedule.empty(), ErrorKind::InvalidArgument, "m_schedule is empty");
  for (auto m : c.m_schedule) require(m >= 3, ErrorKind::InvalidArgument, "every m must be >= 3");
  require(c.eval_samples >= 100, ErrorKind::InvalidArgument, "eval_samples must be >= 100");
  require(c.noise >= 0.0, ErrorKind::InvalidArgument, "noise must be nonnegative");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_text(path));
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(config_json(cfg).dump()); }

TargetModel make_target(const ExperimentConfig& cfg) {
  const ModelSpec& ms = cfg.model;
  TargetModel t;
  t.d_active = ms.d_active;
  t.b = ms.b;
  if (t.b.empty() && ms.kind != "polynomial") {
    if (ms.b_preset == "algebraic")
      t.b = algebraic_amplitudes(ms.d_active, ms.beta, ms.b_scale);
    else if (ms.b_preset == "geometric")
      t.b = geometric_amplitudes(ms.d_active, ms.theta, ms.b_scale);
    else
      throw Error(ErrorKind::InvalidArgument, "unknown amplitude preset '" + ms.b_preset + "'");
  }
  if (!t.b.empty()) t.d_active = t.b.size();

  auto plain_space = [&](Eigen::Index K) { return DiscreteSpace(K, cfg.vnorm); };

  if (ms.kind == "diffusion") {
    DiffusionConfig dc;
    dc.grid_size = ms.grid_fine;
    dc.a0 = ms.a0;
    dc.b = t.b;
    const double F = ms.forcing;
    dc.forcing = [F](double) { return F; };
    ellipticity_margin(dc);
    t.f_fine = [dc](std::span<const double> y) { return diffusion_solution(y, dc); };
    const auto Kf = static_cast<Eigen::Index>(ms.grid_fine);
    const auto Kc = static_cast<Eigen::Index>(ms.grid_coarse);
    const double hf = 1.0 / static_cast<double>(Kf + 1);
    const double ratio = static_cast<double>(Kc + 1) / static_cast<double>(Kf + 1);  // h_f / h_c
    DiscreteSpace fine_space = cfg.gram ? DiscreteSpace(Eigen::MatrixXd(hf * Eigen::MatrixXd::Identity(Kf, Kf)))
                                        : plain_space(Kf);
    CoarseProjection P = make_coarse_projection(Kf, Kc, fine_space);
    t.decimate = P.decimate;
    t.embed = P.embed;
    t.pi_K = P.pi_estimate;
    if (cfg.gram) {
      t.coarse_space = DiscreteSpace(coarse_gram(P));
      t.fine_norm = [hf](const Eigen::VectorXd& v) { return std::sqrt(hf) * v.norm(); };
    } else {
      t.coarse_space = plain_space(Kc);
      // Same norm kind on the fine grid, rescaled so both grids measure alike.
      const BlockNorm kind = cfg.vnorm;
      t.fine_norm = [kind, ratio](const Eigen::VectorXd& v) {
        switch (kind) {
          case BlockNorm::L2: return std::sqrt(ratio) * v.norm();
          case BlockNorm::L1: return ratio * v.lpNorm<1>();
          case BlockNorm::LInf: return v.lpNorm<Eigen::Infinity>();
        }
        return v.norm();
      };
    }
    return t;
  }

  Eigen::Index K = 1;
  if (ms.kind == "rational" || ms.kind == "exponential") {
    HolomorphicParams hp;
    hp.kind = ms.kind == "rational" ? SyntheticKind::Rational : SyntheticKind::Exponential;
    hp.b = t.b;
    hp.c0 = ms.c0;
    synthetic_holomorphic(std::vector<double>(t.b.size(), 0.0), hp);  // validates the margin
    t.f_fine = [hp](std::span<const double> y) {
      return Eigen::VectorXd::Constant(1, synthetic_holomorphic(y, hp));
    };
  } else if (ms.kind == "polynomial") {
    require(!ms.terms.empty(), ErrorKind::InvalidArgument, "polynomial model needs terms");
    K = static_cast<Eigen::Index>(ms.terms.front().block.size());
    std::vector<MultiIndex> nus;
    Eigen::MatrixXd blocks(static_cast<Eigen::Index>(ms.terms.size()), K);
    for (std::size_t i = 0; i < ms.terms.size(); ++i) {
      nus.push_back(MultiIndex::parse(ms.terms[i].nu));
      require(static_cast<Eigen::Index>(ms.terms[i].block.size()) == K, ErrorKind::InvalidArgument,
              "polynomial blocks differ in length");
      for (Eigen::Index k = 0; k < K; ++k) blocks(static_cast<Eigen::Index>(i), k) = ms.terms[i].block[static_cast<std::size_t>(k)];
      t.d_active = std::max<std::size_t>(t.d_active, nus.back().max_dim());
    }
    const Family fam = cfg.family;
    t.f_fine = [nus, blocks, fam](std::span<const double> y) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(blocks.cols());
      for (std::size_t i = 0; i < nus.size(); ++i)
        v += eval_tensor(fam, nus[i], y) * blocks.row(static_cast<Eigen::Index>(i)).transpose();
      return v;
    };
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + ms.kind + "'");
  }
  t.decimate = Eigen::MatrixXd::Identity(K, K);
  t.embed = Eigen::MatrixXd::Identity(K, K);
  t.coarse_space = plain_space(K);
  const DiscreteSpace sp = t.coarse_space;
  t.fine_norm = [sp](const Eigen::VectorXd& v) { return sp.norm(v); };
  return t;
}

L2Estimate evaluate_l2_error(const VectorFunction& f_true, const VectorFunction& f_approx,
                             const std::function<double(const Eigen::VectorXd&)>& norm,
                             Family family, std::size_t d, std::size_t M, std::uint64_t seed) {
  require(M >= 100, ErrorKind::InvalidArgument, "need at least 100 evaluation samples");
  const PointSet pts = sample_points(family, M, std::max<std::size_t>(d, 1), seed);
  std::vector<double> sq(M);
  parallel_for(M, [&](std::size_t i) {
    std::vector<double> y(static_cast<std::size_t>(pts.cols()));
    for (Eigen::Index j = 0; j < pts.cols(); ++j) y[static_cast<std::size_t>(j)] = pts(static_cast<Eigen::Index>(i), j);
    const double e = norm(f_true(y) - f_approx(y));
    sq[i] = e * e;
  });
  double mean = 0.0;
  for (double v : sq) mean += v;
  mean /= static_cast<double>(M);
  double var = 0.0;
  for (double v : sq) var += (v - mean) * (v - mean);
  var /= static_cast<double>(M - 1);
  L2Estimate out;
  out.estimate = std::sqrt(mean);
  const double se_mean = std::sqrt(var / static_cast<double>(M));
  out.standard_error = out.estimate > 0.0 ? se_mean / (2.0 * out.estimate) : 0.0;
  return out;
}

RateFit fit_rate(const std::vector<double>& ms, const std::vector<double>& errors) {
  require(ms.size() == errors.size(), ErrorKind::DimensionMismatch, "m and error counts differ");
  require(ms.size() >= 3, ErrorKind::InvalidArgument, "rate fit needs at least 3 points");
  const std::size_t n = ms.size();
  double sx = 0, sy = 0;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(ms[i] > 0.0 && errors[i] > 0.0, ErrorKind::InvalidArgument,
            "rate fit needs positive m and errors");
    x[i] = std::log(ms[i]);
    y[i] = std::log(errors[i]);
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorKind::InvalidArgument, "rate fit needs distinct m values");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

namespace {

struct EvalCache {
  PointSet points;
  Eigen::MatrixXd truth;  // M x K_fine
  double e_disc = 0.0;
};

EvalCache make_eval_cache(const TargetModel& t, const ExperimentConfig& cfg, std::size_t D,
                          std::uint64_t seed) {
  EvalCache c;
  c.points = sample_points(cfg.family, cfg.eval_samples, D, seed);
  const auto M = static_cast<Eigen::Index>(cfg.eval_samples);
  std::vector<Eigen::VectorXd> vals(cfg.eval_samples);
  parallel_for(cfg.eval_samples, [&](std::size_t i) {
    std::vector<double> y(D);
    for (std::size_t j = 0; j < D; ++j) y[j] = c.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    vals[i] = t.f_fine(y);
  });
  c.truth.resize(M, vals.front().size());
  for (Eigen::Index i = 0; i < M; ++i) {
    c.truth.row(i) = vals[static_cast<std::size_t>(i)].transpose();
    const Eigen::VectorXd disc = vals[static_cast<std::size_t>(i)] - t.embed * (t.decimate * vals[static_cast<std::size_t>(i)]);
    c.e_disc = std::max(c.e_disc, t.fine_norm(disc));
  }
  return c;
}

// Coordinates the networks of a row may read: [n] (capped) for the hyperbolic
// cross, the explicit set's support otherwise. Known-anisotropy selections stay
// inside the model's active dimensions.
std::size_t planned_dims(const ExperimentConfig& cfg, std::size_t m) {
  if (cfg.regime.anisotropy == Anisotropy::Known) {
    std::size_t d = 1;
    for (const auto& s : cfg.known_set) d = std::max<std::size_t>(d, MultiIndex::parse(s).max_dim());
    return d;
  }
  const double L = log_factor_L(static_cast<double>(m), cfg.epsilon, cfg.regime, cfg.l_mode);
  const std::size_t n = active_dimension_n(static_cast<double>(m), L, cfg.c0);
  return std::max<std::size_t>(cfg.dim_cap ? std::min<std::size_t>(n, cfg.dim_cap) : n, 1);
}

std::vector<std::uint32_t> first_dims(std::size_t n) {
  std::vector<std::uint32_t> th(n);
  for (std::size_t i = 0; i < n; ++i) th[i] = static_cast<std::uint32_t>(i + 1);
  return th;
}

}  // namespace

RowPlan plan_row(const ExperimentConfig& cfg, const TargetModel& target, std::size_t m_count) {
  RowPlan plan;
  const double m = static_cast<double>(m_count);
  const Regime& regime = cfg.regime;
  const bool unknown = regime.anisotropy == Anisotropy::Unknown;

  plan.L = log_factor_L(m, cfg.epsilon, regime, cfg.l_mode);
  plan.n = active_dimension_n(m, plan.L, cfg.c0);
  std::size_t& dims = plan.dims;
  dims = cfg.dim_cap ? std::min<std::size_t>(plan.n, cfg.dim_cap) : plan.n;

  if (unknown) {
    const SparsityK sk = sparsity_k(m, plan.L, regime, cfg.c0);
    plan.k = sk.k;
    plan.k_below_one = sk.below_one;
    plan.lambda = lambda_param(m, plan.L, regime);
    std::uint32_t budget = static_cast<std::uint32_t>(plan.n);
    if (cfg.budget_cap) budget = std::min(budget, cfg.budget_cap);
    plan.index_set = hci_index_set(budget, static_cast<std::uint32_t>(dims));
  } else {
    const SparsityK sk = sparsity_k(m, plan.L, regime, cfg.c0, cfg.known_constant);
    plan.k = sk.k;
    plan.k_below_one = sk.below_one;
    const auto weight = [&](const MultiIndex& nu) { return intrinsic_weight(cfg.family, nu); };
    std::size_t sel_dims = std::min<std::size_t>(dims, static_cast<std::size_t>(std::ceil(std::max(1.0, plan.k))));
    switch (cfg.known_strategy) {
      case KnownStrategy::Explicit: {
        std::vector<MultiIndex> members;
        for (const auto& s : cfg.known_set) members.push_back(MultiIndex::parse(s));
        plan.index_set = IndexSet(members);
        dims = std::max<std::size_t>(dims, plan.index_set.max_dim());
        break;
      }
      case KnownStrategy::Surrogate: {
        sel_dims = std::min(sel_dims, target.b.size());
        std::vector<double> b(target.b.begin(), target.b.begin() + static_cast<std::ptrdiff_t>(sel_dims));
        plan.index_set = b.empty() ? IndexSet{MultiIndex()}
                                   : known_set_selection_surrogate(b, cfg.holo_eps, 1u << 20, weight, plan.k);
        break;
      }
      case KnownStrategy::Oracle: {
        sel_dims = std::min(sel_dims, target.d_active);
        const auto budget = static_cast<std::uint32_t>(std::max(2.0, std::ceil(plan.k)));
        // Only indices that fit the weight budget can be picked. A q-node rule
        // aliases degree 2q - |nu| content of f into c_nu, so keep |nu| <= 10
        // and q >= |nu| + 10 (the tensor rule caps q at 20).
        std::vector<MultiIndex> pool;
        std::uint64_t top = 0;
        for (const auto& nu : hci_index_set(budget, static_cast<std::uint32_t>(std::max<std::size_t>(sel_dims, 1)))) {
          const double w = weight(nu);
          if (w * w > std::max(plan.k, 1.0) || nu.l1() > 10) continue;
          pool.push_back(nu);
          top = std::max(top, nu.l1());
        }
        const IndexSet cand(pool);
        const auto q = std::max<std::uint32_t>(cfg.oracle_quadrature, static_cast<std::uint32_t>(top + 10));
        const Eigen::MatrixXd c = reference_coefficients(
            [&](std::span<const double> y) { return Eigen::VectorXd(target.decimate * target.f_fine(y)); },
            cand, cfg.family, std::max<std::size_t>(target.d_active, 1), q, target.coarse_space.dim());
        const Eigen::VectorXd norms = target.coarse_space.row_norms(c);
        plan.index_set = known_set_selection_oracle(
            cand, std::vector<double>(norms.data(), norms.data() + norms.size()), 1u << 20, weight, plan.k);
        break;
      }
    }
  }
  dims = std::max<std::size_t>(dims, 1);
  return plan;
}

namespace {

void run_row(const ExperimentConfig& cfg, const TargetModel& target, const EvalCache& eval,
             std::size_t D, ResultRow& row, Network* keep) {
  const auto t0 = std::chrono::steady_clock::now();
  const double m = static_cast<double>(row.m);
  const Regime& regime = cfg.regime;
  const bool unknown = regime.anisotropy == Anisotropy::Unknown;

  RowPlan plan = plan_row(cfg, target, row.m);
  row.L = plan.L;
  row.n = plan.n;
  row.k = plan.k;
  row.k_below_one = plan.k_below_one;
  row.lambda = plan.lambda;
  std::size_t dims = plan.dims;
  IndexSet lambda_set = std::move(plan.index_set);
  dims = std::max<std::size_t>(dims, 1);
  const std::size_t theta_len =
      unknown ? dims : std::max<std::size_t>(1, lambda_set.max_dim());
  require(theta_len <= D, ErrorKind::DimensionMismatch, "index set reads beyond the sampled coordinates");
  const std::vector<std::uint32_t> theta = first_dims(theta_len);
  row.N = lambda_set.size();

  // Emulation accuracy and activation.
  Activation act = cfg.activation;
  switch (cfg.delta_policy) {
    case DeltaPolicy::ExactRepu:
      if (act.kind != ActivationKind::RePU) act = Activation::repu(2);
      row.delta = 0.0;
      break;
    case DeltaPolicy::Fixed:
      row.delta = cfg.delta;
      break;
    case DeltaPolicy::Formula: {
      const DeltaValue dv = emulation_delta(std::max(row.k, 1e-12), static_cast<double>(row.N), cfg.p, regime);
      row.delta = dv.delta;
      row.delta_floored = dv.floored;
      break;
    }
  }
  if (act.kind == ActivationKind::RePU) row.delta = 0.0;

  std::vector<Network> nets(lambda_set.size());
  parallel_for(lambda_set.size(), [&](std::size_t j) {
    nets[j] = build_poly_network(cfg.family, lambda_set[j], row.delta, theta, act).net;
  });
  const Network body = stack_networks(nets);

  const PointSet points = sample_points(cfg.family, row.m, D, row.train_seed);
  const MeasurementMatrix A = assemble_emulated(body, points, lambda_set, cfg.family, row.delta);
  row.emulation_gap = A.emulation_gap;
  row.gap_bound = A.gap_bound;

  const VectorFunction f_coarse = [&](std::span<const double> y) {
    return Eigen::VectorXd(target.decimate * target.f_fine(y));
  };
  const DataVector data = synthesize_data(f_coarse, points, target.coarse_space, cfg.noise, row.noise_seed);
  row.e_samp = data.e_samp;

  SolveResult sol;
  const Eigen::VectorXd u = intrinsic_weights(cfg.family, lambda_set);
  if (unknown) {
    sol = solve_srlasso(A.entries, data.values, u, row.lambda, target.coarse_space, cfg.solver);
    if (cfg.certify_eopt)
      sol.report.eopt_proxy = eopt_certify(A.entries, data.values, sol.z, row.lambda, u,
                                           target.coarse_space, reference_options(cfg.solver));
  } else {
    sol = solve_leastsquares(A.entries, data.values, target.coarse_space, cfg.solver);
    if (cfg.certify_eopt)
      sol.report.eopt_proxy = eopt_certify(A.entries, data.values, sol.z, 0.0, u,
                                           target.coarse_space, reference_options(cfg.solver));
  }
  row.report = sol.report;
  row.eopt_proxy = sol.report.eopt_proxy;

  const Network net = attach_head(body, sol.z);
  const ArchitectureStats st = architecture_stats(net);
  row.width = st.width;
  row.depth = st.depth;
  row.size = st.size;

  // Monte Carlo error on the cached evaluation points.
  const Eigen::MatrixXd approx = net.forward_batch(eval.points) * target.embed.transpose();
  const auto M = eval.points.rows();
  double mean = 0.0;
  std::vector<double> sq(static_cast<std::size_t>(M));
  for (Eigen::Index i = 0; i < M; ++i) {
    const double e = target.fine_norm((eval.truth.row(i) - approx.row(i)).transpose());
    sq[static_cast<std::size_t>(i)] = e * e;
    mean += e * e;
  }
  mean /= static_cast<double>(M);
  double var = 0.0;
  for (double v : sq) var += (v - mean) * (v - mean);
  var /= static_cast<double>(M - 1);
  row.error = std::sqrt(mean);
  row.se = row.error > 0.0 ? std::sqrt(var / static_cast<double>(M)) / (2.0 * row.error) : 0.0;
  row.e_disc = eval.e_disc;
  row.pi_K = target.pi_K;
  row.theory_bound = approx_error_bound(m, row.L, cfg.p, regime, target.pi_K, 1.0).value;
  if (cfg.record_timing)
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (keep) *keep = net;
}

}  // namespace

ResultRecord run_experiment(const ExperimentConfig& cfg, bool keep_networks) {
  ResultRecord rec;
  rec.config = cfg;
  const TargetModel target = make_target(cfg);
  const CounterRng root(cfg.seed);
  rec.eval_seed = root.split(0xE7A1).next_u64();
  std::size_t D = std::max<std::size_t>(target.d_active, 1);
  for (auto m : cfg.m_schedule) D = std::max(D, planned_dims(cfg, m));
  const EvalCache eval = make_eval_cache(target, cfg, D, rec.eval_seed);

  if (cfg.l_mode != LMode::Auto) rec.notes.push_back("L override: " + std::string(to_string(cfg.l_mode)));
  if (cfg.budget_cap) rec.notes.push_back("hyperbolic-cross budget capped at " + std::to_string(cfg.budget_cap));
  if (cfg.dim_cap) rec.notes.push_back("active dimension capped at " + std::to_string(cfg.dim_cap));
  if (cfg.known_constant != 11.0)
    rec.notes.push_back("known-anisotropy budget constant " + num(cfg.known_constant));
  if (cfg.delta_policy != DeltaPolicy::Formula)
    rec.notes.push_back("delta policy " + std::string(to_string(cfg.delta_policy)));
  if (!target.coarse_space.is_hilbert() && cfg.regime.anisotropy == Anisotropy::Known &&
      !cfg.solver.iterative_least_squares)
    rec.notes.push_back("non-Hilbert least squares solved channelwise");

  const bool keep = keep_networks || cfg.export_networks;
  rec.rows.resize(cfg.m_schedule.size());
  if (keep) rec.networks.resize(cfg.m_schedule.size());
  for (std::size_t r = 0; r < cfg.m_schedule.size(); ++r) {
    ResultRow& row = rec.rows[r];
    row.m = cfg.m_schedule[r];
    row.train_seed = root.split(2 * r + 1).next_u64();
    row.noise_seed = root.split(2 * r + 2).next_u64();
    try {
      run_row(cfg, target, eval, D, row, keep ? &rec.networks[r] : nullptr);
    } catch (const Error& e) {
      const ResultRow keep_ids = row;
      row = ResultRow{};
      row.m = keep_ids.m;
      row.train_seed = keep_ids.train_seed;
      row.noise_seed = keep_ids.noise_seed;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.error = row.se = row.e_samp = row.e_disc = row.eopt_proxy = nan;
      row.failure = e.what();
    }
  }
  return rec;
}

std::string results_csv(const ResultRecord& record) {
  std::ostringstream os;
  os << "# schema_version: " << kSchemaVersion << "\n";
  os << "m,error,se,e_samp,e_disc,eopt_proxy,width,depth,size,seconds\n";
  for (const auto& r : record.rows) {
    os << r.m << ',' << num(r.error) << ',' << num(r.se) << ',' << num(r.e_samp) << ','
       << num(r.e_disc) << ',' << num(r.eopt_proxy) << ',' << r.width << ',' << r.depth << ','
       << r.size << ',' << num(r.seconds) << '\n';
  }
  return os.str();
}

std::filesystem::path save_results(const ResultRecord& record, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "results.csv", results_csv(record));

  json files = json::array({"results.csv"});
  if (record.config.export_networks)
    for (std::size_t r = 0; r < record.networks.size(); ++r) {
      if (!record.rows[r].ok()) continue;
      const std::string name = "network_m" + std::to_string(record.rows[r].m) + ".json";
      save_network(record.networks[r], dir / name);
      files.push_back(name);
    }

  json rows = json::array();
  std::vector<double> ms, errs, ratios;
  for (const auto& r : record.rows) {
    json jr{{"m", r.m},
            {"train_seed", r.train_seed},
            {"noise_seed", r.noise_seed},
            {"ok", r.ok()},
            {"failure", r.failure}};
    if (r.ok()) {
      jr.update({{"n", r.n},
                 {"N", r.N},
                 {"L", r.L},
                 {"k", r.k},
                 {"k_below_one", r.k_below_one},
                 {"lambda", r.lambda},
                 {"delta", r.delta},
                 {"delta_floored", r.delta_floored},
                 {"pi_K", r.pi_K},
                 {"emulation_gap", r.emulation_gap},
                 {"gap_bound", r.gap_bound},
                 {"theory_bound_unit_C", r.theory_bound},
                 {"solver", json::parse(solve_report_to_json(r.report))}});
      if (r.error > 0.0) {
        ms.push_back(static_cast<double>(r.m));
        errs.push_back(r.error);
        if (r.theory_bound > 0.0) ratios.push_back(std::log(r.error / r.theory_bound));
      }
    }
    rows.push_back(std::move(jr));
  }
  json theory{{"regime", record.config.regime.name()}};
  if (!record.rows.empty() && record.rows.front().ok()) {
    const auto& r0 = record.rows.front();
    theory["exponent"] = approx_error_bound(static_cast<double>(r0.m), r0.L, record.config.p,
                                            record.config.regime).exponent;
  }
  if (!ratios.empty()) {
    double s = 0.0;
    for (double v : ratios) s += v;
    theory["fitted_C"] = std::exp(s / static_cast<double>(ratios.size()));
  }
  if (ms.size() >= 3) {
    const RateFit f = fit_rate(ms, errs);
    theory["slope"] = f.slope;
    theory["intercept"] = f.intercept;
    theory["r2"] = f.r2;
  }
  json manifest{{"schema_version", kSchemaVersion},
                {"kind", "manifest"},
                {"config", config_json(record.config)},
                {"config_hash", config_hash(record.config)},
                {"seeds", {{"run", record.config.seed}, {"eval", record.eval_seed}}},
                {"files", files},
                {"rows", rows},
                {"theory", theory},
                {"notes", record.notes}};
  (void)finite_or_null;
  const auto path = dir / "manifest.json";
  write_text(path, manifest.dump(2) + "\n");
  return path;
}

CsvResults load_results_csv(const std::filesystem::path& path) {
  std::istringstream is(read_text(path));
  std::string line;
  bool header = false, schema = false;
  CsvResults out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.starts_with("#")) {
      if (line.find("schema_version") != std::string::npos) {
        require(line.find(": " + std::to_string(kSchemaVersion)) != std::string::npos,
                ErrorKind::SchemaMismatch, "unsupported results schema_version");
        schema = true;
      }
      continue;
    }
    if (!header) {
      require(line.starts_with("m,error,se"), ErrorKind::SchemaMismatch, "unexpected CSV header");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() >= 3, ErrorKind::Io, "short CSV row");
    out.m.push_back(std::stod(cells[0]));
    out.error.push_back(std::stod(cells[1]));
    out.se.push_back(std::stod(cells[2]));
  }
  require(schema, ErrorKind::SchemaMismatch, "results CSV lacks schema_version");
  return out;
}

}  // namespace holo
