#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "holobench/banachspace.hpp"
#include "holobench/network.hpp"
#include "holobench/polybasis.hpp"
#include "holobench/sensing.hpp"
#include "holobench/solvers.hpp"
#include "holobench/theory.hpp"

namespace holo {

enum class DeltaPolicy { Formula, Fixed, ExactRepu };
enum class KnownStrategy { Surrogate, Oracle, Explicit };

struct PolynomialTerm {
  std::string nu;  // "j:v ..." text form
  std::vector<double> block;

  bool operator==(const PolynomialTerm&) const = default;
};

struct ModelSpec {
  std::string kind = "diffusion";  // diffusion | rational | exponential | polynomial
  std::size_t d_active = 4;
  // Amplitudes: explicit list, or a preset ("algebraic" b_j = scale (j+1)^-beta,
  // "geometric" b_j = scale theta^j) over d_active coordinates.
  std::vector<double> b;
  std::string b_preset = "algebraic";
  double beta = 3.0;
  double theta = 0.5;
  double b_scale = 1.0;
  // Diffusion.
  std::size_t grid_fine = 31;
  std::size_t grid_coarse = 31;
  double a0 = 1.0;
  double forcing = 1.0;  // constant right-hand side
  // Rational.
  double c0 = 2.0;
  // Polynomial: f = sum of block * Psi_nu, K = block length.
  std::vector<PolynomialTerm> terms;

  bool operator==(const ModelSpec&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Regime regime;
  Family family = Family::Legendre;
  ModelSpec model;
  BlockNorm vnorm = BlockNorm::L2;
  bool gram = false;  // l2 in the Gram inner product of the coarse space
  std::vector<std::size_t> m_schedule{50, 100, 200};
  double epsilon = 0.5;      // failure probability in L(m, eps)
  double p = 0.5;            // summability exponent for delta and overlays
  double holo_eps = 0.5;     // holomorphy radius budget for surrogate selection
  LMode l_mode = LMode::Auto;
  double c0 = 1.0;
  double known_constant = 11.0;
  std::uint32_t budget_cap = 0;  // cap on the hyperbolic-cross budget n (0 = none)
  std::uint32_t dim_cap = 0;     // cap on the active dimension count (0 = none)
  KnownStrategy known_strategy = KnownStrategy::Surrogate;
  std::vector<std::string> known_set;  // explicit S (text multi-indices)
  std::uint32_t oracle_quadrature = 8;
  double noise = 0.0;
  Activation activation = Activation::repu(2);
  DeltaPolicy delta_policy = DeltaPolicy::ExactRepu;
  double delta = 1e-3;  // used by the fixed policy
  SolverOptions solver{20000, 1e-9};
  bool certify_eopt = true;
  std::uint64_t seed = 1;
  std::size_t eval_samples = 2000;
  bool record_timing = true;
  bool export_networks = false;

  bool operator==(const ExperimentConfig&) const = default;
};

std::string config_to_json(const ExperimentConfig& cfg);
/// Missing fields keep their defaults. SchemaMismatch on a bad schema_version.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_hash(const ExperimentConfig& cfg);

struct ResultRow {
  std::size_t m = 0;
  double error = 0.0;
  double se = 0.0;
  double e_samp = 0.0;
  double e_disc = 0.0;
  double eopt_proxy = 0.0;
  std::size_t width = 0, depth = 0, size = 0;
  double seconds = 0.0;
  // Provenance beyond the CSV columns.
  std::size_t n = 0;  // |Theta|
  std::size_t N = 0;  // |Lambda| or |S|
  double L = 0.0, k = 0.0, lambda = 0.0, delta = 0.0;
  bool delta_floored = false;
  bool k_below_one = false;
  double pi_K = 1.0;
  double emulation_gap = 0.0;
  double gap_bound = 0.0;
  double theory_bound = 0.0;  // approx bound with C = 1
  SolveReport report;
  std::uint64_t train_seed = 0, noise_seed = 0;
  std::string failure;  // empty when the row succeeded
  bool ok() const noexcept { return failure.empty(); }
};

struct ResultRecord {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  std::uint64_t eval_seed = 0;
  std::vector<Network> networks;  // head-loaded network per row (when kept)
  std::vector<std::string> notes;
};

/// Target function and the space it lives in, as the harness sees it.
struct TargetModel {
  VectorFunction f_fine;            // values in the fine space
  Eigen::MatrixXd decimate;         // coarse x fine
  Eigen::MatrixXd embed;            // fine x coarse
  DiscreteSpace coarse_space;       // V_K
  std::function<double(const Eigen::VectorXd&)> fine_norm;
  double pi_K = 1.0;
  std::vector<double> b;            // amplitudes for surrogate selection
  std::size_t d_active = 0;
};

TargetModel make_target(const ExperimentConfig& cfg);

/// Sizes and index set used by the row of sample count m.
struct RowPlan {
  double L = 0.0, k = 0.0, lambda = 0.0;
  std::size_t n = 0;     // |Theta| before capping
  std::size_t dims = 1;  // coordinates the index set reads
  bool k_below_one = false;
  IndexSet index_set;
};

RowPlan plan_row(const ExperimentConfig& cfg, const TargetModel& target, std::size_t m);

/// Runs every m of the schedule. Stage errors are caught per row and
/// recorded as the row's failure reason.
ResultRecord run_experiment(const ExperimentConfig& cfg, bool keep_networks = false);

struct L2Estimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// sqrt(mean ||f_true(y) - f_approx(y)||^2) over M fresh draws with a
/// delta-method standard error.
L2Estimate evaluate_l2_error(const VectorFunction& f_true, const VectorFunction& f_approx,
                             const std::function<double(const Eigen::VectorXd&)>& norm,
                             Family family, std::size_t d, std::size_t M, std::uint64_t seed);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares line through (log m, log error).
RateFit fit_rate(const std::vector<double>& ms, const std::vector<double>& errors);

/// Writes <dir>/results.csv and <dir>/manifest.json (plus networks when
/// present). Returns the manifest path.
std::filesystem::path save_results(const ResultRecord& record, const std::filesystem::path& dir);

std::string results_csv(const ResultRecord& record);

struct CsvResults {
  std::vector<double> m, error, se;
};
CsvResults load_results_csv(const std::filesystem::path& path);

}  // namespace holo
