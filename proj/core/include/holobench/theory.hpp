#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "holobench/multiindex.hpp"
#include "holobench/network.hpp"

namespace holo {

enum class Anisotropy { Known, Unknown };
enum class Codomain { Hilbert, Banach };

struct Regime {
  Anisotropy anisotropy = Anisotropy::Unknown;
  Codomain codomain = Codomain::Hilbert;

  std::string name() const;  // "unknown-hilbert", ...
  static Regime parse(std::string_view name);
  bool operator==(const Regime&) const = default;
};

/// Which log factor L(m, eps) to use. Auto picks the regime's own formula.
enum class LMode { Auto, UnknownLog, KnownLog, PlainLog };

std::string_view to_string(LMode mode);
LMode parse_lmode(std::string_view name);

/// Unknown anisotropy: log^4 m + log(1/eps). Known: log m + log(1/eps).
/// PlainLog: log m. Natural logarithms throughout. Throws for m < 3 or
/// eps outside (0,1).
double log_factor_L(double m, double eps, const Regime& regime, LMode mode = LMode::Auto);

struct SparsityK {
  double k = 0.0;
  bool below_one = false;
};

/// Unknown-Banach sqrt(m/(c0 L)), unknown-Hilbert m/(c0 L), known m/(known_constant L).
SparsityK sparsity_k(double m, double L, const Regime& regime, double c0 = 1.0,
                     double known_constant = 11.0);

/// n = ceil(m / (c0 L)).
std::size_t active_dimension_n(double m, double L, double c0 = 1.0);

/// 1 / (6 sqrt(m / L)). NotApplicable for known anisotropy.
double lambda_param(double m, double L, const Regime& regime);

struct DeltaValue {
  double delta = 0.0;
  bool floored = false;  // the 1e-12 floor was active
};

/// Unknown-Banach min{2/(3(3+4k)sqrt N), k^{1/2-1/p}/N};
/// unknown-Hilbert min{2/(3(3+4 sqrt k)sqrt N), k^{1/2-1/p}/sqrt N};
/// known min{sqrt3/(2 sqrt5 sqrt k), k^{1/2-1/p}}. Floored at 1e-12.
DeltaValue emulation_delta(double k, double N, double p, const Regime& regime);

/// ceil(c0 delta^-2 k (log^2(k/delta) log^2(e n) + log(2/eps))).
double wrip_sample_complexity(double k, double delta, double eps, double n, double c0 = 1.0);

/// ceil(k log(k/eps) / ((1-delta) log(1-delta) + delta)).
double full_case_sample_complexity(double k, double delta, double eps);

struct RnspConstants {
  double C1, C2, C1p, C2p;
};

/// C1 = (1+rho)/(1-rho), C2 = 2 gamma/(1-rho), C1' = (1+rho)^2/(1-rho),
/// C2' = (3+rho) gamma/(1-rho).
RnspConstants rnsp_error_constants(double rho, double gamma);

struct ApproxBound {
  double value = 0.0;
  double exponent = 0.0;  // of m/L
  double theta = 0.0;     // power of m multiplying the noise terms
};

/// C pi_K (m/L)^exponent with exponent 1/2(1/2-1/p) (unknown-Banach),
/// 1/2-1/p (Hilbert), 1-1/p (known-Banach). theta is 1/4, 1/2 or 0.
ApproxBound approx_error_bound(double m, double L, double p, const Regime& regime,
                               double pi_K = 1.0, double C = 1.0);

struct ArchitectureShape {
  double width = 0.0;
  double depth = 0.0;
};

/// Width and depth bound shapes with unit constants.
ArchitectureShape architecture_bounds(double m, double p, const Regime& regime,
                                      const Activation& act);

/// log rho_j for the polyellipse with budget share tau_j proportional to
/// 2^{-j}: (rho + 1/rho)/2 - 1 = eps tau_j / b_j.
std::vector<double> surrogate_log_radii(const std::vector<double>& b, double eps);

enum class SelectionStrategy { OracleCoefficients, SurrogateScore };

/// Grows an anchored set from {0} by repeatedly adding the addable index
/// (one keeping the set anchored, supported in [dims]) with the smallest
/// score; ties go to the earlier index in canonical order. Stops at n
/// members, or earlier when the next addition would push the weighted
/// cardinality sum w_nu^2 past max_weight (when weight is given).
IndexSet anchored_greedy(std::size_t n, std::uint32_t dims,
                         const std::function<double(const MultiIndex&)>& score,
                         const std::function<double(const MultiIndex&)>& weight = {},
                         double max_weight = 0.0);

/// Surrogate selection: score sum_j nu_j log rho_j.
IndexSet known_set_selection_surrogate(const std::vector<double>& b, double eps, std::size_t n,
                                       const std::function<double(const MultiIndex&)>& weight = {},
                                       double max_weight = 0.0);

/// Oracle selection from coefficient norms on a candidate set: score
/// -log of the majorised norm max_{mu >= nu, mu in candidates} ||c_mu||;
/// indices outside the candidate set are never added.
IndexSet known_set_selection_oracle(const IndexSet& candidates,
                                    const std::vector<double>& coefficient_norms, std::size_t n,
                                    const std::function<double(const MultiIndex&)>& weight = {},
                                    double max_weight = 0.0);

}  // namespace holo
