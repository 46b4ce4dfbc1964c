#pragma once

// Gallager functions, the sphere-packing exponent, capacities, the feedback
// bound and the Renyi information radii R_rho and R_inf for classical and
// classical-quantum channels.
//
// rho >= 0 and alpha in (0,1) are tied by alpha = 1/(1+rho). All results are
// in nats; +infinity is an ordinary value.

#include "sptheta/channels.hpp"
#include "sptheta/divergences.hpp"
#include "sptheta/optim.hpp"

#include <variant>
#include <vector>

namespace sptheta {

inline double alpha_of_rho(double rho) { return 1.0 / (1.0 + rho); }
inline double rho_of_alpha(double alpha) { return 1.0 / alpha - 1.0; }

struct ExponentPoint {
  double rho = 0.0;
  double e0 = 0.0;
  ProbabilityDistribution optimal_input = ProbabilityDistribution::uniform(1);
  SolverReport report;
  double restart_spread = 0.0;
};

/// Classical centers are output distributions; quantum centers are density operators.
using RadiusCenter = std::variant<ProbabilityDistribution, DensityOperator>;

struct RadiusResult {
  /// Divergence order: 1 for the capacity radius, 0 for R_inf.
  double alpha = 0.0;
  /// max_x D(S_x || center), an upper bound on the radius.
  double value = 0.0;
  RadiusCenter center = ProbabilityDistribution::uniform(1);
  /// value minus a certified lower bound on the radius.
  double gap = 0.0;
  SolverReport report;
};

struct CurvePoint {
  double rate = 0.0;
  double esp = 0.0;  ///< may be +infinity
};

struct SpherePackingCurve {
  std::vector<CurvePoint> points;
  /// Rates strictly below this report E_sp = +infinity.
  double r_inf = 0.0;
};

// ---------------------------------------------------------------------------
// Gallager function

double e0_classical(const ClassicalChannel& w, const ProbabilityDistribution& p, double rho);
double e0_quantum(const CQChannel& ch, const ProbabilityDistribution& p, double rho);

/// max over P of E_0(rho, P). Non-convergence is reported, not thrown.
ExponentPoint e0_max(const ClassicalChannel& w, double rho, const SolverConfig& cfg = {});
ExponentPoint e0_max(const CQChannel& ch, double rho, const SolverConfig& cfg = {});

/// E_0(rho) / rho. Throws DomainError unless rho > 0.
double r_rho_primal(const ClassicalChannel& w, double rho, const SolverConfig& cfg = {});
double r_rho_primal(const CQChannel& ch, double rho, const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Sphere packing

/// sup over rho in [0, rho_max] of E_0(rho) - rho R. Rates below R_inf give +infinity.
double esp(const ClassicalChannel& w, double rate, const SolverConfig& cfg = {},
           double rho_max = default_rho_max);
double esp(const CQChannel& ch, double rate, const SolverConfig& cfg = {},
           double rho_max = default_rho_max);

/// E_sp on a list of rates, sharing Gallager evaluations across rates.
SpherePackingCurve esp_curve(const ClassicalChannel& w, const std::vector<double>& rates,
                             const SolverConfig& cfg = {}, double rho_max = default_rho_max);
SpherePackingCurve esp_curve(const CQChannel& ch, const std::vector<double>& rates,
                             const SolverConfig& cfg = {}, double rho_max = default_rho_max);

// ---------------------------------------------------------------------------
// Renyi radii

/// min over centers of max_x D_alpha(S_x || center), alpha in (0,1).
RadiusResult radius_solve(const ClassicalChannel& w, double alpha, const SolverConfig& cfg = {});
RadiusResult radius_solve(const CQChannel& ch, double alpha, const SolverConfig& cfg = {});

/// Payoffs D_alpha(S_x || F) with analytic gradients and Hessians.
std::unique_ptr<DensityObjective> make_renyi_objective(const CQChannel& ch, double alpha);
/// Diagonal payoffs D_alpha(W(.|x) || Q); alpha = 1 selects Kullback-Leibler.
std::unique_ptr<DensityObjective> make_renyi_objective(const ClassicalChannel& w, double alpha);

/// F proportional to (sum_x P(x) S_x^alpha)^(1/alpha), trace one.
DensityOperator handle_from_input_dist(const CQChannel& ch, double alpha,
                                       const ProbabilityDistribution& p);
/// Q(y) proportional to (sum_x P(x) W(y|x)^alpha)^(1/alpha).
ProbabilityDistribution handle_from_input_dist(const ClassicalChannel& w, double alpha,
                                               const ProbabilityDistribution& p);

/// max_x D_alpha(S_x || F).
double max_divergence(const CQChannel& ch, double alpha, const DensityOperator& f);
double max_divergence(const ClassicalChannel& w, double alpha, const ProbabilityDistribution& q);

// ---------------------------------------------------------------------------
// Capacities

struct CapacityResult {
  double value = 0.0;  ///< mutual information of `input`, a certified lower bound
  ProbabilityDistribution input = ProbabilityDistribution::uniform(1);
  SolverReport report;  ///< gap = max_x D(W_x || PW) - I(P)
};

/// Blahut-Arimoto alternating maximization of I(P; W).
CapacityResult capacity_classical(const ClassicalChannel& w, const SolverConfig& cfg = {});

/// min over Q of max_x D(W(.|x) || Q).
RadiusResult capacity_minmax(const ClassicalChannel& w, const SolverConfig& cfg = {});

struct FeedbackResult {
  double value = 0.0;
  ProbabilityDistribution input = ProbabilityDistribution::uniform(1);
  /// LP duality gap in nats.
  double gap = 0.0;
};

/// max_P -ln max_y sum_{x: W(y|x) > 0} P(x).
FeedbackResult c_fb(const ClassicalChannel& w);

struct RInfClassical {
  double primal = 0.0;
  ProbabilityDistribution input = ProbabilityDistribution::uniform(1);
  /// min over Q of max_x -ln sum_{y: W(y|x) > 0} Q(y), solved independently.
  RadiusResult dual;
};

/// Throws InvariantError if primal and dual disagree beyond 1e-6 after convergence.
RInfClassical r_inf_classical(const ClassicalChannel& w, const SolverConfig& cfg = {});

/// min over F of max_x D_min(S_x || F).
RadiusResult r_inf_quantum(const CQChannel& ch, const SolverConfig& cfg = {});

}  // namespace sptheta
