#pragma once

// Reusable solvers: concave maximization on the probability simplex,
// min-max of convex payoffs over density operators, the one-dimensional
// supremum over rho, PSD projection and a small exact LP for matrix games.
//
// Every reported gap is computed from feasible primal and dual objects,
// never from iteration deltas.

#include "sptheta/channels.hpp"
#include "sptheta/matcore.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sptheta {

struct SolverConfig {
  double tolerance = 1e-6;
  int max_iterations = 50000;
  int restarts = 8;
  std::uint64_t seed = 0;

  /// Throws DomainError unless tolerance > 0 and max_iterations >= 1.
  void validate() const;
};

struct SolverReport {
  double value = 0.0;
  int iterations = 0;
  double gap = 0.0;
  bool converged = false;
};

// ---------------------------------------------------------------------------
// Simplex

using SimplexObjective = std::function<double(const RVector&)>;
using SimplexGradient = std::function<RVector(const RVector&)>;

struct SimplexResult {
  ProbabilityDistribution argmax;
  SolverReport report;
  /// Best minus worst final value across the uniform start and random restarts.
  double restart_spread = 0.0;
};

/// Entropic mirror ascent with backtracking from the uniform point and
/// cfg.restarts seeded random starts. The gap is the linear-maximization
/// certificate max_i g_i - sum_i p_i g_i. An empty gradient selects central
/// finite differences.
SimplexResult maximize_concave_simplex(const SimplexObjective& objective,
                                       const SimplexGradient& gradient, Eigen::Index size,
                                       const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Density operators

/// A finite family of convex functions D_x(F) on density operators.
/// Gradients are Hermitian matrices G with dD = Re Tr(G dF).
class DensityObjective {
 public:
  virtual ~DensityObjective() = default;

  virtual std::size_t count() const = 0;
  /// D_x(F) for every x; F is positive definite.
  virtual void values(const CMatrix& f, std::span<double> out) const = 0;
  /// Default: central differences on values().
  virtual void gradients(const CMatrix& f, std::vector<CMatrix>& out) const;
  /// Second directional derivative D^2 D_x(F)[dir] as a Hermitian matrix.
  /// Default: central differences on gradients().
  virtual CMatrix hessian_apply(const CMatrix& f, std::size_t x, const CMatrix& dir) const;
};

/// Per-payoff callables; an empty gradient selects finite differences.
struct DensityPayoff {
  std::function<double(const CMatrix&)> value;
  std::function<CMatrix(const CMatrix&)> gradient;
};

/// Adapts a list of callables to DensityObjective.
std::unique_ptr<DensityObjective> make_objective(std::vector<DensityPayoff> payoffs);

/// Payoffs -ln Tr(U_x F) for PSD U_x (D_min against support projectors).
std::unique_ptr<DensityObjective> make_overlap_objective(std::vector<CMatrix> projectors);

enum class DensityDomain {
  full,      ///< all density operators of the given dimension
  diagonal,  ///< diagonal density operators, i.e. the probability simplex
};

enum class DensityMethod {
  automatic,       ///< barrier when the parameter count allows, else mirror descent
  barrier,         ///< log-barrier path following with Newton centering
  mirror_descent,  ///< matrix multiplicative weights, step 1/sqrt(t), tail averaging
};

struct DensityResult {
  DensityOperator argmin;
  /// Dual weights on the payoffs; certify the lower bound.
  ProbabilityDistribution weights;
  /// value = max_x D_x(argmin); gap = value - certified lower bound.
  SolverReport report;
  double lower_bound = 0.0;
};

/// Minimizes max_x D_x(F) over the domain. Returns +infinity when the payoffs
/// are infinite at the maximally mixed state.
DensityResult minimize_convex_density(const DensityObjective& objective, Eigen::Index dim,
                                      const SolverConfig& cfg,
                                      DensityDomain domain = DensityDomain::full,
                                      DensityMethod method = DensityMethod::automatic);

DensityResult minimize_convex_density(std::vector<DensityPayoff> payoffs, Eigen::Index dim,
                                      const SolverConfig& cfg,
                                      DensityDomain domain = DensityDomain::full);

/// Certified lower bound on min_F max_x D_x(F) from a feasible F and weights p:
/// sum_x p_x D_x(F) + min_{F'} <G, F' - F> with G = sum_x p_x grad D_x(F).
double density_lower_bound(const DensityObjective& objective, const CMatrix& f,
                           const RVector& weights, DensityDomain domain);

// ---------------------------------------------------------------------------
// One-dimensional supremum over rho

struct RhoSupremum {
  double value = 0.0;  ///< may be +infinity
  double rho = 0.0;    ///< maximizer (rho_max when infinite)
};

inline constexpr double default_rho_max = 1e4;
inline constexpr int default_rho_grid = 200;

/// sup over rho in [0, rho_max] of e0(rho) - rho * rate by a log grid on
/// [1e-3, rho_max] plus rho = 0, refined by golden section.
///
/// Divergence: when `infinite_below` is given the result is +infinity iff
/// rate < *infinite_below. Otherwise +infinity is declared when the objective
/// still increases at rho_max and rate < e0(rho_max)/rho_max - 1e-6.
RhoSupremum sup_over_rho(const std::function<double(double)>& e0, double rate, double rho_max,
                         const SolverConfig& cfg,
                         std::optional<double> infinite_below = std::nullopt,
                         int grid_points = default_rho_grid);

// ---------------------------------------------------------------------------
// Cones and LPs

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped to 0).
PsdMatrix psd_project(const HermitianMatrix& h);

struct MinimaxLp {
  double value = 0.0;      ///< min over column mixtures p of max_i (A p)_i
  RVector column_strategy; ///< optimal p
  RVector row_strategy;    ///< optimal q certifying value via min_j (A^T q)_j
  double gap = 0.0;        ///< max_i (A p)_i - min_j (A^T q)_j
};

/// Exact simplex method (Bland's rule) for a nonnegative matrix whose
/// columns are all nonzero.
MinimaxLp solve_minimax_lp(const RMatrix& a);

}  // namespace sptheta
