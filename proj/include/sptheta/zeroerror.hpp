#pragma once

// Zero-error combinatorics and bounds: strong products, exact independence
// numbers, orthonormal and projector representations, the Lovasz theta SDP
// and the projector value V_sp.

#include "sptheta/channels.hpp"
#include "sptheta/optim.hpp"

#include <optional>
#include <vector>

namespace sptheta {

/// Unit vectors u_x, orthogonal on every non-edge, with an optional unit handle.
class VectorRepresentation {
 public:
  /// Throws ValidationError if a vector is not unit norm (1e-10), a non-edge pair
  /// is not orthogonal (1e-8), or dimensions disagree.
  VectorRepresentation(ConfusabilityGraph graph, std::vector<CVector> vectors,
                       std::optional<CVector> handle = std::nullopt);

  const ConfusabilityGraph& graph() const noexcept { return graph_; }
  const std::vector<CVector>& vectors() const noexcept { return vectors_; }
  const std::optional<CVector>& handle() const noexcept { return handle_; }
  Eigen::Index dim() const { return vectors_.front().size(); }

 private:
  ConfusabilityGraph graph_;
  std::vector<CVector> vectors_;
  std::optional<CVector> handle_;
};

/// Projectors U_x with U_x U_x' = 0 on every non-edge, optional density handle.
class ProjectorRepresentation {
 public:
  /// Throws ValidationError unless every U_x is an idempotent Hermitian matrix
  /// and non-edge products vanish, both within 1e-8.
  ProjectorRepresentation(ConfusabilityGraph graph, std::vector<CMatrix> projectors,
                          std::optional<DensityOperator> handle = std::nullopt);

  /// Rank-one projectors |u_x><u_x|; the handle c becomes |c><c|.
  static ProjectorRepresentation from_vectors(const VectorRepresentation& rep);

  const ConfusabilityGraph& graph() const noexcept { return graph_; }
  const std::vector<CMatrix>& projectors() const noexcept { return projectors_; }
  const std::optional<DensityOperator>& handle() const noexcept { return handle_; }
  Eigen::Index dim() const { return projectors_.front().rows(); }

 private:
  ConfusabilityGraph graph_;
  std::vector<CMatrix> projectors_;
  std::optional<DensityOperator> handle_;
};

struct ThetaCertificate {
  double theta_log = 0.0;       ///< ln of the certified primal value
  PsdMatrix primal_matrix = PsdMatrix::trusted(CMatrix::Zero(1, 1));  ///< B: trace 1, zero on edges
  HermitianMatrix dual_matrix = HermitianMatrix::trusted(CMatrix::Zero(1, 1));  ///< A: ones on the diagonal and on non-edges
  double primal_value = 0.0;    ///< sum_ij B_ij
  double dual_value = 0.0;      ///< lambda_max(A)
  double duality_gap = 0.0;     ///< dual_value - primal_value
  int iterations = 0;
};

struct CapacityBoundReport {
  double lower = 0.0;
  int lower_blocklength = 1;
  double theta_log = 0.0;
  double theta_sp_log = 0.0;
};

struct IndependentSet {
  std::size_t size = 0;
  std::vector<std::size_t> witness;  ///< lexicographically smallest maximum set, ascending
};

struct LovaszValue {
  double value = 0.0;         ///< max_x ln 1/|<u_x|c>|^2 at the returned handle
  CVector handle;
  double relaxation_value = 0.0;  ///< min over density operators F (lower side of a rank gap)
  double relaxation_gap = 0.0;    ///< certified gap of the relaxation solve
};

struct ValueSp {
  double value = 0.0;
  DensityOperator handle = DensityOperator::maximally_mixed(1);
  double gap = 0.0;
  SolverReport report;
};

struct SubpartitionReport {
  double lhs = 0.0;            ///< sum_m Tr(U_{x_m} F^{(x)n})
  double bound = 0.0;          ///< M exp(-n V)
  double operator_norm = 0.0;  ///< lambda_max(sum_m U_{x_m})
};

/// Hard cap on product graph sizes and exact independence searches.
inline constexpr std::size_t max_graph_vertices = 4096;
/// Cap on the SDP size for theta.
inline constexpr std::size_t max_theta_vertices = 64;

/// Vertex (g, h) has index g |V(H)| + h. Throws CapacityError past max_graph_vertices.
ConfusabilityGraph strong_product(const ConfusabilityGraph& g, const ConfusabilityGraph& h);
/// n-fold strong power.
ConfusabilityGraph strong_power(const ConfusabilityGraph& g, int n);

/// Exact branch and bound with a greedy clique-cover bound.
IndependentSet max_independent_set(const ConfusabilityGraph& g);

/// (1/n) ln alpha(G^n) in nats.
double capacity_lower_bound(const ConfusabilityGraph& g, int n);

LovaszValue lovasz_value(const VectorRepresentation& rep, const SolverConfig& cfg = {});

/// Five unit vectors in C^3 realizing theta(C_5), handle e_0.
VectorRepresentation umbrella_c5();

/// Primal-dual interior point solve of the theta SDP with an exactly feasible
/// certificate. Throws ConvergenceError if the gap stays above tolerance.
ThetaCertificate theta(const ConfusabilityGraph& g, const SolverConfig& cfg = {});

/// Re-checks feasibility of both matrices and the stored gap; returns the first
/// problem found, or an empty string.
std::string verify_certificate(const ConfusabilityGraph& g, const ThetaCertificate& cert,
                               double tol = 1e-8);

/// min over F of max_x -ln Tr(U_x F).
ValueSp value_sp(const ProjectorRepresentation& rep, const SolverConfig& cfg = {});

/// Throws InvariantError if lower > theta_sp_log + 1e-4 or a representation's
/// value falls below theta_log - 1e-4.
CapacityBoundReport certify_capacity_bounds(const ConfusabilityGraph& g,
                                     const std::vector<ProjectorRepresentation>& reps, int n,
                                     const SolverConfig& cfg = {});

/// Throws ValidationError if the code is not independent in G^n, InvariantError
/// if bound <= lhs <= 1 or the operator inequality fails beyond 1e-8.
SubpartitionReport subpartition_check(const ProjectorRepresentation& rep,
                                      const std::vector<std::vector<std::size_t>>& code, int n,
                                      const SolverConfig& cfg = {});

}  // namespace sptheta
