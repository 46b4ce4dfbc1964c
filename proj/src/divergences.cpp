#include "sptheta/divergences.hpp"

#include "sptheta/errors.hpp"

#include <cmath>
#include <string>

namespace sptheta {

void require_open_unit(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(what) + ": order must lie strictly in (0,1), got " +
                      std::to_string(alpha));
  }
}

namespace {

void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": size mismatch " + std::to_string(a) + " vs " +
                          std::to_string(b));
  }
}

}  // namespace

double kl(const ProbabilityDistribution& q1, const ProbabilityDistribution& q2) {
  require_same_size(q1.size(), q2.size(), "kl");
  double sum = 0.0;
  for (Eigen::Index y = 0; y < q1.size(); ++y) {
    if (q1[y] == 0.0) continue;
    if (q2[y] == 0.0) return infinity;
    sum += q1[y] * std::log(q1[y] / q2[y]);
  }
  return std::max(sum, 0.0);
}

double renyi_classical(const ProbabilityDistribution& q1, const ProbabilityDistribution& q2,
                       double alpha) {
  require_same_size(q1.size(), q2.size(), "renyi_classical");
  require_open_unit(alpha, "renyi_classical");
  double sum = 0.0;
  for (Eigen::Index y = 0; y < q1.size(); ++y) {
    if (q1[y] > 0.0 && q2[y] > 0.0) sum += std::pow(q1[y], alpha) * std::pow(q2[y], 1.0 - alpha);
  }
  if (sum <= 0.0) return infinity;
  return std::max(std::log(sum) / (alpha - 1.0), 0.0);
}

double renyi_quantum(const DensityOperator& f1, const DensityOperator& f2, double alpha) {
  require_same_size(f1.dim(), f2.dim(), "renyi_quantum");
  require_open_unit(alpha, "renyi_quantum");
  const double t =
      trace_product(mat_pow(f1, alpha).matrix(), mat_pow(f2, 1.0 - alpha).matrix());
  if (t <= overlap_floor) return infinity;
  return std::max(std::log(t) / (alpha - 1.0), 0.0);
}

double d_min(const DensityOperator& s, const DensityOperator& f) {
  require_same_size(s.dim(), f.dim(), "d_min");
  const double t = trace_product(support_projector(s).matrix(), f.matrix());
  if (t <= overlap_floor) return infinity;
  return std::max(-std::log(t), 0.0);
}

}  // namespace sptheta
