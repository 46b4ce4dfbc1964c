#pragma once

// Kullback-Leibler, Renyi (orders in (0,1)) and D_min divergences in nats.
// +infinity is an ordinary result value, not an error.

#include "sptheta/channels.hpp"
#include "sptheta/matcore.hpp"

#include <limits>

namespace sptheta {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Traces at or below this value are treated as an exact zero overlap.
inline constexpr double overlap_floor = 1e-14;

double kl(const ProbabilityDistribution& q1, const ProbabilityDistribution& q2);

/// (1/(alpha-1)) ln sum_y q1^alpha q2^(1-alpha); alpha must lie strictly in (0,1).
double renyi_classical(const ProbabilityDistribution& q1, const ProbabilityDistribution& q2,
                       double alpha);

/// (1/(alpha-1)) ln Tr F1^alpha F2^(1-alpha); alpha must lie strictly in (0,1).
double renyi_quantum(const DensityOperator& f1, const DensityOperator& f2, double alpha);

/// -ln Tr(S^0 F) with S^0 the support projector of S.
double d_min(const DensityOperator& s, const DensityOperator& f);

/// Throws DomainError unless 0 < alpha < 1.
void require_open_unit(double alpha, const char* what);

}  // namespace sptheta
