#pragma once

// Seeded generators and fixed channels shared by the test binaries.

#include "sptheta/channels.hpp"
#include "sptheta/matcore.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing {

using namespace sptheta;

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform() { return uniform_(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  CMatrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    CMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(normal(), normal());
    return g;
  }

  HermitianMatrix hermitian(Eigen::Index d) {
    CMatrix g = gaussian(d, d);
    return HermitianMatrix(0.5 * (g + g.adjoint()));
  }

  DensityOperator density(Eigen::Index d, Eigen::Index rank) {
    CMatrix g = gaussian(d, rank);
    CMatrix s = g * g.adjoint();
    return DensityOperator::trusted(s / s.trace().real());
  }

  CVector unit(Eigen::Index d) { return gaussian(d, 1).col(0).normalized(); }

  ProbabilityDistribution distribution(Eigen::Index n) {
    RVector p(n);
    for (Eigen::Index i = 0; i < n; ++i) p(i) = -std::log(1.0 - uniform());
    return ProbabilityDistribution::trusted(p / p.sum());
  }

  // rows with entries zeroed at rate `holes`, at least one positive entry per row
  ClassicalChannel classical(Eigen::Index inputs, Eigen::Index outputs, double holes = 0.0) {
    RMatrix w(inputs, outputs);
    for (Eigen::Index x = 0; x < inputs; ++x) {
      for (Eigen::Index y = 0; y < outputs; ++y)
        w(x, y) = uniform() < holes ? 0.0 : 0.05 + uniform();
      if (w.row(x).sum() == 0.0) w(x, integer(0, static_cast<int>(outputs) - 1)) = 1.0;
      w.row(x) /= w.row(x).sum();
    }
    return validate_classical(w);
  }

  CQChannel cq(Eigen::Index d, Eigen::Index inputs) {
    std::vector<DensityOperator> st;
    for (Eigen::Index x = 0; x < inputs; ++x) st.push_back(density(d, integer(1, static_cast<int>(d))));
    return CQChannel::from_states(st);
  }

  CQChannel pure(Eigen::Index d, Eigen::Index inputs) {
    std::vector<DensityOperator> st;
    for (Eigen::Index x = 0; x < inputs; ++x) st.push_back(DensityOperator::pure(unit(d)));
    return CQChannel::from_states(st);
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

inline ClassicalChannel bsc(double p) {
  return validate_classical(std::vector<std::vector<double>>{{1 - p, p}, {p, 1 - p}});
}

inline ClassicalChannel noiseless(int q) {
  return validate_classical(RMatrix(RMatrix::Identity(q, q)));
}

// W(y|x) = 1/2 for y in {x, x+1 mod 5}
inline ClassicalChannel typewriter() {
  RMatrix w = RMatrix::Zero(5, 5);
  for (int x = 0; x < 5; ++x) w(x, x) = w(x, (x + 1) % 5) = 0.5;
  return validate_classical(w);
}

inline CMatrix diag(std::initializer_list<double> v) {
  RVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

inline CVector basis(Eigen::Index d, Eigen::Index k) {
  CVector e = CVector::Zero(d);
  e(k) = 1.0;
  return e;
}

inline double bsc_capacity(double p) {
  return std::log(2.0) + p * std::log(p) + (1 - p) * std::log(1 - p);
}

}  // namespace testing
