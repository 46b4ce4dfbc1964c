#include "sptheta/optim.hpp"

#include "sptheta/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace sptheta {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw DomainError("solver tolerance must be > 0");
  if (max_iterations < 1) throw DomainError("solver max_iterations must be >= 1");
  if (restarts < 0) throw DomainError("solver restarts must be >= 0");
}

// ===========================================================================
// Simplex
// ===========================================================================

namespace {

constexpr double kSimplexFloor = 1e-30;

SimplexGradient finite_difference_gradient(const SimplexObjective& f) {
  return [f](const RVector& p) {
    constexpr double h = 1e-6;
    RVector g(p.size());
    RVector q = p;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double down = std::min(h, p[i]);
      q[i] = p[i] + h;
      const double up_val = f(q);
      q[i] = p[i] - down;
      const double down_val = f(q);
      q[i] = p[i];
      g[i] = (up_val - down_val) / (h + down);
    }
    return g;
  };
}

double evaluate_checked(const SimplexObjective& f, const RVector& p) {
  const double v = f(p);
  if (std::isnan(v)) {
    throw ConvergenceError("objective evaluated to NaN on the simplex", -kInf, kInf);
  }
  return v;
}

// Absolute below 1, relative above: large rho makes E_0 grow linearly.
double simplex_threshold(const SolverConfig& cfg, double value) {
  return cfg.tolerance * std::max(1.0, std::abs(value));
}

struct AscentRun {
  RVector p;
  double value = -kInf;
  double gap = kInf;
  int iterations = 0;
};

AscentRun mirror_ascent(const SimplexObjective& f, const SimplexGradient& grad, RVector p,
                        const SolverConfig& cfg) {
  AscentRun run;
  double fv = evaluate_checked(f, p);
  RVector g = grad(p);
  double range = g.maxCoeff() - g.minCoeff();
  double eta = 1.0 / std::max(range, 1e-12);
  int it = 0;
  double gap = kInf;
  for (; it < cfg.max_iterations; ++it) {
    const double gmax = g.maxCoeff();
    gap = std::max(0.0, gmax - p.dot(g));
    if (gap <= simplex_threshold(cfg, fv)) break;
    range = gmax - g.minCoeff();

    bool accepted = false;
    RVector q, gq;
    double fq = 0.0;
    const double slack = 1e-14 * std::max(1.0, std::abs(fv));
    while (eta * range > 1e-14) {
      const RVector expo = (eta * (g.array() - gmax)).max(-700.0).matrix();
      q = (p.array() * expo.array().exp()).max(kSimplexFloor).matrix();
      q /= q.sum();
      fq = evaluate_checked(f, q);
      if (fq > fv + slack) {
        // Relative smoothness: f(q) >= f(p) + <g, q - p> - KL(q||p)/eta.
        const double div = (q.array() * (q.array() / p.array()).log()).sum();
        accepted = fq >= fv + g.dot(q - p) - std::max(div, 0.0) / eta;
        if (accepted) gq = grad(q);
      } else if (fq >= fv - slack) {
        // Values agree to rounding; decide by the slope at q instead.
        gq = grad(q);
        accepted = gq.dot(q - p) >= 0.0;
      }
      if (accepted) break;
      eta *= 0.5;
    }
    if (!accepted) break;
    p = std::move(q);
    fv = fq;
    g = std::move(gq);
    eta *= 2.0;
  }
  run.p = std::move(p);
  run.value = fv;
  run.gap = gap;
  run.iterations = it;
  return run;
}

}  // namespace

SimplexResult maximize_concave_simplex(const SimplexObjective& objective,
                                       const SimplexGradient& gradient, Eigen::Index size,
                                       const SolverConfig& cfg) {
  cfg.validate();
  if (size < 1) throw ValidationError("simplex size must be positive");
  const SimplexGradient grad = gradient ? gradient : finite_difference_gradient(objective);

  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> expo(1.0);

  std::vector<RVector> starts;
  starts.push_back(RVector::Constant(size, 1.0 / static_cast<double>(size)));
  for (int r = 0; r < cfg.restarts; ++r) {
    RVector s(size);
    for (Eigen::Index i = 0; i < size; ++i) s[i] = expo(rng) + kSimplexFloor;
    starts.push_back(s / s.sum());
  }

  std::vector<AscentRun> runs;
  int total_iterations = 0;
  double top = -kInf, worst = kInf;
  for (const auto& start : starts) {
    runs.push_back(mirror_ascent(objective, grad, start, cfg));
    total_iterations += runs.back().iterations;
    top = std::max(top, runs.back().value);
    worst = std::min(worst, runs.back().value);
  }
  // Among runs tied with the best value up to rounding, report the tightest certificate.
  const double tie = 1e-14 * std::max(1.0, std::abs(top));
  const AscentRun* chosen = nullptr;
  for (const auto& run : runs) {
    if (run.value < top - tie) continue;
    if (!chosen || run.gap < chosen->gap) chosen = &run;
  }
  const AscentRun& best = *chosen;

  SimplexResult out{ProbabilityDistribution::trusted(best.p), {}, top - worst};
  out.report.value = best.value;
  out.report.gap = best.gap;
  out.report.iterations = total_iterations;
  out.report.converged = best.gap <= simplex_threshold(cfg, best.value);
  return out;
}

// ===========================================================================
// Density operators
// ===========================================================================

namespace {

struct BasisTerm {
  Eigen::Index row;
  Eigen::Index col;
  Complex coef;
};

/// Orthonormal basis of Hermitian matrices under Re Tr(A B): diagonal units,
/// then (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2 for i < j.
class HermitianBasis {
 public:
  HermitianBasis(Eigen::Index dim, DensityDomain domain) : dim_(dim) {
    for (Eigen::Index k = 0; k < dim; ++k) add({{k, k, 1.0}}, 1);
    if (domain == DensityDomain::full) {
      const double r = 1.0 / std::sqrt(2.0);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i + 1; j < dim; ++j) {
          add({{{i, j, r}, {j, i, r}}}, 2);
          add({{{i, j, Complex(0.0, r)}, {j, i, Complex(0.0, -r)}}}, 2);
        }
      }
    }
  }

  std::size_t size() const { return terms_.size(); }
  Eigen::Index dim() const { return dim_; }
  bool is_diagonal(std::size_t k) const { return k < static_cast<std::size_t>(dim_); }

  CMatrix element(std::size_t k) const {
    CMatrix e = CMatrix::Zero(dim_, dim_);
    for (int t = 0; t < count_[k]; ++t) e(terms_[k][t].row, terms_[k][t].col) += terms_[k][t].coef;
    return e;
  }

  RVector coords(const CMatrix& g) const {
    RVector c(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) {
      Complex s = 0.0;
      for (int t = 0; t < count_[k]; ++t) s += terms_[k][t].coef * g(terms_[k][t].col, terms_[k][t].row);
      c[static_cast<Eigen::Index>(k)] = s.real();
    }
    return c;
  }

  CMatrix compose(const RVector& theta) const {
    CMatrix f = CMatrix::Zero(dim_, dim_);
    for (std::size_t k = 0; k < size(); ++k) {
      for (int t = 0; t < count_[k]; ++t)
        f(terms_[k][t].row, terms_[k][t].col) += theta[static_cast<Eigen::Index>(k)] * terms_[k][t].coef;
    }
    return f;
  }

  /// H[k][l] = Re Tr(B E_k B E_l), the Hessian of -ln det at F = B^{-1}.
  RMatrix logdet_hessian(const CMatrix& b) const {
    const auto n = static_cast<Eigen::Index>(size());
    RMatrix h(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = k; l < n; ++l) {
        Complex s = 0.0;
        const auto& tk = terms_[static_cast<std::size_t>(k)];
        const auto& tl = terms_[static_cast<std::size_t>(l)];
        for (int a = 0; a < count_[static_cast<std::size_t>(k)]; ++a)
          for (int c = 0; c < count_[static_cast<std::size_t>(l)]; ++c)
            s += tk[a].coef * tl[c].coef * b(tl[c].col, tk[a].row) * b(tk[a].col, tl[c].row);
        h(k, l) = h(l, k) = s.real();
      }
    }
    return h;
  }

  RVector trace_vector() const {
    RVector a = RVector::Zero(static_cast<Eigen::Index>(size()));
    a.head(dim_).setOnes();
    return a;
  }

 private:
  void add(std::array<BasisTerm, 2> t, int n) {
    terms_.push_back(t);
    count_.push_back(n);
  }

  Eigen::Index dim_;
  std::vector<std::array<BasisTerm, 2>> terms_;
  std::vector<int> count_;
};

double min_eigenvalue(const CMatrix& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(f, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

class CallableObjective final : public DensityObjective {
 public:
  explicit CallableObjective(std::vector<DensityPayoff> p) : payoffs_(std::move(p)) {}

  std::size_t count() const override { return payoffs_.size(); }

  void values(const CMatrix& f, std::span<double> out) const override {
    for (std::size_t x = 0; x < payoffs_.size(); ++x) out[x] = payoffs_[x].value(f);
  }

  void gradients(const CMatrix& f, std::vector<CMatrix>& out) const override {
    bool all = true;
    for (const auto& p : payoffs_) all = all && static_cast<bool>(p.gradient);
    if (!all) DensityObjective::gradients(f, out);
    out.resize(payoffs_.size());
    for (std::size_t x = 0; x < payoffs_.size(); ++x)
      if (payoffs_[x].gradient) out[x] = payoffs_[x].gradient(f);
  }

 private:
  std::vector<DensityPayoff> payoffs_;
};

class OverlapObjective final : public DensityObjective {
 public:
  explicit OverlapObjective(std::vector<CMatrix> u) : u_(std::move(u)) {}

  std::size_t count() const override { return u_.size(); }

  void values(const CMatrix& f, std::span<double> out) const override {
    for (std::size_t x = 0; x < u_.size(); ++x) {
      const double t = trace_product(u_[x], f);
      out[x] = t > 0.0 ? -std::log(t) : kInf;
    }
  }

  void gradients(const CMatrix& f, std::vector<CMatrix>& out) const override {
    out.resize(u_.size());
    for (std::size_t x = 0; x < u_.size(); ++x) out[x] = -u_[x] / trace_product(u_[x], f);
  }

  CMatrix hessian_apply(const CMatrix& f, std::size_t x, const CMatrix& dir) const override {
    const double t = trace_product(u_[x], f);
    return u_[x] * (trace_product(u_[x], dir) / (t * t));
  }

 private:
  std::vector<CMatrix> u_;
};

}  // namespace

void DensityObjective::gradients(const CMatrix& f, std::vector<CMatrix>& out) const {
  const std::size_t k = count();
  const HermitianBasis basis(f.rows(), DensityDomain::full);
  const double h = std::min(1e-6, 0.5 * min_eigenvalue(f));
  std::vector<double> up(k), down(k);
  std::vector<RVector> coords(k, RVector(static_cast<Eigen::Index>(basis.size())));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const CMatrix e = basis.element(b);
    values(f + h * e, up);
    values(f - h * e, down);
    for (std::size_t x = 0; x < k; ++x)
      coords[x][static_cast<Eigen::Index>(b)] = (up[x] - down[x]) / (2.0 * h);
  }
  out.resize(k);
  for (std::size_t x = 0; x < k; ++x) out[x] = basis.compose(coords[x]);
}

CMatrix DensityObjective::hessian_apply(const CMatrix& f, std::size_t x,
                                        const CMatrix& dir) const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(dir, Eigen::EigenvaluesOnly);
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  const double h = std::min(1e-6, 0.5 * min_eigenvalue(f)) / scale;
  std::vector<CMatrix> up, down;
  gradients(f + h * dir, up);
  gradients(f - h * dir, down);
  return (up[x] - down[x]) / (2.0 * h);
}

std::unique_ptr<DensityObjective> make_objective(std::vector<DensityPayoff> payoffs) {
  return std::make_unique<CallableObjective>(std::move(payoffs));
}

std::unique_ptr<DensityObjective> make_overlap_objective(std::vector<CMatrix> projectors) {
  return std::make_unique<OverlapObjective>(std::move(projectors));
}

double density_lower_bound(const DensityObjective& objective, const CMatrix& f,
                           const RVector& weights, DensityDomain domain) {
  const std::size_t k = objective.count();
  std::vector<double> vals(k);
  objective.values(f, vals);
  std::vector<CMatrix> grads;
  objective.gradients(f, grads);
  CMatrix g = CMatrix::Zero(f.rows(), f.cols());
  double base = 0.0;
  for (std::size_t x = 0; x < k; ++x) {
    const double w = weights[static_cast<Eigen::Index>(x)];
    if (w == 0.0) continue;
    base += w * vals[x];
    g += w * grads[x];
  }
  double lowest;
  if (domain == DensityDomain::full) {
    lowest = min_eigenvalue((g + g.adjoint()) * 0.5);
  } else {
    lowest = g.diagonal().real().minCoeff();
  }
  return base + lowest - trace_product(g, f);
}

namespace {

struct Tracker {
  CMatrix best_f;
  double best_upper = kInf;
  double best_lower = -kInf;
  RVector weights;

  void offer(const DensityObjective& obj, const CMatrix& raw, const RVector& w, DensityDomain dom) {
    const CMatrix f = (raw + raw.adjoint()) / (2.0 * raw.trace().real());
    std::vector<double> vals(obj.count());
    obj.values(f, vals);
    const double upper = *std::max_element(vals.begin(), vals.end());
    if (upper < best_upper) {
      best_upper = upper;
      best_f = f;
    }
    const double lower = density_lower_bound(obj, f, w, dom);
    if (lower > best_lower) {
      best_lower = lower;
      weights = w;
    }
  }

  double gap() const { return std::max(0.0, best_upper - best_lower); }
};

DensityResult finish(const Tracker& tr, int iterations, const SolverConfig& cfg) {
  DensityResult out{DensityOperator::trusted(tr.best_f / tr.best_f.trace().real()),
                    ProbabilityDistribution::trusted(tr.weights),
                    {},
                    tr.best_lower};
  out.report.value = tr.best_upper;
  out.report.gap = tr.gap();
  out.report.iterations = iterations;
  out.report.converged = out.report.gap <= cfg.tolerance;
  return out;
}

bool positive_definite(const CMatrix& f, double& logdet) {
  Eigen::LLT<CMatrix> llt(f);
  if (llt.info() != Eigen::Success) return false;
  const RVector d = llt.matrixLLT().diagonal().real();
  if ((d.array() <= 0.0).any()) return false;
  logdet = 2.0 * d.array().log().sum();
  return std::isfinite(logdet);
}

RVector solve_kkt(const RMatrix& kkt, const RVector& rhs, Eigen::Index n) {
  // Jacobi scaling keeps the trace row meaningful when F nears the boundary.
  RVector scale = RVector::Ones(kkt.rows());
  for (Eigen::Index i = 0; i < n; ++i)
    scale[i] = 1.0 / std::sqrt(std::max(std::abs(kkt(i, i)), 1e-300));
  const RMatrix scaled = scale.asDiagonal() * kkt * scale.asDiagonal();
  const auto lu = scaled.fullPivLu();
  RVector sol = scale.asDiagonal() * lu.solve(scale.asDiagonal() * rhs);
  sol += scale.asDiagonal() * lu.solve(scale.asDiagonal() * (rhs - kkt * sol));
  return sol;
}

/// A few Newton steps on F -> sum_x w_x D_x(F). The linearized bound is exact to
/// second order at that minimizer, while the barrier center is only first-order
/// accurate once t - D_x falls to rounding level.
CMatrix polish_for_weights(const DensityObjective& obj, const HermitianBasis& basis, CMatrix f,
                           const RVector& w) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const std::size_t k = obj.count();
  const RVector trace_vec = basis.trace_vector();
  std::vector<double> vals(k);
  std::vector<CMatrix> grads;
  auto weighted = [&](const CMatrix& fm) {
    double logdet = 0.0;
    if (!positive_definite(fm, logdet)) return kInf;
    obj.values(fm, vals);
    double v = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      const double wx = w[static_cast<Eigen::Index>(x)];
      if (wx > 0.0) v += wx * vals[x];
    }
    return std::isnan(v) ? kInf : v;
  };
  RVector theta = basis.coords(f);
  double current = weighted(f);
  for (int step = 0; step < 8; ++step) {
    obj.gradients(f, grads);
    RVector g = RVector::Zero(n);
    RMatrix h = RMatrix::Zero(n, n);
    for (std::size_t x = 0; x < k; ++x) {
      const double wx = w[static_cast<Eigen::Index>(x)];
      if (wx <= 0.0) continue;
      g += wx * basis.coords(grads[x]);
      for (Eigen::Index l = 0; l < n; ++l)
        h.col(l) += wx * basis.coords(obj.hessian_apply(f, x, basis.element(static_cast<std::size_t>(l))));
    }
    h = (h + h.transpose()).eval() * 0.5;
    h.diagonal().array() += 1e-14 * std::max(h.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    RMatrix kkt = RMatrix::Zero(n + 1, n + 1);
    kkt.topLeftCorner(n, n) = h;
    kkt.block(0, n, n, 1) = trace_vec;
    kkt.block(n, 0, 1, n) = trace_vec.transpose();
    RVector rhs = RVector::Zero(n + 1);
    rhs.head(n) = -g;
    const RVector d = solve_kkt(kkt, rhs, n).head(n);
    if (!d.allFinite() || !(-g.dot(d) > 0.0)) break;
    bool moved = false;
    for (double a = 1.0; a > 1e-6; a *= 0.5) {
      RVector cand = theta + a * d;
      cand.head(basis.dim()).array() += (1.0 - trace_vec.dot(cand)) / static_cast<double>(basis.dim());
      const CMatrix fc = basis.compose(cand);
      const double v = weighted(fc);
      if (v <= current) {
        moved = v < current;
        theta = cand;
        f = fc;
        current = v;
        break;
      }
    }
    if (!moved) break;
  }
  return f;
}

DensityResult barrier_solve(const DensityObjective& obj, Eigen::Index dim, const SolverConfig& cfg,
                            DensityDomain domain) {
  const HermitianBasis basis(dim, domain);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const std::size_t k = obj.count();
  const RVector trace_vec = basis.trace_vector();

  CMatrix f = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  RVector theta = basis.coords(f);
  std::vector<double> vals(k);
  obj.values(f, vals);
  double t = *std::max_element(vals.begin(), vals.end()) + 1.0;

  const double m = static_cast<double>(k) + static_cast<double>(dim);
  double s = m;
  Tracker tracker;
  int newton_total = 0;

  std::vector<CMatrix> grads;
  std::vector<double> trial_vals(k);

  auto barrier_value = [&](const CMatrix& fm, double tm, std::vector<double>& v, double& phi) {
    double logdet = 0.0;
    if (!positive_definite(fm, logdet)) return false;
    obj.values(fm, v);
    double sum = 0.0;
    for (double d : v) {
      if (!(tm - d > 0.0)) return false;
      sum += std::log(tm - d);
    }
    phi = s * tm - sum - logdet;
    return std::isfinite(phi);
  };

  while (newton_total < cfg.max_iterations) {
    // Centering.
    for (int inner = 0; inner < 60 && newton_total < cfg.max_iterations; ++inner, ++newton_total) {
      double phi0 = 0.0;
      if (!barrier_value(f, t, vals, phi0)) break;
      obj.gradients(f, grads);
      const CMatrix finv = f.llt().solve(CMatrix::Identity(dim, dim));

      RVector g_theta = -basis.coords(finv);
      double g_t = s;
      RMatrix h_tt_theta = basis.logdet_hessian(finv);
      RVector h_t_theta = RVector::Zero(n);
      double h_tt = 0.0;
      for (std::size_t x = 0; x < k; ++x) {
        const double r = t - vals[x];
        const RVector c = basis.coords(grads[x]);
        g_theta += c / r;
        g_t -= 1.0 / r;
        h_tt += 1.0 / (r * r);
        h_t_theta -= c / (r * r);
        h_tt_theta += c * c.transpose() / (r * r);
        for (Eigen::Index l = 0; l < n; ++l) {
          const CMatrix hv = obj.hessian_apply(f, x, basis.element(static_cast<std::size_t>(l)));
          h_tt_theta.col(l) += basis.coords(hv) / r;
        }
      }
      h_tt_theta = (h_tt_theta + h_tt_theta.transpose()).eval() * 0.5;

      // KKT system for (dtheta, dt, nu) with the trace constraint a . dtheta = 0.
      RMatrix kkt = RMatrix::Zero(n + 2, n + 2);
      kkt.topLeftCorner(n, n) = h_tt_theta;
      kkt.block(0, n, n, 1) = h_t_theta;
      kkt.block(n, 0, 1, n) = h_t_theta.transpose();
      kkt(n, n) = h_tt;
      kkt.block(0, n + 1, n, 1) = trace_vec;
      kkt.block(n + 1, 0, 1, n) = trace_vec.transpose();
      RVector rhs = RVector::Zero(n + 2);
      rhs.head(n) = -g_theta;
      rhs[n] = -g_t;
      const RVector sol = solve_kkt(kkt, rhs, n + 1);
      const RVector d_theta = sol.head(n);
      const double d_t = sol[n];
      const double decrement = -(g_theta.dot(d_theta) + g_t * d_t);
      if (!(decrement > 1e-12)) break;

      double step = 1.0;
      bool accepted = false;
      while (step > 1e-14) {
        RVector theta_new = theta + step * d_theta;
        theta_new.head(dim).array() += (1.0 - trace_vec.dot(theta_new)) / static_cast<double>(dim);
        const CMatrix f_new = basis.compose(theta_new);
        const double t_new = t + step * d_t;
        double phi = 0.0;
        // Near the center the barrier value drowns in rounding (s t is large), so
        // small-decrement steps are taken in full once feasible.
        if (barrier_value(f_new, t_new, trial_vals, phi) &&
            (decrement < 0.1 || phi <= phi0 - 0.25 * step * decrement)) {
          theta = theta_new;
          f = f_new;
          t = t_new;
          vals = trial_vals;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      if (decrement < 1e-10) break;
    }

    // Central-path dual weights: p_x = 1 / (s (t - D_x)).
    obj.values(f, vals);
    RVector w(static_cast<Eigen::Index>(k));
    for (std::size_t x = 0; x < k; ++x) w[static_cast<Eigen::Index>(x)] = 1.0 / (s * (t - vals[x]));
    w /= w.sum();
    tracker.offer(obj, f, w, domain);
    if (tracker.gap() > cfg.tolerance) tracker.offer(obj, polish_for_weights(obj, basis, f, w), w, domain);
    if (tracker.gap() <= cfg.tolerance) break;
    if (s > 1e15) break;
    s *= 8.0;
  }
  return finish(tracker, newton_total, cfg);
}

DensityResult mirror_descent_solve(const DensityObjective& obj, Eigen::Index dim,
                                   const SolverConfig& cfg, DensityDomain domain) {
  const std::size_t k = obj.count();
  CMatrix log_potential = CMatrix::Zero(dim, dim);
  CMatrix f = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  CMatrix f_sum = CMatrix::Zero(dim, dim);
  RVector active = RVector::Zero(static_cast<Eigen::Index>(k));
  std::vector<double> vals(k);
  std::vector<CMatrix> grads;
  Tracker tracker;
  int averaged = 0;
  int tail_start = 1;
  int it = 1;
  for (; it <= cfg.max_iterations; ++it) {
    obj.values(f, vals);
    const auto top = static_cast<std::size_t>(
        std::max_element(vals.begin(), vals.end()) - vals.begin());
    obj.gradients(f, grads);
    CMatrix g = grads[top];
    if (domain == DensityDomain::diagonal) g = CMatrix(g.diagonal().asDiagonal());
    const double gnorm = std::max(max_abs(g), 1e-12);
    log_potential -= (1.0 / (gnorm * std::sqrt(static_cast<double>(it)))) * g;
    const EigenDecomposition e = eig_hermitian_unchecked(log_potential);
    const double shift = e.values.maxCoeff();
    f = e.map([shift](double l) { return std::exp(l - shift); });
    f /= f.trace().real();

    // Average over the last half of the iterates.
    if (it >= 2 * tail_start) {
      tail_start = it;
      f_sum.setZero();
      active.setZero();
      averaged = 0;
    }
    f_sum += f;
    active[static_cast<Eigen::Index>(top)] += 1.0;
    ++averaged;
    if (it % 50 == 0) {
      const CMatrix avg = f_sum / static_cast<double>(averaged);
      tracker.offer(obj, avg, active / active.sum(), domain);
      if (tracker.gap() <= cfg.tolerance) break;
    }
  }
  if (tracker.best_upper == kInf) {
    tracker.offer(obj, f_sum / std::max(averaged, 1), active / std::max(active.sum(), 1.0), domain);
  }
  return finish(tracker, std::min(it, cfg.max_iterations), cfg);
}

}  // namespace

DensityResult minimize_convex_density(const DensityObjective& objective, Eigen::Index dim,
                                      const SolverConfig& cfg, DensityDomain domain,
                                      DensityMethod method) {
  cfg.validate();
  if (dim < 1) throw ValidationError("density dimension must be positive");
  if (objective.count() == 0) throw ValidationError("min-max needs at least one payoff");

  const CMatrix mixed = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  std::vector<double> vals(objective.count());
  objective.values(mixed, vals);
  if (std::any_of(vals.begin(), vals.end(), [](double v) { return !std::isfinite(v); })) {
    DensityResult out{DensityOperator::trusted(mixed),
                      ProbabilityDistribution::uniform(static_cast<Eigen::Index>(vals.size())),
                      {},
                      kInf};
    out.report.value = kInf;
    out.report.converged = true;
    return out;
  }

  if (method == DensityMethod::automatic) {
    const Eigen::Index params = domain == DensityDomain::full ? dim * dim : dim;
    method = params <= 256 ? DensityMethod::barrier : DensityMethod::mirror_descent;
  }
  return method == DensityMethod::barrier ? barrier_solve(objective, dim, cfg, domain)
                                          : mirror_descent_solve(objective, dim, cfg, domain);
}

DensityResult minimize_convex_density(std::vector<DensityPayoff> payoffs, Eigen::Index dim,
                                      const SolverConfig& cfg, DensityDomain domain) {
  const auto obj = make_objective(std::move(payoffs));
  return minimize_convex_density(*obj, dim, cfg, domain);
}

// ===========================================================================
// Supremum over rho
// ===========================================================================

RhoSupremum sup_over_rho(const std::function<double(double)>& e0, double rate, double rho_max,
                         const SolverConfig& cfg, std::optional<double> infinite_below,
                         int grid_points) {
  cfg.validate();
  if (!(rho_max > 1e-3)) throw DomainError("rho_max must exceed 1e-3");
  if (grid_points < 2) throw DomainError("rho grid needs at least two points");

  std::vector<double> rhos{0.0};
  const double lo = std::log(1e-3), hi = std::log(rho_max);
  for (int i = 0; i < grid_points; ++i)
    rhos.push_back(std::exp(lo + (hi - lo) * i / (grid_points - 1)));
  rhos.back() = rho_max;

  auto objective = [&](double rho) { return rho == 0.0 ? 0.0 : e0(rho) - rho * rate; };

  if (infinite_below && rate < *infinite_below) return {kInf, rho_max};

  std::vector<double> vals(rhos.size());
  for (std::size_t i = 0; i < rhos.size(); ++i) vals[i] = objective(rhos[i]);

  const std::size_t last = rhos.size() - 1;
  if (!infinite_below) {
    const bool increasing = vals[last] > vals[last - 1];
    if (increasing && rate < e0(rho_max) / rho_max - 1e-6) return {kInf, rho_max};
  }

  const auto best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  double a = rhos[best == 0 ? 0 : best - 1];
  double b = rhos[std::min(best + 1, last)];
  RhoSupremum out{vals[best], rhos[best]};

  // Golden section on the bracketing grid cell pair.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  // the objective is smooth at its maximum, so a bracket of sqrt(tol) is enough
  const double width = std::max(1e-12, std::sqrt(cfg.tolerance));
  for (int it = 0; it < 200 && (b - a) > width * std::max(1.0, b); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  if (fc > out.value) out = {fc, c};
  if (fd > out.value) out = {fd, d};
  // E_0(rho) - rho R cancels badly at large rho; below rounding it is zero
  const double scale = std::abs(out.value + out.rho * rate) + out.rho * rate;
  if (out.value <= 16.0 * std::numeric_limits<double>::epsilon() * scale) out = {0.0, 0.0};
  return out;
}

// ===========================================================================
// Cones and LPs
// ===========================================================================

PsdMatrix psd_project(const HermitianMatrix& h) {
  const EigenDecomposition e = eig_hermitian(h);
  return PsdMatrix::trusted(e.map([](double l) { return std::max(l, 0.0); }));
}

MinimaxLp solve_minimax_lp(const RMatrix& a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  if (rows == 0 || cols == 0) throw ValidationError("matrix game must be nonempty");
  if ((a.array() < 0.0).any()) throw ValidationError("matrix game entries must be nonnegative");
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (a.col(j).maxCoeff() <= 0.0) {
      throw ValidationError("matrix game column " + std::to_string(j) + " is identically zero");
    }
  }

  // max 1'u  s.t.  A u + s = 1, u, s >= 0. Tableau columns: u (cols), s (rows), rhs.
  constexpr double eps = 1e-12;
  const Eigen::Index width = cols + rows;
  RMatrix tab = RMatrix::Zero(rows, width + 1);
  tab.leftCols(cols) = a;
  tab.middleCols(cols, rows).setIdentity();
  tab.col(width).setOnes();
  RVector reduced = RVector::Zero(width);
  reduced.head(cols).setOnes();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = cols + i;

  for (int guard = 0; guard < 100000; ++guard) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < width; ++j) {
      if (reduced[j] > eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best_ratio = kInf;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double piv = tab(i, enter);
      if (piv <= eps) continue;
      const double ratio = tab(i, width) / piv;
      if (ratio < best_ratio - eps ||
          (std::abs(ratio - best_ratio) <= eps &&
           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) throw ValidationError("matrix game LP is unbounded");
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != leave && tab(i, enter) != 0.0) tab.row(i) -= tab(i, enter) * tab.row(leave);
    }
    reduced -= reduced[enter] * tab.row(leave).head(width).transpose();
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  RVector u = RVector::Zero(cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index b = basis[static_cast<std::size_t>(i)];
    if (b < cols) u[b] = tab(i, width);
  }
  // Slack reduced costs are -y at optimality.
  RVector y = (-reduced.segment(cols, rows)).cwiseMax(0.0);

  MinimaxLp out;
  out.column_strategy = u / u.sum();
  out.row_strategy = y / y.sum();
  const double upper = (a * out.column_strategy).maxCoeff();
  const double lower = (a.transpose() * out.row_strategy).minCoeff();
  out.value = upper;
  out.gap = std::max(0.0, upper - lower);
  return out;
}

}  // namespace sptheta
