#include "sptheta/exponents.hpp"

#include "sptheta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace sptheta {

namespace {

void require_rho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be finite and >= 0, got " + std::to_string(rho));
  }
}

void require_input_size(Eigen::Index expected, const ProbabilityDistribution& p) {
  if (p.size() != expected) {
    throw ValidationError("input distribution has " + std::to_string(p.size()) +
                          " entries, channel has " + std::to_string(expected) + " inputs");
  }
}

RMatrix elementwise_power(const RMatrix& w, double a) {
  return w.unaryExpr([a](double v) { return v > 0.0 ? std::pow(v, a) : 0.0; });
}

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -infinity;
  const double top = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - top);
  return top + std::log(s);
}

// ---------------------------------------------------------------------------
// Gallager function kernels with precomputed powers

// At large rho every W^s (s = 1/(1+rho)) sits near 1 and the power 1+rho
// amplifies rounding, so the kernels carry D = W^s - 1 through expm1/log1p.
// Gradients are returned up to an additive constant, which the simplex ignores.

double power_minus_one(double v, double s) { return v > 0.0 ? std::expm1(s * std::log(v)) : -1.0; }

// log(1 + t) given both t and the directly summed 1 + t
double log_near_one(double one_plus_t, double t) {
  return one_plus_t > 0.5 ? std::log1p(t) : std::log(one_plus_t);
}

struct ClassicalGallager {
  RMatrix wa;  // W^(1/(1+rho))
  RMatrix dm;  // W^(1/(1+rho)) - 1
  double rho;

  ClassicalGallager(const ClassicalChannel& w, double r)
      : wa(elementwise_power(w.matrix(), 1.0 / (1.0 + r))),
        dm(w.matrix().unaryExpr([r](double v) { return power_minus_one(v, 1.0 / (1.0 + r)); })),
        rho(r) {}

  // Returns E_0 and optionally its gradient.
  // p is renormalized: a sum off by one ulp would be amplified by 1 + rho
  double eval(const RVector& p_in, RVector* grad) const {
    const RVector p = p_in / p_in.sum();
    const RVector s = wa.transpose() * p;
    const RVector t = dm.transpose() * p;
    RVector logs = RVector::Zero(s.size());
    std::vector<double> terms;
    for (Eigen::Index y = 0; y < s.size(); ++y) {
      if (s[y] <= 0.0) continue;
      logs[y] = log_near_one(s[y], t[y]);
      terms.push_back((1.0 + rho) * logs[y]);
    }
    const double log_f = log_sum_exp(terms);
    if (grad) {
      RVector weight = RVector::Zero(s.size());
      for (Eigen::Index y = 0; y < s.size(); ++y)
        if (s[y] > 0.0) weight[y] = std::exp((1.0 + rho) * logs[y] - log_f) / s[y];
      // wa = 1 + dm; the 1 contributes the same constant to every input
      *grad = -(1.0 + rho) * (dm * weight);
    }
    return -log_f;
  }
};

struct QuantumGallager {
  std::vector<CMatrix> dm;  // S_x^(1/(1+rho)) - I
  double rho;

  QuantumGallager(const CQChannel& ch, double r) : rho(r) {
    const double a = 1.0 / (1.0 + r);
    for (const auto& s : ch.states()) {
      const EigenDecomposition e = eig_hermitian(s);
      const double zero = tol::spectrum_zero * std::max(0.0, e.values.maxCoeff());
      dm.push_back(e.map([a, zero](double l) { return l <= zero ? -1.0 : power_minus_one(l, a); }));
    }
  }

  double eval(const RVector& p_in, RVector* grad) const {
    const RVector p = p_in / p_in.sum();
    const auto d = dm.front().rows();
    CMatrix b = CMatrix::Zero(d, d);
    for (std::size_t x = 0; x < dm.size(); ++x) b += p[static_cast<Eigen::Index>(x)] * dm[x];
    const EigenDecomposition e = eig_hermitian_unchecked(b);
    RVector logs = RVector::Zero(d);
    std::vector<double> terms;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double lambda = 1.0 + e.values[i];
      if (lambda <= 0.0) continue;
      logs[i] = log_near_one(lambda, e.values[i]);
      terms.push_back((1.0 + rho) * logs[i]);
    }
    const double log_f = log_sum_exp(terms);
    if (grad) {
      RVector weight = RVector::Zero(d);
      for (Eigen::Index i = 0; i < d; ++i)
        if (1.0 + e.values[i] > 0.0) weight[i] = std::exp(rho * logs[i] - log_f);
      grad->resize(static_cast<Eigen::Index>(dm.size()));
      for (std::size_t x = 0; x < dm.size(); ++x) {
        const CMatrix m = e.vectors.adjoint() * dm[x] * e.vectors;
        (*grad)[static_cast<Eigen::Index>(x)] = -(1.0 + rho) * weight.dot(m.diagonal().real());
      }
    }
    return -log_f;
  }
};

template <typename Kernel>
ExponentPoint maximize_gallager(const Kernel& k, Eigen::Index inputs, double rho,
                                const SolverConfig& cfg) {
  ExponentPoint out;
  out.rho = rho;
  if (rho == 0.0) {
    cfg.validate();
    out.optimal_input = ProbabilityDistribution::uniform(inputs);
    out.report.converged = true;
    return out;
  }
  const SimplexResult r = maximize_concave_simplex(
      [&k](const RVector& p) { return k.eval(p, nullptr); },
      [&k](const RVector& p) {
        RVector g;
        k.eval(p, &g);
        return g;
      },
      inputs, cfg);
  out.e0 = r.report.value;
  out.optimal_input = r.argmax;
  out.report = r.report;
  out.restart_spread = r.restart_spread;
  return out;
}

// ---------------------------------------------------------------------------
// Divided differences of t -> t^b

struct PowerFunction {
  double b;
  double f(double t) const { return std::pow(t, b); }
  double d1(double t) const { return b * std::pow(t, b - 1.0); }
  double d2(double t) const { return b * (b - 1.0) * std::pow(t, b - 2.0); }

  double first(double x, double y) const {
    if (std::abs(x - y) <= 1e-6 * std::max(x, y)) return d1(0.5 * (x + y));
    return (f(x) - f(y)) / (x - y);
  }

  double second(double a, double b2, double c) const {
    double v[3] = {a, b2, c};
    std::sort(v, v + 3);
    const double x = v[0], y = v[1], z = v[2];
    const double near = 1e-4 * z;
    if (z - x <= near) return 0.5 * d2(y);
    if (y - x <= near) {
      const double m = 0.5 * (x + y);
      return (first(m, z) - d1(m)) / (z - m);
    }
    if (z - y <= near) {
      const double m = 0.5 * (y + z);
      return (d1(m) - first(x, m)) / (m - x);
    }
    return (first(x, y) - first(y, z)) / (x - z);
  }
};

// ---------------------------------------------------------------------------
// Payoff families

/// D_alpha(S_x || F) = ln Tr(S_x^alpha F^beta) / (alpha - 1).
class QuantumRenyiObjective final : public DensityObjective {
 public:
  QuantumRenyiObjective(const CQChannel& ch, double alpha) : alpha_(alpha), pow_{1.0 - alpha} {
    for (const auto& s : ch.states()) sa_.push_back(mat_pow(s, alpha).matrix());
  }

  std::size_t count() const override { return sa_.size(); }

  void values(const CMatrix& f, std::span<double> out) const override {
    const Cache& c = prepare(f);
    for (std::size_t x = 0; x < sa_.size(); ++x)
      out[x] = c.t[x] > overlap_floor ? std::log(c.t[x]) / (alpha_ - 1.0) : infinity;
  }

  void gradients(const CMatrix& f, std::vector<CMatrix>& out) const override {
    const Cache& c = prepare(f);
    out.resize(sa_.size());
    for (std::size_t x = 0; x < sa_.size(); ++x) out[x] = gradient_t(c, x) / ((alpha_ - 1.0) * c.t[x]);
  }

  CMatrix hessian_apply(const CMatrix& f, std::size_t x, const CMatrix& dir) const override {
    const Cache& c = prepare(f);
    const auto d = c.lam.size();
    const CMatrix h = c.v.adjoint() * dir * c.v;
    const CMatrix& m = c.m[x];
    CMatrix g2 = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        Complex s = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
          s += m(b, i) * c.k2[idx(d, i, a, b)] * h(i, a);
          s += h(b, i) * c.k2[idx(d, a, b, i)] * m(i, a);
        }
        g2(b, a) = s;
      }
    }
    const CMatrix grad_t = gradient_t(c, x);
    const double t = c.t[x];
    const double dt = trace_product(grad_t, dir);
    const CMatrix hess_t = c.v * g2 * c.v.adjoint();
    return (hess_t / t - grad_t * (dt / (t * t))) / (alpha_ - 1.0);
  }

 private:
  struct Cache {
    CMatrix f;
    RVector lam;
    CMatrix v;
    RMatrix k1;
    std::vector<double> k2;
    std::vector<CMatrix> m;
    std::vector<double> t;
  };

  static std::size_t idx(Eigen::Index d, Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    return static_cast<std::size_t>((i * d + j) * d + k);
  }

  CMatrix gradient_t(const Cache& c, std::size_t x) const {
    const CMatrix inner = c.k1.cast<Complex>().cwiseProduct(c.m[x]);
    return c.v * inner * c.v.adjoint();
  }

  const Cache& prepare(const CMatrix& f) const {
    if (valid_ && cache_.f.rows() == f.rows() && cache_.f == f) return cache_;
    Cache& c = cache_;
    c.f = f;
    const EigenDecomposition e = eig_hermitian_unchecked(f);
    c.lam = e.values.cwiseMax(1e-300);
    c.v = e.vectors;
    const auto d = c.lam.size();
    c.k1.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) c.k1(i, j) = pow_.first(c.lam[i], c.lam[j]);
    c.k2.assign(static_cast<std::size_t>(d * d * d), 0.0);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k)
          c.k2[idx(d, i, j, k)] = pow_.second(c.lam[i], c.lam[j], c.lam[k]);
    RVector fb(d);
    for (Eigen::Index i = 0; i < d; ++i) fb[i] = pow_.f(c.lam[i]);
    c.m.resize(sa_.size());
    c.t.resize(sa_.size());
    for (std::size_t x = 0; x < sa_.size(); ++x) {
      c.m[x] = c.v.adjoint() * sa_[x] * c.v;
      c.t[x] = fb.dot(c.m[x].diagonal().real());
    }
    valid_ = true;
    return c;
  }

  double alpha_;
  PowerFunction pow_;
  std::vector<CMatrix> sa_;
  mutable Cache cache_;
  mutable bool valid_ = false;
};

/// Diagonal payoffs. Renyi: ln sum_y W^alpha Q^beta / (alpha - 1). KL: sum_y W ln(W/Q).
class ClassicalRadiusObjective final : public DensityObjective {
 public:
  ClassicalRadiusObjective(const ClassicalChannel& w, double alpha)
      : w_(w.matrix()), wa_(elementwise_power(w.matrix(), alpha)), alpha_(alpha) {}

  std::size_t count() const override { return static_cast<std::size_t>(w_.rows()); }

  void values(const CMatrix& f, std::span<double> out) const override {
    const RVector q = f.diagonal().real();
    for (Eigen::Index x = 0; x < w_.rows(); ++x) {
      if (kl()) {
        double s = 0.0;
        for (Eigen::Index y = 0; y < q.size(); ++y) {
          if (w_(x, y) == 0.0) continue;
          if (!(q[y] > 0.0)) {
            s = infinity;
            break;
          }
          s += w_(x, y) * std::log(w_(x, y) / q[y]);
        }
        out[static_cast<std::size_t>(x)] = s;
      } else {
        const double t = renyi_sum(x, q);
        out[static_cast<std::size_t>(x)] = t > 0.0 ? std::log(t) / (alpha_ - 1.0) : infinity;
      }
    }
  }

  void gradients(const CMatrix& f, std::vector<CMatrix>& out) const override {
    const RVector q = f.diagonal().real();
    out.resize(count());
    for (Eigen::Index x = 0; x < w_.rows(); ++x)
      out[static_cast<std::size_t>(x)] = gradient(x, q).cast<Complex>().asDiagonal();
  }

  CMatrix hessian_apply(const CMatrix& f, std::size_t xs, const CMatrix& dir) const override {
    const RVector q = f.diagonal().real();
    const RVector d = dir.diagonal().real();
    const auto x = static_cast<Eigen::Index>(xs);
    RVector h(q.size());
    if (kl()) {
      for (Eigen::Index y = 0; y < q.size(); ++y) h[y] = w_(x, y) / (q[y] * q[y]) * d[y];
    } else {
      const double beta = 1.0 - alpha_;
      const double t = renyi_sum(x, q);
      RVector gt(q.size()), ht(q.size());
      for (Eigen::Index y = 0; y < q.size(); ++y) {
        gt[y] = beta * wa_(x, y) * std::pow(q[y], beta - 1.0);
        ht[y] = beta * (beta - 1.0) * wa_(x, y) * std::pow(q[y], beta - 2.0) * d[y];
      }
      h = (ht / t - gt * (gt.dot(d) / (t * t))) / (alpha_ - 1.0);
    }
    return h.cast<Complex>().asDiagonal();
  }

 private:
  bool kl() const { return alpha_ == 1.0; }

  double renyi_sum(Eigen::Index x, const RVector& q) const {
    double t = 0.0;
    for (Eigen::Index y = 0; y < q.size(); ++y)
      if (wa_(x, y) > 0.0 && q[y] > 0.0) t += wa_(x, y) * std::pow(q[y], 1.0 - alpha_);
    return t;
  }

  RVector gradient(Eigen::Index x, const RVector& q) const {
    RVector g(q.size());
    if (kl()) {
      for (Eigen::Index y = 0; y < q.size(); ++y) g[y] = -w_(x, y) / q[y];
      return g;
    }
    const double beta = 1.0 - alpha_;
    const double t = renyi_sum(x, q);
    for (Eigen::Index y = 0; y < q.size(); ++y)
      g[y] = beta * wa_(x, y) * std::pow(q[y], beta - 1.0) / ((alpha_ - 1.0) * t);
    return g;
  }

  RMatrix w_;
  RMatrix wa_;
  double alpha_;
};

RadiusResult to_radius(const DensityResult& d, double alpha, bool classical) {
  RadiusResult out;
  out.alpha = alpha;
  out.value = d.report.value;
  out.gap = d.report.gap;
  out.report = d.report;
  if (classical) {
    out.center = ProbabilityDistribution::trusted(d.argmin.matrix().diagonal().real());
  } else {
    out.center = d.argmin;
  }
  return out;
}

std::vector<CMatrix> support_diagonals(const ClassicalChannel& w) {
  std::vector<CMatrix> u;
  for (Eigen::Index x = 0; x < w.input_size(); ++x) {
    RVector ind = (w.row(x).array() > 0.0).cast<double>();
    u.push_back(ind.cast<Complex>().asDiagonal());
  }
  return u;
}

// ---------------------------------------------------------------------------
// Sphere packing

using E0Function = std::function<double(double)>;

E0Function memoized(std::function<double(double)> raw) {
  auto cache = std::make_shared<std::map<double, double>>();
  return [raw = std::move(raw), cache](double rho) {
    const auto it = cache->find(rho);
    if (it != cache->end()) return it->second;
    const double v = raw(rho);
    cache->emplace(rho, v);
    return v;
  };
}

void require_rate(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("rate must be finite and >= 0, got " + std::to_string(rate));
  }
}

SpherePackingCurve curve_from(const E0Function& e0, double r_inf, const std::vector<double>& rates,
                              const SolverConfig& cfg, double rho_max) {
  SpherePackingCurve out;
  out.r_inf = r_inf;
  for (double r : rates) {
    require_rate(r);
    out.points.push_back({r, sup_over_rho(e0, r, rho_max, cfg, r_inf).value});
  }
  return out;
}

// R_inf values whose optimality is certified only within `slack` get a
// conservative threshold so that +infinity is never claimed wrongly.
double classical_threshold(const ClassicalChannel& w) { return c_fb(w).value - 1e-9; }

double quantum_threshold(const CQChannel& ch, const SolverConfig& cfg) {
  const RadiusResult r = r_inf_quantum(ch, cfg);
  return r.value - r.gap - 1e-9;
}

}  // namespace

// ===========================================================================
// Gallager function

double e0_classical(const ClassicalChannel& w, const ProbabilityDistribution& p, double rho) {
  require_rho(rho);
  require_input_size(w.input_size(), p);
  if (rho == 0.0) return 0.0;
  return ClassicalGallager(w, rho).eval(p.values(), nullptr);
}

double e0_quantum(const CQChannel& ch, const ProbabilityDistribution& p, double rho) {
  require_rho(rho);
  require_input_size(ch.input_size(), p);
  if (rho == 0.0) return 0.0;
  return QuantumGallager(ch, rho).eval(p.values(), nullptr);
}

ExponentPoint e0_max(const ClassicalChannel& w, double rho, const SolverConfig& cfg) {
  require_rho(rho);
  return maximize_gallager(ClassicalGallager(w, rho), w.input_size(), rho, cfg);
}

ExponentPoint e0_max(const CQChannel& ch, double rho, const SolverConfig& cfg) {
  require_rho(rho);
  return maximize_gallager(QuantumGallager(ch, rho), ch.input_size(), rho, cfg);
}

double r_rho_primal(const ClassicalChannel& w, double rho, const SolverConfig& cfg) {
  if (!(rho > 0.0)) throw DomainError("r_rho_primal needs rho > 0");
  return e0_max(w, rho, cfg).e0 / rho;
}

double r_rho_primal(const CQChannel& ch, double rho, const SolverConfig& cfg) {
  if (!(rho > 0.0)) throw DomainError("r_rho_primal needs rho > 0");
  return e0_max(ch, rho, cfg).e0 / rho;
}

// ===========================================================================
// Sphere packing

double esp(const ClassicalChannel& w, double rate, const SolverConfig& cfg, double rho_max) {
  return esp_curve(w, {rate}, cfg, rho_max).points.front().esp;
}

double esp(const CQChannel& ch, double rate, const SolverConfig& cfg, double rho_max) {
  return esp_curve(ch, {rate}, cfg, rho_max).points.front().esp;
}

SpherePackingCurve esp_curve(const ClassicalChannel& w, const std::vector<double>& rates,
                             const SolverConfig& cfg, double rho_max) {
  cfg.validate();
  const E0Function e0 = memoized([&](double rho) { return e0_max(w, rho, cfg).e0; });
  return curve_from(e0, classical_threshold(w), rates, cfg, rho_max);
}

SpherePackingCurve esp_curve(const CQChannel& ch, const std::vector<double>& rates,
                             const SolverConfig& cfg, double rho_max) {
  cfg.validate();
  const E0Function e0 = memoized([&](double rho) { return e0_max(ch, rho, cfg).e0; });
  return curve_from(e0, quantum_threshold(ch, cfg), rates, cfg, rho_max);
}

// ===========================================================================
// Renyi radii

RadiusResult radius_solve(const ClassicalChannel& w, double alpha, const SolverConfig& cfg) {
  require_open_unit(alpha, "radius_solve");
  const ClassicalRadiusObjective obj(w, alpha);
  return to_radius(minimize_convex_density(obj, w.output_size(), cfg, DensityDomain::diagonal),
                   alpha, true);
}

RadiusResult radius_solve(const CQChannel& ch, double alpha, const SolverConfig& cfg) {
  require_open_unit(alpha, "radius_solve");
  const QuantumRenyiObjective obj(ch, alpha);
  return to_radius(minimize_convex_density(obj, ch.dim(), cfg), alpha, false);
}

std::unique_ptr<DensityObjective> make_renyi_objective(const CQChannel& ch, double alpha) {
  require_open_unit(alpha, "make_renyi_objective");
  return std::make_unique<QuantumRenyiObjective>(ch, alpha);
}

std::unique_ptr<DensityObjective> make_renyi_objective(const ClassicalChannel& w, double alpha) {
  if (alpha != 1.0) require_open_unit(alpha, "make_renyi_objective");
  return std::make_unique<ClassicalRadiusObjective>(w, alpha);
}

DensityOperator handle_from_input_dist(const CQChannel& ch, double alpha,
                                       const ProbabilityDistribution& p) {
  require_open_unit(alpha, "handle_from_input_dist");
  require_input_size(ch.input_size(), p);
  CMatrix a = CMatrix::Zero(ch.dim(), ch.dim());
  for (Eigen::Index x = 0; x < ch.input_size(); ++x) {
    if (p[x] > 0.0) a += p[x] * mat_pow(ch.state(x), alpha).matrix();
  }
  const CMatrix f = spectral_power(eig_hermitian_unchecked(a), 1.0 / alpha);
  const double tr = f.trace().real();
  if (!(tr > 1e-300)) throw ValidationError("handle_from_input_dist: A(alpha,P) is numerically zero");
  return DensityOperator::trusted(f / tr);
}

ProbabilityDistribution handle_from_input_dist(const ClassicalChannel& w, double alpha,
                                               const ProbabilityDistribution& p) {
  require_open_unit(alpha, "handle_from_input_dist");
  require_input_size(w.input_size(), p);
  const RVector a = elementwise_power(w.matrix(), alpha).transpose() * p.values();
  const RVector q = a.unaryExpr([alpha](double v) { return v > 0.0 ? std::pow(v, 1.0 / alpha) : 0.0; });
  if (!(q.sum() > 1e-300)) throw ValidationError("handle_from_input_dist: A(alpha,P) is numerically zero");
  return ProbabilityDistribution::trusted(q);
}

double max_divergence(const CQChannel& ch, double alpha, const DensityOperator& f) {
  double worst = 0.0;
  for (const auto& s : ch.states()) worst = std::max(worst, renyi_quantum(s, f, alpha));
  return worst;
}

double max_divergence(const ClassicalChannel& w, double alpha, const ProbabilityDistribution& q) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < w.input_size(); ++x)
    worst = std::max(worst, renyi_classical(ProbabilityDistribution::trusted(w.row(x)), q, alpha));
  return worst;
}

// ===========================================================================
// Capacities

CapacityResult capacity_classical(const ClassicalChannel& w, const SolverConfig& cfg) {
  cfg.validate();
  const RMatrix& m = w.matrix();
  const Eigen::Index nx = m.rows();
  RVector p = RVector::Constant(nx, 1.0 / static_cast<double>(nx));
  RVector d(nx);
  CapacityResult out;
  double lower = 0.0, upper = infinity;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const RVector q = m.transpose() * p;
    for (Eigen::Index x = 0; x < nx; ++x) {
      double s = 0.0;
      for (Eigen::Index y = 0; y < m.cols(); ++y)
        if (m(x, y) > 0.0) s += m(x, y) * std::log(m(x, y) / q[y]);
      d[x] = std::max(s, 0.0);
    }
    lower = p.dot(d);
    upper = d.maxCoeff();
    if (upper - lower <= cfg.tolerance) break;
    RVector next = (p.array() * (d.array() - upper).exp()).matrix();
    p = next / next.sum();
  }
  out.value = lower;
  out.input = ProbabilityDistribution::trusted(p);
  out.report.value = lower;
  out.report.gap = std::max(0.0, upper - lower);
  out.report.iterations = it;
  out.report.converged = out.report.gap <= cfg.tolerance;
  return out;
}

RadiusResult capacity_minmax(const ClassicalChannel& w, const SolverConfig& cfg) {
  const ClassicalRadiusObjective obj(w, 1.0);
  return to_radius(minimize_convex_density(obj, w.output_size(), cfg, DensityDomain::diagonal),
                   1.0, true);
}

FeedbackResult c_fb(const ClassicalChannel& w) {
  const RMatrix a = (w.matrix().transpose().array() > 0.0).cast<double>();
  const MinimaxLp lp = solve_minimax_lp(a);
  FeedbackResult out;
  out.value = std::max(0.0, -std::log(lp.value));
  out.input = ProbabilityDistribution::trusted(lp.column_strategy);
  const double lower = lp.value - lp.gap;
  out.gap = lower > 0.0 ? std::log(lp.value) - std::log(lower) : infinity;
  return out;
}

RInfClassical r_inf_classical(const ClassicalChannel& w, const SolverConfig& cfg) {
  const FeedbackResult primal = c_fb(w);
  const auto obj = make_overlap_objective(support_diagonals(w));
  RInfClassical out;
  out.primal = primal.value;
  out.input = primal.input;
  out.dual = to_radius(minimize_convex_density(*obj, w.output_size(), cfg, DensityDomain::diagonal),
                       0.0, true);
  const double hi = out.dual.value + 1e-6;
  const double lo = out.dual.value - out.dual.gap - 1e-6;
  if (out.dual.report.converged && (out.primal > hi || out.primal < lo)) {
    throw InvariantError("R_inf primal " + std::to_string(out.primal) +
                         " disagrees with dual bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  return out;
}

RadiusResult r_inf_quantum(const CQChannel& ch, const SolverConfig& cfg) {
  std::vector<CMatrix> projectors;
  for (const auto& s : ch.states()) projectors.push_back(support_projector(s).matrix());
  const auto obj = make_overlap_objective(std::move(projectors));
  return to_radius(minimize_convex_density(*obj, ch.dim(), cfg), 0.0, false);
}

}  // namespace sptheta
