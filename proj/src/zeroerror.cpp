#include "sptheta/zeroerror.hpp"

#include "sptheta/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sptheta {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_nonempty(const ConfusabilityGraph& g, const char* what) {
  if (g.size() == 0) throw ValidationError(std::string(what) + ": graph has no vertices");
}

// -------------------------------------------------------------------------
// bitsets for the independence search

using Bits = std::vector<std::uint64_t>;

bool any(const Bits& b) {
  for (auto w : b)
    if (w) return true;
  return false;
}

std::size_t lowest(const Bits& b) {
  for (std::size_t k = 0; k < b.size(); ++k)
    if (b[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(b[k]));
  return 0;
}

bool test(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; }
void clear(Bits& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

class IndependenceSearch {
 public:
  explicit IndependenceSearch(const ConfusabilityGraph& g) : g_(g) {}

  IndependentSet run() {
    Bits all(g_.words(), 0);
    for (std::size_t i = 0; i < g_.size(); ++i) all[i / 64] |= std::uint64_t{1} << (i % 64);
    search(all);
    return {best_.size(), best_};
  }

 private:
  // greedy clique cover of cand; an independent set meets each clique at most once
  std::size_t cover_bound(const Bits& cand) const {
    std::vector<Bits> common;
    Bits rest = cand;
    while (any(rest)) {
      std::size_t v = lowest(rest);
      clear(rest, v);
      bool placed = false;
      for (auto& c : common) {
        if (test(c, v)) {
          const auto& nv = g_.row(v);
          for (std::size_t k = 0; k < c.size(); ++k) c[k] &= nv[k];
          placed = true;
          break;
        }
      }
      if (!placed) common.push_back(g_.row(v));
    }
    return common.size();
  }

  // smallest candidate first, include before exclude: the first maximum set
  // found is the lexicographically smallest one
  void search(Bits cand) {
    while (true) {
      if (!any(cand)) {
        if (current_.size() > best_.size()) best_ = current_;
        return;
      }
      if (current_.size() + cover_bound(cand) <= best_.size()) return;
      std::size_t v = lowest(cand);
      clear(cand, v);
      Bits next = cand;
      const auto& nv = g_.row(v);
      for (std::size_t k = 0; k < next.size(); ++k) next[k] &= ~nv[k];
      current_.push_back(v);
      search(std::move(next));
      current_.pop_back();
    }
  }

  const ConfusabilityGraph& g_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
};

// -------------------------------------------------------------------------
// theta SDP helpers

double min_eigenvalue(const RMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const RMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

// largest a with x + a dx PSD, infinity if unbounded
double max_step(const RMatrix& x, const RMatrix& dx) {
  Eigen::LLT<RMatrix> llt(x);
  RMatrix l = llt.matrixL();
  RMatrix s = l.triangularView<Eigen::Lower>().solve(dx);
  s = l.triangularView<Eigen::Lower>().solve(s.transpose().eval()).transpose().eval();
  double lo = min_eigenvalue(0.5 * (s + s.transpose()));
  return lo >= 0.0 ? inf : -1.0 / lo;
}

struct Certificate {
  RMatrix primal;
  RMatrix dual;
  double lower = 0.0;
  double upper = inf;
};

Certificate certify(const RMatrix& x, const RVector& y, const std::vector<Edge>& edges) {
  const Eigen::Index n = x.rows();
  Certificate c;
  RMatrix b = 0.5 * (x + x.transpose());
  for (const auto& [i, j] : edges) {
    b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
    b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 0.0;
  }
  b /= b.trace();
  double lo = min_eigenvalue(b);
  if (lo < 0.0) {
    double nd = static_cast<double>(n);
    double tau = std::min(1.0, -nd * lo / (1.0 - nd * lo) * (1.0 + 1e-12));
    b = (1.0 - tau) * b + tau * RMatrix::Identity(n, n) / nd;
  }
  c.primal = b;
  c.lower = b.sum();

  RMatrix a = RMatrix::Ones(n, n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto i = static_cast<Eigen::Index>(edges[e].first);
    auto j = static_cast<Eigen::Index>(edges[e].second);
    a(i, j) -= y(static_cast<Eigen::Index>(e) + 1);
    a(j, i) -= y(static_cast<Eigen::Index>(e) + 1);
  }
  c.dual = a;
  c.upper = max_eigenvalue(a);
  return c;
}

double min_overlap(const std::vector<CVector>& us, const CVector& c) {
  double lo = inf;
  for (const auto& u : us) lo = std::min(lo, std::norm(u.dot(c)));
  return lo;
}

// local ascent of min_x |<u_x|c>|^2 on the unit sphere
CVector polish_handle(const std::vector<CVector>& us, CVector c) {
  double cur = min_overlap(us, c);
  if (cur <= 0.0) return c;
  double eta = 0.1;
  for (int it = 0; it < 500 && eta > 1e-12; ++it) {
    CVector d = CVector::Zero(c.size());
    for (const auto& u : us) {
      Complex ov = u.dot(c);
      double o = std::norm(ov);
      if (o <= cur * (1.0 + 1e-9) + 1e-15) d += u * ov / o;
    }
    d -= c * c.dot(d);
    if (d.norm() < 1e-14) break;
    CVector trial = (c + eta * d).normalized();
    double val = min_overlap(us, trial);
    if (val > cur) {
      c = trial;
      cur = val;
      eta *= 2.0;
    } else {
      eta *= 0.5;
    }
  }
  return c;
}

double neg_log(double x) { return x > 0.0 ? -std::log(x) : inf; }

}  // namespace

// ---------------------------------------------------------------------------
// representations

VectorRepresentation::VectorRepresentation(ConfusabilityGraph graph, std::vector<CVector> vectors,
                                           std::optional<CVector> handle)
    : graph_(std::move(graph)), vectors_(std::move(vectors)), handle_(std::move(handle)) {
  if (vectors_.size() != graph_.size() || vectors_.empty())
    throw ValidationError("representation needs one vector per vertex, got " +
                          std::to_string(vectors_.size()) + " for " +
                          std::to_string(graph_.size()) + " vertices");
  const auto d = vectors_.front().size();
  if (d == 0) throw ValidationError("representation vectors are empty");
  for (std::size_t x = 0; x < vectors_.size(); ++x) {
    if (vectors_[x].size() != d)
      throw ValidationError("vector " + std::to_string(x) + " has dimension " +
                            std::to_string(vectors_[x].size()) + ", expected " +
                            std::to_string(d));
    if (std::abs(vectors_[x].norm() - 1.0) > 1e-10)
      throw ValidationError("vector " + std::to_string(x) + " is not unit norm");
  }
  for (std::size_t i = 0; i < vectors_.size(); ++i)
    for (std::size_t j = i + 1; j < vectors_.size(); ++j)
      if (!graph_.adjacent(i, j) && std::abs(vectors_[i].dot(vectors_[j])) > 1e-8)
        throw ValidationError("vectors " + std::to_string(i) + " and " + std::to_string(j) +
                              " are not orthogonal but the vertices are non-adjacent");
  if (handle_) {
    if (handle_->size() != d) throw ValidationError("handle dimension mismatch");
    if (std::abs(handle_->norm() - 1.0) > 1e-10)
      throw ValidationError("handle is not unit norm");
  }
}

ProjectorRepresentation::ProjectorRepresentation(ConfusabilityGraph graph,
                                                 std::vector<CMatrix> projectors,
                                                 std::optional<DensityOperator> handle)
    : graph_(std::move(graph)), projectors_(std::move(projectors)), handle_(std::move(handle)) {
  if (projectors_.size() != graph_.size() || projectors_.empty())
    throw ValidationError("representation needs one projector per vertex, got " +
                          std::to_string(projectors_.size()) + " for " +
                          std::to_string(graph_.size()) + " vertices");
  const auto d = projectors_.front().rows();
  if (d == 0) throw ValidationError("projectors are empty");
  for (std::size_t x = 0; x < projectors_.size(); ++x) {
    const auto& u = projectors_[x];
    std::string tag = "projector " + std::to_string(x);
    if (u.rows() != d || u.cols() != d) throw ValidationError(tag + " has the wrong shape");
    if (max_abs(u - u.adjoint()) > 1e-8) throw ValidationError(tag + " is not Hermitian");
    if (max_abs(u * u - u) > 1e-8) throw ValidationError(tag + " is not idempotent");
  }
  for (std::size_t i = 0; i < projectors_.size(); ++i)
    for (std::size_t j = i + 1; j < projectors_.size(); ++j)
      if (!graph_.adjacent(i, j) && max_abs(projectors_[i] * projectors_[j]) > 1e-8)
        throw ValidationError("projectors " + std::to_string(i) + " and " + std::to_string(j) +
                              " are not orthogonal but the vertices are non-adjacent");
  if (handle_ && handle_->dim() != d) throw ValidationError("handle dimension mismatch");
}

ProjectorRepresentation ProjectorRepresentation::from_vectors(const VectorRepresentation& rep) {
  std::vector<CMatrix> ps;
  ps.reserve(rep.vectors().size());
  for (const auto& u : rep.vectors()) ps.push_back(u * u.adjoint());
  std::optional<DensityOperator> h;
  if (rep.handle()) h = DensityOperator::pure(*rep.handle());
  return ProjectorRepresentation(rep.graph(), std::move(ps), std::move(h));
}

// ---------------------------------------------------------------------------
// graphs

ConfusabilityGraph strong_product(const ConfusabilityGraph& g, const ConfusabilityGraph& h) {
  const std::size_t ng = g.size(), nh = h.size();
  if (ng != 0 && nh > max_graph_vertices / ng)
    throw CapacityError("strong product would have " + std::to_string(ng) + " x " +
                        std::to_string(nh) + " vertices, cap is " +
                        std::to_string(max_graph_vertices));
  ConfusabilityGraph out(ng * nh);
  for (std::size_t a = 0; a < ng; ++a)
    for (std::size_t b = 0; b < nh; ++b)
      for (std::size_t c = a; c < ng; ++c) {
        if (c != a && !g.adjacent(a, c)) continue;
        for (std::size_t d = 0; d < nh; ++d) {
          if (c == a && d <= b) continue;
          if (d != b && !h.adjacent(b, d)) continue;
          out.add_edge(a * nh + b, c * nh + d);
        }
      }
  return out;
}

ConfusabilityGraph strong_power(const ConfusabilityGraph& g, int n) {
  if (n < 1) throw DomainError("strong power needs n >= 1, got " + std::to_string(n));
  std::size_t size = 1;
  for (int k = 0; k < n; ++k) {
    if (g.size() != 0 && size > max_graph_vertices / g.size())
      throw CapacityError("strong power G^" + std::to_string(n) + " exceeds " +
                          std::to_string(max_graph_vertices) + " vertices");
    size *= g.size();
  }
  ConfusabilityGraph out = g;
  for (int k = 1; k < n; ++k) out = strong_product(out, g);
  return out;
}

IndependentSet max_independent_set(const ConfusabilityGraph& g) {
  if (g.size() > max_graph_vertices)
    throw CapacityError("independence search limited to " + std::to_string(max_graph_vertices) +
                        " vertices");
  if (g.size() == 0) return {};
  return IndependenceSearch(g).run();
}

double capacity_lower_bound(const ConfusabilityGraph& g, int n) {
  require_nonempty(g, "capacity_lower_bound");
  auto set = max_independent_set(strong_power(g, n));
  return std::log(static_cast<double>(set.size)) / n;
}

// ---------------------------------------------------------------------------
// theta

ThetaCertificate theta(const ConfusabilityGraph& g, const SolverConfig& cfg) {
  cfg.validate();
  require_nonempty(g, "theta");
  if (g.size() > max_theta_vertices)
    throw CapacityError("theta SDP limited to " + std::to_string(max_theta_vertices) +
                        " vertices, got " + std::to_string(g.size()));
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto edges = g.edges();
  const auto m = static_cast<Eigen::Index>(edges.size()) + 1;
  const double nd = static_cast<double>(n);

  // max <J,X> : Tr X = 1, X_ij = 0 on edges, X PSD
  // min y_0   : Z = y_0 I + sum_e y_e (E_ij + E_ji) - J PSD
  RMatrix x = RMatrix::Identity(n, n) / nd;
  RVector y = RVector::Zero(m);
  y(0) = nd + 1.0;
  const RMatrix jm = RMatrix::Ones(n, n);
  auto dual_slack = [&](const RVector& yy) {
    RMatrix z = yy(0) * RMatrix::Identity(n, n) - jm;
    for (Eigen::Index e = 1; e < m; ++e) {
      auto i = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(e - 1)].first);
      auto j = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(e - 1)].second);
      z(i, j) += yy(e);
      z(j, i) += yy(e);
    }
    return z;
  };
  auto apply_a = [&](const RMatrix& v) {
    RVector out(m);
    out(0) = v.trace();
    for (Eigen::Index e = 1; e < m; ++e) {
      auto i = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(e - 1)].first);
      auto j = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(e - 1)].second);
      out(e) = v(i, j) + v(j, i);
    }
    return out;
  };
  RVector b = RVector::Zero(m);
  b(0) = 1.0;
  RMatrix z = dual_slack(y);

  Certificate best = certify(x, y, edges);
  const double target = std::min(cfg.tolerance, 1e-6) * 1e-2;
  int it = 0;
  int stalled = 0;
  for (; it < 100; ++it) {
    if (best.upper - best.lower <= target * std::max(1.0, best.upper)) break;
    const double mu = (x * z).trace() / nd;
    // complementarity at rounding level: further Newton steps only add noise
    if (mu <= 1e-13 * std::max(1.0, std::abs(y(0)))) break;
    RMatrix w = z.llt().solve(RMatrix::Identity(n, n));
    w = (0.5 * (w + w.transpose())).eval();

    RMatrix schur(m, m);
    RMatrix wx = w * x;
    schur(0, 0) = (x * w).trace();
    for (Eigen::Index l = 1; l < m; ++l) {
      auto p = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(l - 1)].first);
      auto q = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(l - 1)].second);
      schur(0, l) = schur(l, 0) = wx(q, p) + wx(p, q);
      for (Eigen::Index k = l; k < m; ++k) {
        auto i = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(k - 1)].first);
        auto j = static_cast<Eigen::Index>(edges[static_cast<std::size_t>(k - 1)].second);
        double v = x(j, p) * w(q, i) + x(j, q) * w(p, i) + x(i, p) * w(q, j) + x(i, q) * w(p, j);
        schur(k, l) = schur(l, k) = v;
      }
    }
    Eigen::LDLT<RMatrix> fact(schur);

    const RVector rp = b - apply_a(x);
    const RMatrix rd = z - dual_slack(y);  // C - A^T y + Z
    RMatrix xrdw = x * rd * w;

    auto direction = [&](double sigma, RVector& dy, RMatrix& dx, RMatrix& dz) {
      dy = fact.solve(apply_a(sigma * mu * w - x + xrdw) - rp);
      dz = dual_slack(dy) + jm - rd;  // A^T dy - Rd
      dz = (0.5 * (dz + dz.transpose())).eval();
      dx = sigma * mu * w - x - x * dz * w;
      dx = (0.5 * (dx + dx.transpose())).eval();
    };

    RVector dy;
    RMatrix dx, dz;
    direction(0.0, dy, dx, dz);
    double ap = std::min(1.0, max_step(x, dx));
    double ad = std::min(1.0, max_step(z, dz));
    double predicted = ((x + ap * dx) * (z + ad * dz)).trace() / nd;
    double sigma = std::clamp(std::pow(std::max(predicted, 0.0) / mu, 3.0), 1e-3, 0.5);
    direction(sigma, dy, dx, dz);
    ap = std::min(1.0, 0.95 * max_step(x, dx));
    ad = std::min(1.0, 0.95 * max_step(z, dz));
    if (ap < 1e-12 && ad < 1e-12) break;

    x += ap * dx;
    x = (0.5 * (x + x.transpose())).eval();
    y += ad * dy;
    z = dual_slack(y);
    if (z.llt().info() != Eigen::Success) {
      // rounding pushed Z out of the cone; restore a little slack
      y(0) += std::max(1e-14, -min_eigenvalue(z)) * 2.0;
      z = dual_slack(y);
    }
    Certificate c = certify(x, y, edges);
    if (c.upper - c.lower < best.upper - best.lower) {
      stalled = (best.upper - best.lower) - (c.upper - c.lower) < 1e-3 * (best.upper - best.lower)
                    ? stalled + 1
                    : 0;
      best = c;
    } else {
      ++stalled;
    }
    if (stalled >= 5) break;
  }

  ThetaCertificate cert;
  cert.primal_value = best.lower;
  cert.dual_value = best.upper;
  cert.duality_gap = best.upper - best.lower;
  cert.theta_log = std::log(best.lower);
  cert.primal_matrix = PsdMatrix::trusted(best.primal.cast<Complex>());
  cert.dual_matrix = HermitianMatrix::trusted(best.dual.cast<Complex>());
  cert.iterations = it;
  if (cert.duality_gap > 1e-6 * std::max(1.0, best.upper))
    throw ConvergenceError("theta SDP stopped with duality gap " +
                               std::to_string(cert.duality_gap),
                           cert.theta_log, cert.duality_gap);
  return cert;
}

std::string verify_certificate(const ConfusabilityGraph& g, const ThetaCertificate& cert,
                               double tol) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const CMatrix& b = cert.primal_matrix.matrix();
  const CMatrix& a = cert.dual_matrix.matrix();
  if (b.rows() != n || a.rows() != n) return "certificate size does not match the graph";
  if (std::abs(b.trace().real() - 1.0) > tol) return "primal trace is not one";
  double lo = eig_hermitian_unchecked(b).values.minCoeff();
  if (lo < -tol) return "primal matrix is not PSD";
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(a(i, i) - 1.0) > tol) return "dual diagonal is not one";
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      bool e = g.adjacent(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (e && std::abs(b(i, j)) > tol) return "primal matrix is nonzero on an edge";
      if (!e && std::abs(a(i, j) - 1.0) > tol) return "dual matrix is not one on a non-edge";
    }
  }
  double primal = b.sum().real();
  double dual = eig_hermitian_unchecked(a).values.maxCoeff();
  double scale = std::max(1.0, dual);
  if (std::abs(primal - cert.primal_value) > tol * scale) return "stored primal value is stale";
  if (std::abs(dual - cert.dual_value) > tol * scale) return "stored dual value is stale";
  if (std::abs((dual - primal) - cert.duality_gap) > tol * scale) return "stored gap is stale";
  if (dual - primal < -tol * scale) return "dual value below primal value";
  if (std::abs(std::log(primal) - cert.theta_log) > tol) return "theta_log does not match";
  return {};
}

// ---------------------------------------------------------------------------
// representation values

VectorRepresentation umbrella_c5() {
  const double c2 = 1.0 / std::sqrt(5.0);
  const double c = std::sqrt(c2), s = std::sqrt(1.0 - c2);
  std::vector<CVector> us;
  for (int k = 0; k < 5; ++k) {
    double phi = 2.0 * std::numbers::pi * k / 5.0;
    CVector u(3);
    u << c, s * std::cos(phi), s * std::sin(phi);
    us.push_back(u);
  }
  CVector e0 = CVector::Zero(3);
  e0(0) = 1.0;
  return VectorRepresentation(ConfusabilityGraph::cycle(5), std::move(us), e0);
}

LovaszValue lovasz_value(const VectorRepresentation& rep, const SolverConfig& cfg) {
  cfg.validate();
  std::vector<CMatrix> ps;
  for (const auto& u : rep.vectors()) ps.push_back(u * u.adjoint());
  auto obj = make_overlap_objective(std::move(ps));
  auto relax = minimize_convex_density(*obj, rep.dim(), cfg);

  auto e = eig_hermitian_unchecked(relax.argmin.matrix());
  Eigen::Index top = 0;
  e.values.maxCoeff(&top);
  CVector c = e.vectors.col(top).normalized();
  c = polish_handle(rep.vectors(), c);
  if (rep.handle() && min_overlap(rep.vectors(), *rep.handle()) > min_overlap(rep.vectors(), c))
    c = *rep.handle();

  LovaszValue out;
  out.value = neg_log(min_overlap(rep.vectors(), c));
  out.handle = c;
  out.relaxation_value = relax.report.value;
  out.relaxation_gap = relax.report.gap;
  return out;
}

ValueSp value_sp(const ProjectorRepresentation& rep, const SolverConfig& cfg) {
  cfg.validate();
  auto obj = make_overlap_objective(rep.projectors());
  auto r = minimize_convex_density(*obj, rep.dim(), cfg);
  ValueSp out;
  out.value = r.report.value;
  out.handle = r.argmin;
  out.gap = r.report.gap;
  out.report = r.report;
  return out;
}

CapacityBoundReport certify_capacity_bounds(const ConfusabilityGraph& g,
                                     const std::vector<ProjectorRepresentation>& reps, int n,
                                     const SolverConfig& cfg) {
  CapacityBoundReport r;
  r.lower_blocklength = n;
  r.lower = capacity_lower_bound(g, n);
  auto cert = theta(g, cfg);
  r.theta_log = cert.theta_log;
  r.theta_sp_log = cert.theta_log;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    if (!(reps[k].graph() == g))
      throw ValidationError("representation " + std::to_string(k) + " is for a different graph");
    auto v = value_sp(reps[k], cfg);
    if (v.value - v.gap < cert.theta_log - 1e-4)
      throw InvariantError("representation " + std::to_string(k) + " has value " +
                           std::to_string(v.value) + " below theta " +
                           std::to_string(cert.theta_log));
    r.theta_sp_log = std::min(r.theta_sp_log, v.value);
  }
  if (r.lower > r.theta_sp_log + 1e-4)
    throw InvariantError("independence lower bound " + std::to_string(r.lower) +
                         " exceeds theta " + std::to_string(r.theta_sp_log));
  return r;
}

SubpartitionReport subpartition_check(const ProjectorRepresentation& rep,
                                      const std::vector<std::vector<std::size_t>>& code, int n,
                                      const SolverConfig& cfg) {
  if (n < 1) throw DomainError("blocklength must be >= 1, got " + std::to_string(n));
  const auto& g = rep.graph();
  for (std::size_t m = 0; m < code.size(); ++m) {
    if (code[m].size() != static_cast<std::size_t>(n))
      throw ValidationError("codeword " + std::to_string(m) + " has length " +
                            std::to_string(code[m].size()) + ", expected " + std::to_string(n));
    for (auto s : code[m])
      if (s >= g.size())
        throw ValidationError("codeword " + std::to_string(m) + " uses symbol " +
                              std::to_string(s) + " outside the alphabet");
  }
  for (std::size_t a = 0; a < code.size(); ++a)
    for (std::size_t b = a + 1; b < code.size(); ++b) {
      bool confusable = true;
      for (int i = 0; i < n && confusable; ++i) {
        auto s = code[a][static_cast<std::size_t>(i)], t = code[b][static_cast<std::size_t>(i)];
        confusable = s == t || g.adjacent(s, t);
      }
      if (confusable)
        throw ValidationError("codewords " + std::to_string(a) + " and " + std::to_string(b) +
                              " are confusable");
    }

  std::size_t dim = 1;
  const auto d = static_cast<std::size_t>(rep.dim());
  for (int k = 0; k < n; ++k) {
    if (dim > max_product_dim / d)
      throw CapacityError("tensor dimension exceeds " + std::to_string(max_product_dim));
    dim *= d;
  }

  DensityOperator f = rep.handle() ? *rep.handle() : value_sp(rep, cfg).handle;
  double v = 0.0;
  for (const auto& u : rep.projectors()) v = std::max(v, neg_log(trace_product(u, f.matrix())));

  CMatrix fn = f.matrix();
  for (int k = 1; k < n; ++k) fn = kron(fn, f.matrix());
  const auto di = static_cast<Eigen::Index>(dim);
  CMatrix sum = CMatrix::Zero(di, di);
  SubpartitionReport r;
  for (const auto& word : code) {
    CMatrix um = rep.projectors()[word[0]];
    for (int k = 1; k < n; ++k) um = kron(um, rep.projectors()[word[static_cast<std::size_t>(k)]]);
    sum += um;
    r.lhs += trace_product(um, fn);
  }
  r.operator_norm = code.empty() ? 0.0 : eig_hermitian_unchecked(sum).values.maxCoeff();
  r.bound = static_cast<double>(code.size()) * std::exp(-n * v);
  if (r.operator_norm > 1.0 + 1e-8)
    throw InvariantError("sum of codeword projectors has norm " + std::to_string(r.operator_norm));
  if (r.lhs > 1.0 + 1e-8)
    throw InvariantError("codeword overlaps sum to " + std::to_string(r.lhs));
  if (r.bound > r.lhs + 1e-8)
    throw InvariantError("bound " + std::to_string(r.bound) + " exceeds overlap sum " +
                         std::to_string(r.lhs));
  return r;
}

}  // namespace sptheta
