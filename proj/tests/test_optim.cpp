#include "support.hpp"

#include "sptheta/errors.hpp"
#include "sptheta/exponents.hpp"
#include "sptheta/optim.hpp"

#include <doctest.h>

using namespace sptheta;
using testing::diag;

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("simplex ascent examples") {
  SolverConfig cfg;
  cfg.tolerance = 1e-9;
  auto quad = maximize_concave_simplex([](const RVector& p) { return -p.squaredNorm(); },
                                       [](const RVector& p) { return RVector(-2.0 * p); }, 3, cfg);
  CHECK(quad.report.converged);
  for (int i = 0; i < 3; ++i) CHECK(quad.argmax[i] == doctest::Approx(1.0 / 3).epsilon(1e-4));

  auto lin = maximize_concave_simplex([](const RVector& p) { return p(0); }, {}, 2, cfg);
  CHECK(lin.argmax[0] > 1.0 - 1e-6);
  CHECK(lin.report.value == doctest::Approx(1.0).epsilon(1e-6));

  auto w = testing::bsc(0.1);
  auto e0 = maximize_concave_simplex(
      [&](const RVector& p) { return e0_classical(w, ProbabilityDistribution::trusted(p), 1.0); }, {},
      2, cfg);
  CHECK(e0.report.value == doctest::Approx(0.223144).epsilon(1e-6));
  CHECK(e0.argmax[0] == doctest::Approx(0.5).epsilon(1e-4));
  // the reported gap certifies the value
  CHECK(e0.report.gap <= cfg.tolerance);
}

TEST_CASE("density min-max examples") {
  SolverConfig cfg;
  cfg.tolerance = 1e-8;
  auto two = make_overlap_objective({diag({1, 0}), diag({0, 1})});
  auto r = minimize_convex_density(*two, 2, cfg);
  CHECK(r.report.value == doctest::Approx(std::log(2.0)).epsilon(1e-7));
  CHECK(max_abs(r.argmin.matrix() - diag({0.5, 0.5})) < 1e-6);
  CHECK(r.lower_bound <= r.report.value + 1e-12);
  CHECK(r.report.gap == doctest::Approx(r.report.value - r.lower_bound));

  testing::Random rng(61);
  CVector u = rng.unit(3);
  auto single = make_overlap_objective({u * u.adjoint()});
  auto s = minimize_convex_density(*single, 3, cfg);
  CHECK(s.report.value <= 1e-7);
  CHECK(s.report.converged);

  auto bsc = make_renyi_objective(testing::bsc(0.1), 0.5);
  auto c = minimize_convex_density(*bsc, 2, cfg, DensityDomain::diagonal);
  CHECK(c.report.value == doctest::Approx(0.223144).epsilon(1e-6));
}

TEST_CASE("callable payoffs with finite-difference gradients") {
  SolverConfig cfg;
  cfg.tolerance = 1e-6;
  std::vector<DensityPayoff> payoffs;
  for (int k = 0; k < 2; ++k) {
    CMatrix p = k == 0 ? diag({1, 0}) : diag({0, 1});
    payoffs.push_back({[p](const CMatrix& f) { return -std::log(trace_product(p, f)); }, {}});
  }
  auto r = minimize_convex_density(std::move(payoffs), 2, cfg);
  CHECK(r.report.value == doctest::Approx(std::log(2.0)).epsilon(1e-5));
}

TEST_CASE("mirror descent reaches the same value") {
  SolverConfig cfg;
  cfg.tolerance = 1e-4;
  cfg.max_iterations = 20000;
  auto obj = make_overlap_objective({diag({1, 0, 0}), diag({0, 1, 0}), diag({0, 0, 1})});
  auto r = minimize_convex_density(*obj, 3, cfg, DensityDomain::full, DensityMethod::mirror_descent);
  CHECK(r.report.value == doctest::Approx(std::log(3.0)).epsilon(1e-3));
  CHECK(r.lower_bound <= std::log(3.0) + 1e-9);
}

TEST_CASE("density iterates stay on the state space") {
  testing::Random rng(67);
  auto ch = rng.cq(3, 4);
  SolverConfig cfg;
  auto r = radius_solve(ch, 0.5, cfg);
  const auto& f = std::get<DensityOperator>(r.center);
  CHECK(f.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(eig_hermitian(f).values.minCoeff() >= -1e-12);
  CHECK(r.gap <= cfg.tolerance);
}

TEST_CASE("lower bounds never exceed the value at any weights") {
  testing::Random rng(71);
  auto obj = make_overlap_objective({diag({1, 0}), CMatrix(CMatrix::Identity(2, 2))});
  for (int t = 0; t < 10; ++t) {
    auto f = rng.density(2, 2);
    RVector w = rng.distribution(2).values();
    double lb = density_lower_bound(*obj, f.matrix(), w, DensityDomain::full);
    CHECK(lb <= 1e-12);  // optimum is F = |0><0| with value 0
  }
}

TEST_CASE("analytic Hessians agree with finite differences") {
  testing::Random rng(73);
  auto ch = rng.cq(3, 3);
  for (double alpha : {0.2, 0.5, 0.8}) {
    auto obj = make_renyi_objective(ch, alpha);
    // keep F well inside the cone so the difference step stays accurate
    CMatrix f = 0.5 * rng.density(3, 3).matrix() + CMatrix::Identity(3, 3) / 6.0;
    CMatrix dir = rng.hermitian(3).matrix();
    dir -= CMatrix::Identity(3, 3) * (dir.trace() / 3.0);
    const double h = 1e-5;
    std::vector<CMatrix> gp, gm;
    obj->gradients(f + h * dir, gp);
    obj->gradients(f - h * dir, gm);
    for (std::size_t x = 0; x < 3; ++x) {
      CMatrix fd = (gp[x] - gm[x]) / (2 * h);
      CMatrix an = obj->hessian_apply(f, x, dir);
      CHECK(max_abs(fd - an) <= 1e-5 * std::max(1.0, max_abs(an)));
    }
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  testing::Random rng(79);
  auto ch = rng.cq(3, 2);
  auto obj = make_renyi_objective(ch, 0.6);
  auto f = rng.density(3, 3).matrix();
  std::vector<CMatrix> g;
  obj->gradients(f, g);
  CMatrix dir = rng.hermitian(3).matrix();
  const double h = 1e-6;
  std::vector<double> vp(2), vm(2);
  obj->values(f + h * dir, vp);
  obj->values(f - h * dir, vm);
  for (std::size_t x = 0; x < 2; ++x)
    CHECK(std::abs((vp[x] - vm[x]) / (2 * h) - trace_product(g[x], dir)) <= 1e-6);
}

TEST_CASE("sup_over_rho examples") {
  SolverConfig cfg;
  cfg.tolerance = 1e-9;
  auto linear = [](double rho) { return rho * std::log(2.0); };
  CHECK(std::isinf(sup_over_rho(linear, 0.3, default_rho_max, cfg).value));
  auto at_zero = sup_over_rho(linear, 0.8, default_rho_max, cfg);
  CHECK(at_zero.value == doctest::Approx(0.0));
  CHECK(at_zero.rho == doctest::Approx(0.0));
  auto smooth = sup_over_rho([](double rho) { return std::log1p(rho); }, 0.5, default_rho_max, cfg);
  CHECK(smooth.value == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-9));
  CHECK(smooth.rho == doctest::Approx(1.0).epsilon(1e-4));
  // an explicit threshold decides divergence
  CHECK(std::isinf(sup_over_rho(linear, 0.6, default_rho_max, cfg, std::log(2.0)).value));
  CHECK(std::isfinite(sup_over_rho(linear, 0.7, default_rho_max, cfg, std::log(2.0)).value));
}

TEST_CASE("psd_project") {
  CHECK(max_abs(psd_project(HermitianMatrix(diag({2, -1}))).matrix() - diag({2, 0})) < 1e-15);
  testing::Random rng(83);
  auto s = rng.density(3, 2);
  CHECK(max_abs(psd_project(s).matrix() - s.matrix()) <= 1e-12);
  for (int t = 0; t < 10; ++t) {
    auto h = rng.hermitian(3);
    CMatrix g = rng.gaussian(3, 3);
    CMatrix p = g * g.adjoint();
    double proj = (psd_project(h).matrix() - h.matrix()).norm();
    CHECK(proj <= (p - h.matrix()).norm() + 1e-12);
  }
}

TEST_CASE("matrix game LP") {
  auto id = solve_minimax_lp(RMatrix::Identity(2, 2));
  CHECK(id.value == doctest::Approx(0.5));
  CHECK(id.gap == doctest::Approx(0.0));
  RMatrix a(2, 3);
  a << 1, 0, 1, 0, 1, 1;
  auto g = solve_minimax_lp(a);
  CHECK(g.value == doctest::Approx(0.5));
  CHECK(g.column_strategy.sum() == doctest::Approx(1.0));
  CHECK_THROWS_AS(solve_minimax_lp(RMatrix::Zero(2, 2)), ValidationError);
}

TEST_CASE("solvers are deterministic for a fixed seed") {
  testing::Random rng(89);
  auto ch = rng.cq(3, 4);
  SolverConfig cfg;
  cfg.seed = 42;
  auto a = e0_max(ch, 1.0, cfg), b = e0_max(ch, 1.0, cfg);
  CHECK(a.e0 == b.e0);
  CHECK(a.report.gap == b.report.gap);
  CHECK(a.report.iterations == b.report.iterations);
  CHECK(a.optimal_input.values() == b.optimal_input.values());
  auto ra = radius_solve(ch, 0.3, cfg), rb = radius_solve(ch, 0.3, cfg);
  CHECK(ra.value == rb.value);
  CHECK(ra.gap == rb.gap);
}
