#include "support.hpp"

#include "sptheta/errors.hpp"
#include "sptheta/exponents.hpp"

#include <doctest.h>

using namespace sptheta;
using testing::diag;

namespace {

const double ln2 = std::log(2.0);
const double cutoff = -std::log(0.8);  // BSC(0.1) at rho = 1

CQChannel orthogonal_pure(int k) {
  std::vector<DensityOperator> st;
  for (int x = 0; x < k; ++x) st.push_back(DensityOperator::pure(testing::basis(k, x)));
  return CQChannel::from_states(st);
}

SolverConfig tight(double tol = 1e-9) {
  SolverConfig cfg;
  cfg.tolerance = tol;
  return cfg;
}

}  // namespace

TEST_CASE("Gallager function closed forms") {
  auto w = testing::bsc(0.1);
  auto u2 = ProbabilityDistribution::uniform(2);
  CHECK(e0_classical(w, u2, 1.0) == doctest::Approx(cutoff).epsilon(1e-12));
  CHECK(std::abs(e0_classical(w, u2, 0.0)) < 1e-12);
  CHECK(e0_classical(testing::noiseless(2), u2, 2.0) == doctest::Approx(2 * ln2).epsilon(1e-12));
  CHECK(e0_quantum(orthogonal_pure(2), u2, 1.5) == doctest::Approx(1.5 * ln2).epsilon(1e-12));
  CHECK(e0_quantum(diagonal_embedding(w), u2, 1.0) == doctest::Approx(cutoff).epsilon(1e-12));
  testing::Random r(97);
  CHECK(std::abs(e0_quantum(r.cq(3, 3), ProbabilityDistribution::uniform(3), 0.0)) < 1e-12);
  CHECK_THROWS_AS(e0_classical(w, u2, -0.5), DomainError);
  CHECK_THROWS_AS(e0_classical(w, ProbabilityDistribution::uniform(3), 1.0), ValidationError);
}

TEST_CASE("e0_max examples") {
  auto p = e0_max(testing::bsc(0.1), 1.0, tight());
  CHECK(p.e0 == doctest::Approx(cutoff).epsilon(1e-10));
  CHECK(p.optimal_input[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(p.report.converged);
  CHECK(e0_max(orthogonal_pure(3), 2.0, tight()).e0 == doctest::Approx(2 * std::log(3.0)));
  CHECK(std::abs(e0_max(testing::typewriter(), 0.0).e0) < 1e-9);
}

TEST_CASE("r_rho_primal examples") {
  CHECK(r_rho_primal(testing::bsc(0.1), 1.0, tight()) == doctest::Approx(cutoff).epsilon(1e-10));
  for (double rho : {0.3, 1.0, 5.0})
    CHECK(r_rho_primal(orthogonal_pure(4), rho, tight()) == doctest::Approx(std::log(4.0)));
  CHECK(std::abs(r_rho_primal(testing::bsc(0.1), 1e-3, tight()) - testing::bsc_capacity(0.1)) <= 1e-3);
  CHECK_THROWS_AS(r_rho_primal(testing::bsc(0.1), 0.0), DomainError);
  CHECK_THROWS_AS(r_rho_primal(orthogonal_pure(2), -1.0), DomainError);
}

TEST_CASE("radius_solve examples") {
  auto r = radius_solve(testing::bsc(0.1), 0.5, tight());
  CHECK(r.value == doctest::Approx(cutoff).epsilon(1e-8));
  CHECK(r.gap <= 1e-5);

  testing::Random rng(101);
  auto s = rng.density(3, 2);
  auto same = radius_solve(CQChannel::from_states({s, s, s}), 0.4, tight());
  CHECK(std::abs(same.value) < 1e-7);
  CHECK(max_abs(std::get<DensityOperator>(same.center).matrix() - s.matrix()) < 1e-3);

  auto w = rng.classical(3, 4);
  auto qc = radius_solve(diagonal_embedding(w), 0.75, tight());
  auto cl = radius_solve(w, 0.75, tight());
  CHECK(std::abs(qc.value - cl.value) <= 1e-6);

  CHECK_THROWS_AS(radius_solve(w, 1.0), DomainError);
  CHECK_THROWS_AS(radius_solve(w, 0.0), DomainError);
}

TEST_CASE("handle_from_input_dist") {
  testing::Random rng(103);
  auto pure = DensityOperator::pure(rng.unit(3));
  for (double a : {0.2, 0.7}) {
    auto f = handle_from_input_dist(CQChannel::from_states({pure}), a, ProbabilityDistribution::uniform(1));
    CHECK(max_abs(f.matrix() - pure.matrix()) < 1e-10);
  }

  auto w = rng.classical(3, 3);
  auto p = rng.distribution(3);
  auto f = handle_from_input_dist(diagonal_embedding(w), 0.6, p);
  auto q = handle_from_input_dist(w, 0.6, p);
  RVector expect = (p.values().transpose() * w.matrix().array().pow(0.6).matrix()).transpose();
  expect = expect.array().pow(1.0 / 0.6);
  expect /= expect.sum();
  for (Eigen::Index y = 0; y < 3; ++y) {
    CHECK(f.matrix()(y, y).real() == doctest::Approx(expect(y)).epsilon(1e-10));
    CHECK(q[y] == doctest::Approx(expect(y)).epsilon(1e-10));
  }
  CHECK(std::abs(max_abs(f.matrix()) - f.matrix().diagonal().cwiseAbs().maxCoeff()) < 1e-15);

  auto b = handle_from_input_dist(diagonal_embedding(testing::bsc(0.1)), 0.5,
                                  ProbabilityDistribution::uniform(2));
  CHECK(max_divergence(diagonal_embedding(testing::bsc(0.1)), 0.5, b) ==
        doctest::Approx(cutoff).epsilon(1e-6));
}

TEST_CASE("capacity routes") {
  const double c = testing::bsc_capacity(0.1);
  CHECK(capacity_classical(testing::bsc(0.1), tight()).value == doctest::Approx(c).epsilon(1e-9));
  CHECK(capacity_classical(testing::noiseless(3), tight()).value == doctest::Approx(std::log(3.0)));
  CHECK(std::abs(capacity_classical(validate_classical({{0.3, 0.7}, {0.3, 0.7}})).value) < 1e-9);

  auto mm = capacity_minmax(testing::bsc(0.1), tight());
  CHECK(mm.value == doctest::Approx(c).epsilon(1e-8));
  CHECK(std::get<ProbabilityDistribution>(mm.center)[0] == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(capacity_minmax(testing::noiseless(2), tight()).value == doctest::Approx(ln2).epsilon(1e-8));
  auto same = capacity_minmax(validate_classical({{0.3, 0.7}, {0.3, 0.7}}), tight());
  CHECK(std::abs(same.value) < 1e-8);
  CHECK(std::get<ProbabilityDistribution>(same.center)[0] == doctest::Approx(0.3).epsilon(1e-4));

  testing::Random rng(107);
  for (int t = 0; t < 10; ++t) {
    auto w = rng.classical(rng.integer(2, 4), rng.integer(2, 4), 0.2);
    CHECK(std::abs(capacity_classical(w, tight()).value - capacity_minmax(w, tight()).value) <= 1e-6);
  }
}

TEST_CASE("feedback bound and classical R_inf") {
  CHECK(std::abs(c_fb(testing::bsc(0.1)).value) < 1e-12);
  CHECK(c_fb(testing::noiseless(2)).value == doctest::Approx(ln2));
  auto tw = c_fb(testing::typewriter());
  CHECK(tw.value == doctest::Approx(std::log(2.5)).epsilon(1e-10));
  CHECK(tw.gap <= 1e-12);

  auto b = r_inf_classical(testing::bsc(0.1));
  CHECK(std::abs(b.primal) < 1e-9);
  CHECK(std::abs(b.dual.value) < 1e-6);
  auto n = r_inf_classical(testing::noiseless(2));
  CHECK(n.primal == doctest::Approx(ln2));
  CHECK(n.dual.value == doctest::Approx(ln2).epsilon(1e-6));
  auto t = r_inf_classical(testing::typewriter());
  CHECK(t.primal == doctest::Approx(std::log(2.5)).epsilon(1e-9));
  CHECK(t.dual.value == doctest::Approx(std::log(2.5)).epsilon(1e-6));
}

TEST_CASE("quantum R_inf examples") {
  CVector u0(2), u1(2);
  u0 << 1, 0;
  u1 << 0.6, 0.8;
  auto two = CQChannel::from_states({DensityOperator::pure(u0), DensityOperator::pure(u1)});
  auto r = r_inf_quantum(two, tight(1e-8));
  CHECK(r.value == doctest::Approx(-std::log(0.8)).epsilon(1e-7));
  auto top = eig_hermitian(std::get<DensityOperator>(r.center));
  CHECK(top.values(0) > 1.0 - 1e-4);  // rank one bisector

  auto k = r_inf_quantum(orthogonal_pure(3), tight(1e-8));
  CHECK(k.value == doctest::Approx(std::log(3.0)).epsilon(1e-7));
  CHECK(max_abs(std::get<DensityOperator>(k.center).matrix() - CMatrix::Identity(3, 3) / 3.0) < 1e-4);

  auto bsc = r_inf_quantum(classical_to_pure(testing::bsc(0.1)), tight(1e-8));
  CHECK(std::abs(bsc.value - r_rho_primal(testing::bsc(0.1), 1.0, tight())) <= 1e-7);
}

TEST_CASE("sphere-packing exponent examples") {
  auto w = testing::bsc(0.1);
  const double c = testing::bsc_capacity(0.1);
  CHECK(std::abs(esp(w, c)) <= 1e-6);
  CHECK(esp(w, cutoff) >= -1e-12);
  CHECK(esp(w, cutoff) < 0.05);
  for (double rate : {0.0, 0.3, 0.69})
    CHECK(std::isinf(esp(testing::noiseless(2), rate)));
  CHECK(std::abs(esp(testing::noiseless(2), ln2)) < 1e-9);
  CHECK(esp(testing::noiseless(2), 0.8) == doctest::Approx(0.0));
  CHECK_THROWS_AS(esp(w, -0.1), DomainError);
}

TEST_CASE("sphere-packing curve shape") {
  std::vector<double> rates;
  for (int k = 0; k <= 20; ++k) rates.push_back(0.05 + 0.3 * k / 20.0);
  auto curve = esp_curve(testing::bsc(0.1), rates);
  REQUIRE(curve.points.size() == rates.size());
  for (std::size_t i = 1; i < rates.size(); ++i)
    CHECK(curve.points[i].esp <= curve.points[i - 1].esp + 1e-9);
  for (std::size_t i = 1; i + 1 < rates.size(); ++i)
    CHECK(curve.points[i + 1].esp - 2 * curve.points[i].esp + curve.points[i - 1].esp >= -1e-6);

  auto tw = esp_curve(testing::typewriter(), {0.5, 0.9, 1.0});
  CHECK(tw.r_inf == doctest::Approx(std::log(2.5)).epsilon(1e-8));
  CHECK(std::isinf(tw.points[0].esp));
  CHECK(std::isinf(tw.points[1].esp));
  CHECK(std::isfinite(tw.points[2].esp));
}

TEST_CASE("quantum sphere-packing exponent") {
  auto pent = classical_to_pure(testing::typewriter());
  auto curve = esp_curve(pent, {0.1, 1.5});
  CHECK(std::isfinite(curve.points[1].esp));
  CHECK(curve.points[0].esp >= curve.points[1].esp);
  auto orth = esp_curve(orthogonal_pure(2), {0.5, 0.7});
  CHECK(std::isinf(orth.points[0].esp));
  CHECK(orth.points[1].esp == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("radius duality and the recovered handle on random channels") {
  testing::Random rng(109);
  auto cfg = tight(1e-8);
  for (int t = 0; t < 8; ++t) {
    auto ch = rng.cq(rng.integer(2, 3), rng.integer(2, 4));
    for (double rho : {0.25, 1.0, 4.0}) {
      const double alpha = alpha_of_rho(rho);
      auto e = e0_max(ch, rho, cfg);
      auto r = radius_solve(ch, alpha, cfg);
      CHECK(std::abs(e.e0 / rho - r.value) <= 1e-4);
      auto f = handle_from_input_dist(ch, alpha, e.optimal_input);
      CHECK(std::abs(max_divergence(ch, alpha, f) - e.e0 / rho) <= 1e-4);
      if (r.report.converged) CHECK(r.gap <= 1e-5);
    }
  }
}

TEST_CASE("monotonicity in rho") {
  testing::Random rng(113);
  for (int t = 0; t < 5; ++t) {
    auto ch = rng.cq(2, 3);
    double prev = infinity;
    for (double rho : {0.1, 0.5, 1.0, 2.0, 8.0}) {
      double cur = r_rho_primal(ch, rho, tight());
      CHECK(cur <= prev + 1e-8);
      prev = cur;
    }
    std::vector<double> e;
    for (double rho = 0.0; rho <= 3.0 + 1e-12; rho += 0.5) e.push_back(e0_max(ch, rho, tight()).e0);
    for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] >= e[i - 1] - 1e-9);
    for (std::size_t i = 1; i + 1 < e.size(); ++i) CHECK(e[i + 1] - 2 * e[i] + e[i - 1] <= 1e-8);
  }
}

TEST_CASE("order limits") {
  testing::Random rng(127);
  for (int t = 0; t < 3; ++t) {
    std::vector<DensityOperator> full;
    for (int x = 0; x < 3; ++x) full.push_back(rng.density(2, 2));
    auto f = CQChannel::from_states(full);
    auto low = radius_solve(f, 0.01, tight(1e-8));
    auto inf_r = r_inf_quantum(f, tight(1e-8));
    CHECK(std::abs(low.value - inf_r.value) <= 2e-2);
  }
  auto w = rng.classical(3, 3);
  CHECK(std::abs(r_rho_primal(w, 1e-3, tight()) - capacity_classical(w, tight()).value) <= 2e-3);
}

TEST_CASE("diagonal embeddings reproduce classical quantities") {
  testing::Random rng(131);
  auto cfg = tight(1e-10);
  std::vector<ClassicalChannel> set{testing::bsc(0.1), testing::noiseless(2), testing::typewriter()};
  for (int t = 0; t < 4; ++t) set.push_back(rng.classical(rng.integer(2, 4), rng.integer(2, 4), 0.3));
  for (const auto& w : set) {
    auto q = diagonal_embedding(w);
    auto p = rng.distribution(w.input_size());
    for (double rho : {0.5, 2.0}) {
      CHECK(std::abs(e0_quantum(q, p, rho) - e0_classical(w, p, rho)) <= 1e-8);
      CHECK(std::abs(e0_max(q, rho, cfg).e0 - e0_max(w, rho, cfg).e0) <= 1e-8);
    }
    CHECK(std::abs(r_inf_quantum(q, cfg).value - r_inf_classical(w, cfg).primal) <= 1e-8);
  }
}
