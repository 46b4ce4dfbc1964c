#include "support.hpp"

#include "sptheta/errors.hpp"
#include "sptheta/zeroerror.hpp"

#include <doctest.h>

#include <string>

using namespace sptheta;
using testing::diag;

TEST_CASE("validate_classical") {
  auto w = testing::bsc(0.1);
  CHECK(w.input_size() == 2);
  CHECK(w(0, 1) == doctest::Approx(0.1));
  CHECK_NOTHROW(testing::noiseless(2));
  try {
    validate_classical({{0.5, 0.4}, {0.1, 0.9}});
    FAIL("accepted a bad row");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()) == "row 0 sums to 0.9");
  }
  CHECK_THROWS_AS(validate_classical({{1.2, -0.2}}), ValidationError);
  CHECK_THROWS_AS(validate_classical({{0.5, 0.5}, {1.0}}), ValidationError);
  CHECK_THROWS_AS(validate_classical(std::vector<std::vector<double>>{}), ValidationError);
}

TEST_CASE("validate_cq") {
  auto ch = validate_cq({diag({1, 0}), diag({0, 1})});
  CHECK(ch.dim() == 2);
  CMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK_NOTHROW(validate_cq({diag({0.5, 0.5}), plus}));
  try {
    validate_cq({diag({0.6, 0.5})});
    FAIL("accepted trace 1.1");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("state 0") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_cq({diag({1, 0}), diag({1, 0, 0})}), ValidationError);
}

TEST_CASE("probability distributions") {
  CHECK_THROWS_AS(ProbabilityDistribution(RVector::Constant(2, 0.4)), ValidationError);
  CHECK_THROWS_AS(ProbabilityDistribution(RVector(RVector::Zero(0))), ValidationError);
  CHECK(ProbabilityDistribution::uniform(4)[2] == doctest::Approx(0.25));
}

TEST_CASE("classical_to_pure") {
  auto s = classical_to_pure(testing::bsc(0.1));
  CHECK(trace_product(s.state(0).matrix(), s.state(1).matrix()) ==
        doctest::Approx(0.36).epsilon(1e-12));  // |<phi0|phi1>|^2 = 0.6^2

  auto id = classical_to_pure(testing::noiseless(3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(trace_product(id.state(a).matrix(), id.state(b).matrix()) ==
            doctest::Approx(a == b ? 1.0 : 0.0));

  auto same = classical_to_pure(validate_classical({{0.3, 0.7}, {0.3, 0.7}}));
  CHECK(trace_product(same.state(0).matrix(), same.state(1).matrix()) == doctest::Approx(1.0));
}

TEST_CASE("classical_to_pure preserves Bhattacharyya overlaps") {
  testing::Random r(17);
  for (int t = 0; t < 20; ++t) {
    auto w = r.classical(r.integer(2, 5), r.integer(2, 5), 0.3);
    auto ch = classical_to_pure(w);
    for (Eigen::Index a = 0; a < w.input_size(); ++a)
      for (Eigen::Index b = 0; b < w.input_size(); ++b) {
        double bhat = (w.matrix().row(a).cwiseProduct(w.matrix().row(b))).cwiseSqrt().sum();
        double tr = trace_product(ch.state(a).matrix(), ch.state(b).matrix());
        CHECK(std::abs(std::sqrt(std::max(tr, 0.0)) - bhat) <= 1e-12);
      }
  }
}

TEST_CASE("confusability graphs") {
  CHECK(confusability_graph(testing::bsc(0.1)) == ConfusabilityGraph::complete(2));
  CHECK(confusability_graph(testing::noiseless(2)) == ConfusabilityGraph::empty(2));
  CHECK(confusability_graph(testing::typewriter()) == ConfusabilityGraph::cycle(5));

  testing::Random r(23);
  for (int t = 0; t < 20; ++t) {
    auto w = r.classical(r.integer(2, 6), r.integer(2, 6), 0.5);
    CHECK(confusability_graph(classical_to_pure(w)) == confusability_graph(w));
    CHECK(confusability_graph(diagonal_embedding(w)) == confusability_graph(w));
  }
}

TEST_CASE("graph construction errors") {
  CHECK_THROWS_AS(ConfusabilityGraph(3, {{0, 0}}), ValidationError);
  CHECK_THROWS_AS(ConfusabilityGraph(3, {{0, 3}}), ValidationError);
  ConfusabilityGraph g(3, {{0, 1}, {1, 0}});
  CHECK(g.edge_count() == 1);
  CHECK(g.adjacent(1, 0));
  CHECK_FALSE(g.adjacent(0, 2));
}

TEST_CASE("product_channel") {
  auto ch = classical_to_pure(testing::bsc(0.2));
  auto one = product_channel(ch, 1);
  CHECK(one.input_size() == 2);
  CHECK(max_abs(one.state(1).matrix() - ch.state(1).matrix()) == 0.0);

  auto orth = validate_cq({diag({1, 0}), diag({0, 1})});
  auto two = product_channel(orth, 2);
  CHECK(two.input_size() == 4);
  CHECK(two.dim() == 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(trace_product(two.state(a).matrix(), two.state(b).matrix()) ==
            doctest::Approx(a == b ? 1.0 : 0.0));

  testing::Random r(29);
  auto q = r.cq(2, 3);
  auto q2 = product_channel(q, 2);
  for (int t = 0; t < 10; ++t) {
    auto i = static_cast<std::size_t>(r.integer(0, 8)), j = static_cast<std::size_t>(r.integer(0, 8));
    auto si = decode_sequence(i, 3, 2), sj = decode_sequence(j, 3, 2);
    double rhs = 1.0;
    for (int k = 0; k < 2; ++k)
      rhs *= trace_product(q.state(static_cast<Eigen::Index>(si[static_cast<std::size_t>(k)])).matrix(),
                           q.state(static_cast<Eigen::Index>(sj[static_cast<std::size_t>(k)])).matrix());
    double lhs = trace_product(q2.state(static_cast<Eigen::Index>(i)).matrix(),
                               q2.state(static_cast<Eigen::Index>(j)).matrix());
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }

  CHECK_THROWS_AS(product_channel(q, 13), CapacityError);
  CHECK_THROWS_AS(product_channel(q, 0), DomainError);
}

TEST_CASE("product channel graph is the strong square") {
  auto pent = diagonal_embedding(testing::typewriter());
  CHECK(confusability_graph(product_channel(pent, 2)) ==
        strong_product(ConfusabilityGraph::cycle(5), ConfusabilityGraph::cycle(5)));
  auto pure = classical_to_pure(testing::typewriter());
  CHECK(confusability_graph(product_channel(pure, 2)) == strong_power(ConfusabilityGraph::cycle(5), 2));
}

TEST_CASE("decode_sequence is most significant first") {
  CHECK(decode_sequence(7, 5, 2) == std::vector<std::size_t>{1, 2});
  CHECK(decode_sequence(0, 3, 3) == std::vector<std::size_t>{0, 0, 0});
}
