#pragma once

// Channel data model: classical transition matrices, classical-quantum
// channels given by density operators, input distributions and the
// confusability graph on input symbols.

#include "sptheta/matcore.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sptheta {

using Edge = std::pair<std::size_t, std::size_t>;

class ProbabilityDistribution {
 public:
  /// Throws ValidationError unless entries are >= 0 and sum to 1 within 1e-10.
  explicit ProbabilityDistribution(RVector p);

  static ProbabilityDistribution uniform(Eigen::Index size);
  static ProbabilityDistribution point_mass(Eigen::Index size, Eigen::Index at);
  /// Clips negatives to zero and renormalizes; for solver iterates.
  static ProbabilityDistribution trusted(const RVector& p);

  Eigen::Index size() const noexcept { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_[i]; }
  const RVector& values() const noexcept { return p_; }

 private:
  struct TrustedTag {};
  ProbabilityDistribution(RVector p, TrustedTag) : p_(std::move(p)) {}
  RVector p_;
};

/// W(y|x): rows indexed by inputs, columns by outputs.
class ClassicalChannel {
 public:
  Eigen::Index input_size() const noexcept { return w_.rows(); }
  Eigen::Index output_size() const noexcept { return w_.cols(); }
  const RMatrix& matrix() const noexcept { return w_; }
  double operator()(Eigen::Index x, Eigen::Index y) const { return w_(x, y); }
  RVector row(Eigen::Index x) const { return w_.row(x).transpose(); }

  std::vector<std::string> input_labels;

 private:
  friend ClassicalChannel validate_classical(const RMatrix& rows);
  explicit ClassicalChannel(RMatrix w) : w_(std::move(w)) {}
  RMatrix w_;
};

class CQChannel {
 public:
  Eigen::Index input_size() const noexcept { return static_cast<Eigen::Index>(states_.size()); }
  Eigen::Index dim() const noexcept { return states_.front().dim(); }
  const std::vector<DensityOperator>& states() const noexcept { return states_; }
  const DensityOperator& state(Eigen::Index x) const { return states_[static_cast<std::size_t>(x)]; }

  /// Builds from already validated states of a common dimension.
  static CQChannel from_states(std::vector<DensityOperator> states);

  std::vector<std::string> input_labels;

 private:
  explicit CQChannel(std::vector<DensityOperator> s) : states_(std::move(s)) {}
  std::vector<DensityOperator> states_;
};

/// Undirected simple graph; an edge joins two confusable input symbols.
class ConfusabilityGraph {
 public:
  explicit ConfusabilityGraph(std::size_t n = 0);
  /// Throws ValidationError on self-loops or out-of-range endpoints.
  ConfusabilityGraph(std::size_t n, const std::vector<Edge>& edges);

  static ConfusabilityGraph complete(std::size_t n);
  static ConfusabilityGraph empty(std::size_t n);
  static ConfusabilityGraph cycle(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool adjacent(std::size_t i, std::size_t j) const {
    return (rows_[i][j / 64] >> (j % 64)) & 1u;
  }
  void add_edge(std::size_t i, std::size_t j);
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;
  std::size_t words() const noexcept { return words_; }
  /// Adjacency row as 64-bit words, bit j of word j/64 set iff i ~ j.
  const std::vector<std::uint64_t>& row(std::size_t i) const { return rows_[i]; }

  bool operator==(const ConfusabilityGraph& other) const = default;

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

/// Row-stochastic check with row-indexed diagnostics.
ClassicalChannel validate_classical(const RMatrix& rows);
ClassicalChannel validate_classical(const std::vector<std::vector<double>>& rows);
/// Brace-list rows, e.g. validate_classical({{0.9, 0.1}, {0.1, 0.9}}).
inline ClassicalChannel validate_classical(std::initializer_list<std::vector<double>> rows) {
  return validate_classical(std::vector<std::vector<double>>(rows));
}

/// Hermitian, PSD, unit-trace check for every state, with state-indexed diagnostics.
CQChannel validate_cq(const std::vector<CMatrix>& mats);

/// S_x = |phi_x><phi_x| with phi_x(y) = sqrt(W(y|x)).
CQChannel classical_to_pure(const ClassicalChannel& w);

/// S_x = diag(W(.|x)); the commuting embedding of a classical channel.
CQChannel diagonal_embedding(const ClassicalChannel& w);

/// Tr(S_x S_x') above this counts as confusable.
inline constexpr double confusability_threshold = 1e-10;

ConfusabilityGraph confusability_graph(const ClassicalChannel& w);
ConfusabilityGraph confusability_graph(const CQChannel& ch);

/// Hard cap on the Hilbert-space dimension of tensor powers.
inline constexpr std::size_t max_product_dim = 4096;

/// n-fold product channel; input index is the base-|X| number x1 x2 ... xn
/// (x1 most significant). Throws CapacityError past max_product_dim.
CQChannel product_channel(const CQChannel& ch, int n);

/// Decodes a product-channel input index into its symbol sequence.
std::vector<std::size_t> decode_sequence(std::size_t index, std::size_t alphabet, int n);

}  // namespace sptheta
