#include "sptheta/channels.hpp"

#include "sptheta/errors.hpp"

#include <cmath>
#include <sstream>

namespace sptheta {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// ProbabilityDistribution

ProbabilityDistribution::ProbabilityDistribution(RVector p) : p_(std::move(p)) {
  if (p_.size() == 0) throw ValidationError("probability distribution must be nonempty");
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (!(p_[i] >= 0.0)) {
      throw ValidationError("probability entry " + std::to_string(i) + " is negative");
    }
  }
  const double s = p_.sum();
  if (std::abs(s - 1.0) > 1e-10) {
    throw ValidationError("probabilities sum to " + fmt_double(s));
  }
}

ProbabilityDistribution ProbabilityDistribution::uniform(Eigen::Index size) {
  return {RVector::Constant(size, 1.0 / static_cast<double>(size)), TrustedTag{}};
}

ProbabilityDistribution ProbabilityDistribution::point_mass(Eigen::Index size, Eigen::Index at) {
  RVector p = RVector::Zero(size);
  p[at] = 1.0;
  return {std::move(p), TrustedTag{}};
}

ProbabilityDistribution ProbabilityDistribution::trusted(const RVector& p) {
  RVector q = p.cwiseMax(0.0);
  const double s = q.sum();
  if (!(s > 0.0)) throw ValidationError("cannot normalize a zero vector");
  return {q / s, TrustedTag{}};
}

// ---------------------------------------------------------------------------
// ConfusabilityGraph

ConfusabilityGraph::ConfusabilityGraph(std::size_t n)
    : n_(n), words_((n + 63) / 64), rows_(n, std::vector<std::uint64_t>(words_, 0)) {}

ConfusabilityGraph::ConfusabilityGraph(std::size_t n, const std::vector<Edge>& edges)
    : ConfusabilityGraph(n) {
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      throw ValidationError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range for " + std::to_string(n) + " vertices");
    }
    if (i == j) throw ValidationError("self-loop at vertex " + std::to_string(i));
    add_edge(i, j);
  }
}

ConfusabilityGraph ConfusabilityGraph::complete(std::size_t n) {
  ConfusabilityGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

ConfusabilityGraph ConfusabilityGraph::empty(std::size_t n) { return ConfusabilityGraph(n); }

ConfusabilityGraph ConfusabilityGraph::cycle(std::size_t n) {
  ConfusabilityGraph g(n);
  if (n >= 3) {
    for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  } else if (n == 2) {
    g.add_edge(0, 1);
  }
  return g;
}

void ConfusabilityGraph::add_edge(std::size_t i, std::size_t j) {
  rows_[i][j / 64] |= std::uint64_t{1} << (j % 64);
  rows_[j][i / 64] |= std::uint64_t{1} << (i % 64);
}

std::vector<Edge> ConfusabilityGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (adjacent(i, j)) out.emplace_back(i, j);
  return out;
}

std::size_t ConfusabilityGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& r : rows_)
    for (auto w : r) twice += static_cast<std::size_t>(__builtin_popcountll(w));
  return twice / 2;
}

// ---------------------------------------------------------------------------
// Channels

ClassicalChannel validate_classical(const RMatrix& rows) {
  if (rows.rows() == 0 || rows.cols() == 0) {
    throw ValidationError("channel matrix must have at least one row and one column");
  }
  for (Eigen::Index x = 0; x < rows.rows(); ++x) {
    for (Eigen::Index y = 0; y < rows.cols(); ++y) {
      const double v = rows(x, y);
      if (!(v >= 0.0) || v > 1.0) {
        throw ValidationError("row " + std::to_string(x) + " has entry " + fmt_double(v) +
                              " outside [0,1] at column " + std::to_string(y));
      }
    }
    const double s = rows.row(x).sum();
    if (std::abs(s - 1.0) > 1e-10) {
      throw ValidationError("row " + std::to_string(x) + " sums to " + fmt_double(s));
    }
  }
  return ClassicalChannel(rows);
}

ClassicalChannel validate_classical(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("channel matrix must have at least one row");
  const std::size_t cols = rows.front().size();
  RMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != cols) {
      throw ValidationError("row " + std::to_string(x) + " has " + std::to_string(rows[x].size()) +
                            " entries, expected " + std::to_string(cols));
    }
    for (std::size_t y = 0; y < cols; ++y)
      m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = rows[x][y];
  }
  return validate_classical(m);
}

CQChannel CQChannel::from_states(std::vector<DensityOperator> states) {
  if (states.empty()) throw ValidationError("channel needs at least one state");
  const auto d = states.front().dim();
  for (std::size_t x = 0; x < states.size(); ++x) {
    if (states[x].dim() != d) {
      throw ValidationError("state " + std::to_string(x) + " has dimension " +
                            std::to_string(states[x].dim()) + ", expected " + std::to_string(d));
    }
  }
  return CQChannel(std::move(states));
}

CQChannel validate_cq(const std::vector<CMatrix>& mats) {
  std::vector<DensityOperator> states;
  states.reserve(mats.size());
  for (std::size_t x = 0; x < mats.size(); ++x) {
    try {
      states.emplace_back(mats[x]);
    } catch (const ValidationError& e) {
      throw ValidationError("state " + std::to_string(x) + ": " + e.what());
    }
  }
  return CQChannel::from_states(std::move(states));
}

CQChannel classical_to_pure(const ClassicalChannel& w) {
  std::vector<DensityOperator> states;
  for (Eigen::Index x = 0; x < w.input_size(); ++x) {
    CVector phi = w.row(x).cwiseSqrt().cast<Complex>();
    states.push_back(DensityOperator::trusted(phi * phi.adjoint()));
  }
  auto ch = CQChannel::from_states(std::move(states));
  ch.input_labels = w.input_labels;
  return ch;
}

CQChannel diagonal_embedding(const ClassicalChannel& w) {
  std::vector<DensityOperator> states;
  for (Eigen::Index x = 0; x < w.input_size(); ++x) {
    CMatrix d = w.row(x).cast<Complex>().asDiagonal();
    states.push_back(DensityOperator::trusted(d));
  }
  auto ch = CQChannel::from_states(std::move(states));
  ch.input_labels = w.input_labels;
  return ch;
}

ConfusabilityGraph confusability_graph(const ClassicalChannel& w) {
  const auto n = static_cast<std::size_t>(w.input_size());
  ConfusabilityGraph g(n);
  const RMatrix& m = w.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double overlap = m.row(static_cast<Eigen::Index>(i))
                                 .dot(m.row(static_cast<Eigen::Index>(j)));
      if (overlap > 0.0) g.add_edge(i, j);
    }
  }
  return g;
}

ConfusabilityGraph confusability_graph(const CQChannel& ch) {
  const auto n = static_cast<std::size_t>(ch.input_size());
  ConfusabilityGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double tr = trace_product(ch.state(static_cast<Eigen::Index>(i)).matrix(),
                                      ch.state(static_cast<Eigen::Index>(j)).matrix());
      if (tr > confusability_threshold) g.add_edge(i, j);
    }
  }
  return g;
}

std::vector<std::size_t> decode_sequence(std::size_t index, std::size_t alphabet, int n) {
  std::vector<std::size_t> seq(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    seq[static_cast<std::size_t>(i)] = index % alphabet;
    index /= alphabet;
  }
  return seq;
}

CQChannel product_channel(const CQChannel& ch, int n) {
  if (n < 1) throw DomainError("blocklength must be positive");
  const auto d = static_cast<std::size_t>(ch.dim());
  const auto k = static_cast<std::size_t>(ch.input_size());
  std::size_t dim = 1, count = 1;
  for (int i = 0; i < n; ++i) {
    dim *= d;
    count *= k;
    if (dim > max_product_dim) {
      throw CapacityError("product dimension " + std::to_string(d) + "^" + std::to_string(n) +
                          " exceeds " + std::to_string(max_product_dim));
    }
  }
  // Every state is a dim x dim dense matrix; keep the whole family bounded too.
  if (count * dim * dim > (std::size_t{1} << 24)) {
    throw CapacityError("product channel needs " + std::to_string(count) + " states of dimension " +
                        std::to_string(dim) + "; too large");
  }
  std::vector<DensityOperator> states;
  states.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const auto seq = decode_sequence(idx, k, n);
    CMatrix s = ch.state(static_cast<Eigen::Index>(seq[0])).matrix();
    for (int i = 1; i < n; ++i)
      s = kron(s, ch.state(static_cast<Eigen::Index>(seq[static_cast<std::size_t>(i)])).matrix());
    states.push_back(DensityOperator::trusted(s));
  }
  return CQChannel::from_states(std::move(states));
}

}  // namespace sptheta
