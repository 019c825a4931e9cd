#include "lipaging/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipaging/errors.hpp"

namespace lipaging {

TransitionMatrix::TransitionMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), dense_(std::move(entries)) {
  if (n_ == 0) throw InvalidArgument("transition matrix must be non-empty");
  if (dense_.size() != n_ * n_) {
    throw InvalidArgument("transition matrix expects " + std::to_string(n_ * n_) +
                          " entries, got " + std::to_string(dense_.size()));
  }
  row_start_.reserve(n_ + 1);
  for (CellId i = 0; i < n_; ++i) {
    row_start_.push_back(sparse_.size());
    double sum = 0.0;
    for (CellId j = 0; j < n_; ++j) {
      const double p = dense_[i * n_ + j];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") = " + std::to_string(p) +
                              " is not a probability");
      }
      sum += p;
      if (p > 0.0) sparse_.push_back({j, p});
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("row " + std::to_string(i) + " sums to " +
                            std::to_string(sum) + ", not 1");
    }
  }
  row_start_.push_back(sparse_.size());
}

std::span<const double> TransitionMatrix::row(CellId from) const {
  return std::span<const double>(dense_).subspan(from * n_, n_);
}

std::span<const TransitionMatrix::Entry> TransitionMatrix::nonzeros(CellId from) const {
  return std::span<const Entry>(sparse_).subspan(
      row_start_[from], row_start_[from + 1] - row_start_[from]);
}

void TransitionMatrix::left_multiply(std::span<const double> v,
                                     std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (CellId i = 0; i < n_; ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    for (const auto& e : nonzeros(i)) out[e.col] += vi * e.prob;
  }
}

bool TransitionMatrix::supported_on(const CellGraph& graph) const {
  if (graph.size() != n_) return false;
  for (CellId i = 0; i < n_; ++i) {
    const auto adj = graph.neighbors(i);
    for (const auto& e : nonzeros(i)) {
      if (n_ == 1 && e.col == i) continue;
      if (!std::binary_search(adj.begin(), adj.end(), e.col)) return false;
    }
  }
  return true;
}

TransitionMatrix symmetric_random_walk(const CellGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> entries(n * n, 0.0);
  if (n == 1) {
    entries[0] = 1.0;
    return TransitionMatrix(1, std::move(entries));
  }
  for (CellId i = 0; i < n; ++i) {
    const auto adj = graph.neighbors(i);
    const double p = 1.0 / static_cast<double>(adj.size());
    for (CellId j : adj) entries[i * n + j] = p;
  }
  return TransitionMatrix(n, std::move(entries));
}

StationaryDistribution stationary_distribution(const TransitionMatrix& P, double tol,
                                               std::size_t max_iterations) {
  if (!(tol > 0.0)) throw InvalidArgument("stationary tolerance must be positive");
  const std::size_t n = P.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);

  double residual = 0.0;
  for (std::size_t it = 0; it <= max_iterations; ++it) {
    P.left_multiply(pi, next);
    residual = 0.0;
    for (CellId i = 0; i < n; ++i) {
      residual = std::max(residual, std::abs(next[i] - pi[i]));
    }
    if (residual <= tol) return {std::move(pi), residual, it};

    double sum = 0.0;
    for (CellId i = 0; i < n; ++i) {
      pi[i] = 0.5 * (pi[i] + next[i]);
      sum += pi[i];
    }
    for (auto& x : pi) x /= sum;
  }
  throw SolverError("stationary distribution did not converge in " +
                        std::to_string(max_iterations) +
                        " iterations (residual " + std::to_string(residual) + ")",
                    residual);
}

Propagator::Propagator(const TransitionMatrix& P, CellId start)
    : P_(&P), current_(P.size(), 0.0), scratch_(P.size(), 0.0) {
  if (start >= P.size()) {
    throw InvalidArgument("start cell " + std::to_string(start) +
                          " out of range for " + std::to_string(P.size()) +
                          " cells");
  }
  current_[start] = 1.0;
}

void Propagator::advance() {
  P_->left_multiply(current_, scratch_);
  current_.swap(scratch_);
  ++steps_;
}

std::vector<std::vector<double>> propagate(const TransitionMatrix& P, CellId start,
                                           std::size_t steps) {
  Propagator prop(P, start);
  std::vector<std::vector<double>> out;
  out.reserve(steps + 1);
  out.emplace_back(prop.current().begin(), prop.current().end());
  for (std::size_t k = 0; k < steps; ++k) {
    prop.advance();
    out.emplace_back(prop.current().begin(), prop.current().end());
  }
  return out;
}

}  // namespace lipaging
