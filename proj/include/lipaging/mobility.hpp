#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lipaging/topology.hpp"

namespace lipaging {

/**
 * Dense row-stochastic matrix of the embedded cell-transition chain.
 *
 * Rows are validated on construction (entries in [0, 1], row sums within
 * 1e-12 of one).  A sparse view of each row is kept alongside the dense
 * storage so that propagation costs O(nnz) per step.
 */
class TransitionMatrix {
 public:
  struct Entry {
    CellId col;
    double prob;
  };

  static constexpr double kRowSumTolerance = 1e-12;

  /// `entries` is row-major, n*n values.
  TransitionMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double operator()(CellId from, CellId to) const { return dense_[from * n_ + to]; }
  std::span<const double> row(CellId from) const;
  std::span<const Entry> nonzeros(CellId from) const;

  /// out = v * P.  `out` must not alias `v`.
  void left_multiply(std::span<const double> v, std::span<double> out) const;

  /// True when every positive entry lies on an edge of `graph`.
  bool supported_on(const CellGraph& graph) const;

 private:
  std::size_t n_;
  std::vector<double> dense_;
  std::vector<std::size_t> row_start_;
  std::vector<Entry> sparse_;
};

/// p_ij = 1/deg(i) on edges.  A single-cell graph yields the 1x1 identity.
TransitionMatrix symmetric_random_walk(const CellGraph& graph);

struct StationaryDistribution {
  std::vector<double> pi;
  /// max-norm of pi*P - pi at termination
  double residual = 0.0;
  std::size_t iterations = 0;
};

inline constexpr double kDefaultStationaryTolerance = 1e-12;
inline constexpr std::size_t kDefaultStationaryIterationCap = 1'000'000;

/**
 * Power iteration on the lazy chain (P + I)/2, which shares its stationary
 * vector with P but is aperiodic.  Throws SolverError when the residual is
 * still above `tol` after `max_iterations`.
 */
StationaryDistribution stationary_distribution(
    const TransitionMatrix& P, double tol = kDefaultStationaryTolerance,
    std::size_t max_iterations = kDefaultStationaryIterationCap);

/// Incremental producer of v_k = e_u P^k.  Never forms matrix powers.
class Propagator {
 public:
  Propagator(const TransitionMatrix& P, CellId start);

  std::span<const double> current() const { return current_; }
  std::size_t steps() const { return steps_; }
  void advance();

 private:
  const TransitionMatrix* P_;
  std::vector<double> current_;
  std::vector<double> scratch_;
  std::size_t steps_ = 0;
};

/// Materializes v_0..v_K.  Intended for tests and small K.
std::vector<std::vector<double>> propagate(const TransitionMatrix& P, CellId start,
                                           std::size_t steps);

}  // namespace lipaging
