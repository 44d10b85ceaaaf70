#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ambig::metrics {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct TransportPlan {
  Matrix flow;
  std::vector<double> row_marginals;
  std::vector<double> col_marginals;
};

struct TransportSolution {
  double cost = 0.0;
  TransportPlan plan;
  std::size_t pivots = 0;
};

/// Exact balanced transportation problem: minimize sum flow(i,j) * cost(i,j)
/// subject to row sums = supply and column sums = demand, flow >= 0.
///
/// Transportation simplex over a spanning-tree basis. The initial basis comes
/// from the matrix-minimum rule, completed to a spanning tree with zero-flow
/// cells; each pivot prices all non-basic cells with the row/column
/// potentials, enters the most negative reduced cost and ratio-tests around
/// the unique tree cycle. Supplies and demands must be non-negative with
/// equal totals (relative tolerance 1e-9); throws InvalidArgument otherwise
/// and SolverError if the pivot limit is exceeded.
TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const Matrix& cost);

}  // namespace ambig::metrics
