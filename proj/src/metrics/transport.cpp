#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ambig/error.hpp"
#include "ambig/transport.hpp"

namespace ambig::metrics {

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Cell {
  std::size_t row;
  std::size_t col;
  double flow;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Basis of the transportation simplex: m + n - 1 cells forming a spanning
// tree over row nodes [0, m) and column nodes [m, m + n).
class Basis {
 public:
  Basis(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), adjacency_(rows + cols), is_basic_(rows * cols, false) {}

  void add(std::size_t row, std::size_t col, double flow) {
    const auto id = cells_.size();
    cells_.push_back({row, col, flow});
    adjacency_[row].push_back(id);
    adjacency_[rows_ + col].push_back(id);
    is_basic_[row * cols_ + col] = true;
  }

  // Replaces cell `leaving` by (row, col) carrying `flow`.
  void swap_cell(std::size_t leaving, std::size_t row, std::size_t col, double flow) {
    auto& old = cells_[leaving];
    unlink(old.row, leaving);
    unlink(rows_ + old.col, leaving);
    is_basic_[old.row * cols_ + old.col] = false;
    old = {row, col, flow};
    adjacency_[row].push_back(leaving);
    adjacency_[rows_ + col].push_back(leaving);
    is_basic_[row * cols_ + col] = true;
  }

  bool is_basic(std::size_t row, std::size_t col) const { return is_basic_[row * cols_ + col]; }
  std::size_t size() const { return cells_.size(); }
  Cell& cell(std::size_t id) { return cells_[id]; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<std::size_t>& incident(std::size_t node) const { return adjacency_[node]; }
  std::size_t other_end(std::size_t id, std::size_t node) const {
    const auto& c = cells_[id];
    return node < rows_ ? rows_ + c.col : c.row;
  }

 private:
  void unlink(std::size_t node, std::size_t id) {
    auto& list = adjacency_[node];
    list.erase(std::find(list.begin(), list.end(), id));
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Cell> cells_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<bool> is_basic_;
};

void validate(std::span<const double> supply, std::span<const double> demand, const Matrix& cost) {
  if (supply.empty() || demand.empty()) throw InvalidArgument("transport: empty supply or demand");
  if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
    throw InvalidArgument("transport: cost matrix is " + std::to_string(cost.rows()) + "x" +
                          std::to_string(cost.cols()) + ", expected " +
                          std::to_string(supply.size()) + "x" + std::to_string(demand.size()));
  }
  double total_s = 0.0, total_d = 0.0;
  for (const double s : supply) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("transport: negative or non-finite supply");
    total_s += s;
  }
  for (const double d : demand) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("transport: negative or non-finite demand");
    total_d += d;
  }
  if (std::abs(total_s - total_d) > 1e-9 * std::max(1.0, total_s)) {
    throw InvalidArgument("transport: unbalanced problem");
  }
  if (total_s <= 0.0) throw InvalidArgument("transport: zero total mass");
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    for (const double c : cost.row(i)) {
      if (!std::isfinite(c)) throw InvalidArgument("transport: non-finite cost");
    }
  }
}

// Matrix-minimum start. Every allocation retires exactly one line, so the
// allocated cells form a forest; zero-flow cells then join the components.
Basis initial_basis(std::span<const double> supply, std::span<const double> demand,
                    const Matrix& cost) {
  const auto m = supply.size();
  const auto n = demand.size();
  std::vector<std::size_t> order(m * n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cost(a / n, a % n) < cost(b / n, b % n);
  });

  std::vector<double> s(supply.begin(), supply.end());
  std::vector<double> d(demand.begin(), demand.end());
  std::vector<bool> row_alive(m, true), col_alive(n, true);
  std::size_t rows_left = m, cols_left = n;

  Basis basis(m, n);
  DisjointSets components(m + n);
  for (const auto idx : order) {
    if (rows_left == 0 || cols_left == 0) break;
    const auto i = idx / n;
    const auto j = idx % n;
    if (!row_alive[i] || !col_alive[j]) continue;
    if (s[i] <= d[j]) {
      basis.add(i, j, s[i]);
      d[j] -= s[i];
      s[i] = 0.0;
      row_alive[i] = false;
      --rows_left;
    } else {
      basis.add(i, j, d[j]);
      s[i] -= d[j];
      d[j] = 0.0;
      col_alive[j] = false;
      --cols_left;
    }
    components.unite(i, m + j);
  }
  for (const auto idx : order) {
    if (basis.size() == m + n - 1) break;
    const auto i = idx / n;
    const auto j = idx % n;
    if (components.unite(i, m + j)) basis.add(i, j, 0.0);
  }
  return basis;
}

}  // namespace

TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const Matrix& cost) {
  validate(supply, demand, cost);
  const auto m = supply.size();
  const auto n = demand.size();

  Basis basis = initial_basis(supply, demand, cost);

  double cost_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (const double c : cost.row(i)) cost_scale = std::max(cost_scale, std::abs(c));
  }
  const double tolerance = 1e-12 * cost_scale;
  const std::size_t max_pivots = 50 * (m + n) + 1000;

  std::vector<double> u(m), v(n);
  std::vector<std::size_t> parent_edge(m + n);
  std::vector<std::size_t> queue;
  queue.reserve(m + n);

  const auto bfs_from = [&](std::size_t root) {
    std::fill(parent_edge.begin(), parent_edge.end(), kNone);
    std::vector<bool> seen(m + n, false);
    seen[root] = true;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto node = queue[head];
      for (const auto e : basis.incident(node)) {
        const auto next = basis.other_end(e, node);
        if (seen[next]) continue;
        seen[next] = true;
        parent_edge[next] = e;
        queue.push_back(next);
      }
    }
    if (queue.size() != m + n) throw SolverError("transport: basis is not a spanning tree");
  };

  std::size_t pivots = 0;
  for (;;) {
    // Potentials: u[0] = 0 and cost(i, j) = u[i] + v[j] on basic cells.
    bfs_from(0);
    u[0] = 0.0;
    for (std::size_t k = 1; k < queue.size(); ++k) {
      const auto node = queue[k];
      const auto& c = basis.cells()[parent_edge[node]];
      if (node < m) {
        u[node] = cost(c.row, c.col) - v[c.col];
      } else {
        v[node - m] = cost(c.row, c.col) - u[c.row];
      }
    }

    double best = -tolerance;
    std::size_t enter_row = kNone, enter_col = kNone;
    for (std::size_t i = 0; i < m; ++i) {
      const auto crow = cost.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double reduced = crow[j] - u[i] - v[j];
        if (reduced < best && !basis.is_basic(i, j)) {
          best = reduced;
          enter_row = i;
          enter_col = j;
        }
      }
    }
    if (enter_row == kNone) break;
    if (++pivots > max_pivots) throw SolverError("transport: pivot limit exceeded");

    // Tree path from column node back to the entering row; odd positions
    // (first, third, ...) lose flow.
    bfs_from(enter_row);
    std::vector<std::size_t> path;
    for (std::size_t node = m + enter_col; node != enter_row;) {
      const auto e = parent_edge[node];
      path.push_back(e);
      node = basis.other_end(e, node);
    }
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = kNone;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const double f = basis.cell(path[k]).flow;
      if (f < theta) {
        theta = f;
        leaving = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      auto& c = basis.cell(path[k]);
      c.flow += (k % 2 == 0) ? -theta : theta;
      if (c.flow < 0.0) c.flow = 0.0;
    }
    basis.swap_cell(leaving, enter_row, enter_col, theta);
  }

  TransportSolution solution;
  solution.pivots = pivots;
  solution.plan.flow = Matrix(m, n);
  solution.plan.row_marginals.assign(supply.begin(), supply.end());
  solution.plan.col_marginals.assign(demand.begin(), demand.end());
  for (const auto& c : basis.cells()) {
    solution.plan.flow(c.row, c.col) = c.flow;
    solution.cost += c.flow * cost(c.row, c.col);
  }
  return solution;
}

}  // namespace ambig::metrics
