#include <algorithm>
#include <cmath>
#include <limits>

#include "ambig/error.hpp"
#include "ambig/metrics.hpp"

namespace ambig::metrics {
namespace {

void check_nbow(const Nbow& b, std::string_view side) {
  if (b.support.empty() || b.support.size() != b.weights.size()) {
    throw InvalidArgument(std::string(side) + " nBOW is empty or malformed");
  }
  double total = 0.0;
  for (const double w : b.weights) {
    if (!(w >= 0.0)) throw InvalidArgument(std::string(side) + " nBOW has a negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument(std::string(side) + " nBOW weights do not sum to 1");
  }
}

void check_shapes(const Nbow& src, const Nbow& dst, const Matrix& costs) {
  check_nbow(src, "source");
  check_nbow(dst, "target");
  if (costs.rows() != src.size() || costs.cols() != dst.size()) {
    throw InvalidArgument("cost matrix does not match the nBOW supports");
  }
}

}  // namespace

Nbow nbow(const corpus::Histogram& h, const embed::EmbeddingSpace& space, std::size_t max_support) {
  if (h.total <= 0) throw UnscorableError("histogram is empty");
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [w, c] : h.counts) {
    if (space.contains(w)) kept.emplace_back(w, c);
  }
  if (kept.empty()) throw UnscorableError("no histogram word has a vector in space " + space.id());
  if (max_support > 0 && kept.size() > max_support) {
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    kept.resize(max_support);
    std::sort(kept.begin(), kept.end());
  }
  double total = 0.0;
  for (const auto& [w, c] : kept) total += static_cast<double>(c);

  Nbow out;
  for (auto& [w, c] : kept) {
    out.support.push_back(std::move(w));
    out.weights.push_back(static_cast<double>(c) / total);
  }
  return out;
}

Nbow uniform_nbow(const std::vector<std::string>& words, const embed::EmbeddingSpace& space) {
  Nbow out;
  embed::WordSet seen;
  for (const auto& w : words) {
    if (space.contains(w) && seen.insert(w).second) out.support.push_back(w);
  }
  if (out.support.empty()) throw UnscorableError("no lexicon word has a vector in space " + space.id());
  out.weights.assign(out.support.size(), 1.0 / static_cast<double>(out.support.size()));
  return out;
}

Matrix ground_costs(const std::vector<std::string>& src_words, const std::vector<std::string>& dst_words,
                    const embed::EmbeddingSpace& space, bool unit_normalize) {
  std::vector<std::size_t> src_idx, dst_idx;
  for (const auto& w : src_words) src_idx.push_back(space.index_of(w));
  for (const auto& w : dst_words) dst_idx.push_back(space.index_of(w));

  Matrix costs(src_idx.size(), dst_idx.size());
  for (std::size_t i = 0; i < src_idx.size(); ++i) {
    const auto a = space.vector(src_idx[i]);
    const double sa = unit_normalize ? 1.0 / space.norm(src_idx[i]) : 1.0;
    for (std::size_t j = 0; j < dst_idx.size(); ++j) {
      const auto b = space.vector(dst_idx[j]);
      const double sb = unit_normalize ? 1.0 / space.norm(dst_idx[j]) : 1.0;
      double sq = 0.0;
      for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = sa * a[d] - sb * b[d];
        sq += diff * diff;
      }
      costs(i, j) = std::sqrt(sq);
    }
  }
  return costs;
}

WmdResult wmd_exact(const Nbow& src, const Nbow& dst, const Matrix& costs) {
  check_shapes(src, dst, costs);
  auto solution = solve_transport(src.weights, dst.weights, costs);
  return {solution.cost, std::move(solution.plan)};
}

double wmd_relaxed(const Nbow& src, const Nbow& dst, const Matrix& costs) {
  check_shapes(src, dst, costs);
  double out_bound = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto row = costs.row(i);
    out_bound += src.weights[i] * *std::min_element(row.begin(), row.end());
  }
  double in_bound = 0.0;
  for (std::size_t j = 0; j < dst.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < src.size(); ++i) best = std::min(best, costs(i, j));
    in_bound += dst.weights[j] * best;
  }
  return std::max(out_bound, in_bound);
}

}  // namespace ambig::metrics
