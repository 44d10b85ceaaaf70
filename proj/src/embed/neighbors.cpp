#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ambig/embed.hpp"
#include "ambig/error.hpp"

namespace ambig::embed {
namespace {

bool ranks_before(const Neighbor& a, const Neighbor& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.word < b.word;
}

template <typename Similarity>
std::vector<Neighbor> top_k(const EmbeddingSpace& space, std::size_t k,
                            const std::unordered_set<std::size_t>& skip, const WordSet& exclude,
                            Similarity&& similarity) {
  std::vector<Neighbor> candidates;
  if (k == 0) return candidates;
  candidates.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (skip.contains(i) || exclude.contains(space.word(i))) continue;
    candidates.push_back({space.word(i), similarity(i)});
  }
  const auto n = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n),
                    candidates.end(), ranks_before);
  candidates.resize(n);
  return candidates;
}

std::unordered_set<std::size_t> excluded_indices(const EmbeddingSpace& space, const WordSet& exclude) {
  std::unordered_set<std::size_t> out;
  for (const auto& w : exclude) {
    if (const auto idx = space.find(w)) out.insert(*idx);
  }
  return out;
}

}  // namespace

std::vector<Neighbor> nearest_neighbors(const EmbeddingSpace& space, std::string_view query,
                                        std::size_t k, const WordSet& exclude) {
  const auto q = space.index_of(query);
  auto skip = excluded_indices(space, exclude);
  skip.insert(q);
  return top_k(space, k, skip, exclude, [&](std::size_t i) { return cosine(space, q, i); });
}

std::vector<Neighbor> nearest_to_vector(const EmbeddingSpace& space, std::span<const double> query,
                                        std::size_t k, const WordSet& exclude) {
  if (query.size() != space.dim()) throw InvalidArgument("query vector has the wrong dimension");
  double qnorm = 0.0;
  for (const double v : query) qnorm += v * v;
  qnorm = std::sqrt(qnorm);
  if (qnorm == 0.0) throw InvalidArgument("query vector is zero");

  const auto skip = excluded_indices(space, exclude);
  return top_k(space, k, skip, exclude, [&](std::size_t i) {
    const auto v = space.vector(i);
    double dot = 0.0;
    for (std::size_t d = 0; d < v.size(); ++d) dot += query[d] * v[d];
    return dot / (qnorm * space.norm(i));
  });
}

TopicLexicon expand_seed(const EmbeddingSpace& space, std::string name,
                         const std::vector<std::string>& seed, std::size_t k) {
  TopicLexicon lex;
  lex.name = std::move(name);
  lex.provenance = Provenance::seed_expanded;
  lex.space_id = space.id();

  std::vector<std::size_t> found;
  WordSet seed_words;
  for (const auto& raw : seed) {
    auto w = fold_case(raw);
    if (w.empty() || seed_words.contains(w)) continue;
    seed_words.insert(w);
    lex.seed.push_back(w);
    if (const auto idx = space.find(w)) {
      found.push_back(*idx);
    } else {
      lex.dropped_seed.push_back(w);
    }
  }
  if (found.empty()) {
    throw OutOfVocabularyError(lex.seed.empty() ? std::string() : lex.seed.front());
  }

  std::vector<double> mean(space.dim(), 0.0);
  for (const auto idx : found) {
    const auto v = space.vector(idx);
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += v[d];
  }
  for (auto& m : mean) m /= static_cast<double>(found.size());

  WordSet exclude = seed_words;
  for (const auto idx : found) exclude.insert(space.word(idx));

  WordSet seen;
  for (auto& n : nearest_to_vector(space, mean, k, exclude)) {
    auto w = fold_case(n.word);
    if (seen.insert(w).second) lex.words.push_back(std::move(w));
  }
  for (const auto& w : lex.seed) {
    if (space.contains(w) && seen.insert(w).second) lex.words.push_back(w);
  }
  return lex;
}

}  // namespace ambig::embed
