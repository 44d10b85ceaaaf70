#include "ambig/corpus.hpp"
#include "ambig/error.hpp"

namespace ambig::corpus {

void Histogram::add(const std::string& word, std::int64_t n) {
  if (n < 0) throw InvalidArgument("negative count for '" + word + "'");
  if (n == 0) return;
  counts[word] += n;
  total += n;
}

std::int64_t Histogram::count(const std::string& word) const {
  const auto it = counts.find(word);
  return it == counts.end() ? 0 : it->second;
}

Histogram term_frequencies(const TokenStream& ts) {
  Histogram h;
  for (const auto& t : ts.tokens) h.add(t);
  return h;
}

}  // namespace ambig::corpus
