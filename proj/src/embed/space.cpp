#include <cmath>
#include <fstream>

#include "ambig/embed.hpp"
#include "ambig/error.hpp"

namespace ambig::embed {

EmbeddingSpace::EmbeddingSpace(std::string space_id, std::size_t dim)
    : id_(std::move(space_id)), dim_(dim) {
  if (dim_ == 0) throw InvalidArgument("embedding dimension must be positive");
}

bool EmbeddingSpace::add(std::string word, std::span<const float> values) {
  if (values.size() != dim_) {
    throw InvalidArgument("vector for '" + word + "' has " + std::to_string(values.size()) +
                          " components, expected " + std::to_string(dim_));
  }
  double sq = 0.0;
  for (const float v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite component in vector for '" + word + "'");
    sq += static_cast<double>(v) * static_cast<double>(v);
  }
  if (sq == 0.0) throw InvalidArgument("zero vector for '" + word + "'");
  if (index_.contains(word)) return false;

  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
  norms_.push_back(std::sqrt(sq));
  return true;
}

std::optional<std::size_t> EmbeddingSpace::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) it = index_.find(fold_case(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingSpace::index_of(std::string_view word) const {
  const auto idx = find(word);
  if (!idx) throw OutOfVocabularyError(std::string(word));
  return *idx;
}

double cosine(const EmbeddingSpace& space, std::size_t i, std::size_t j) {
  const auto a = space.vector(i);
  const auto b = space.vector(j);
  double dot = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) dot += static_cast<double>(a[d]) * b[d];
  return dot / (space.norm(i) * space.norm(j));
}

double cosine(const EmbeddingSpace& space, std::string_view w1, std::string_view w2) {
  return cosine(space, space.index_of(w1), space.index_of(w2));
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::manual_wiki: return "manual_wiki";
    case Provenance::manual_text: return "manual_text";
    case Provenance::seed_expanded: return "seed_expanded";
  }
  return "unknown";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "manual_wiki") return Provenance::manual_wiki;
  if (name == "manual_text") return Provenance::manual_text;
  if (name == "seed_expanded") return Provenance::seed_expanded;
  throw ConfigError("unknown lexicon provenance: '" + std::string(name) + "'");
}

TopicLexicon make_lexicon(std::string name, const std::vector<std::string>& words,
                          Provenance provenance) {
  TopicLexicon lex;
  lex.name = std::move(name);
  lex.provenance = provenance;
  WordSet seen;
  for (const auto& w : words) {
    auto folded = fold_case(w);
    if (folded.empty() || seen.contains(folded)) continue;
    seen.insert(folded);
    lex.words.push_back(std::move(folded));
  }
  return lex;
}

TopicLexicon load_lexicon(const std::filesystem::path& path, std::string name,
                          Provenance provenance) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string current;
    for (const char c : line) {
      if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
        if (!current.empty()) words.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty()) words.push_back(std::move(current));
  }
  auto lex = make_lexicon(std::move(name), words, provenance);
  if (lex.words.empty()) throw EmptyInputError("lexicon file has no words: " + path.string());
  return lex;
}

}  // namespace ambig::embed
