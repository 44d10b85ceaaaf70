#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ambig/corpus.hpp"

namespace ambig::embed {

using corpus::fold_case;

/// Word -> vector map with a fixed dimension. Vectors are stored as float;
/// norms are cached in double. Lookups are case-folded. Immutable once built
/// apart from add(), so a fully loaded space can be shared across threads.
class EmbeddingSpace {
 public:
  EmbeddingSpace(std::string space_id, std::size_t dim);

  /// Appends a word. Returns false (and changes nothing) if the word is
  /// already present. Throws on a dimension mismatch or a zero vector.
  bool add(std::string word, std::span<const float> values);

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }

  std::optional<std::size_t> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }
  /// Throws OutOfVocabularyError.
  std::size_t index_of(std::string_view word) const;

  const std::string& word(std::size_t index) const { return words_[index]; }
  const std::vector<std::string>& words() const { return words_; }
  std::span<const float> vector(std::size_t index) const {
    return {data_.data() + index * dim_, dim_};
  }
  double norm(std::size_t index) const { return norms_[index]; }

 private:
  std::string id_;
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class VectorFormat { plain, headered };

/// Guesses the format from the first line: two integer fields mean headered.
VectorFormat sniff_vector_format(const std::filesystem::path& path);

struct LoadStats {
  std::size_t records = 0;
  std::size_t duplicates = 0;    // later occurrences dropped
  std::size_t zero_vectors = 0;  // rejected records
};

EmbeddingSpace load_vectors(const std::filesystem::path& path, VectorFormat format,
                            std::string space_id, LoadStats* stats = nullptr);
EmbeddingSpace parse_vectors(std::string_view text, VectorFormat format, std::string space_id,
                             LoadStats* stats = nullptr);

/// Headered text format, 6 significant digits per component unless more
/// are needed to read the float back exactly.
void save_vectors(const EmbeddingSpace& space, const std::filesystem::path& path);
std::string format_vectors(const EmbeddingSpace& space);

/// Cosine similarity accumulated in double. Throws OutOfVocabularyError.
double cosine(const EmbeddingSpace& space, std::string_view w1, std::string_view w2);
double cosine(const EmbeddingSpace& space, std::size_t i, std::size_t j);

struct Neighbor {
  std::string word;
  double similarity;
};

using WordSet = std::set<std::string, std::less<>>;

/// The k most cosine-similar words to `query`, excluding the query and
/// `exclude`. Sorted by similarity descending, ties by word ascending.
std::vector<Neighbor> nearest_neighbors(const EmbeddingSpace& space, std::string_view query,
                                        std::size_t k, const WordSet& exclude = {});

/// Same ranking against an arbitrary query vector (length dim, nonzero).
std::vector<Neighbor> nearest_to_vector(const EmbeddingSpace& space, std::span<const double> query,
                                        std::size_t k, const WordSet& exclude = {});

enum class Provenance { manual_wiki, manual_text, seed_expanded };
std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view name);

/// Named word list standing for one interpretation of the text.
struct TopicLexicon {
  std::string name;
  std::vector<std::string> words;  // unique, lowercase
  Provenance provenance = Provenance::manual_wiki;
  std::vector<std::string> seed;   // empty for manual lists
  std::string space_id;            // space used for expansion, if any
  std::vector<std::string> dropped_seed;  // seed words missing from the space
};

/// One word per line (commas also separate). Words are case-folded and
/// deduplicated in first-seen order.
TopicLexicon load_lexicon(const std::filesystem::path& path, std::string name, Provenance provenance);
TopicLexicon make_lexicon(std::string name, const std::vector<std::string>& words, Provenance provenance);

/// Expands a seed list: the query is the mean of the in-vocabulary seed
/// vectors, the k nearest words (seed excluded) come first and the seed
/// words are appended. Out-of-vocabulary seed words are dropped and listed
/// in `dropped_seed`; if none remain this throws OutOfVocabularyError.
TopicLexicon expand_seed(const EmbeddingSpace& space, std::string name,
                         const std::vector<std::string>& seed, std::size_t k);

/// Skip-gram with negative sampling hyperparameters.
struct SgnsConfig {
  std::size_t dim = 300;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t min_count = 5;
  std::size_t epochs = 5;
  double initial_learning_rate = 0.025;
  double subsample_threshold = 1e-3;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError. epochs may be zero (no training).
  void validate() const;
};

/// Single-threaded SGNS trainer. Deterministic for a fixed rng_seed.
class SgnsTrainer {
 public:
  SgnsTrainer(std::span<const corpus::TokenStream> documents, const SgnsConfig& cfg,
              std::string space_id = "sgns");

  /// One pass over all documents; returns the mean pair loss of the epoch.
  double run_epoch();
  void train();  // runs the configured number of epochs

  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<double>& epoch_losses() const { return losses_; }
  /// Current input ("center") vectors as an embedding space.
  EmbeddingSpace space() const;

 private:
  std::uint64_t next_u64() { return rng_(); }
  double next_unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t sample_negative();

  SgnsConfig cfg_;
  std::string space_id_;
  std::vector<std::string> vocab_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::vector<std::uint32_t>> docs_;  // vocab ids, unknown words removed
  std::vector<double> keep_prob_;
  std::vector<double> noise_cdf_;
  std::vector<float> input_;
  std::vector<float> output_;
  std::uint64_t train_words_ = 0;
  std::uint64_t words_seen_ = 0;
  std::size_t epochs_done_ = 0;
  std::vector<double> losses_;
  std::mt19937_64 rng_;
};

EmbeddingSpace train_sgns(std::span<const corpus::TokenStream> documents, const SgnsConfig& cfg,
                          std::string space_id = "sgns", std::vector<double>* epoch_losses = nullptr);
EmbeddingSpace train_sgns(const corpus::TokenStream& ts, const SgnsConfig& cfg,
                          std::string space_id = "sgns", std::vector<double>* epoch_losses = nullptr);

}  // namespace ambig::embed
