#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ambig/corpus.hpp"
#include "ambig/embed.hpp"
#include "ambig/transport.hpp"

namespace ambig::metrics {

/// Normalized bag of words: unique support words with weights summing to 1.
struct Nbow {
  std::vector<std::string> support;
  std::vector<double> weights;

  std::size_t size() const { return support.size(); }
};

/// Term-frequency weights restricted to in-vocabulary words and renormalized.
/// With `max_support` > 0 only the most frequent types are kept (ties by
/// word). Throws UnscorableError if nothing remains.
Nbow nbow(const corpus::Histogram& h, const embed::EmbeddingSpace& space, std::size_t max_support = 0);

/// Uniform weights over the in-vocabulary words of a list.
Nbow uniform_nbow(const std::vector<std::string>& words, const embed::EmbeddingSpace& space);

/// Euclidean distances between word vectors, optionally after scaling every
/// vector to unit length.
Matrix ground_costs(const std::vector<std::string>& src_words, const std::vector<std::string>& dst_words,
                    const embed::EmbeddingSpace& space, bool unit_normalize = false);

struct WmdResult {
  double distance = 0.0;
  TransportPlan plan;
};

WmdResult wmd_exact(const Nbow& src, const Nbow& dst, const Matrix& costs);

/// max of the two one-sided relaxations; never exceeds wmd_exact.
double wmd_relaxed(const Nbow& src, const Nbow& dst, const Matrix& costs);

struct PresenceReport {
  double mean = 0.0;
  std::size_t pairs = 0;
  std::size_t tokens_scored = 0;
  std::size_t tokens_skipped = 0;   // token occurrences with no vector
  std::size_t lexicon_scored = 0;
  std::size_t lexicon_skipped = 0;  // lexicon words with no vector
};

/// Mean cosine over every (token occurrence, lexicon word) pair that has
/// vectors on both sides. Computed as the mean over tokens of the dot
/// product between the unit token vector and the centroid of unit lexicon
/// vectors. Throws UnscorableError when no pair is scorable.
PresenceReport avg_cosine_presence(const corpus::TokenStream& ts, const embed::TopicLexicon& lex,
                                   const embed::EmbeddingSpace& space);

enum class Metric { cosine_avg, wmd };
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);  // accepts "cosine" and "cosine_avg"

struct ScoreOptions {
  std::size_t wmd_vocab_cap = 5000;
  bool unit_normalize = false;
};

/// Whole-text presence of one lexicon under a metric. For WMD the lexicon
/// side is uniform and the text side is capped term frequency.
double topic_presence(const corpus::TokenStream& ts, const embed::TopicLexicon& lex,
                      const embed::EmbeddingSpace& space, Metric metric, const ScoreOptions& options = {});

struct LexiconRecord {
  std::string name;
  std::string provenance;
  std::vector<std::string> seed;
  std::string space_id;
  std::size_t size = 0;
};

LexiconRecord describe(const embed::TopicLexicon& lex);

/// Per-segment scores for two topics. A missing score is a gap: the segment
/// had nothing scorable and the reason is listed in `gaps`.
struct AmbiguitySeries {
  corpus::SegmentKind kind = corpus::SegmentKind::chapters;
  std::vector<std::string> labels;
  std::array<std::vector<std::optional<double>>, 2> scores;
  Metric metric = Metric::cosine_avg;
  std::string space_id;
  std::array<LexiconRecord, 2> lexicons;
  std::size_t wmd_vocab_cap = 0;
  std::vector<std::string> gaps;

  std::size_t size() const { return labels.size(); }
};

/// Scores both lexicons against every segment of `ts` (the stopword-filtered
/// stream the segmentation refers to).
AmbiguitySeries topic_presence_series(const corpus::SegmentedText& st, const corpus::TokenStream& ts,
                                      const embed::TopicLexicon& lex_a, const embed::TopicLexicon& lex_b,
                                      const embed::EmbeddingSpace& space, Metric metric,
                                      const ScoreOptions& options = {});

/// score_a / score_b; throws InvalidArgument when score_b is zero.
double presence_ratio(double score_a, double score_b);

/// CSV with header "segment_label,topicA,topicB,metric,space"; 6 decimals,
/// "NA" for gaps.
std::string series_to_csv(const AmbiguitySeries& series);
/// JSON object with "meta" (provenance) and "data" (one entry per segment).
std::string series_to_json(const AmbiguitySeries& series);

}  // namespace ambig::metrics
