#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ambig/corpus.hpp"

namespace ambig::stats {

struct LdaConfig {
  std::size_t num_topics = 10;
  double alpha = 0.1;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t rng_seed = 1;

  void validate() const;  // throws ConfigError
};

/// Fitted topic model. phi is T x V, theta is D x T, rows are distributions.
struct LdaModel {
  LdaConfig config;
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> phi;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<std::uint32_t>> assignments;  // per document, per token
};

/// Collapsed Gibbs sampler for LDA. Single-threaded and deterministic for a
/// given seed. Vocabulary ids follow sorted word order.
class GibbsSampler {
 public:
  GibbsSampler(std::span<const corpus::TokenStream> docs, const LdaConfig& cfg);

  void sweep();
  std::size_t sweeps_done() const { return sweeps_; }

  /// Recounts the topic-word table from the assignments and checks it, and
  /// the per-topic and per-document totals, against the running counts.
  bool counts_consistent() const;
  /// Word totals summed over topics, per vocabulary id.
  std::vector<std::uint64_t> word_totals() const;

  LdaModel model() const;

 private:
  double next_unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  LdaConfig cfg_;
  std::vector<std::string> vocab_;
  std::vector<std::vector<std::uint32_t>> words_;   // per doc, vocab ids
  std::vector<std::vector<std::uint32_t>> topics_;  // per doc, assignments
  std::vector<std::uint32_t> topic_word_;           // T x V
  std::vector<std::uint32_t> topic_total_;          // T
  std::vector<std::uint32_t> doc_topic_;            // D x T
  std::vector<double> weights_;
  std::size_t sweeps_ = 0;
  std::mt19937_64 rng_;
};

/// Runs `iterations` sweeps. Throws EmptyInputError when all documents are empty.
LdaModel lda_fit(std::span<const corpus::TokenStream> docs, const LdaConfig& cfg);

/// The n most probable words of a topic, ties by word. Throws InvalidArgument
/// for a bad topic index.
std::vector<std::string> lda_top_words(const LdaModel& model, std::size_t topic, std::size_t n);

/// {"meta": config + sizes, "data": {vocab, phi, theta, top_words}}.
std::string lda_to_json(const LdaModel& model, std::size_t top_n = 10);

struct KlEntry {
  std::string word;
  double p = 0.0;
  double q = 0.0;
  double contribution = 0.0;  // p * ln(p / q)
};

struct KlReport {
  double divergence = 0.0;
  std::vector<KlEntry> contributions;  // descending, ties by word
  double smoothing = 0.0;
};

/// KL(p || q) in nats over the union vocabulary with additive smoothing:
/// p(w) = (count_p(w) + s) / (total_p + s |V|), likewise q.
KlReport kl_contributions(const corpus::Histogram& p_counts, const corpus::Histogram& q_counts,
                          double smoothing = 0.5);

/// CSV with header "word,p,q,contribution".
std::string kl_to_csv(const KlReport& report);

corpus::Histogram filter_names(const corpus::Histogram& h, const corpus::Stoplist& names);

}  // namespace ambig::stats
