#include <algorithm>
#include <map>

#include <json.hpp>

#include "ambig/error.hpp"
#include "ambig/stats.hpp"

namespace ambig::stats {

void LdaConfig::validate() const {
  if (num_topics < 1) throw ConfigError("lda: num_topics must be at least 1");
  if (!(alpha > 0.0)) throw ConfigError("lda: alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("lda: beta must be positive");
}

GibbsSampler::GibbsSampler(std::span<const corpus::TokenStream> docs, const LdaConfig& cfg)
    : cfg_(cfg), rng_(cfg.rng_seed) {
  cfg_.validate();

  std::map<std::string, std::uint32_t> ids;
  for (const auto& doc : docs) {
    for (const auto& t : doc.tokens) ids.emplace(t, 0);
  }
  if (ids.empty()) throw EmptyInputError("lda: corpus has no tokens");
  for (auto& [w, id] : ids) {
    id = static_cast<std::uint32_t>(vocab_.size());
    vocab_.push_back(w);
  }

  const auto T = cfg_.num_topics;
  const auto V = vocab_.size();
  topic_word_.assign(T * V, 0);
  topic_total_.assign(T, 0);
  doc_topic_.assign(docs.size() * T, 0);
  weights_.resize(T);

  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<std::uint32_t> words, topics;
    for (const auto& t : docs[d].tokens) {
      const auto w = ids.at(t);
      const auto z = static_cast<std::uint32_t>(std::min<std::size_t>(
          T - 1, static_cast<std::size_t>(next_unit() * static_cast<double>(T))));
      words.push_back(w);
      topics.push_back(z);
      ++topic_word_[z * V + w];
      ++topic_total_[z];
      ++doc_topic_[d * T + z];
    }
    words_.push_back(std::move(words));
    topics_.push_back(std::move(topics));
  }
}

void GibbsSampler::sweep() {
  const auto T = cfg_.num_topics;
  const auto V = vocab_.size();
  const double vbeta = static_cast<double>(V) * cfg_.beta;

  for (std::size_t d = 0; d < words_.size(); ++d) {
    auto& words = words_[d];
    auto& topics = topics_[d];
    std::uint32_t* dt = &doc_topic_[d * T];
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto w = words[i];
      auto z = topics[i];
      --topic_word_[z * V + w];
      --topic_total_[z];
      --dt[z];

      double total = 0.0;
      for (std::size_t k = 0; k < T; ++k) {
        total += (dt[k] + cfg_.alpha) * (topic_word_[k * V + w] + cfg_.beta) / (topic_total_[k] + vbeta);
        weights_[k] = total;
      }
      const double u = next_unit() * total;
      z = static_cast<std::uint32_t>(
          std::min<std::size_t>(T - 1, std::upper_bound(weights_.begin(), weights_.end(), u) - weights_.begin()));

      topics[i] = z;
      ++topic_word_[z * V + w];
      ++topic_total_[z];
      ++dt[z];
    }
  }
  ++sweeps_;
}

std::vector<std::uint64_t> GibbsSampler::word_totals() const {
  const auto V = vocab_.size();
  std::vector<std::uint64_t> totals(V, 0);
  for (std::size_t k = 0; k < cfg_.num_topics; ++k) {
    for (std::size_t w = 0; w < V; ++w) totals[w] += topic_word_[k * V + w];
  }
  return totals;
}

bool GibbsSampler::counts_consistent() const {
  const auto T = cfg_.num_topics;
  const auto V = vocab_.size();
  std::vector<std::uint32_t> tw(T * V, 0), tt(T, 0), dt(words_.size() * T, 0);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto z = topics_[d][i];
      ++tw[z * V + words_[d][i]];
      ++tt[z];
      ++dt[d * T + z];
    }
  }
  return tw == topic_word_ && tt == topic_total_ && dt == doc_topic_;
}

LdaModel GibbsSampler::model() const {
  const auto T = cfg_.num_topics;
  const auto V = vocab_.size();
  const double vbeta = static_cast<double>(V) * cfg_.beta;
  const double talpha = static_cast<double>(T) * cfg_.alpha;

  LdaModel m;
  m.config = cfg_;
  m.vocab = vocab_;
  m.assignments = topics_;
  m.phi.assign(T, std::vector<double>(V));
  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t w = 0; w < V; ++w) {
      m.phi[k][w] = (topic_word_[k * V + w] + cfg_.beta) / (topic_total_[k] + vbeta);
    }
  }
  m.theta.assign(words_.size(), std::vector<double>(T));
  for (std::size_t d = 0; d < words_.size(); ++d) {
    const double len = static_cast<double>(words_[d].size());
    for (std::size_t k = 0; k < T; ++k) {
      m.theta[d][k] = (doc_topic_[d * T + k] + cfg_.alpha) / (len + talpha);
    }
  }
  return m;
}

LdaModel lda_fit(std::span<const corpus::TokenStream> docs, const LdaConfig& cfg) {
  GibbsSampler sampler(docs, cfg);
  for (std::size_t it = 0; it < cfg.iterations; ++it) sampler.sweep();
  return sampler.model();
}

std::vector<std::string> lda_top_words(const LdaModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.phi.size()) {
    throw InvalidArgument("topic index " + std::to_string(topic) + " out of range (T = " +
                          std::to_string(model.phi.size()) + ")");
  }
  const auto& row = model.phi[topic];
  std::vector<std::size_t> order(row.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto count = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return model.vocab[a] < model.vocab[b];
                    });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(model.vocab[order[i]]);
  return out;
}

std::string lda_to_json(const LdaModel& model, std::size_t top_n) {
  nlohmann::json top = nlohmann::json::array();
  for (std::size_t k = 0; k < model.phi.size(); ++k) top.push_back(lda_top_words(model, k, top_n));
  nlohmann::json meta = {
      {"num_topics", model.config.num_topics}, {"alpha", model.config.alpha},
      {"beta", model.config.beta},             {"iterations", model.config.iterations},
      {"rng_seed", model.config.rng_seed},     {"vocab_size", model.vocab.size()},
      {"documents", model.theta.size()},
  };
  nlohmann::json data = {{"vocab", model.vocab}, {"phi", model.phi}, {"theta", model.theta},
                         {"top_words", top}};
  return nlohmann::json{{"meta", meta}, {"data", data}}.dump() + "\n";
}

}  // namespace ambig::stats
