#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ambig/embed.hpp"
#include "ambig/error.hpp"

namespace ambig::embed {
namespace {

// -log(sigmoid(x)), stable for large |x|.
double neg_log_sigmoid(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void SgnsConfig::validate() const {
  if (dim < 2) throw ConfigError("sgns: dim must be at least 2");
  if (window == 0) throw ConfigError("sgns: window must be positive");
  if (negatives == 0) throw ConfigError("sgns: negatives must be positive");
  if (min_count == 0) throw ConfigError("sgns: min_count must be positive");
  if (!(initial_learning_rate > 0.0)) throw ConfigError("sgns: initial_learning_rate must be positive");
  if (!(subsample_threshold > 0.0)) throw ConfigError("sgns: subsample_threshold must be positive");
}

SgnsTrainer::SgnsTrainer(std::span<const corpus::TokenStream> documents, const SgnsConfig& cfg,
                         std::string space_id)
    : cfg_(cfg), space_id_(std::move(space_id)), rng_(cfg.rng_seed) {
  cfg_.validate();

  std::unordered_map<std::string, std::uint64_t> raw_counts;
  std::size_t total_tokens = 0;
  for (const auto& doc : documents) {
    for (const auto& t : doc.tokens) ++raw_counts[t];
    total_tokens += doc.size();
  }
  if (total_tokens < cfg_.window + 1) {
    throw InvalidArgument("sgns: corpus has fewer tokens than window + 1");
  }

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [w, c] : raw_counts) {
    if (c >= cfg_.min_count) kept.emplace_back(w, c);
  }
  if (kept.empty()) throw EmptyInputError("sgns: vocabulary is empty after min_count filtering");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::unordered_map<std::string, std::uint32_t> ids;
  for (const auto& [w, c] : kept) {
    ids.emplace(w, static_cast<std::uint32_t>(vocab_.size()));
    vocab_.push_back(w);
    counts_.push_back(c);
    train_words_ += c;
  }

  docs_.reserve(documents.size());
  for (const auto& doc : documents) {
    std::vector<std::uint32_t> seq;
    seq.reserve(doc.size());
    for (const auto& t : doc.tokens) {
      if (const auto it = ids.find(t); it != ids.end()) seq.push_back(it->second);
    }
    docs_.push_back(std::move(seq));
  }

  const double threshold = cfg_.subsample_threshold * static_cast<double>(train_words_);
  keep_prob_.resize(vocab_.size());
  double noise_total = 0.0;
  noise_cdf_.resize(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    const auto f = static_cast<double>(counts_[i]);
    keep_prob_[i] = std::min(1.0, (std::sqrt(f / threshold) + 1.0) * threshold / f);
    noise_total += std::pow(f, 0.75);
    noise_cdf_[i] = noise_total;
  }
  for (auto& c : noise_cdf_) c /= noise_total;

  const auto n = vocab_.size() * cfg_.dim;
  input_.resize(n);
  output_.assign(n, 0.0f);
  for (auto& v : input_) {
    v = static_cast<float>((next_unit() - 0.5) / static_cast<double>(cfg_.dim));
  }
}

std::size_t SgnsTrainer::sample_negative() {
  const double u = next_unit();
  const auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), u);
  return std::min(static_cast<std::size_t>(it - noise_cdf_.begin()), noise_cdf_.size() - 1);
}

double SgnsTrainer::run_epoch() {
  const std::size_t dim = cfg_.dim;
  const double schedule_words =
      static_cast<double>(std::max<std::size_t>(cfg_.epochs, epochs_done_ + 1)) *
      static_cast<double>(train_words_);
  std::vector<float> grad(dim);
  std::vector<std::uint32_t> sentence;
  std::vector<std::uint64_t> progress;  // words seen when each kept token was read
  double loss_sum = 0.0;
  std::uint64_t pairs = 0;

  for (const auto& doc : docs_) {
    sentence.clear();
    progress.clear();
    for (const auto id : doc) {
      ++words_seen_;
      if (keep_prob_[id] < 1.0 && next_unit() >= keep_prob_[id]) continue;
      sentence.push_back(id);
      progress.push_back(words_seen_);
    }

    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const double lr = cfg_.initial_learning_rate *
                        std::max(1e-4, 1.0 - static_cast<double>(progress[i]) / (schedule_words + 1.0));
      const std::size_t lo = i >= cfg_.window ? i - cfg_.window : 0;
      const std::size_t hi = std::min(sentence.size() - 1, i + cfg_.window);
      float* center = &input_[sentence[i] * dim];

      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const std::uint32_t context = sentence[j];
        std::fill(grad.begin(), grad.end(), 0.0f);

        for (std::size_t s = 0; s <= cfg_.negatives; ++s) {
          std::size_t target = context;
          double label = 1.0;
          if (s > 0) {
            target = sample_negative();
            if (target == context) continue;
            label = 0.0;
          }
          float* out = &output_[target * dim];
          double dot = 0.0;
          for (std::size_t d = 0; d < dim; ++d) dot += static_cast<double>(center[d]) * out[d];
          loss_sum += label > 0.0 ? neg_log_sigmoid(dot) : neg_log_sigmoid(-dot);
          const auto g = static_cast<float>((label - sigmoid(dot)) * lr);
          for (std::size_t d = 0; d < dim; ++d) {
            grad[d] += g * out[d];
            out[d] += g * center[d];
          }
        }
        for (std::size_t d = 0; d < dim; ++d) center[d] += grad[d];
        ++pairs;
      }
    }
  }

  ++epochs_done_;
  const double mean = pairs > 0 ? loss_sum / static_cast<double>(pairs) : 0.0;
  losses_.push_back(mean);
  return mean;
}

void SgnsTrainer::train() {
  while (epochs_done_ < cfg_.epochs) run_epoch();
}

EmbeddingSpace SgnsTrainer::space() const {
  EmbeddingSpace space(space_id_, cfg_.dim);
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    try {
      space.add(vocab_[i], std::span<const float>(&input_[i * cfg_.dim], cfg_.dim));
    } catch (const InvalidArgument& e) {
      throw Error(std::string("sgns produced an invalid vector: ") + e.what());
    }
  }
  return space;
}

EmbeddingSpace train_sgns(std::span<const corpus::TokenStream> documents, const SgnsConfig& cfg,
                          std::string space_id, std::vector<double>* epoch_losses) {
  SgnsTrainer trainer(documents, cfg, std::move(space_id));
  trainer.train();
  if (epoch_losses) *epoch_losses = trainer.epoch_losses();
  return trainer.space();
}

EmbeddingSpace train_sgns(const corpus::TokenStream& ts, const SgnsConfig& cfg, std::string space_id,
                          std::vector<double>* epoch_losses) {
  return train_sgns(std::span<const corpus::TokenStream>(&ts, 1), cfg, std::move(space_id),
                    epoch_losses);
}

}  // namespace ambig::embed
