#include <cmath>

#include "ambig/error.hpp"
#include "ambig/metrics.hpp"

namespace ambig::metrics {

PresenceReport avg_cosine_presence(const corpus::TokenStream& ts, const embed::TopicLexicon& lex,
                                   const embed::EmbeddingSpace& space) {
  PresenceReport report;
  const auto dim = space.dim();

  std::vector<double> centroid(dim, 0.0);
  for (const auto& w : lex.words) {
    const auto idx = space.find(w);
    if (!idx) {
      ++report.lexicon_skipped;
      continue;
    }
    ++report.lexicon_scored;
    const auto v = space.vector(*idx);
    const double inv = 1.0 / space.norm(*idx);
    for (std::size_t d = 0; d < dim; ++d) centroid[d] += v[d] * inv;
  }

  double sum = 0.0;
  for (const auto& t : ts.tokens) {
    const auto idx = space.find(t);
    if (!idx) {
      ++report.tokens_skipped;
      continue;
    }
    ++report.tokens_scored;
    if (report.lexicon_scored == 0) continue;
    const auto v = space.vector(*idx);
    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) dot += v[d] * centroid[d];
    sum += dot / space.norm(*idx);
  }

  report.pairs = report.tokens_scored * report.lexicon_scored;
  if (report.pairs == 0) {
    throw UnscorableError("no (token, lexicon word) pair has vectors in space " + space.id());
  }
  report.mean = sum / static_cast<double>(report.pairs);
  return report;
}

std::string_view to_string(Metric m) { return m == Metric::cosine_avg ? "cosine_avg" : "wmd"; }

Metric parse_metric(std::string_view name) {
  if (name == "cosine" || name == "cosine_avg") return Metric::cosine_avg;
  if (name == "wmd") return Metric::wmd;
  throw ConfigError("unknown metric: '" + std::string(name) + "'");
}

double topic_presence(const corpus::TokenStream& ts, const embed::TopicLexicon& lex,
                      const embed::EmbeddingSpace& space, Metric metric, const ScoreOptions& options) {
  if (lex.words.empty()) throw InvalidArgument("lexicon '" + lex.name + "' is empty");
  if (metric == Metric::cosine_avg) return avg_cosine_presence(ts, lex, space).mean;

  const auto src = uniform_nbow(lex.words, space);
  const auto dst = nbow(corpus::term_frequencies(ts), space, options.wmd_vocab_cap);
  const auto costs = ground_costs(src.support, dst.support, space, options.unit_normalize);
  return wmd_exact(src, dst, costs).distance;
}

LexiconRecord describe(const embed::TopicLexicon& lex) {
  return {lex.name, std::string(embed::to_string(lex.provenance)), lex.seed, lex.space_id,
          lex.words.size()};
}

AmbiguitySeries topic_presence_series(const corpus::SegmentedText& st, const corpus::TokenStream& ts,
                                      const embed::TopicLexicon& lex_a, const embed::TopicLexicon& lex_b,
                                      const embed::EmbeddingSpace& space, Metric metric,
                                      const ScoreOptions& options) {
  if (lex_a.words.empty() || lex_b.words.empty()) throw InvalidArgument("series needs non-empty lexicons");
  if (st.segments.empty()) throw InvalidArgument("series needs at least one segment");

  AmbiguitySeries series;
  series.kind = st.kind;
  series.metric = metric;
  series.space_id = space.id();
  series.lexicons = {describe(lex_a), describe(lex_b)};
  series.wmd_vocab_cap = metric == Metric::wmd ? options.wmd_vocab_cap : 0;

  std::size_t expected_begin = 0;
  for (const auto& seg : st.segments) {
    if (seg.token_begin != expected_begin || seg.token_end < seg.token_begin || seg.token_end > ts.size()) {
      throw SegmentationError("segment '" + seg.label + "' does not continue the token partition");
    }
    expected_begin = seg.token_end;
    series.labels.push_back(seg.label);
    const auto tokens = ts.slice(seg.token_begin, seg.token_end);
    const embed::TopicLexicon* lexicons[2] = {&lex_a, &lex_b};
    for (std::size_t k = 0; k < 2; ++k) {
      try {
        series.scores[k].push_back(topic_presence(tokens, *lexicons[k], space, metric, options));
      } catch (const UnscorableError& e) {
        series.scores[k].push_back(std::nullopt);
        series.gaps.push_back("segment " + seg.label + ", " + lexicons[k]->name + ": " + e.what());
      }
    }
  }
  if (expected_begin != ts.size()) throw SegmentationError("segments do not cover the token stream");
  return series;
}

double presence_ratio(double score_a, double score_b) {
  if (score_b == 0.0) throw InvalidArgument("presence ratio: denominator score is zero");
  return score_a / score_b;
}

}  // namespace ambig::metrics
