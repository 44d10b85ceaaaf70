#include <json.hpp>

#include "ambig/csv.hpp"
#include "ambig/metrics.hpp"

namespace ambig::metrics {
namespace {

nlohmann::json lexicon_json(const LexiconRecord& r) {
  return {{"name", r.name},       {"provenance", r.provenance}, {"seed", r.seed},
          {"space_id", r.space_id}, {"size", r.size}};
}

}  // namespace

std::string series_to_csv(const AmbiguitySeries& series) {
  std::string out = "segment_label,topicA,topicB,metric,space\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += csv_field(series.labels[i]);
    out += ',' + csv_number(series.scores[0][i]);
    out += ',' + csv_number(series.scores[1][i]);
    out += ',' + std::string(to_string(series.metric));
    out += ',' + csv_field(series.space_id);
    out += '\n';
  }
  return out;
}

std::string series_to_json(const AmbiguitySeries& series) {
  nlohmann::json data = nlohmann::json::array();
  for (std::size_t i = 0; i < series.size(); ++i) {
    nlohmann::json row = {{"segment_label", series.labels[i]}};
    for (std::size_t k = 0; k < 2; ++k) {
      const char* key = k == 0 ? "topicA" : "topicB";
      row[key] = series.scores[k][i] ? nlohmann::json(*series.scores[k][i]) : nlohmann::json(nullptr);
    }
    data.push_back(std::move(row));
  }
  nlohmann::json meta = {
      {"segmentation_kind", std::string(corpus::to_string(series.kind))},
      {"metric", std::string(to_string(series.metric))},
      {"space_id", series.space_id},
      {"topicA", lexicon_json(series.lexicons[0])},
      {"topicB", lexicon_json(series.lexicons[1])},
      {"segments", series.size()},
      {"gaps", series.gaps},
  };
  if (series.metric == Metric::wmd) meta["wmd_vocab_cap"] = series.wmd_vocab_cap;
  return nlohmann::json{{"meta", meta}, {"data", data}}.dump(2) + "\n";
}

}  // namespace ambig::metrics
