#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "ambig/app.hpp"
#include "ambig/csv.hpp"
#include "ambig/error.hpp"

namespace ambig::app {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

class StageTimer {
 public:
  StageTimer(RunManifest& m, std::string stage) : m_(m), stage_(std::move(stage)), start_(Clock::now()) {}
  ~StageTimer() { m_.time(stage_, Clock::now() - start_); }

 private:
  RunManifest& m_;
  std::string stage_;
  Clock::time_point start_;
};

std::optional<std::string> svg_timestamp(const RunConfig& cfg) {
  if (!cfg.timestamps) return std::nullopt;
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

fs::path finish(const RunManifest& manifest, const fs::path& dir) {
  manifest.write(dir);
  return dir;
}

/// Every *.txt in the oeuvre directory in name order, minus the novella
/// (matched by content digest).
std::vector<corpus::TokenStream> load_oeuvre(const RunConfig& cfg, RunManifest& manifest, bool stopwords_removed) {
  if (!cfg.oeuvre_dir) throw ConfigError("this command needs 'oeuvre_dir'");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(*cfg.oeuvre_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  const auto novella_digest = file_sha256(cfg.novella);
  const auto stop = stopwords_removed ? corpus::load_word_set(cfg.stopwords) : corpus::Stoplist{};

  std::vector<corpus::TokenStream> docs;
  for (const auto& f : files) {
    if (file_sha256(f) == novella_digest) continue;
    manifest.add_input(f);
    auto ts = corpus::tokenize(corpus::ingest_file(f, cfg.strip_boilerplate));
    docs.push_back(stopwords_removed ? corpus::remove_stopwords(ts, stop) : std::move(ts));
  }
  if (docs.empty()) throw EmptyInputError("oeuvre directory has no texts besides the novella: " +
                                          cfg.oeuvre_dir->string());
  return docs;
}

const SpaceSpec& pick_space(const RunConfig& cfg, const std::optional<std::string>& id) {
  if (cfg.spaces.empty()) throw ConfigError("no embedding space configured");
  if (!id) return cfg.spaces.front();
  for (const auto& s : cfg.spaces) {
    if (s.id == *id) return s;
  }
  throw ConfigError("unknown space '" + *id + "'");
}

embed::EmbeddingSpace train_space(const RunConfig& cfg, const SpaceSpec& spec, const Novella* novella,
                                  RunManifest& manifest, std::vector<double>* losses) {
  if (*spec.train_corpus == "novella") {
    if (!novella) throw ConfigError("space '" + spec.id + "' needs the novella loaded");
    return embed::train_sgns(novella->all_tokens, spec.sgns, spec.id, losses);
  }
  const auto docs = load_oeuvre(cfg, manifest, false);
  return embed::train_sgns(std::span<const corpus::TokenStream>(docs), spec.sgns, spec.id, losses);
}

embed::EmbeddingSpace build_space(const RunConfig& cfg, const SpaceSpec& spec, const Novella* novella,
                                  RunManifest& manifest) {
  StageTimer t(manifest, "space_" + spec.id);
  if (spec.train_corpus) return train_space(cfg, spec, novella, manifest, nullptr);

  manifest.add_input(*spec.vectors);
  const auto vfmt = spec.format == "auto"       ? embed::sniff_vector_format(*spec.vectors)
                   : spec.format == "headered" ? embed::VectorFormat::headered
                                               : embed::VectorFormat::plain;
  embed::LoadStats stats;
  auto space = embed::load_vectors(*spec.vectors, vfmt, spec.id, &stats);
  if (stats.duplicates) manifest.warn(fmt::format("space {}: {} duplicate words ignored", spec.id, stats.duplicates));
  if (stats.zero_vectors) manifest.warn(fmt::format("space {}: {} zero vectors skipped", spec.id, stats.zero_vectors));
  return space;
}

using SpaceMap = std::map<std::string, embed::EmbeddingSpace>;

const embed::EmbeddingSpace& get_space(SpaceMap& cache, const RunConfig& cfg, const SpaceSpec& spec,
                                       const Novella* novella, RunManifest& manifest) {
  auto it = cache.find(spec.id);
  if (it == cache.end()) it = cache.emplace(spec.id, build_space(cfg, spec, novella, manifest)).first;
  return it->second;
}

void note_dropped(const embed::TopicLexicon& lex, RunManifest& manifest) {
  for (const auto& w : lex.dropped_seed) {
    manifest.warn(fmt::format("lexicon {}: seed word '{}' not in space {}", lex.name, w, lex.space_id));
  }
}

struct NamedPair {
  std::string source;
  std::array<embed::TopicLexicon, 2> topics;
};

NamedPair build_pair(const RunConfig& cfg, const LexiconPairSpec& spec, SpaceMap& spaces, const Novella* novella,
                     RunManifest& manifest) {
  NamedPair out{spec.source, {}};
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& t = spec.topics[k];
    if (t.file) {
      manifest.add_input(*t.file);
      out.topics[k] = embed::load_lexicon(*t.file, cfg.topic_names[k], t.provenance);
    } else {
      const auto& space = get_space(spaces, cfg, pick_space(cfg, spec.space), novella, manifest);
      out.topics[k] = embed::expand_seed(space, cfg.topic_names[k], t.seed, cfg.k_override.value_or(spec.k));
      note_dropped(out.topics[k], manifest);
    }
  }
  return out;
}

/// The lexicon pairs a command works on: the --lexicon files if given, else
/// the --pair selection, else every configured pair.
std::vector<NamedPair> build_pairs(const RunConfig& cfg, SpaceMap& spaces, const Novella* novella,
                                   RunManifest& manifest, bool all) {
  std::vector<NamedPair> pairs;
  if (!cfg.lexicon_files.empty()) {
    NamedPair p{"cli", {}};
    for (std::size_t k = 0; k < 2; ++k) {
      manifest.add_input(cfg.lexicon_files[k]);
      p.topics[k] = embed::load_lexicon(cfg.lexicon_files[k], cfg.topic_names[k], embed::Provenance::manual_text);
    }
    pairs.push_back(std::move(p));
    return pairs;
  }
  if (cfg.lexicons.empty()) throw ConfigError("no lexicons configured");
  for (const auto& spec : cfg.lexicons) {
    if (cfg.pair_choice ? spec.source != *cfg.pair_choice : (!all && !pairs.empty())) continue;
    pairs.push_back(build_pair(cfg, spec, spaces, novella, manifest));
  }
  return pairs;
}

json lexicon_json(const embed::TopicLexicon& lex) {
  return {{"name", lex.name},
          {"provenance", std::string(embed::to_string(lex.provenance))},
          {"seed", lex.seed},
          {"space", lex.space_id},
          {"dropped_seed", lex.dropped_seed},
          {"words", lex.words}};
}

std::vector<const SpaceSpec*> selected_spaces(const RunConfig& cfg) {
  std::vector<const SpaceSpec*> out;
  for (const auto& s : cfg.spaces) {
    if (!cfg.space_choice || s.id == *cfg.space_choice) out.push_back(&s);
  }
  if (out.empty()) throw ConfigError("no embedding space configured");
  return out;
}

}  // namespace

Novella load_novella(const RunConfig& cfg, RunManifest& manifest) {
  StageTimer t(manifest, "load_novella");
  manifest.add_input(cfg.novella);
  manifest.add_input(cfg.stopwords);
  manifest.add_input(cfg.segmentation_config);

  Novella n;
  n.raw = corpus::ingest_file(cfg.novella, cfg.strip_boilerplate);
  n.all_tokens = corpus::tokenize(n.raw);
  n.tokens = corpus::remove_stopwords(n.all_tokens, corpus::load_word_set(cfg.stopwords));
  const auto seg = corpus::load_segmentation_config(cfg.segmentation_config);
  n.chapters = corpus::segment_chapters(n.raw, n.tokens, seg);
  try {
    n.installments = corpus::map_installments(n.chapters, seg.installment_of);
  } catch (const SegmentationError& e) {
    const bool needed = cfg.segmentation == corpus::SegmentKind::installments ||
                        cfg.lda_documents == corpus::SegmentKind::installments;
    if (needed) throw;
    manifest.warn(std::string("installments unavailable: ") + e.what());
  }
  return n;
}

fs::path cmd_score(const RunConfig& cfg) {
  RunManifest manifest("score", cfg);
  const auto dir = run_directory(cfg);
  const auto novella = load_novella(cfg, manifest);
  SpaceMap spaces;
  const auto pairs = build_pairs(cfg, spaces, &novella, manifest, true);
  const auto space_specs = selected_spaces(cfg);

  struct Column {
    metrics::Metric metric;
    const SpaceSpec* space;
    std::string name;
  };
  std::vector<Column> columns;
  for (const auto m : cfg.metrics) {
    for (const auto* s : space_specs) columns.push_back({m, s, fmt::format("{}_{}", metrics::to_string(m), s->id)});
  }

  // scores[pair][topic][column]
  std::vector<std::array<std::vector<std::optional<double>>, 2>> scores(pairs.size());
  {
    StageTimer t(manifest, "scoring");
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (const auto& c : columns) {
          const auto& space = get_space(spaces, cfg, *c.space, &novella, manifest);
          try {
            scores[p][k].push_back(
                metrics::topic_presence(novella.tokens, pairs[p].topics[k], space, c.metric, cfg.score_options));
          } catch (const UnscorableError& e) {
            manifest.warn(fmt::format("{} {} {}: {}", pairs[p].source, cfg.topic_names[k], c.name, e.what()));
            scores[p][k].push_back(std::nullopt);
          }
        }
      }
    }
  }

  std::string matrix = "source,topic";
  std::string ratios = "source";
  for (const auto& c : columns) {
    matrix += ',' + c.name;
    ratios += ',' + c.name;
  }
  matrix += '\n';
  ratios += '\n';
  json rows = json::array();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t k = 0; k < 2; ++k) {
      matrix += csv_field(pairs[p].source) + ',' + csv_field(cfg.topic_names[k]);
      for (const auto& v : scores[p][k]) matrix += ',' + csv_number(v);
      matrix += '\n';
    }
    ratios += csv_field(pairs[p].source);
    json entry = {{"source", pairs[p].source},
                  {"lexicons", {lexicon_json(pairs[p].topics[0]), lexicon_json(pairs[p].topics[1])}}};
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& a = scores[p][0][c];
      const auto& b = scores[p][1][c];
      std::optional<double> r;
      if (a && b && *b != 0.0) r = metrics::presence_ratio(*a, *b);
      ratios += ',' + csv_number(r);
      entry["scores"][columns[c].name] = json::array({a ? json(*a) : json(nullptr), b ? json(*b) : json(nullptr)});
      entry["ratios"][columns[c].name] = r ? json(*r) : json(nullptr);
    }
    ratios += '\n';
    rows.push_back(std::move(entry));
  }

  json meta = {{"topics", cfg.topic_names},
               {"wmd_vocab_cap", cfg.score_options.wmd_vocab_cap},
               {"unit_normalize", cfg.score_options.unit_normalize},
               {"config_hash", cfg.hash()}};
  manifest.write_output(dir, "score_matrix.csv", matrix);
  manifest.write_output(dir, "ratios.csv", ratios);
  manifest.write_output(dir, "scores.json", json{{"meta", meta}, {"data", rows}}.dump(2) + "\n");
  return finish(manifest, dir);
}

fs::path cmd_series(const RunConfig& cfg) {
  RunManifest manifest("series", cfg);
  const auto dir = run_directory(cfg);
  const auto novella = load_novella(cfg, manifest);
  SpaceMap spaces;
  const auto& spec = pick_space(cfg, cfg.space_choice);
  const auto pairs = build_pairs(cfg, spaces, &novella, manifest, false);
  const auto& space = get_space(spaces, cfg, spec, &novella, manifest);
  const auto metric = cfg.metrics.front();

  metrics::AmbiguitySeries series;
  {
    StageTimer t(manifest, "series");
    series = metrics::topic_presence_series(novella.segmentation(cfg.segmentation), novella.tokens,
                                            pairs.front().topics[0], pairs.front().topics[1], space, metric,
                                            cfg.score_options);
  }
  for (const auto& g : series.gaps) manifest.warn("gap: " + g);

  manifest.write_output(dir, "series.csv", metrics::series_to_csv(series));
  manifest.write_output(dir, "series.json", metrics::series_to_json(series));
  if (cfg.svg) {
    const auto title = fmt::format("Topic presence by {} ({}, {})", corpus::to_string(series.kind),
                                   metrics::to_string(metric), space.id());
    const std::vector<ChartLine> lines{{cfg.topic_names[0], series.scores[0]}, {cfg.topic_names[1], series.scores[1]}};
    manifest.write_output(dir, "series.svg",
                          render_line_chart(title, "segment", std::string(metrics::to_string(metric)),
                                            series.labels, lines, svg_timestamp(cfg)));
  }
  return finish(manifest, dir);
}

fs::path cmd_train(const RunConfig& cfg) {
  RunManifest manifest("train", cfg);
  const auto dir = run_directory(cfg);
  std::optional<Novella> novella;
  json report = json::array();
  for (const auto* spec : selected_spaces(cfg)) {
    if (!spec->train_corpus) {
      if (cfg.space_choice) throw ConfigError("space '" + spec->id + "' is loaded from a file, not trained");
      continue;
    }
    if (*spec->train_corpus == "novella" && !novella) novella = load_novella(cfg, manifest);
    std::vector<double> losses;
    const auto start = Clock::now();
    const auto space = train_space(cfg, *spec, novella ? &*novella : nullptr, manifest, &losses);
    manifest.time("train_" + spec->id, Clock::now() - start);
    manifest.write_output(dir, "space_" + spec->id + ".vec", embed::format_vectors(space));
    report.push_back({{"space", spec->id}, {"vocab_size", space.size()}, {"dim", space.dim()},
                      {"epoch_losses", losses}});
  }
  if (report.empty()) throw ConfigError("no trainable space configured");
  manifest.write_output(dir, "train.json",
                        json{{"meta", {{"seed", cfg.seed}}}, {"data", report}}.dump(2) + "\n");
  return finish(manifest, dir);
}

fs::path cmd_expand(const RunConfig& cfg) {
  if (cfg.seed_words.empty()) throw ConfigError("expand needs --seed-words");
  RunManifest manifest("expand", cfg);
  const auto dir = run_directory(cfg);
  const auto& spec = pick_space(cfg, cfg.space_choice);
  std::optional<Novella> novella;
  if (spec.train_corpus && *spec.train_corpus == "novella") novella = load_novella(cfg, manifest);
  const auto space = build_space(cfg, spec, novella ? &*novella : nullptr, manifest);

  std::string name;
  for (const auto& w : cfg.seed_words) name += (name.empty() ? "" : "_") + corpus::fold_case(w);
  const auto k = cfg.k_override.value_or(10);
  const auto lex = embed::expand_seed(space, name, cfg.seed_words, k);
  note_dropped(lex, manifest);

  std::string list;
  for (const auto& w : lex.words) list += w + '\n';
  manifest.write_output(dir, "lexicon_" + name + ".txt", list);
  manifest.write_output(dir, "lexicon_" + name + ".json",
                        json{{"meta", {{"k", k}, {"space", space.id()}}}, {"data", lexicon_json(lex)}}.dump(2) + "\n");
  return finish(manifest, dir);
}

fs::path cmd_lda(const RunConfig& cfg) {
  RunManifest manifest("lda", cfg);
  const auto dir = run_directory(cfg);
  const auto novella = load_novella(cfg, manifest);
  const auto& st = novella.segmentation(cfg.lda_documents);
  std::vector<corpus::TokenStream> docs;
  std::vector<std::string> labels;
  for (const auto& s : st.segments) {
    docs.push_back(novella.tokens.slice(s.token_begin, s.token_end));
    labels.push_back(s.label);
  }

  stats::LdaModel model;
  {
    StageTimer t(manifest, "lda");
    model = stats::lda_fit(docs, cfg.lda);
  }
  manifest.write_output(dir, "lda.json", stats::lda_to_json(model, cfg.lda_top_words));

  std::string topics = "topic,rank,word,probability\n";
  for (std::size_t k = 0; k < model.phi.size(); ++k) {
    const auto top = stats::lda_top_words(model, k, cfg.lda_top_words);
    for (std::size_t r = 0; r < top.size(); ++r) {
      const auto w = static_cast<std::size_t>(
          std::lower_bound(model.vocab.begin(), model.vocab.end(), top[r]) - model.vocab.begin());
      topics += fmt::format("{},{},{},{}\n", k, r + 1, csv_field(top[r]), csv_number(model.phi[k][w]));
    }
  }
  manifest.write_output(dir, "lda_topics.csv", topics);

  std::string theta = "segment_label";
  for (std::size_t k = 0; k < model.phi.size(); ++k) theta += fmt::format(",topic{}", k);
  theta += '\n';
  for (std::size_t d = 0; d < model.theta.size(); ++d) {
    theta += csv_field(labels[d]);
    for (const double v : model.theta[d]) theta += ',' + csv_number(v);
    theta += '\n';
  }
  manifest.write_output(dir, "lda_theta.csv", theta);
  return finish(manifest, dir);
}

fs::path cmd_kl(const RunConfig& cfg) {
  RunManifest manifest("kl", cfg);
  const auto dir = run_directory(cfg);
  const auto novella = load_novella(cfg, manifest);
  manifest.add_input(cfg.character_names);
  const auto names = corpus::load_word_set(cfg.character_names);

  corpus::Histogram q;
  for (const auto& doc : load_oeuvre(cfg, manifest, true)) {
    for (const auto& t : doc.tokens) q.add(t);
  }
  const auto p = stats::filter_names(corpus::term_frequencies(novella.tokens), names);
  q = stats::filter_names(q, names);

  stats::KlReport report;
  {
    StageTimer t(manifest, "kl");
    report = stats::kl_contributions(p, q, cfg.kl_smoothing);
  }
  manifest.write_output(dir, "kl.csv", stats::kl_to_csv(report));
  json meta = {{"divergence", report.divergence}, {"smoothing", report.smoothing},
               {"novella_tokens", p.total}, {"reference_tokens", q.total}};
  json top = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(30, report.contributions.size()); ++i) {
    const auto& e = report.contributions[i];
    top.push_back({{"word", e.word}, {"p", e.p}, {"q", e.q}, {"contribution", e.contribution}});
  }
  manifest.write_output(dir, "kl.json", json{{"meta", meta}, {"data", {{"top", top}}}}.dump(2) + "\n");
  return finish(manifest, dir);
}

fs::path cmd_punct(const RunConfig& cfg) {
  RunManifest manifest("punct", cfg);
  const auto dir = run_directory(cfg);
  const auto novella = load_novella(cfg, manifest);
  const auto series = corpus::punctuation_series(novella.raw, novella.segmentation(cfg.segmentation));

  std::string csv = "segment_label,commas_cumulative,periods_cumulative,ratio\n";
  std::vector<std::string> labels;
  ChartLine line{"commas / periods", {}};
  for (const auto& pt : series) {
    csv += fmt::format("{},{},{},{}\n", csv_field(pt.label), pt.commas_cumulative, pt.periods_cumulative,
                       csv_number(pt.ratio));
    labels.push_back(pt.label);
    line.values.push_back(pt.ratio);
  }
  manifest.write_output(dir, "punct.csv", csv);
  if (cfg.svg) {
    manifest.write_output(dir, "punct.svg",
                          render_line_chart("Cumulative comma to period ratio", "segment", "ratio", labels, {line},
                                            svg_timestamp(cfg)));
  }
  return finish(manifest, dir);
}

}  // namespace ambig::app
