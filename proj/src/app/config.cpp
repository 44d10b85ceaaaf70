#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ambig/app.hpp"
#include "ambig/error.hpp"

namespace ambig::app {
namespace {

using nlohmann::json;

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

embed::SgnsConfig parse_sgns(const json& j) {
  embed::SgnsConfig c;
  c.dim = get_or<std::size_t>(j, "dim", c.dim);
  c.window = get_or<std::size_t>(j, "window", c.window);
  c.negatives = get_or<std::size_t>(j, "negatives", c.negatives);
  c.min_count = get_or<std::size_t>(j, "min_count", c.min_count);
  c.epochs = get_or<std::size_t>(j, "epochs", c.epochs);
  c.initial_learning_rate = get_or<double>(j, "learning_rate", c.initial_learning_rate);
  c.subsample_threshold = get_or<double>(j, "subsample", c.subsample_threshold);
  return c;
}

json sgns_json(const embed::SgnsConfig& c) {
  return {{"dim", c.dim},           {"window", c.window},
          {"negatives", c.negatives}, {"min_count", c.min_count},
          {"epochs", c.epochs},     {"learning_rate", c.initial_learning_rate},
          {"subsample", c.subsample_threshold}, {"rng_seed", c.rng_seed}};
}

void require_file(const fs::path& p, std::string_view what) {
  if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("run config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    const fs::path data_root = AMBIG_DATA_DIR;
    cfg.novella = resolve(base_dir, j.at("novella").get<std::string>());
    if (j.contains("oeuvre_dir")) cfg.oeuvre_dir = resolve(base_dir, j.at("oeuvre_dir").get<std::string>());
    cfg.strip_boilerplate = get_or<bool>(j, "strip_boilerplate", true);
    cfg.stopwords = j.contains("stopwords") ? resolve(base_dir, j.at("stopwords").get<std::string>())
                                            : data_root / "stopwords_en.txt";
    cfg.character_names = j.contains("character_names")
                              ? resolve(base_dir, j.at("character_names").get<std::string>())
                              : data_root / "character_names.txt";
    cfg.segmentation_config = j.contains("segmentation_config")
                                  ? resolve(base_dir, j.at("segmentation_config").get<std::string>())
                                  : data_root / "installments.cfg";
    if (j.contains("segmentation")) {
      cfg.segmentation = corpus::parse_segment_kind(j.at("segmentation").get<std::string>());
    }
    if (j.contains("topics")) {
      const auto names = j.at("topics").get<std::vector<std::string>>();
      if (names.size() != 2) throw ConfigError("'topics' must name exactly two topics");
      cfg.topic_names = {names[0], names[1]};
    }
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);

    for (const auto& s : j.value("spaces", json::array())) {
      SpaceSpec spec;
      spec.id = s.at("id").get<std::string>();
      if (s.contains("vectors")) spec.vectors = resolve(base_dir, s.at("vectors").get<std::string>());
      spec.format = get_or<std::string>(s, "format", "auto");
      if (s.contains("train")) {
        const auto& t = s.at("train");
        spec.train_corpus = get_or<std::string>(t, "corpus", "oeuvre");
        spec.sgns = parse_sgns(t);
      }
      cfg.spaces.push_back(std::move(spec));
    }

    for (const auto& l : j.value("lexicons", json::array())) {
      LexiconPairSpec pair;
      pair.source = l.at("source").get<std::string>();
      pair.k = get_or<std::size_t>(l, "k", 10);
      pair.space = get_or<std::string>(l, "space", "");
      if (l.contains("files")) {
        const auto files = l.at("files").get<std::vector<std::string>>();
        if (files.size() != 2) throw ConfigError("lexicon '" + pair.source + "' needs two files");
        const auto prov = embed::parse_provenance(get_or<std::string>(l, "provenance", "manual_wiki"));
        for (std::size_t k = 0; k < 2; ++k) {
          pair.topics[k].file = resolve(base_dir, files[k]);
          pair.topics[k].provenance = prov;
        }
      } else if (l.contains("seeds")) {
        const auto seeds = l.at("seeds").get<std::vector<std::vector<std::string>>>();
        if (seeds.size() != 2) throw ConfigError("lexicon '" + pair.source + "' needs two seed lists");
        for (std::size_t k = 0; k < 2; ++k) {
          pair.topics[k].seed = seeds[k];
          pair.topics[k].provenance = embed::Provenance::seed_expanded;
        }
      } else {
        throw ConfigError("lexicon '" + pair.source + "' needs 'files' or 'seeds'");
      }
      cfg.lexicons.push_back(std::move(pair));
    }

    if (j.contains("metrics")) {
      cfg.metrics.clear();
      for (const auto& m : j.at("metrics")) cfg.metrics.push_back(metrics::parse_metric(m.get<std::string>()));
    }
    cfg.score_options.wmd_vocab_cap = get_or<std::size_t>(j, "wmd_vocab_cap", cfg.score_options.wmd_vocab_cap);
    cfg.score_options.unit_normalize = get_or<bool>(j, "unit_normalize", false);

    if (j.contains("lda")) {
      const auto& l = j.at("lda");
      cfg.lda.num_topics = get_or<std::size_t>(l, "topics", cfg.lda.num_topics);
      cfg.lda.alpha = get_or<double>(l, "alpha", cfg.lda.alpha);
      cfg.lda.beta = get_or<double>(l, "beta", cfg.lda.beta);
      cfg.lda.iterations = get_or<std::size_t>(l, "iterations", cfg.lda.iterations);
      cfg.lda_top_words = get_or<std::size_t>(l, "top_words", cfg.lda_top_words);
      cfg.lda_documents = corpus::parse_segment_kind(get_or<std::string>(l, "documents", "chapters"));
    }
    if (j.contains("kl")) cfg.kl_smoothing = get_or<double>(j.at("kl"), "smoothing", cfg.kl_smoothing);
    cfg.out_dir = resolve(base_dir, get_or<std::string>(j, "out", "out"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }

  for (auto& s : cfg.spaces) s.sgns.rng_seed = cfg.seed;
  cfg.lda.rng_seed = cfg.seed;
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), fs::absolute(path).parent_path());
}

void RunConfig::validate() const {
  require_file(novella, "novella text");
  require_file(stopwords, "stopword list");
  require_file(character_names, "character name list");
  require_file(segmentation_config, "segmentation config");
  if (oeuvre_dir && !fs::is_directory(*oeuvre_dir)) {
    throw ConfigError("oeuvre directory not found: " + oeuvre_dir->string());
  }

  std::set<std::string> ids;
  for (const auto& s : spaces) {
    if (s.id.empty()) throw ConfigError("space with empty id");
    if (!ids.insert(s.id).second) throw ConfigError("duplicate space id '" + s.id + "'");
    if (s.vectors.has_value() == s.train_corpus.has_value()) {
      throw ConfigError("space '" + s.id + "' needs exactly one of 'vectors' or 'train'");
    }
    if (s.vectors) require_file(*s.vectors, "vectors file for space '" + s.id + "'");
    if (s.train_corpus) {
      if (*s.train_corpus != "oeuvre" && *s.train_corpus != "novella") {
        throw ConfigError("space '" + s.id + "': train corpus must be 'oeuvre' or 'novella'");
      }
      if (*s.train_corpus == "oeuvre" && !oeuvre_dir) {
        throw ConfigError("space '" + s.id + "' trains on the oeuvre but no oeuvre_dir is set");
      }
      s.sgns.validate();
    }
    if (s.format != "auto" && s.format != "plain" && s.format != "headered") {
      throw ConfigError("space '" + s.id + "': unknown vector format '" + s.format + "'");
    }
  }
  if (space_choice && !ids.contains(*space_choice)) {
    throw ConfigError("unknown space '" + *space_choice + "'");
  }

  std::set<std::string> sources;
  for (const auto& l : lexicons) {
    if (!sources.insert(l.source).second) throw ConfigError("duplicate lexicon source '" + l.source + "'");
    for (const auto& t : l.topics) {
      if (t.file) require_file(*t.file, "lexicon file");
      if (!t.file && !ids.contains(l.space)) {
        throw ConfigError("lexicon '" + l.source + "' expands in unknown space '" + l.space + "'");
      }
    }
  }
  if (pair_choice && !sources.contains(*pair_choice)) {
    throw ConfigError("unknown lexicon source '" + *pair_choice + "'");
  }
  if (!lexicon_files.empty() && lexicon_files.size() != 2) {
    throw ConfigError("--lexicon needs two files (topic A, topic B)");
  }
  for (const auto& f : lexicon_files) require_file(f, "lexicon file");
  if (metrics.empty()) throw ConfigError("no metric selected");
  lda.validate();
  if (!(kl_smoothing > 0.0)) throw ConfigError("kl smoothing must be positive");
}

std::string RunConfig::canonical_json() const {
  json spaces_j = json::array();
  for (const auto& s : spaces) {
    json e = {{"id", s.id}, {"format", s.format}};
    if (s.vectors) e["vectors"] = s.vectors->string();
    if (s.train_corpus) {
      e["train_corpus"] = *s.train_corpus;
      e["sgns"] = sgns_json(s.sgns);
    }
    spaces_j.push_back(std::move(e));
  }
  json lex_j = json::array();
  for (const auto& l : lexicons) {
    json topics = json::array();
    for (const auto& t : l.topics) {
      json e = {{"provenance", std::string(embed::to_string(t.provenance))}, {"seed", t.seed}};
      if (t.file) e["file"] = t.file->string();
      topics.push_back(std::move(e));
    }
    lex_j.push_back({{"source", l.source}, {"k", l.k}, {"space", l.space}, {"topics", topics}});
  }
  json metrics_j = json::array();
  for (const auto m : metrics) metrics_j.push_back(std::string(metrics::to_string(m)));

  json j = {
      {"novella", novella.string()},
      {"oeuvre_dir", oeuvre_dir ? oeuvre_dir->string() : std::string()},
      {"strip_boilerplate", strip_boilerplate},
      {"stopwords", stopwords.string()},
      {"character_names", character_names.string()},
      {"segmentation_config", segmentation_config.string()},
      {"segmentation", std::string(corpus::to_string(segmentation))},
      {"topics", topic_names},
      {"spaces", spaces_j},
      {"lexicons", lex_j},
      {"metrics", metrics_j},
      {"wmd_vocab_cap", score_options.wmd_vocab_cap},
      {"unit_normalize", score_options.unit_normalize},
      {"lda", {{"topics", lda.num_topics}, {"alpha", lda.alpha}, {"beta", lda.beta},
               {"iterations", lda.iterations}, {"top_words", lda_top_words},
               {"documents", std::string(corpus::to_string(lda_documents))}}},
      {"kl_smoothing", kl_smoothing},
      {"seed", seed},
      {"selection", {{"space", space_choice.value_or("")},
                     {"pair", pair_choice.value_or("")},
                     {"lexicon", [&] {
                       std::vector<std::string> v;
                       for (const auto& f : lexicon_files) v.push_back(f.string());
                       return v;
                     }()},
                     {"seed_words", seed_words},
                     {"k", k_override ? static_cast<long long>(*k_override) : -1LL}}},
  };
  return j.dump();
}

std::string RunConfig::hash() const { return sha256_hex(canonical_json()); }

fs::path run_directory(const RunConfig& cfg) { return cfg.out_dir / cfg.hash().substr(0, 12); }

}  // namespace ambig::app
