#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ambig/corpus.hpp"
#include "ambig/embed.hpp"
#include "ambig/metrics.hpp"
#include "ambig/stats.hpp"

namespace ambig::app {

inline constexpr std::string_view kToolVersion = "0.1.0";

namespace fs = std::filesystem;

struct SpaceSpec {
  std::string id;
  std::optional<fs::path> vectors;  // load from file ...
  std::string format = "auto";      // plain | headered | auto
  std::optional<std::string> train_corpus;  // ... or train on "oeuvre" | "novella"
  embed::SgnsConfig sgns;
};

struct LexiconSpec {
  std::optional<fs::path> file;
  embed::Provenance provenance = embed::Provenance::manual_wiki;
  std::vector<std::string> seed;
};

/// Two lexicons (topic A, topic B) built with the same strategy.
struct LexiconPairSpec {
  std::string source;
  std::array<LexiconSpec, 2> topics;
  std::size_t k = 10;
  std::string space;  // expansion space for seed lexicons
};

struct RunConfig {
  fs::path novella;
  std::optional<fs::path> oeuvre_dir;
  bool strip_boilerplate = true;
  fs::path stopwords;
  fs::path character_names;
  fs::path segmentation_config;
  corpus::SegmentKind segmentation = corpus::SegmentKind::chapters;
  std::array<std::string, 2> topic_names{"topicA", "topicB"};
  std::vector<SpaceSpec> spaces;
  std::vector<LexiconPairSpec> lexicons;
  std::vector<metrics::Metric> metrics{metrics::Metric::cosine_avg, metrics::Metric::wmd};
  metrics::ScoreOptions score_options;
  stats::LdaConfig lda;
  std::size_t lda_top_words = 10;
  corpus::SegmentKind lda_documents = corpus::SegmentKind::chapters;
  double kl_smoothing = 0.5;
  std::uint64_t seed = 1;
  fs::path out_dir = "out";

  // Command-line selections (not part of the config file).
  std::optional<std::string> space_choice;
  std::optional<std::string> pair_choice;
  std::vector<fs::path> lexicon_files;  // two manual lists replacing the pair
  std::vector<std::string> seed_words;
  std::optional<std::size_t> k_override;
  bool svg = false;
  bool timestamps = true;

  /// Checks referenced files and cross references. Throws ConfigError.
  void validate() const;
  /// Canonical JSON of everything that affects outputs.
  std::string canonical_json() const;
  std::string hash() const;  // sha256 of canonical_json()
};

/// Parses a JSON run configuration; relative paths resolve against the
/// config file's directory. The "seed" value also seeds every SGNS space
/// and LDA.
RunConfig load_run_config(const fs::path& path);
RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir);

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const fs::path& path);

/// Reproducibility record written next to every command's outputs.
class RunManifest {
 public:
  RunManifest(std::string command, const RunConfig& cfg);

  void add_input(const fs::path& path);
  /// Writes `content` to `dir / name` and records its digest.
  fs::path write_output(const fs::path& dir, const std::string& name, std::string_view content);
  void warn(std::string message);
  void time(const std::string& stage, std::chrono::steady_clock::duration elapsed);
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::string to_json() const;
  fs::path write(const fs::path& dir) const;

 private:
  std::string command_;
  std::string config_hash_;
  std::uint64_t seed_;
  bool timestamps_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
  std::vector<std::pair<std::string, double>> timings_ms_;
  std::vector<std::string> warnings_;
};

struct ChartLine {
  std::string name;
  std::vector<std::optional<double>> values;
};

/// Standalone SVG line chart: one polyline per line, x = segment index.
/// Gaps break the polyline. `timestamp` is embedded as a comment if set.
std::string render_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                              const std::vector<std::string>& x_ticks, const std::vector<ChartLine>& lines,
                              std::optional<std::string> timestamp = std::nullopt);

/// Loaded novella: raw text, stopword-filtered tokens and both segmentations.
struct Novella {
  corpus::RawText raw;
  corpus::TokenStream all_tokens;
  corpus::TokenStream tokens;  // stopwords removed
  corpus::SegmentedText chapters;
  corpus::SegmentedText installments;

  const corpus::SegmentedText& segmentation(corpus::SegmentKind kind) const {
    return kind == corpus::SegmentKind::chapters ? chapters : installments;
  }
};

Novella load_novella(const RunConfig& cfg, RunManifest& manifest);

/// Command entry points. Each returns the run directory it wrote to.
fs::path cmd_score(const RunConfig& cfg);
fs::path cmd_series(const RunConfig& cfg);
fs::path cmd_train(const RunConfig& cfg);
fs::path cmd_expand(const RunConfig& cfg);
fs::path cmd_lda(const RunConfig& cfg);
fs::path cmd_kl(const RunConfig& cfg);
fs::path cmd_punct(const RunConfig& cfg);

/// `out_dir / <first 12 hex digits of the config hash>`.
fs::path run_directory(const RunConfig& cfg);

}  // namespace ambig::app
