// Command-line front end: each subcommand loads a run config, applies the
// flag overrides and writes its outputs into the run directory.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ambig/app.hpp"
#include "ambig/error.hpp"

namespace {

using namespace ambig;

struct Flags {
  std::string config;
  std::string metric;
  std::string segmentation;
  std::string space;
  std::string pair;
  std::string lexicon;
  std::string seed_words;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool svg = false;
  bool no_timestamps = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

app::RunConfig make_config(const Flags& f) {
  auto cfg = app::load_run_config(f.config);
  if (!f.metric.empty()) cfg.metrics = {metrics::parse_metric(f.metric)};
  if (!f.segmentation.empty()) cfg.segmentation = corpus::parse_segment_kind(f.segmentation);
  if (!f.space.empty()) cfg.space_choice = f.space;
  if (!f.pair.empty()) cfg.pair_choice = f.pair;
  for (const auto& p : split_list(f.lexicon)) cfg.lexicon_files.emplace_back(p);
  cfg.seed_words = split_list(f.seed_words);
  cfg.k_override = f.k;
  if (f.seed) {
    cfg.seed = *f.seed;
    for (auto& s : cfg.spaces) s.sgns.rng_seed = cfg.seed;
    cfg.lda.rng_seed = cfg.seed;
  }
  if (!f.out.empty()) cfg.out_dir = f.out;
  cfg.svg = f.svg;
  cfg.timestamps = !f.no_timestamps;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Topic presence and ambiguity analysis for a segmented text"};
  cli.set_version_flag("--version", std::string(app::kToolVersion));
  cli.require_subcommand(1);

  Flags flags;
  using Command = app::fs::path (*)(const app::RunConfig&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands{
      {"score", "Whole-text topic scores and ratios per lexicon source, metric and space", app::cmd_score},
      {"series", "Per-segment topic presence series", app::cmd_series},
      {"train", "Train the configured SGNS spaces", app::cmd_train},
      {"expand", "Expand a seed list into a lexicon", app::cmd_expand},
      {"lda", "Fit an LDA topic model on the segments", app::cmd_lda},
      {"kl", "Per-word KL contributions of the novella against the oeuvre", app::cmd_kl},
      {"punct", "Cumulative comma to period ratio per segment", app::cmd_punct},
  };

  Command selected = nullptr;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = cli.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--metric", flags.metric, "cosine | wmd");
    sub->add_option("--segmentation", flags.segmentation, "chapters | installments");
    sub->add_option("--space", flags.space, "Embedding space id");
    sub->add_option("--pair", flags.pair, "Lexicon source to use");
    sub->add_option("--lexicon", flags.lexicon, "Two lexicon files A,B replacing the configured pairs");
    sub->add_option("--seed-words", flags.seed_words, "Comma-separated seed words (expand)");
    sub->add_option("--k", flags.k, "Neighbors per seed expansion")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", flags.seed, "RNG seed for SGNS and LDA");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_flag("--svg", flags.svg, "Also render an SVG chart");
    sub->add_flag("--no-timestamps", flags.no_timestamps, "Omit timings and timestamps from outputs");
    sub->callback([&selected, fn = fn] { selected = fn; });
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e);
  }

  try {
    const auto cfg = make_config(flags);
    const auto dir = selected(cfg);
    std::cout << dir.string() << '\n';
    return 0;
  } catch (const ambig::ParseError& e) {
    std::cerr << "ambig: " << e.what() << '\n';
    return 3;
  } catch (const ambig::ConfigError& e) {
    std::cerr << "ambig: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ambig: " << e.what() << '\n';
    return 1;
  }
}
