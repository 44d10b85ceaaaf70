#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <random>

#include "ambig/error.hpp"
#include "ambig/stats.hpp"
#include "support.hpp"

using namespace ambig;
using namespace ambig::stats;

namespace {

corpus::Histogram hist(std::initializer_list<std::pair<const char*, std::int64_t>> items) {
  corpus::Histogram h;
  for (const auto& [w, c] : items) h.add(w, c);
  return h;
}

corpus::TokenStream doc(const std::vector<std::string>& words) {
  corpus::TokenStream ts;
  ts.tokens = words;
  ts.offsets.resize(words.size());
  return ts;
}

}  // namespace

TEST_SUITE("kl") {
  TEST_CASE("identical histograms give zero") {
    const auto h = hist({{"a", 3}, {"b", 1}});
    const auto r = kl_contributions(h, h);
    CHECK(r.divergence == 0.0);
    for (const auto& e : r.contributions) CHECK(e.contribution == 0.0);
  }

  TEST_CASE("closed form for disjoint singletons") {
    // V = {a, b}; p = (1.5, 0.5)/2, q = (0.5, 1.5)/2.
    const auto r = kl_contributions(hist({{"a", 1}}), hist({{"b", 1}}), 0.5);
    REQUIRE(r.contributions.size() == 2);
    CHECK(r.contributions[0].word == "a");
    CHECK(r.contributions[0].p == doctest::Approx(0.75));
    CHECK(r.contributions[0].q == doctest::Approx(0.25));
    CHECK(r.contributions[0].contribution == doctest::Approx(0.75 * std::log(3.0)).epsilon(1e-12));
    CHECK(r.contributions[1].contribution == doctest::Approx(0.25 * std::log(1.0 / 3.0)).epsilon(1e-12));
    CHECK(r.divergence == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
    CHECK(r.smoothing == 0.5);
  }

  TEST_CASE("random histograms: non-negative, partitioned, sorted") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 100; ++round) {
      corpus::Histogram p, q;
      for (int i = 0; i < 30; ++i) {
        p.add("w" + std::to_string(rng() % 20), static_cast<std::int64_t>(1 + rng() % 5));
        q.add("w" + std::to_string(rng() % 25), static_cast<std::int64_t>(1 + rng() % 5));
      }
      const double s = 0.1 + static_cast<double>(rng() % 10) / 10.0;
      const auto r = kl_contributions(p, q, s);
      CHECK(r.divergence >= 0.0);
      double sum = 0, psum = 0, qsum = 0;
      for (std::size_t i = 0; i < r.contributions.size(); ++i) {
        sum += r.contributions[i].contribution;
        psum += r.contributions[i].p;
        qsum += r.contributions[i].q;
        if (i > 0) CHECK(r.contributions[i].contribution <= r.contributions[i - 1].contribution);
      }
      CHECK(std::abs(sum - r.divergence) <= 1e-9);
      CHECK(std::abs(psum - 1.0) <= 1e-9);
      CHECK(std::abs(qsum - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(kl_contributions(corpus::Histogram{}, hist({{"a", 1}})), InvalidArgument);
    CHECK_THROWS_AS(kl_contributions(hist({{"a", 1}}), hist({{"a", 1}}), 0.0), InvalidArgument);
  }

  TEST_CASE("csv layout") {
    const auto csv = kl_to_csv(kl_contributions(hist({{"a", 1}}), hist({{"b", 1}})));
    CHECK(csv.starts_with("word,p,q,contribution\na,0.750000,0.250000,0.823959\n"));
  }

  TEST_CASE("name filter") {
    const auto h = filter_names(hist({{"flora", 3}, {"pool", 1}}), {"flora", "miles"});
    CHECK(h.distinct() == 1);
    CHECK(h.count("pool") == 1);
    CHECK(h.total == 1);
    const auto same = filter_names(hist({{"a", 2}}), {});
    CHECK(same.total == 2);
  }

  TEST_CASE("shipped name list removes every character name") {
    const auto names = corpus::load_word_set(test::kData / "character_names.txt");
    const auto text = test::read_file(test::kFixtures / "mini_novella.txt");
    const auto h = filter_names(corpus::term_frequencies(corpus::tokenize(text)), names);
    for (const auto& n : names) CHECK(h.count(n) == 0);
    CHECK(h.count("miles's") == 1);  // possessives are distinct tokens
  }
}

TEST_SUITE("lda") {
  TEST_CASE("config validation and empty corpus") {
    LdaConfig cfg;
    cfg.num_topics = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = LdaConfig{};
    cfg.alpha = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    const std::vector<corpus::TokenStream> empty{doc({}), doc({})};
    CHECK_THROWS_AS(lda_fit(empty, LdaConfig{}), EmptyInputError);
  }

  TEST_CASE("single topic") {
    const std::vector<corpus::TokenStream> docs{doc({"a", "b", "a"}), doc({"c", "a"})};
    LdaConfig cfg;
    cfg.num_topics = 1;
    cfg.iterations = 5;
    const auto m = lda_fit(docs, cfg);
    for (const auto& row : m.theta) CHECK(row[0] == doctest::Approx(1.0));
    const double denom = 5 + 3 * cfg.beta;
    CHECK(m.phi[0][0] == doctest::Approx((3 + cfg.beta) / denom));
    CHECK(m.phi[0][2] == doctest::Approx((1 + cfg.beta) / denom));
    CHECK(m.vocab == std::vector<std::string>{"a", "b", "c"});
  }

  TEST_CASE("counts stay consistent and rows are distributions") {
    std::mt19937_64 rng(3);
    std::vector<corpus::TokenStream> docs;
    corpus::Histogram tf;
    for (int d = 0; d < 20; ++d) {
      std::vector<std::string> w;
      for (int i = 0; i < 30; ++i) {
        w.push_back("w" + std::to_string(rng() % 40));
        tf.add(w.back());
      }
      docs.push_back(doc(w));
    }
    LdaConfig cfg;
    cfg.num_topics = 4;
    GibbsSampler sampler(docs, cfg);
    CHECK(sampler.counts_consistent());
    for (int sweep = 0; sweep < 10; ++sweep) {
      sampler.sweep();
      CHECK(sampler.counts_consistent());
      const auto totals = sampler.word_totals();
      const auto vocab = sampler.model().vocab;
      for (std::size_t i = 0; i < vocab.size(); ++i) CHECK(totals[i] == static_cast<std::uint64_t>(tf.count(vocab[i])));
    }
    CHECK(sampler.sweeps_done() == 10);
    const auto m = sampler.model();
    for (const auto& row : m.phi) {
      double s = 0;
      for (const double x : row) {
        CHECK(x > 0.0);
        s += x;
      }
      CHECK(std::abs(s - 1.0) <= 1e-9);
    }
    for (const auto& row : m.theta) {
      double s = 0;
      for (const double x : row) s += x;
      CHECK(std::abs(s - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("fixed seed reproduces assignments, other seeds differ") {
    const auto text = test::read_file(test::kFixtures / "mini_novella.txt");
    const auto ts = corpus::tokenize(text);
    const std::vector<corpus::TokenStream> docs{ts.slice(0, 300), ts.slice(300, ts.size())};
    LdaConfig cfg;
    cfg.num_topics = 3;
    cfg.iterations = 20;
    const auto a = lda_fit(docs, cfg);
    const auto b = lda_fit(docs, cfg);
    CHECK(a.assignments == b.assignments);
    CHECK(lda_to_json(a) == lda_to_json(b));
    cfg.rng_seed = 99;
    CHECK(lda_fit(docs, cfg).assignments != a.assignments);
  }

  TEST_CASE("top words") {
    LdaModel m;
    m.vocab = {"a", "b", "c"};
    m.phi = {{0.1, 0.8, 0.1}, {0.4, 0.2, 0.4}};
    CHECK(lda_top_words(m, 0, 1) == std::vector<std::string>{"b"});
    CHECK(lda_top_words(m, 1, 2) == std::vector<std::string>{"a", "c"});
    CHECK(lda_top_words(m, 1, 10).size() == 3);
    CHECK_THROWS_AS(lda_top_words(m, 2, 1), InvalidArgument);
  }

  TEST_CASE("json layout") {
    const std::vector<corpus::TokenStream> docs{doc({"x", "y"}), doc({"y", "z"})};
    LdaConfig cfg;
    cfg.num_topics = 2;
    cfg.iterations = 3;
    const auto j = nlohmann::json::parse(lda_to_json(lda_fit(docs, cfg), 2));
    CHECK(j["meta"]["num_topics"] == 2);
    CHECK(j["data"]["phi"].size() == 2);
    CHECK(j["data"]["theta"].size() == 2);
    CHECK(j["data"]["top_words"][0].size() == 2);
  }
}
