#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "trendscope/corpus_io.hpp"
#include "trendscope/error.hpp"
#include "trendscope/text.hpp"

using namespace trendscope;
namespace fs = std::filesystem;

namespace {

Corpus docs_of(std::initializer_list<const char*> texts, Lang lang = Lang::unknown) {
  Corpus c;
  int i = 0;
  for (const char* t : texts) c.documents.push_back({"d" + std::to_string(i++), t, lang, {}});
  return c;
}

PreprocessConfig bare_config() {
  PreprocessConfig cfg;
  cfg.stemmer = StemmerKind::none;
  return cfg;
}

// Random raw text over a small alphabet with digits, punctuation, case and
// a few stopwords mixed in.
std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "The", "running", "cats", "n7ebek", "3ajla", "Bonjour", "par", "sur", "is", "é", "covid19",
      "tested", "glasses", "2024", "...", "!", "?", "a,b", "(x)", "WALKINGS", "news", "studies"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1), len(0, 12);
  std::string out;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += rng() % 4 == 0 ? "  " : " ";
    out += pieces[pick(rng)];
  }
  return out;
}

Corpus reparse(const Corpus& c) {
  Corpus again = c;
  for (auto& d : again.documents) {
    d.raw_text = text::join(d.tokens, " ");
    d.tokens.clear();
  }
  return again;
}

}  // namespace

TEST_SUITE("corpus_io") {
  TEST_CASE("jsonl ingest keeps file order") {
    const auto c = ingest_string(
        "{\"id\":\"b\",\"text\":\"two\"}\n{\"id\":\"a\",\"text\":\"one\",\"lang\":\"french\"}\n"
        "{\"id\":\"c\",\"text\":\"three\"}\n",
        CorpusFormat::jsonl);
    REQUIRE(c.stats.n_docs == 3);
    CHECK(c.documents[0].id == "b");
    CHECK(c.documents[1].id == "a");
    CHECK(c.documents[1].lang == Lang::french);
    CHECK(c.documents[2].raw_text == "three");
  }

  TEST_CASE("empty file gives an empty corpus") {
    CHECK(ingest_string("", CorpusFormat::jsonl).stats.n_docs == 0);
    CHECK(ingest_string("", CorpusFormat::plain).stats.n_docs == 0);
  }

  TEST_CASE("missing text field reports line 2") {
    try {
      ingest_string("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\"}\n", CorpusFormat::jsonl);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("missing file is an IoError") {
    CHECK_THROWS_AS(ingest("/nonexistent/corpus.jsonl", CorpusFormat::jsonl), IoError);
  }

  TEST_CASE("csv with quoted fields") {
    const auto c = ingest_string("id,text,lang\n1,\"hello, world\",english\n2,\"say \"\"hi\"\"\",\n",
                                 CorpusFormat::csv);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].raw_text == "hello, world");
    CHECK(c.documents[0].lang == Lang::english);
    CHECK(c.documents[1].raw_text == "say \"hi\"");
  }

  TEST_CASE("plain format numbers records") {
    const auto c = ingest_string("first line\n\nsecond line\n", CorpusFormat::plain);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[1].id == "2");
  }

  TEST_CASE("ingest from disk") {
    const fs::path p = fs::temp_directory_path() / "trendscope_ingest_test.jsonl";
    {
      std::ofstream f(p);
      for (int i = 0; i < 7; ++i) f << "{\"id\":\"" << i << "\",\"text\":\"t\"}\n";
    }
    CHECK(ingest(p, CorpusFormat::jsonl).stats.n_docs == 7);
    fs::remove(p);
  }

  TEST_CASE("arabizi normalization") {
    const auto map = PreprocessConfig::default_arabizi_map();
    CHECK(normalize_arabizi("n7ebek", map) == "nhebek");
    CHECK(normalize_arabizi("salut", map) == "salut");
    CHECK(normalize_arabizi("3ajla", {{U'3', "a"}}) == "aajla");
    CHECK(normalize_arabizi("5obz", map) == "khobz");
  }

  TEST_CASE("arabizi substitution runs before digit removal") {
    const auto out = preprocess(docs_of({"n7ebek 2024"}, Lang::arabizi), bare_config());
    CHECK(out.documents[0].tokens == std::vector<std::string>{"nhebek"});
  }

  TEST_CASE("documents tagged with another language keep digits out of the arabizi map") {
    const auto out = preprocess(docs_of({"covid19"}, Lang::english), bare_config());
    CHECK(out.documents[0].tokens == std::vector<std::string>{"covid"});
  }

  TEST_CASE("french stopword example") {
    auto cfg = bare_config();
    cfg.stopword_lists["french"] = {"ça"};
    const auto out = preprocess(docs_of({"Comment ça va?"}, Lang::french), cfg);
    CHECK(out.documents[0].tokens == std::vector<std::string>{"comment", "va"});
  }

  TEST_CASE("punctuation-only document yields no tokens") {
    const auto out = preprocess(docs_of({"?!... ,;"}), bare_config());
    CHECK(out.documents[0].tokens.empty());
  }

  TEST_CASE("lemma table then stemmer") {
    PreprocessConfig cfg;
    cfg.lemma_table = parse_lemma_table("better\tgood\n");
    const auto out = preprocess(docs_of({"better running cats"}), cfg);
    CHECK(out.documents[0].tokens == std::vector<std::string>{"good", "run", "cat"});
  }

  TEST_CASE("unreadable lemma table is a config error") {
    PreprocessConfig cfg;
    cfg.lemma_table_path = "/nonexistent/lemmas.tsv";
    CHECK_THROWS_AS(preprocess(docs_of({"x"}), cfg), ConfigError);
  }

  TEST_CASE("step log follows the fixed order") {
    const auto out = preprocess(docs_of({"a b"}), PreprocessConfig{});
    REQUIRE(out.preprocess_log.size() == PreprocessConfig::step_order().size());
    CHECK(out.preprocess_log.front().step == PreprocessStep::punctuation);
    CHECK(out.preprocess_log.back().step == PreprocessStep::stem);
    const auto& order = PreprocessConfig::step_order();
    const auto pos = [&](PreprocessStep s) { return std::find(order.begin(), order.end(), s) - order.begin(); };
    CHECK(pos(PreprocessStep::arabizi) < pos(PreprocessStep::digits));
  }

  TEST_CASE("corpus stats") {
    auto out = preprocess(docs_of({"a b", "a c"}), bare_config());
    CHECK(out.stats.n_words == 4);
    CHECK(out.stats.n_unique_words == 3);
    CHECK(corpus_stats(Corpus{}) == CorpusStats{});
    CHECK(count_sentences("a. b.") == 2);
    CHECK(count_sentences("what? yes! done") == 3);
    CHECK(count_sentences("...") == 0);
  }

  TEST_CASE("property: counts never grow, output is a fixed point, no uppercase survives") {
    std::mt19937_64 rng(11);
    PreprocessConfig cfg;
    cfg.stopword_lists["french"] = {"par", "sur"};
    cfg.stopword_lists["english"] = {"the", "is"};
    cfg.lemma_table = parse_lemma_table("better\tgood\nstudies\tstudy\n");
    for (int trial = 0; trial < 200; ++trial) {
      Corpus c;
      const std::size_t n = rng() % 6;
      for (std::size_t j = 0; j < n; ++j) {
        const Lang lang = static_cast<Lang>(rng() % 5);
        c.documents.push_back({"d" + std::to_string(j), random_text(rng), lang, {}});
      }
      const auto once = preprocess(c, cfg);
      for (const auto& s : once.preprocess_log) REQUIRE(s.words_after <= s.words_before);
      for (const auto& d : once.documents)
        for (const auto& t : d.tokens) {
          REQUIRE_FALSE(t.empty());
          for (char32_t cp : text::decode(t)) REQUIRE_FALSE(text::is_upper_latin(cp));
        }
      const auto twice = preprocess(reparse(once), cfg);
      for (std::size_t j = 0; j < n; ++j) REQUIRE(twice.documents[j].tokens == once.documents[j].tokens);
    }
  }

  TEST_CASE("property: n records in, n docs out") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = rng() % 30;
      std::string jsonl;
      for (std::size_t i = 0; i < n; ++i) jsonl += "{\"id\":\"" + std::to_string(i) + "\",\"text\":\"x y\"}\n";
      CHECK(corpus_stats(ingest_string(jsonl, CorpusFormat::jsonl)).n_docs == n);
    }
  }
}
