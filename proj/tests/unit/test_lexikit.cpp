#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles/oracles.hpp"
#include "trendscope/error.hpp"
#include "trendscope/lexikit.hpp"

using namespace trendscope;

namespace {

std::string random_word(std::mt19937_64& rng, const std::string& alphabet, std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len), ch(0, alphabet.size() - 1);
  std::string w;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w.push_back(alphabet[ch(rng)]);
  return w;
}

std::set<std::string> keys_of(const DeleteIndex& idx) {
  std::set<std::string> k;
  for (const auto& [key, _] : idx.deletes) k.insert(key);
  return k;
}

}  // namespace

TEST_SUITE("lexikit") {
  TEST_CASE("dictionary parse and merge") {
    const auto d = parse_dictionary("bonjour\thello|good morning\n");
    REQUIRE(lookup(d, "bonjour"));
    CHECK(*lookup(d, "bonjour") == std::vector<std::string>{"hello", "good morning"});
    CHECK(lookup(d, "Bonjour") == lookup(d, "bonjour"));
    CHECK_FALSE(lookup(d, "xyzzy"));

    const auto m = parse_dictionary("chat\tcat\nchat\tpuss|cat\n");
    CHECK(*lookup(m, "chat") == std::vector<std::string>{"cat", "puss"});
    CHECK(parse_dictionary("").entries.empty());
  }

  TEST_CASE("dictionary format errors carry the line") {
    try {
      parse_dictionary("a\tb\nbroken\n");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(load_dictionary("/nonexistent.tsv"), IoError);
    CHECK_NOTHROW(parse_dictionary("known\n", DictionaryKind::lexicon));
    CHECK(lookup(parse_dictionary("known\n", DictionaryKind::lexicon), "known")->empty());
  }

  TEST_CASE("property: lookup is case-insensitive") {
    const auto d = parse_dictionary("Été\tsummer\nparis\tParis\n");
    for (const char* q : {"été", "ÉTÉ", "Été", "PARIS", "Paris"}) CHECK(lookup(d, q).has_value());
  }

  TEST_CASE("symspell build examples") {
    CHECK(keys_of(symspell_build({{"ab", 5}}, 1)) == std::set<std::string>{"ab", "a", "b"});
    CHECK(symspell_build({}, 1).deletes.empty());
    const auto aa = symspell_build({{"aa", 1}}, 1);
    CHECK(keys_of(aa) == std::set<std::string>{"aa", "a"});
    CHECK(aa.deletes.at("a") == std::vector<std::string>{"aa"});
    CHECK_THROWS_AS(symspell_build({{"a", 1}}, 0), ConfigError);
    CHECK_THROWS_AS(symspell_build({{"a", 1}}, 3), ConfigError);
  }

  TEST_CASE("symspell lookup examples") {
    const auto idx = symspell_build({{"hello", 100}, {"help", 50}}, 1);
    const auto r = symspell_lookup(idx, "helo", 1);
    CHECK(r == std::vector<Correction>{{"hello", 1, 100}, {"help", 1, 50}});
    const auto self = symspell_lookup(idx, "help", 1);
    REQUIRE_FALSE(self.empty());
    CHECK(self.front() == Correction{"help", 0, 50});
    const auto far = symspell_build({{"abcdef", 1}}, 2);
    CHECK(symspell_lookup(far, "abcxyz", 2).empty());
  }

  TEST_CASE("property: delete keys are exactly the regenerated deletions") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      const int d = 1 + static_cast<int>(rng() % 2);
      std::map<std::string, std::uint64_t> vocab;
      for (int i = 0; i < 30; ++i) vocab[random_word(rng, "abcde", 1, 6)] = 1 + rng() % 9;
      const auto idx = symspell_build(vocab, d);
      std::map<std::string, std::set<std::string>> expected;
      for (const auto& [w, _] : vocab)
        for (const auto& del : oracle::deletions(w, d)) expected[del].insert(w);
      REQUIRE(idx.deletes.size() == expected.size());
      for (const auto& [key, words] : idx.deletes) {
        REQUIRE(expected.count(key));
        REQUIRE(std::set<std::string>(words.begin(), words.end()) == expected[key]);
      }
      for (const auto& [w, _] : vocab) REQUIRE(idx.deletes.count(w));
    }
  }

  TEST_CASE("property: lookup equals a brute-force Levenshtein scan") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 60; ++trial) {
      const int d = 1 + static_cast<int>(rng() % 2);
      std::map<std::string, std::uint64_t> vocab;
      const std::size_t n = 1 + rng() % 300;
      for (std::size_t i = 0; i < n; ++i) vocab[random_word(rng, "abcdef", 1, 7)] = 1 + rng() % 20;
      const auto idx = symspell_build(vocab, d);
      for (int q = 0; q < 5; ++q) {
        const std::string term = random_word(rng, "abcdef", 0, 8);
        std::set<std::string> expected;
        for (const auto& [w, _] : vocab)
          if (oracle::levenshtein(term, w) <= d) expected.insert(w);
        const auto got = symspell_lookup(idx, term, d);
        std::set<std::string> got_words;
        for (const auto& c : got) {
          got_words.insert(c.word);
          REQUIRE(c.distance == oracle::levenshtein(term, c.word));
          REQUIRE(c.frequency == vocab.at(c.word));
        }
        REQUIRE(got_words == expected);
        REQUIRE(std::is_sorted(got.begin(), got.end(), correction_less));
      }
    }
  }

  TEST_CASE("property: correction ordering is a strict total order") {
    std::mt19937_64 rng(23);
    std::vector<Correction> cs;
    for (int i = 0; i < 60; ++i)
      cs.push_back({random_word(rng, "ab", 1, 3), static_cast<int>(rng() % 3), rng() % 3});
    for (const auto& a : cs)
      for (const auto& b : cs) {
        const bool lt = correction_less(a, b), gt = correction_less(b, a);
        CHECK_FALSE((lt && gt));
        if (!lt && !gt) CHECK(a == b);
      }
  }

  TEST_CASE("edit distance with and without transpositions") {
    CHECK(edit_distance("kitten", "sitting") == 3);
    CHECK(edit_distance("ab", "ba") == 2);
    CHECK(edit_distance("ab", "ba", true) == 1);
    CHECK(edit_distance("", "abc") == 3);
    CHECK(edit_distance("été", "ete") == 2);
  }

  TEST_CASE("stemmer") {
    const auto rules = SuffixStemmer::english();
    CHECK(stem("running", rules) == "run");
    CHECK(stem("run", rules) == "run");
    CHECK(stem("cats", rules) == "cat");
    CHECK(stem("glass", rules) == "glass");
    CHECK(stem("tested", rules) == "test");
    CHECK_FALSE(stem("s", rules).empty());
  }

  TEST_CASE("lemmatizer") {
    const auto table = parse_lemma_table("better\tgood\nRan\trun\n");
    CHECK(lemmatize("better", table) == "good");
    CHECK(lemmatize("table-missing-word", table) == "table-missing-word");
    const auto rules = SuffixStemmer::english();
    CHECK(lemmatize("running", table, &rules) == "run");
    CHECK(lemmatize("ran", table) == "run");
  }

  TEST_CASE("lemma chains resolve to a fixed point") {
    const auto table = parse_lemma_table("a\tb\nb\tc\n");
    CHECK(*table.find("a") == "c");
  }
}
