#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trendscope/lexikit.hpp"

namespace trendscope {

struct Document {
  std::string id;
  std::string raw_text;
  Lang lang = Lang::unknown;
  std::vector<std::string> tokens;
};

struct CorpusStats {
  std::size_t n_docs = 0;
  std::size_t n_sentences = 0;
  std::size_t n_words = 0;
  std::size_t n_unique_words = 0;

  bool operator==(const CorpusStats&) const = default;
};

enum class PreprocessStep {
  punctuation,
  arabizi,
  digits,
  lowercase,
  tokenize,
  stopwords,
  lemmatize,
  stem,
};

std::string_view to_string(PreprocessStep step);

// Word counts around one preprocessing step, summed over the corpus. The
// lemmatize/stem steps leave token counts alone and change the vocabulary,
// so unique counts are reported alongside.
struct StepCount {
  PreprocessStep step;
  std::size_t words_before = 0;
  std::size_t words_after = 0;
  std::size_t unique_before = 0;
  std::size_t unique_after = 0;
};

struct Corpus {
  std::vector<Document> documents;
  CorpusStats stats;
  std::vector<StepCount> preprocess_log;
};

enum class CorpusFormat { jsonl, csv, plain };

CorpusFormat parse_corpus_format(std::string_view name);

// Records keep file order. Blank lines are skipped in jsonl/plain input;
// plain lines get ids "1", "2", ... by record position.
Corpus ingest(const std::filesystem::path& path, CorpusFormat format);
Corpus ingest_string(std::string_view contents, CorpusFormat format);

enum class StemmerKind { none, suffix_rules };

struct PreprocessConfig {
  bool remove_punctuation = true;
  std::map<char32_t, std::string> arabizi_digit_map = default_arabizi_map();
  bool remove_digits = true;
  bool lowercase = true;
  // language name -> words; all lists apply to every document.
  std::map<std::string, std::set<std::string>> stopword_lists;
  std::optional<std::filesystem::path> lemma_table_path;
  // Used when lemma_table_path is unset.
  LemmaTable lemma_table;
  StemmerKind stemmer = StemmerKind::suffix_rules;
  SuffixStemmer stemmer_rules = SuffixStemmer::english();

  static std::map<char32_t, std::string> default_arabizi_map();
  static const std::vector<PreprocessStep>& step_order();
};

std::set<std::string> load_stopwords(const std::filesystem::path& path);

std::string normalize_arabizi(std::string_view token, const std::map<char32_t, std::string>& map);

// Applies the fixed step order to every document's raw_text and fills
// tokens, stats and preprocess_log. Arabizi digit mapping only touches
// documents tagged arabizi or unknown. Throws ConfigError if a lemma table
// path is set but cannot be read.
Corpus preprocess(const Corpus& corpus, const PreprocessConfig& config);

std::size_t count_sentences(std::string_view raw_text);
CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace trendscope
