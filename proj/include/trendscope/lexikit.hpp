#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Translation dictionaries, the lemma table and suffix stemmer, and the
// symmetric-delete spelling corrector.
namespace trendscope {

enum class Lang { arabic, arabizi, french, english, unknown };

std::string_view to_string(Lang lang);
// Unknown names map to Lang::unknown.
Lang parse_lang(std::string_view name);

enum class DictionaryKind { bilingual, parallel, lexicon };

std::string_view to_string(DictionaryKind kind);
DictionaryKind parse_dictionary_kind(std::string_view name);

struct BilingualDictionary {
  Lang source_lang = Lang::unknown;
  Lang target_lang = Lang::english;
  DictionaryKind kind = DictionaryKind::bilingual;
  // Keys are case-folded. Only lexicon dictionaries may hold empty lists.
  std::map<std::string, std::vector<std::string>> entries;
};

// TSV: source<TAB>target1|target2. Lexicon files may omit the second column.
// Duplicate sources merge their targets in file order, dropping repeats.
BilingualDictionary load_dictionary(const std::filesystem::path& path,
                                    DictionaryKind kind = DictionaryKind::bilingual,
                                    Lang source = Lang::unknown, Lang target = Lang::english);
BilingualDictionary parse_dictionary(std::string_view tsv, DictionaryKind kind = DictionaryKind::bilingual);

std::optional<std::vector<std::string>> lookup(const BilingualDictionary& dict, std::string_view term);

// ---------------------------------------------------------------------------
// SymSpell

struct DeleteIndex {
  int max_edit_distance = 2;
  bool transpositions = false;
  // deleted form -> sorted originating words
  std::unordered_map<std::string, std::vector<std::string>> deletes;
  std::unordered_map<std::string, std::uint64_t> frequencies;
};

struct Correction {
  std::string word;
  int distance = 0;
  std::uint64_t frequency = 0;

  bool operator==(const Correction&) const = default;
};

// Ranking: ascending distance, descending frequency, then lexicographic.
bool correction_less(const Correction& a, const Correction& b);

// Throws ConfigError unless max_edit_distance is 1 or 2.
DeleteIndex symspell_build(const std::map<std::string, std::uint64_t>& vocab, int max_edit_distance,
                           bool transpositions = false);
std::vector<Correction> symspell_lookup(const DeleteIndex& index, std::string_view term, int max_distance);

// Plain Levenshtein over code points; optimal-string-alignment when
// transpositions are enabled.
int edit_distance(std::u32string_view a, std::u32string_view b, bool transpositions = false);
int edit_distance(std::string_view a, std::string_view b, bool transpositions = false);

// word<TAB>count
std::map<std::string, std::uint64_t> load_frequency_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Lemmas and stems

struct SuffixRule {
  std::string suffix;
  std::string replacement;
  // Minimum number of code points left before the suffix for the rule to match.
  std::size_t min_stem = 1;
  // Collapse a trailing doubled consonant after stripping ("runn" -> "run").
  bool undouble = false;
};

struct SuffixStemmer {
  std::vector<SuffixRule> rules;
  // "ing", "ed", "s" and a few guards ("ss", "us", "is") that keep common
  // words intact.
  static SuffixStemmer english();
};

std::string stem(std::string_view token, const SuffixStemmer& stemmer);

class LemmaTable {
 public:
  LemmaTable() = default;
  explicit LemmaTable(std::map<std::string, std::string> entries);

  std::optional<std::string> find(std::string_view token) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

// token<TAB>lemma. Keys and lemmas are case-folded; chains (a->b, b->c) are
// resolved to their final lemma so a lookup is a fixed point.
LemmaTable load_lemma_table(const std::filesystem::path& path);
LemmaTable parse_lemma_table(std::string_view tsv);

// Table hit -> lemma. On a miss the stemmer, when given, is applied;
// otherwise the token comes back unchanged.
std::string lemmatize(std::string_view token, const LemmaTable& table,
                      const SuffixStemmer* fallback = nullptr);

}  // namespace trendscope
