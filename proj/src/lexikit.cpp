#include "trendscope/lexikit.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/text.hpp"

namespace trendscope {

std::string_view to_string(Lang lang) {
  switch (lang) {
    case Lang::arabic: return "arabic";
    case Lang::arabizi: return "arabizi";
    case Lang::french: return "french";
    case Lang::english: return "english";
    case Lang::unknown: break;
  }
  return "unknown";
}

Lang parse_lang(std::string_view name) {
  const std::string n = text::casefold(name);
  if (n == "arabic" || n == "ar") return Lang::arabic;
  if (n == "arabizi") return Lang::arabizi;
  if (n == "french" || n == "fr") return Lang::french;
  if (n == "english" || n == "en") return Lang::english;
  return Lang::unknown;
}

std::string_view to_string(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::bilingual: return "bilingual";
    case DictionaryKind::parallel: return "parallel";
    case DictionaryKind::lexicon: return "lexicon";
  }
  return "bilingual";
}

DictionaryKind parse_dictionary_kind(std::string_view name) {
  if (name == "bilingual") return DictionaryKind::bilingual;
  if (name == "parallel") return DictionaryKind::parallel;
  if (name == "lexicon") return DictionaryKind::lexicon;
  throw ConfigError("unknown dictionary kind '" + std::string(name) + "'");
}

BilingualDictionary parse_dictionary(std::string_view tsv, DictionaryKind kind) {
  BilingualDictionary dict;
  dict.kind = kind;
  auto lines = io::split(tsv, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string& line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = io::split(line, '\t');
    const bool lexicon = kind == DictionaryKind::lexicon;
    if (cols.size() > 2 || (cols.size() == 1 && !lexicon)) {
      throw FormatError("expected 2 tab-separated columns, got " + std::to_string(cols.size()), i + 1);
    }
    const std::string source = text::casefold(cols[0]);
    if (source.empty()) throw FormatError("empty source term", i + 1);
    std::vector<std::string> targets;
    if (cols.size() == 2 && !cols[1].empty()) {
      for (auto& t : io::split(cols[1], '|')) {
        if (!t.empty()) targets.push_back(std::move(t));
      }
    }
    if (targets.empty() && !lexicon) throw FormatError("no targets for '" + source + "'", i + 1);
    auto& list = dict.entries[source];
    for (auto& t : targets) {
      if (std::find(list.begin(), list.end(), t) == list.end()) list.push_back(std::move(t));
    }
  }
  return dict;
}

BilingualDictionary load_dictionary(const std::filesystem::path& path, DictionaryKind kind, Lang source,
                                    Lang target) {
  auto dict = parse_dictionary(io::read_file(path), kind);
  dict.source_lang = source;
  dict.target_lang = target;
  return dict;
}

std::optional<std::vector<std::string>> lookup(const BilingualDictionary& dict, std::string_view term) {
  const auto it = dict.entries.find(text::casefold(term));
  if (it == dict.entries.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

bool correction_less(const Correction& a, const Correction& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  return a.word < b.word;
}

namespace {

void collect_deletes(const std::u32string& word, int depth, std::unordered_set<std::u32string>& out) {
  if (depth == 0 || word.empty()) return;
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::u32string shorter = word;
    shorter.erase(i, 1);
    if (out.insert(shorter).second) collect_deletes(shorter, depth - 1, out);
  }
}

std::unordered_set<std::u32string> deletes_of(const std::u32string& word, int max_depth) {
  std::unordered_set<std::u32string> out{word};
  collect_deletes(word, max_depth, out);
  return out;
}

}  // namespace

DeleteIndex symspell_build(const std::map<std::string, std::uint64_t>& vocab, int max_edit_distance,
                           bool transpositions) {
  if (max_edit_distance != 1 && max_edit_distance != 2) {
    throw ConfigError("max_edit_distance must be 1 or 2, got " + std::to_string(max_edit_distance));
  }
  DeleteIndex index;
  index.max_edit_distance = max_edit_distance;
  index.transpositions = transpositions;
  for (const auto& [word, freq] : vocab) {
    index.frequencies[word] = freq;
    for (const auto& del : deletes_of(text::decode(word), max_edit_distance)) {
      index.deletes[text::encode(del)].push_back(word);
    }
  }
  // std::map iteration is sorted, so each list is already ordered and unique.
  return index;
}

std::vector<Correction> symspell_lookup(const DeleteIndex& index, std::string_view term, int max_distance) {
  max_distance = std::clamp(max_distance, 0, index.max_edit_distance);
  const std::u32string query = text::decode(term);
  std::set<std::string> candidates;
  for (const auto& del : deletes_of(query, max_distance)) {
    const auto it = index.deletes.find(text::encode(del));
    if (it == index.deletes.end()) continue;
    candidates.insert(it->second.begin(), it->second.end());
  }
  std::vector<Correction> out;
  for (const auto& word : candidates) {
    const int dist = edit_distance(query, text::decode(word), index.transpositions);
    if (dist <= max_distance) out.push_back({word, dist, index.frequencies.at(word)});
  }
  std::sort(out.begin(), out.end(), correction_less);
  return out;
}

int edit_distance(std::u32string_view a, std::u32string_view b, bool transpositions) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<int> prev2(m + 1), prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (transpositions && i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        cur[j] = std::min(cur[j], prev2[j - 2] + 1);
      }
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[m];
}

int edit_distance(std::string_view a, std::string_view b, bool transpositions) {
  return edit_distance(text::decode(a), text::decode(b), transpositions);
}

std::map<std::string, std::uint64_t> load_frequency_file(const std::filesystem::path& path) {
  std::map<std::string, std::uint64_t> vocab;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cols = io::split(lines[i], '\t');
    if (cols.size() != 2) throw FormatError("expected word<TAB>count", i + 1);
    try {
      vocab[cols[0]] += std::stoull(cols[1]);
    } catch (const std::exception&) {
      throw FormatError("bad count '" + cols[1] + "'", i + 1);
    }
  }
  return vocab;
}

// ---------------------------------------------------------------------------

SuffixStemmer SuffixStemmer::english() {
  return SuffixStemmer{{
      {"ing", "", 3, true},
      {"ed", "", 3, true},
      {"ies", "y", 2, false},
      {"ss", "ss", 1, false},
      {"us", "us", 1, false},
      {"is", "is", 1, false},
      {"s", "", 2, false},
  }};
}

namespace {

bool is_vowel(char32_t c) { return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' || c == U'y'; }

}  // namespace

std::string stem(std::string_view token, const SuffixStemmer& stemmer) {
  const std::u32string word = text::decode(token);
  const SuffixRule* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& rule : stemmer.rules) {
    const std::u32string suffix = text::decode(rule.suffix);
    if (suffix.size() > word.size() || word.size() - suffix.size() < std::max<std::size_t>(rule.min_stem, 1)) {
      continue;
    }
    if (word.compare(word.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    if (!best || suffix.size() > best_len) {
      best = &rule;
      best_len = suffix.size();
    }
  }
  if (!best) return std::string(token);
  std::u32string out = word.substr(0, word.size() - best_len);
  if (best->undouble && out.size() >= 3) {
    const char32_t last = out.back();
    if (last == out[out.size() - 2] && text::is_latin_letter(last) && !is_vowel(last) && last != U'l' &&
        last != U's' && last != U'z') {
      out.pop_back();
    }
  }
  out += text::decode(best->replacement);
  return text::encode(out);
}

LemmaTable::LemmaTable(std::map<std::string, std::string> entries) {
  for (auto& [k, v] : entries) entries_[text::casefold(k)] = text::casefold(v);
  // Resolve chains; a cycle stops at the first repeated form.
  for (auto& [key, lemma] : entries_) {
    std::set<std::string> seen{key, lemma};
    for (;;) {
      const auto it = entries_.find(lemma);
      if (it == entries_.end() || !seen.insert(it->second).second) break;
      lemma = it->second;
    }
  }
}

std::optional<std::string> LemmaTable::find(std::string_view token) const {
  const auto it = entries_.find(std::string(token));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

LemmaTable parse_lemma_table(std::string_view tsv) {
  std::map<std::string, std::string> entries;
  auto lines = io::split(tsv, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string& line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = io::split(line, '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw FormatError("expected token<TAB>lemma", i + 1);
    }
    entries.emplace(cols[0], cols[1]);
  }
  return LemmaTable(std::move(entries));
}

LemmaTable load_lemma_table(const std::filesystem::path& path) { return parse_lemma_table(io::read_file(path)); }

std::string lemmatize(std::string_view token, const LemmaTable& table, const SuffixStemmer* fallback) {
  if (auto hit = table.find(token)) return *hit;
  if (fallback) return stem(token, *fallback);
  return std::string(token);
}

}  // namespace trendscope
