#include "trendscope/corpus_io.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <unordered_set>

#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/text.hpp"

namespace trendscope {

using json = nlohmann::json;

std::string_view to_string(PreprocessStep step) {
  switch (step) {
    case PreprocessStep::punctuation: return "punctuation";
    case PreprocessStep::arabizi: return "arabizi";
    case PreprocessStep::digits: return "digits";
    case PreprocessStep::lowercase: return "lowercase";
    case PreprocessStep::tokenize: return "tokenize";
    case PreprocessStep::stopwords: return "stopwords";
    case PreprocessStep::lemmatize: return "lemmatize";
    case PreprocessStep::stem: return "stem";
  }
  return "?";
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::jsonl;
  if (name == "csv") return CorpusFormat::csv;
  if (name == "plain" || name == "txt") return CorpusFormat::plain;
  throw ConfigError("unknown corpus format '" + std::string(name) + "'");
}

namespace {

Corpus ingest_jsonl(std::string_view contents) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  auto lines = io::split(contents, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string& line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::size_t lineno = i + 1;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!rec.is_object()) throw ParseError("record is not an object", lineno);
    if (!rec.contains("id") || !rec["id"].is_string()) throw ParseError("missing string field \"id\"", lineno);
    if (!rec.contains("text") || !rec["text"].is_string()) {
      throw ParseError("missing string field \"text\"", lineno);
    }
    Document doc;
    doc.id = rec["id"].get<std::string>();
    doc.raw_text = rec["text"].get<std::string>();
    if (rec.contains("lang") && rec["lang"].is_string()) doc.lang = parse_lang(rec["lang"].get<std::string>());
    if (!ids.insert(doc.id).second) throw ParseError("duplicate id '" + doc.id + "'", lineno);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

// RFC 4180: quoted fields may contain commas, doubled quotes and newlines.
std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv_records(std::string_view s) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        fields.push_back(std::move(field));
        records.emplace_back(record_line, std::move(fields));
      }
      fields.clear();
      field.clear();
      any = false;
      ++line;
      record_line = line;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", record_line);
  if (any || !field.empty()) {
    fields.push_back(std::move(field));
    records.emplace_back(record_line, std::move(fields));
  }
  return records;
}

Corpus ingest_csv(std::string_view contents) {
  Corpus corpus;
  const auto records = parse_csv_records(contents);
  if (records.empty()) return corpus;
  const auto& header = records.front().second;
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto id_col = column("id");
  const auto text_col = column("text");
  const auto lang_col = column("lang");
  if (!id_col || !text_col) throw ParseError("header must contain id,text", records.front().first);
  std::unordered_set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [lineno, fields] = records[r];
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    Document doc;
    doc.id = fields[*id_col];
    doc.raw_text = fields[*text_col];
    if (lang_col) doc.lang = parse_lang(fields[*lang_col]);
    if (doc.id.empty()) throw ParseError("empty id", lineno);
    if (!ids.insert(doc.id).second) throw ParseError("duplicate id '" + doc.id + "'", lineno);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus ingest_plain(std::string_view contents) {
  Corpus corpus;
  auto lines = io::split(contents, '\n');
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Document doc;
    doc.id = std::to_string(corpus.documents.size() + 1);
    doc.raw_text = std::move(line);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace

Corpus ingest_string(std::string_view contents, CorpusFormat format) {
  Corpus corpus;
  switch (format) {
    case CorpusFormat::jsonl: corpus = ingest_jsonl(contents); break;
    case CorpusFormat::csv: corpus = ingest_csv(contents); break;
    case CorpusFormat::plain: corpus = ingest_plain(contents); break;
  }
  corpus.stats = corpus_stats(corpus);
  return corpus;
}

Corpus ingest(const std::filesystem::path& path, CorpusFormat format) {
  if (!std::filesystem::exists(path)) throw IoError("corpus file not found: '" + path.string() + "'");
  return ingest_string(io::read_file(path), format);
}

// ---------------------------------------------------------------------------

std::map<char32_t, std::string> PreprocessConfig::default_arabizi_map() {
  return {{U'7', "h"}, {U'3', "a"}, {U'9', "q"}, {U'5', "kh"}, {U'2', "a"}, {U'8', "gh"}};
}

const std::vector<PreprocessStep>& PreprocessConfig::step_order() {
  static const std::vector<PreprocessStep> order{
      PreprocessStep::punctuation, PreprocessStep::arabizi,   PreprocessStep::digits,
      PreprocessStep::lowercase,   PreprocessStep::tokenize,  PreprocessStep::stopwords,
      PreprocessStep::lemmatize,   PreprocessStep::stem,
  };
  return order;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::set<std::string> words;
  for (const auto& line : io::read_lines(path)) {
    for (auto& w : text::split_whitespace(line)) words.insert(text::casefold(w));
  }
  return words;
}

std::string normalize_arabizi(std::string_view token, const std::map<char32_t, std::string>& map) {
  std::string out;
  out.reserve(token.size());
  for (char32_t cp : text::decode(token)) {
    const auto it = map.find(cp);
    if (it != map.end()) {
      out += it->second;
    } else {
      text::append_utf8(out, cp);
    }
  }
  return out;
}

namespace {

using Words = std::vector<std::string>;

std::string filter_codepoints(std::string_view word, const std::function<bool(char32_t)>& drop) {
  std::string out;
  for (char32_t cp : text::decode(word)) {
    if (!drop(cp)) text::append_utf8(out, cp);
  }
  return out;
}

bool has_latin_letter(std::string_view word) {
  for (char32_t cp : text::decode(word)) {
    if (text::is_latin_letter(cp)) return true;
  }
  return false;
}

}  // namespace

Corpus preprocess(const Corpus& corpus, const PreprocessConfig& config) {
  LemmaTable loaded;
  const LemmaTable* lemmas = &config.lemma_table;
  if (config.lemma_table_path) {
    try {
      loaded = load_lemma_table(*config.lemma_table_path);
    } catch (const Error& e) {
      throw ConfigError("lemma table unreadable: " + std::string(e.what()));
    }
    lemmas = &loaded;
  }
  std::unordered_set<std::string> stopwords;
  for (const auto& [lang, words] : config.stopword_lists) {
    for (const auto& w : words) stopwords.insert(text::casefold(w));
  }
  const bool stemming = config.stemmer == StemmerKind::suffix_rules;

  auto lemma_of = [&](const std::string& w) { return lemmas->find(w).value_or(w); };
  auto stem_of = [&](const std::string& w) { return stemming ? stem(w, config.stemmer_rules) : w; };
  // Lemma and stem are iterated to a fixed point, which makes a second
  // preprocess pass over the output a no-op.
  auto normalize = [&](std::string w) {
    for (int i = 0; i < 8; ++i) {
      std::string next = stem_of(lemma_of(w));
      if (next == w) break;
      w = std::move(next);
    }
    return w;
  };

  std::vector<Words> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) docs.push_back(text::split_whitespace(doc.raw_text));

  Corpus out;
  out.documents = corpus.documents;

  auto totals = [&](std::size_t& words, std::size_t& unique) {
    std::unordered_set<std::string> seen;
    words = 0;
    for (const auto& d : docs) {
      words += d.size();
      seen.insert(d.begin(), d.end());
    }
    unique = seen.size();
  };
  auto apply = [&](PreprocessStep step,
                   const std::function<std::optional<std::string>(const std::string&, Lang)>& fn) {
    StepCount count{step};
    totals(count.words_before, count.unique_before);
    for (std::size_t j = 0; j < docs.size(); ++j) {
      Words next;
      next.reserve(docs[j].size());
      for (const auto& w : docs[j]) {
        if (auto r = fn(w, corpus.documents[j].lang); r && !r->empty()) next.push_back(std::move(*r));
      }
      docs[j] = std::move(next);
    }
    totals(count.words_after, count.unique_after);
    out.preprocess_log.push_back(count);
  };
  using Out = std::optional<std::string>;

  for (PreprocessStep step : PreprocessConfig::step_order()) {
    switch (step) {
      case PreprocessStep::punctuation:
        apply(step, [&](const std::string& w, Lang) -> Out {
          return config.remove_punctuation ? filter_codepoints(w, text::is_punct_or_symbol) : w;
        });
        break;
      case PreprocessStep::arabizi:
        // Only words that also carry Latin letters are Arabizi; bare numbers
        // fall through to digit removal. Documents tagged with another
        // language keep their digits for the next step.
        apply(step, [&](const std::string& w, Lang lang) -> Out {
          const bool eligible = lang == Lang::arabizi || lang == Lang::unknown;
          return eligible && has_latin_letter(w) ? normalize_arabizi(w, config.arabizi_digit_map) : w;
        });
        break;
      case PreprocessStep::digits:
        apply(step, [&](const std::string& w, Lang) -> Out {
          return config.remove_digits ? filter_codepoints(w, text::is_digit) : w;
        });
        break;
      case PreprocessStep::lowercase:
        apply(step, [&](const std::string& w, Lang) -> Out { return config.lowercase ? text::to_lower(w) : w; });
        break;
      case PreprocessStep::tokenize:
        // Words are already whitespace-split; the step is kept for its counts.
        apply(step, [](const std::string& w, Lang) -> Out { return w; });
        break;
      case PreprocessStep::stopwords:
        apply(step, [&](const std::string& w, Lang) -> Out {
          if (stopwords.contains(w) || stopwords.contains(normalize(w))) return std::nullopt;
          return w;
        });
        break;
      case PreprocessStep::lemmatize:
        apply(step, [&](const std::string& w, Lang) -> Out { return lemma_of(w); });
        break;
      case PreprocessStep::stem:
        apply(step, [&](const std::string& w, Lang) -> Out { return normalize(stem_of(w)); });
        break;
    }
  }
  for (std::size_t i = 0; i < docs.size(); ++i) out.documents[i].tokens = std::move(docs[i]);
  out.stats = corpus_stats(out);
  return out;
}

std::size_t count_sentences(std::string_view raw_text) {
  std::size_t n = 0;
  bool has_content = false;
  for (char32_t cp : text::decode(raw_text)) {
    if (text::is_sentence_terminal(cp)) {
      if (has_content) ++n;
      has_content = false;
    } else if (!text::is_space(cp)) {
      has_content = true;
    }
  }
  if (has_content) ++n;
  return n;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.n_docs = corpus.documents.size();
  std::unordered_set<std::string> unique;
  for (const auto& doc : corpus.documents) {
    stats.n_sentences += count_sentences(doc.raw_text);
    stats.n_words += doc.tokens.size();
    unique.insert(doc.tokens.begin(), doc.tokens.end());
  }
  stats.n_unique_words = unique.size();
  return stats;
}

}  // namespace trendscope
