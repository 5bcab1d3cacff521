#include "trendscope/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trendscope/coherence.hpp"
#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/random.hpp"
#include "trendscope/text.hpp"
#include "trendscope/translator.hpp"
#include "trendscope/trend_prep.hpp"

#ifndef TRENDSCOPE_VERSION
#define TRENDSCOPE_VERSION "0.0.0"
#endif

namespace trendscope {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Stages

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::preprocess: return "preprocess";
    case Stage::translate: return "translate";
    case Stage::topics: return "topics";
    case Stage::coherence: return "coherence";
    case Stage::trends: return "trends";
    case Stage::forecast: return "forecast";
  }
  return "unknown";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : all_stages()) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages{Stage::ingest, Stage::preprocess, Stage::translate, Stage::topics,
                                         Stage::coherence, Stage::trends, Stage::forecast};
  return stages;
}

std::vector<Stage> stage_inputs(Stage stage) {
  switch (stage) {
    case Stage::ingest: return {};
    case Stage::preprocess: return {Stage::ingest};
    case Stage::translate: return {Stage::preprocess};
    case Stage::topics: return {Stage::translate};
    case Stage::coherence: return {Stage::translate, Stage::topics};
    case Stage::trends: return {Stage::ingest, Stage::translate, Stage::topics};
    case Stage::forecast: return {Stage::topics, Stage::trends};
  }
  return {};
}

namespace {

// Files whose presence marks a stage as done.
std::vector<std::string> primary_artifacts(Stage stage) {
  switch (stage) {
    case Stage::ingest: return {"ingest/corpus.jsonl"};
    case Stage::preprocess: return {"preprocess/tokens.jsonl"};
    case Stage::translate: return {"translate/translations.jsonl"};
    case Stage::topics: return {"topics/topics.json", "topics/doc_topics.csv"};
    case Stage::coherence: return {"coherence/coherence.json"};
    case Stage::trends: return {"trends/assignments.csv"};
    case Stage::forecast: return {"forecast/ranking.json"};
  }
  return {};
}

std::set<Stage> transitive_inputs(Stage stage) {
  std::set<Stage> out;
  std::vector<Stage> todo = stage_inputs(stage);
  while (!todo.empty()) {
    const Stage s = todo.back();
    todo.pop_back();
    if (!out.insert(s).second) continue;
    for (Stage u : stage_inputs(s)) todo.push_back(u);
  }
  return out;
}

}  // namespace

std::uint64_t stage_seed(std::uint64_t root, Stage stage) { return derive_seed(root, to_string(stage)); }

std::string tool_version() { return TRENDSCOPE_VERSION; }

// ---------------------------------------------------------------------------
// Config

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key) || obj[key].is_null()) return fallback;
  return obj[key].get<T>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<double> double_list(const json& obj, const char* key, std::vector<double> fallback) {
  return get_or<std::vector<double>>(obj, key, std::move(fallback));
}

TopicModelKind parse_model_kind(const std::string& s) {
  if (s == "lda") return TopicModelKind::lda;
  if (s == "hdp") return TopicModelKind::hdp;
  throw ConfigError("unknown model kind '" + s + "'");
}

Criterion parse_criterion(const std::string& s) {
  if (s == "aic") return Criterion::aic;
  if (s == "bic") return Criterion::bic;
  throw ConfigError("unknown criterion '" + s + "'");
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text, const fs::path& base_dir,
                            std::optional<std::uint64_t> seed_override) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (seed_override) j["seed"] = *seed_override;

  PipelineConfig c;
  try {
    const auto& corpus = j.at("corpus");
    c.corpus = resolve(base_dir, corpus.at("path").get<std::string>());
    c.corpus_format = parse_corpus_format(get_or<std::string>(corpus, "format", "jsonl"));
    c.output_dir = resolve(base_dir, get_or<std::string>(j, "output_dir", "out"));
    c.seed = get_or<std::uint64_t>(j, "seed", 0);

    const json pre = j.value("preprocess", json::object());
    c.preprocess.remove_punctuation = get_or(pre, "remove_punctuation", true);
    c.preprocess.remove_digits = get_or(pre, "remove_digits", true);
    c.preprocess.lowercase = get_or(pre, "lowercase", true);
    if (pre.contains("stopwords")) {
      for (const auto& [lang, p] : pre["stopwords"].items()) c.stopword_files[lang] = resolve(base_dir, p.get<std::string>());
    }
    if (pre.contains("lemma_table") && !pre["lemma_table"].is_null()) {
      c.preprocess.lemma_table_path = resolve(base_dir, pre["lemma_table"].get<std::string>());
    }
    const auto stemmer = get_or<std::string>(pre, "stemmer", "suffix_rules");
    if (stemmer == "none") {
      c.preprocess.stemmer = StemmerKind::none;
    } else if (stemmer == "suffix_rules") {
      c.preprocess.stemmer = StemmerKind::suffix_rules;
    } else {
      throw ConfigError("unknown stemmer '" + stemmer + "'");
    }

    const json tr = j.value("translation", json::object());
    if (tr.contains("dictionaries")) {
      for (const auto& d : tr["dictionaries"]) {
        DictionarySpec spec;
        spec.path = resolve(base_dir, d.at("path").get<std::string>());
        spec.kind = parse_dictionary_kind(get_or<std::string>(d, "kind", "bilingual"));
        spec.source = parse_lang(get_or<std::string>(d, "source", "unknown"));
        c.dictionaries.push_back(spec);
      }
    }
    if (tr.contains("mock_mt") && !tr["mock_mt"].is_null()) c.mock_mt_terms = resolve(base_dir, tr["mock_mt"].get<std::string>());
    if (tr.contains("endpoint") && !tr["endpoint"].is_null()) c.mt_endpoint = tr["endpoint"].get<std::string>();
    c.max_in_flight = std::max<std::size_t>(1, get_or<std::size_t>(tr, "max_in_flight", 1));

    const auto& emb = j.at("embeddings");
    c.embeddings = resolve(base_dir, emb.at("words").get<std::string>());
    if (emb.contains("ngrams") && !emb["ngrams"].is_null()) c.embedding_ngrams = resolve(base_dir, emb["ngrams"].get<std::string>());
    c.min_n = get_or<std::size_t>(emb, "min_n", 3);
    c.max_n = get_or<std::size_t>(emb, "max_n", 6);

    const auto& trends = j.at("trends");
    c.trends = resolve(base_dir, trends.at("path").get<std::string>());
    c.min_similarity = get_or(trends, "min_similarity", 0.1);
    c.use_topic_hint = get_or(trends, "use_topic_hint", true);

    const json m = j.value("model", json::object());
    c.model.fixed.kind = parse_model_kind(get_or<std::string>(m, "kind", "lda"));
    c.model.fixed.k = get_or<std::size_t>(m, "k", 5);
    c.model.fixed.alpha = get_or(m, "alpha", 0.1);
    c.model.fixed.beta = get_or(m, "beta", 0.01);
    c.model.fixed.gamma = get_or(m, "gamma", 1.0);
    c.model.schedule.burn_in = get_or<std::size_t>(m, "burn_in", 200);
    c.model.schedule.samples = get_or<std::size_t>(m, "samples", 100);
    c.model.top_n = get_or<std::size_t>(m, "top_n", 10);
    if (m.contains("search") && !m["search"].is_null()) {
      const auto& s = m["search"];
      SearchSpec spec;
      spec.model = c.model.fixed.kind;
      spec.k_grid = get_or<std::vector<std::size_t>>(s, "k_grid", {c.model.fixed.k});
      spec.alpha_grid = double_list(s, "alpha_grid", {c.model.fixed.alpha});
      spec.beta_grid = double_list(s, "beta_grid", {c.model.fixed.beta});
      spec.gamma_grid = double_list(s, "gamma_grid", {c.model.fixed.gamma});
      const auto strategy = get_or<std::string>(s, "strategy", "grid");
      if (strategy == "grid") {
        spec.strategy = SearchStrategy::grid;
      } else if (strategy == "random") {
        spec.strategy = SearchStrategy::random;
      } else {
        throw ConfigError("unknown search strategy '" + strategy + "'");
      }
      spec.n_random_draws = get_or<std::size_t>(s, "n_random_draws", 10);
      const auto scoring = get_or<std::string>(s, "scoring", "coherence");
      if (scoring == "coherence") {
        spec.scoring = SearchScoring::coherence;
      } else if (scoring == "perplexity") {
        spec.scoring = SearchScoring::perplexity;
      } else {
        throw ConfigError("unknown search scoring '" + scoring + "'");
      }
      spec.schedule.burn_in = get_or<std::size_t>(s, "burn_in", 100);
      spec.schedule.samples = get_or<std::size_t>(s, "samples", 50);
      spec.max_parallel = std::max<std::size_t>(1, get_or<std::size_t>(s, "max_parallel", 1));
      c.model.search = spec;
    }

    const json f = j.value("forecast", json::object());
    if (f.contains("window") && !f["window"].is_null()) c.forecast.window = f["window"].get<std::size_t>();
    c.forecast.max_points = get_or<std::size_t>(f, "max_points", 500);
    c.forecast.ma_window = get_or<std::size_t>(f, "ma_window", 5);
    c.forecast.p_max = get_or(f, "p_max", 2);
    c.forecast.d_max = get_or(f, "d_max", 1);
    c.forecast.q_max = get_or(f, "q_max", 2);
    c.forecast.criterion = parse_criterion(get_or<std::string>(f, "criterion", "bic"));
    c.forecast.train_fraction = get_or(f, "train_fraction", 0.7);
    c.forecast.max_parallel = std::max<std::size_t>(1, get_or<std::size_t>(f, "max_parallel", 1));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (c.forecast.window && *c.forecast.window == 0) throw ConfigError("forecast.window must be positive");
  if (c.forecast.ma_window == 0) throw ConfigError("forecast.ma_window must be positive");
  if (c.forecast.max_points == 0) throw ConfigError("forecast.max_points must be positive");
  if (!(c.forecast.train_fraction > 0.0 && c.forecast.train_fraction < 1.0)) {
    throw ConfigError("forecast.train_fraction must be in (0, 1)");
  }
  if (c.min_n == 0 || c.min_n > c.max_n) throw ConfigError("embeddings: need 1 <= min_n <= max_n");
  c.canonical = j.dump();
  return c;
}

PipelineConfig load_config(const fs::path& path, std::optional<std::uint64_t> seed_override) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path(), seed_override);
}

void validate(const PipelineConfig& c) {
  auto need = [](const fs::path& p, const std::string& what) {
    if (!fs::is_regular_file(p)) throw ConfigError(what + " not found: " + p.string());
  };
  need(c.corpus, "corpus");
  for (const auto& [lang, p] : c.stopword_files) need(p, "stopword list '" + lang + "'");
  if (c.preprocess.lemma_table_path) need(*c.preprocess.lemma_table_path, "lemma table");
  for (const auto& d : c.dictionaries) need(d.path, "dictionary");
  if (c.mock_mt_terms) need(*c.mock_mt_terms, "mock MT term file");
  need(c.embeddings, "embeddings");
  if (c.embedding_ngrams) need(*c.embedding_ngrams, "embedding n-grams");
  need(c.trends, "reference trends");
  if (c.model.search) {
    if (search_candidates(*c.model.search).empty()) throw ConfigError("model.search: empty grid");
  }
}

// ---------------------------------------------------------------------------
// Manifest

bool RunManifest::complete() const {
  for (Stage s : all_stages()) {
    if (!find(s)) return false;
  }
  return true;
}

const StageRecord* RunManifest::find(Stage stage) const {
  for (const auto& r : stages) {
    if (r.stage == stage) return &r;
  }
  return nullptr;
}

std::string to_json(const RunManifest& m) {
  ordered_json j;
  j["tool_version"] = m.tool_version;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["stages"] = ordered_json::array();
  for (const auto& r : m.stages) {
    ordered_json s;
    s["stage"] = std::string(to_string(r.stage));
    s["seed"] = r.seed;
    s["inputs"] = r.inputs;
    s["outputs"] = r.outputs;
    j["stages"].push_back(std::move(s));
  }
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& json_text) {
  RunManifest m;
  try {
    const auto j = json::parse(json_text);
    m.tool_version = j.at("tool_version").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("stages")) {
      StageRecord r;
      r.stage = parse_stage(s.at("stage").get<std::string>());
      r.seed = s.at("seed").get<std::uint64_t>();
      r.inputs = s.at("inputs").get<std::map<std::string, std::string>>();
      r.outputs = s.at("outputs").get<std::map<std::string, std::string>>();
      m.stages.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what(), 0);
  }
  return m;
}

RunManifest load_manifest(const fs::path& output_dir) {
  const auto path = output_dir / "manifest.json";
  if (!fs::exists(path)) return {};
  return manifest_from_json(io::read_file(path));
}

// ---------------------------------------------------------------------------
// Lock

OutputLock::OutputLock(const fs::path& output_dir) : path_(output_dir / ".lock") {
  fs::create_directories(output_dir);
  // "x" gives exclusive create.
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) throw ConfigError("output directory is locked by another run: " + path_.string());
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// ---------------------------------------------------------------------------
// Stage implementations

namespace {

std::string dump_json(const json& j) { return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n"; }
std::string dump_line(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class StageContext {
 public:
  StageContext(const PipelineConfig& config, Stage stage) : config_(config), stage_(stage) {
    record_.stage = stage;
    record_.seed = stage_seed(config.seed, stage);
  }

  std::uint64_t seed() const { return record_.seed; }

  std::string read(const std::string& rel) {
    const std::string data = io::read_file(config_.output_dir / rel);
    record_.inputs[rel] = io::sha256_hex(data);
    return data;
  }

  void note_external(const std::string& role, const fs::path& path) {
    record_.inputs[role] = io::sha256_file(path);
  }

  void write(const std::string& rel, const std::string& data) {
    io::write_file_atomic(config_.output_dir / rel, data);
    record_.outputs[rel] = io::sha256_hex(data);
  }

  StageRecord take() { return std::move(record_); }

 private:
  const PipelineConfig& config_;
  Stage stage_;
  StageRecord record_;
};

std::vector<json> read_jsonl(const std::string& data) {
  std::vector<json> out;
  std::istringstream in(data);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

struct TokenDoc {
  std::string id;
  Lang lang = Lang::unknown;
  std::vector<std::string> tokens;
};

std::vector<TokenDoc> read_token_docs(StageContext& ctx, const std::string& rel) {
  std::vector<TokenDoc> docs;
  for (const auto& j : read_jsonl(ctx.read(rel))) {
    docs.push_back({j.at("id").get<std::string>(), parse_lang(j.value("lang", "unknown")),
                    j.at("tokens").get<std::vector<std::string>>()});
  }
  return docs;
}

json stats_json(const CorpusStats& s) {
  return {{"n_docs", s.n_docs}, {"n_sentences", s.n_sentences}, {"n_words", s.n_words},
          {"n_unique_words", s.n_unique_words}};
}

void stage_ingest(const PipelineConfig& c, StageContext& ctx) {
  ctx.note_external("corpus", c.corpus);
  const Corpus corpus = ingest(c.corpus, c.corpus_format);
  std::string lines;
  for (const auto& d : corpus.documents) {
    lines += dump_line({{"id", d.id}, {"lang", std::string(to_string(d.lang))}, {"text", d.raw_text}}) + "\n";
  }
  ctx.write("ingest/corpus.jsonl", lines);
  ctx.write("ingest/stats.json", dump_json(stats_json(corpus.stats)));
}

PreprocessConfig load_preprocess_config(const PipelineConfig& c, StageContext* ctx) {
  PreprocessConfig pre = c.preprocess;
  for (const auto& [lang, path] : c.stopword_files) {
    if (ctx) ctx->note_external("stopwords:" + lang, path);
    pre.stopword_lists[lang] = load_stopwords(path);
  }
  if (ctx && pre.lemma_table_path) ctx->note_external("lemma_table", *pre.lemma_table_path);
  return pre;
}

void stage_preprocess(const PipelineConfig& c, StageContext& ctx) {
  const Corpus raw = ingest_string(ctx.read("ingest/corpus.jsonl"), CorpusFormat::jsonl);
  const PreprocessConfig pre = load_preprocess_config(c, &ctx);
  const Corpus corpus = preprocess(raw, pre);
  std::string lines;
  for (const auto& d : corpus.documents) {
    lines += dump_line({{"id", d.id}, {"lang", std::string(to_string(d.lang))}, {"tokens", d.tokens}}) + "\n";
  }
  json steps = json::array();
  for (const auto& s : corpus.preprocess_log) {
    steps.push_back({{"step", std::string(to_string(s.step))},
                     {"words_before", s.words_before},
                     {"words_after", s.words_after},
                     {"unique_before", s.unique_before},
                     {"unique_after", s.unique_after}});
  }
  ctx.write("preprocess/tokens.jsonl", lines);
  ctx.write("preprocess/stats.json", dump_json({{"raw", stats_json(raw.stats)},
                                                 {"preprocessed", stats_json(corpus.stats)},
                                                 {"steps", steps}}));
}

std::unique_ptr<RemoteMtClient> make_client(const PipelineConfig& c, StageContext& ctx) {
  if (c.mt_endpoint) {
    std::optional<std::string> token;
    if (const char* t = std::getenv("TRENDSCOPE_MT_TOKEN"); t && *t) token = t;
    return std::make_unique<HttpMtClient>(*c.mt_endpoint, token);
  }
  if (c.mock_mt_terms) {
    ctx.note_external("mock_mt", *c.mock_mt_terms);
    return std::make_unique<MockMtClient>(MockMtClient::load_terms(*c.mock_mt_terms));
  }
  return nullptr;
}

std::set<std::string> stopword_union(const PipelineConfig& c) {
  std::set<std::string> all;
  for (const auto& [lang, path] : c.stopword_files) {
    auto words = load_stopwords(path);
    all.insert(words.begin(), words.end());
  }
  return all;
}

void stage_translate(const PipelineConfig& c, StageContext& ctx) {
  const auto docs = read_token_docs(ctx, "preprocess/tokens.jsonl");
  std::vector<BilingualDictionary> dicts;
  for (std::size_t i = 0; i < c.dictionaries.size(); ++i) {
    const auto& d = c.dictionaries[i];
    ctx.note_external("dictionary:" + std::to_string(i), d.path);
    dicts.push_back(load_dictionary(d.path, d.kind, d.source));
  }
  auto client = make_client(c, ctx);
  const auto stop = stopword_union(c);

  // One cascade per source language, keeping config order.
  std::map<Lang, std::vector<std::size_t>> by_lang;
  for (std::size_t i = 0; i < docs.size(); ++i) by_lang[docs[i].lang].push_back(i);
  std::vector<TranslationResult> results(docs.size());
  for (const auto& [lang, idx] : by_lang) {
    std::vector<BilingualDictionary> cascade;
    for (const auto& d : dicts) {
      if (d.source_lang == Lang::unknown || d.source_lang == lang) cascade.push_back(d);
    }
    Corpus sub;
    for (std::size_t i : idx) sub.documents.push_back({docs[i].id, "", docs[i].lang, docs[i].tokens});
    auto out = translate_corpus(sub, cascade, client.get(), c.max_in_flight);
    for (std::size_t k = 0; k < idx.size(); ++k) results[idx[k]] = std::move(out[k]);
  }

  std::map<std::string, std::size_t> provenance_counts;
  std::size_t remote_errors = 0;
  std::string lines;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    // Translation can reintroduce English function words.
    std::vector<std::string> tokens;
    std::vector<std::string> prov;
    for (std::size_t t = 0; t < r.translated_tokens.size(); ++t) {
      ++provenance_counts[std::string(to_string(r.provenance[t]))];
      if (stop.contains(r.translated_tokens[t])) continue;
      tokens.push_back(r.translated_tokens[t]);
      prov.emplace_back(to_string(r.provenance[t]));
    }
    json line = {{"id", r.doc_id}, {"lang", std::string(to_string(docs[i].lang))}, {"tokens", tokens},
                 {"provenance", prov}};
    if (r.remote_error) {
      line["remote_error"] = *r.remote_error;
      ++remote_errors;
    }
    lines += dump_line(line) + "\n";
  }
  ctx.write("translate/translations.jsonl", lines);
  ctx.write("translate/summary.json",
            dump_json({{"documents", results.size()}, {"provenance", provenance_counts}, {"remote_errors", remote_errors}}));
}

// Reference-topic vectors: mean of the topic's trend vectors.
std::vector<Vector> reference_topic_vectors(const ReferenceTrendSet& trends, const std::vector<Vector>& trend_vecs,
                                            std::size_t dim) {
  std::vector<Vector> out(trends.topics.size(), Vector(dim, 0.0));
  for (std::size_t f = 0; f < trends.size(); ++f) {
    const auto [t, i] = trends.locate(f);
    for (std::size_t d = 0; d < dim; ++d) out[t][d] += trend_vecs[f][d];
  }
  return out;
}

// Greedy one-to-one matching by descending similarity; topics left over
// take their best reference topic.
std::vector<std::size_t> match_reference_topics(const std::vector<std::vector<double>>& sim) {
  const std::size_t k = sim.size();
  const std::size_t r = k ? sim[0].size() : 0;
  std::vector<std::size_t> out(k, 0);
  std::vector<bool> topic_done(k, false), ref_done(r, false);
  for (std::size_t round = 0; round < std::min(k, r); ++round) {
    double best = -2.0;
    std::size_t bt = 0, br = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if (topic_done[t]) continue;
      for (std::size_t q = 0; q < r; ++q) {
        if (!ref_done[q] && sim[t][q] > best) {
          best = sim[t][q];
          bt = t;
          br = q;
        }
      }
    }
    out[bt] = br;
    topic_done[bt] = true;
    ref_done[br] = true;
  }
  for (std::size_t t = 0; t < k; ++t) {
    if (topic_done[t] || r == 0) continue;
    out[t] = static_cast<std::size_t>(std::max_element(sim[t].begin(), sim[t].end()) - sim[t].begin());
  }
  return out;
}

EmbeddingStore load_store(const PipelineConfig& c, StageContext& ctx) {
  ctx.note_external("embeddings", c.embeddings);
  if (c.embedding_ngrams) ctx.note_external("embedding_ngrams", *c.embedding_ngrams);
  return load_embeddings(c.embeddings, c.embedding_ngrams, c.min_n, c.max_n);
}

ReferenceTrendSet load_trends(const PipelineConfig& c, StageContext& ctx) {
  ctx.note_external("trends", c.trends);
  return load_reference_trends(c.trends);
}

std::vector<std::vector<std::string>> dtm_docs(const DocTermMatrix& dtm) {
  std::vector<std::vector<std::string>> docs(dtm.n_docs());
  for (std::size_t j = 0; j < dtm.n_docs(); ++j) {
    for (const auto& [w, n] : dtm.rows[j]) docs[j].push_back(dtm.vocab[w]);
  }
  return docs;
}

void stage_topics(const PipelineConfig& c, StageContext& ctx) {
  const auto docs = read_token_docs(ctx, "translate/translations.jsonl");
  std::vector<std::vector<std::string>> token_lists;
  for (const auto& d : docs) token_lists.push_back(d.tokens);
  const DocTermMatrix dtm = build_dtm(token_lists);
  const std::size_t top_n = c.model.top_n;

  ModelConfig chosen = c.model.fixed;
  std::optional<std::vector<SearchResult>> search;
  if (c.model.search) {
    SearchSpec spec = *c.model.search;
    spec.seed = derive_seed(ctx.seed(), "search");
    const auto docs_as_sets = dtm_docs(dtm);
    const CoherenceFn mean_umass = [&](const TopicEstimates& est, const DocTermMatrix& m) {
      std::vector<TopicWordSet> topics;
      for (std::size_t k = 0; k < est.phi.rows; ++k) {
        TopicWordSet t{k, {}};
        for (const auto& [w, p] : top_words(est, m.vocab, k, std::min(top_n, m.n_words()))) t.words.push_back(w);
        topics.push_back(std::move(t));
      }
      std::set<std::string> vocab;
      for (const auto& t : topics) vocab.insert(t.words.begin(), t.words.end());
      const auto counts = count_cooccurrence(docs_as_sets, vocab);
      double sum = 0.0;
      for (const auto& t : topics) sum += umass(t, counts);
      return sum / static_cast<double>(topics.size());
    };
    search = hyperparameter_search(dtm, spec, mean_umass);
    chosen = search->front().config;
  }

  const std::uint64_t fit_seed = derive_seed(ctx.seed(), "fit");
  TopicEstimates est;
  std::string model_json;
  if (chosen.kind == TopicModelKind::lda) {
    auto fit = fit_lda(dtm, chosen.k, chosen.alpha, chosen.beta, fit_seed, c.model.schedule);
    est = std::move(fit.estimates);
    model_json = serialize(fit.state);
  } else {
    auto fit = fit_hdp(dtm, chosen.k, chosen.gamma, chosen.alpha, chosen.beta, fit_seed, c.model.schedule);
    est = std::move(fit.estimates);
    model_json = serialize(fit.state);
  }

  const auto store = load_store(c, ctx);
  const auto trends = load_trends(c, ctx);
  const auto trend_vecs = trend_vectors(trends, store);
  const auto ref_vecs = reference_topic_vectors(trends, trend_vecs, store.dim);
  const auto summaries = summarize_topics(est, dtm, std::min(top_n, dtm.n_words()));
  std::vector<std::vector<double>> sim(summaries.size());
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    std::vector<std::string> words;
    for (const auto& [w, p] : summaries[k].top_words) words.push_back(w);
    const Vector v = mean_embedding(words, store);
    for (const auto& r : ref_vecs) sim[k].push_back(cosine(v, r));
  }
  const auto refs = match_reference_topics(sim);

  json topics = json::array();
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    const auto& s = summaries[k];
    json words = json::array();
    for (const auto& [w, p] : s.top_words) words.push_back({{"word", w}, {"weight", p}});
    topics.push_back({{"topic", k},
                      {"label", trends.topics[refs[k]].topic},
                      {"reference_topic", refs[k]},
                      {"label_similarity", sim[k][refs[k]]},
                      {"top_words", words},
                      {"average_word_frequency", s.average_word_frequency},
                      {"document_allocation", s.document_allocation}});
  }
  json config_json = {{"kind", chosen.kind == TopicModelKind::lda ? "lda" : "hdp"},
                      {"k", chosen.k},
                      {"alpha", chosen.alpha},
                      {"beta", chosen.beta},
                      {"gamma", chosen.gamma}};
  ctx.write("topics/model.json", model_json);
  ctx.write("topics/topics.json", dump_json({{"model", config_json},
                                              {"perplexity", perplexity(est, dtm)},
                                              {"topics", topics}}));

  const auto labels = argmax_topics(est);
  std::string csv = "doc_id,topic\n";
  for (std::size_t j = 0; j < docs.size(); ++j) csv += csv_field(docs[j].id) + "," + std::to_string(labels[j]) + "\n";
  ctx.write("topics/doc_topics.csv", csv);

  if (search) {
    std::string s = "rank,kind,k,alpha,beta,gamma,perplexity,coherence\n";
    for (std::size_t i = 0; i < search->size(); ++i) {
      const auto& r = (*search)[i];
      s += std::to_string(i + 1) + "," + (r.config.kind == TopicModelKind::lda ? "lda" : "hdp") + "," +
           std::to_string(r.config.k) + "," + fmt(r.config.alpha) + "," + fmt(r.config.beta) + "," +
           fmt(r.config.gamma) + "," + fmt(r.perplexity) + "," + fmt(r.coherence) + "\n";
    }
    ctx.write("topics/search.csv", s);
  }
}

struct TopicInfo {
  std::size_t id = 0;
  std::string label;
  std::size_t reference_topic = 0;
  std::vector<std::string> words;
};

std::vector<TopicInfo> read_topics(const json& j) {
  std::vector<TopicInfo> out;
  for (const auto& t : j.at("topics")) {
    TopicInfo info;
    info.id = t.at("topic").get<std::size_t>();
    info.label = t.at("label").get<std::string>();
    info.reference_topic = t.at("reference_topic").get<std::size_t>();
    for (const auto& w : t.at("top_words")) info.words.push_back(w.at("word").get<std::string>());
    out.push_back(std::move(info));
  }
  return out;
}

std::vector<std::size_t> read_doc_topics(const std::string& csv) {
  std::vector<std::size_t> labels;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    labels.push_back(std::stoul(line.substr(comma + 1)));
  }
  return labels;
}

void stage_coherence(const PipelineConfig&, StageContext& ctx) {
  const auto docs = read_token_docs(ctx, "translate/translations.jsonl");
  const auto topics = read_topics(json::parse(ctx.read("topics/topics.json")));
  std::vector<std::vector<std::string>> token_lists;
  for (const auto& d : docs) token_lists.push_back(d.tokens);
  std::vector<TopicWordSet> sets;
  for (const auto& t : topics) sets.push_back({t.id, t.words});
  const auto rows = coherence_table(sets, token_lists, LogBase::two);
  json out = json::array();
  double sum_u = 0.0, sum_c = 0.0;
  for (const auto& r : rows) {
    out.push_back({{"topic", r.topic_id},
                   {"n_words", r.n_words},
                   {"umass", r.umass},
                   {"c_score", r.c_score},
                   {"smoothed_pairs", r.smoothed_pairs}});
    sum_u += r.umass;
    sum_c += r.c_score;
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  ctx.write("coherence/coherence.csv", coherence_csv(rows));
  ctx.write("coherence/coherence.json",
            dump_json({{"log_base", 2}, {"topics", out}, {"mean_umass", sum_u / n}, {"mean_c_score", sum_c / n}}));
}

void stage_trends(const PipelineConfig& c, StageContext& ctx) {
  const auto raw = ingest_string(ctx.read("ingest/corpus.jsonl"), CorpusFormat::jsonl);
  const auto docs = read_token_docs(ctx, "translate/translations.jsonl");
  const auto topics = read_topics(json::parse(ctx.read("topics/topics.json")));
  const auto labels = read_doc_topics(ctx.read("topics/doc_topics.csv"));
  if (labels.size() != docs.size() || raw.documents.size() != docs.size()) {
    throw ShapeError("upstream artifacts disagree on the number of documents");
  }
  const auto store = load_store(c, ctx);
  const auto trends = load_trends(c, ctx);
  const auto trend_vecs = trend_vectors(trends, store);

  std::string csv = "doc_id,trend_index,trend,topic,similarity,low_confidence\n";
  for (std::size_t j = 0; j < docs.size(); ++j) {
    std::optional<std::size_t> hint;
    if (c.use_topic_hint && labels[j] < topics.size()) hint = topics[labels[j]].reference_topic;
    const auto a = assign_trend(docs[j].tokens, trends, trend_vecs, store, hint, c.min_similarity);
    csv += csv_field(docs[j].id) + ",";
    if (a.assigned) {
      csv += std::to_string(a.trend) + "," + csv_field(trends.trend(a.trend).label) + "," +
             csv_field(trends.topic_of(a.trend));
    } else {
      csv += ",,";
    }
    csv += "," + fmt(a.similarity) + "," + (a.low_confidence ? "true" : "false") + "\n";
  }
  ctx.write("trends/assignments.csv", csv);

  // Keyword views per fitted topic: RAKE phrases over the raw text and
  // bigram participation over the translated tokens.
  const auto stop = stopword_union(c);
  json keywords = json::array();
  for (const auto& t : topics) {
    std::vector<std::vector<std::string>> segments;
    std::vector<std::vector<std::string>> texts;
    for (std::size_t j = 0; j < docs.size(); ++j) {
      if (labels[j] != t.id) continue;
      auto segs = rake_segments(raw.documents[j].raw_text);
      segments.insert(segments.end(), segs.begin(), segs.end());
      texts.push_back(docs[j].tokens);
    }
    json rake = json::array();
    const auto phrases = rake_extract(segments, stop);
    for (std::size_t i = 0; i < std::min<std::size_t>(10, phrases.size()); ++i) {
      rake.push_back({{"phrase", text::join(phrases[i].phrase, " ")}, {"score", phrases[i].score}});
    }
    json bigrams = json::array();
    for (const auto& [w, n] : bigram_top_words(texts, 10)) bigrams.push_back({{"word", w}, {"count", n}});
    keywords.push_back({{"topic", t.id}, {"label", t.label}, {"rake", rake}, {"bigram_words", bigrams}});
  }

  // Spherical k-means over the embedded top words of all topics.
  std::map<std::string, Vector> vecs;
  for (const auto& t : topics) {
    for (const auto& w : t.words) {
      if (has_embedding(store, w)) vecs[w] = embed(store, w);
    }
  }
  json clusters = json::array();
  double objective = 0.0;
  try {
    const auto model = kmeans_cosine(vecs, std::min<std::size_t>(trends.topics.size(), vecs.size()),
                                     derive_seed(ctx.seed(), "kmeans"));
    objective = model.objective;
    std::vector<std::vector<std::string>> members(model.k);
    for (const auto& [w, k] : model.assignments) members[k].push_back(w);
    for (std::size_t k = 0; k < model.k; ++k) clusters.push_back({{"cluster", k}, {"words", members[k]}});
  } catch (const TooFewPoints&) {
  }
  ctx.write("trends/keywords.json", dump_json({{"topics", keywords},
                                                {"clusters", clusters},
                                                {"cluster_objective", objective},
                                                {"warnings", trends.warnings}}));
}

std::string two_digit(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return buf;
}

void stage_forecast(const PipelineConfig& c, StageContext& ctx) {
  const auto topics = read_topics(json::parse(ctx.read("topics/topics.json")));
  const auto labels = read_doc_topics(ctx.read("topics/doc_topics.csv"));
  const auto trends = load_trends(c, ctx);

  std::vector<std::optional<std::size_t>> assignments;
  {
    std::istringstream in(ctx.read("trends/assignments.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      // doc ids may be quoted; the trend index follows the first unquoted comma.
      std::size_t pos = 0;
      if (line[0] == '"') {
        pos = 1;
        while (pos < line.size() && !(line[pos] == '"' && (pos + 1 >= line.size() || line[pos + 1] != '"'))) {
          pos += line[pos] == '"' ? 2 : 1;
        }
      }
      const auto c1 = line.find(',', pos);
      const auto c2 = line.find(',', c1 + 1);
      const std::string idx = line.substr(c1 + 1, c2 - c1 - 1);
      assignments.push_back(idx.empty() ? std::nullopt : std::optional<std::size_t>(std::stoul(idx)));
    }
  }

  const std::size_t window = c.forecast.window.value_or(default_window(labels.size()));
  std::vector<std::string> topic_names;
  for (const auto& t : topics) topic_names.push_back("topic_" + std::to_string(t.id));
  std::vector<std::string> trend_names;
  for (std::size_t f = 0; f < trends.size(); ++f) trend_names.push_back(trends.trend(f).label);

  const auto topic_series = build_topic_series(labels, topics.size(), window, topic_names);
  const auto trend_series = build_trend_series(assignments, trends.size(), window, trend_names);

  json series_index = json::array();
  auto emit = [&](const TimeSeries& full, const std::string& stem, const std::string& kind) {
    const TimeSeries s = truncate(full, c.forecast.max_points);
    const TimeSeries ma = moving_average(s, std::min(c.forecast.ma_window, s.size()));
    ctx.write("forecast/series/" + stem + ".csv", series_csv(s));
    ctx.write("forecast/series/" + stem + "_ma.csv", series_csv(ma));
    series_index.push_back({{"label", full.label},
                            {"kind", kind},
                            {"path", "forecast/series/" + stem + ".csv"},
                            {"ma_path", "forecast/series/" + stem + "_ma.csv"},
                            {"length", s.size()}});
    return s;
  };
  for (std::size_t k = 0; k < topic_series.size(); ++k) emit(topic_series[k], "topic_" + std::to_string(k), "topic");

  struct Row {
    std::size_t trend = 0;
    std::optional<ModelFit> fit;
    std::string error;
  };
  std::vector<Row> rows;
  std::vector<FitReportRow> report_rows;
  for (std::size_t f = 0; f < trend_series.size(); ++f) {
    const TimeSeries s = emit(trend_series[f], "trend_" + two_digit(f), "trend");
    Row row{f, std::nullopt, {}};
    try {
      GridSearchOptions grid;
      grid.fit.seed = derive_seed(ctx.seed(), static_cast<std::uint64_t>(f));
      grid.max_parallel = c.forecast.max_parallel;
      const std::size_t n_train = train_size(s.size(), c.forecast.train_fraction);
      const std::span<const double> train(s.values.data(), n_train);
      const auto ranked = grid_search_arima(train, c.forecast.p_max, c.forecast.d_max, c.forecast.q_max,
                                            c.forecast.criterion, grid);
      row.fit = evaluate_oos(s.values, ranked.front().model.order, c.forecast.train_fraction, grid.fit);
      report_rows.push_back({s.label, *row.fit});
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.fit.has_value() != b.fit.has_value()) return a.fit.has_value();
    if (!a.fit) return false;
    return *a.fit->rmse_oos < *b.fit->rmse_oos;
  });
  std::string csv = "rank,trend,arima_order,rmse,related_topic\n";
  json ranking = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& label = trends.trend(r.trend).label;
    const auto& topic = trends.topic_of(r.trend);
    json entry = {{"rank", i + 1}, {"trend", label}, {"trend_index", r.trend}, {"related_topic", topic}};
    if (r.fit) {
      const auto& o = r.fit->model.order;
      entry["order"] = {o.p, o.d, o.q};
      entry["rmse"] = *r.fit->rmse_oos;
      entry["converged"] = r.fit->model.converged;
      csv += std::to_string(i + 1) + "," + csv_field(label) + ",\"" + o.to_string() + "\"," + fmt(*r.fit->rmse_oos) +
             "," + csv_field(topic) + "\n";
    } else {
      entry["order"] = nullptr;
      entry["rmse"] = nullptr;
      entry["error"] = r.error;
      csv += std::to_string(i + 1) + "," + csv_field(label) + ",,," + csv_field(topic) + "\n";
    }
    ranking.push_back(std::move(entry));
  }
  ctx.write("forecast/fits.csv", fit_report_csv(report_rows));
  ctx.write("forecast/ranking.csv", csv);
  ctx.write("forecast/series.json", dump_json({{"window", window}, {"series", series_index}}));
  ctx.write("forecast/ranking.json", dump_json({{"window", window}, {"ranking", ranking}}));
}

void check_upstream(Stage stage, const PipelineConfig& c) {
  const auto ups = transitive_inputs(stage);
  for (Stage s : all_stages()) {
    if (!ups.contains(s)) continue;
    for (const auto& rel : primary_artifacts(s)) {
      if (!fs::is_regular_file(c.output_dir / rel)) throw MissingUpstream(std::string(to_string(s)));
    }
  }
}

void record_timing(const PipelineConfig& c, Stage stage, double seconds) {
  const auto path = c.output_dir / "timings.json";
  json j = json::object();
  if (fs::exists(path)) {
    try {
      j = json::parse(io::read_file(path));
    } catch (const json::exception&) {
      j = json::object();
    }
  }
  j[std::string(to_string(stage))] = seconds;
  io::write_file_atomic(path, dump_json(j));
}

StageRecord run_stage_locked(Stage stage, const PipelineConfig& c) {
  check_upstream(stage, c);
  const auto t0 = std::chrono::steady_clock::now();
  StageContext ctx(c, stage);
  std::error_code ec;
  fs::remove_all(c.output_dir / std::string(to_string(stage)), ec);
  try {
    switch (stage) {
      case Stage::ingest: stage_ingest(c, ctx); break;
      case Stage::preprocess: stage_preprocess(c, ctx); break;
      case Stage::translate: stage_translate(c, ctx); break;
      case Stage::topics: stage_topics(c, ctx); break;
      case Stage::coherence: stage_coherence(c, ctx); break;
      case Stage::trends: stage_trends(c, ctx); break;
      case Stage::forecast: stage_forecast(c, ctx); break;
    }
  } catch (const MissingUpstream&) {
    throw;
  } catch (const StageFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure(std::string(to_string(stage)), e.what());
  }
  StageRecord record = ctx.take();

  RunManifest m = load_manifest(c.output_dir);
  const std::string hash = io::sha256_hex(c.canonical);
  if (m.config_hash != hash) m = RunManifest{};
  m.tool_version = tool_version();
  m.config_hash = hash;
  m.seed = c.seed;
  std::erase_if(m.stages, [&](const StageRecord& r) { return r.stage == stage; });
  m.stages.push_back(record);
  std::sort(m.stages.begin(), m.stages.end(),
            [](const StageRecord& a, const StageRecord& b) { return a.stage < b.stage; });
  io::write_file_atomic(c.output_dir / "manifest.json", to_json(m));

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  record_timing(c, stage, secs);
  return record;
}

}  // namespace

StageRecord run_stage(Stage stage, const PipelineConfig& config) {
  OutputLock lock(config.output_dir);
  return run_stage_locked(stage, config);
}

RunManifest run_all(const PipelineConfig& config) {
  validate(config);
  OutputLock lock(config.output_dir);
  std::error_code ec;
  fs::remove(config.output_dir / "failure.json", ec);
  // A full run starts from a fresh manifest.
  fs::remove(config.output_dir / "manifest.json", ec);
  for (Stage s : all_stages()) {
    try {
      run_stage_locked(s, config);
    } catch (const Error& e) {
      io::write_file_atomic(config.output_dir / "failure.json",
                            dump_json({{"stage", std::string(to_string(s))}, {"error", e.what()}}));
      throw;
    }
  }
  return load_manifest(config.output_dir);
}

std::string plan(const PipelineConfig& config, std::optional<Stage> only) {
  std::string out = "plan (seed " + std::to_string(config.seed) + ", output " + config.output_dir.string() + ")\n";
  std::size_t n = 0;
  for (Stage s : all_stages()) {
    if (only && *only != s) continue;
    out += std::to_string(++n) + ". " + std::string(to_string(s)) + " [seed " +
           std::to_string(stage_seed(config.seed, s)) + "]";
    const auto ups = stage_inputs(s);
    if (!ups.empty()) {
      out += " after";
      for (Stage u : ups) out += " " + std::string(to_string(u));
    }
    out += " ->";
    for (const auto& a : primary_artifacts(s)) out += " " + a;
    out += "\n";
  }
  return out;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

std::string report(const PipelineConfig& config, ReportFormat format) {
  const RunManifest m = load_manifest(config.output_dir);
  std::vector<std::string> missing;
  for (Stage s : all_stages()) {
    bool ok = m.find(s) != nullptr;
    for (const auto& rel : primary_artifacts(s)) ok = ok && fs::is_regular_file(config.output_dir / rel);
    if (!ok) missing.emplace_back(to_string(s));
  }
  if (!missing.empty()) {
    throw IncompleteManifest("manifest lacks stages: " + text::join(missing, ", "));
  }
  auto load = [&](const std::string& rel) { return json::parse(io::read_file(config.output_dir / rel)); };
  const json topics = load("topics/topics.json");
  const json coherence = load("coherence/coherence.json");
  const json ranking = load("forecast/ranking.json");
  const json series = load("forecast/series.json");

  if (format == ReportFormat::csv) return io::read_file(config.output_dir / "forecast/ranking.csv");

  if (format == ReportFormat::json) {
    ordered_json r;
    r["tool_version"] = m.tool_version;
    r["config_hash"] = m.config_hash;
    r["seed"] = m.seed;
    r["model"] = topics.at("model");
    r["topics"] = ordered_json::array();
    const auto& coh = coherence.at("topics");
    for (std::size_t k = 0; k < topics.at("topics").size(); ++k) {
      const auto& t = topics["topics"][k];
      ordered_json e;
      e["topic"] = t.at("topic");
      e["label"] = t.at("label");
      e["top_words"] = t.at("top_words");
      e["average_word_frequency"] = t.at("average_word_frequency");
      e["document_allocation"] = t.at("document_allocation");
      e["umass"] = coh[k].at("umass");
      e["c_score"] = coh[k].at("c_score");
      r["topics"].push_back(std::move(e));
    }
    r["trend_ranking"] = ranking.at("ranking");
    r["series"] = series.at("series");
    return r.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
  }

  std::string md = "# Trend report\n\n";
  md += "Model: " + topics["model"]["kind"].get<std::string>() + ", K = " +
        std::to_string(topics["model"]["k"].get<std::size_t>()) + ", seed " + std::to_string(m.seed) + "\n\n";
  md += "## Topics\n";
  const auto& coh = coherence.at("topics");
  for (std::size_t k = 0; k < topics["topics"].size(); ++k) {
    const auto& t = topics["topics"][k];
    md += "\n### Topic " + std::to_string(k) + ": " + t["label"].get<std::string>() + "\n\n";
    md += "U-Mass " + fmt(coh[k]["umass"].get<double>()) + ", C-score " + fmt(coh[k]["c_score"].get<double>()) +
          ", document allocation " + fmt(t["document_allocation"].get<double>()) + "\n\n";
    md += "| rank | word | weight |\n|---:|---|---:|\n";
    std::size_t rank = 0;
    for (const auto& w : t["top_words"]) {
      md += "| " + std::to_string(++rank) + " | " + w["word"].get<std::string>() + " | " +
            fmt(w["weight"].get<double>()) + " |\n";
    }
  }
  md += "\n## Trend ranking by out-of-sample RMSE\n\n";
  md += "| rank | trend | ARIMA (p,d,q) | RMSE | related topic |\n|---:|---|---|---:|---|\n";
  for (const auto& r : ranking["ranking"]) {
    std::string order = "n/a";
    std::string err = "n/a";
    if (!r["order"].is_null()) {
      order = "(" + std::to_string(r["order"][0].get<int>()) + "," + std::to_string(r["order"][1].get<int>()) + "," +
              std::to_string(r["order"][2].get<int>()) + ")";
      err = fmt(r["rmse"].get<double>());
    }
    md += "| " + std::to_string(r["rank"].get<std::size_t>()) + " | " + r["trend"].get<std::string>() + " | " + order +
          " | " + err + " | " + r["related_topic"].get<std::string>() + " |\n";
  }
  md += "\n## Series\n\n";
  for (const auto& s : series["series"]) {
    md += "- " + s["label"].get<std::string>() + ": `" + s["path"].get<std::string>() + "` (moving average `" +
          s["ma_path"].get<std::string>() + "`, " + std::to_string(s["length"].get<std::size_t>()) + " points)\n";
  }
  return md;
}

}  // namespace trendscope
