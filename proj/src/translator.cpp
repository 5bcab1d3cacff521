#include "trendscope/translator.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <future>
#include <unordered_map>

#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/text.hpp"

namespace trendscope {

using json = nlohmann::json;

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::bilingual_dict: return "bilingual_dict";
    case Provenance::parallel_dict: return "parallel_dict";
    case Provenance::lexicon_passthrough: return "lexicon_passthrough";
    case Provenance::remote_mt: return "remote_mt";
    case Provenance::untranslated: return "untranslated";
    case Provenance::english_source: return "english_source";
    case Provenance::human_corrected: return "human_corrected";
  }
  return "untranslated";
}

Provenance parse_provenance(std::string_view name) {
  for (auto p : {Provenance::bilingual_dict, Provenance::parallel_dict, Provenance::lexicon_passthrough,
                 Provenance::remote_mt, Provenance::untranslated, Provenance::english_source,
                 Provenance::human_corrected}) {
    if (to_string(p) == name) return p;
  }
  throw Error("unknown provenance '" + std::string(name) + "'");
}

std::string to_json(const RemoteMtRequest& req) {
  return json{{"texts", req.texts}, {"source_lang", std::string(to_string(req.source_lang))}}.dump();
}

RemoteMtRequest request_from_json(const std::string& body) {
  RemoteMtRequest req;
  try {
    const auto j = json::parse(body);
    req.texts = j.at("texts").get<std::vector<std::string>>();
    if (j.contains("source_lang")) req.source_lang = parse_lang(j["source_lang"].get<std::string>());
  } catch (const json::exception& e) {
    throw RemoteError(std::string("malformed request: ") + e.what());
  }
  return req;
}

std::string to_json(const RemoteMtResponse& resp) {
  json j{{"translations", resp.translations}};
  if (!resp.ok.empty()) {
    json status = json::array();
    for (bool ok : resp.ok) status.push_back(ok ? "ok" : "error");
    j["status"] = status;
  }
  return j.dump();
}

RemoteMtResponse response_from_json(const std::string& body) {
  RemoteMtResponse resp;
  try {
    const auto j = json::parse(body);
    resp.translations = j.at("translations").get<std::vector<std::string>>();
    if (j.contains("status")) {
      for (const auto& s : j["status"]) resp.ok.push_back(s.get<std::string>() == "ok");
      if (resp.ok.size() != resp.translations.size()) throw RemoteError("status/translations length differ");
    }
  } catch (const json::exception& e) {
    throw RemoteError(std::string("malformed response: ") + e.what());
  }
  return resp;
}

std::map<std::string, std::string> MockMtClient::load_terms(const std::filesystem::path& path) {
  std::map<std::string, std::string> terms;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cols = io::split(lines[i], '\t');
    if (cols.size() != 2) throw FormatError("expected term<TAB>translation", i + 1);
    terms[text::casefold(cols[0])] = cols[1];
  }
  return terms;
}

RemoteMtResponse MockMtClient::translate(const RemoteMtRequest& request) {
  ++calls_;
  RemoteMtResponse resp;
  for (const auto& t : request.texts) {
    const auto it = terms_.find(text::casefold(t));
    resp.translations.push_back(it == terms_.end() ? std::string() : it->second);
    resp.ok.push_back(it != terms_.end());
  }
  return resp;
}

HttpMtClient::HttpMtClient(std::string endpoint, std::optional<std::string> token, int timeout_seconds)
    : token_(std::move(token)), timeout_seconds_(timeout_seconds) {
  constexpr std::string_view scheme = "http://";
  if (endpoint.rfind(scheme, 0) != 0) throw ConfigError("MT endpoint must be an http:// URL: " + endpoint);
  const auto slash = endpoint.find('/', scheme.size());
  host_ = endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
}

RemoteMtResponse HttpMtClient::translate(const RemoteMtRequest& request) {
  httplib::Client cli(host_);
  cli.set_connection_timeout(timeout_seconds_);
  cli.set_read_timeout(timeout_seconds_);
  httplib::Headers headers;
  if (token_) headers.emplace("Authorization", "Bearer " + *token_);
  auto res = cli.Post(path_, headers, to_json(request), "application/json");
  if (!res) throw RemoteError("MT request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw RemoteError("MT endpoint returned HTTP " + std::to_string(res->status));
  auto resp = response_from_json(res->body);
  if (resp.translations.size() != request.texts.size()) {
    throw RemoteError("MT response has " + std::to_string(resp.translations.size()) + " translations for " +
                      std::to_string(request.texts.size()) + " texts");
  }
  return resp;
}

namespace {

Provenance provenance_for(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::bilingual: return Provenance::bilingual_dict;
    case DictionaryKind::parallel: return Provenance::parallel_dict;
    case DictionaryKind::lexicon: return Provenance::lexicon_passthrough;
  }
  return Provenance::untranslated;
}

}  // namespace

TranslationResult translate_doc(const Document& doc, const std::vector<BilingualDictionary>& cascade,
                                RemoteMtClient* client) {
  struct Slot {
    std::vector<std::string> words;
    Provenance provenance = Provenance::untranslated;
  };
  std::vector<Slot> slots(doc.tokens.size());
  std::vector<std::string> misses;
  std::unordered_map<std::string, std::size_t> miss_index;

  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const std::string& tok = doc.tokens[i];
    Slot& slot = slots[i];
    if (doc.lang == Lang::english) {
      slot = {{tok}, Provenance::english_source};
      continue;
    }
    bool hit = false;
    for (const auto& dict : cascade) {
      const auto targets = lookup(dict, tok);
      if (!targets) continue;
      slot.provenance = provenance_for(dict.kind);
      slot.words = targets->empty() ? std::vector<std::string>{tok} : text::split_whitespace(targets->front());
      hit = true;
      break;
    }
    if (!hit) {
      slot.words = {tok};
      if (miss_index.emplace(tok, misses.size()).second) misses.push_back(tok);
    }
  }

  TranslationResult result;
  result.doc_id = doc.id;
  if (client && !misses.empty()) {
    try {
      const auto resp = client->translate({misses, doc.lang});
      if (resp.translations.size() != misses.size()) throw RemoteError("response cardinality mismatch");
      for (auto& slot : slots) {
        if (slot.provenance != Provenance::untranslated) continue;
        const std::size_t k = miss_index.at(slot.words.front());
        const bool ok = resp.ok.empty() || resp.ok[k];
        auto words = text::split_whitespace(text::to_lower(resp.translations[k]));
        if (ok && !words.empty()) slot = {std::move(words), Provenance::remote_mt};
      }
    } catch (const RemoteError& e) {
      result.remote_error = e.what();
    }
  }
  for (auto& slot : slots) {
    for (auto& w : slot.words) {
      result.translated_tokens.push_back(std::move(w));
      result.provenance.push_back(slot.provenance);
    }
  }
  return result;
}

std::vector<TranslationResult> translate_corpus(const Corpus& corpus,
                                                const std::vector<BilingualDictionary>& cascade,
                                                RemoteMtClient* client, std::size_t max_in_flight) {
  const auto& docs = corpus.documents;
  std::vector<TranslationResult> out(docs.size());
  max_in_flight = std::max<std::size_t>(1, max_in_flight);
  if (max_in_flight == 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) out[i] = translate_doc(docs[i], cascade, client);
    return out;
  }
  for (std::size_t start = 0; start < docs.size(); start += max_in_flight) {
    const std::size_t end = std::min(docs.size(), start + max_in_flight);
    std::vector<std::future<TranslationResult>> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] { return translate_doc(docs[i], cascade, client); }));
    }
    for (std::size_t i = start; i < end; ++i) out[i] = batch[i - start].get();
  }
  return out;
}

double evaluate_sentence_accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.size() != gold.size()) {
    throw LengthMismatch("prediction has " + std::to_string(pred.size()) + " sentences, gold has " +
                         std::to_string(gold.size()));
  }
  if (pred.empty()) throw LengthMismatch("no sentences to evaluate");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == gold[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

EvalReport evaluate_token_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  std::map<std::string, std::size_t> p;
  std::map<std::string, std::size_t> g;
  for (const auto& t : pred) ++p[t];
  for (const auto& t : gold) ++g[t];
  EvalReport r;
  for (const auto& [tok, n] : p) {
    const auto it = g.find(tok);
    const std::size_t m = it == g.end() ? 0 : it->second;
    r.tp += std::min(n, m);
    r.fp += n > m ? n - m : 0;
  }
  for (const auto& [tok, m] : g) {
    const auto it = p.find(tok);
    const std::size_t n = it == p.end() ? 0 : it->second;
    r.fn += m > n ? m - n : 0;
  }
  const std::size_t denom = 2 * r.tp + r.fp + r.fn;
  r.f1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(r.tp) / static_cast<double>(denom);
  const std::size_t all = r.tp + r.tn + r.fp + r.fn;
  r.accuracy = all == 0 ? 1.0 : static_cast<double>(r.tp + r.tn) / static_cast<double>(all);
  return r;
}

std::map<std::string, std::string> load_corrections(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  const auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos) throw FormatError("expected doc_id<TAB>text", i + 1);
    out[lines[i].substr(0, tab)] = lines[i].substr(tab + 1);
  }
  return out;
}

CorrectionOutcome apply_corrections(std::vector<TranslationResult> results,
                                    const std::map<std::string, std::string>& corrections) {
  CorrectionOutcome outcome;
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < results.size(); ++i) by_id.emplace(results[i].doc_id, i);
  for (const auto& [id, corrected] : corrections) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      outcome.warnings.push_back("unknown doc id '" + id + "' in corrections; skipped");
      continue;
    }
    auto& r = results[it->second];
    r.translated_tokens = text::split_whitespace(corrected);
    r.provenance.assign(r.translated_tokens.size(), Provenance::human_corrected);
  }
  outcome.results = std::move(results);
  return outcome;
}

}  // namespace trendscope
