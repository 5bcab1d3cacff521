#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trendscope/corpus_io.hpp"
#include "trendscope/lexikit.hpp"

namespace trendscope {

enum class Provenance {
  bilingual_dict,
  parallel_dict,
  lexicon_passthrough,
  remote_mt,
  untranslated,
  english_source,
  human_corrected,
};

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view name);

struct TranslationResult {
  std::string doc_id;
  std::vector<std::string> translated_tokens;
  std::vector<Provenance> provenance;  // same length as translated_tokens
  std::optional<std::string> remote_error;

  bool operator==(const TranslationResult&) const = default;
};

struct RemoteMtRequest {
  std::vector<std::string> texts;
  Lang source_lang = Lang::unknown;
};

struct RemoteMtResponse {
  std::vector<std::string> translations;
  // Per-text success flag; empty means every text succeeded.
  std::vector<bool> ok;
};

// JSON wire shapes of the remote contract:
//   request  {"texts": [...], "source_lang": "french"}
//   response {"translations": [...], "status": ["ok"|"error", ...]}  (status optional)
std::string to_json(const RemoteMtRequest& req);
RemoteMtRequest request_from_json(const std::string& body);
std::string to_json(const RemoteMtResponse& resp);
RemoteMtResponse response_from_json(const std::string& body);

class RemoteMtClient {
 public:
  virtual ~RemoteMtClient() = default;
  // Throws RemoteError on transport failure or a cardinality mismatch.
  virtual RemoteMtResponse translate(const RemoteMtRequest& request) = 0;
};

// Offline client answering from a term map; unknown terms come back with
// ok=false.
class MockMtClient : public RemoteMtClient {
 public:
  explicit MockMtClient(std::map<std::string, std::string> terms) : terms_(std::move(terms)) {}
  // TSV term<TAB>translation.
  static std::map<std::string, std::string> load_terms(const std::filesystem::path& path);

  RemoteMtResponse translate(const RemoteMtRequest& request) override;
  std::size_t calls() const { return calls_; }

 private:
  std::map<std::string, std::string> terms_;
  std::atomic<std::size_t> calls_{0};
};

// POSTs the JSON contract to an http:// endpoint. A bearer token, when
// given, is sent in the Authorization header.
class HttpMtClient : public RemoteMtClient {
 public:
  HttpMtClient(std::string endpoint, std::optional<std::string> token, int timeout_seconds = 30);
  RemoteMtResponse translate(const RemoteMtRequest& request) override;

 private:
  std::string host_;
  std::string path_;
  std::optional<std::string> token_;
  int timeout_seconds_;
};

// Cascade order is the vector order; the provenance of a hit follows the
// dictionary's kind. Misses go to the client in a single batch.
TranslationResult translate_doc(const Document& doc, const std::vector<BilingualDictionary>& cascade,
                                RemoteMtClient* client);

// Documents are independent; up to max_in_flight run concurrently. Output
// order equals input order.
std::vector<TranslationResult> translate_corpus(const Corpus& corpus,
                                                const std::vector<BilingualDictionary>& cascade,
                                                RemoteMtClient* client, std::size_t max_in_flight = 1);

struct EvalReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

// Exact-match share. Throws LengthMismatch on unequal or empty input.
double evaluate_sentence_accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& gold);
// Multiset overlap; tn is always 0. Both empty -> f1 = 1.
EvalReport evaluate_token_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold);

struct CorrectionOutcome {
  std::vector<TranslationResult> results;
  std::vector<std::string> warnings;
};

// TSV doc_id<TAB>corrected text.
std::map<std::string, std::string> load_corrections(const std::filesystem::path& path);
CorrectionOutcome apply_corrections(std::vector<TranslationResult> results,
                                    const std::map<std::string, std::string>& corrections);

}  // namespace trendscope
