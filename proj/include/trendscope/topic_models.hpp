#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trendscope/corpus_io.hpp"
#include "trendscope/random.hpp"

namespace trendscope {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct DocTermMatrix {
  std::vector<std::string> vocab;  // sorted
  // Per document: (word id, count) with count >= 1, ascending word id.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows;
  std::size_t total_tokens = 0;

  std::size_t n_docs() const { return rows.size(); }
  std::size_t n_words() const { return vocab.size(); }
  std::size_t doc_length(std::size_t j) const;
  std::optional<std::uint32_t> word_id(const std::string& word) const;
  // Each row expanded to one entry per token, in word-id order.
  std::vector<std::vector<std::uint32_t>> token_ids() const;
};

// Throws EmptyCorpus when there is no token at all.
DocTermMatrix build_dtm(const Corpus& corpus);
DocTermMatrix build_dtm(const std::vector<std::vector<std::string>>& docs);

// Assignment state shared by the LDA and HDP samplers. Counts are kept
// consistent with z after every public operation.
struct TopicAssignments {
  std::size_t n_topics = 0;
  std::size_t n_words = 0;
  std::vector<std::vector<std::uint32_t>> words;  // token word ids per doc
  std::vector<std::vector<std::uint32_t>> z;      // token topics per doc
  std::vector<std::int32_t> n_wk;                 // W x K
  std::vector<std::int32_t> n_jk;                 // D x K, i.e. N_kj transposed
  std::vector<std::int32_t> n_k;

  std::size_t n_docs() const { return words.size(); }
  std::int32_t nwk(std::size_t w, std::size_t k) const { return n_wk[w * n_topics + k]; }
  std::int32_t nkj(std::size_t k, std::size_t j) const { return n_jk[j * n_topics + k]; }
  // Recomputes every count array from z.
  void recount();
  // True when the stored counts equal a fresh recount and z is in range.
  bool counts_consistent() const;
};

struct LdaState : TopicAssignments {
  double alpha = 0.1;
  double beta = 0.01;
  std::uint64_t seed = 0;
  Rng rng;
};

struct HdpState : TopicAssignments {
  double gamma = 1.0;
  double eta = 1.0;
  double beta = 0.01;
  std::vector<double> top_level_weights;  // on the simplex, size K_max
  std::uint64_t seed = 0;
  Rng rng;

  std::size_t k_max() const { return n_topics; }
};

struct TopicEstimates {
  Matrix phi;    // K x W
  Matrix theta;  // D x K
};

// Throws BadHyperparameter for K < 1 or non-positive alpha/beta.
LdaState lda_init(const DocTermMatrix& dtm, std::size_t K, double alpha, double beta, std::uint64_t seed);
// Full conditional for one token of word w in doc j, whose own assignment
// must already be removed from the counts.
std::vector<double> lda_conditional(const LdaState& state, std::size_t j, std::uint32_t w);
void lda_sweep(LdaState& state);
TopicEstimates estimate(const LdaState& state);

HdpState hdp_init(const DocTermMatrix& dtm, std::size_t k_max, double gamma, double eta, double beta,
                  std::uint64_t seed);
std::vector<double> hdp_conditional(const HdpState& state, std::size_t j, std::uint32_t w);
void hdp_sweep(HdpState& state);
TopicEstimates estimate(const HdpState& state);
// Topics holding at least `threshold` of all tokens.
std::size_t active_topics(const TopicAssignments& state, double threshold);

// exp(-sum log p(w|d) / N). Throws VocabMismatch if shapes disagree.
double perplexity(const TopicEstimates& estimates, const DocTermMatrix& dtm);

struct GibbsSchedule {
  std::size_t burn_in = 500;
  std::size_t samples = 1000;
};

// Runs burn-in then averages the estimates over the kept sweeps.
struct LdaFit {
  LdaState state;
  TopicEstimates estimates;
};
LdaFit fit_lda(const DocTermMatrix& dtm, std::size_t K, double alpha, double beta, std::uint64_t seed,
               GibbsSchedule schedule = {});

struct HdpFit {
  HdpState state;
  TopicEstimates estimates;
};
HdpFit fit_hdp(const DocTermMatrix& dtm, std::size_t k_max, double gamma, double eta, double beta,
               std::uint64_t seed, GibbsSchedule schedule = {});

// (word, phi) for the n most probable words of topic k; ties break
// lexicographically.
std::vector<std::pair<std::string, double>> top_words(const TopicEstimates& estimates,
                                                      const std::vector<std::string>& vocab, std::size_t k,
                                                      std::size_t n);

std::vector<std::size_t> argmax_topics(const TopicEstimates& estimates);

struct TopicSummary {
  std::size_t topic = 0;
  std::vector<std::pair<std::string, double>> top_words;
  // Mean over non-empty documents and top words of count(w, d) / len(d).
  double average_word_frequency = 0.0;
  // Share of documents whose argmax topic is this one.
  double document_allocation = 0.0;
};
std::vector<TopicSummary> summarize_topics(const TopicEstimates& estimates, const DocTermMatrix& dtm,
                                           std::size_t top_n = 10);

// ---------------------------------------------------------------------------
// Hyperparameter search

enum class TopicModelKind { lda, hdp };
enum class SearchStrategy { grid, random };
enum class SearchScoring { coherence, perplexity };

// For HDP, `k` is the truncation level and `alpha` is the document-level
// concentration (eta).
struct ModelConfig {
  TopicModelKind kind = TopicModelKind::lda;
  std::size_t k = 5;
  double alpha = 0.1;
  double beta = 0.01;
  double gamma = 1.0;

  bool operator==(const ModelConfig&) const = default;
};

struct SearchSpec {
  TopicModelKind model = TopicModelKind::lda;
  std::vector<std::size_t> k_grid{5};
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::vector<double> gamma_grid{1.0};  // ignored for LDA
  SearchStrategy strategy = SearchStrategy::grid;
  std::size_t n_random_draws = 10;
  SearchScoring scoring = SearchScoring::coherence;
  std::uint64_t seed = 0;
  GibbsSchedule schedule{100, 50};
  std::size_t max_parallel = 1;

  // Grids spanning the configurations of the reported tuning table.
  static SearchSpec tuning_table_grid(TopicModelKind kind);
};

struct SearchResult {
  ModelConfig config;
  double perplexity = 0.0;
  double coherence = 0.0;
};

using CoherenceFn = std::function<double(const TopicEstimates&, const DocTermMatrix&)>;

// Every returned config is fitted with a seed derived from spec.seed and
// its position in the Cartesian product, so results do not depend on
// max_parallel. Throws EmptyGrid / BadHyperparameter.
std::vector<SearchResult> hyperparameter_search(const DocTermMatrix& dtm, const SearchSpec& spec,
                                                const CoherenceFn& coherence_fn);
// The candidate configs a search would evaluate, in evaluation order.
std::vector<ModelConfig> search_candidates(const SearchSpec& spec);

// ---------------------------------------------------------------------------
// Serialization (JSON, versioned). Counts are stored and checked on load.

std::string serialize(const LdaState& state);
LdaState deserialize_lda(const std::string& json_text);
std::string serialize(const HdpState& state);
HdpState deserialize_hdp(const std::string& json_text);

}  // namespace trendscope
