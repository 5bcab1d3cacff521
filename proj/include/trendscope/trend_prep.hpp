#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace trendscope {

using Vector = std::vector<double>;

// ---------------------------------------------------------------------------
// RAKE

struct RakeKeyword {
  std::vector<std::string> phrase;
  double score = 0.0;
};

// `sentences` are token runs already split at sentence boundaries and
// punctuation. Candidates are maximal stopword-free runs; repeated phrases
// are reported once. Sorted by score descending, then phrase text.
std::vector<RakeKeyword> rake_extract(const std::vector<std::vector<std::string>>& sentences,
                                      const std::set<std::string>& stopwords);
// Splits raw text at punctuation and whitespace, lowercasing words.
std::vector<std::vector<std::string>> rake_segments(std::string_view raw_text);
// deg(w) / freq(w) for every candidate word.
std::map<std::string, double> rake_word_scores(const std::vector<std::vector<std::string>>& sentences,
                                               const std::set<std::string>& stopwords);

// ---------------------------------------------------------------------------
// Embeddings

struct EmbeddingStore {
  std::size_t dim = 0;
  std::unordered_map<std::string, Vector> word_vectors;
  std::unordered_map<std::string, Vector> ngram_vectors;
  std::size_t min_n = 3;
  std::size_t max_n = 6;
};

// Text format: first line "count dim", then "word v1 ... v_dim". The
// optional n-gram file has the same shape keyed by n-gram.
EmbeddingStore load_embeddings(const std::filesystem::path& words,
                               const std::optional<std::filesystem::path>& ngrams = std::nullopt,
                               std::size_t min_n = 3, std::size_t max_n = 6);

// Character n-grams of "<word>" for n in [min_n, max_n], in order of
// position then length.
std::vector<std::string> char_ngrams(std::string_view word, std::size_t min_n, std::size_t max_n);

// Stored vector for known words; otherwise the sum of the stored n-gram
// vectors, or zeros.
Vector embed(const EmbeddingStore& store, std::string_view word);
bool has_embedding(const EmbeddingStore& store, std::string_view word);

// zero vectors give 0. Throws DimMismatch.
double cosine(const Vector& u, const Vector& v);

// ---------------------------------------------------------------------------
// Spherical k-means

struct ClusterModel {
  std::size_t k = 0;
  std::vector<Vector> centroids;               // unit norm
  std::map<std::string, std::size_t> assignments;
  double objective = 0.0;                      // sum of (1 - cosine to own centroid)
  std::vector<double> objective_history;       // one entry per iteration
  std::size_t iterations = 0;
};

// Zero vectors are skipped. Throws TooFewPoints when fewer than k distinct
// non-zero directions remain.
ClusterModel kmeans_cosine(const std::map<std::string, Vector>& vectors, std::size_t k, std::uint64_t seed,
                           std::size_t max_iter = 100, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Bigrams

struct BigramModel {
  // Number of bigrams with h as the first element.
  std::map<std::string, std::size_t> unigram_counts;
  std::map<std::pair<std::string, std::string>, std::size_t> bigram_counts;

  double probability(const std::string& history, const std::string& word) const;
};

BigramModel build_bigrams(const std::vector<std::vector<std::string>>& texts);

// Words ranked by the number of bigrams they take part in; ties break
// lexicographically.
std::vector<std::pair<std::string, std::size_t>> bigram_top_words(const std::vector<std::vector<std::string>>& texts,
                                                                  std::size_t top_n = 30);

// ---------------------------------------------------------------------------
// Reference trends

struct Trend {
  std::string label;
  std::vector<std::string> keywords;
};

struct TopicTrends {
  std::string topic;
  std::vector<Trend> trends;  // exactly 5
};

struct ReferenceTrendSet {
  std::vector<TopicTrends> topics;  // exactly 5, file order
  std::vector<std::string> warnings;

  std::size_t size() const;
  // Flat index -> (topic index, trend index); flat order is file order.
  std::pair<std::size_t, std::size_t> locate(std::size_t flat) const;
  const Trend& trend(std::size_t flat) const;
  const std::string& topic_of(std::size_t flat) const;
};

// JSON {topic: [{"label": ..., "keywords": [...]} x5] x5}. Throws ShapeError.
ReferenceTrendSet load_reference_trends(const std::filesystem::path& path);
ReferenceTrendSet parse_reference_trends(const std::string& json_text);

struct TrendAssignment {
  bool assigned = false;
  std::size_t trend = 0;  // flat index
  double similarity = 0.0;
  bool low_confidence = false;
};

// Mean token embedding vs. mean seed-keyword embedding per trend; argmax
// cosine with the earliest trend winning ties. `topic_hint` restricts the
// candidates to one topic's trends. Documents without embeddable tokens
// come back unassigned.
TrendAssignment assign_trend(const std::vector<std::string>& tokens, const ReferenceTrendSet& trends,
                             const EmbeddingStore& store, std::optional<std::size_t> topic_hint = std::nullopt,
                             double min_similarity = 0.1);
// Same, with trend vectors precomputed by trend_vectors().
TrendAssignment assign_trend(const std::vector<std::string>& tokens, const ReferenceTrendSet& trends,
                             const std::vector<Vector>& trend_vecs, const EmbeddingStore& store,
                             std::optional<std::size_t> topic_hint = std::nullopt, double min_similarity = 0.1);
// Mean seed-keyword embedding per trend, in flat order. Multi-word
// keywords contribute each of their words.
std::vector<Vector> trend_vectors(const ReferenceTrendSet& trends, const EmbeddingStore& store);

Vector mean_embedding(const std::vector<std::string>& words, const EmbeddingStore& store);

}  // namespace trendscope
