#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trendscope/corpus_io.hpp"

namespace trendscope {

// Document frequencies and pairwise co-document frequencies with set
// semantics per document.
struct CooccurrenceCounts {
  std::size_t n_docs = 0;
  std::map<std::string, std::size_t> doc_freq;
  // Key is the lexicographically ordered pair.
  std::map<std::pair<std::string, std::string>, std::size_t> pair_freq;

  std::size_t df(const std::string& w) const;
  std::size_t df(const std::string& a, const std::string& b) const;
};

struct TopicWordSet {
  std::size_t topic_id = 0;
  std::vector<std::string> words;  // N >= 2, distinct
};

// Counts restricted to `vocabulary`; an empty vocabulary counts every word
// (pairs are then only built among words appearing together).
CooccurrenceCounts count_cooccurrence(const std::vector<std::vector<std::string>>& docs,
                                      const std::set<std::string>& vocabulary);
CooccurrenceCounts count_cooccurrence(const Corpus& corpus, const std::set<std::string>& vocabulary);

enum class LogBase { two, natural };

// Mean over ordered pairs i != j of ln((D(wi,wj) + 1) / D(wi)).
// Throws ZeroDocFreq if a word never occurs.
double umass(const TopicWordSet& topic, const CooccurrenceCounts& counts);

// log(P(i,j) / (P(i) P(j))) with document-frequency probabilities. A zero
// joint count is replaced by 1; `smoothed` reports when that happened.
double pmi(const std::string& wi, const std::string& wj, const CooccurrenceCounts& counts,
           LogBase base = LogBase::two, bool* smoothed = nullptr);

struct CScore {
  double value = 0.0;
  std::size_t smoothed_pairs = 0;  // ordered pairs that hit zero-joint smoothing
};

CScore c_score_detail(const TopicWordSet& topic, const CooccurrenceCounts& counts, LogBase base = LogBase::two);
inline double c_score(const TopicWordSet& topic, const CooccurrenceCounts& counts, LogBase base = LogBase::two) {
  return c_score_detail(topic, counts, base).value;
}

struct CoherenceRow {
  std::size_t topic_id = 0;
  std::size_t n_words = 0;
  double umass = 0.0;
  double c_score = 0.0;
  std::size_t smoothed_pairs = 0;
};

std::vector<CoherenceRow> coherence_table(const std::vector<TopicWordSet>& topics,
                                          const std::vector<std::vector<std::string>>& docs,
                                          LogBase base = LogBase::two);
// topic_id,n_words,umass,c_score
std::string coherence_csv(const std::vector<CoherenceRow>& rows);

}  // namespace trendscope
