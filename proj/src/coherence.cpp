#include "trendscope/coherence.hpp"

#include <cmath>
#include <cstdio>

#include "trendscope/error.hpp"

namespace trendscope {

std::size_t CooccurrenceCounts::df(const std::string& w) const {
  const auto it = doc_freq.find(w);
  return it == doc_freq.end() ? 0 : it->second;
}

std::size_t CooccurrenceCounts::df(const std::string& a, const std::string& b) const {
  const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  const auto it = pair_freq.find(key);
  return it == pair_freq.end() ? 0 : it->second;
}

CooccurrenceCounts count_cooccurrence(const std::vector<std::vector<std::string>>& docs,
                                      const std::set<std::string>& vocabulary) {
  CooccurrenceCounts counts;
  counts.n_docs = docs.size();
  for (const auto& doc : docs) {
    std::set<std::string> present;
    for (const auto& tok : doc) {
      if (vocabulary.empty() || vocabulary.contains(tok)) present.insert(tok);
    }
    for (auto a = present.begin(); a != present.end(); ++a) {
      ++counts.doc_freq[*a];
      for (auto b = std::next(a); b != present.end(); ++b) ++counts.pair_freq[{*a, *b}];
    }
  }
  return counts;
}

CooccurrenceCounts count_cooccurrence(const Corpus& corpus, const std::set<std::string>& vocabulary) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) docs.push_back(d.tokens);
  return count_cooccurrence(docs, vocabulary);
}

namespace {

void check_topic(const TopicWordSet& topic, const CooccurrenceCounts& counts) {
  if (topic.words.size() < 2) throw Error("topic needs at least two words");
  for (const auto& w : topic.words) {
    if (counts.df(w) == 0) throw ZeroDocFreq("word '" + w + "' occurs in no document");
  }
}

double log_in(double x, LogBase base) { return base == LogBase::two ? std::log2(x) : std::log(x); }

}  // namespace

double umass(const TopicWordSet& topic, const CooccurrenceCounts& counts) {
  check_topic(topic, counts);
  const auto& w = topic.words;
  const std::size_t n = w.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(counts.df(w[i]));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sum += std::log((static_cast<double>(counts.df(w[i], w[j])) + 1.0) / di);
    }
  }
  return sum / static_cast<double>(n * (n - 1));
}

double pmi(const std::string& wi, const std::string& wj, const CooccurrenceCounts& counts, LogBase base,
           bool* smoothed) {
  const double di = static_cast<double>(counts.df(wi));
  const double dj = static_cast<double>(counts.df(wj));
  if (di == 0.0) throw ZeroDocFreq("word '" + wi + "' occurs in no document");
  if (dj == 0.0) throw ZeroDocFreq("word '" + wj + "' occurs in no document");
  double dij = static_cast<double>(counts.df(wi, wj));
  if (smoothed) *smoothed = dij == 0.0;
  if (dij == 0.0) dij = 1.0;
  const double n = static_cast<double>(counts.n_docs);
  // P(i,j) / (P(i) P(j)) with P = D / n.
  return log_in(dij * n / (di * dj), base);
}

CScore c_score_detail(const TopicWordSet& topic, const CooccurrenceCounts& counts, LogBase base) {
  check_topic(topic, counts);
  const auto& w = topic.words;
  const std::size_t n = w.size();
  CScore out;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool smoothed = false;
      sum += pmi(w[i], w[j], counts, base, &smoothed);
      out.smoothed_pairs += smoothed ? 1 : 0;
    }
  }
  out.value = sum / static_cast<double>(n * (n - 1));
  return out;
}

std::vector<CoherenceRow> coherence_table(const std::vector<TopicWordSet>& topics,
                                          const std::vector<std::vector<std::string>>& docs, LogBase base) {
  std::set<std::string> vocab;
  for (const auto& t : topics) vocab.insert(t.words.begin(), t.words.end());
  const auto counts = count_cooccurrence(docs, vocab);
  std::vector<CoherenceRow> rows;
  for (const auto& t : topics) {
    const auto cs = c_score_detail(t, counts, base);
    rows.push_back({t.topic_id, t.words.size(), umass(t, counts), cs.value, cs.smoothed_pairs});
  }
  return rows;
}

std::string coherence_csv(const std::vector<CoherenceRow>& rows) {
  std::string out = "topic_id,n_words,umass,c_score\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%.10g\n", r.topic_id, r.n_words, r.umass, r.c_score);
    out += buf;
  }
  return out;
}

}  // namespace trendscope
