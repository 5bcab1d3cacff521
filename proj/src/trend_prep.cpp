#include "trendscope/trend_prep.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/random.hpp"
#include "trendscope/text.hpp"

namespace trendscope {

// ---------------------------------------------------------------------------
// RAKE

namespace {

std::vector<std::vector<std::string>> candidates_of(const std::vector<std::vector<std::string>>& sentences,
                                                    const std::set<std::string>& stopwords) {
  std::vector<std::vector<std::string>> out;
  for (const auto& sentence : sentences) {
    std::vector<std::string> run;
    for (const auto& tok : sentence) {
      if (stopwords.contains(tok)) {
        if (!run.empty()) out.push_back(std::move(run));
        run.clear();
      } else {
        run.push_back(tok);
      }
    }
    if (!run.empty()) out.push_back(std::move(run));
  }
  return out;
}

}  // namespace

std::map<std::string, double> rake_word_scores(const std::vector<std::vector<std::string>>& sentences,
                                               const std::set<std::string>& stopwords) {
  std::map<std::string, std::size_t> freq;
  std::map<std::string, std::size_t> degree;
  for (const auto& cand : candidates_of(sentences, stopwords)) {
    for (const auto& w : cand) {
      ++freq[w];
      degree[w] += cand.size();
    }
  }
  std::map<std::string, double> scores;
  for (const auto& [w, f] : freq) scores[w] = static_cast<double>(degree[w]) / static_cast<double>(f);
  return scores;
}

std::vector<RakeKeyword> rake_extract(const std::vector<std::vector<std::string>>& sentences,
                                      const std::set<std::string>& stopwords) {
  const auto scores = rake_word_scores(sentences, stopwords);
  std::map<std::vector<std::string>, double> phrases;
  for (const auto& cand : candidates_of(sentences, stopwords)) {
    double s = 0.0;
    for (const auto& w : cand) s += scores.at(w);
    phrases[cand] = s;
  }
  std::vector<RakeKeyword> out;
  for (const auto& [phrase, score] : phrases) out.push_back({phrase, score});
  std::stable_sort(out.begin(), out.end(),
                   [](const RakeKeyword& a, const RakeKeyword& b) { return a.score > b.score; });
  return out;
}

std::vector<std::vector<std::string>> rake_segments(std::string_view raw_text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> run;
  std::string word;
  auto end_word = [&] {
    if (!word.empty()) run.push_back(text::to_lower(word));
    word.clear();
  };
  for (char32_t cp : text::decode(raw_text)) {
    if (text::is_punct_or_symbol(cp)) {
      end_word();
      if (!run.empty()) out.push_back(std::move(run));
      run.clear();
    } else if (text::is_space(cp)) {
      end_word();
    } else {
      text::append_utf8(word, cp);
    }
  }
  end_word();
  if (!run.empty()) out.push_back(std::move(run));
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

std::unordered_map<std::string, Vector> load_vector_file(const std::filesystem::path& path, std::size_t& dim) {
  const auto lines = io::read_lines(path);
  if (lines.empty()) throw FormatError("empty embedding file '" + path.string() + "'", 1);
  std::size_t count = 0;
  {
    std::istringstream header(lines[0]);
    if (!(header >> count >> dim) || dim == 0) throw FormatError("header must be \"count dim\"", 1);
  }
  std::unordered_map<std::string, Vector> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::istringstream ss(lines[i]);
    std::string key;
    ss >> key;
    Vector v;
    v.reserve(dim);
    double x = 0.0;
    while (ss >> x) v.push_back(x);
    if (v.size() != dim) {
      throw FormatError("expected " + std::to_string(dim) + " values, got " + std::to_string(v.size()), i + 1);
    }
    out[key] = std::move(v);
  }
  if (out.size() != count) {
    throw FormatError("header declares " + std::to_string(count) + " vectors, found " + std::to_string(out.size()),
                      1);
  }
  return out;
}

}  // namespace

EmbeddingStore load_embeddings(const std::filesystem::path& words, const std::optional<std::filesystem::path>& ngrams,
                               std::size_t min_n, std::size_t max_n) {
  EmbeddingStore store;
  store.min_n = min_n;
  store.max_n = max_n;
  store.word_vectors = load_vector_file(words, store.dim);
  if (ngrams) {
    std::size_t ndim = 0;
    store.ngram_vectors = load_vector_file(*ngrams, ndim);
    if (ndim != store.dim) throw DimMismatch("n-gram vectors have a different dimension than word vectors");
  }
  return store;
}

std::vector<std::string> char_ngrams(std::string_view word, std::size_t min_n, std::size_t max_n) {
  std::u32string w = U"<" + text::decode(word) + U">";
  std::vector<std::string> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t n = min_n; n <= max_n && i + n <= w.size(); ++n) {
      out.push_back(text::encode(std::u32string_view(w).substr(i, n)));
    }
  }
  return out;
}

Vector embed(const EmbeddingStore& store, std::string_view word) {
  const auto it = store.word_vectors.find(std::string(word));
  if (it != store.word_vectors.end()) return it->second;
  Vector v(store.dim, 0.0);
  for (const auto& g : char_ngrams(word, store.min_n, store.max_n)) {
    const auto git = store.ngram_vectors.find(g);
    if (git == store.ngram_vectors.end()) continue;
    for (std::size_t d = 0; d < store.dim; ++d) v[d] += git->second[d];
  }
  return v;
}

bool has_embedding(const EmbeddingStore& store, std::string_view word) {
  const auto v = embed(store, word);
  return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
}

double cosine(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    throw DimMismatch("cosine of vectors with " + std::to_string(u.size()) + " and " + std::to_string(v.size()) +
                      " dimensions");
  }
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Spherical k-means

namespace {

double norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

ClusterModel kmeans_cosine(const std::map<std::string, Vector>& vectors, std::size_t k, std::uint64_t seed,
                           std::size_t max_iter, double tol) {
  if (k < 1) throw TooFewPoints("k must be at least 1");
  std::vector<std::string> names;
  std::vector<Vector> points;
  std::size_t dim = 0;
  for (const auto& [word, v] : vectors) {
    if (dim == 0) dim = v.size();
    if (v.size() != dim) throw DimMismatch("vector for '" + word + "' has the wrong dimension");
    const double n = norm(v);
    if (n == 0.0) continue;
    Vector u(v);
    for (double& x : u) x /= n;
    names.push_back(word);
    points.push_back(std::move(u));
  }
  {
    std::vector<Vector> distinct = points;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < k) {
      throw TooFewPoints("need " + std::to_string(k) + " distinct non-zero vectors, have " +
                         std::to_string(distinct.size()));
    }
  }
  const std::size_t n = points.size();

  // Farthest-point seeding from a seeded first pick.
  Rng rng(seed);
  ClusterModel model;
  model.k = k;
  model.centroids.push_back(points[uniform_index(rng, n)]);
  std::vector<double> best_sim(n, -2.0);
  while (model.centroids.size() < k) {
    const Vector& last = model.centroids.back();
    std::size_t far = 0;
    double far_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      best_sim[i] = std::max(best_sim[i], dot(points[i], last));
      const double d = 1.0 - best_sim[i];
      if (d > far_dist) {
        far_dist = d;
        far = i;
      }
    }
    model.centroids.push_back(points[far]);
  }

  std::vector<std::size_t> assign(n, 0);
  double prev = 0.0;
  for (std::size_t it = 0; it < std::max<std::size_t>(1, max_iter); ++it) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_cos = dot(points[i], model.centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double s = dot(points[i], model.centroids[c]);
        if (s > best_cos) {
          best_cos = s;
          best = c;
        }
      }
      assign[i] = best;
      obj += 1.0 - best_cos;
    }
    model.objective_history.push_back(obj);
    model.objective = obj;
    model.iterations = it + 1;
    if ((it > 0 && std::abs(prev - obj) < tol) || it + 1 >= max_iter) break;
    prev = obj;
    std::vector<Vector> sums(k, Vector(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) sums[assign[i]][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double len = norm(sums[c]);
      if (len == 0.0) continue;  // empty or cancelling cluster keeps its centroid
      for (double& x : sums[c]) x /= len;
      model.centroids[c] = std::move(sums[c]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) model.assignments[names[i]] = assign[i];
  return model;
}

// ---------------------------------------------------------------------------
// Bigrams

double BigramModel::probability(const std::string& history, const std::string& word) const {
  const auto h = unigram_counts.find(history);
  if (h == unigram_counts.end() || h->second == 0) return 0.0;
  const auto b = bigram_counts.find({history, word});
  return b == bigram_counts.end() ? 0.0 : static_cast<double>(b->second) / static_cast<double>(h->second);
}

BigramModel build_bigrams(const std::vector<std::vector<std::string>>& texts) {
  BigramModel m;
  for (const auto& t : texts) {
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      ++m.bigram_counts[{t[i], t[i + 1]}];
      ++m.unigram_counts[t[i]];
    }
  }
  return m;
}

std::vector<std::pair<std::string, std::size_t>> bigram_top_words(const std::vector<std::vector<std::string>>& texts,
                                                                  std::size_t top_n) {
  const auto m = build_bigrams(texts);
  std::map<std::string, std::size_t> weight;
  for (const auto& [pair, c] : m.bigram_counts) {
    weight[pair.first] += c;
    if (pair.second != pair.first) weight[pair.second] += c;
  }
  std::vector<std::pair<std::string, std::size_t>> out(weight.begin(), weight.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > top_n) out.resize(top_n);
  return out;
}

// ---------------------------------------------------------------------------
// Reference trends

std::size_t ReferenceTrendSet::size() const {
  std::size_t n = 0;
  for (const auto& t : topics) n += t.trends.size();
  return n;
}

std::pair<std::size_t, std::size_t> ReferenceTrendSet::locate(std::size_t flat) const {
  for (std::size_t t = 0; t < topics.size(); ++t) {
    if (flat < topics[t].trends.size()) return {t, flat};
    flat -= topics[t].trends.size();
  }
  throw std::out_of_range("trend index out of range");
}

const Trend& ReferenceTrendSet::trend(std::size_t flat) const {
  const auto [t, i] = locate(flat);
  return topics[t].trends[i];
}

const std::string& ReferenceTrendSet::topic_of(std::size_t flat) const { return topics[locate(flat).first].topic; }

ReferenceTrendSet parse_reference_trends(const std::string& json_text) {
  using ojson = nlohmann::ordered_json;
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const ojson::parse_error& e) {
    throw ShapeError(std::string("trends file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ShapeError("trends file must be an object of topics");
  ReferenceTrendSet set;
  std::map<std::string, std::string> seen_labels;
  for (const auto& [topic, list] : j.items()) {
    if (!list.is_array() || list.size() != 5) {
      throw ShapeError("topic '" + topic + "' must list exactly 5 trends");
    }
    TopicTrends tt{topic, {}};
    for (const auto& item : list) {
      if (!item.is_object() || !item.contains("label") || !item["label"].is_string()) {
        throw ShapeError("trend entries under '" + topic + "' need a string label");
      }
      Trend t;
      t.label = item["label"].get<std::string>();
      if (item.contains("keywords")) {
        for (const auto& kw : item["keywords"]) {
          if (!kw.is_string()) throw ShapeError("keywords of '" + t.label + "' must be strings");
          t.keywords.push_back(text::to_lower(kw.get<std::string>()));
        }
      }
      const std::string key = text::casefold(t.label);
      if (const auto it = seen_labels.find(key); it != seen_labels.end()) {
        set.warnings.push_back("trend label '" + t.label + "' appears under both '" + it->second + "' and '" + topic +
                               "'");
      } else {
        seen_labels.emplace(key, topic);
      }
      tt.trends.push_back(std::move(t));
    }
    set.topics.push_back(std::move(tt));
  }
  if (set.topics.size() != 5) {
    throw ShapeError("expected 5 topics, found " + std::to_string(set.topics.size()));
  }
  return set;
}

ReferenceTrendSet load_reference_trends(const std::filesystem::path& path) {
  return parse_reference_trends(io::read_file(path));
}

Vector mean_embedding(const std::vector<std::string>& words, const EmbeddingStore& store) {
  Vector v(store.dim, 0.0);
  if (words.empty()) return v;
  for (const auto& w : words) {
    const auto e = embed(store, w);
    for (std::size_t d = 0; d < store.dim; ++d) v[d] += e[d];
  }
  for (double& x : v) x /= static_cast<double>(words.size());
  return v;
}

std::vector<Vector> trend_vectors(const ReferenceTrendSet& trends, const EmbeddingStore& store) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < trends.size(); ++i) {
    std::vector<std::string> words;
    for (const auto& kw : trends.trend(i).keywords) {
      for (auto& w : text::split_whitespace(kw)) words.push_back(std::move(w));
    }
    out.push_back(mean_embedding(words, store));
  }
  return out;
}

TrendAssignment assign_trend(const std::vector<std::string>& tokens, const ReferenceTrendSet& trends,
                             const std::vector<Vector>& trend_vecs, const EmbeddingStore& store,
                             std::optional<std::size_t> topic_hint, double min_similarity) {
  TrendAssignment out;
  const Vector doc = mean_embedding(tokens, store);
  if (std::all_of(doc.begin(), doc.end(), [](double x) { return x == 0.0; })) return out;
  bool first = true;
  for (std::size_t i = 0; i < trends.size(); ++i) {
    if (topic_hint && trends.locate(i).first != *topic_hint) continue;
    const double s = cosine(doc, trend_vecs[i]);
    if (first || s > out.similarity) {
      out.trend = i;
      out.similarity = s;
      first = false;
    }
  }
  if (first) return out;  // hint named a topic with no trends
  out.assigned = true;
  out.low_confidence = out.similarity < min_similarity;
  return out;
}

TrendAssignment assign_trend(const std::vector<std::string>& tokens, const ReferenceTrendSet& trends,
                             const EmbeddingStore& store, std::optional<std::size_t> topic_hint,
                             double min_similarity) {
  return assign_trend(tokens, trends, trend_vectors(trends, store), store, topic_hint, min_similarity);
}

}  // namespace trendscope
