#include "trendscope/topic_models.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <sstream>

#include "trendscope/error.hpp"

namespace trendscope {

using json = nlohmann::json;

std::size_t DocTermMatrix::doc_length(std::size_t j) const {
  std::size_t n = 0;
  for (const auto& [w, c] : rows[j]) n += c;
  return n;
}

std::optional<std::uint32_t> DocTermMatrix::word_id(const std::string& word) const {
  const auto it = std::lower_bound(vocab.begin(), vocab.end(), word);
  if (it == vocab.end() || *it != word) return std::nullopt;
  return static_cast<std::uint32_t>(it - vocab.begin());
}

std::vector<std::vector<std::uint32_t>> DocTermMatrix::token_ids() const {
  std::vector<std::vector<std::uint32_t>> out(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (const auto& [w, c] : rows[j]) out[j].insert(out[j].end(), c, w);
  }
  return out;
}

DocTermMatrix build_dtm(const std::vector<std::vector<std::string>>& docs) {
  DocTermMatrix dtm;
  for (const auto& d : docs) dtm.vocab.insert(dtm.vocab.end(), d.begin(), d.end());
  std::sort(dtm.vocab.begin(), dtm.vocab.end());
  dtm.vocab.erase(std::unique(dtm.vocab.begin(), dtm.vocab.end()), dtm.vocab.end());
  if (dtm.vocab.empty()) throw EmptyCorpus("corpus has no tokens");
  dtm.rows.resize(docs.size());
  for (std::size_t j = 0; j < docs.size(); ++j) {
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& tok : docs[j]) ++counts[*dtm.word_id(tok)];
    dtm.rows[j].assign(counts.begin(), counts.end());
    dtm.total_tokens += docs[j].size();
  }
  return dtm;
}

DocTermMatrix build_dtm(const Corpus& corpus) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) docs.push_back(d.tokens);
  return build_dtm(docs);
}

// ---------------------------------------------------------------------------

void TopicAssignments::recount() {
  const std::size_t K = n_topics;
  n_wk.assign(n_words * K, 0);
  n_jk.assign(words.size() * K, 0);
  n_k.assign(K, 0);
  for (std::size_t j = 0; j < words.size(); ++j) {
    for (std::size_t i = 0; i < words[j].size(); ++i) {
      const std::size_t k = z[j][i];
      ++n_wk[words[j][i] * K + k];
      ++n_jk[j * K + k];
      ++n_k[k];
    }
  }
}

bool TopicAssignments::counts_consistent() const {
  if (z.size() != words.size()) return false;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j].size() != words[j].size()) return false;
    for (auto k : z[j]) {
      if (k >= n_topics) return false;
    }
  }
  TopicAssignments fresh = *this;
  fresh.recount();
  return fresh.n_wk == n_wk && fresh.n_jk == n_jk && fresh.n_k == n_k;
}

namespace {

void init_assignments(TopicAssignments& s, const DocTermMatrix& dtm, std::size_t K, Rng& rng) {
  s.n_topics = K;
  s.n_words = dtm.n_words();
  s.words = dtm.token_ids();
  s.z.resize(s.words.size());
  for (std::size_t j = 0; j < s.words.size(); ++j) {
    s.z[j].resize(s.words[j].size());
    for (auto& k : s.z[j]) k = static_cast<std::uint32_t>(uniform_index(rng, K));
  }
  s.recount();
}

inline void remove_token(TopicAssignments& s, std::size_t j, std::uint32_t w, std::size_t k) {
  const std::size_t K = s.n_topics;
  --s.n_wk[w * K + k];
  --s.n_jk[j * K + k];
  --s.n_k[k];
}

inline void add_token(TopicAssignments& s, std::size_t j, std::uint32_t w, std::size_t k) {
  const std::size_t K = s.n_topics;
  ++s.n_wk[w * K + k];
  ++s.n_jk[j * K + k];
  ++s.n_k[k];
}

// Unnormalized weights (n_jk + prior_k)(n_wk + beta)/(n_k + W beta); returns the sum.
double fill_weights(const TopicAssignments& s, std::size_t j, std::uint32_t w, double beta,
                    const std::function<double(std::size_t)>& prior, std::vector<double>& p) {
  const std::size_t K = s.n_topics;
  const double wbeta = static_cast<double>(s.n_words) * beta;
  const std::int32_t* nw = &s.n_wk[w * K];
  const std::int32_t* nj = &s.n_jk[j * K];
  p.resize(K);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    p[k] = (nj[k] + prior(k)) * (nw[k] + beta) / (s.n_k[k] + wbeta);
    total += p[k];
  }
  return total;
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw BadHyperparameter(std::string(name) + " must be positive, got " + std::to_string(v));
  }
}

}  // namespace

LdaState lda_init(const DocTermMatrix& dtm, std::size_t K, double alpha, double beta, std::uint64_t seed) {
  if (K < 1) throw BadHyperparameter("K must be at least 1");
  check_positive(alpha, "alpha");
  check_positive(beta, "beta");
  LdaState s;
  s.alpha = alpha;
  s.beta = beta;
  s.seed = seed;
  s.rng.seed(seed);
  init_assignments(s, dtm, K, s.rng);
  return s;
}

std::vector<double> lda_conditional(const LdaState& state, std::size_t j, std::uint32_t w) {
  std::vector<double> p;
  const double alpha = state.alpha;
  const double total = fill_weights(state, j, w, state.beta, [alpha](std::size_t) { return alpha; }, p);
  for (double& x : p) x /= total;
  return p;
}

void lda_sweep(LdaState& s) {
  const std::size_t K = s.n_topics;
  if (K == 1) return;
  const double wbeta = static_cast<double>(s.n_words) * s.beta;
  std::vector<double> p(K);
  for (std::size_t j = 0; j < s.words.size(); ++j) {
    std::int32_t* nj = &s.n_jk[j * K];
    for (std::size_t i = 0; i < s.words[j].size(); ++i) {
      const std::uint32_t w = s.words[j][i];
      remove_token(s, j, w, s.z[j][i]);
      const std::int32_t* nw = &s.n_wk[w * K];
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        p[k] = (nj[k] + s.alpha) * (nw[k] + s.beta) / (s.n_k[k] + wbeta);
        total += p[k];
      }
      const auto k = sample_discrete(s.rng, p, total);
      s.z[j][i] = static_cast<std::uint32_t>(k);
      add_token(s, j, w, k);
    }
  }
}

namespace {

Matrix phi_of(const TopicAssignments& s, double beta) {
  Matrix phi(s.n_topics, s.n_words);
  const double wbeta = static_cast<double>(s.n_words) * beta;
  for (std::size_t k = 0; k < s.n_topics; ++k) {
    for (std::size_t w = 0; w < s.n_words; ++w) phi(k, w) = (s.nwk(w, k) + beta) / (s.n_k[k] + wbeta);
  }
  return phi;
}

}  // namespace

TopicEstimates estimate(const LdaState& s) {
  TopicEstimates est{phi_of(s, s.beta), Matrix(s.n_docs(), s.n_topics)};
  const double kalpha = static_cast<double>(s.n_topics) * s.alpha;
  for (std::size_t j = 0; j < s.n_docs(); ++j) {
    const double len = static_cast<double>(s.words[j].size());
    for (std::size_t k = 0; k < s.n_topics; ++k) est.theta(j, k) = (s.nkj(k, j) + s.alpha) / (len + kalpha);
  }
  return est;
}

// ---------------------------------------------------------------------------

HdpState hdp_init(const DocTermMatrix& dtm, std::size_t k_max, double gamma, double eta, double beta,
                  std::uint64_t seed) {
  if (k_max < 1) throw BadHyperparameter("K_max must be at least 1");
  check_positive(gamma, "gamma");
  check_positive(eta, "eta");
  check_positive(beta, "beta");
  HdpState s;
  s.gamma = gamma;
  s.eta = eta;
  s.beta = beta;
  s.seed = seed;
  s.rng.seed(seed);
  const std::vector<double> conc(k_max, gamma / static_cast<double>(k_max));
  s.top_level_weights = dirichlet(s.rng, conc);
  init_assignments(s, dtm, k_max, s.rng);
  return s;
}

std::vector<double> hdp_conditional(const HdpState& s, std::size_t j, std::uint32_t w) {
  std::vector<double> p;
  const double total =
      fill_weights(s, j, w, s.beta, [&s](std::size_t k) { return s.eta * s.top_level_weights[k]; }, p);
  for (double& x : p) x /= total;
  return p;
}

void hdp_sweep(HdpState& s) {
  const std::size_t K = s.n_topics;
  if (K == 1) return;
  const double wbeta = static_cast<double>(s.n_words) * s.beta;
  std::vector<double> prior(K);
  for (std::size_t k = 0; k < K; ++k) prior[k] = s.eta * s.top_level_weights[k];
  std::vector<double> p(K);
  for (std::size_t j = 0; j < s.words.size(); ++j) {
    std::int32_t* nj = &s.n_jk[j * K];
    for (std::size_t i = 0; i < s.words[j].size(); ++i) {
      const std::uint32_t w = s.words[j][i];
      remove_token(s, j, w, s.z[j][i]);
      const std::int32_t* nw = &s.n_wk[w * K];
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        p[k] = (nj[k] + prior[k]) * (nw[k] + s.beta) / (s.n_k[k] + wbeta);
        total += p[k];
      }
      const auto k = sample_discrete(s.rng, p, total);
      s.z[j][i] = static_cast<std::uint32_t>(k);
      add_token(s, j, w, k);
    }
  }
  // Table counts via the Antoniak draw: a customer joining a restaurant
  // with i seated customers opens a table w.p. prior / (prior + i).
  std::vector<double> conc(K, s.gamma / static_cast<double>(K));
  for (std::size_t j = 0; j < s.words.size(); ++j) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::int32_t n = s.nkj(k, j);
      for (std::int32_t i = 0; i < n; ++i) {
        if (uniform01(s.rng) * (prior[k] + i) < prior[k]) conc[k] += 1.0;
      }
    }
  }
  s.top_level_weights = dirichlet(s.rng, conc);
}

TopicEstimates estimate(const HdpState& s) {
  TopicEstimates est{phi_of(s, s.beta), Matrix(s.n_docs(), s.n_topics)};
  for (std::size_t j = 0; j < s.n_docs(); ++j) {
    const double len = static_cast<double>(s.words[j].size());
    for (std::size_t k = 0; k < s.n_topics; ++k) {
      est.theta(j, k) = (s.nkj(k, j) + s.eta * s.top_level_weights[k]) / (len + s.eta);
    }
  }
  return est;
}

std::size_t active_topics(const TopicAssignments& s, double threshold) {
  const double total = std::accumulate(s.n_k.begin(), s.n_k.end(), 0.0);
  if (total == 0.0) return 0;
  std::size_t n = 0;
  for (auto c : s.n_k) n += (c / total >= threshold) ? 1 : 0;
  return n;
}

double perplexity(const TopicEstimates& est, const DocTermMatrix& dtm) {
  if (est.phi.cols != dtm.n_words()) {
    throw VocabMismatch("phi covers " + std::to_string(est.phi.cols) + " words, matrix has " +
                        std::to_string(dtm.n_words()));
  }
  if (est.theta.rows != dtm.n_docs() || est.theta.cols != est.phi.rows) {
    throw VocabMismatch("theta shape does not match the document-term matrix");
  }
  if (dtm.total_tokens == 0) throw EmptyCorpus("no tokens to score");
  double loglik = 0.0;
  for (std::size_t j = 0; j < dtm.n_docs(); ++j) {
    for (const auto& [w, c] : dtm.rows[j]) {
      double p = 0.0;
      for (std::size_t k = 0; k < est.phi.rows; ++k) p += est.theta(j, k) * est.phi(k, w);
      loglik += c * std::log(p);
    }
  }
  return std::exp(-loglik / static_cast<double>(dtm.total_tokens));
}

namespace {

template <typename State, typename Sweep>
TopicEstimates averaged_estimates(State& state, Sweep sweep, GibbsSchedule schedule) {
  for (std::size_t it = 0; it < schedule.burn_in; ++it) sweep(state);
  if (schedule.samples == 0) return estimate(state);
  TopicEstimates acc = estimate(state);
  std::fill(acc.phi.data.begin(), acc.phi.data.end(), 0.0);
  std::fill(acc.theta.data.begin(), acc.theta.data.end(), 0.0);
  for (std::size_t it = 0; it < schedule.samples; ++it) {
    sweep(state);
    const auto est = estimate(state);
    for (std::size_t i = 0; i < acc.phi.data.size(); ++i) acc.phi.data[i] += est.phi.data[i];
    for (std::size_t i = 0; i < acc.theta.data.size(); ++i) acc.theta.data[i] += est.theta.data[i];
  }
  const double n = static_cast<double>(schedule.samples);
  for (double& x : acc.phi.data) x /= n;
  for (double& x : acc.theta.data) x /= n;
  return acc;
}

}  // namespace

LdaFit fit_lda(const DocTermMatrix& dtm, std::size_t K, double alpha, double beta, std::uint64_t seed,
               GibbsSchedule schedule) {
  LdaFit fit{lda_init(dtm, K, alpha, beta, seed), {}};
  fit.estimates = averaged_estimates(fit.state, [](LdaState& s) { lda_sweep(s); }, schedule);
  return fit;
}

HdpFit fit_hdp(const DocTermMatrix& dtm, std::size_t k_max, double gamma, double eta, double beta,
               std::uint64_t seed, GibbsSchedule schedule) {
  HdpFit fit{hdp_init(dtm, k_max, gamma, eta, beta, seed), {}};
  fit.estimates = averaged_estimates(fit.state, [](HdpState& s) { hdp_sweep(s); }, schedule);
  return fit;
}

std::vector<std::pair<std::string, double>> top_words(const TopicEstimates& est, const std::vector<std::string>& vocab,
                                                      std::size_t k, std::size_t n) {
  std::vector<std::size_t> idx(est.phi.cols);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (est.phi(k, a) != est.phi(k, b)) return est.phi(k, a) > est.phi(k, b);
    return vocab[a] < vocab[b];
  });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < std::min(n, idx.size()); ++i) out.emplace_back(vocab[idx[i]], est.phi(k, idx[i]));
  return out;
}

std::vector<std::size_t> argmax_topics(const TopicEstimates& est) {
  std::vector<std::size_t> out(est.theta.rows, 0);
  for (std::size_t j = 0; j < est.theta.rows; ++j) {
    for (std::size_t k = 1; k < est.theta.cols; ++k) {
      if (est.theta(j, k) > est.theta(j, out[j])) out[j] = k;
    }
  }
  return out;
}

std::vector<TopicSummary> summarize_topics(const TopicEstimates& est, const DocTermMatrix& dtm, std::size_t top_n) {
  const auto argmax = argmax_topics(est);
  std::vector<TopicSummary> out;
  for (std::size_t k = 0; k < est.phi.rows; ++k) {
    TopicSummary s;
    s.topic = k;
    s.top_words = top_words(est, dtm.vocab, k, top_n);
    std::vector<std::uint32_t> ids;
    for (const auto& [word, p] : s.top_words) ids.push_back(*dtm.word_id(word));
    double sum = 0.0;
    std::size_t terms = 0;
    std::size_t allocated = 0;
    for (std::size_t j = 0; j < dtm.n_docs(); ++j) {
      if (argmax[j] == k) ++allocated;
      const double len = static_cast<double>(dtm.doc_length(j));
      if (len == 0.0) continue;
      for (auto id : ids) {
        const auto it = std::lower_bound(dtm.rows[j].begin(), dtm.rows[j].end(), std::make_pair(id, 0u));
        const double c = (it != dtm.rows[j].end() && it->first == id) ? it->second : 0.0;
        sum += c / len;
        ++terms;
      }
    }
    s.average_word_frequency = terms ? sum / static_cast<double>(terms) : 0.0;
    s.document_allocation = dtm.n_docs() ? static_cast<double>(allocated) / static_cast<double>(dtm.n_docs()) : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------

SearchSpec SearchSpec::tuning_table_grid(TopicModelKind kind) {
  SearchSpec spec;
  spec.model = kind;
  if (kind == TopicModelKind::lda) {
    spec.alpha_grid = {0.01, 0.025, 0.03, 0.04, 0.05, 0.06, 0.075, 0.1};
    spec.beta_grid = {0.01, 0.025, 0.03, 0.04, 0.05, 0.06, 0.075, 0.1};
    spec.gamma_grid = {1.0};
  } else {
    spec.k_grid = {50};
    spec.alpha_grid = {0.1, 0.2, 0.3, 0.5};
    spec.beta_grid = {0.0005, 0.001, 0.005, 0.01};
    spec.gamma_grid = {5.0, 10.0};
  }
  return spec;
}

std::vector<ModelConfig> search_candidates(const SearchSpec& spec) {
  const std::vector<double> no_gamma{1.0};
  const auto& gammas = spec.model == TopicModelKind::lda ? no_gamma : spec.gamma_grid;
  if (spec.k_grid.empty() || spec.alpha_grid.empty() || spec.beta_grid.empty() || gammas.empty()) {
    throw EmptyGrid("every search dimension needs at least one value");
  }
  for (auto k : spec.k_grid) {
    if (k < 1) throw BadHyperparameter("grid K values must be >= 1");
  }
  for (const auto* grid : {&spec.alpha_grid, &spec.beta_grid, &gammas}) {
    for (double v : *grid) check_positive(v, "grid value");
  }
  std::vector<ModelConfig> all;
  for (auto k : spec.k_grid) {
    for (double a : spec.alpha_grid) {
      for (double b : spec.beta_grid) {
        for (double g : gammas) all.push_back({spec.model, k, a, b, g});
      }
    }
  }
  if (spec.strategy == SearchStrategy::grid) return all;
  if (spec.n_random_draws < 1) throw EmptyGrid("random search needs at least one draw");
  // Draws without replacement from the product.
  Rng rng(derive_seed(spec.seed, "random-search"));
  const std::size_t n = std::min(spec.n_random_draws, all.size());
  for (std::size_t i = 0; i < n; ++i) std::swap(all[i], all[i + uniform_index(rng, all.size() - i)]);
  all.resize(n);
  return all;
}

std::vector<SearchResult> hyperparameter_search(const DocTermMatrix& dtm, const SearchSpec& spec,
                                                const CoherenceFn& coherence_fn) {
  const auto candidates = search_candidates(spec);
  // Seeds follow the config's position in the full grid order.
  SearchSpec grid_spec = spec;
  grid_spec.strategy = SearchStrategy::grid;
  const auto grid = search_candidates(grid_spec);
  auto evaluate = [&](const ModelConfig& cfg) {
    const auto pos = static_cast<std::uint64_t>(std::find(grid.begin(), grid.end(), cfg) - grid.begin());
    const std::uint64_t seed = derive_seed(spec.seed, pos);
    TopicEstimates est;
    if (cfg.kind == TopicModelKind::lda) {
      est = fit_lda(dtm, cfg.k, cfg.alpha, cfg.beta, seed, spec.schedule).estimates;
    } else {
      est = fit_hdp(dtm, cfg.k, cfg.gamma, cfg.alpha, cfg.beta, seed, spec.schedule).estimates;
    }
    SearchResult r{cfg, perplexity(est, dtm), 0.0};
    r.coherence = coherence_fn ? coherence_fn(est, dtm) : 0.0;
    return r;
  };

  std::vector<SearchResult> results(candidates.size());
  const std::size_t par = std::max<std::size_t>(1, spec.max_parallel);
  for (std::size_t start = 0; start < candidates.size(); start += par) {
    const std::size_t end = std::min(candidates.size(), start + par);
    std::vector<std::future<SearchResult>> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(par == 1 ? std::launch::deferred : std::launch::async,
                                 [&, i] { return evaluate(candidates[i]); }));
    }
    for (std::size_t i = start; i < end; ++i) results[i] = batch[i - start].get();
  }
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = results[a];
    const auto& y = results[b];
    if (spec.scoring == SearchScoring::coherence) {
      if (x.coherence != y.coherence) return x.coherence > y.coherence;
      return x.perplexity < y.perplexity;
    }
    if (x.perplexity != y.perplexity) return x.perplexity < y.perplexity;
    return x.coherence > y.coherence;
  });
  std::vector<SearchResult> ranked;
  for (auto i : order) ranked.push_back(results[i]);
  return ranked;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kStateVersion = 1;

json assignments_json(const TopicAssignments& s) {
  return json{{"n_topics", s.n_topics}, {"n_words", s.n_words}, {"words", s.words}, {"z", s.z},
              {"n_wk", s.n_wk},         {"n_jk", s.n_jk},       {"n_k", s.n_k}};
}

void read_assignments(const json& j, TopicAssignments& s) {
  s.n_topics = j.at("n_topics").get<std::size_t>();
  s.n_words = j.at("n_words").get<std::size_t>();
  s.words = j.at("words").get<std::vector<std::vector<std::uint32_t>>>();
  s.z = j.at("z").get<std::vector<std::vector<std::uint32_t>>>();
  s.n_wk = j.at("n_wk").get<std::vector<std::int32_t>>();
  s.n_jk = j.at("n_jk").get<std::vector<std::int32_t>>();
  s.n_k = j.at("n_k").get<std::vector<std::int32_t>>();
  for (const auto& doc : s.words) {
    for (auto w : doc) {
      if (w >= s.n_words) throw Error("model state: word id out of range");
    }
  }
  if (s.n_wk.size() != s.n_words * s.n_topics || s.n_jk.size() != s.words.size() * s.n_topics ||
      s.n_k.size() != s.n_topics || !s.counts_consistent()) {
    throw Error("model state: counts do not match assignments");
  }
}

std::string rng_state(const Rng& rng) {
  std::ostringstream ss;
  ss << rng;
  return ss.str();
}

void restore_rng(const json& j, Rng& rng) {
  std::istringstream ss(j.at("rng").get<std::string>());
  ss >> rng;
  if (!ss) throw Error("model state: bad rng state");
}

json parse_state(const std::string& text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("model state: ") + e.what());
  }
  if (j.value("format", "") != std::string("trendscope-") + kind) throw Error("model state: wrong format tag");
  if (j.value("version", 0) != kStateVersion) throw Error("model state: unsupported version");
  return j;
}

}  // namespace

std::string serialize(const LdaState& s) {
  json j = assignments_json(s);
  j["format"] = "trendscope-lda";
  j["version"] = kStateVersion;
  j["alpha"] = s.alpha;
  j["beta"] = s.beta;
  j["seed"] = s.seed;
  j["rng"] = rng_state(s.rng);
  return j.dump();
}

LdaState deserialize_lda(const std::string& text) {
  const json j = parse_state(text, "lda");
  LdaState s;
  try {
    read_assignments(j, s);
    s.alpha = j.at("alpha").get<double>();
    s.beta = j.at("beta").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    restore_rng(j, s.rng);
  } catch (const json::exception& e) {
    throw Error(std::string("model state: ") + e.what());
  }
  return s;
}

std::string serialize(const HdpState& s) {
  json j = assignments_json(s);
  j["format"] = "trendscope-hdp";
  j["version"] = kStateVersion;
  j["gamma"] = s.gamma;
  j["eta"] = s.eta;
  j["beta"] = s.beta;
  j["top_level_weights"] = s.top_level_weights;
  j["seed"] = s.seed;
  j["rng"] = rng_state(s.rng);
  return j.dump();
}

HdpState deserialize_hdp(const std::string& text) {
  const json j = parse_state(text, "hdp");
  HdpState s;
  try {
    read_assignments(j, s);
    s.gamma = j.at("gamma").get<double>();
    s.eta = j.at("eta").get<double>();
    s.beta = j.at("beta").get<double>();
    s.top_level_weights = j.at("top_level_weights").get<std::vector<double>>();
    s.seed = j.at("seed").get<std::uint64_t>();
    restore_rng(j, s.rng);
  } catch (const json::exception& e) {
    throw Error(std::string("model state: ") + e.what());
  }
  if (s.top_level_weights.size() != s.n_topics) throw Error("model state: weight vector size mismatch");
  return s;
}

}  // namespace trendscope
