#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library except for its plain data types; every quantity
// is recomputed from first principles so that a bug in the library cannot
// also hide in its check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Docs = std::vector<std::vector<std::string>>;

// ---------------------------------------------------------------------------
// Levenshtein over bytes (tests only feed ASCII). Full matrix, no banding.

inline int levenshtein(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> t(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) t[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) t[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1, t[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return t[n][m];
}

// Every string reachable from w by deleting up to d characters.
inline std::set<std::string> deletions(const std::string& w, int d) {
  std::set<std::string> out{w};
  std::set<std::string> frontier{w};
  for (int step = 0; step < d; ++step) {
    std::set<std::string> next;
    for (const auto& s : frontier)
      for (std::size_t i = 0; i < s.size(); ++i) next.insert(s.substr(0, i) + s.substr(i + 1));
    out.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LDA joint by enumeration.
//
// log p(w, z) up to a constant, with theta and phi integrated out:
//   sum_j [sum_k lgamma(N_kj + a) - lgamma(n_j + K a)]
// + sum_k [sum_w lgamma(N_wk + b) - lgamma(N_k + W b)]

inline double lda_log_joint(const std::vector<std::vector<int>>& words, const std::vector<std::vector<int>>& z,
                            int K, int W, double alpha, double beta) {
  double lp = 0.0;
  std::vector<std::vector<int>> nwk(W, std::vector<int>(K, 0));
  std::vector<int> nk(K, 0);
  for (std::size_t j = 0; j < words.size(); ++j) {
    std::vector<int> nkj(K, 0);
    for (std::size_t i = 0; i < words[j].size(); ++i) {
      ++nkj[z[j][i]];
      ++nwk[words[j][i]][z[j][i]];
      ++nk[z[j][i]];
    }
    for (int k = 0; k < K; ++k) lp += std::lgamma(nkj[k] + alpha);
    lp -= std::lgamma(static_cast<double>(words[j].size()) + K * alpha);
  }
  for (int k = 0; k < K; ++k) {
    for (int w = 0; w < W; ++w) lp += std::lgamma(nwk[w][k] + beta);
    lp -= std::lgamma(nk[k] + W * beta);
  }
  return lp;
}

// Exact posterior over the K^N joint assignments, indexed by the
// assignment read as a base-K number (first token = least significant).
inline std::vector<double> lda_posterior(const std::vector<std::vector<int>>& words, int K, int W, double alpha,
                                         double beta) {
  std::size_t n_tokens = 0;
  for (const auto& d : words) n_tokens += d.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n_tokens; ++i) total *= static_cast<std::size_t>(K);
  std::vector<double> logp(total);
  std::vector<std::vector<int>> z(words.size());
  for (std::size_t j = 0; j < words.size(); ++j) z[j].resize(words[j].size());
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& zj : z)
      for (auto& zi : zj) {
        zi = static_cast<int>(c % K);
        c /= K;
      }
    logp[code] = lda_log_joint(words, z, K, W, alpha, beta);
  }
  const double mx = *std::max_element(logp.begin(), logp.end());
  double s = 0.0;
  for (auto& v : logp) s += (v = std::exp(v - mx));
  for (auto& v : logp) v /= s;
  return logp;
}

// ---------------------------------------------------------------------------
// Coherence by direct document scans.

inline std::size_t docs_with(const Docs& docs, const std::string& a) {
  std::size_t n = 0;
  for (const auto& d : docs)
    if (std::find(d.begin(), d.end(), a) != d.end()) ++n;
  return n;
}

inline std::size_t docs_with(const Docs& docs, const std::string& a, const std::string& b) {
  std::size_t n = 0;
  for (const auto& d : docs)
    if (std::find(d.begin(), d.end(), a) != d.end() && std::find(d.begin(), d.end(), b) != d.end()) ++n;
  return n;
}

inline double umass(const Docs& docs, const std::vector<std::string>& words) {
  double s = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      s += std::log((docs_with(docs, words[i], words[j]) + 1.0) / static_cast<double>(docs_with(docs, words[i])));
      ++pairs;
    }
  return s / static_cast<double>(pairs);
}

inline double pmi2(const Docs& docs, const std::string& a, const std::string& b) {
  const double n = static_cast<double>(docs.size());
  double joint = static_cast<double>(docs_with(docs, a, b));
  if (joint == 0.0) joint = 1.0;
  return std::log2((joint / n) / ((docs_with(docs, a) / n) * (docs_with(docs, b) / n)));
}

inline double c_score(const Docs& docs, const std::vector<std::string>& words) {
  double s = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      s += pmi2(docs, words[i], words[j]);
      ++pairs;
    }
  return s / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// RAKE by brute force: candidates are maximal runs without stopwords.

inline std::map<std::string, double> rake_scores(const Docs& sentences, const std::set<std::string>& stop) {
  std::vector<std::vector<std::string>> cands;
  for (const auto& s : sentences) {
    std::vector<std::string> cur;
    for (const auto& w : s) {
      if (stop.count(w)) {
        if (!cur.empty()) cands.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(w);
      }
    }
    if (!cur.empty()) cands.push_back(cur);
  }
  std::map<std::string, double> deg, freq;
  for (const auto& c : cands)
    for (const auto& w : c) {
      deg[w] += static_cast<double>(c.size());
      freq[w] += 1.0;
    }
  std::map<std::string, double> out;
  for (const auto& [w, d] : deg) out[w] = d / freq[w];
  return out;
}

// ---------------------------------------------------------------------------
// Time-series generators. Gaussian shocks from std::normal_distribution so
// they share no code with the library's own variates.

// X_t - mu = sum phi_i (X_{t-i} - mu) + e_t + sum theta_j e_{t-j}
inline std::vector<double> simulate_arma(const std::vector<double>& phi, const std::vector<double>& theta, double mu,
                                         double sigma, std::size_t n, std::uint64_t seed, std::size_t burn = 500) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  std::vector<double> x(n + burn, 0.0), e(n + burn, 0.0);
  for (std::size_t t = 0; t < n + burn; ++t) {
    e[t] = nd(rng);
    double v = e[t];
    for (std::size_t i = 0; i < phi.size(); ++i)
      if (t > i) v += phi[i] * x[t - 1 - i];
    for (std::size_t j = 0; j < theta.size(); ++j)
      if (t > j) v += theta[j] * e[t - 1 - j];
    x[t] = v;
  }
  std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end());
  for (auto& v : out) v += mu;
  return out;
}

// ARMA on the d-times differenced scale, integrated d times from zero.
inline std::vector<double> simulate_arima(const std::vector<double>& phi, int d, const std::vector<double>& theta,
                                          double sigma, std::size_t n, std::uint64_t seed) {
  std::vector<double> x = simulate_arma(phi, theta, 0.0, sigma, n, seed);
  for (int k = 0; k < d; ++k) {
    double acc = 0.0;
    for (auto& v : x) v = (acc += v);
  }
  return x;
}

// Smallest root modulus of 1 + a z + b z^2 by the quadratic formula
// (b == 0 degrades to the linear root; no roots gives +inf).
inline double min_root_modulus_deg2(double a, double b) {
  if (b == 0.0) return a == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(a);
  const double disc = a * a - 4.0 * b;
  if (disc >= 0.0) {
    const double r1 = (-a + std::sqrt(disc)) / (2.0 * b), r2 = (-a - std::sqrt(disc)) / (2.0 * b);
    return std::min(std::abs(r1), std::abs(r2));
  }
  // Complex pair: |r|^2 = c/a for a z^2 + ... + c, i.e. 1/b here.
  return std::sqrt(1.0 / b);
}

// ---------------------------------------------------------------------------
// Synthetic corpus from three well-separated topics over W = 50 words.
//
// Topic k puts 0.98 of its mass on its own ten core words (k*10 .. k*10+9,
// weights 20..11 so the top ten are unambiguous) and spreads the rest over
// the other 40 words. Documents mix topics by Dirichlet(0.1) and hold 40..80
// tokens.

struct SyntheticCorpus {
  std::vector<std::string> vocab;           // "w00" .. "w49"
  std::vector<std::vector<std::string>> docs;
  std::vector<std::vector<std::string>> true_top10;
};

inline SyntheticCorpus three_topic_corpus(std::uint64_t seed, std::size_t n_docs = 500) {
  constexpr int W = 50, K = 3;
  SyntheticCorpus out;
  for (int w = 0; w < W; ++w) out.vocab.push_back((w < 10 ? "w0" : "w") + std::to_string(w));
  std::vector<std::vector<double>> phi(K, std::vector<double>(W, 0.0));
  for (int k = 0; k < K; ++k) {
    double core = 0.0;
    for (int i = 0; i < 10; ++i) core += 20 - i;
    for (int w = 0; w < W; ++w) {
      const bool own = w >= k * 10 && w < k * 10 + 10;
      phi[k][w] = own ? 0.98 * (20 - (w - k * 10)) / core : 0.02 / 40.0;
    }
    std::vector<std::string> top;
    for (int i = 0; i < 10; ++i) top.push_back(out.vocab[k * 10 + i]);
    out.true_top10.push_back(top);
  }
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> ga(0.1, 1.0);
  std::uniform_int_distribution<int> len(40, 80);
  for (std::size_t j = 0; j < n_docs; ++j) {
    std::vector<double> th(K);
    double s = 0.0;
    for (auto& t : th) s += (t = ga(rng) + 1e-12);
    for (auto& t : th) t /= s;
    std::discrete_distribution<int> pick_topic(th.begin(), th.end());
    std::vector<std::string> doc;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const int k = pick_topic(rng);
      std::discrete_distribution<int> pick_word(phi[k].begin(), phi[k].end());
      doc.push_back(out.vocab[pick_word(rng)]);
    }
    out.docs.push_back(std::move(doc));
  }
  return out;
}

// Greedy one-to-one alignment of estimated top-word lists to the true
// ones by overlap; returns the overlap of each true topic with its match.
inline std::vector<std::size_t> aligned_overlaps(const std::vector<std::vector<std::string>>& truth,
                                                 const std::vector<std::vector<std::string>>& est) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> cells;  // overlap, true, est
  for (std::size_t a = 0; a < truth.size(); ++a)
    for (std::size_t b = 0; b < est.size(); ++b) {
      std::size_t ov = 0;
      for (const auto& w : truth[a])
        if (std::find(est[b].begin(), est[b].end(), w) != est[b].end()) ++ov;
      cells.emplace_back(ov, a, b);
    }
  std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::make_pair(std::get<1>(x), std::get<2>(x)) < std::make_pair(std::get<1>(y), std::get<2>(y));
  });
  std::vector<std::size_t> result(truth.size(), 0);
  std::vector<bool> used_a(truth.size(), false), used_b(est.size(), false);
  for (const auto& [ov, a, b] : cells) {
    if (used_a[a] || used_b[b]) continue;
    used_a[a] = used_b[b] = true;
    result[a] = ov;
  }
  return result;
}

}  // namespace oracle
