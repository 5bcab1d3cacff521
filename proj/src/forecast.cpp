#include "trendscope/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/random.hpp"

namespace trendscope {

// ---------------------------------------------------------------------------
// Time axis

std::size_t default_window(std::size_t n_docs) { return std::max<std::size_t>(1, (n_docs + 499) / 500); }

std::size_t timestamp_count(std::size_t n_docs, std::size_t window) {
  if (window == 0) throw BadWindow("window must be positive");
  std::size_t t = n_docs / window;
  const std::size_t rem = n_docs % window;
  if (rem > 0 && 2 * rem >= window) ++t;
  if (t == 0) throw EmptyWindow("no timestamp holds enough documents");
  return t;
}

namespace {

std::string series_name(const std::vector<std::string>& names, std::size_t i, const char* prefix) {
  if (i < names.size()) return names[i];
  return prefix + std::to_string(i);
}

}  // namespace

std::vector<TimeSeries> build_topic_series(const std::vector<std::size_t>& labels, std::size_t n_topics,
                                           std::size_t window, const std::vector<std::string>& names) {
  const std::size_t n_t = timestamp_count(labels.size(), window);
  std::vector<TimeSeries> out(n_topics);
  for (std::size_t k = 0; k < n_topics; ++k) {
    out[k].label = series_name(names, k, "topic_");
    out[k].values.assign(n_t, 0.0);
  }
  for (std::size_t t = 0; t < n_t; ++t) {
    const std::size_t lo = t * window;
    const std::size_t hi = std::min(labels.size(), lo + window);
    for (std::size_t j = lo; j < hi; ++j) {
      if (labels[j] >= n_topics) throw ShapeError("topic label out of range");
      out[labels[j]].values[t] += 1.0;
    }
    const double n = static_cast<double>(hi - lo);
    for (auto& s : out) s.values[t] /= n;
  }
  return out;
}

std::vector<TimeSeries> build_topic_series(const TopicEstimates& estimates, std::size_t window,
                                           const std::vector<std::string>& names) {
  return build_topic_series(argmax_topics(estimates), estimates.theta.cols, window, names);
}

std::vector<TimeSeries> build_trend_series(const std::vector<std::optional<std::size_t>>& assignments,
                                           std::size_t n_trends, std::size_t window,
                                           const std::vector<std::string>& names) {
  const std::size_t n_t = timestamp_count(assignments.size(), window);
  std::vector<TimeSeries> out(n_trends);
  for (std::size_t k = 0; k < n_trends; ++k) {
    out[k].label = series_name(names, k, "trend_");
    out[k].values.assign(n_t, 0.0);
  }
  for (std::size_t t = 0; t < n_t; ++t) {
    const std::size_t lo = t * window;
    const std::size_t hi = std::min(assignments.size(), lo + window);
    std::size_t assigned = 0;
    for (std::size_t j = lo; j < hi; ++j) {
      if (!assignments[j]) continue;
      if (*assignments[j] >= n_trends) throw ShapeError("trend index out of range");
      out[*assignments[j]].values[t] += 1.0;
      ++assigned;
    }
    if (assigned == 0) continue;
    for (auto& s : out) s.values[t] /= static_cast<double>(assigned);
  }
  return out;
}

TimeSeries truncate(const TimeSeries& series, std::size_t max_len) {
  TimeSeries out{series.label, series.values};
  if (out.values.size() > max_len) out.values.resize(max_len);
  return out;
}

TimeSeries moving_average(const TimeSeries& series, std::size_t w) {
  if (w == 0 || w > series.size()) throw BadWindow("moving-average window must be in [1, series length]");
  TimeSeries out{series.label, {}};
  out.values.reserve(series.size() - w + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    sum += series.values[i];
    if (i >= w) sum -= series.values[i - w];
    if (i + 1 >= w) out.values.push_back(sum / static_cast<double>(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Differencing and correlation

std::vector<double> difference(std::span<const double> x, std::size_t d) {
  if (x.size() <= d) throw TooShort("series too short to difference");
  std::vector<double> v(x.begin(), x.end());
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
    v.pop_back();
  }
  return v;
}

std::vector<double> difference_initials(std::span<const double> x, std::size_t d) {
  if (x.size() <= d) throw TooShort("series too short to difference");
  std::vector<double> init;
  std::vector<double> v(x.begin(), x.end());
  for (std::size_t k = 0; k < d; ++k) {
    init.push_back(v.front());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
    v.pop_back();
  }
  return init;
}

std::vector<double> invert_difference(std::span<const double> diffed, std::span<const double> initials,
                                      std::size_t d) {
  if (initials.size() != d) throw LengthMismatch("need one initial value per differencing level");
  std::vector<double> v(diffed.begin(), diffed.end());
  for (std::size_t k = d; k-- > 0;) {
    std::vector<double> up;
    up.reserve(v.size() + 1);
    up.push_back(initials[k]);
    for (double dv : v) up.push_back(up.back() + dv);
    v = std::move(up);
  }
  return v;
}

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n < 2 || max_lag >= n) throw TooShort("series too short for the requested lags");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  if (c0 <= 0.0) throw ConstantSeries("autocorrelation of a constant series");
  std::vector<double> r(max_lag + 1);
  for (std::size_t h = 0; h <= max_lag; ++h) {
    double c = 0.0;
    for (std::size_t t = h; t < n; ++t) c += (x[t] - mean) * (x[t - h] - mean);
    r[h] = c / c0;
  }
  return r;
}

namespace {

// AR(m) coefficients for every m <= max_lag from autocorrelations r.
// Returns the last row; `partial` receives phi_{m,m}.
std::vector<double> durbin_levinson(const std::vector<double>& r, std::size_t max_lag, std::vector<double>* partial) {
  std::vector<double> phi, prev;
  double v = 1.0;
  if (partial) partial->assign(1, 1.0);
  for (std::size_t m = 1; m <= max_lag; ++m) {
    double num = r[m];
    for (std::size_t j = 1; j < m; ++j) num -= prev[j - 1] * r[m - j];
    const double a = v > 0.0 ? num / v : 0.0;
    phi.assign(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) phi[j - 1] = prev[j - 1] - a * prev[m - j - 1];
    phi[m - 1] = a;
    v *= (1.0 - a * a);
    if (partial) partial->push_back(a);
    prev = phi;
  }
  return phi;
}

}  // namespace

std::vector<double> pacf(std::span<const double> x, std::size_t max_lag) {
  const auto r = acf(x, max_lag);
  std::vector<double> out;
  durbin_levinson(r, max_lag, &out);
  return out;
}

// ---------------------------------------------------------------------------
// ARIMA

std::string ArimaOrder::to_string() const {
  return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

double min_root_modulus(std::span<const double> c) {
  // Roots of 1 + c1 z + ... + cm z^m are the reciprocals of the eigenvalues
  // of the companion matrix of z^m + c1 z^(m-1) + ... + cm.
  std::size_t m = c.size();
  while (m > 0 && c[m - 1] == 0.0) --m;
  if (m == 0) return std::numeric_limits<double>::infinity();
  if (m == 1) return 1.0 / std::abs(c[0]);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) comp(0, static_cast<Eigen::Index>(j)) = -c[j];
  for (std::size_t i = 1; i < m; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) return 0.0;
  double max_eig = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) max_eig = std::max(max_eig, std::abs(es.eigenvalues()[i]));
  return max_eig > 0.0 ? 1.0 / max_eig : std::numeric_limits<double>::infinity();
}

bool ar_stationary(std::span<const double> phi, double margin) {
  std::vector<double> c(phi.begin(), phi.end());
  for (auto& v : c) v = -v;
  return min_root_modulus(c) > 1.0 + margin;
}

bool ma_invertible(std::span<const double> theta, double margin) { return min_root_modulus(theta) > 1.0 + margin; }

namespace {

struct CssProblem {
  std::vector<double> w;  // differenced series
  std::size_t p = 0;
  std::size_t q = 0;
  bool intercept = false;
  std::size_t start = 0;  // first residual counted in the sum, >= p

  std::size_t dim() const { return p + q + (intercept ? 1 : 0); }

  double sse(std::span<const double> x, std::vector<double>& e) const {
    const double mu = intercept ? x[p + q] : 0.0;
    const std::size_t n = w.size();
    e.assign(n, 0.0);
    double s = 0.0;
    for (std::size_t t = p; t < n; ++t) {
      double pred = 0.0;
      for (std::size_t i = 1; i <= p; ++i) pred += x[i - 1] * (w[t - i] - mu);
      for (std::size_t j = 1; j <= q && j <= t; ++j) pred += x[p + j - 1] * e[t - j];
      e[t] = (w[t] - mu) - pred;
      if (t >= start) s += e[t] * e[t];
    }
    return s;
  }

  bool feasible(std::span<const double> x) const {
    return ar_stationary(x.subspan(0, p)) && ma_invertible(x.subspan(p, q));
  }
};

constexpr double kInfeasible = 1e300;
constexpr double kVarianceFloor = 1e-12;

struct NmResult {
  std::vector<double> x;
  double f = kInfeasible;
  std::size_t evals = 0;
  bool converged = false;
};

template <typename F>
NmResult nelder_mead(F&& f, std::vector<double> x0, const std::vector<double>& step, std::size_t max_evals,
                     double tol) {
  const std::size_t m = x0.size();
  std::vector<std::vector<double>> pts(m + 1, x0);
  std::vector<double> fv(m + 1);
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i < m; ++i) pts[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= m; ++i) fv[i] = eval(pts[i]);

  std::vector<std::size_t> idx(m + 1);
  bool converged = false;
  while (evals < max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = idx.front(), worst = idx.back(), second = idx[m - 1];
    const double spread = fv[worst] - fv[best];
    if (fv[best] < kInfeasible && spread <= tol * (1.0 + std::abs(fv[best]))) {
      converged = true;
      break;
    }
    double diam = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t k = 0; k < m; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[best][k]));
    }
    if (diam < 1e-13) {
      converged = fv[best] < kInfeasible;
      break;
    }

    std::vector<double> centroid(m, 0.0);
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < m; ++k) centroid[k] += pts[i][k] / static_cast<double>(m);
    }
    auto along = [&](double coef) {
      std::vector<double> x(m);
      for (std::size_t k = 0; k < m; ++k) x[k] = centroid[k] + coef * (pts[worst][k] - centroid[k]);
      return x;
    };
    auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        fv[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = std::move(xr);
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    auto xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      pts[worst] = std::move(xc);
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < m; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      fv[i] = eval(pts[i]);
    }
  }
  const auto b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  return {pts[b], fv[b], evals, converged};
}

double series_sd(const std::vector<double>& w) {
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  double s = 0.0;
  for (double v : w) s += (v - mean) * (v - mean);
  return std::sqrt(s / static_cast<double>(w.size()));
}

}  // namespace

std::vector<double> css_residuals(const ArimaModel& model, std::span<const double> differenced) {
  CssProblem prob;
  prob.w.assign(differenced.begin(), differenced.end());
  prob.p = model.phi.size();
  prob.q = model.theta.size();
  prob.intercept = model.has_intercept;
  std::vector<double> x = model.phi;
  x.insert(x.end(), model.theta.begin(), model.theta.end());
  if (model.has_intercept) x.push_back(model.intercept);
  std::vector<double> e;
  prob.sse(x, e);
  return e;
}

ArimaModel fit_arima(std::span<const double> series, ArimaOrder order, const ArimaOptions& options) {
  if (order.p < 0 || order.d < 0 || order.q < 0) throw ConfigError("negative ARIMA order");
  const auto p = static_cast<std::size_t>(order.p);
  const auto d = static_cast<std::size_t>(order.d);
  const auto q = static_cast<std::size_t>(order.q);
  if (series.size() <= d || series.size() - d <= p + q + 10) {
    throw TooShort("series of length " + std::to_string(series.size()) + " too short for ARIMA" +
                   order.to_string());
  }

  CssProblem prob;
  prob.w = difference(series, d);
  prob.p = p;
  prob.q = q;
  prob.intercept = options.include_intercept.value_or(d == 0);
  prob.start = std::max(p, options.condition_on > d ? options.condition_on - d : std::size_t{0});
  if (prob.start + q + 10 >= prob.w.size()) {
    throw TooShort("series of length " + std::to_string(series.size()) + " too short for ARIMA" + order.to_string() +
                   " conditioned on " + std::to_string(options.condition_on) + " observations");
  }
  const std::size_t n_eff = prob.w.size() - prob.start;
  const std::size_t dim = prob.dim();

  std::vector<double> scratch;
  auto objective = [&](std::span<const double> x) {
    if (!prob.feasible(x)) return kInfeasible;
    const double s = prob.sse(x, scratch);
    return 0.5 * static_cast<double>(n_eff) * std::log(std::max(s / static_cast<double>(n_eff), 1e-300));
  };

  std::vector<double> best_x(dim, 0.0);
  bool converged = true;
  std::size_t evals = 0;

  if (dim > 0) {
    const double sd = series_sd(prob.w);
    const double mean = std::accumulate(prob.w.begin(), prob.w.end(), 0.0) / static_cast<double>(prob.w.size());
    std::vector<double> start(dim, 0.0);
    if (p > 0 && sd > 0.0) {
      const auto r = acf(prob.w, p);
      const auto yw = durbin_levinson(r, p, nullptr);
      std::copy(yw.begin(), yw.end(), start.begin());
      // Shrink in the unlikely case rounding left the start on the boundary.
      for (int i = 0; i < 50 && !ar_stationary(std::span<const double>(start).subspan(0, p)); ++i) {
        for (std::size_t k = 0; k < p; ++k) start[k] *= 0.9;
      }
    }
    if (prob.intercept) start[p + q] = mean;

    std::vector<double> step(dim, 0.1);
    if (prob.intercept) step[p + q] = 0.1 * std::max(sd, 1e-8);

    Rng rng(derive_seed(options.seed, "arima-restarts"));
    double best_f = kInfeasible;
    best_x = start;
    const std::size_t n_starts = std::max<std::size_t>(1, options.restarts);
    for (std::size_t s = 0; s < n_starts; ++s) {
      std::vector<double> x0 = start;
      if (s > 0) {
        std::vector<double> jitter(dim);
        for (std::size_t k = 0; k < dim; ++k) jitter[k] = step[k] * standard_normal(rng);
        double scale = 1.0;
        for (int tries = 0; tries < 20; ++tries, scale *= 0.5) {
          for (std::size_t k = 0; k < dim; ++k) x0[k] = start[k] + scale * jitter[k];
          if (prob.feasible(x0)) break;
          x0 = start;
        }
      }
      auto run = nelder_mead(objective, x0, step, options.max_evals, options.tol);
      evals += run.evals;
      // Polish from the optimum with a fresh, smaller simplex.
      std::vector<double> small(step);
      for (auto& v : small) v *= 0.05;
      auto polish = nelder_mead(objective, run.x, small, options.max_evals, options.tol);
      evals += polish.evals;
      if (polish.f <= run.f) {
        run.x = polish.x;
        run.f = polish.f;
      }
      run.converged = run.converged && polish.converged;
      if (run.f < best_f) {
        best_f = run.f;
        best_x = run.x;
        converged = run.converged;
      }
    }
    if (best_f >= kInfeasible) converged = false;
  }

  ArimaModel m;
  m.order = order;
  m.phi.assign(best_x.begin(), best_x.begin() + static_cast<std::ptrdiff_t>(p));
  m.theta.assign(best_x.begin() + static_cast<std::ptrdiff_t>(p), best_x.begin() + static_cast<std::ptrdiff_t>(p + q));
  m.has_intercept = prob.intercept;
  m.intercept = prob.intercept ? best_x[p + q] : 0.0;
  const double sse = prob.sse(best_x, scratch);
  const double n = static_cast<double>(n_eff);
  const double raw_var = sse / n;
  m.degenerate = raw_var < kVarianceFloor;
  m.sigma2 = std::max(raw_var, kVarianceFloor);
  m.loglik = -0.5 * n * std::log(2.0 * std::numbers::pi * m.sigma2) - sse / (2.0 * m.sigma2);
  m.n_obs = n_eff;
  m.n_params = p + q + 1 + (prob.intercept ? 1 : 0);
  m.converged = converged;
  m.evaluations = evals;
  return m;
}

double aic_value(double k, double loglik) { return 2.0 * k - 2.0 * loglik; }
double bic_value(double k, double n, double loglik) { return std::log(n) * k - 2.0 * loglik; }
double aic(const ArimaModel& model) { return aic_value(static_cast<double>(model.n_params), model.loglik); }
double bic(const ArimaModel& model) {
  return bic_value(static_cast<double>(model.n_params), static_cast<double>(model.n_obs), model.loglik);
}

ModelFit make_fit(const ArimaModel& model) { return {model, aic(model), bic(model), std::nullopt}; }

std::vector<ModelFit> grid_search_arima(std::span<const double> series, int p_max, int d_max, int q_max,
                                        Criterion criterion, const GridSearchOptions& options) {
  if (p_max < 0 || d_max < 0 || q_max < 0) throw EmptyGrid("negative order bound");
  std::vector<ArimaOrder> orders;
  for (int p = 0; p <= p_max; ++p) {
    for (int d = 0; d <= d_max; ++d) {
      for (int q = 0; q <= q_max; ++q) orders.push_back({p, d, q});
    }
  }
  std::vector<std::optional<ModelFit>> slots(orders.size());
  auto fit_one = [&](std::size_t i) {
    ArimaOptions opt = options.fit;
    // Every candidate scores the same observations, otherwise orders that
    // drop more leading values look better by the missing terms alone.
    opt.condition_on = std::max<std::size_t>(opt.condition_on, static_cast<std::size_t>(p_max + d_max));
    const auto& o = orders[i];
    opt.seed = derive_seed(options.fit.seed, static_cast<std::uint64_t>(o.p * 100 + o.d * 10 + o.q));
    try {
      slots[i] = make_fit(fit_arima(series, o, opt));
    } catch (const TooShort&) {
    }
  };
  const std::size_t width = std::max<std::size_t>(1, options.max_parallel);
  for (std::size_t lo = 0; lo < orders.size(); lo += width) {
    const std::size_t hi = std::min(orders.size(), lo + width);
    if (width == 1) {
      fit_one(lo);
      continue;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t i = lo; i < hi; ++i) jobs.push_back(std::async(std::launch::async, fit_one, i));
    for (auto& j : jobs) j.get();
  }

  std::vector<ModelFit> fits;
  for (auto& s : slots) {
    if (s) fits.push_back(std::move(*s));
  }
  if (fits.empty()) throw AllFitsFailed("no ARIMA order could be fitted");
  const auto score = [criterion](const ModelFit& f) { return criterion == Criterion::aic ? f.aic : f.bic; };
  std::stable_sort(fits.begin(), fits.end(), [&](const ModelFit& a, const ModelFit& b) {
    if (a.model.converged != b.model.converged) return a.model.converged;
    if (score(a) != score(b)) return score(a) < score(b);
    return a.model.order < b.model.order;
  });
  return fits;
}

std::vector<double> forecast(const ArimaModel& model, std::span<const double> origin, std::size_t horizon) {
  const auto d = static_cast<std::size_t>(model.order.d);
  const std::size_t p = model.phi.size();
  const std::size_t q = model.theta.size();
  auto w = difference(origin, d);
  auto e = css_residuals(model, w);
  const double mu = model.has_intercept ? model.intercept : 0.0;

  // Last value of each 0..d-1 fold difference of origin.
  std::vector<double> tails(d);
  {
    std::vector<double> v(origin.begin(), origin.end());
    for (std::size_t k = 0; k < d; ++k) {
      tails[k] = v.back();
      for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
      v.pop_back();
    }
  }

  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    const std::size_t t = w.size();
    double y = 0.0;
    for (std::size_t i = 1; i <= p && i <= t; ++i) y += model.phi[i - 1] * (w[t - i] - mu);
    for (std::size_t j = 1; j <= q && j <= t; ++j) y += model.theta[j - 1] * e[t - j];
    w.push_back(y + mu);
    e.push_back(0.0);
    double level = w.back();
    for (std::size_t k = d; k-- > 0;) {
      level += tails[k];
      tails[k] = level;
    }
    out.push_back(level);
  }
  return out;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size() || predicted.empty()) throw LengthMismatch("rmse needs equal non-empty inputs");
  double s = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) s += (predicted[i] - actual[i]) * (predicted[i] - actual[i]);
  return std::sqrt(s / static_cast<double>(predicted.size()));
}

std::size_t train_size(std::size_t n, double train_fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction + 1e-9));
}

ModelFit evaluate_oos(std::span<const double> series, ArimaOrder order, double train_fraction,
                      const ArimaOptions& options) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must be in (0, 1)");
  const std::size_t n_train = train_size(series.size(), train_fraction);
  if (n_train == 0 || n_train >= series.size()) throw TooShort("no held-out points");
  const auto train = series.subspan(0, n_train);
  const auto test = series.subspan(n_train);
  auto fit = make_fit(fit_arima(train, order, options));
  fit.rmse_oos = rmse(forecast(fit.model, train, test.size()), test);
  return fit;
}

// ---------------------------------------------------------------------------
// CSV

std::string series_csv(const TimeSeries& series) {
  std::string out = "t,value\n";
  char buf[64];
  for (std::size_t t = 0; t < series.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", t, series.values[t]);
    out += buf;
  }
  return out;
}

TimeSeries parse_series_csv(const std::string& csv, std::string label) {
  TimeSeries out{std::move(label), {}};
  std::istringstream in(csv);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "t,value") throw FormatError("expected header 't,value'", line_no);
      continue;
    }
    const auto parts = io::split(line, ',');
    if (parts.size() != 2) throw FormatError("expected two columns", line_no);
    try {
      out.values.push_back(std::stod(parts[1]));
    } catch (const std::exception&) {
      throw FormatError("bad value '" + parts[1] + "'", line_no);
    }
  }
  return out;
}

std::string fit_report_csv(const std::vector<FitReportRow>& rows) {
  std::string out = "label,p,d,q,loglik,aic,bic,rmse_oos,converged\n";
  char buf[256];
  for (const auto& r : rows) {
    const auto& m = r.fit.model;
    std::string rm = r.fit.rmse_oos ? std::to_string(*r.fit.rmse_oos) : "";
    if (r.fit.rmse_oos) {
      std::snprintf(buf, sizeof buf, "%.10g", *r.fit.rmse_oos);
      rm = buf;
    }
    std::snprintf(buf, sizeof buf, ",%d,%d,%d,%.10g,%.10g,%.10g,", m.order.p, m.order.d, m.order.q, m.loglik, r.fit.aic,
                  r.fit.bic);
    out += r.label + buf + rm + (m.converged ? ",true\n" : ",false\n");
  }
  return out;
}

}  // namespace trendscope
