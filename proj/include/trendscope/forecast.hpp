#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trendscope/topic_models.hpp"

namespace trendscope {

struct TimeSeries {
  std::string label;
  std::vector<double> values;  // artificial timestamps t = 0..T-1

  std::size_t size() const { return values.size(); }
};

// ---------------------------------------------------------------------------
// Artificial time axis

// Documents per timestamp so that a corpus of n_docs spans at most 500
// timestamps: ceil(n_docs / 500), at least 1.
std::size_t default_window(std::size_t n_docs);

// Timestamp t covers docs [t*window, (t+1)*window). A trailing partial
// window is kept when it holds at least window/2 documents and dropped
// otherwise. Throws EmptyWindow when no timestamp remains, BadWindow for
// window == 0.
std::size_t timestamp_count(std::size_t n_docs, std::size_t window);

// One series per topic: per-window share of documents whose label is the
// topic. `labels[j]` must be < n_topics.
std::vector<TimeSeries> build_topic_series(const std::vector<std::size_t>& labels, std::size_t n_topics,
                                           std::size_t window, const std::vector<std::string>& names = {});
std::vector<TimeSeries> build_topic_series(const TopicEstimates& estimates, std::size_t window,
                                           const std::vector<std::string>& names = {});

// Per-window share of each trend among the documents that carry one;
// nullopt marks an unassigned document. Windows with no assigned document
// are 0 for every trend.
std::vector<TimeSeries> build_trend_series(const std::vector<std::optional<std::size_t>>& assignments,
                                           std::size_t n_trends, std::size_t window,
                                           const std::vector<std::string>& names = {});

// Keeps the first max_len points.
TimeSeries truncate(const TimeSeries& series, std::size_t max_len);

// Trailing mean; output length is size - w + 1. Throws BadWindow.
TimeSeries moving_average(const TimeSeries& series, std::size_t w);

// ---------------------------------------------------------------------------
// Differencing and correlation

// Throws TooShort when size <= d.
std::vector<double> difference(std::span<const double> x, std::size_t d);
// First value of the 0..d-1 fold differenced series; what invert_difference
// needs to rebuild x.
std::vector<double> difference_initials(std::span<const double> x, std::size_t d);
std::vector<double> invert_difference(std::span<const double> diffed, std::span<const double> initials,
                                      std::size_t d);

// Biased (denominator n) sample autocorrelation for lags 0..max_lag.
// Throws ConstantSeries / TooShort.
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);
// Durbin-Levinson; pacf[0] = 1.
std::vector<double> pacf(std::span<const double> x, std::size_t max_lag);

// ---------------------------------------------------------------------------
// ARIMA

struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;

  auto operator<=>(const ArimaOrder&) const = default;
  std::string to_string() const;
};

struct ArimaOptions {
  // Default: fit a mean for d == 0 only.
  std::optional<bool> include_intercept;
  std::size_t max_evals = 2000;
  double tol = 1e-8;
  std::size_t restarts = 3;
  std::uint64_t seed = 0;
  // Leading observations of the undifferenced series left out of the
  // likelihood; the first d + p are always left out.
  std::size_t condition_on = 0;
};

// X_t - mu = sum phi_i (X_{t-i} - mu) + sum theta_j e_{t-j} + e_t on the
// d-times differenced series.
struct ArimaModel {
  ArimaOrder order;
  std::vector<double> phi;
  std::vector<double> theta;
  double intercept = 0.0;
  bool has_intercept = false;
  double sigma2 = 1.0;
  double loglik = 0.0;
  std::size_t n_obs = 0;     // length - max(d + p, condition_on)
  std::size_t n_params = 0;  // p + q + 1 (+1 with intercept)
  bool converged = false;
  bool degenerate = false;   // residual variance hit the 1e-12 floor
  std::size_t evaluations = 0;
};

struct ModelFit {
  ArimaModel model;
  double aic = 0.0;
  double bic = 0.0;
  std::optional<double> rmse_oos;
};

// Conditional-sum-of-squares Gaussian likelihood maximized by Nelder-Mead
// from Yule-Walker starts plus jittered restarts. Non-stationary or
// non-invertible parameters are penalized. Throws TooShort unless
// length - d > p + q + 10.
ArimaModel fit_arima(std::span<const double> series, ArimaOrder order, const ArimaOptions& options = {});

// CSS residuals of the differenced series (zeros for the first p entries).
std::vector<double> css_residuals(const ArimaModel& model, std::span<const double> differenced);

// All roots of 1 - phi_1 z - ... (AR) and 1 + theta_1 z + ... (MA) lie
// outside the circle of radius 1 + margin.
bool ar_stationary(std::span<const double> phi, double margin = 1e-6);
bool ma_invertible(std::span<const double> theta, double margin = 1e-6);
// Minimum modulus over the polynomial's roots (infinity with no roots).
double min_root_modulus(std::span<const double> coeffs_after_one);

double aic_value(double k, double loglik);
double bic_value(double k, double n, double loglik);
double aic(const ArimaModel& model);
double bic(const ArimaModel& model);
ModelFit make_fit(const ArimaModel& model);

enum class Criterion { aic, bic };

struct GridSearchOptions {
  ArimaOptions fit;
  std::size_t max_parallel = 1;
};

// Fits every (p, d, q) in the bounds. Orders too long for the series are
// skipped. Every candidate is scored on the observations after the first
// p_max + d_max. Ranked converged-first, then by criterion, then by order.
// Throws AllFitsFailed when nothing could be fitted.
std::vector<ModelFit> grid_search_arima(std::span<const double> series, int p_max, int d_max, int q_max,
                                        Criterion criterion, const GridSearchOptions& options = {});

// Iterated conditional expectations on the differenced scale, integrated
// back onto the level of `origin`. Future shocks are 0.
std::vector<double> forecast(const ArimaModel& model, std::span<const double> origin, std::size_t horizon);

double rmse(std::span<const double> predicted, std::span<const double> actual);

// Index of the first held-out point: floor(n * train_fraction).
std::size_t train_size(std::size_t n, double train_fraction);

// Fits on the first train_fraction of the series and scores forecasts on
// the rest. Throws TooShort.
ModelFit evaluate_oos(std::span<const double> series, ArimaOrder order, double train_fraction = 0.7,
                      const ArimaOptions& options = {});

// ---------------------------------------------------------------------------
// CSV

// "t,value" with one row per timestamp.
std::string series_csv(const TimeSeries& series);
TimeSeries parse_series_csv(const std::string& csv, std::string label = {});

struct FitReportRow {
  std::string label;
  ModelFit fit;
};
// label,p,d,q,loglik,aic,bic,rmse_oos,converged
std::string fit_report_csv(const std::vector<FitReportRow>& rows);

}  // namespace trendscope
