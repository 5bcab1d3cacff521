#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles/oracles.hpp"
#include "trendscope/error.hpp"
#include "trendscope/forecast.hpp"

using namespace trendscope;

namespace {

ArimaModel ar1(double phi, double mu) {
  ArimaModel m;
  m.order = {1, 0, 0};
  m.phi = {phi};
  m.intercept = mu;
  m.has_intercept = true;
  return m;
}

double mean_of(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); }

}  // namespace

TEST_SUITE("forecast") {
  TEST_CASE("time axis") {
    CHECK(default_window(160000) == 320);
    CHECK(timestamp_count(160000, 320) == 500);
    CHECK(default_window(200) == 1);
    CHECK(default_window(0) == 1);
    CHECK(timestamp_count(10, 4) == 3);  // trailing 2 of 4 kept
    CHECK(timestamp_count(9, 4) == 2);   // trailing 1 of 4 dropped
    CHECK_THROWS_AS(timestamp_count(1, 4), EmptyWindow);
    CHECK_THROWS_AS(timestamp_count(10, 0), BadWindow);
  }

  TEST_CASE("topic series") {
    const auto all0 = build_topic_series(std::vector<std::size_t>(30, 0), 2, 10);
    CHECK(all0[0].values == std::vector<double>(3, 1.0));
    CHECK(all0[1].values == std::vector<double>(3, 0.0));
    std::vector<std::size_t> alt;
    for (int i = 0; i < 20; ++i) alt.push_back(i % 2);
    const auto s = build_topic_series(alt, 2, 2);
    CHECK(s[0].values == std::vector<double>(10, 0.5));
    CHECK(s[1].values == std::vector<double>(10, 0.5));
  }

  TEST_CASE("property: topic shares sum to one per timestamp") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t K = 1 + rng() % 6, n = 10 + rng() % 200, w = 1 + rng() % 9;
      std::vector<std::size_t> labels(n);
      for (auto& l : labels) l = rng() % K;
      const auto s = build_topic_series(labels, K, w);
      REQUIRE(s.size() == K);
      for (std::size_t t = 0; t < s[0].size(); ++t) {
        double sum = 0.0;
        for (const auto& ts : s) sum += ts.values[t];
        REQUIRE(std::abs(sum - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("topic series from estimates use argmax") {
    TopicEstimates e;
    e.phi = Matrix(2, 1, 1.0);
    e.theta = Matrix(4, 2);
    for (int j = 0; j < 4; ++j) {
      e.theta(j, j < 3 ? 0 : 1) = 0.9;
      e.theta(j, j < 3 ? 1 : 0) = 0.1;
    }
    const auto s = build_topic_series(e, 2, {"A", "B"});
    CHECK(s[0].label == "A");
    CHECK(s[0].values == std::vector<double>{1.0, 0.5});
  }

  TEST_CASE("trend series") {
    const std::vector<std::optional<std::size_t>> same(8, std::size_t{3});
    const auto s = build_trend_series(same, 25, 4);
    REQUIRE(s.size() == 25);
    CHECK(s[3].values == std::vector<double>{1.0, 1.0});
    CHECK(s[0].values == std::vector<double>{0.0, 0.0});
    const std::vector<std::optional<std::size_t>> gap{std::size_t{0}, std::nullopt, std::size_t{1}, std::size_t{1}};
    const auto g = build_trend_series(gap, 2, 4);
    CHECK(g[0].values[0] == doctest::Approx(1.0 / 3));
    CHECK(g[1].values[0] == doctest::Approx(2.0 / 3));
    const auto none = build_trend_series({std::nullopt, std::nullopt}, 2, 2);
    CHECK(none[0].values == std::vector<double>{0.0});
  }

  TEST_CASE("moving average") {
    const TimeSeries s{"x", {1, 2, 3}};
    CHECK(moving_average(s, 1).values == s.values);
    CHECK(moving_average(s, 2).values == std::vector<double>{1.5, 2.5});
    CHECK(moving_average({"c", {4, 4, 4, 4}}, 3).values == std::vector<double>{4, 4});
    CHECK_THROWS_AS(moving_average(s, 0), BadWindow);
    CHECK_THROWS_AS(moving_average(s, 4), BadWindow);
    CHECK(truncate({"t", {1, 2, 3, 4}}, 2).values == std::vector<double>{1, 2});
  }

  TEST_CASE("differencing") {
    const std::vector<double> x{1, 3, 6};
    CHECK(difference(x, 1) == std::vector<double>{2, 3});
    CHECK(difference(x, 0) == x);
    CHECK(difference(x, 2) == std::vector<double>{1});
    CHECK_THROWS_AS(difference(x, 3), TooShort);
    const auto init = difference_initials(x, 2);
    CHECK(invert_difference(difference(x, 2), init, 2) == x);
  }

  TEST_CASE("property: invert_difference undoes difference") {
    std::mt19937_64 rng(72);
    std::normal_distribution<double> nd(0.0, 10.0);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t d = trial % 3, n = d + 1 + rng() % 40;
      std::vector<double> x(n);
      for (auto& v : x) v = nd(rng);
      const auto back = invert_difference(difference(x, d), difference_initials(x, d), d);
      REQUIRE(back.size() == n);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(back[i] - x[i]) <= 1e-12 * (1.0 + std::abs(x[i])) * 64);
      std::vector<double> ints(n);
      for (auto& v : ints) v = static_cast<double>(static_cast<int>(rng() % 1000) - 500);
      REQUIRE(invert_difference(difference(ints, d), difference_initials(ints, d), d) == ints);
    }
  }

  TEST_CASE("acf and pacf") {
    std::vector<double> alt;
    for (int i = 0; i < 100; ++i) alt.push_back(i % 2 ? -1.0 : 1.0);
    const auto a = acf(alt, 3);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == doctest::Approx(-99.0 / 100.0));
    CHECK_THROWS_AS(acf(std::vector<double>(10, 2.0), 2), ConstantSeries);
    CHECK_THROWS_AS(acf(alt, 100), TooShort);

    const auto x = oracle::simulate_arma({0.6}, {}, 0.0, 1.0, 5000, 3);
    const auto r = acf(x, 5);
    CHECK(std::abs(r[1] - 0.6) < 0.05);
    const auto p = pacf(x, 5);
    CHECK(p[0] == 1.0);
    CHECK(std::abs(p[1] - r[1]) < 1e-12);
    CHECK(std::abs(p[2]) < 0.05);
  }

  TEST_CASE("information criteria") {
    CHECK(aic_value(3, -100) == 206.0);
    CHECK(aic_value(0, 0) == 0.0);
    CHECK(aic_value(4, -100) - aic_value(3, -100) == 2.0);
    CHECK(bic_value(3, 100, -100) == doctest::Approx(213.8155).epsilon(1e-7));
    CHECK(bic_value(3, std::exp(1.0), -100) == doctest::Approx(3.0 + 200.0));
    for (double n : {8.0, 50.0, 1000.0}) CHECK(bic_value(3, n, -10) >= aic_value(3, -10));
  }

  TEST_CASE("fit: white noise mean model matches moments") {
    const auto x = oracle::simulate_arma({}, {}, 2.0, 1.5, 5000, 5);
    const auto m = fit_arima(x, {0, 0, 0});
    const double mean = mean_of(x);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean) / x.size();
    CHECK(m.intercept == doctest::Approx(mean).epsilon(1e-4));
    CHECK(std::abs(m.sigma2 / var - 1.0) < 0.02);
    CHECK(m.n_params == 2);
    CHECK(m.n_obs == 5000);
  }

  TEST_CASE("fit: AR(1) recovery") {
    const auto x = oracle::simulate_arma({0.6}, {}, 0.0, 1.0, 2000, 6);
    const auto m = fit_arima(x, {1, 0, 0});
    CHECK(std::abs(m.phi[0] - 0.6) < 0.05);
    CHECK(m.converged);
    CHECK(m.n_obs == 1999);
    CHECK(ar_stationary(m.phi));
  }

  TEST_CASE("fit: constant series with d=1 is flagged degenerate") {
    const std::vector<double> x(40, 3.0);
    const auto m = fit_arima(x, {0, 1, 0});
    CHECK(m.degenerate);
    CHECK(m.sigma2 >= 1e-12);
    CHECK(std::isfinite(m.loglik));
  }

  TEST_CASE("fit: too short") {
    CHECK_THROWS_AS(fit_arima(std::vector<double>(12, 1.0), {1, 0, 1}), TooShort);
    CHECK_NOTHROW(fit_arima(oracle::simulate_arma({}, {}, 0, 1, 13, 1), {1, 0, 1}));
  }

  TEST_CASE("property: fitted models are stationary and invertible with exact criteria") {
    std::mt19937_64 rng(73);
    const std::vector<ArimaOrder> orders{{1, 0, 0}, {0, 0, 1}, {1, 0, 1}, {2, 1, 1}, {0, 1, 2}};
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = oracle::simulate_arima({0.7}, trial % 2, {0.4}, 1.0, 300, rng());
      for (const auto& o : orders) {
        const auto m = fit_arima(x, o, {.seed = rng()});
        const auto coef = [](const std::vector<double>& c, std::size_t i, double sign) {
          return i < c.size() ? sign * c[i] : 0.0;
        };
        REQUIRE(oracle::min_root_modulus_deg2(coef(m.phi, 0, -1), coef(m.phi, 1, -1)) > 1.0 + 1e-6);
        REQUIRE(oracle::min_root_modulus_deg2(coef(m.theta, 0, 1), coef(m.theta, 1, 1)) > 1.0 + 1e-6);
        REQUIRE(ar_stationary(m.phi));
        REQUIRE(ma_invertible(m.theta));
        const auto fit = make_fit(m);
        REQUIRE(fit.aic == 2.0 * m.n_params - 2.0 * m.loglik);
        REQUIRE(fit.bic == std::log(static_cast<double>(m.n_obs)) * m.n_params - 2.0 * m.loglik);
        REQUIRE(m.sigma2 > 0.0);
      }
    }
  }

  TEST_CASE("root checks") {
    CHECK(ar_stationary(std::vector<double>{0.5}));
    CHECK_FALSE(ar_stationary(std::vector<double>{1.0}));
    CHECK_FALSE(ar_stationary(std::vector<double>{0.5, 0.6}));
    CHECK(ma_invertible(std::vector<double>{-0.9}));
    CHECK_FALSE(ma_invertible(std::vector<double>{1.2}));
    CHECK(min_root_modulus(std::vector<double>{0.5}) == doctest::Approx(2.0));
    CHECK(std::isinf(min_root_modulus(std::vector<double>{})));
  }

  TEST_CASE("forecast recursions") {
    const std::vector<double> origin{0.3, -0.2, 1.0};
    const auto f = forecast(ar1(0.5, 0.0), origin, 4);
    CHECK(f == std::vector<double>{0.5, 0.25, 0.125, 0.0625});

    ArimaModel mean;
    mean.order = {0, 0, 0};
    mean.intercept = 4.2;
    mean.has_intercept = true;
    CHECK(forecast(mean, origin, 3) == std::vector<double>(3, 4.2));

    ArimaModel rw;
    rw.order = {0, 1, 0};
    CHECK(forecast(rw, origin, 3) == std::vector<double>(3, 1.0));
  }

  TEST_CASE("property: AR(1) forecasts decay geometrically to the mean") {
    std::mt19937_64 rng(74);
    std::uniform_real_distribution<double> u(-0.95, 0.95), lvl(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
      const double phi = u(rng), mu = lvl(rng), last = lvl(rng);
      const auto f = forecast(ar1(phi, mu), std::vector<double>{lvl(rng), last}, 12);
      double expected = last - mu;
      for (std::size_t h = 0; h < f.size(); ++h) {
        expected *= phi;
        REQUIRE(std::abs((f[h] - mu) - expected) <= 1e-12 * (1.0 + std::abs(mu)));
      }
    }
  }

  TEST_CASE("rmse") {
    CHECK(rmse(std::vector<double>{1, 2}, std::vector<double>{1, 4}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(rmse(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
    CHECK_THROWS_AS(rmse(std::vector<double>{1}, std::vector<double>{1, 2}), LengthMismatch);
    std::mt19937_64 rng(75);
    for (int i = 0; i < 200; ++i) {
      std::vector<double> a(1 + rng() % 10), b;
      for (auto& v : a) v = static_cast<double>(rng() % 7);
      b = a;
      REQUIRE(rmse(a, b) == 0.0);
      b[rng() % b.size()] += 1.0;
      REQUIRE(rmse(a, b) > 0.0);
    }
  }

  TEST_CASE("out-of-sample split") {
    CHECK(train_size(10, 0.7) == 7);
    CHECK(train_size(100, 0.7) == 70);
    const auto x = oracle::simulate_arma({0.5}, {}, 1.0, 1.0, 200, 9);
    const auto fit = evaluate_oos(x, {1, 0, 0}, 0.7);
    REQUIRE(fit.rmse_oos);
    CHECK(*fit.rmse_oos > 0.0);
    CHECK(fit.model.n_obs == 139);
    CHECK_THROWS_AS(evaluate_oos(std::vector<double>(15, 1.0), {1, 0, 1}, 0.7), TooShort);
  }

  TEST_CASE("grid search ranking matches reported criteria") {
    const auto x = oracle::simulate_arma({0.5}, {}, 0.0, 1.0, 300, 10);
    const auto one = grid_search_arima(x, 0, 0, 0, Criterion::bic);
    REQUIRE(one.size() == 1);
    const auto fits = grid_search_arima(x, 2, 1, 2, Criterion::aic, {.max_parallel = 4});
    CHECK(fits.size() == 18);
    for (std::size_t i = 1; i < fits.size(); ++i) {
      if (fits[i - 1].model.converged == fits[i].model.converged) CHECK(fits[i - 1].aic <= fits[i].aic);
      else CHECK(fits[i - 1].model.converged);
    }
    const auto serial = grid_search_arima(x, 2, 1, 2, Criterion::aic);
    for (std::size_t i = 0; i < fits.size(); ++i) CHECK(fits[i].aic == serial[i].aic);
    CHECK_THROWS_AS(grid_search_arima(std::vector<double>(5, 1.0), 1, 0, 1, Criterion::bic), AllFitsFailed);
    // Candidates share one likelihood window.
    for (const auto& f : fits) CHECK(f.model.n_obs == x.size() - 3);
  }

  TEST_CASE("conditioning window") {
    const auto x = oracle::simulate_arma({}, {}, 2.0, 1.0, 100, 12);
    const auto plain = fit_arima(x, {0, 0, 0});
    CHECK(plain.n_obs == 100);
    const auto cond = fit_arima(x, {0, 0, 0}, {.condition_on = 4});
    CHECK(cond.n_obs == 96);
    // The mean model maximizes over the kept observations only.
    const double mean_tail = std::accumulate(x.begin() + 4, x.end(), 0.0) / 96.0;
    CHECK(cond.intercept == doctest::Approx(mean_tail).epsilon(1e-5));
    // Fewer than d + p leading values never enlarges the window.
    CHECK(fit_arima(x, {2, 1, 0}, {.condition_on = 1}).n_obs == 97);
    CHECK_THROWS_AS(fit_arima(x, {0, 0, 0}, {.condition_on = 95}), TooShort);
  }

  TEST_CASE("csv formats") {
    const TimeSeries s{"topic", {0.25, 0.5}};
    const auto csv = series_csv(s);
    CHECK(csv.rfind("t,value\n0,", 0) == 0);
    CHECK(parse_series_csv(csv).values == s.values);
    const auto m = fit_arima(oracle::simulate_arma({}, {}, 0, 1, 50, 1), {0, 0, 0});
    auto fit = make_fit(m);
    fit.rmse_oos = 0.5;
    const auto report = fit_report_csv({{"trend", fit}});
    CHECK(report.rfind("label,p,d,q,loglik,aic,bic,rmse_oos,converged\ntrend,0,0,0,", 0) == 0);
  }
}
