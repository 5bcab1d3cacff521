#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "trendscope/coherence.hpp"
#include "trendscope/corpus_io.hpp"
#include "trendscope/error.hpp"
#include "trendscope/forecast.hpp"
#include "trendscope/lexikit.hpp"
#include "trendscope/pipeline.hpp"
#include "trendscope/topic_models.hpp"
#include "trendscope/trend_prep.hpp"

namespace py = pybind11;
using namespace trendscope;

namespace {

std::vector<std::vector<double>> rows_of(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows, std::vector<double>(m.cols));
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out[r][c] = m(r, c);
  }
  return out;
}

py::dict estimates_dict(const TopicEstimates& e, const DocTermMatrix& dtm, std::size_t top_n) {
  py::dict d;
  d["phi"] = rows_of(e.phi);
  d["theta"] = rows_of(e.theta);
  d["vocab"] = dtm.vocab;
  std::vector<std::vector<std::string>> tops;
  for (std::size_t k = 0; k < e.phi.rows; ++k) {
    std::vector<std::string> words;
    for (const auto& [w, p] : top_words(e, dtm.vocab, k, std::min(top_n, dtm.n_words()))) words.push_back(w);
    tops.push_back(std::move(words));
  }
  d["top_words"] = tops;
  d["perplexity"] = perplexity(e, dtm);
  return d;
}

ArimaOrder order_of(const std::tuple<int, int, int>& t) {
  return {std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

}  // namespace

PYBIND11_MODULE(_trendscope, m) {
  m.doc() = "trendscope native core";
  m.attr("__version__") = tool_version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<TooShort>(m, "TooShort", base.ptr());
  py::register_exception<MissingUpstream>(m, "MissingUpstream", base.ptr());
  py::register_exception<IncompleteManifest>(m, "IncompleteManifest", base.ptr());

  // Text and lexical tools.
  m.def("preprocess_texts", [](const std::vector<std::string>& texts, const std::map<std::string, std::set<std::string>>& stopwords) {
    Corpus c;
    for (std::size_t i = 0; i < texts.size(); ++i) c.documents.push_back({std::to_string(i + 1), texts[i], Lang::unknown, {}});
    PreprocessConfig cfg;
    cfg.stopword_lists = stopwords;
    std::vector<std::vector<std::string>> out;
    for (const auto& d : preprocess(c, cfg).documents) out.push_back(d.tokens);
    return out;
  }, py::arg("texts"), py::arg("stopwords") = std::map<std::string, std::set<std::string>>{});
  m.def("edit_distance", py::overload_cast<std::string_view, std::string_view, bool>(&edit_distance),
        py::arg("a"), py::arg("b"), py::arg("transpositions") = false);
  m.def("symspell_lookup", [](const std::map<std::string, std::uint64_t>& vocab, const std::string& term, int d) {
    const auto index = symspell_build(vocab, d);
    std::vector<std::tuple<std::string, int, std::uint64_t>> out;
    for (const auto& c : symspell_lookup(index, term, d)) out.emplace_back(c.word, c.distance, c.frequency);
    return out;
  }, py::arg("vocab"), py::arg("term"), py::arg("max_distance") = 2);

  // Topic models.
  m.def("fit_lda", [](const std::vector<std::vector<std::string>>& docs, std::size_t k, double alpha, double beta,
                      std::uint64_t seed, std::size_t burn_in, std::size_t samples, std::size_t top_n) {
    const auto dtm = build_dtm(docs);
    py::gil_scoped_release release;
    auto fit = fit_lda(dtm, k, alpha, beta, seed, {burn_in, samples});
    py::gil_scoped_acquire acquire;
    return estimates_dict(fit.estimates, dtm, top_n);
  }, py::arg("docs"), py::arg("k"), py::arg("alpha") = 0.1, py::arg("beta") = 0.01, py::arg("seed") = 0,
     py::arg("burn_in") = 500, py::arg("samples") = 1000, py::arg("top_n") = 10);
  m.def("fit_hdp", [](const std::vector<std::vector<std::string>>& docs, std::size_t k_max, double gamma, double eta,
                      double beta, std::uint64_t seed, std::size_t burn_in, std::size_t samples, std::size_t top_n) {
    const auto dtm = build_dtm(docs);
    py::gil_scoped_release release;
    auto fit = fit_hdp(dtm, k_max, gamma, eta, beta, seed, {burn_in, samples});
    py::gil_scoped_acquire acquire;
    auto d = estimates_dict(fit.estimates, dtm, top_n);
    d["active_topics"] = active_topics(fit.state, 0.01);
    d["top_level_weights"] = fit.state.top_level_weights;
    return d;
  }, py::arg("docs"), py::arg("k_max") = 20, py::arg("gamma") = 1.0, py::arg("eta") = 1.0, py::arg("beta") = 0.01,
     py::arg("seed") = 0, py::arg("burn_in") = 500, py::arg("samples") = 1000, py::arg("top_n") = 10);

  // Coherence.
  m.def("coherence", [](const std::vector<std::string>& words, const std::vector<std::vector<std::string>>& docs, bool natural_log) {
    const std::set<std::string> vocab(words.begin(), words.end());
    const auto counts = count_cooccurrence(docs, vocab);
    const TopicWordSet t{0, words};
    const auto cs = c_score_detail(t, counts, natural_log ? LogBase::natural : LogBase::two);
    py::dict d;
    d["umass"] = umass(t, counts);
    d["c_score"] = cs.value;
    d["smoothed_pairs"] = cs.smoothed_pairs;
    return d;
  }, py::arg("words"), py::arg("docs"), py::arg("natural_log") = false);

  // Trend preparation.
  m.def("rake", [](const std::string& text, const std::set<std::string>& stopwords) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& k : rake_extract(rake_segments(text), stopwords)) {
      std::string phrase;
      for (const auto& w : k.phrase) phrase += (phrase.empty() ? "" : " ") + w;
      out.emplace_back(phrase, k.score);
    }
    return out;
  }, py::arg("text"), py::arg("stopwords"));
  m.def("cosine", &cosine);
  m.def("char_ngrams", &char_ngrams, py::arg("word"), py::arg("min_n") = 3, py::arg("max_n") = 6);
  m.def("kmeans_cosine", [](const std::map<std::string, Vector>& vectors, std::size_t k, std::uint64_t seed) {
    const auto model = kmeans_cosine(vectors, k, seed);
    py::dict d;
    d["assignments"] = model.assignments;
    d["objective"] = model.objective;
    d["objective_history"] = model.objective_history;
    d["centroids"] = model.centroids;
    return d;
  }, py::arg("vectors"), py::arg("k"), py::arg("seed") = 0);
  m.def("bigram_top_words", &bigram_top_words, py::arg("texts"), py::arg("top_n") = 30);

  // Forecasting.
  py::class_<ArimaModel>(m, "ArimaModel")
      .def_property_readonly("order", [](const ArimaModel& a) { return std::make_tuple(a.order.p, a.order.d, a.order.q); })
      .def_readonly("phi", &ArimaModel::phi)
      .def_readonly("theta", &ArimaModel::theta)
      .def_readonly("intercept", &ArimaModel::intercept)
      .def_readonly("sigma2", &ArimaModel::sigma2)
      .def_readonly("loglik", &ArimaModel::loglik)
      .def_readonly("n_obs", &ArimaModel::n_obs)
      .def_readonly("n_params", &ArimaModel::n_params)
      .def_readonly("converged", &ArimaModel::converged)
      .def_readonly("degenerate", &ArimaModel::degenerate)
      .def_property_readonly("aic", [](const ArimaModel& a) { return aic(a); })
      .def_property_readonly("bic", [](const ArimaModel& a) { return bic(a); });

  m.def("fit_arima", [](const std::vector<double>& series, std::tuple<int, int, int> order, std::uint64_t seed) {
    ArimaOptions opt;
    opt.seed = seed;
    py::gil_scoped_release release;
    return fit_arima(series, order_of(order), opt);
  }, py::arg("series"), py::arg("order"), py::arg("seed") = 0);
  m.def("grid_search_arima", [](const std::vector<double>& series, int p_max, int d_max, int q_max, const std::string& criterion) {
    const Criterion c = criterion == "aic" ? Criterion::aic : Criterion::bic;
    std::vector<ArimaModel> out;
    py::gil_scoped_release release;
    for (auto& f : grid_search_arima(series, p_max, d_max, q_max, c)) out.push_back(f.model);
    return out;
  }, py::arg("series"), py::arg("p_max") = 2, py::arg("d_max") = 1, py::arg("q_max") = 2, py::arg("criterion") = "bic");
  m.def("forecast", [](const ArimaModel& model, const std::vector<double>& origin, std::size_t h) {
    return forecast(model, origin, h);
  }, py::arg("model"), py::arg("origin"), py::arg("horizon"));
  m.def("evaluate_oos", [](const std::vector<double>& series, std::tuple<int, int, int> order, double fraction) {
    return *evaluate_oos(series, order_of(order), fraction).rmse_oos;
  }, py::arg("series"), py::arg("order"), py::arg("train_fraction") = 0.7);
  m.def("aic_value", &aic_value, py::arg("k"), py::arg("loglik"));
  m.def("bic_value", &bic_value, py::arg("k"), py::arg("n"), py::arg("loglik"));
  m.def("difference", [](const std::vector<double>& x, std::size_t d) { return difference(x, d); });
  m.def("acf", [](const std::vector<double>& x, std::size_t lags) { return acf(x, lags); });
  m.def("pacf", [](const std::vector<double>& x, std::size_t lags) { return pacf(x, lags); });
  m.def("moving_average", [](const std::vector<double>& x, std::size_t w) { return moving_average({"", x}, w).values; });

  // Pipeline.
  m.def("run_pipeline", [](const std::filesystem::path& config, std::optional<std::uint64_t> seed) {
    const auto cfg = load_config(config, seed);
    py::gil_scoped_release release;
    return to_json(run_all(cfg));
  }, py::arg("config"), py::arg("seed") = py::none(), "Runs every stage; returns the manifest JSON.");
  m.def("run_stage", [](const std::string& stage, const std::filesystem::path& config) {
    const auto cfg = load_config(config);
    py::gil_scoped_release release;
    return run_stage(parse_stage(stage), cfg).outputs;
  }, py::arg("stage"), py::arg("config"));
  m.def("report", [](const std::filesystem::path& config, const std::string& format) {
    return report(load_config(config), parse_report_format(format));
  }, py::arg("config"), py::arg("format") = "json");
}
