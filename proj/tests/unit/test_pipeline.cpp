#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>

#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/pipeline.hpp"

using namespace trendscope;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kToy = fs::path(TRENDSCOPE_DATA_DIR) / "toy";

// Fresh scratch directory per call, removed by the caller's Scratch.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) {
    dir = fs::temp_directory_path() / ("trendscope_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

json toy_json() { return json::parse(io::read_file(kToy / "config.json")); }

PipelineConfig toy_config(const fs::path& out, const std::function<void(json&)>& edit = {}) {
  json j = toy_json();
  j["output_dir"] = out.string();
  if (edit) edit(j);
  return parse_config(j.dump(), kToy);
}

// Writes a config file pointing at the toy data, for CLI runs.
fs::path write_config(const fs::path& dir, const std::function<void(json&)>& edit = {}) {
  fs::create_directories(dir);
  json j = toy_json();
  j["output_dir"] = (dir / "out").string();
  j["corpus"]["path"] = (kToy / j["corpus"]["path"].get<std::string>()).string();
  for (auto& [lang, p] : j["preprocess"]["stopwords"].items()) p = (kToy / p.get<std::string>()).string();
  j["preprocess"]["lemma_table"] = (kToy / j["preprocess"]["lemma_table"].get<std::string>()).string();
  for (auto& d : j["translation"]["dictionaries"]) d["path"] = (kToy / d["path"].get<std::string>()).string();
  j["translation"]["mock_mt"] = (kToy / j["translation"]["mock_mt"].get<std::string>()).string();
  j["embeddings"]["words"] = (kToy / j["embeddings"]["words"].get<std::string>()).string();
  j["embeddings"]["ngrams"] = (kToy / j["embeddings"]["ngrams"].get<std::string>()).string();
  j["trends"]["path"] = (kToy / j["trends"]["path"].get<std::string>()).string();
  if (edit) edit(j);
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TRENDSCOPE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_matches(const std::string& s, const std::regex& re) {
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("stage names and dependencies") {
    CHECK(all_stages().size() == 7);
    for (Stage s : all_stages()) CHECK(parse_stage(to_string(s)) == s);
    CHECK_THROWS_AS(parse_stage("nope"), ConfigError);
    CHECK(stage_inputs(Stage::ingest).empty());
    CHECK(stage_inputs(Stage::preprocess) == std::vector<Stage>{Stage::ingest});
    CHECK(stage_seed(7, Stage::topics) != stage_seed(7, Stage::trends));
    CHECK(stage_seed(7, Stage::topics) == stage_seed(7, Stage::topics));
  }

  TEST_CASE("config parsing") {
    Scratch s("cfg");
    const auto c = toy_config(s.dir / "out");
    CHECK(c.seed == 7);
    CHECK(c.model.fixed.k == 5);
    CHECK(c.forecast.window == std::size_t{4});
    CHECK(c.corpus == kToy / "corpus.jsonl");
    CHECK(toy_config(s.dir / "out").canonical == c.canonical);
    CHECK(parse_config(toy_json().dump(), kToy, 99).seed == 99);
    CHECK_THROWS_AS(parse_config("{not json", kToy), ConfigError);
    CHECK_THROWS_AS(toy_config(s.dir / "out", [](json& j) { j["model"]["kind"] = "plsa"; }), ConfigError);
    CHECK_THROWS_AS(load_config(s.dir / "missing.json"), ConfigError);
  }

  TEST_CASE("invalid dictionary path fails validation before any stage runs") {
    Scratch s("faildict");
    const auto c = toy_config(s.dir / "out", [](json& j) { j["translation"]["dictionaries"][0]["path"] = "nope.tsv"; });
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(run_all(c), ConfigError);
    CHECK_FALSE(fs::exists(s.dir / "out" / "ingest"));
    CHECK_FALSE(fs::exists(s.dir / "out" / "manifest.json"));
  }

  TEST_CASE("plan lists the stages without running them") {
    Scratch s("plan");
    const auto c = toy_config(s.dir / "out");
    const auto text = plan(c);
    for (Stage st : all_stages()) CHECK(text.find(std::string(to_string(st))) != std::string::npos);
    CHECK_FALSE(fs::exists(s.dir / "out" / "manifest.json"));
    CHECK(plan(c, Stage::topics).find("topics") != std::string::npos);
  }

  TEST_CASE("ingest then preprocess produce token files and stats") {
    Scratch s("early");
    const auto c = toy_config(s.dir / "out");
    run_stage(Stage::ingest, c);
    const auto rec = run_stage(Stage::preprocess, c);
    CHECK(fs::is_regular_file(s.dir / "out/preprocess/tokens.jsonl"));
    CHECK(fs::is_regular_file(s.dir / "out/preprocess/stats.json"));
    CHECK(rec.outputs.count("preprocess/tokens.jsonl"));
    const auto stats = json::parse(io::read_file(s.dir / "out/preprocess/stats.json"));
    CHECK(stats["raw"]["n_docs"] == 200);
    const auto m = load_manifest(s.dir / "out");
    CHECK(m.stages.size() == 2);
    CHECK_FALSE(m.complete());
  }

  TEST_CASE("missing upstream names the earliest absent stage") {
    Scratch s("upstream");
    const auto c = toy_config(s.dir / "out");
    try {
      run_stage(Stage::topics, c);
      FAIL("expected MissingUpstream");
    } catch (const MissingUpstream& e) {
      CHECK(e.stage() == "ingest");
    }
    run_stage(Stage::ingest, c);
    try {
      run_stage(Stage::topics, c);
      FAIL("expected MissingUpstream");
    } catch (const MissingUpstream& e) {
      CHECK(e.stage() == "preprocess");
    }
  }

  TEST_CASE("report needs a complete manifest") {
    Scratch s("incomplete");
    const auto c = toy_config(s.dir / "out");
    run_stage(Stage::ingest, c);
    CHECK_THROWS_AS(report(c, ReportFormat::markdown), IncompleteManifest);
  }

  TEST_CASE("end to end: deterministic, isolated stages, report shapes") {
    Scratch s("e2e");
    const auto c = toy_config(s.dir / "out");
    const auto t0 = std::chrono::steady_clock::now();
    const auto m1 = run_all(c);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(60));
    CHECK(m1.complete());
    CHECK(m1.stages.size() == 7);
    const std::string first = io::read_file(s.dir / "out/manifest.json");
    CHECK(manifest_from_json(first).config_hash == m1.config_hash);
    CHECK(to_json(manifest_from_json(first)) == first);

    run_all(c);
    CHECK(io::read_file(s.dir / "out/manifest.json") == first);

    // Stage isolation: remove one stage's outputs and rerun just that stage.
    const auto before = m1.find(Stage::topics)->outputs;
    fs::remove_all(s.dir / "out/topics");
    const auto again = run_stage(Stage::topics, c);
    CHECK(again.outputs == before);
    CHECK(io::read_file(s.dir / "out/manifest.json") == first);

    for (const auto& entry : fs::recursive_directory_iterator(s.dir / "out"))
      CHECK(entry.path().extension() != ".tmp");

    const auto md = report(c, ReportFormat::markdown);
    CHECK(count_matches(md, std::regex("\n### Topic [0-9]+: ")) == 5);
    const auto ranking_at = md.find("## Trend ranking");
    REQUIRE(ranking_at != std::string::npos);
    CHECK(count_matches(md.substr(ranking_at), std::regex("\n\\| [0-9]+ \\|")) == 25);

    const auto js = json::parse(report(c, ReportFormat::json));
    CHECK(js["topics"].size() == 5);
    CHECK(js["trend_ranking"].size() == 25);
    CHECK(js["config_hash"] == m1.config_hash);
    for (const auto& series : js["series"]) {
      const auto csv = io::read_file(s.dir / "out" / series["path"].get<std::string>());
      CHECK(csv.rfind("t,value\n", 0) == 0);
      CHECK(series["length"].get<std::size_t>() <= 500);
    }

    const auto csv = report(c, ReportFormat::csv);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);
    CHECK(csv.rfind("rank,trend,arima_order,rmse,related_topic\n", 0) == 0);
  }

  TEST_CASE("a different seed changes the sampled artifacts") {
    Scratch a("seed_a"), b("seed_b");
    const auto ca = toy_config(a.dir / "out");
    const auto cb = toy_config(b.dir / "out", [](json& j) { j["seed"] = 8; });
    for (Stage st : {Stage::ingest, Stage::preprocess, Stage::translate, Stage::topics}) {
      run_stage(st, ca);
      run_stage(st, cb);
    }
    CHECK(io::read_file(a.dir / "out/preprocess/tokens.jsonl") == io::read_file(b.dir / "out/preprocess/tokens.jsonl"));
    CHECK(io::read_file(a.dir / "out/topics/model.json") != io::read_file(b.dir / "out/topics/model.json"));
  }

  TEST_CASE("output lock is exclusive") {
    Scratch s("lock");
    {
      OutputLock held(s.dir / "out");
      CHECK_THROWS_AS(OutputLock(s.dir / "out"), ConfigError);
      CHECK_THROWS_AS(run_all(toy_config(s.dir / "out")), ConfigError);
    }
    CHECK_NOTHROW(OutputLock(s.dir / "out"));
  }

  TEST_CASE("atomic writes leave only the final file") {
    Scratch s("atomic");
    io::write_file_atomic(s.dir / "a.txt", "hello\n");
    CHECK(io::read_file(s.dir / "a.txt") == "hello\n");
    CHECK_FALSE(fs::exists(s.dir / "a.txt.tmp"));
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("cli exit codes") {
    Scratch s("cli");
    const auto cfg = write_config(s.dir);
    CHECK(run_cli("all --config " + cfg.string() + " --dry-run") == 0);
    CHECK_FALSE(fs::exists(s.dir / "out" / "manifest.json"));
    CHECK(run_cli("ingest --config " + (s.dir / "missing.json").string()) == 2);
    const auto bad = write_config(s.dir / ".." / fs::path(s.dir.filename().string() + "_bad"),
                                  [](json& j) { j["embeddings"]["words"] = "/nonexistent/vectors.vec"; });
    CHECK(run_cli("all --config " + bad.string()) == 2);
    fs::remove_all(bad.parent_path());
    CHECK(run_cli("topics --config " + cfg.string()) == 3);
    CHECK(run_cli("ingest --config " + cfg.string()) == 0);
    CHECK(run_cli("report --config " + cfg.string()) == 3);
    CHECK(run_cli("all --config " + cfg.string()) == 0);
    CHECK(run_cli("report --config " + cfg.string() + " --format json --out " + (s.dir / "r.json").string()) == 0);
    CHECK(json::parse(io::read_file(s.dir / "r.json"))["topics"].size() == 5);
  }

  TEST_CASE("failure report names the failing stage") {
    Scratch s("failure");
    // Clearly broken corpus: the ingest stage fails with a parse error.
    fs::create_directories(s.dir / "data");
    std::ofstream(s.dir / "data/corpus.jsonl") << "{\"id\":\"a\"}\n";
    const auto c = toy_config(s.dir / "out", [&](json& j) { j["corpus"]["path"] = (s.dir / "data/corpus.jsonl").string(); });
    CHECK_THROWS_AS(run_all(c), StageFailure);
    const auto failure = json::parse(io::read_file(s.dir / "out/failure.json"));
    CHECK(failure["stage"] == "ingest");
  }
}
