#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trendscope/corpus_io.hpp"
#include "trendscope/forecast.hpp"
#include "trendscope/lexikit.hpp"
#include "trendscope/topic_models.hpp"

namespace trendscope {

enum class Stage { ingest, preprocess, translate, topics, coherence, trends, forecast };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);
const std::vector<Stage>& all_stages();
// Direct upstream stages.
std::vector<Stage> stage_inputs(Stage stage);

struct DictionarySpec {
  std::filesystem::path path;
  DictionaryKind kind = DictionaryKind::bilingual;
  Lang source = Lang::unknown;  // unknown applies to every non-English document
};

struct ModelSection {
  ModelConfig fixed;
  GibbsSchedule schedule{200, 100};
  std::size_t top_n = 10;
  std::optional<SearchSpec> search;  // seed is overwritten by the stage seed
};

struct ForecastSection {
  std::optional<std::size_t> window;  // default_window(D) when unset
  std::size_t max_points = 500;
  std::size_t ma_window = 5;
  int p_max = 2;
  int d_max = 1;
  int q_max = 2;
  Criterion criterion = Criterion::bic;
  double train_fraction = 0.7;
  std::size_t max_parallel = 1;
};

// Paths are resolved against the directory holding the config file.
struct PipelineConfig {
  std::filesystem::path corpus;
  CorpusFormat corpus_format = CorpusFormat::jsonl;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  PreprocessConfig preprocess;
  std::map<std::string, std::filesystem::path> stopword_files;

  std::vector<DictionarySpec> dictionaries;
  std::optional<std::filesystem::path> mock_mt_terms;
  std::optional<std::string> mt_endpoint;
  std::size_t max_in_flight = 1;

  std::filesystem::path embeddings;
  std::optional<std::filesystem::path> embedding_ngrams;
  std::size_t min_n = 3;
  std::size_t max_n = 6;

  std::filesystem::path trends;
  double min_similarity = 0.1;
  bool use_topic_hint = true;

  ModelSection model;
  ForecastSection forecast;

  // Canonical JSON text the config hash is computed over.
  std::string canonical;
};

// Throws ConfigError for malformed JSON, unknown values or missing files.
PipelineConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});
PipelineConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir,
                            std::optional<std::uint64_t> seed_override = {});
// Checks every referenced input file exists. Throws ConfigError.
void validate(const PipelineConfig& config);

// Per-stage seed: derive_seed(root, stage name).
std::uint64_t stage_seed(std::uint64_t root, Stage stage);

struct StageRecord {
  Stage stage;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // name -> sha256
  std::map<std::string, std::string> outputs;  // path relative to output_dir -> sha256
};

struct RunManifest {
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;  // canonical stage order

  bool complete() const;
  const StageRecord* find(Stage stage) const;
};

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& json_text);
// Missing file -> empty manifest.
RunManifest load_manifest(const std::filesystem::path& output_dir);

std::string tool_version();

// Runs one stage, writes its artifacts atomically and records it in
// out/manifest.json. Throws MissingUpstream for absent upstream artifacts;
// other failures are rethrown as StageFailure.
StageRecord run_stage(Stage stage, const PipelineConfig& config);

// Validates, then runs all stages in order. On failure a failure report
// is written to out/failure.json and the error propagates.
RunManifest run_all(const PipelineConfig& config);

// Human-readable plan of what run_all / run_stage would do.
std::string plan(const PipelineConfig& config, std::optional<Stage> only = {});

enum class ReportFormat { json, csv, markdown };
ReportFormat parse_report_format(std::string_view name);

// Throws IncompleteManifest unless every stage is recorded.
std::string report(const PipelineConfig& config, ReportFormat format);

// Holds out/.lock for the lifetime of the object. Throws ConfigError if
// another run owns the directory.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& output_dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace trendscope
