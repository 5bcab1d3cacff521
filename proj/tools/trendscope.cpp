#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "trendscope/error.hpp"
#include "trendscope/io_util.hpp"
#include "trendscope/pipeline.hpp"
#include "trendscope/translator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kStageFailure = 3;

int serve_mock_mt(const std::string& terms_path, const std::string& host, int port) {
  trendscope::MockMtClient client(trendscope::MockMtClient::load_terms(terms_path));
  httplib::Server server;
  server.Post(".*", [&](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto resp = client.translate(trendscope::request_from_json(req.body));
      res.set_content(trendscope::to_json(resp), "application/json");
    } catch (const trendscope::Error& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  });
  std::fprintf(stderr, "mock MT listening on http://%s:%d/\n", host.c_str(), port);
  return server.listen(host, port) ? kOk : kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trendscope: multilingual topic and trend forecasting pipeline"};
  app.set_version_flag("--version", trendscope::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
  std::optional<std::string> endpoint;
  std::string format = "markdown";
  std::string report_out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "pipeline config (JSON)")->required();
    sub->add_option("--seed", seed, "override the root seed");
    sub->add_flag("--dry-run", dry_run, "print the stage plan without running");
    sub->add_option("--mt-endpoint", endpoint, "remote MT endpoint (http://host:port/path)");
  };

  std::vector<CLI::App*> stage_cmds;
  for (auto stage : trendscope::all_stages()) {
    const std::string name(trendscope::to_string(stage));
    auto* sub = app.add_subcommand(name, "run the " + name + " stage");
    add_common(sub);
    stage_cmds.push_back(sub);
  }
  auto* all = app.add_subcommand("all", "run every stage in order");
  add_common(all);
  auto* rep = app.add_subcommand("report", "summarize a completed run");
  add_common(rep);
  rep->add_option("--format", format, "json, csv or markdown")->check(CLI::IsMember({"json", "csv", "markdown"}));
  rep->add_option("--out", report_out, "write the report here instead of stdout");

  std::string terms_path;
  std::string host = "127.0.0.1";
  int port = 8089;
  auto* mock = app.add_subcommand("mock-mt", "serve the remote MT contract from a term file");
  mock->add_option("--terms", terms_path, "TSV term<TAB>translation")->required();
  mock->add_option("--host", host);
  mock->add_option("--port", port);

  CLI11_PARSE(app, argc, argv);

  if (mock->parsed()) {
    try {
      return serve_mock_mt(terms_path, host, port);
    } catch (const trendscope::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    }
  }

  trendscope::PipelineConfig config;
  try {
    config = trendscope::load_config(config_path, seed);
    if (endpoint) config.mt_endpoint = endpoint;
  } catch (const trendscope::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (rep->parsed()) {
      const auto text = trendscope::report(config, trendscope::parse_report_format(format));
      if (report_out.empty()) {
        std::cout << text;
      } else {
        trendscope::io::write_file_atomic(report_out, text);
      }
      return kOk;
    }
    if (all->parsed()) {
      trendscope::validate(config);
      if (dry_run) {
        std::cout << trendscope::plan(config);
        return kOk;
      }
      const auto manifest = trendscope::run_all(config);
      std::cout << "completed " << manifest.stages.size() << " stages; manifest at "
                << (config.output_dir / "manifest.json").string() << "\n";
      return kOk;
    }
    for (std::size_t i = 0; i < stage_cmds.size(); ++i) {
      if (!stage_cmds[i]->parsed()) continue;
      const auto stage = trendscope::all_stages()[i];
      if (dry_run) {
        std::cout << trendscope::plan(config, stage);
        return kOk;
      }
      trendscope::validate(config);
      const auto record = trendscope::run_stage(stage, config);
      for (const auto& [path, digest] : record.outputs) std::cout << digest << "  " << path << "\n";
      return kOk;
    }
  } catch (const trendscope::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const trendscope::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStageFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStageFailure;
  }
  return kOk;
}
