// Copyright 2026 The PromptScope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "promptscope/common/error.hpp"
#include "promptscope/common/files.hpp"
#include "promptscope/common/strings.hpp"
#include "promptscope/llm/backend.hpp"
#include "promptscope/llm/experiment.hpp"
#include "promptscope/llm/gateway.hpp"
#include "promptscope/service/api.hpp"
#include "promptscope/service/server.hpp"
#include "promptscope/workspace/dataset.hpp"
#include "promptscope/workspace/project.hpp"
#include "promptscope/workspace/views.hpp"

namespace {

namespace fs = std::filesystem;
namespace ps = promptscope;
namespace ws = promptscope::workspace;
using nlohmann::json;

struct Globals {
  std::string backend = "mock";
  int max_in_flight = 4;
  double rps = 0;
};

std::shared_ptr<ps::llm::Gateway> make_gateway(const Globals& g, const std::string& model) {
  ps::llm::GatewayOptions opts;
  opts.max_in_flight = g.max_in_flight;
  opts.requests_per_second = g.rps;
  if (!model.empty()) opts.default_model = model;
  return std::make_shared<ps::llm::Gateway>(ps::llm::make_backend(g.backend), opts);
}

ps::llm::PromptBlocks read_blocks(const fs::path& path) {
  auto text = ps::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ps::Error(ps::ErrorKind::kInvalidInput, "PROMPT_FILE_INVALID", "invalid prompt file",
                    path.string() + ": " + e.what());
  }
  auto blocks = ps::llm::PromptBlocks::from_json(j.contains("blocks") ? j["blocks"] : j);
  blocks.validate();
  return blocks;
}

void print_run(const ws::Project& p, const ws::RunRecord& r) {
  std::cout << "run " << r.id << " (" << ws::scope_name(r.scope) << ", version " << r.version_id
            << "): " << ws::status_name(r.status) << ", " << r.succeeded() << "/"
            << r.outputs.size() << " documents, " << r.backend_calls << " backend calls\n";
  if (!r.error.empty()) std::cout << "  error: " << r.error << "\n";
  for (const auto& o : r.outputs) {
    if (!o.ok()) std::cout << "  " << o.doc_id << ": " << o.error << "\n";
  }
  if (r.scope == ws::RunScope::kBaseline && p.has_baseline()) {
    const auto& b = p.baseline();
    std::cout << "clusters: " << b.clusters.cluster_count() << ", validation:";
    for (auto id : b.validation_ids()) std::cout << " " << id;
    std::cout << "\n";
  }
}

int cmd_init(const fs::path& dataset, const fs::path& project, const std::string& model,
             double temperature) {
  ws::ProjectSettings settings;
  if (!model.empty()) settings.model = model;
  settings.temperature = temperature;
  auto p = ws::Project::create(project, ws::Dataset::load(dataset), settings);
  std::cout << "initialized " << project.string() << " with " << p.dataset().size()
            << " documents\n";
  return 0;
}

int cmd_baseline(const Globals& g, const fs::path& project, const fs::path& prompt_file) {
  auto blocks = read_blocks(prompt_file);
  auto p = ws::Project::open(project);
  int version = 0;
  if (p.versions().empty()) {
    version = p.add_version(blocks, std::nullopt, "baseline");
  } else {
    version = p.versions().front().id;
    p.update_version(version, blocks, p.version(version).note);
  }
  auto gateway = make_gateway(g, p.settings().model);
  auto record = p.run_prompt(version, ws::RunScope::kBaseline, *gateway);
  p.save();
  print_run(p, record);
  return record.status == ws::RunStatus::kFailed ? 1 : 0;
}

int cmd_version(const fs::path& project, const fs::path& prompt_file, int parent,
                const std::string& note) {
  auto p = ws::Project::open(project);
  int id = p.add_version(read_blocks(prompt_file), parent, note);
  p.save();
  std::cout << "version " << id << " (parent " << parent << ")\n";
  return 0;
}

int cmd_run(const Globals& g, const fs::path& project, int version, const std::string& scope) {
  auto p = ws::Project::open(project);
  auto gateway = make_gateway(g, p.settings().model);
  auto record = p.run_prompt(version, ws::parse_scope(scope), *gateway);
  p.save();
  print_run(p, record);
  return record.status == ws::RunStatus::kFailed ? 1 : 0;
}

int cmd_export(const fs::path& project, const std::string& what, const std::string& out) {
  auto p = ws::Project::load(project);
  std::string content;
  if (what == "csv") {
    content = ws::export_csv(p);
  } else {
    content = p.state_json().dump(2) + "\n";
  }
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    ps::write_file_atomic(out, content);
  }
  return 0;
}

ps::service::Server* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const Globals& g, const fs::path& project, const std::string& host, int port,
              const std::string& static_dir) {
  auto p = ws::Project::open(project);
  auto gateway = make_gateway(g, p.settings().model);
  ps::service::Api api(std::move(p), gateway);
  ps::service::ServerOptions opts;
  opts.host = host;
  opts.port = port;
  opts.static_dir = static_dir;
  ps::service::Server server(api, opts);
  int bound = server.bind();
  std::cout << "listening on http://" << host << ":" << bound << ps::service::kApiPrefix
            << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  api.wait_for_all_runs();
  return 0;
}

std::vector<ps::llm::ExperimentItem> load_items(const std::string& items_path,
                                                const std::string& project) {
  std::vector<ps::llm::ExperimentItem> items;
  if (!items_path.empty()) {
    std::istringstream in(ps::read_file(items_path));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (ps::trim(line).empty()) continue;
      try {
        auto j = json::parse(line);
        auto id = j.at("id");
        items.push_back({id.is_string() ? id.get<std::string>() : id.dump(),
                         j.at("summary").get<std::string>(), j.value("article", "")});
      } catch (const json::exception& e) {
        throw ps::Error(ps::ErrorKind::kInvalidInput, "ITEMS_INVALID",
                        "malformed line " + std::to_string(n), items_path + ": " + e.what());
      }
    }
    return items;
  }
  if (project.empty()) {
    throw ps::Error(ps::ErrorKind::kInvalidInput, "NO_ITEMS", "no items to score",
                    "pass --items or --project");
  }
  auto p = ws::Project::load(project);
  const auto& run = p.run(p.baseline().run_id);
  for (const auto& o : run.outputs) {
    if (o.ok()) items.push_back({o.doc_id, o.summary, p.dataset().at(o.doc_id).text});
  }
  return items;
}

int cmd_experiment(const Globals& g, const std::string& metric, const std::string& levels,
                   const std::string& temps, int repeats, const std::string& out,
                   const std::string& items_path, const std::string& project,
                   const std::string& prompts, const std::string& model) {
  ps::llm::ExperimentOptions opts;
  opts.metric = ps::llm::parse_metric(metric);
  opts.levels.clear();
  for (const auto& l : ps::split(levels, ',')) {
    opts.levels.push_back(ps::llm::parse_definition_level(ps::trim(l)));
  }
  opts.temperatures.clear();
  for (const auto& t : ps::split(temps, ',')) {
    try {
      opts.temperatures.push_back(std::stod(std::string(ps::trim(t))));
    } catch (const std::exception&) {
      throw ps::Error(ps::ErrorKind::kInvalidInput, "INVALID_EXPERIMENT", "invalid temperature",
                      std::string(t));
    }
  }
  opts.repeats = repeats;
  opts.model = model;
  if (!prompts.empty()) opts.prompts = ps::llm::ScoringPrompts::with_overrides(prompts);
  auto items = load_items(items_path, project);
  auto gateway = make_gateway(g, model);
  auto report = ps::llm::consistency_experiment(*gateway, items, opts);
  auto summary = report.summary_json();
  if (!out.empty()) {
    fs::create_directories(out);
    ps::write_file_atomic(fs::path(out) / "consistency.csv", report.to_csv());
    ps::write_file_atomic(fs::path(out) / "summary.json", summary.dump(2) + "\n");
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-oriented evaluation of summarization prompts"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--backend", g.backend, "mock, live, or scripted:<transcript.json>")
      ->capture_default_str();
  app.add_option("--max-in-flight", g.max_in_flight, "Concurrent backend requests")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--rps", g.rps, "Requests per second, 0 for unlimited")
      ->check(CLI::NonNegativeNumber);
  app.fallthrough();

  std::string dataset, project, prompt_file, model, scope = "validation", what = "csv", out;
  std::string host = "127.0.0.1", static_dir, note;
  double temperature = 0.0;
  int version = 0, parent = 0, port = 8080;

  auto* init = app.add_subcommand("init", "Create a project from a JSONL dataset");
  init->add_option("--dataset", dataset, "JSONL file with id and text per line")->required();
  init->add_option("--project", project, "Project directory")->required();
  init->add_option("--model", model, "Model for runs");
  init->add_option("--temperature", temperature, "Sampling temperature for runs")
      ->check(CLI::Range(0.0, 2.0));

  auto* baseline = app.add_subcommand("baseline", "Run the root prompt over every document");
  baseline->add_option("--project", project, "Project directory")->required();
  baseline->add_option("--prompt-file", prompt_file, "JSON with the five blocks")->required();

  auto* ver = app.add_subcommand("version", "Add a prompt version");
  ver->add_option("--project", project, "Project directory")->required();
  ver->add_option("--prompt-file", prompt_file, "JSON with the five blocks")->required();
  ver->add_option("--parent", parent, "Parent version id")->required();
  ver->add_option("--note", note, "Free-text note");

  auto* run = app.add_subcommand("run", "Run a version on the validation set or all documents");
  run->add_option("--project", project, "Project directory")->required();
  run->add_option("--version", version, "Version id")->required();
  run->add_option("--scope", scope, "validation or full")
      ->check(CLI::IsMember({"validation", "full"}))
      ->capture_default_str();

  auto* exp = app.add_subcommand("export", "Write run outputs as CSV or project state as JSON");
  exp->add_option("--project", project, "Project directory")->required();
  exp->add_option("--what", what, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  exp->add_option("--out", out, "Output file, stdout when omitted");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--project", project, "Project directory")->required();
  serve->add_option("--port", port, "TCP port, 0 for any")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Directory served at /");

  auto* experiment = app.add_subcommand("experiment", "Scoring experiments");
  experiment->require_subcommand(1);
  std::string metric = "sentiment", levels = "none", temps = "0", items, prompts;
  int repeats = 1;
  auto* consistency =
      experiment->add_subcommand("consistency", "Variance of repeated LLM scores per item");
  consistency->add_option("--metric", metric, "sentiment, readability, or truthfulness")
      ->capture_default_str();
  consistency->add_option("--levels", levels, "Comma-separated: none, beginner, expert")
      ->capture_default_str();
  consistency->add_option("--temps", temps, "Comma-separated temperatures")->capture_default_str();
  consistency->add_option("--repeats", repeats, "Repeats per level")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  consistency->add_option("--out", out, "Directory for consistency.csv and summary.json");
  consistency->add_option("--items", items, "JSONL with id, summary, and optional article");
  consistency->add_option("--project", project, "Score the baseline summaries of a project");
  consistency->add_option("--prompts", prompts, "JSON overriding scoring instructions");
  consistency->add_option("--model", model, "Model name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*init) return cmd_init(dataset, project, model, temperature);
    if (*baseline) return cmd_baseline(g, project, prompt_file);
    if (*ver) return cmd_version(project, prompt_file, parent, note);
    if (*run) return cmd_run(g, project, version, scope);
    if (*exp) return cmd_export(project, what, out);
    if (*serve) return cmd_serve(g, project, host, port, static_dir);
    if (*consistency) {
      return cmd_experiment(g, metric, levels, temps, repeats, out, items, project, prompts,
                            model);
    }
  } catch (const ps::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what();
    if (!e.detail().empty()) std::cerr << " (" << e.detail() << ")";
    std::cerr << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
