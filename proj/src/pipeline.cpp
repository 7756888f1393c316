// Copyright 2026 The Groundkit Authors
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

#include "groundkit/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "groundkit/annotate.hpp"
#include "groundkit/corpus.hpp"
#include "groundkit/error.hpp"
#include "groundkit/explore.hpp"
#include "groundkit/rng.hpp"
#include "groundkit/unify.hpp"

namespace groundkit {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::string_view kSourceSchema = "groundkit.source/1";

// ---------------------------------------------------------------------------
// Shared stage plumbing

struct StageIo {
  RunManifest manifest;
  std::string out_dir;
  std::string manifest_path;

  StageIo(const PipelineConfig& config, const std::string& command) {
    out_dir = config.paths.out_dir;
    manifest.command = command;
    manifest.seed = config.seed;
    manifest.params_digest = config.params_digest();
    manifest_path = out_dir + "/" + command + ".manifest.json";
  }

  void add_inputs(const PipelineConfig& config,
                  const std::vector<std::string>& roles) {
    const auto& p = config.paths;
    for (const auto& role : roles) {
      if (role == "snapshots") {
        manifest.add_input("snapshots", p.snapshots);
      } else if (role == "alias_registry") {
        manifest.add_input("alias_registry", p.alias_registry);
      } else if (role == "error_patterns") {
        manifest.add_input("error_patterns", p.error_patterns);
      } else if (role == "adapters") {
        for (const auto& path : p.adapters) {
          manifest.add_input("adapter:" + fs::path(path).filename().string(),
                             path);
        }
      } else if (role == "source_steps") {
        for (const auto& path : p.source_steps) {
          manifest.add_input("source:" + fs::path(path).filename().string(),
                             path);
        }
      } else if (role == "environments") {
        for (const auto& path : p.environments) {
          manifest.add_input("env:" + fs::path(path).filename().string(),
                             path);
        }
      } else if (role == "variant_templates") {
        manifest.add_input("variant_templates:point", p.variant_point);
        manifest.add_input("variant_templates:box", p.variant_box);
        manifest.add_input("variant_templates:ocr", p.variant_ocr);
      } else if (role == "annotator_prompt") {
        manifest.add_input("annotator_prompt", p.annotator_prompt);
        if (!p.annotator_script.empty()) {
          manifest.add_input("annotator_script", p.annotator_script);
        }
      }
    }
    manifest.sort_entries();
  }

  bool up_to_date() const {
    return manifest_up_to_date(manifest_path, manifest, out_dir);
  }

  void finish(ordered_json counts) {
    manifest.counts = std::move(counts);
    manifest.sort_entries();
    write_manifest(manifest_path, manifest);
  }
};

void ensure_out_dir(const PipelineConfig& config) {
  fs::create_directories(config.paths.out_dir);
}

// ---------------------------------------------------------------------------
// In-memory stage bodies, shared between the standalone subcommands and the
// full pipeline. All deterministic.

struct WebFlow {
  std::vector<IngestedPage> pages;
  std::vector<FilteredPage> filtered;
  std::vector<SegmentedPage> segmented;
  FilterReport report;
  std::vector<GroundingRecord> reg_records;
  long pages_segmented = 0;
};

WebFlow run_web_flow(const PipelineConfig& config,
                     const std::vector<std::string>& lines) {
  WebFlow flow;
  CorpusOptions options{config.workers};
  ErrorPagePatterns patterns =
      ErrorPagePatterns::load_file(config.paths.error_patterns);
  flow.pages = ingest_corpus(lines, ExtractConfig{}, options);
  flow.filtered = filter_corpus(flow.pages, config.filter, patterns,
                                config.seed, options);
  flow.report = make_filter_report(flow.pages, flow.filtered);
  flow.segmented =
      segment_corpus(flow.pages, flow.filtered, config.segment, options);
  for (const auto& page : flow.segmented) {
    if (page.segmented) ++flow.pages_segmented;
    flow.reg_records.insert(flow.reg_records.end(), page.records.begin(),
                            page.records.end());
  }
  return flow;
}

ordered_json element_line(const IngestedPage& page,
                          const std::vector<Element>& elements) {
  ordered_json out;
  out["snapshot"] = page.snapshot.id;
  ordered_json list = ordered_json::array();
  for (const auto& element : elements) {
    ordered_json e;
    e["path"] = node_path_string(element.node_path);
    e["role"] = element.role;
    e["expr"] = element.expr;
    e["bbox"] = {element.bbox.x1, element.bbox.y1, element.bbox.x2,
                 element.bbox.y2};
    list.push_back(e);
  }
  out["elements"] = list;
  out["warnings"] = page.warnings.size();
  return out;
}

void write_jsonl(const std::string& path, std::string_view schema,
                 const std::vector<ordered_json>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << ordered_json{{"schema", std::string(schema)}}.dump() << '\n';
  for (const auto& line : lines) out << line.dump() << '\n';
  if (!out) throw DataError("write failed: " + path);
}

struct EnvFlow {
  // Keyed exploration products per environment, in config order.
  std::vector<GuiEnvironment> environments;
  std::vector<ExplorationResult> results;
  std::vector<std::string> env_snapshot_lines;  // visited states, in order
  std::vector<AgentStep> env_steps;
  long trajectories = 0;
};

EnvFlow run_env_flow(const PipelineConfig& config) {
  EnvFlow flow;
  for (const auto& path : config.paths.environments) {
    GuiEnvironment env = load_environment(path);
    ExplorationPolicy policy;
    policy.kind = config.explore.policy;
    policy.max_steps = config.explore.max_steps;
    policy.seed = derive_seed(config.seed, "explore/" + env.id);
    ExplorationResult result = explore(env, policy);
    for (const auto& state : result.visited) {
      flow.env_snapshot_lines.push_back(
          serialize_snapshot(env.states.at(state)));
    }
    for (const auto& trajectory : result.trajectories) {
      auto steps = trajectory_to_steps(trajectory, env.task, env);
      flow.env_steps.insert(flow.env_steps.end(), steps.begin(), steps.end());
    }
    flow.trajectories += static_cast<long>(result.trajectories.size());
    flow.environments.push_back(std::move(env));
    flow.results.push_back(std::move(result));
  }
  return flow;
}

std::unique_ptr<CompletionClient> make_client(const PipelineConfig& config) {
  if (!config.paths.annotator_script.empty()) {
    return std::make_unique<ScriptedClient>(ScriptedClient::parse_script(
        read_text_file(config.paths.annotator_script)));
  }
  return std::make_unique<TemplateClient>(config.annotate.response_template);
}

struct AnnotateFlow {
  std::vector<GroundingRecord> ig_records;
  long requests = 0;
  long skipped = 0;  // acted element capped out of the overlay
};

AnnotateFlow run_annotate_flow(const PipelineConfig& config,
                               const EnvFlow& env_flow,
                               std::map<std::string, std::vector<Element>>*
                                   elements_by_snapshot_out) {
  AnnotateFlow flow;
  const std::string prompt_template =
      read_text_file(config.paths.annotator_prompt);
  std::unique_ptr<CompletionClient> client = make_client(config);
  const bool scripted = !config.paths.annotator_script.empty();

  RetryPolicy retry;
  retry.max_retries = config.annotate.max_retries;
  retry.base_backoff_ms = config.annotate.base_backoff_ms;

  struct Job {
    AnnotationRequest request;
    GroundingRecord record;  // target prefilled; text filled from response
  };
  std::vector<Job> jobs;

  for (const auto& env : env_flow.environments) {
    // Overlays come from the filtered element set of each screen.
    FilterConfig cap_config = config.filter;
    std::map<std::string, std::vector<Element>> capped;
    for (const auto& [state_id, snapshot] : env.states) {
      auto elements = extract_elements(snapshot);
      cap_config.seed = derive_seed(config.seed, "cap/" + snapshot.id);
      capped.emplace(state_id, cap_elements(elements, cap_config));
      if (elements_by_snapshot_out) {
        (*elements_by_snapshot_out)[snapshot.id] = capped.at(state_id);
      }
    }
    for (std::size_t r = 0; r < env_flow.results.size(); ++r) {
      if (env_flow.environments[r].id != env.id) continue;
      for (const auto& trajectory : env_flow.results[r].trajectories) {
        for (const auto& step : trajectory.steps) {
          const auto& elements = capped.at(step.state);
          int acted_mark = 0;
          for (std::size_t i = 0; i < elements.size(); ++i) {
            if (elements[i].node_path == step.element) {
              acted_mark = static_cast<int>(i) + 1;
              break;
            }
          }
          if (acted_mark == 0) {
            ++flow.skipped;
            continue;
          }
          Job job;
          job.request.high_level_instruction = env.task;
          job.request.before_ref = step.state;
          job.request.after_ref = step.next_state;
          job.request.overlay = build_overlay(elements);
          job.request.acted_mark = acted_mark;

          const auto& snapshot = env.states.at(step.state);
          job.record.snapshot_id = step.state;
          job.record.window_index = 0;
          job.record.kind = GroundingKind::Ig;
          job.record.target_box = normalize_box(
              elements[static_cast<std::size_t>(acted_mark - 1)].bbox,
              snapshot.page_size);
          job.record.node_path = node_path_string(step.element);
          jobs.push_back(std::move(job));
        }
      }
    }
  }

  flow.requests = static_cast<long>(jobs.size());
  flow.ig_records.resize(jobs.size());
  std::vector<std::string> failures(jobs.size());
  bool failed = false;

  // Bounded parallelism over independent requests. The scripted transport
  // consumes a global sequence, so it runs serially to stay deterministic.
  const int parallelism = scripted ? 1 : config.annotate.parallelism;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(parallelism)
#endif
  for (long long i = 0; i < static_cast<long long>(jobs.size()); ++i) {
    try {
      auto outcome =
          annotate(jobs[static_cast<std::size_t>(i)].request, *client,
                   prompt_template, retry,
                   static_cast<std::size_t>(config.annotate.max_response_chars));
      GroundingRecord record = jobs[static_cast<std::size_t>(i)].record;
      record.text = outcome.response.sub_instruction;
      flow.ig_records[static_cast<std::size_t>(i)] = std::move(record);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(i)] = e.what();
      failed = true;
    }
  }
  (void)parallelism;
  if (failed) {
    for (std::size_t i = 0; i < failures.size(); ++i) {
      if (!failures[i].empty()) {
        throw ClientError("annotation request " + std::to_string(i) +
                              " failed: " + failures[i],
                          /*transient=*/false);
      }
    }
  }
  return flow;
}

struct UnifyFlow {
  std::vector<AgentStep> steps;           // source datasets + environments
  std::vector<GroundingRecord> variants;  // variantized REG corpus
  std::vector<ConversationPack> packs;
};

std::vector<AgentStep> unify_sources(const PipelineConfig& config) {
  AliasRegistry registry =
      AliasRegistry::load_file(config.paths.alias_registry);
  std::map<std::string, DatasetAdapter> adapters;
  for (const auto& path : config.paths.adapters) {
    DatasetAdapter adapter = DatasetAdapter::load_file(path);
    adapter.register_aliases(registry);
    std::string dataset = adapter.dataset();
    adapters.emplace(std::move(dataset), std::move(adapter));
  }

  std::vector<AgentStep> steps;
  for (const auto& path : config.paths.source_steps) {
    auto lines = read_lines(path);
    if (lines.empty()) throw DataError(path + ": empty source file");
    ordered_json header;
    try {
      header = ordered_json::parse(lines.front());
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(path + ": bad header: " + e.what());
    }
    if (!header.contains("schema") ||
        header["schema"] != std::string(kSourceSchema) ||
        !header.contains("dataset")) {
      throw DataError(path + ": expected header {schema: \"" +
                      std::string(kSourceSchema) + "\", dataset: ...}");
    }
    const std::string dataset = header["dataset"].get<std::string>();
    auto adapter = adapters.find(dataset);
    if (adapter == adapters.end()) {
      throw ConfigError(path + ": no adapter for dataset \"" + dataset + "\"");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      ordered_json doc;
      try {
        doc = ordered_json::parse(lines[i]);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path + ":" + std::to_string(i + 1) + ": " + e.what());
      }
      try {
        SourceStep source = adapter->second.step_from_json(doc);
        steps.push_back(unify_step(source, adapter->second, registry));
      } catch (const DataError& e) {
        throw DataError(path + ":" + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  return steps;
}

UnifyFlow run_unify_flow(const PipelineConfig& config,
                         const std::vector<GroundingRecord>& reg_records,
                         const std::vector<AgentStep>& env_steps) {
  UnifyFlow flow;
  flow.steps = unify_sources(config);
  flow.steps.insert(flow.steps.end(), env_steps.begin(), env_steps.end());

  VariantTemplates templates =
      VariantTemplates::load(config.paths.variant_point,
                             config.paths.variant_box,
                             config.paths.variant_ocr);
  flow.variants = variantize_corpus(reg_records,
                                    derive_seed(config.seed, "variants"),
                                    templates);
  flow.packs = pack_conversations(flow.variants, config.unify.pack_size,
                                  config.unify.prefix_prompt_pool,
                                  derive_seed(config.seed, "packs"));
  return flow;
}

MetricReport run_evaluate_flow(const PipelineConfig& config,
                               std::vector<AgentStep> steps,
                               std::vector<GroundingRecord> grounding) {
  CustomActionManifest manifest;
  for (const auto& path : config.paths.adapters) {
    manifest.merge(DatasetAdapter::load_file(path).custom_actions());
  }
  auto predictor = predictor_from_name(config.evaluate.predictor);
  if (!predictor) {
    throw ConfigError("unknown predictor \"" + config.evaluate.predictor +
                      "\"");
  }
  fill_predictions(steps, *predictor, derive_seed(config.seed, "predict"));
  MetricReport report = evaluate_steps(steps, manifest);
  if (!grounding.empty()) {
    fill_grounding_predictions(grounding, *predictor,
                               derive_seed(config.seed, "ground"));
    report.grounding = evaluate_grounding(grounding);
  }
  return report;
}

std::vector<ordered_json> trajectory_lines(const EnvFlow& flow) {
  std::vector<ordered_json> lines;
  for (std::size_t i = 0; i < flow.environments.size(); ++i) {
    const auto& env = flow.environments[i];
    for (const auto& trajectory : flow.results[i].trajectories) {
      ordered_json t;
      t["env"] = env.id;
      ordered_json steps = ordered_json::array();
      for (const auto& step : trajectory.steps) {
        ordered_json s;
        s["state"] = step.state;
        s["element"] = node_path_string(step.element);
        s["action"] = serialize_action(step.action, Dialect::Tagged);
        s["next"] = step.next_state;
        steps.push_back(s);
      }
      t["steps"] = steps;
      lines.push_back(t);
    }
  }
  return lines;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stage runners

StageResult run_ingest(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"snapshots"});
  ensure_out_dir(config);
  StageIo io(config, "ingest");
  io.add_inputs(config, {"snapshots"});
  if (io.up_to_date()) {
    log << "ingest: up to date\n";
    return StageResult{true, {}};
  }

  auto lines = read_lines(config.paths.snapshots);
  auto pages = ingest_corpus(lines, ExtractConfig{},
                             CorpusOptions{config.workers});
  std::vector<ordered_json> out;
  long elements = 0;
  long warnings = 0;
  for (const auto& page : pages) {
    out.push_back(element_line(page, page.elements));
    elements += static_cast<long>(page.elements.size());
    warnings += static_cast<long>(page.warnings.size());
  }
  write_jsonl(io.out_dir + "/elements.jsonl", "groundkit.elements/1", out);
  io.manifest.add_output(io.out_dir, "elements.jsonl");

  ordered_json counts{{"pages", pages.size()},
                      {"elements", elements},
                      {"warnings", warnings}};
  io.finish(counts);
  log << "ingest: " << pages.size() << " pages, " << elements
      << " elements\n";
  return StageResult{false, counts};
}

StageResult run_filter(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"snapshots", "error_patterns"});
  ensure_out_dir(config);
  StageIo io(config, "filter");
  io.add_inputs(config, {"snapshots", "error_patterns"});
  if (io.up_to_date()) {
    log << "filter: up to date\n";
    return StageResult{true, {}};
  }

  auto lines = read_lines(config.paths.snapshots);
  WebFlow flow = run_web_flow(config, lines);

  std::vector<ordered_json> kept;
  for (std::size_t i = 0; i < flow.pages.size(); ++i) {
    if (flow.filtered[i].verdict != PageVerdict::Accept) continue;
    kept.push_back(element_line(flow.pages[i], flow.filtered[i].kept));
  }
  write_jsonl(io.out_dir + "/kept_elements.jsonl", "groundkit.elements/1",
              kept);
  write_text_file(io.out_dir + "/filter_report.json",
                  flow.report.to_json().dump(2) + "\n");
  io.manifest.add_output(io.out_dir, "kept_elements.jsonl");
  io.manifest.add_output(io.out_dir, "filter_report.json");

  ordered_json counts = flow.report.to_json();
  counts.erase("schema");
  io.finish(counts);
  log << "filter: " << flow.report.pages_out << "/" << flow.report.pages_in
      << " pages kept\n";
  return StageResult{false, counts};
}

StageResult run_segment(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"snapshots", "error_patterns"});
  ensure_out_dir(config);
  StageIo io(config, "segment");
  io.add_inputs(config, {"snapshots", "error_patterns"});
  if (io.up_to_date()) {
    log << "segment: up to date\n";
    return StageResult{true, {}};
  }

  auto lines = read_lines(config.paths.snapshots);
  WebFlow flow = run_web_flow(config, lines);
  write_grounding_file(io.out_dir + "/reg_web.jsonl", flow.reg_records);
  io.manifest.add_output(io.out_dir, "reg_web.jsonl");

  ordered_json counts{{"pages_segmented", flow.pages_segmented},
                      {"reg_records", flow.reg_records.size()}};
  io.finish(counts);
  log << "segment: " << flow.reg_records.size() << " REG records from "
      << flow.pages_segmented << " pages\n";
  return StageResult{false, counts};
}

StageResult run_explore(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"environments"});
  ensure_out_dir(config);
  StageIo io(config, "explore");
  io.add_inputs(config, {"environments"});
  if (io.up_to_date()) {
    log << "explore: up to date\n";
    return StageResult{true, {}};
  }

  EnvFlow flow = run_env_flow(config);
  {
    std::ofstream out(io.out_dir + "/env_snapshots.jsonl", std::ios::binary);
    if (!out) throw DataError("cannot write env_snapshots.jsonl");
    for (const auto& line : flow.env_snapshot_lines) out << line << '\n';
  }
  write_jsonl(io.out_dir + "/trajectories.jsonl", "groundkit.trajectories/1",
              trajectory_lines(flow));
  write_step_file(io.out_dir + "/env_steps.jsonl", flow.env_steps);
  io.manifest.add_output(io.out_dir, "env_snapshots.jsonl");
  io.manifest.add_output(io.out_dir, "trajectories.jsonl");
  io.manifest.add_output(io.out_dir, "env_steps.jsonl");

  ordered_json counts{{"environments", flow.environments.size()},
                      {"states_visited", flow.env_snapshot_lines.size()},
                      {"trajectories", flow.trajectories},
                      {"env_steps", flow.env_steps.size()}};
  io.finish(counts);
  log << "explore: " << flow.env_snapshot_lines.size() << " states, "
      << flow.env_steps.size() << " steps\n";
  return StageResult{false, counts};
}

StageResult run_annotate(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"environments", "annotator_prompt"});
  ensure_out_dir(config);
  StageIo io(config, "annotate");
  io.add_inputs(config, {"environments", "annotator_prompt"});
  if (io.up_to_date()) {
    log << "annotate: up to date\n";
    return StageResult{true, {}};
  }

  EnvFlow env_flow = run_env_flow(config);
  std::map<std::string, std::vector<Element>> elements_by_snapshot;
  AnnotateFlow flow =
      run_annotate_flow(config, env_flow, &elements_by_snapshot);
  write_grounding_file(io.out_dir + "/ig_records.jsonl", flow.ig_records);
  io.manifest.add_output(io.out_dir, "ig_records.jsonl");

  auto findings = lint_annotations(flow.ig_records, elements_by_snapshot);
  std::vector<ordered_json> lint_lines;
  for (const auto& finding : findings) {
    ordered_json f;
    f["kind"] = finding.kind;
    f["record"] = finding.record_index;
    f["snapshot"] = finding.snapshot_id;
    f["window"] = finding.window_index;
    f["message"] = finding.message;
    lint_lines.push_back(f);
  }
  write_jsonl(io.out_dir + "/lint.jsonl", "groundkit.lint/1", lint_lines);
  io.manifest.add_output(io.out_dir, "lint.jsonl");

  ordered_json counts{{"requests", flow.requests},
                      {"ig_records", flow.ig_records.size()},
                      {"skipped", flow.skipped},
                      {"lint_findings", findings.size()}};
  io.finish(counts);
  log << "annotate: " << flow.ig_records.size() << " IG records, "
      << findings.size() << " lint findings\n";
  return StageResult{false, counts};
}

StageResult run_unify(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"snapshots", "error_patterns", "alias_registry",
                        "adapters", "source_steps", "environments",
                        "variant_templates"});
  ensure_out_dir(config);
  StageIo io(config, "unify");
  io.add_inputs(config,
                {"snapshots", "error_patterns", "alias_registry", "adapters",
                 "source_steps", "environments", "variant_templates"});
  if (io.up_to_date()) {
    log << "unify: up to date\n";
    return StageResult{true, {}};
  }

  auto lines = read_lines(config.paths.snapshots);
  WebFlow web = run_web_flow(config, lines);
  EnvFlow env = run_env_flow(config);

  // Environment screens go through the same filter/segment treatment.
  WebFlow env_pages = run_web_flow(config, env.env_snapshot_lines);
  std::vector<GroundingRecord> reg = web.reg_records;
  reg.insert(reg.end(), env_pages.reg_records.begin(),
             env_pages.reg_records.end());

  UnifyFlow flow = run_unify_flow(config, reg, env.env_steps);
  write_step_file(io.out_dir + "/unified_steps.jsonl", flow.steps);
  write_grounding_file(io.out_dir + "/variants.jsonl", flow.variants);
  write_pack_file(io.out_dir + "/packs.jsonl", flow.packs);
  io.manifest.add_output(io.out_dir, "unified_steps.jsonl");
  io.manifest.add_output(io.out_dir, "variants.jsonl");
  io.manifest.add_output(io.out_dir, "packs.jsonl");

  ordered_json counts{{"steps", flow.steps.size()},
                      {"reg_records", reg.size()},
                      {"variants", flow.variants.size()},
                      {"packs", flow.packs.size()}};
  io.finish(counts);
  log << "unify: " << flow.steps.size() << " steps, " << flow.packs.size()
      << " packs\n";
  return StageResult{false, counts};
}

StageResult run_evaluate(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"snapshots", "error_patterns", "alias_registry",
                        "adapters", "source_steps", "environments",
                        "variant_templates"});
  ensure_out_dir(config);
  StageIo io(config, "evaluate");
  io.add_inputs(config,
                {"snapshots", "error_patterns", "alias_registry", "adapters",
                 "source_steps", "environments", "variant_templates"});
  if (io.up_to_date()) {
    log << "evaluate: up to date\n";
    return StageResult{true, {}};
  }

  auto lines = read_lines(config.paths.snapshots);
  WebFlow web = run_web_flow(config, lines);
  EnvFlow env = run_env_flow(config);
  WebFlow env_pages = run_web_flow(config, env.env_snapshot_lines);
  std::vector<GroundingRecord> reg = web.reg_records;
  reg.insert(reg.end(), env_pages.reg_records.begin(),
             env_pages.reg_records.end());
  UnifyFlow unified = run_unify_flow(config, reg, env.env_steps);

  MetricReport report =
      run_evaluate_flow(config, unified.steps, unified.variants);
  write_text_file(io.out_dir + "/metric_report.json",
                  report.to_json().dump(2) + "\n");
  io.manifest.add_output(io.out_dir, "metric_report.json");

  ordered_json counts{{"steps", unified.steps.size()},
                      {"groups", report.agent.splits.size()}};
  io.finish(counts);
  log << report.table();
  return StageResult{false, counts};
}

StageResult run_pipeline(const PipelineConfig& config, std::ostream& log) {
  config.require_paths({"snapshots", "error_patterns", "alias_registry",
                        "adapters", "source_steps", "environments",
                        "variant_templates", "annotator_prompt"});
  ensure_out_dir(config);
  StageIo io(config, "pipeline");
  io.manifest_path = io.out_dir + "/manifest.json";
  io.add_inputs(config,
                {"snapshots", "error_patterns", "alias_registry", "adapters",
                 "source_steps", "environments", "variant_templates",
                 "annotator_prompt"});
  if (io.up_to_date()) {
    log << "pipeline: up to date\n";
    return StageResult{true, {}};
  }

  // Web flow.
  auto lines = read_lines(config.paths.snapshots);
  WebFlow web = run_web_flow(config, lines);
  std::vector<ordered_json> kept;
  for (std::size_t i = 0; i < web.pages.size(); ++i) {
    if (web.filtered[i].verdict != PageVerdict::Accept) continue;
    kept.push_back(element_line(web.pages[i], web.filtered[i].kept));
  }
  write_jsonl(io.out_dir + "/kept_elements.jsonl", "groundkit.elements/1",
              kept);
  write_text_file(io.out_dir + "/filter_report.json",
                  web.report.to_json().dump(2) + "\n");
  write_grounding_file(io.out_dir + "/reg_web.jsonl", web.reg_records);

  // Environment flow: explore, ingest the emitted screens, annotate.
  EnvFlow env = run_env_flow(config);
  {
    std::ofstream out(io.out_dir + "/env_snapshots.jsonl", std::ios::binary);
    if (!out) throw DataError("cannot write env_snapshots.jsonl");
    for (const auto& line : env.env_snapshot_lines) out << line << '\n';
  }
  write_jsonl(io.out_dir + "/trajectories.jsonl", "groundkit.trajectories/1",
              trajectory_lines(env));
  WebFlow env_pages = run_web_flow(config, env.env_snapshot_lines);
  write_grounding_file(io.out_dir + "/reg_env.jsonl", env_pages.reg_records);

  std::map<std::string, std::vector<Element>> elements_by_snapshot;
  AnnotateFlow annotated =
      run_annotate_flow(config, env, &elements_by_snapshot);
  write_grounding_file(io.out_dir + "/ig_records.jsonl", annotated.ig_records);
  auto findings = lint_annotations(annotated.ig_records, elements_by_snapshot);

  // Unify + pack.
  std::vector<GroundingRecord> reg = web.reg_records;
  reg.insert(reg.end(), env_pages.reg_records.begin(),
             env_pages.reg_records.end());
  UnifyFlow unified = run_unify_flow(config, reg, env.env_steps);
  write_step_file(io.out_dir + "/unified_steps.jsonl", unified.steps);
  write_grounding_file(io.out_dir + "/variants.jsonl", unified.variants);
  write_pack_file(io.out_dir + "/packs.jsonl", unified.packs);

  // Evaluate.
  MetricReport report =
      run_evaluate_flow(config, unified.steps, unified.variants);
  write_text_file(io.out_dir + "/metric_report.json",
                  report.to_json().dump(2) + "\n");

  for (const char* name :
       {"kept_elements.jsonl", "filter_report.json", "reg_web.jsonl",
        "env_snapshots.jsonl", "trajectories.jsonl", "reg_env.jsonl",
        "ig_records.jsonl", "unified_steps.jsonl", "variants.jsonl",
        "packs.jsonl", "metric_report.json"}) {
    io.manifest.add_output(io.out_dir, name);
  }

  ordered_json counts;
  counts["pages_in"] = web.report.pages_in;
  counts["pages_kept"] = web.report.pages_out;
  counts["reg_web"] = web.reg_records.size();
  counts["env_states"] = env.env_snapshot_lines.size();
  counts["trajectories"] = env.trajectories;
  counts["reg_env"] = env_pages.reg_records.size();
  counts["ig_records"] = annotated.ig_records.size();
  counts["lint_findings"] = findings.size();
  counts["steps"] = unified.steps.size();
  counts["variants"] = unified.variants.size();
  counts["packs"] = unified.packs.size();
  io.finish(counts);
  log << "pipeline: " << counts.dump() << "\n" << report.table();
  return StageResult{false, counts};
}

}  // namespace groundkit
