// Copyright 2026 The dynhoi Authors
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dynhoi/align/anchors.hpp"
#include "dynhoi/core/io.hpp"
#include "dynhoi/metrics/report.hpp"
#include "dynhoi/pipeline/demo.hpp"
#include "dynhoi/planner/denoiser.hpp"
#include "dynhoi/planner/inpainting.hpp"
#include "dynhoi/sim/task.hpp"

namespace dynhoi::pipeline {

namespace fs = std::filesystem;

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Process exit status for each error category.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return 2;
    case ErrorKind::kSimulationDiverged: return 4;
    case ErrorKind::kDegenerate:
    case ErrorKind::kIntegration: return 1;
    default: return 3;
  }
}

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inputs, options and outputs of one subcommand run, with content digests
/// so a rerun can be checked byte for byte.
struct Manifest {
  std::string command;
  Json options = Json::object();
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;

  Json to_json() const {
    auto files = [](const std::vector<fs::path>& paths) {
      Json out = Json::array();
      for (const auto& p : paths)
        out.push_back({{"path", p.generic_string()}, {"fnv1a64", hex64(fnv1a(read_text_file(p)))}});
      return out;
    };
    const Json in = files(inputs);
    // The hash covers option values and input contents, not locations.
    std::string keyed = options.dump();
    for (const Json& f : in) keyed += f.at("fnv1a64").get<std::string>();
    return {{"command", command},
            {"tool_version", kToolVersion},
            {"options", options},
            {"config_hash", hex64(fnv1a(keyed))},
            {"inputs", in},
            {"outputs", files(outputs)}};
  }
};

inline fs::path write_manifest(const fs::path& out_dir, const Manifest& m) {
  const fs::path path = out_dir / (m.command + ".manifest.json");
  write_json_file(path, m.to_json());
  return path;
}

struct CommandResult {
  std::vector<fs::path> outputs;
  std::string summary;  // human-readable text for stdout
};

/// File name up to the first dot: "carry_jump.aligned.json" -> "carry_jump".
inline std::string clip_name(const fs::path& path) {
  const std::string f = path.filename().string();
  return f.substr(0, f.find('.'));
}

inline Json meta_or_empty(const fs::path& path) { return read_meta(path); }

inline std::string meta_string(const Json& meta, const char* key, const std::string& fallback = "") {
  auto it = meta.find(key);
  return it != meta.end() && it->is_string() ? it->get<std::string>() : fallback;
}

inline sim::SimParams load_sim_params(const fs::path& config, const SkeletonSpec& sk) {
  if (config.empty()) return sim::SimParams::defaults(sk);
  return sim::params_from_json(read_json_file(config), sk);
}

// ---------------------------------------------------------------- demo

struct DemoOptions {
  fs::path out;
};

inline CommandResult cmd_demo(const DemoOptions& o) {
  CommandResult r;
  Manifest m{"demo"};
  for (const auto& clip : demo::demo_clips()) {
    const fs::path path = o.out / (clip.name + ".clip.json");
    save_clip(clip.reference, path, {{"name", clip.name}, {"style", clip.style}, {"generator", "demo"}});
    r.outputs.push_back(path);
    r.summary += "wrote " + path.generic_string() + "\n";
  }
  m.outputs = r.outputs;
  write_manifest(o.out, m);
  return r;
}

// ---------------------------------------------------------------- plan

/// Success style of a motion planned under a conditioning token; unknown
/// tokens keep the reference style.
inline std::string style_for_condition(const std::string& token, const std::string& fallback) {
  static const std::map<std::string, std::string> kTokens = {
      {"jump", "jump_forward"}, {"run", "run_forward"}, {"kick", "high_kick"}, {"dance", "dance"}};
  if (auto it = kTokens.find(token); it != kTokens.end()) return it->second;
  for (const auto& [style, name] : metrics::kStyleNames)
    if (name == token) return std::string(name);
  return fallback;
}

struct PlanOptions {
  fs::path ref;
  fs::path out;
  double onset_delay_s = planner::kDefaultOnsetDelay;
  int steps = 50;
  std::uint64_t seed = 0;
  double smoothing = 2.0;
  std::string condition = "jump";
  std::string joint_set = "interaction";
  std::uint64_t library_seed = 7;
};

/// Samples a motion from the toy prior with the reference inpainted.
inline CommandResult cmd_plan(const PlanOptions& o) {
  require(o.steps >= 1, ErrorKind::kValidation, "--steps must be at least 1");
  const HOIReference ref = load_clip(o.ref);
  ref.validate();
  const Json ref_meta = meta_or_empty(o.ref);
  auto plan = planner::make_plan(ref, o.onset_delay_s);
  plan.interaction_joints = named_joint_set(ref.human.skeleton, o.joint_set);
  const auto denoiser = planner::make_toy_denoiser(demo::jump_library(ref.human.skeleton, o.library_seed),
                                                   o.smoothing, o.steps, o.seed);
  const MotionClip motion = planner::sample_with_inpainting(denoiser, plan, {o.condition}, {.seed = o.seed});

  const std::string name = clip_name(o.ref);
  const fs::path path = o.out / (name + ".plan.json");
  save_motion(motion, path,
              {{"name", name},
               {"onset_frame", plan.onset_frame},
               {"onset_delay_s", o.onset_delay_s},
               {"steps", o.steps},
               {"seed", o.seed},
               {"joint_set", o.joint_set},
               {"condition", o.condition},
               {"style", style_for_condition(o.condition, meta_string(ref_meta, "style"))}});

  Manifest m{"plan"};
  m.options = {{"onset_delay_s", o.onset_delay_s}, {"steps", o.steps},         {"seed", o.seed},
               {"smoothing", o.smoothing},         {"condition", o.condition}, {"library_seed", o.library_seed},
               {"joint_set", o.joint_set}};
  m.inputs = {o.ref};
  m.outputs = {path};
  write_manifest(o.out, m);
  return {{path}, "planned " + name + ": " + std::to_string(motion.size()) + " frames, onset at frame " +
                      std::to_string(plan.onset_frame) + "\n"};
}

// ---------------------------------------------------------------- align

struct AlignOptions {
  fs::path ref;
  fs::path motion;
  fs::path out;
  align::AnchorLayout anchors;
};

/// Recovers the object track of a planned motion by anchor alignment.
inline CommandResult cmd_align(const AlignOptions& o) {
  const HOIReference ref = load_clip(o.ref);
  ref.validate();
  const MotionClip motion = load_motion(o.motion);
  motion.validate();
  require(motion.skeleton.joint_count() == ref.human.skeleton.joint_count() && motion.size() == ref.size(),
          ErrorKind::kValidation, "planned motion does not match the reference");
  const Json meta = meta_or_empty(o.motion);
  const int onset = meta.contains("onset_frame") ? meta.at("onset_frame").get<int>()
                                                 : planner::detect_onset(ref.contacts, ref.human.fps);
  const auto anchor_sets = align::default_object_anchors(ref, onset, o.anchors);
  const auto recovered = align::recover_object_trajectory(motion, ref, anchor_sets, onset);
  const HOIReference aligned = align::align_reference(motion, ref, anchor_sets, onset);
  const double worst = *std::max_element(recovered.residuals.begin(), recovered.residuals.end());
  const int degenerate = static_cast<int>(std::count(recovered.degenerate.begin(), recovered.degenerate.end(), true));

  const std::string name = clip_name(o.motion);
  const fs::path path = o.out / (name + ".aligned.json");
  save_clip(aligned, path,
            {{"name", name},
             {"onset_frame", onset},
             {"max_anchor_residual", worst},
             {"degenerate_frames", degenerate},
             {"style", meta_string(meta, "style", meta_string(meta_or_empty(o.ref), "style"))}});

  Manifest m{"align"};
  m.options = {{"anchor_count", o.anchors.count}, {"anchor_square_size", o.anchors.square_size}};
  m.inputs = {o.ref, o.motion};
  m.outputs = {path};
  write_manifest(o.out, m);
  char buf[160];
  std::snprintf(buf, sizeof buf, "aligned %s: max anchor residual %.3g m, %d degenerate frames\n", name.c_str(), worst,
                degenerate);
  return {{path}, buf};
}

// ---------------------------------------------------------------- rollout

struct RolloutOptions {
  fs::path ref;
  fs::path out;
  std::string blend = "mlp_pca";
  fs::path params;  // trained composer parameters; empty uses the untrained initialisation
  fs::path config;  // simulator parameters; empty uses the defaults
  std::vector<std::uint64_t> seeds{0};
  std::vector<int> hidden{32};
  int threads = 1;
};

inline composer::ComposerParams load_or_make_params(const sim::Task& task, const fs::path& path,
                                                    const std::vector<int>& hidden) {
  if (path.empty()) return task.make_params(hidden);
  const composer::ComposerParams p = composer::params_from_json(read_json_file(path));
  require(p.input_dim() == sim::kComposerFeatureDim && p.body_dim == task.model->body_dof(), ErrorKind::kValidation,
          "composer parameters do not fit this task");
  return p;
}

inline std::string blend_log_csv(const sim::RolloutResult& r) {
  std::string out = "step,reward,w_mean,w_min,w_max,r_norm,mu_norm,chosen_expert\n";
  for (std::size_t i = 0; i < r.blend_log.size(); ++i) {
    const auto& row = r.blend_log[i];
    out += std::to_string(row.step) + ',' + metrics::format_number(r.rewards[i]) + ',' +
           metrics::format_number(row.w_mean) + ',' + metrics::format_number(row.w_min) + ',' +
           metrics::format_number(row.w_max) + ',' + metrics::format_number(row.r_norm) + ',' +
           metrics::format_number(row.mu_norm) + ',' + std::to_string(row.chosen_expert) + '\n';
  }
  return out;
}

/// Executes the clip under a blend mode for every seed.
inline CommandResult cmd_rollout(const RolloutOptions& o) {
  require(!o.seeds.empty(), ErrorKind::kValidation, "at least one seed is required");
  const HOIReference ref = load_clip(o.ref);
  const Json ref_meta = meta_or_empty(o.ref);
  const auto mode = composer::parse_blend_mode(o.blend);
  const sim::Task task = sim::Task::make(ref, load_sim_params(o.config, ref.human.skeleton));
  const composer::ComposerParams params = load_or_make_params(task, o.params, o.hidden);
  const std::string name = clip_name(o.ref);
  const int episode_frames = std::min(task.model->params.config.episode_length, ref.size() - 1) + 1;

  std::vector<sim::RolloutResult> runs(o.seeds.size());
  composer::detail::parallel_for(static_cast<int>(o.seeds.size()), o.threads,
                                 [&](int i) { runs[i] = task.run(mode, params, o.seeds[i]); });

  CommandResult r;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string stem = name + "." + o.blend + ".s" + std::to_string(o.seeds[i]);
    const fs::path traj = o.out / (stem + ".rollout.json");
    save_clip(runs[i].trajectory, traj,
              {{"name", name},
               {"mode", o.blend},
               {"seed", o.seeds[i]},
               {"termination", sim::to_string(runs[i].reason)},
               {"steps", runs[i].steps()},
               {"episode_frames", episode_frames},
               {"total_reward", runs[i].total_reward()},
               {"style", meta_string(ref_meta, "style")}});
    const fs::path log = o.out / (stem + ".log.csv");
    write_text_file(log, blend_log_csv(runs[i]));
    r.outputs.push_back(traj);
    r.outputs.push_back(log);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s seed %llu: %s after %d steps, return %.3f\n", o.blend.c_str(),
                  static_cast<unsigned long long>(o.seeds[i]), sim::to_string(runs[i].reason).c_str(),
                  runs[i].steps(), runs[i].total_reward());
    r.summary += buf;
  }

  Manifest m{"rollout"};
  m.options = {{"blend", o.blend}, {"seeds", o.seeds}, {"hidden", o.hidden}};
  m.inputs = {o.ref};
  if (!o.params.empty()) m.inputs.push_back(o.params);
  if (!o.config.empty()) m.inputs.push_back(o.config);
  m.outputs = r.outputs;
  write_manifest(o.out, m);
  return r;
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  fs::path ref;
  fs::path out;
  std::string blend = "mlp_pca";
  fs::path config;
  int budget = 20;  // optimisation iterations
  int population = 16;
  int elites = 4;
  int eval_episodes = 8;
  std::uint64_t seed = 0;
  std::vector<int> hidden{32};
  int threads = 1;
};

struct Trained {
  composer::ComposerParams params;
  composer::CemResult trace;
};

inline Trained train_mode(const sim::Task& task, composer::BlendMode mode, const TrainOptions& o) {
  require(composer::is_learned(mode), ErrorKind::kValidation,
          "blend mode '" + composer::to_string(mode) + "' has no trainable parameters");
  require(o.budget >= 0 && o.population >= 2 && o.elites >= 1 && o.elites <= o.population,
          ErrorKind::kValidation, "bad training budget");
  composer::TrainOptions t;
  t.cem.iterations = o.budget;
  t.cem.population = o.population;
  t.cem.elites = o.elites;
  t.cem.eval_episodes = o.eval_episodes;
  t.cem.seed = o.seed;
  t.cem.threads = o.threads;
  auto result = composer::train_composer(task.episode_return(mode), task.make_params(o.hidden), t);
  return {std::move(result.params), std::move(result.trace)};
}

inline std::string curve_csv(const composer::CemResult& trace) {
  std::string out = "iteration,mean_return,best_return\n";
  for (const auto& p : trace.curve)
    out += std::to_string(p.iteration) + ',' + metrics::format_number(p.mean_return) + ',' +
           metrics::format_number(p.best_return) + '\n';
  return out;
}

/// Trains composer parameters for a learned blend mode.
inline CommandResult cmd_train(const TrainOptions& o) {
  const HOIReference ref = load_clip(o.ref);
  const auto mode = composer::parse_blend_mode(o.blend);
  const sim::Task task = sim::Task::make(ref, load_sim_params(o.config, ref.human.skeleton));
  const Trained trained = train_mode(task, mode, o);
  const std::string stem = clip_name(o.ref) + "." + o.blend;
  const fs::path params = o.out / (stem + ".params.json");
  const fs::path curve = o.out / (stem + ".curve.csv");
  write_json_file(params, composer::params_to_json(trained.params));
  write_text_file(curve, curve_csv(trained.trace));

  Manifest m{"train"};
  m.options = {{"blend", o.blend},           {"budget", o.budget}, {"population", o.population},
               {"elites", o.elites},         {"seed", o.seed},     {"eval_episodes", o.eval_episodes},
               {"hidden", o.hidden}};
  m.inputs = {o.ref};
  if (!o.config.empty()) m.inputs.push_back(o.config);
  m.outputs = {params, curve};
  write_manifest(o.out, m);
  char buf[160];
  std::snprintf(buf, sizeof buf, "trained %s: held-out return %.3f -> %.3f\n", o.blend.c_str(),
                trained.trace.init_return, trained.trace.final_return);
  return {{params, curve}, buf};
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::vector<fs::path> executed;
  fs::path ref;
  fs::path out;
  std::string style;  // empty: taken from the file metadata
};

inline metrics::MetricsReport evaluate_file(const fs::path& executed_path, const HOIReference& ref,
                                            const Json& ref_meta, const std::string& style_override) {
  const HOIReference exe = load_clip(executed_path);
  const Json meta = meta_or_empty(executed_path);
  const std::string style = !style_override.empty() ? style_override
                                                    : meta_string(meta, "style", meta_string(ref_meta, "style"));
  require(!style.empty(), ErrorKind::kValidation, "no --style given and none recorded in the inputs");
  auto spec = metrics::SuccessSpec::make(metrics::parse_style(style), ref.human.skeleton);
  if (meta.contains("episode_frames")) spec.required_frames = meta.at("episode_frames").get<int>();
  metrics::MetricsReport r = metrics::evaluate(exe, ref, spec);
  r.task = meta_string(meta, "name", clip_name(executed_path));
  r.mode = meta_string(meta, "mode", "none");
  r.seed = meta.value("seed", std::uint64_t{0});
  return r;
}

/// Scores executed trajectories against their reference.
inline CommandResult cmd_evaluate(const EvaluateOptions& o) {
  require(!o.executed.empty(), ErrorKind::kValidation, "no executed trajectories given");
  const HOIReference ref = load_clip(o.ref);
  const Json ref_meta = meta_or_empty(o.ref);
  CommandResult r;
  for (const auto& path : o.executed) {
    const metrics::MetricsReport rep = evaluate_file(path, ref, ref_meta, o.style);
    const std::string stem = path.filename().string().substr(0, path.filename().string().rfind(".rollout.json"));
    const fs::path json = o.out / (stem + ".report.json");
    const fs::path csv = o.out / (stem + ".report.csv");
    write_json_file(json, metrics::report_to_json(rep));
    write_text_file(csv, metrics::report_csv_header() + metrics::report_csv_row(rep));
    r.outputs.push_back(json);
    r.outputs.push_back(csv);
    std::string failed;
    for (const auto& d : rep.diagnostics)
      if (!d.passed) failed += (failed.empty() ? "" : ",") + d.name;
    r.summary += rep.task + " " + rep.mode + " seed " + std::to_string(rep.seed) + ": " +
                 (rep.success ? "success" : "failure (" + failed + ")") + "\n";
  }
  Manifest m{"evaluate"};
  m.options = {{"style", o.style}};
  m.inputs = o.executed;
  m.inputs.push_back(o.ref);
  m.outputs = r.outputs;
  write_manifest(o.out, m);
  return r;
}

// ---------------------------------------------------------------- report

struct ReportOptions {
  fs::path in;
  fs::path out;
};

/// Collects every *.report.json under a directory, in path order.
inline std::vector<fs::path> find_reports(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kIo, "'" + dir.string() + "' is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const std::string f = e.path().filename().string();
    if (e.is_regular_file() && f.size() > 12 && f.ends_with(".report.json")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Aggregates per-episode reports into imitation and quality tables.
inline CommandResult cmd_report(const ReportOptions& o) {
  const auto files = find_reports(o.in);
  require(!files.empty(), ErrorKind::kValidation, "no reports");
  std::map<std::pair<std::string, std::string>, std::vector<metrics::MetricsReport>> groups;
  std::map<std::string, std::vector<metrics::MetricsReport>> by_mode;
  std::string episodes = metrics::report_csv_header();
  for (const auto& f : files) {
    const auto rep = metrics::report_from_json(read_json_file(f));
    groups[{rep.task, rep.mode}].push_back(rep);
    by_mode[rep.mode].push_back(rep);
    episodes += metrics::report_csv_row(rep);
  }
  std::string imitation = metrics::imitation_csv_header(), quality = metrics::quality_csv_header();
  std::vector<std::pair<std::string, metrics::Summary>> table;
  for (const auto& [key, reps] : groups) {
    const auto s = metrics::aggregate(reps);
    imitation += metrics::imitation_csv_row(key.first, key.second, s);
    quality += metrics::quality_csv_row(key.first, key.second, s);
    table.emplace_back(key.first + "/" + key.second, s);
  }
  for (const auto& [mode, reps] : by_mode) {
    const auto s = metrics::aggregate(reps);
    imitation += metrics::imitation_csv_row("all", mode, s);
    quality += metrics::quality_csv_row("all", mode, s);
    table.emplace_back("all/" + mode, s);
  }
  const fs::path imitation_path = o.out / "imitation.csv";
  const fs::path quality_path = o.out / "quality.csv";
  const fs::path episodes_path = o.out / "episodes.csv";
  write_text_file(imitation_path, imitation);
  write_text_file(quality_path, quality);
  write_text_file(episodes_path, episodes);

  Manifest m{"report"};
  m.inputs = files;
  m.outputs = {imitation_path, quality_path, episodes_path};
  write_manifest(o.out, m);
  return {m.outputs, metrics::summary_table(table)};
}

// ---------------------------------------------------------------- ablate

struct AblateOptions {
  fs::path ref;
  fs::path out;
  std::vector<std::string> modes;
  std::vector<std::uint64_t> seeds;
  std::string style;  // empty: from the reference metadata
  fs::path config;
  TrainOptions train;  // budget, population, hidden, ... (paths are ignored)
};

inline std::string ablation_csv_header() { return "mode,episodes,SR,D,E_HOI,Jitter_DoF\n"; }

/// Runs every blend mode on one task and seed list; learned modes are
/// trained first when the budget is positive.
inline CommandResult cmd_ablate(const AblateOptions& o) {
  require(!o.modes.empty(), ErrorKind::kValidation, "no blend modes given");
  require(!o.seeds.empty(), ErrorKind::kValidation, "at least one seed is required");
  const HOIReference ref = load_clip(o.ref);
  const Json ref_meta = meta_or_empty(o.ref);
  const std::string style = o.style.empty() ? meta_string(ref_meta, "style") : o.style;
  require(!style.empty(), ErrorKind::kValidation, "no --style given and none recorded in the reference");
  const sim::Task task = sim::Task::make(ref, load_sim_params(o.config, ref.human.skeleton));
  auto spec = metrics::SuccessSpec::make(metrics::parse_style(style), ref.human.skeleton);
  spec.required_frames = std::min(task.model->params.config.episode_length, ref.size() - 1) + 1;
  const std::string name = clip_name(o.ref);

  CommandResult r;
  std::string csv = ablation_csv_header();
  std::vector<std::pair<std::string, metrics::Summary>> table;
  for (const auto& mode_name : o.modes) {
    const auto mode = composer::parse_blend_mode(mode_name);
    composer::ComposerParams params = task.make_params(o.train.hidden);
    if (composer::is_learned(mode) && o.train.budget > 0) {
      const Trained t = train_mode(task, mode, o.train);
      params = t.params;
      const fs::path curve = o.out / (name + "." + mode_name + ".curve.csv");
      write_text_file(curve, curve_csv(t.trace));
      r.outputs.push_back(curve);
    }
    std::vector<sim::RolloutResult> runs(o.seeds.size());
    composer::detail::parallel_for(static_cast<int>(o.seeds.size()), o.train.threads,
                                   [&](int i) { runs[i] = task.run(mode, params, o.seeds[i]); });
    std::vector<metrics::MetricsReport> reps;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      reps.push_back(metrics::evaluate(runs[i].trajectory, ref, spec));
      reps.back().task = name;
      reps.back().mode = mode_name;
      reps.back().seed = o.seeds[i];
    }
    const auto s = metrics::aggregate(reps);
    csv += mode_name + ',' + std::to_string(s.episodes) + ',' + metrics::format_number(s.sr, 3) + ',' +
           metrics::format_number(s.duration_s, 3) + ',' + metrics::format_number(s.e_hoi) + ',' +
           metrics::format_number(s.jitter_dof) + '\n';
    table.emplace_back(mode_name, s);
  }
  const fs::path path = o.out / (name + ".ablation.csv");
  write_text_file(path, csv);
  r.outputs.push_back(path);

  Manifest m{"ablate"};
  m.options = {{"modes", o.modes},
               {"seeds", o.seeds},
               {"style", style},
               {"budget", o.train.budget},
               {"population", o.train.population},
               {"elites", o.train.elites},
               {"eval_episodes", o.train.eval_episodes},
               {"train_seed", o.train.seed},
               {"hidden", o.train.hidden}};
  m.inputs = {o.ref};
  if (!o.config.empty()) m.inputs.push_back(o.config);
  m.outputs = r.outputs;
  write_manifest(o.out, m);
  r.summary = metrics::summary_table(table);
  return r;
}

}  // namespace dynhoi::pipeline
