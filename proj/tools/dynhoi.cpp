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

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynhoi/pipeline/commands.hpp"

namespace fs = std::filesystem;
using namespace dynhoi;

namespace {

constexpr const char* kOutEnv = "DYNHOI_OUT";

CLI::Option* add_out(CLI::App* cmd, fs::path& out) {
  return cmd->add_option("--out,-o", out, std::string("Output directory (default: $") + kOutEnv + " or .)")
      ->envname(kOutEnv);
}

CLI::Option* add_ref(CLI::App* cmd, fs::path& ref) {
  return cmd->add_option("--ref", ref, "Reference HOI clip (.json)")->required();
}

void add_threads(CLI::App* cmd, int& threads) {
  cmd->add_option("--threads", threads, "Worker threads for independent rollouts")->check(CLI::Range(1, 256));
}

void add_hidden(CLI::App* cmd, std::vector<int>& hidden) {
  cmd->add_option("--hidden", hidden, "Composer hidden layer widths")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic human-object interaction planning and execution pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pipeline::kToolVersion));

  pipeline::DemoOptions demo{"."};
  auto* c_demo = app.add_subcommand("demo", "Write the bundled synthetic reference clips");
  add_out(c_demo, demo.out);

  pipeline::PlanOptions plan{.out = "."};
  auto* c_plan = app.add_subcommand("plan", "Sample a dynamic motion with interaction-consistent inpainting");
  add_ref(c_plan, plan.ref);
  add_out(c_plan, plan.out);
  c_plan->add_option("--onset-delay", plan.onset_delay_s, "Seconds after first contact where planning starts")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_plan->add_option("--steps", plan.steps, "Denoising steps")->check(CLI::PositiveNumber)->capture_default_str();
  c_plan->add_option("--seed", plan.seed, "Sampling seed")->capture_default_str();
  c_plan->add_option("--joints", plan.joint_set, "Frozen joint set: interaction, arms, all, none")
      ->capture_default_str();
  c_plan->add_option("--condition", plan.condition, "Conditioning token")->capture_default_str();
  c_plan->add_option("--smoothing", plan.smoothing, "Toy prior smoothing (frames)")->capture_default_str();
  c_plan->add_option("--library-seed", plan.library_seed, "Seed of the toy motion library")->capture_default_str();

  pipeline::AlignOptions align{.out = "."};
  auto* c_align = app.add_subcommand("align", "Recover the object track of a planned motion");
  add_ref(c_align, align.ref);
  c_align->add_option("--motion", align.motion, "Planned motion (.plan.json)")->required();
  add_out(c_align, align.out);
  c_align->add_option("--anchors", align.anchors.count, "Anchors per contacting hand")
      ->check(CLI::Range(3, 64))
      ->capture_default_str();
  c_align->add_option("--anchor-size", align.anchors.square_size, "Anchor square edge (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  pipeline::RolloutOptions rollout{.out = "."};
  auto* c_rollout = app.add_subcommand("rollout", "Execute a reference in the simulator under a blend mode");
  add_ref(c_rollout, rollout.ref);
  add_out(c_rollout, rollout.out);
  c_rollout->add_option("--blend", rollout.blend, "Blend mode")->capture_default_str();
  c_rollout->add_option("--params", rollout.params, "Trained composer parameters");
  c_rollout->add_option("--config", rollout.config, "Simulator parameters (.json)");
  c_rollout->add_option("--seeds", rollout.seeds, "Episode seeds")->delimiter(',');
  add_hidden(c_rollout, rollout.hidden);
  add_threads(c_rollout, rollout.threads);

  pipeline::TrainOptions train{.out = "."};
  auto* c_train = app.add_subcommand("train", "Train composer parameters with the cross-entropy method");
  add_ref(c_train, train.ref);
  add_out(c_train, train.out);
  c_train->add_option("--blend", train.blend, "Learned blend mode")->capture_default_str();
  c_train->add_option("--config", train.config, "Simulator parameters (.json)");
  c_train->add_option("--budget", train.budget, "Optimisation iterations")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_train->add_option("--population", train.population, "Candidates per iteration")->capture_default_str();
  c_train->add_option("--elites", train.elites, "Elite candidates kept per iteration")->capture_default_str();
  c_train->add_option("--eval-episodes", train.eval_episodes, "Held-out episodes for the return estimate")
      ->capture_default_str();
  c_train->add_option("--seed", train.seed, "Optimiser seed")->capture_default_str();
  add_hidden(c_train, train.hidden);
  add_threads(c_train, train.threads);

  pipeline::EvaluateOptions evaluate{.out = "."};
  auto* c_eval = app.add_subcommand("evaluate", "Score executed trajectories against their reference");
  c_eval->add_option("executed", evaluate.executed, "Executed trajectories (.rollout.json)")->required();
  add_ref(c_eval, evaluate.ref);
  add_out(c_eval, evaluate.out);
  c_eval->add_option("--style", evaluate.style,
                     "run_forward, jump_forward, high_kick or dance (default: from metadata)");

  pipeline::ReportOptions report{.out = "."};
  auto* c_report = app.add_subcommand("report", "Aggregate a directory of reports into result tables");
  c_report->add_option("--in", report.in, "Directory searched recursively for *.report.json")->required();
  add_out(c_report, report.out);

  pipeline::AblateOptions ablate{.out = "."};
  ablate.modes = {"mlp_pca", "mlp", "hard_moe", "hard_moe_joint", "heuristic_hand", "heuristic_arm"};
  ablate.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  auto* c_ablate = app.add_subcommand("ablate", "Train and evaluate several blend modes on one task");
  add_ref(c_ablate, ablate.ref);
  add_out(c_ablate, ablate.out);
  c_ablate->add_option("--blend", ablate.modes, "Blend modes, comma separated")->delimiter(',')->capture_default_str();
  c_ablate->add_option("--seeds", ablate.seeds, "Evaluation seeds")->delimiter(',');
  c_ablate->add_option("--style", ablate.style, "Success style (default: from metadata)");
  c_ablate->add_option("--config", ablate.config, "Simulator parameters (.json)");
  c_ablate->add_option("--budget", ablate.train.budget, "Optimisation iterations per learned mode")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_ablate->add_option("--population", ablate.train.population, "Candidates per iteration")->capture_default_str();
  c_ablate->add_option("--seed", ablate.train.seed, "Optimiser seed")->capture_default_str();
  add_hidden(c_ablate, ablate.train.hidden);
  add_threads(c_ablate, ablate.train.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return pipeline::exit_code(ErrorKind::kUsage);
  }

  try {
    pipeline::CommandResult r;
    if (*c_demo) r = pipeline::cmd_demo(demo);
    else if (*c_plan) r = pipeline::cmd_plan(plan);
    else if (*c_align) r = pipeline::cmd_align(align);
    else if (*c_rollout) r = pipeline::cmd_rollout(rollout);
    else if (*c_train) r = pipeline::cmd_train(train);
    else if (*c_eval) r = pipeline::cmd_evaluate(evaluate);
    else if (*c_report) r = pipeline::cmd_report(report);
    else if (*c_ablate) r = pipeline::cmd_ablate(ablate);
    std::cout << r.summary;
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pipeline::exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return pipeline::exit_code(ErrorKind::kIo);
  }
}
