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

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynhoi/metrics/quality.hpp"

namespace dynhoi::metrics {

enum class Style { kRunForward, kJumpForward, kHighKick, kDance };

inline constexpr std::array<std::pair<Style, std::string_view>, 4> kStyleNames{{
    {Style::kRunForward, "run_forward"},
    {Style::kJumpForward, "jump_forward"},
    {Style::kHighKick, "high_kick"},
    {Style::kDance, "dance"},
}};

inline std::string to_string(Style s) {
  for (const auto& [style, name] : kStyleNames)
    if (style == s) return std::string(name);
  return "unknown";
}

inline Style parse_style(std::string_view name) {
  for (const auto& [style, n] : kStyleNames)
    if (n == name) return style;
  throw Error(ErrorKind::kValidation, "unknown style '" + std::string(name) + "'");
}

/// Pelvis height of the rest pose standing on the ground.
inline double t_pose_pelvis_height(const SkeletonSpec& sk) {
  const auto pos = joint_positions(sk, PoseFrame::rest(sk));
  double lowest = 0.0;
  for (const Vec3& p : pos) lowest = std::min(lowest, p.z());
  return pos[sk.pelvis_joint].z() - lowest;
}

struct SuccessSpec {
  Style style = Style::kDance;
  double speed_margin = 0.5;        // m/s below the reference peak horizontal pelvis speed
  double height_gain_ratio = 0.5;   // fraction of the reference pelvis height gain
  int false_contact_limit = 10;     // false foot-floor contacts must stay below this
  double kick_margin = 0.05;        // m below the reference peak foot height
  double min_pelvis_height = 0.3;   // m
  double object_path_tolerance = 0.3;  // m
  double t_pose_pelvis_height = 0.0;   // m; reference for pelvis height gain
  int required_frames = 0;          // executed frames needed to count as finished; 0 means the reference length
  FootContactSpec feet;

  static SuccessSpec make(Style style, const SkeletonSpec& sk) {
    SuccessSpec s;
    s.style = style;
    s.t_pose_pelvis_height = metrics::t_pose_pelvis_height(sk);
    return s;
  }

  void validate() const {
    require(speed_margin > 0 && height_gain_ratio > 0 && false_contact_limit > 0 && kick_margin > 0 &&
                min_pelvis_height > 0 && object_path_tolerance > 0,
            ErrorKind::kConfiguration, "success thresholds must be positive");
    require(required_frames >= 0, ErrorKind::kConfiguration, "required_frames must be non-negative");
  }
};

struct Diagnostic {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct SuccessResult {
  bool success = false;
  std::vector<Diagnostic> diagnostics;

  const Diagnostic* find(std::string_view name) const {
    for (const auto& d : diagnostics)
      if (d.name == name) return &d;
    return nullptr;
  }
  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& d : diagnostics)
      if (!d.passed) out.push_back(d.name);
    return out;
  }
};

namespace detail {

inline double max_horizontal_speed(const std::vector<std::vector<Vec3>>& pos, int joint, double fps) {
  double best = 0.0;
  for (std::size_t n = 1; n < pos.size(); ++n)
    best = std::max(best, (pos[n][joint] - pos[n - 1][joint]).head<2>().norm() * fps);
  return best;
}

inline double max_height(const std::vector<std::vector<Vec3>>& pos, const std::vector<int>& joints) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& frame : pos)
    for (int j : joints) best = std::max(best, frame[j].z());
  return best;
}

}  // namespace detail

/// Style criterion plus object tracking. The executed trajectory may be a
/// prefix of the reference (early termination); it is compared frame by
/// frame against the matching reference frames.
inline SuccessResult success(const HOIReference& executed, const HOIReference& reference, const SuccessSpec& spec) {
  spec.validate();
  require(executed.size() >= 1 && executed.size() <= reference.size(), ErrorKind::kStructural,
          "executed trajectory must be a non-empty prefix of the reference");
  require(executed.object.size() == executed.size(), ErrorKind::kStructural, "object track length differs");
  const SkeletonSpec& sk = reference.human.skeleton;
  const int pelvis = sk.pelvis_joint;
  const auto exe = clip_joint_positions(executed.human);
  const auto ref = clip_joint_positions(reference.human);
  SuccessResult out;
  auto add = [&out](std::string name, double value, double threshold, bool passed) {
    out.diagnostics.push_back({std::move(name), value, threshold, passed});
  };

  switch (spec.style) {
    case Style::kRunForward: {
      const double peak = detail::max_horizontal_speed(exe, pelvis, executed.human.fps);
      const double need = detail::max_horizontal_speed(ref, pelvis, reference.human.fps) - spec.speed_margin;
      add("pelvis_speed", peak, need, peak >= need);
      break;
    }
    case Style::kJumpForward: {
      const double z_t = spec.t_pose_pelvis_height;
      const double gain = detail::max_height(exe, {pelvis}) - z_t;
      const double ref_gain = detail::max_height(ref, {pelvis}) - z_t;
      // A reference that never rises above the standing height has no gain
      // to share; the rollout then only has to reach the reference's peak.
      const bool rises = ref_gain > 0.0;
      add("height_gain", rises ? gain / ref_gain : gain - ref_gain, rises ? spec.height_gain_ratio : 0.0,
          rises ? gain >= spec.height_gain_ratio * ref_gain : gain >= ref_gain);
      const auto c = foot_contacts(executed.human, spec.feet);
      const auto c_ref = foot_contacts(reference.human, spec.feet);
      int false_contacts = 0;
      for (std::size_t f = 0; f < c.size(); ++f)
        for (int n = 0; n < executed.size(); ++n) false_contacts += c[f][n] && !c_ref[f][n] ? 1 : 0;
      add("false_contacts", false_contacts, spec.false_contact_limit, false_contacts < spec.false_contact_limit);
      break;
    }
    case Style::kHighKick: {
      const double peak = detail::max_height(exe, sk.foot_joints);
      const double need = detail::max_height(ref, sk.foot_joints) - spec.kick_margin;
      add("foot_height", peak, need, peak >= need);
      break;
    }
    case Style::kDance: {
      double lowest = std::numeric_limits<double>::infinity();
      for (const auto& f : exe) lowest = std::min(lowest, f[pelvis].z());
      add("min_pelvis_height", lowest, spec.min_pelvis_height, lowest >= spec.min_pelvis_height);
      break;
    }
  }

  double worst = 0.0;
  for (int n = 0; n < executed.size(); ++n)
    worst = std::max(worst, (executed.object.poses[n].position - reference.object.poses[n].position).norm());
  add("object_path", worst, spec.object_path_tolerance, worst <= spec.object_path_tolerance);
  const int required = spec.required_frames > 0 ? std::min(spec.required_frames, reference.size()) : reference.size();
  add("completed", executed.size(), required, executed.size() >= required);

  out.success = true;
  for (const auto& d : out.diagnostics) out.success = out.success && d.passed;
  return out;
}

}  // namespace dynhoi::metrics
