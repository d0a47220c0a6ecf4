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

#include <cmath>
#include <string>
#include <vector>

#include "dynhoi/core/io.hpp"
#include "dynhoi/core/skeleton.hpp"

namespace dynhoi::sim {

struct SimConfig {
  double sim_dt = 1.0 / 60.0;
  double control_dt = 1.0 / 30.0;
  int substeps = 2;  // integrator substeps per sim step
  int episode_length = 300;
  double ground_friction = 1.0;
  double ground_restitution = 0.0;  // only inelastic (penalty-damped) contact is modelled
  double object_density = 200.0;  // kg/m^3
  double gravity = 9.81;          // m/s^2, along -z

  double body_mass = 60.0;                    // kg, lumped at the pelvis
  Vec3 body_inertia = Vec3(10.0, 10.0, 3.0);  // principal moments, kg m^2
  double torque_limit_body = 200.0;           // N m
  double torque_limit_hand = 20.0;            // N m; hand DoFs here are grip commands

  double contact_stiffness = 30000.0;  // N/m per contact point
  double contact_damping = 800.0;      // N s/m per contact point
  double friction_stiffness = 10000.0;
  double friction_damping = 200.0;
  double object_contact_stiffness = 500.0;  // per vertex, per kg of object mass
  double object_contact_damping = 40.0;

  double attach_radius = 0.05;  // m
  double grip_threshold = 0.5;
  double fall_height = 0.3;     // pelvis height that ends an episode
  double drop_distance = 0.3;   // object distance from the reference path that ends an episode

  double init_angular_noise = 0.05;  // rad/s, std of the initial root spin
  double init_linear_noise = 0.02;   // m/s, std of the initial root velocity

  int sim_steps_per_control() const { return static_cast<int>(std::lround(control_dt / sim_dt)); }
  double substep_dt() const { return sim_dt / substeps; }

  void validate() const {
    require(sim_dt > 0.0 && control_dt > 0.0, ErrorKind::kConfiguration, "time steps must be positive");
    const double ratio = control_dt / sim_dt;
    require(std::abs(ratio - std::round(ratio)) < 1e-9 && ratio >= 1.0, ErrorKind::kConfiguration,
            "control_dt must be an integer multiple of sim_dt");
    require(substeps >= 1, ErrorKind::kConfiguration, "substeps must be at least 1");
    require(episode_length > 0, ErrorKind::kConfiguration, "episode_length must be positive");
    require(ground_friction >= 0.0 && object_density > 0.0 && body_mass > 0.0, ErrorKind::kConfiguration,
            "friction, density and mass must be positive");
    require(ground_restitution == 0.0, ErrorKind::kConfiguration, "ground_restitution other than 0 is not supported");
    require((body_inertia.array() > 0.0).all(), ErrorKind::kConfiguration, "body inertia must be positive");
    require(torque_limit_body > 0.0 && torque_limit_hand > 0.0, ErrorKind::kConfiguration,
            "torque limits must be positive");
  }
};

/// Per-joint PD gains plus the joint's reflected inertia. Indexed by skeleton
/// joint; the root entry is unused.
struct PDGains {
  std::vector<double> kp;
  std::vector<double> kd;
  std::vector<double> inertia;

  int size() const { return static_cast<int>(kp.size()); }

  void validate(const SkeletonSpec& sk) const {
    require(size() == sk.joint_count() && static_cast<int>(kd.size()) == size() &&
                static_cast<int>(inertia.size()) == size(),
            ErrorKind::kConfiguration, "gain tables must have one entry per joint");
    for (int j = 0; j < size(); ++j) {
      require(kp[j] >= 0.0 && kd[j] >= 0.0, ErrorKind::kConfiguration, "gains must be non-negative");
      require(inertia[j] > 0.0, ErrorKind::kConfiguration, "joint inertia must be positive");
    }
  }
};

/// Critically damped gains with a common natural frequency; stiffness by
/// joint group.
inline PDGains default_gains(const SkeletonSpec& sk, double omega = 25.0) {
  PDGains g;
  for (int j = 0; j < sk.joint_count(); ++j) {
    const std::string& n = sk.joints[j].name;
    double kp = 300.0;
    if (n.find("hip") != std::string::npos || n.find("knee") != std::string::npos) kp = 800.0;
    else if (n.find("ankle") != std::string::npos) kp = 500.0;
    else if (n == "spine" || n == "thorax") kp = 600.0;
    else if (n == "neck") kp = 100.0;
    else if (n.find("shoulder") != std::string::npos) kp = 300.0;
    else if (n.find("elbow") != std::string::npos) kp = 200.0;
    else if (n.find("wrist") != std::string::npos || n.find("hand") != std::string::npos) kp = 100.0;
    g.kp.push_back(kp);
    g.kd.push_back(2.0 * kp / omega);
    g.inertia.push_back(kp / (omega * omega));
  }
  return g;
}

/// Per-joint, per-axis limits in degrees.
struct RangeOfMotion {
  std::vector<Vec3> min_deg;
  std::vector<Vec3> max_deg;

  void validate(const SkeletonSpec& sk) const {
    require(static_cast<int>(min_deg.size()) == sk.joint_count() && max_deg.size() == min_deg.size(),
            ErrorKind::kConfiguration, "range-of-motion table must have one entry per joint");
    for (std::size_t j = 0; j < min_deg.size(); ++j)
      require((min_deg[j].array() <= max_deg[j].array()).all(), ErrorKind::kConfiguration,
              "range of motion has min > max for joint " + sk.joints[j].name);
  }

  double clamp(int joint, int axis, double rad) const {
    constexpr double kDeg = kPi / 180.0;
    return std::clamp(rad, min_deg[joint](axis) * kDeg, max_deg[joint](axis) * kDeg);
  }
};

/// Every body joint may move +-180 degrees about each axis.
inline RangeOfMotion default_range_of_motion(const SkeletonSpec& sk) {
  RangeOfMotion r;
  r.min_deg.assign(sk.joint_count(), Vec3::Constant(-180.0));
  r.max_deg.assign(sk.joint_count(), Vec3::Constant(180.0));
  return r;
}

/// Finger rows of the full articulated-hand limit table, kept for
/// configurations that instantiate articulated hands: {x_min, x_max, yz_min, yz_max}.
struct FingerLimit {
  const char* joint;
  double x_min, x_max, yz_min, yz_max;
};

inline constexpr FingerLimit kFingerLimits[] = {
    {"thumb1", -55.625, 55.625, -55.625, 55.625}, {"thumb2", -5.625, 5.625, -5.625, 5.625},
    {"thumb3", -5.625, 90.0, -5.625, 5.625},      {"index1", -55.625, 55.625, -5.625, 5.625},
    {"index2", -55.625, 55.625, -5.625, 5.625},   {"index3", -5.625, 90.0, -5.625, 5.625},
    {"middle1", -55.625, 55.625, -5.625, 5.625},  {"middle2", -55.625, 55.625, -5.625, 5.625},
    {"middle3", -5.625, 90.0, -5.625, 5.625},     {"ring1", -55.625, 55.625, -5.625, 5.625},
    {"ring2", -55.625, 55.625, -5.625, 5.625},    {"ring3", -5.625, 90.0, -5.625, 5.625},
    {"pinky1", -55.625, 55.625, -5.625, 5.625},   {"pinky2", -55.625, 55.625, -5.625, 5.625},
    {"pinky3", -5.625, 90.0, -5.625, 5.625},
};

struct RewardWeights {
  double joint_scale = 100.0;  // 1/m^2
  double object_scale = 50.0;  // 1/m^2
  double joint_weight = 1.0;
  double object_weight = 1.0;
  double contact_bonus = 0.5;

  double max_reward() const { return joint_weight + object_weight + contact_bonus; }
};

struct SimParams {
  SimConfig config;
  PDGains gains;
  RangeOfMotion rom;
  RewardWeights reward;

  static SimParams defaults(const SkeletonSpec& sk) {
    return {SimConfig{}, default_gains(sk), default_range_of_motion(sk), RewardWeights{}};
  }

  void validate(const SkeletonSpec& sk) const {
    config.validate();
    gains.validate(sk);
    rom.validate(sk);
  }
};

namespace detail {
inline Json vec_list(const std::vector<Vec3>& v) {
  Json a = Json::array();
  for (const Vec3& x : v) a.push_back({x.x(), x.y(), x.z()});
  return a;
}
inline std::vector<Vec3> parse_vec_list(const Json& a) {
  std::vector<Vec3> out;
  for (const Json& x : a) out.push_back(dynhoi::detail::parse_vec3(x, "range of motion"));
  return out;
}
}  // namespace detail

inline Json params_to_json(const SimParams& p) {
  const SimConfig& c = p.config;
  Json cfg = {{"sim_dt", c.sim_dt},
              {"control_dt", c.control_dt},
              {"substeps", c.substeps},
              {"episode_length", c.episode_length},
              {"ground_friction", c.ground_friction},
              {"ground_restitution", c.ground_restitution},
              {"object_density", c.object_density},
              {"gravity", c.gravity},
              {"body_mass", c.body_mass},
              {"body_inertia", {c.body_inertia.x(), c.body_inertia.y(), c.body_inertia.z()}},
              {"torque_limit_body", c.torque_limit_body},
              {"torque_limit_hand", c.torque_limit_hand},
              {"contact_stiffness", c.contact_stiffness},
              {"contact_damping", c.contact_damping},
              {"friction_stiffness", c.friction_stiffness},
              {"friction_damping", c.friction_damping},
              {"object_contact_stiffness", c.object_contact_stiffness},
              {"object_contact_damping", c.object_contact_damping},
              {"attach_radius", c.attach_radius},
              {"grip_threshold", c.grip_threshold},
              {"fall_height", c.fall_height},
              {"drop_distance", c.drop_distance},
              {"init_angular_noise", c.init_angular_noise},
              {"init_linear_noise", c.init_linear_noise}};
  return {{"sim", cfg},
          {"gains", {{"kp", p.gains.kp}, {"kd", p.gains.kd}, {"inertia", p.gains.inertia}}},
          {"range_of_motion", {{"min_deg", detail::vec_list(p.rom.min_deg)}, {"max_deg", detail::vec_list(p.rom.max_deg)}}},
          {"reward",
           {{"joint_scale", p.reward.joint_scale},
            {"object_scale", p.reward.object_scale},
            {"joint_weight", p.reward.joint_weight},
            {"object_weight", p.reward.object_weight},
            {"contact_bonus", p.reward.contact_bonus}}}};
}

/// Missing keys keep their defaults, so a config file may override a subset.
inline SimParams params_from_json(const Json& doc, const SkeletonSpec& sk) {
  SimParams p = SimParams::defaults(sk);
  try {
    if (doc.contains("sim")) {
      const Json& s = doc.at("sim");
      SimConfig& c = p.config;
      auto get = [&s](const char* key, auto& field) {
        if (s.contains(key)) field = s.at(key).get<std::decay_t<decltype(field)>>();
      };
      get("sim_dt", c.sim_dt);
      get("control_dt", c.control_dt);
      get("substeps", c.substeps);
      get("episode_length", c.episode_length);
      get("ground_friction", c.ground_friction);
      get("ground_restitution", c.ground_restitution);
      get("object_density", c.object_density);
      get("gravity", c.gravity);
      get("body_mass", c.body_mass);
      if (s.contains("body_inertia")) c.body_inertia = dynhoi::detail::parse_vec3(s.at("body_inertia"), "body_inertia");
      get("torque_limit_body", c.torque_limit_body);
      get("torque_limit_hand", c.torque_limit_hand);
      get("contact_stiffness", c.contact_stiffness);
      get("contact_damping", c.contact_damping);
      get("friction_stiffness", c.friction_stiffness);
      get("friction_damping", c.friction_damping);
      get("object_contact_stiffness", c.object_contact_stiffness);
      get("object_contact_damping", c.object_contact_damping);
      get("attach_radius", c.attach_radius);
      get("grip_threshold", c.grip_threshold);
      get("fall_height", c.fall_height);
      get("drop_distance", c.drop_distance);
      get("init_angular_noise", c.init_angular_noise);
      get("init_linear_noise", c.init_linear_noise);
    }
    if (doc.contains("gains")) {
      const Json& g = doc.at("gains");
      if (g.contains("kp")) p.gains.kp = g.at("kp").get<std::vector<double>>();
      if (g.contains("kd")) p.gains.kd = g.at("kd").get<std::vector<double>>();
      if (g.contains("inertia")) p.gains.inertia = g.at("inertia").get<std::vector<double>>();
    }
    if (doc.contains("range_of_motion")) {
      const Json& r = doc.at("range_of_motion");
      p.rom.min_deg = detail::parse_vec_list(r.at("min_deg"));
      p.rom.max_deg = detail::parse_vec_list(r.at("max_deg"));
    }
    if (doc.contains("reward")) {
      const Json& r = doc.at("reward");
      auto get = [&r](const char* key, double& field) {
        if (r.contains(key)) field = r.at(key).get<double>();
      };
      get("joint_scale", p.reward.joint_scale);
      get("object_scale", p.reward.object_scale);
      get("joint_weight", p.reward.joint_weight);
      get("object_weight", p.reward.object_weight);
      get("contact_bonus", p.reward.contact_bonus);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfiguration, std::string("sim config: ") + e.what());
  }
  p.validate(sk);
  return p;
}

}  // namespace dynhoi::sim
