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

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dynhoi/core/motion.hpp"

namespace dynhoi {

using Json = nlohmann::json;

inline constexpr int kMotionFormatVersion = 1;

namespace detail {

inline Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
inline Json quat_json(const Quat& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }

inline double number_at(const Json& a, std::size_t i, const std::string& what) {
  if (!a.is_array() || i >= a.size() || !a[i].is_number())
    throw Error(ErrorKind::kParse, what + ": expected a number array");
  return a[i].get<double>();
}

inline Vec3 parse_vec3(const Json& a, const std::string& what) {
  if (!a.is_array() || a.size() != 3) throw Error(ErrorKind::kParse, what + ": expected 3 numbers");
  return {number_at(a, 0, what), number_at(a, 1, what), number_at(a, 2, what)};
}

inline Quat parse_quat(const Json& a, const std::string& what) {
  if (!a.is_array() || a.size() != 4) throw Error(ErrorKind::kParse, what + ": expected 4 numbers (wxyz)");
  Quat q(number_at(a, 0, what), number_at(a, 1, what), number_at(a, 2, what), number_at(a, 3, what));
  const double norm = q.norm();
  if (!(std::abs(norm - 1.0) <= kUnitQuatTolerance))
    throw Error(ErrorKind::kParse, what + ": quaternion norm " + std::to_string(norm) + " is not unit");
  return q;
}

inline const Json& field(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorKind::kParse, std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace detail

inline Json skeleton_to_json(const SkeletonSpec& sk) {
  Json joints = Json::array();
  for (const Joint& j : sk.joints) {
    joints.push_back({{"name", j.name},
                      {"parent", j.parent < 0 ? Json(nullptr) : Json(j.parent)},
                      {"offset", detail::vec_json(j.local_offset)}});
  }
  return {{"joints", joints},
          {"body_joint_count", sk.body_joint_count},
          {"hand_joint_count", sk.hand_joint_count},
          {"interaction_joints", sk.interaction_joints},
          {"foot_joints", sk.foot_joints},
          {"pelvis_joint", sk.pelvis_joint},
          {"hand_effectors", sk.hand_effectors}};
}

inline SkeletonSpec skeleton_from_json(const Json& doc) {
  SkeletonSpec sk;
  try {
    for (const Json& j : detail::field(doc, "joints")) {
      Joint jt;
      jt.name = detail::field(j, "name").get<std::string>();
      const Json& parent = detail::field(j, "parent");
      jt.parent = parent.is_null() ? -1 : parent.get<int>();
      jt.local_offset = detail::parse_vec3(detail::field(j, "offset"), "joint offset");
      sk.joints.push_back(std::move(jt));
    }
    sk.body_joint_count = detail::field(doc, "body_joint_count").get<int>();
    sk.hand_joint_count = detail::field(doc, "hand_joint_count").get<int>();
    sk.interaction_joints = detail::field(doc, "interaction_joints").get<std::vector<int>>();
    sk.foot_joints = detail::field(doc, "foot_joints").get<std::vector<int>>();
    sk.pelvis_joint = detail::field(doc, "pelvis_joint").get<int>();
    sk.hand_effectors = detail::field(doc, "hand_effectors").get<std::array<int, 2>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("skeleton: ") + e.what());
  }
  try {
    sk.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
  return sk;
}

inline Json frames_to_json(const MotionClip& clip) {
  Json frames = Json::array();
  for (const PoseFrame& f : clip.frames) {
    Json aa = Json::array();
    for (const Vec3& v : f.joint_rotations) aa.push_back(detail::vec_json(v));
    frames.push_back({{"root_pos", detail::vec_json(f.root_position)},
                      {"root_quat", detail::quat_json(f.root_rotation)},
                      {"joint_aa", aa}});
  }
  return frames;
}

inline Json motion_to_json(const MotionClip& clip, const Json& meta = Json::object()) {
  Json doc = {{"version", kMotionFormatVersion},
              {"fps", clip.fps},
              {"skeleton", skeleton_to_json(clip.skeleton)},
              {"frames", frames_to_json(clip)}};
  if (!meta.empty()) doc["meta"] = meta;
  return doc;
}

inline Json reference_to_json(const HOIReference& ref, const Json& meta = Json::object()) {
  Json doc = motion_to_json(ref.human, meta);
  Json object = Json::array();
  for (const ObjectPose& p : ref.object.poses)
    object.push_back({{"pos", detail::vec_json(p.position)}, {"quat", detail::quat_json(p.rotation)}});
  Json contacts = Json::array();
  for (const auto& c : ref.contacts.frames) contacts.push_back({c[0], c[1]});
  Json verts = Json::array();
  for (const Vec3& v : ref.object_vertices) verts.push_back(detail::vec_json(v));
  doc["object"] = object;
  doc["contacts"] = contacts;
  doc["object_vertices"] = verts;
  return doc;
}

inline MotionClip motion_from_json(const Json& doc) {
  try {
    const int version = detail::field(doc, "version").get<int>();
    require(version == kMotionFormatVersion, ErrorKind::kParse, "unsupported version " + std::to_string(version));
    MotionClip clip;
    clip.fps = detail::field(doc, "fps").get<double>();
    require(clip.fps > 0.0, ErrorKind::kParse, "fps must be positive");
    clip.skeleton = skeleton_from_json(detail::field(doc, "skeleton"));
    const Json& frames = detail::field(doc, "frames");
    require(frames.is_array(), ErrorKind::kParse, "frames must be an array");
    require(!frames.empty(), ErrorKind::kParse, "empty clip");
    const int nj = clip.skeleton.joint_count();
    for (std::size_t n = 0; n < frames.size(); ++n) {
      const std::string at = "frame " + std::to_string(n);
      const Json& f = frames[n];
      PoseFrame pf;
      pf.root_position = detail::parse_vec3(detail::field(f, "root_pos"), at + " root_pos");
      pf.root_rotation = detail::parse_quat(detail::field(f, "root_quat"), at + " root_quat");
      const Json& aa = detail::field(f, "joint_aa");
      require(aa.is_array() && static_cast<int>(aa.size()) == nj, ErrorKind::kParse,
              at + ": joint_aa must have one entry per joint");
      for (const Json& v : aa) pf.joint_rotations.push_back(detail::parse_vec3(v, at + " joint_aa"));
      clip.frames.push_back(std::move(pf));
    }
    return clip;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
}

inline HOIReference reference_from_json(const Json& doc) {
  HOIReference ref;
  ref.human = motion_from_json(doc);
  try {
    const Json& object = detail::field(doc, "object");
    for (std::size_t n = 0; n < object.size(); ++n) {
      const std::string at = "object frame " + std::to_string(n);
      ref.object.poses.push_back({detail::parse_vec3(detail::field(object[n], "pos"), at + " pos"),
                                  detail::parse_quat(detail::field(object[n], "quat"), at + " quat")});
    }
    ref.object.fps = ref.human.fps;
    for (const Json& c : detail::field(doc, "contacts")) {
      require(c.is_array() && c.size() == 2 && c[0].is_boolean() && c[1].is_boolean(), ErrorKind::kParse,
              "contacts entries must be [left, right] booleans");
      ref.contacts.frames.push_back({c[0].get<bool>(), c[1].get<bool>()});
    }
    for (const Json& v : detail::field(doc, "object_vertices"))
      ref.object_vertices.push_back(detail::parse_vec3(v, "object vertex"));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
  require(ref.object.size() == ref.human.size() && ref.contacts.size() == ref.human.size(), ErrorKind::kParse,
          "human, object and contact tracks must have equal frame counts");
  return ref;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << text;
}

inline void write_json_file(const std::filesystem::path& path, const Json& doc) {
  write_text_file(path, doc.dump(1) + "\n");
}

inline HOIReference load_clip(const std::filesystem::path& path) { return reference_from_json(read_json_file(path)); }

inline void save_clip(const HOIReference& ref, const std::filesystem::path& path, const Json& meta = Json::object()) {
  write_json_file(path, reference_to_json(ref, meta));
}

inline MotionClip load_motion(const std::filesystem::path& path) { return motion_from_json(read_json_file(path)); }

inline void save_motion(const MotionClip& clip, const std::filesystem::path& path, const Json& meta = Json::object()) {
  write_json_file(path, motion_to_json(clip, meta));
}

/// Optional "meta" block of a motion document.
inline Json read_meta(const std::filesystem::path& path) {
  Json doc = read_json_file(path);
  auto it = doc.find("meta");
  return it == doc.end() ? Json::object() : *it;
}

}  // namespace dynhoi
