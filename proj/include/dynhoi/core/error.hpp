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

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynhoi {

enum class ErrorKind {
  kStructural,          // shapes or counts disagree
  kValidation,          // a value violates a documented invariant
  kParse,               // malformed motion or config document
  kConfiguration,       // unusable construction parameters
  kUsage,               // caller passed data in the wrong frame/state
  kDegenerate,          // geometry admits no unique answer
  kNoInteraction,       // contact mask has no contact at all
  kIntegration,         // a plug-in (denoiser, expert) broke its contract
  kUndefinedMetric,     // metric window is empty or too short
  kSimulationDiverged,  // non-finite simulator state
  kIo,                  // file missing or unreadable
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return "structural";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kConfiguration: return "configuration";
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kNoInteraction: return "no-interaction";
    case ErrorKind::kIntegration: return "integration";
    case ErrorKind::kUndefinedMetric: return "undefined-metric";
    case ErrorKind::kSimulationDiverged: return "simulation-diverged";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace dynhoi
