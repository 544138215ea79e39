// Copyright 2026 The Overlay Authors.
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

// JSON reading and writing of instances. The document layout is described in
// docs/instance_format.md; unknown keys are rejected.

#ifndef OVERLAY_INSTANCE_IO_H_
#define OVERLAY_INSTANCE_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "overlay/model.h"

namespace overlay {

absl::StatusOr<RawInstance> RawInstanceFromJson(const nlohmann::json& doc);
nlohmann::json RawInstanceToJson(const RawInstance& raw);

// Parse + Normalize.
absl::StatusOr<Instance> ParseInstance(const std::string& text);
absl::StatusOr<Instance> LoadInstance(const std::string& path);

// Normalized form of the instance (Normalize() is the identity on it).
nlohmann::json InstanceToJson(const Instance& instance);
std::string SerializeInstance(const Instance& instance);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, const std::string& contents);

}  // namespace overlay

#endif  // OVERLAY_INSTANCE_IO_H_
